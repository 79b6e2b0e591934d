from fractions import Fraction

import pytest

from simplicial_opt.composition import CompositionRule, Theory
from simplicial_opt.generators import generate_ct, product_rule, t5_theory
from simplicial_opt.system import RestrictedCone, SystemSpace

F = Fraction
HALF = F(1, 2)


def restricted(dim, *gens, name="R"):
    return SystemSpace(name, dim, RestrictedCone(tuple(tuple(F(x) for x in g) for g in gens)))


@pytest.fixture
def t5():
    return t5_theory()


@pytest.fixture
def t5_rule(t5):
    return t5.rule("AB")


@pytest.fixture
def ct():
    return generate_ct([2, 2])


@pytest.fixture
def ct_rule(ct):
    return ct.rule("AB")


@pytest.fixture
def half_cone():
    """Generators (1,1) and (1,0): deterministic effect exists, not classical."""
    return restricted(2, (1, 1), (1, 0))


@pytest.fixture
def noisy3():
    """D = 3 with maximal discriminable set {1, 2}; vertex 3 can never be singled out."""
    return restricted(3, (1, 0, 0), (1, 0, 1), (0, 1, 0), (0, 1, 1), name="N")


def t5_triple():
    """Bits A, B, C with AB = T5, BC product, and both bracketings declared consistently."""
    t = t5_theory()
    c = t.add_system(SystemSpace("C", 2))
    a, b = t.system("A"), t.system("B")
    bc = t.add_rule(product_rule("BC", b, c)).system
    ab = t.system("AB")
    t.add_rule(product_rule("(AB)C", ab, c))
    blocks = {}
    for i in (1, 2):
        for m in range(1, 5):
            # BC vertices 1, 2 are |1>_B|1>_C and |1>_B|2>_C: those pair with |1>_A into T5's split block
            blocks[(i, m)] = (HALF, HALF) if i == 1 and m <= 2 else (F(1),)
    t.add_rule(CompositionRule.canonical("A(BC)", a, bc, blocks))
    return t
