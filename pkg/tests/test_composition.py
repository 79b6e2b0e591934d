from fractions import Fraction as F
from itertools import product

import pytest

from conftest import HALF
from simplicial_opt.composition import (CompositionRule, Side, Theory, compose_effects, compose_nfold,
                                        compose_states, excess_dimension, marginalize, validate_rule)
from simplicial_opt.errors import MissingRule, SystemMismatch, TheoryValidationError
from simplicial_opt.generators import generate_ct, product_rule, random_rule
from simplicial_opt.system import SystemSpace, deterministic_effect, pair

A, B = SystemSpace("A", 2), SystemSpace("B", 2)


def clauses(r):
    return {v.clause for v in validate_rule(r).violations}


def test_ct_rule_valid(ct_rule):
    assert validate_rule(ct_rule).valid
    assert ct_rule.dim == 4 and all(len(ks) == 1 for ks in ct_rule.blocks.values())


def test_t5_rule_valid_by_enumeration(t5_rule):
    assert validate_rule(t5_rule).valid
    seen = sorted(k for ks in t5_rule.blocks.values() for k in ks)
    assert seen == [1, 2, 3, 4, 5]
    assert t5_rule.blocks[(1, 1)] == (1, 2) and t5_rule.weights[(1, 1)] == (HALF, HALF)


def test_overlapping_blocks():
    r = CompositionRule("X", A, B, 4, {(1, 1): (1,), (1, 2): (1,), (2, 1): (3,), (2, 2): (4,)},
                        {key: (1,) for key in [(1, 1), (1, 2), (2, 1), (2, 2)]})
    assert "blocks not disjoint" in clauses(r)
    assert "blocks do not cover" in clauses(r)


@pytest.mark.parametrize("weights,clause", [
    ((HALF, F(1, 3)), "weights sum ≠ 1"),
    ((F(3, 2), -HALF), "non-positive weight"),
])
def test_bad_weights(weights, clause):
    blocks = {(1, 1): (1, 2), (1, 2): (3,), (2, 1): (4,), (2, 2): (5,)}
    ws = {(1, 1): weights, (1, 2): (1,), (2, 1): (1,), (2, 2): (1,)}
    assert clause in clauses(CompositionRule("X", A, B, 5, blocks, ws))


def test_small_composite_and_missing_block():
    r = CompositionRule("X", A, B, 3, {(1, 1): (1,), (1, 2): (2,), (2, 1): (3,)},
                        {(1, 1): (1,), (1, 2): (1,), (2, 1): (1,)})
    assert {"composite dimension below product", "missing block"} <= clauses(r)


def test_compose_states_t5(t5_rule):
    a, b = t5_rule.left, t5_rule.right
    assert compose_states(t5_rule, a.vertex(1), b.vertex(1)).coords == (HALF, HALF, 0, 0, 0)
    assert compose_states(t5_rule, a.vertex(2), b.vertex(2)).coords == (0, 0, 0, 0, 1)
    assert compose_states(t5_rule, a.state((HALF, HALF)), b.vertex(1)).coords == (F(1, 4), F(1, 4), 0, F(1, 2), 0)


def test_compose_states_matches_bilinear_expansion(t5_rule):
    # brute force: sum over vertex pairs rho_i sigma_j |i>|j>
    a, b = t5_rule.left, t5_rule.right
    rho, sigma = a.state((F(1, 3), F(1, 2))), b.state((F(1, 5), F(3, 5)))
    total = [F(0)] * 5
    for i, j in product((1, 2), (1, 2)):
        prod_ij = compose_states(t5_rule, a.vertex(i), b.vertex(j)).coords
        total = [t + rho.coords[i - 1] * sigma.coords[j - 1] * x for t, x in zip(total, prod_ij)]
    assert compose_states(t5_rule, rho, sigma).coords == tuple(total)


def test_compose_effects(t5_rule):
    a, b = t5_rule.left, t5_rule.right
    e = compose_effects(t5_rule, deterministic_effect(a), deterministic_effect(b))
    assert e.coords == (1,) * 5
    ab = t5_rule.system
    assert pair(compose_effects(t5_rule, a.dual_basis(1), b.dual_basis(1)), ab.vertex(1)) == 1
    assert pair(compose_effects(t5_rule, a.dual_basis(1), b.dual_basis(2)), ab.vertex(2)) == 0


def test_compose_rejects_wrong_system(t5_rule):
    with pytest.raises(SystemMismatch):
        compose_states(t5_rule, t5_rule.right.vertex(1), SystemSpace("Q", 2).vertex(1))


def test_marginalize(t5_rule):
    a, b = t5_rule.left, t5_rule.right
    assert marginalize(t5_rule, t5_rule.system.vertex(1), Side.LEFT) == a.vertex(1)
    prod_state = compose_states(t5_rule, a.vertex(1), b.vertex(1))
    assert marginalize(t5_rule, prod_state, Side.LEFT) == a.vertex(1)
    assert marginalize(t5_rule, t5_rule.system.null_state(), Side.RIGHT) == b.null_state()


def test_marginal_by_summation(t5_rule):
    # <e|_B applied to each vertex sums the refinement weights by left index
    for k in range(1, 6):
        i, j, _ = t5_rule.refinement[k]
        assert marginalize(t5_rule, t5_rule.system.vertex(k), Side.LEFT) == t5_rule.left.vertex(i)
        assert marginalize(t5_rule, t5_rule.system.vertex(k), Side.RIGHT) == t5_rule.right.vertex(j)


def test_excess_dimension(ct_rule, t5_rule):
    import random
    assert excess_dimension(ct_rule) == 0
    assert excess_dimension(t5_rule) == 1
    r = random_rule(random.Random(0), "X", SystemSpace("A", 3), SystemSpace("B", 2), 5)
    assert r.dim == 11 and excess_dimension(r) == 5


def test_compose_nfold_ct():
    t = generate_ct([2, 2, 2])
    node = compose_nfold(t, ["A", "B", "C"])
    assert node.dim == 8 and [s.name for s in node.leaves] == ["A", "B", "C"]


def test_compose_nfold_single_and_missing(t5):
    assert compose_nfold(t5, ["A"]).system == t5.system("A")
    with pytest.raises(MissingRule):
        compose_nfold(t5, ["A", "B", "A"])
    t5.add_rule(product_rule("(AB)A", t5.system("AB"), t5.system("A")))
    assert compose_nfold(t5, ["A", "B", "A"]).dim == 10


def test_theory_rejects_duplicates(t5):
    with pytest.raises(TheoryValidationError):
        t5.add_system(SystemSpace("A", 3))
    with pytest.raises(TheoryValidationError):
        t5.add_rule(product_rule("AB2", t5.system("A"), t5.system("B")))


def test_theory_rejects_invalid_rule():
    t = Theory()
    a, b = t.add_system(A), t.add_system(B)
    bad = CompositionRule("AB", a, b, 4, {(1, 1): (1,), (1, 2): (1,), (2, 1): (3,), (2, 2): (4,)},
                          {key: (1,) for key in [(1, 1), (1, 2), (2, 1), (2, 2)]})
    with pytest.raises(TheoryValidationError):
        t.add_rule(bad)
