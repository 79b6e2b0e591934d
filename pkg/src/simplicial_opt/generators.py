"""Generators for classical, toy entangled, and random simplicial theories.

All randomness flows through a seeded :class:`random.Random`, so outputs are
reproducible from ``seed`` alone.
"""
from __future__ import annotations

import random
import string
from fractions import Fraction

from . import exact
from .composition import CompositionRule, Theory
from .exact import ONE, ZERO
from .system import FULL_DUAL, RestrictedCone, SystemSpace

DEFAULT_MAX_DEN = 16


def _names(n):
    letters = string.ascii_uppercase
    if n <= len(letters):
        return list(letters[:n])
    return [f"S{t}" for t in range(1, n + 1)]


def random_distribution(rng: random.Random, size: int, max_den: int = DEFAULT_MAX_DEN) -> tuple:
    """Strictly positive rationals with denominators <= ``max_den`` summing to one."""
    if size < 1:
        raise ValueError("size must be positive")
    if size == 1:
        return (ONE,)
    if size > max_den:
        raise ValueError(f"cannot split 1 into {size} positive parts with denominator <= {max_den}")
    q = rng.randint(size, max_den)
    cuts = sorted(rng.sample(range(1, q), size - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [q])]
    return tuple(Fraction(x, q) for x in parts)


def product_rule(name: str, left: SystemSpace, right: SystemSpace) -> CompositionRule:
    """Classical composition: every product of vertices is a vertex."""
    blocks = {(i, j): (ONE,) for i in range(1, left.dim + 1) for j in range(1, right.dim + 1)}
    return CompositionRule.canonical(name, left, right, blocks)


def random_rule(rng: random.Random, name: str, left: SystemSpace, right: SystemSpace,
                delta: int, max_den: int = DEFAULT_MAX_DEN) -> CompositionRule:
    """Assign ``delta`` extra vertices to random blocks, then draw random weights."""
    if delta < 0:
        raise ValueError("excess dimension must be nonnegative")
    keys = [(i, j) for i in range(1, left.dim + 1) for j in range(1, right.dim + 1)]
    sizes = dict.fromkeys(keys, 1)
    for _ in range(delta):
        sizes[rng.choice([k for k in keys if sizes[k] < max_den])] += 1
    return CompositionRule.canonical(
        name, left, right, {k: random_distribution(rng, sizes[k], max_den) for k in keys}
    )


def add_bracketings(t: Theory, a: str, b: str, c: str, rule=None):
    """Declare ``(ab)c`` and ``a(bc)`` on top of existing rules for ``ab`` and ``bc``.

    ``rule(name, left, right)`` builds each new rule; products by default.
    """
    rule = rule or product_rule
    ab, bc = t.rule_for(a, b).system, t.rule_for(b, c).system
    left = t.add_rule(rule(f"({ab.name}){c}", ab, t.system(c)))
    right = t.add_rule(rule(f"{a}({bc.name})", t.system(a), bc))
    return left, right


def generate_ct(dims) -> Theory:
    """Classical theory: full-dual systems and product composites for every pair.

    Each run of three consecutive systems also gets both bracketings, so
    associativity and three-factor discriminability can be checked.
    """
    dims = list(dims)
    if not dims:
        raise ValueError("dims must be nonempty")
    t = Theory()
    systems = [t.add_system(SystemSpace(n, d)) for n, d in zip(_names(len(dims)), dims)]
    for a in range(len(systems)):
        for b in range(a + 1, len(systems)):
            left, right = systems[a], systems[b]
            t.add_rule(product_rule(left.name + right.name, left, right))
    for a, b, c in zip(systems, systems[1:], systems[2:]):
        add_bracketings(t, a.name, b.name, c.name)
    return t


def generate_toy(d_a: int, d_b: int, delta: int, seed=0, max_den: int = DEFAULT_MAX_DEN) -> Theory:
    """Two full-dual systems and one composite of excess dimension ``delta >= 1``."""
    if delta < 1:
        raise ValueError("toy theories need delta >= 1 (delta = 0 is the classical product)")
    rng = random.Random(seed)
    t = Theory()
    a = t.add_system(SystemSpace("A", d_a))
    b = t.add_system(SystemSpace("B", d_b))
    t.add_rule(random_rule(rng, "AB", a, b, delta, max_den))
    return t


def t5_theory() -> Theory:
    """Two bits composed into five vertices; only ``|1>|1>`` splits, evenly."""
    t = Theory()
    a = t.add_system(SystemSpace("A", 2))
    b = t.add_system(SystemSpace("B", 2))
    half = Fraction(1, 2)
    t.add_rule(CompositionRule.canonical(
        "AB", a, b, {(1, 1): (half, half), (1, 2): (ONE,), (2, 1): (ONE,), (2, 2): (ONE,)}
    ))
    return t


# --------------------------------------------------------------------------
# restricted effect models


def _indicator(dim, members):
    return tuple(ONE if v in members else ZERO for v in range(1, dim + 1))


def random_cone_system(rng: random.Random, name: str, dim: int,
                       max_den: int = DEFAULT_MAX_DEN) -> SystemSpace:
    """Restricted system whose generators include a partition of the vertex set.

    The partition indicators sum to the all-ones functional, so a
    deterministic effect always exists; the remaining generators are random
    box vectors.
    """
    verts = list(range(1, dim + 1))
    rng.shuffle(verts)
    n_groups = rng.randint(1, dim)
    cuts = sorted(rng.sample(range(1, dim), n_groups - 1)) if n_groups > 1 else []
    groups = [verts[a:b] for a, b in zip([0] + cuts, cuts + [dim])]
    gens = [_indicator(dim, g) for g in groups]
    for _ in range(rng.randint(0, 3)):
        den = rng.randint(1, max_den)
        gens.append(tuple(Fraction(rng.randint(0, den), den) for _ in range(dim)))
    return SystemSpace(name, dim, RestrictedCone(tuple(gens)))


def random_noisy_system(rng: random.Random, name: str, n_discriminated: int, n_noisy: int) -> SystemSpace:
    """Non-classical restricted system whose maximal discriminable set is ``1..n_discriminated``.

    Every generator touching a vertex beyond ``n_discriminated`` also fires on
    one of the first ``n_discriminated`` vertices, so those extra vertices can
    never be singled out; the first ones are discriminated by ``f_i`` and
    ``f_i + (indicator of the extra vertices)``.
    """
    if n_discriminated < 1 or n_noisy < 1:
        raise ValueError("need at least one discriminated and one noisy vertex")
    dim = n_discriminated + n_noisy
    noisy = list(range(n_discriminated + 1, dim + 1))
    gens = []
    for i in range(1, n_discriminated + 1):
        gens.append(_indicator(dim, {i}))
        gens.append(_indicator(dim, {i, *noisy}))
    for _ in range(rng.randint(0, 2)):
        i = rng.randint(1, n_discriminated)
        subset = {k for k in noisy if rng.random() < 0.5}
        gens.append(_indicator(dim, {i} | subset))
    return SystemSpace(name, dim, RestrictedCone(tuple(dict.fromkeys(gens))))


def generate_random(seed=0, max_den: int = DEFAULT_MAX_DEN, max_dim: int = 4,
                    n_systems=None, restricted_prob: float = 0.3) -> Theory:
    """Random theory: 2-3 systems and composites for each ordered pair ``a < b``."""
    rng = random.Random(seed)
    n = n_systems or rng.randint(2, 3)
    t = Theory()
    systems = []
    for name in _names(n):
        dim = rng.randint(1, max_dim)
        if dim >= 2 and rng.random() < restricted_prob:
            s = random_cone_system(rng, name, dim, max_den)
        else:
            s = SystemSpace(name, dim)
        systems.append(t.add_system(s))
    for a in range(n):
        for b in range(a + 1, n):
            delta = rng.choice([0, 0, 1, 2, 3])
            left, right = systems[a], systems[b]
            t.add_rule(random_rule(rng, left.name + right.name, left, right, delta, max_den))
    return t
