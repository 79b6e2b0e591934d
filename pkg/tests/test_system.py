from fractions import Fraction as F
from itertools import product

import pytest

from conftest import restricted
from simplicial_opt.errors import DimensionMismatch, NoDeterministicEffect, SystemMismatch
from simplicial_opt.system import (StateKind, SystemSpace, classify_state, deterministic_effect,
                                   is_effect, pair)


def test_pair_dual_basis():
    s = SystemSpace("A", 2)
    assert pair(s.dual_basis(1), s.vertex(1)) == 1
    assert pair(s.dual_basis(1), s.vertex(2)) == 0


def test_pair_linearity():
    s = SystemSpace("A", 2)
    assert pair(deterministic_effect(s), s.state((F(1, 3), F(1, 3)))) == F(2, 3)


def test_pair_system_mismatch():
    a, b = SystemSpace("A", 2), SystemSpace("B", 2)
    with pytest.raises(SystemMismatch):
        pair(a.dual_basis(1), b.vertex(1))


def test_deterministic_effect_full_dual():
    assert deterministic_effect(SystemSpace("A", 3)).coords == (1, 1, 1)


def test_deterministic_effect_generator(half_cone):
    assert deterministic_effect(half_cone).coords == (1, 1)


def test_no_deterministic_effect():
    with pytest.raises(NoDeterministicEffect):
        deterministic_effect(restricted(2, (F(1, 2), F(1, 2))))


@pytest.mark.parametrize("coords,kind,vertex", [
    ((0, 0), StateKind.NULL, None),
    ((1, 0), StateKind.PURE_VERTEX, 1),
    ((F(1, 2), F(1, 2)), StateKind.DETERMINISTIC_MIXED, None),
    ((0, F(1, 3)), StateKind.SUBNORMALIZED_ATOMIC, 2),
    ((F(1, 4), F(1, 3)), StateKind.SUBNORMALIZED_MIXED, None),
])
def test_classify_state(coords, kind, vertex):
    cls = classify_state(SystemSpace("A", 2).state(coords))
    assert cls.kind is kind and cls.vertex == vertex


def test_state_validation():
    s = SystemSpace("A", 2)
    with pytest.raises(ValueError):
        s.state((F(2, 3), F(2, 3)))
    with pytest.raises(ValueError):
        s.state((-1, 1))
    with pytest.raises(DimensionMismatch):
        s.state((1,))


def test_is_effect_full_dual():
    s = SystemSpace("A", 2)
    assert is_effect(s, (F(1, 2), 1))[0]
    assert not is_effect(s, (F(3, 2), 0))[0]


def test_is_effect_restricted_rejects_with_certificate(half_cone):
    from simplicial_opt.system import cone_problem
    ok, cert = is_effect(half_cone, (0, 1))
    assert not ok
    assert cone_problem(half_cone.effect_model.generators, {0: F(0), 1: F(1)}).is_farkas_certificate(cert)


def test_is_effect_restricted_oracle(half_cone):
    # independent oracle: (x, y) = c1 (1,1) + c2 (1,0) forces c1 = y, c2 = x - y
    grid = [F(n, 4) for n in range(5)]
    for x, y in product(grid, grid):
        expected = 0 <= x - y <= 1 and 0 <= y <= 1
        assert is_effect(half_cone, (x, y))[0] == expected, (x, y)


def test_restricted_generators_validated():
    with pytest.raises(ValueError):
        restricted(2, (2, 0))
    with pytest.raises(ValueError):
        restricted(2, (1, 0, 0))
