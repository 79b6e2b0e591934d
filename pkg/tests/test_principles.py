from fractions import Fraction as F

import pytest

from conftest import HALF, restricted
from simplicial_opt.analysis import jointly_discriminable
from simplicial_opt.composition import Side, marginalize
from simplicial_opt.errors import InvalidDistribution, NotDeterministic, NotMaximal
from simplicial_opt.generators import generate_ct
from simplicial_opt.principles import (Mode, check_purification, check_superposition,
                                       is_maximal_discriminable, maximal_discriminable_set)
from simplicial_opt.system import SystemSpace


def test_maximal_set_full_dual():
    assert maximal_discriminable_set(SystemSpace("A", 3)) == [1, 2, 3]


def test_maximal_set_restricted(half_cone):
    assert maximal_discriminable_set(half_cone) == [1]
    assert is_maximal_discriminable(half_cone, [2])
    assert not jointly_discriminable(half_cone, [1, 2]).feasible


def test_maximal_set_is_discriminable(noisy3):
    dset = maximal_discriminable_set(noisy3)
    assert dset == [1, 2]
    assert jointly_discriminable(noisy3, dset).feasible
    assert not jointly_discriminable(noisy3, [1, 2, 3]).feasible


def test_classical_bit_ultraweak_fails():
    v = check_superposition(SystemSpace("A", 2), [1, 2], (HALF, HALF), Mode.ULTRAWEAK)
    assert v.holds is False
    assert str(v).startswith("FAILS")


def test_point_mass_strong_holds():
    s = SystemSpace("A", 2)
    v = check_superposition(s, [1, 2], (1, 0), Mode.STRONG)
    assert v.holds is True and v.witness_vertex == 1


def test_restricted_weak_fails_with_counterexample(noisy3):
    p = (F(1, 3), F(2, 3))
    v = check_superposition(noisy3, [1, 2], p, Mode.WEAK)
    assert v.holds is False
    obs = v.observation
    assert obs.is_valid()
    assert obs.to_json()["free_weights"] == {"3": ["1", "0"]}
    # re-evaluate: no vertex reproduces p under the counterexample
    assert all(obs.outcome_distribution(k) != p for k in (1, 2, 3))


def test_restricted_ultraweak_can_hold(noisy3):
    v = check_superposition(noisy3, [1, 2], (F(1, 3), F(2, 3)), "ultraweak")
    assert v.holds is True and v.witness_vertex == 3
    assert v.observation.outcome_distribution(3) == (F(1, 3), F(2, 3))


def test_superposition_vacuous():
    v = check_superposition(SystemSpace("A", 1), [1], (1,), Mode.WEAK)
    assert v.vacuous and v.holds is None


def test_superposition_input_errors(noisy3):
    with pytest.raises(InvalidDistribution):
        check_superposition(noisy3, [1, 2], (HALF, F(1, 3)), Mode.WEAK)
    with pytest.raises(InvalidDistribution):
        check_superposition(noisy3, [1, 2], (F(3, 2), -HALF), Mode.WEAK)
    with pytest.raises(NotMaximal):
        check_superposition(noisy3, [1], (1,), Mode.WEAK)


def test_purification_of_vertex(t5):
    res = check_purification(t5, t5.system("A").vertex(1), "B")
    assert res.purifiable and res.witness_vertex in (1, 2, 3)
    r = t5.rule(res.composite)
    assert marginalize(r, r.system.vertex(res.witness_vertex), Side.LEFT) == t5.system("A").vertex(1)


def test_mixed_not_purifiable(t5):
    res = check_purification(t5, t5.system("A").state((HALF, HALF)))
    assert not res.purifiable and res.scanned == 5


def test_ct_mixed_not_purifiable():
    t = generate_ct([2, 2, 2])
    for name in "ABC":
        assert not check_purification(t, t.system(name).state((HALF, HALF))).purifiable


def test_purification_requires_normalised(t5):
    with pytest.raises(NotDeterministic):
        check_purification(t5, t5.system("A").state((HALF, 0)))
