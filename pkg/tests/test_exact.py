from fractions import Fraction as F
from itertools import combinations

import pytest

from simplicial_opt import exact
from simplicial_opt.errors import DimensionMismatch
from simplicial_opt.exact import LPProblem, lp_feasible, lp_maximize, lp_minimize, rank, solve


def test_rank_examples():
    assert rank([(1, 0), (0, 1)]) == 2
    assert rank([(0,) * 4] * 3) == 0
    assert rank([(1, 1), (2, 2)]) == 1


def test_rank_rational_entries():
    assert rank([(F(1, 2), F(1, 3)), (F(3, 2), 1)]) == 1
    assert rank([(F(1, 2), F(1, 3)), (F(3, 2), F(1, 7))]) == 2
    assert rank([]) == 0


def test_rank_ragged():
    with pytest.raises(DimensionMismatch):
        rank([(1, 2), (1,)])


def test_solve_unique_and_inconsistent():
    x, nullity = solve([(2, 1), (1, 3)], (3, 4))
    assert x == (1, 1) and nullity == 0
    assert solve([(1, 1), (2, 2)], (1, 3)) is None
    x, nullity = solve([(1, 1)], (F(1, 2),))
    assert nullity == 1 and x[0] + x[1] == F(1, 2)


@pytest.mark.parametrize("text,value", [("3", F(3)), ("-2/6", F(-1, 3)), (" 7/2 ", F(7, 2))])
def test_parse_rational(text, value):
    assert exact.parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.5", "1e3", "1_000", "1/0", "", "1/2/3", "a"])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        exact.parse_rational(text)


def test_format_rational():
    assert exact.format_rational(F(4, 2)) == "2"
    assert exact.format_rational(F(-3, 6)) == "-1/2"


def test_lp_point_feasible():
    p = LPProblem.nonnegative(1)
    p.add_eq([1], 1)
    res = lp_feasible(p)
    assert res.feasible and res.witness == (1,)


def test_lp_negative_rhs_infeasible():
    p = LPProblem.nonnegative(1)
    p.add_eq([1], -1)
    res = lp_feasible(p)
    assert not res.feasible
    assert p.is_farkas_certificate(res.certificate)


def test_lp_simplex_cut_infeasible():
    p = LPProblem.nonnegative(2)
    p.add_eq([1, 1], 1)
    p.add_ge([1, 0], 2)
    res = lp_feasible(p)
    assert not res.feasible and p.is_farkas_certificate(res.certificate)


def test_lp_free_variables():
    p = LPProblem(2)
    p.add_eq([1, 1], 0)
    p.add_le([1, 0], -3)
    res = lp_feasible(p)
    assert res.feasible and res.witness[0] <= -3 and sum(res.witness) == 0


def test_certificate_checker_rejects_wrong_signs():
    p = LPProblem.nonnegative(1)
    p.add_le([1], 1)
    # a <= row may not carry a negative multiplier
    assert not p.is_farkas_certificate((F(-1),))
    assert not p.is_farkas_certificate((F(1), F(0)))


def test_lp_optimise():
    p = LPProblem.nonnegative(2)
    p.add_le([1, 2], 4)
    p.add_le([3, 1], 6)
    hi = lp_maximize(p, [1, 1])
    assert hi.status == "optimal" and hi.value == F(14, 5)
    lo = lp_minimize(p, [1, 1])
    assert lo.value == 0


def test_lp_unbounded_and_infeasible_objective():
    p = LPProblem.nonnegative(1)
    assert lp_maximize(p, [1]).status == "unbounded"
    p.add_eq([1], -1)
    assert lp_minimize(p, [1]).status == "infeasible"


def test_lp_redundant_rows():
    p = LPProblem.nonnegative(2)
    p.add_eq([1, 1], 1)
    p.add_eq([2, 2], 2)
    res = lp_maximize(p, [1, 0])
    assert res.value == 1


def test_lp_degenerate_no_cycling():
    # classic Beale example cycles under the textbook rule; Bland's rule terminates
    p = LPProblem.nonnegative(4)
    p.add_le([F(1, 4), -60, F(-1, 25), 9], 0)
    p.add_le([F(1, 2), -90, F(-1, 50), 3], 0)
    p.add_le([0, 0, 1, 0], 1)
    res = lp_maximize(p, [F(3, 4), -150, F(1, 50), -6])
    assert res.status == "optimal" and res.value == F(1, 20)


def _vertex_optimum(p, objective):
    """Brute force for bounded 2-variable problems: best feasible pairwise line intersection."""
    lines = [(c.coeffs, c.rhs) for c in p.constraints] + [((1, 0), 0), ((0, 1), 0)]
    best = None
    for (a, r), (b, s) in combinations(lines, 2):
        hit = solve([a, b], (r, s))
        if hit is None or hit[1]:
            continue
        x = hit[0]
        if p.is_satisfied_by(x):
            val = exact.dot(objective, x)
            best = val if best is None else max(best, val)
    return best


@pytest.mark.parametrize("objective", [(2, 1), (1, 0), (0, 1), (-1, 3), (1, -1)])
def test_lp_matches_vertex_enumeration(objective):
    p = LPProblem.nonnegative(2)
    p.add_le([1, 1], 3)
    p.add_le([2, -1], 2)
    p.add_ge([0, 1], F(1, 2))
    objective = exact.vec(objective)
    assert lp_maximize(p, objective).value == _vertex_optimum(p, objective)


def test_vector_helpers():
    assert exact.basis_vector(3, 2) == (0, 1, 0)
    with pytest.raises(IndexError):
        exact.basis_vector(2, 3)
    assert exact.dot((1, 2), (3, 4)) == 11
    with pytest.raises(DimensionMismatch):
        exact.add((1,), (1, 2))
