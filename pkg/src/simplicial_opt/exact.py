"""Exact rational linear algebra and a Bland's-rule simplex solver.

Scalars are :class:`fractions.Fraction`; vectors are tuples of fractions and
matrices are sequences of such tuples.  Nothing in this module touches
floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Optional, Sequence

from .errors import DimensionMismatch

Rational = Fraction
RVector = tuple  # tuple[Fraction, ...]
RMatrix = Sequence[RVector]

ZERO = Fraction(0)
ONE = Fraction(1)

try:  # tableau arithmetic; results are always handed back as Fractions
    from gmpy2 import mpq as _Q

    def _F(x) -> Fraction:
        return Fraction(int(x.numerator), int(x.denominator))
except ImportError:  # pragma: no cover
    _Q = Fraction

    def _F(x) -> Fraction:
        return x


# --------------------------------------------------------------------------
# scalars and vectors


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (also accepts ints and Fractions)."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string, got {text!r}")
    s = text.strip()
    if not s or any(c in s for c in ".eE_ ") or s.count("/") > 1:
        raise ValueError(f"not an exact rational: {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec(values: Iterable) -> RVector:
    return tuple(parse_rational(v) if isinstance(v, str) else Fraction(v) for v in values)


def zeros(n: int) -> RVector:
    return (ZERO,) * n


def basis_vector(n: int, j: int) -> RVector:
    """Standard basis vector with a 1 in 1-based position ``j``."""
    if not 1 <= j <= n:
        raise IndexError(f"basis index {j} outside 1..{n}")
    return tuple(ONE if t == j - 1 else ZERO for t in range(n))


def dot(u: RVector, v: RVector) -> Fraction:
    if len(u) != len(v):
        raise DimensionMismatch(f"dot of lengths {len(u)} and {len(v)}")
    return sum((a * b for a, b in zip(u, v)), ZERO)


def add(u: RVector, v: RVector) -> RVector:
    if len(u) != len(v):
        raise DimensionMismatch(f"add of lengths {len(u)} and {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def scale(c, u: RVector) -> RVector:
    c = Fraction(c)
    return tuple(c * a for a in u)


# --------------------------------------------------------------------------
# rank and linear solve


def _integer_rows(m: RMatrix) -> list[list[int]]:
    rows = []
    for row in m:
        row = [Fraction(x) for x in row]
        den = math.lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * den) for x in row])
    return rows


def rank(m: RMatrix) -> int:
    """Exact rank via fraction-free (Bareiss) elimination over the integers."""
    a = _integer_rows(m)
    if not a or not a[0]:
        return 0
    ncols = len(a[0])
    if any(len(r) != ncols for r in a):
        raise DimensionMismatch("ragged matrix")
    nrows = len(a)
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                # exact division is guaranteed by Sylvester's identity
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == nrows:
            break
    return r


def solve(m: RMatrix, b: RVector):
    """Solve ``m x = b`` exactly.

    Returns ``(x, nullity)`` with ``x`` one particular solution (free variables
    set to zero), or ``None`` when the system is inconsistent.
    """
    rows = [list(map(Fraction, r)) + [Fraction(bi)] for r, bi in zip(m, b)]
    if len(rows) != len(m) or len(b) != len(m):
        raise DimensionMismatch("right-hand side length differs from row count")
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    x = [ZERO] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    return tuple(x), ncols - len(pivots)


# --------------------------------------------------------------------------
# linear programming

Sense = Literal["<=", ">=", "="]


@dataclass(frozen=True)
class Constraint:
    coeffs: RVector
    rhs: Fraction
    sense: Sense = "="

    def holds(self, x: RVector) -> bool:
        lhs = dot(self.coeffs, x)
        if self.sense == "=":
            return lhs == self.rhs
        if self.sense == "<=":
            return lhs <= self.rhs
        return lhs >= self.rhs


@dataclass
class LPProblem:
    """Feasibility problem over ``n`` rational variables.

    ``nonneg`` lists the (0-based) variables constrained to be ``>= 0``; all
    others are free.
    """

    n: int
    equalities: list = field(default_factory=list)
    inequalities: list = field(default_factory=list)
    nonneg: frozenset = frozenset()

    def __post_init__(self):
        self.nonneg = frozenset(self.nonneg)
        for c in self.constraints:
            if len(c.coeffs) != self.n:
                raise DimensionMismatch(
                    f"constraint of length {len(c.coeffs)} in a problem with {self.n} variables"
                )
        if any(not 0 <= j < self.n for j in self.nonneg):
            raise DimensionMismatch("nonneg mask refers to a missing variable")

    @classmethod
    def nonnegative(cls, n: int) -> "LPProblem":
        return cls(n, nonneg=frozenset(range(n)))

    @property
    def constraints(self) -> list:
        return list(self.equalities) + list(self.inequalities)

    def add_eq(self, coeffs, rhs):
        c = Constraint(vec(coeffs), Fraction(rhs), "=")
        if len(c.coeffs) != self.n:
            raise DimensionMismatch(f"equality of length {len(c.coeffs)}, expected {self.n}")
        self.equalities.append(c)

    def add_le(self, coeffs, rhs):
        self._add_ineq(coeffs, rhs, "<=")

    def add_ge(self, coeffs, rhs):
        self._add_ineq(coeffs, rhs, ">=")

    def _add_ineq(self, coeffs, rhs, sense):
        c = Constraint(vec(coeffs), Fraction(rhs), sense)
        if len(c.coeffs) != self.n:
            raise DimensionMismatch(f"inequality of length {len(c.coeffs)}, expected {self.n}")
        self.inequalities.append(c)

    def is_satisfied_by(self, x: RVector) -> bool:
        if len(x) != self.n:
            return False
        if any(x[j] < 0 for j in self.nonneg):
            return False
        return all(c.holds(x) for c in self.constraints)

    def is_farkas_certificate(self, y: RVector) -> bool:
        """Check a dual vector proving infeasibility.

        ``y`` has one multiplier per constraint, ordered as :attr:`constraints`.
        Multipliers of ``<=`` rows must be >= 0, of ``>=`` rows <= 0.  The
        combination ``sum y_r a_r`` must vanish on free variables and be
        nonnegative on nonnegative ones, while ``sum y_r b_r < 0``: any
        feasible x would then give ``0 <= (sum y_r a_r) x <= sum y_r b_r < 0``.
        """
        cons = self.constraints
        if len(y) != len(cons):
            return False
        for yr, c in zip(y, cons):
            if c.sense == "<=" and yr < 0:
                return False
            if c.sense == ">=" and yr > 0:
                return False
        comb = [ZERO] * self.n
        for yr, c in zip(y, cons):
            if yr:
                for j, a in enumerate(c.coeffs):
                    comb[j] += yr * a
        for j, cj in enumerate(comb):
            if j in self.nonneg:
                if cj < 0:
                    return False
            elif cj != 0:
                return False
        return sum((yr * c.rhs for yr, c in zip(y, cons)), ZERO) < 0


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    witness: Optional[RVector] = None
    certificate: Optional[RVector] = None

    def __bool__(self):
        return self.feasible


@dataclass(frozen=True)
class LPResult:
    status: Literal["optimal", "infeasible", "unbounded"]
    value: Optional[Fraction] = None
    x: Optional[RVector] = None
    certificate: Optional[RVector] = None


class _StandardForm:
    """``A z = b, z >= 0, b >= 0`` derived from an :class:`LPProblem`."""

    def __init__(self, p: LPProblem):
        self.p = p
        # column layout: one column per nonneg var, two per free var, then slacks
        self.var_cols = []
        ncol = 0
        for j in range(p.n):
            if j in p.nonneg:
                self.var_cols.append((ncol, None))
                ncol += 1
            else:
                self.var_cols.append((ncol, ncol + 1))
                ncol += 2
        cons = p.constraints
        n_slack = sum(1 for c in cons if c.sense != "=")
        self.ncols = ncol + n_slack
        self.rows = []
        self.rhs = []
        self.flip = []
        self.slack_of_row = []
        s = ncol
        for c in cons:
            self.slack_of_row.append(s if c.sense != "=" else None)
            row = [ZERO] * self.ncols
            for j, a in enumerate(c.coeffs):
                pos, neg = self.var_cols[j]
                row[pos] = a
                if neg is not None:
                    row[neg] = -a
            if c.sense == "<=":
                row[s] = ONE
                s += 1
            elif c.sense == ">=":
                row[s] = -ONE
                s += 1
            sign = -1 if c.rhs < 0 else 1
            self.flip.append(sign)
            self.rows.append([sign * a for a in row])
            self.rhs.append(sign * c.rhs)

    def recover(self, z) -> RVector:
        out = []
        for pos, neg in self.var_cols:
            out.append(z[pos] - (z[neg] if neg is not None else ZERO))
        return tuple(out)

    def objective(self, c: RVector) -> list:
        obj = [ZERO] * self.ncols
        for j, cj in enumerate(c):
            pos, neg = self.var_cols[j]
            obj[pos] = cj
            if neg is not None:
                obj[neg] = -cj
        return obj


class _Tableau:
    def __init__(self, rows, rhs, basis, cost):
        self.T = rows
        self.b = rhs
        self.basis = basis
        self.set_cost(cost)

    def set_cost(self, cost):
        self.cost = list(cost)
        r = list(cost)
        for i, bv in enumerate(self.basis):
            cb = cost[bv]
            if cb:
                for j, x in enumerate(self.T[i]):
                    if x:
                        r[j] -= cb * x
        self.reduced = r
        self.value = sum((cost[bv] * self.b[i] for i, bv in enumerate(self.basis)), _Q(0))

    def pivot(self, r, c):
        row = self.T[r]
        inv = 1 / row[c]
        nz = [j for j, x in enumerate(row) if x]
        for j in nz:
            row[j] *= inv
        self.b[r] *= inv
        br = self.b[r]
        for i, other in enumerate(self.T):
            if i != r:
                f = other[c]
                if f:
                    for j in nz:
                        other[j] -= f * row[j]
                    self.b[i] -= f * br
        f = self.reduced[c]
        if f:
            red = self.reduced
            for j in nz:
                red[j] -= f * row[j]
            self.value += f * br
        self.basis[r] = c

    def run(self, allowed) -> bool:
        """Minimise with Bland's rule. Returns False on unboundedness."""
        while True:
            enter = next((j for j in allowed if self.reduced[j] < 0), None)
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.T):
                a = row[enter]
                if a > 0:
                    key = (self.b[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter)


def _solve(p: LPProblem, objective: Optional[RVector]):
    sf = _StandardForm(p)
    m, n = len(sf.rows), sf.ncols
    # rows whose slack enters with +1 start from the slack; the rest get artificials
    start_col = []
    n_art = 0
    for i in range(m):
        s = sf.slack_of_row[i]
        if s is not None and sf.rows[i][s] == 1:
            start_col.append(s)
        else:
            start_col.append(n + n_art)
            n_art += 1
    rows = []
    for i, r in enumerate(sf.rows):
        row = [_Q(x) for x in r] + [_Q(0)] * n_art
        if start_col[i] >= n:
            row[start_col[i]] = _Q(1)
        rows.append(row)
    cost = [_Q(0)] * n + [_Q(1)] * n_art
    tab = _Tableau(rows, [_Q(x) for x in sf.rhs], list(start_col), cost)
    tab.run(range(n + n_art))
    if tab.value > 0:
        # phase-I duals y = c_B B^{-1}; B^{-1} sits in the starting identity columns
        y = [sum((cost[bv] * tab.T[r][start_col[i]] for r, bv in enumerate(tab.basis)), _Q(0))
             for i in range(m)]
        cert = tuple(-_F(yi) * s for yi, s in zip(y, sf.flip))
        assert p.is_farkas_certificate(cert), "internal error: invalid Farkas certificate"
        return sf, tab, cert
    # drive zero-level artificials out of the basis; drop redundant rows
    for r in reversed(range(len(tab.basis))):
        if tab.basis[r] >= n:
            c = next((j for j in range(n) if tab.T[r][j] != 0), None)
            if c is not None:
                tab.pivot(r, c)
            else:
                del tab.T[r], tab.b[r], tab.basis[r]
    tab.T = [row[:n] for row in tab.T]
    tab.reduced = tab.reduced[:n]
    tab.cost = tab.cost[:n]
    return sf, tab, None


def _basic_solution(sf, tab) -> RVector:
    z = [ZERO] * sf.ncols
    for i, bv in enumerate(tab.basis):
        z[bv] = _F(tab.b[i])
    return sf.recover(z)


def lp_feasible(p: LPProblem) -> Feasibility:
    """Decide feasibility exactly, with a witness or a Farkas certificate."""
    sf, tab, cert = _solve(p, None)
    if cert is not None:
        return Feasibility(False, certificate=cert)
    x = _basic_solution(sf, tab)
    assert p.is_satisfied_by(x), "internal error: witness violates constraints"
    return Feasibility(True, witness=x)


def lp_minimize(p: LPProblem, objective: RVector) -> LPResult:
    """Minimise ``objective . x`` over the feasible set of ``p``."""
    objective = vec(objective)
    if len(objective) != p.n:
        raise DimensionMismatch(f"objective of length {len(objective)}, expected {p.n}")
    sf, tab, cert = _solve(p, objective)
    if cert is not None:
        return LPResult("infeasible", certificate=cert)
    tab.set_cost([_Q(c) for c in sf.objective(objective)])
    if not tab.run(range(sf.ncols)):
        return LPResult("unbounded")
    x = _basic_solution(sf, tab)
    assert p.is_satisfied_by(x)
    return LPResult("optimal", value=dot(objective, x), x=x)


def lp_maximize(p: LPProblem, objective: RVector) -> LPResult:
    res = lp_minimize(p, scale(-1, vec(objective)))
    if res.status != "optimal":
        return res
    return LPResult("optimal", value=-res.value, x=res.x)
