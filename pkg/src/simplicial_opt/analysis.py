"""Decision procedures for entanglement, causality, classicality and friends.

Every procedure returns a small result object carrying the evidence behind
its verdict (a witness, a certificate, or the offending indices) so callers
can re-check answers with exact arithmetic.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import exact
from .composition import (CompositeSystem, CompositionRule, Theory, compose_nfold,
                          compose_states, excess_dimension, product_vertex)
from .errors import (NoDeterministicEffect, NonUniqueDeterministicEffect, OPTError,
                     SystemMismatch, TooManyFactors)
from .exact import ONE, ZERO, LPProblem
from .system import EffectVector, StateVector, SystemSpace, is_effect


# --------------------------------------------------------------------------
# separability


@dataclass(frozen=True)
class SeparabilityCertificate:
    separable: bool
    lambdas: Optional[dict] = None  # (i, j) -> coefficient of |i>|j>
    violating_block: Optional[tuple] = None
    inconsistent_indices: Optional[tuple] = None
    ratios: Optional[tuple] = None

    def __str__(self):
        if self.separable:
            terms = ", ".join(f"{k}: {exact.format_rational(v)}"
                              for k, v in self.lambdas.items() if v)
            return f"Separable({{{terms}}})"
        k1, k2 = self.inconsistent_indices
        r1, r2 = self.ratios
        return (f"Entangled(block {self.violating_block}, vertices {k1} and {k2} "
                f"with ratios {exact.format_rational(r1)} vs {exact.format_rational(r2)})")


def is_separable(r: CompositionRule, omega: StateVector) -> SeparabilityCertificate:
    """Closed-form test: ``omega`` is separable iff it is block-proportional to the weights."""
    if omega.system != r.system:
        raise SystemMismatch(f"state on {omega.system.name!r}, rule is for {r.name!r}")
    lambdas = {}
    for key, ks in r.blocks.items():
        ws = r.weights[key]
        k0 = ks[0]
        ratio0 = omega.coords[k0 - 1] / ws[0]
        for k, w in zip(ks[1:], ws[1:]):
            ratio = omega.coords[k - 1] / w
            if ratio != ratio0:
                return SeparabilityCertificate(False, violating_block=key,
                                               inconsistent_indices=(k0, k),
                                               ratios=(ratio0, ratio))
        lambdas[key] = ratio0
    return SeparabilityCertificate(True, lambdas=lambdas)


def reconstruct(r: CompositionRule, lambdas: dict) -> tuple:
    """``sum_ij lambda_ij |i>|j>`` as composite coordinates."""
    out = exact.zeros(r.dim)
    for (i, j), lam in lambdas.items():
        out = exact.add(out, exact.scale(lam, product_vertex(r, i, j).coords))
    return out


def separable_by_lp(r: CompositionRule, omega: StateVector) -> exact.Feasibility:
    """Independent oracle: cone membership of ``omega`` over all products of vertices."""
    if omega.system != r.system:
        raise SystemMismatch(f"state on {omega.system.name!r}, rule is for {r.name!r}")
    pairs = [(i, j) for i in range(1, r.left.dim + 1) for j in range(1, r.right.dim + 1)]
    columns = [product_vertex(r, i, j).coords for i, j in pairs]
    p = LPProblem.nonnegative(len(pairs))
    for k in range(r.dim):
        p.add_eq([col[k] for col in columns], omega.coords[k])
    return exact.lp_feasible(p)


@dataclass(frozen=True)
class EntanglementResult:
    present: bool
    witness_vertex: Optional[int] = None
    certificate: Optional[SeparabilityCertificate] = None

    def __bool__(self):
        return self.present


def entanglement_present(r: CompositionRule) -> EntanglementResult:
    """Entangled states exist iff some product of vertices is refined by several vertices.

    The witness is the lowest vertex of the lexicographically first oversized block.
    """
    for key, ks in r.blocks.items():
        if len(ks) >= 2:
            k = ks[0]
            cert = is_separable(r, r.system.vertex(k))
            assert not cert.separable, f"vertex {k} of an oversized block came out separable"
            return EntanglementResult(True, k, cert)
    return EntanglementResult(False)


# --------------------------------------------------------------------------
# causality and classicality


@dataclass(frozen=True)
class CausalityResult:
    system: SystemSpace
    effect: EffectVector

    @property
    def causal(self) -> bool:
        return True


def check_causality(s: SystemSpace) -> CausalityResult:
    """Find all effects equal to one on every vertex; exactly one must exist."""
    pairing = [exact.basis_vector(s.dim, j) for j in range(1, s.dim + 1)]
    sol = exact.solve(pairing, (ONE,) * s.dim)
    if sol is None:
        raise NoDeterministicEffect(f"no functional is one on every vertex of {s.name!r}")
    candidate, nullity = sol
    if nullity:
        raise NonUniqueDeterministicEffect(
            f"{s.name!r}: {nullity}-dimensional family of deterministic candidates"
        )
    ok, _ = is_effect(s, candidate)
    if not ok:
        raise NoDeterministicEffect(f"the all-ones functional is not an effect of {s.name!r}")
    return CausalityResult(s, EffectVector(s, candidate, check=False))


class ObservationSpace:
    """Observations ``{a_i}_{i in I}`` with ``a_i(|j>) = delta_ij`` on ``I`` summing to ``e``.

    Such an observation is fixed by its values ``q[i][k] = a_i(|k>)`` on the
    remaining vertices ``K``; each column ``(q[i][k])_i`` is a probability
    vector.  Under a restricted effect model each ``a_i`` must also be a
    bounded combination of the generators, which adds coefficient variables.
    """

    def __init__(self, s: SystemSpace, discriminated):
        self.system = s
        self.I = list(discriminated)
        if len(set(self.I)) != len(self.I) or any(not 1 <= i <= s.dim for i in self.I):
            raise ValueError(f"bad vertex subset {self.I} for system of dim {s.dim}")
        self.K = [k for k in range(1, s.dim + 1) if k not in self.I]
        self._q = {}
        n = 0
        for i in self.I:
            for k in self.K:
                self._q[i, k] = n
                n += 1
        self.n_q = n
        gens = s.effect_model.generators if s.restricted else ()
        self._c = {}
        for i in self.I:
            for g in range(len(gens)):
                self._c[i, g] = n
                n += 1
        self.n = n
        self.problem = self._build(gens)

    def q_index(self, i: int, k: int) -> int:
        return self._q[i, k]

    def _build(self, gens) -> LPProblem:
        p = LPProblem.nonnegative(self.n)
        for k in self.K:
            row = [ZERO] * self.n
            for i in self.I:
                row[self._q[i, k]] = ONE
            p.add_eq(row, ONE)
        if gens:
            for i in self.I:
                for g in range(len(gens)):
                    p.add_le(exact.basis_vector(self.n, self._c[i, g] + 1), ONE)
                for v in range(1, self.system.dim + 1):
                    row = [ZERO] * self.n
                    for g, gen in enumerate(gens):
                        row[self._c[i, g]] = gen[v - 1]
                    if v in self.I:
                        p.add_eq(row, ONE if v == i else ZERO)
                    else:
                        row[self._q[i, v]] = -ONE
                        p.add_eq(row, ZERO)
        return p

    def with_constraints(self, extra) -> LPProblem:
        """Copy of the base problem plus ``(coeffs, rhs)`` equalities."""
        p = LPProblem(self.n, list(self.problem.equalities), list(self.problem.inequalities),
                      self.problem.nonneg)
        for coeffs, rhs in extra:
            p.add_eq(coeffs, rhs)
        return p

    def columns(self, x) -> dict:
        """``k -> (q[i][k])_{i in I}`` from a solution vector."""
        return {k: tuple(x[self._q[i, k]] for i in self.I) for k in self.K}

    def effects(self, columns: dict) -> list:
        """The observation fixed by its ``K``-columns."""
        out = []
        for t, i in enumerate(self.I):
            coords = [ZERO] * self.system.dim
            coords[i - 1] = ONE
            for k in self.K:
                coords[k - 1] = columns[k][t]
            out.append(EffectVector(self.system, coords, check=False))
        return out

    def admissible(self, columns: dict) -> bool:
        if set(columns) != set(self.K):
            return False
        for col in columns.values():
            if len(col) != len(self.I) or any(c < 0 for c in col) or sum(col) != 1:
                return False
        if self.system.restricted:
            return all(is_effect(self.system, a.coords)[0] for a in self.effects(columns))
        return True


@dataclass(frozen=True)
class ClassicalityResult:
    classical: bool
    test: Optional[list] = None
    certificate: Optional[tuple] = None

    def __bool__(self):
        return self.classical


def jointly_discriminable(s: SystemSpace, subset) -> exact.Feasibility:
    return exact.lp_feasible(ObservationSpace(s, subset).problem)


def check_classicality(s: SystemSpace) -> ClassicalityResult:
    """Are all vertices jointly perfectly discriminable?"""
    space = ObservationSpace(s, range(1, s.dim + 1))
    res = exact.lp_feasible(space.problem)
    if not res.feasible:
        return ClassicalityResult(False, certificate=res.certificate)
    test = space.effects({})
    assert all(is_effect(s, a.coords)[0] for a in test)
    return ClassicalityResult(True, test=test)


# --------------------------------------------------------------------------
# atomicity and discriminability


def check_atomicity(r: CompositionRule) -> tuple:
    """``(True, None)`` if every product of vertices is a vertex, else ``(False, (i, j))``."""
    for key, ks in r.blocks.items():
        if len(ks) >= 2:
            return False, key
    return True, None


def _indicator_rows(dim: int, classes) -> list:
    rows = []
    for members in classes:
        row = [ZERO] * dim
        for k in members:
            row[k - 1] = ONE
        rows.append(tuple(row))
    return rows


def product_effect_rank(r: CompositionRule) -> int:
    """Dimension of the span of ``b_i (x) b_j`` on the composite."""
    return exact.rank(_indicator_rows(r.dim, r.blocks.values()))


@dataclass(frozen=True)
class AssociativityResult:
    associative: bool
    bijection: Optional[dict] = None  # vertex of (AB)C -> vertex of A(BC)
    detail: str = ""

    def __bool__(self):
        return self.associative


def match_brackets(left: CompositeSystem, right: CompositeSystem) -> AssociativityResult:
    if left.dim != right.dim:
        return AssociativityResult(False, detail=f"dimension mismatch: {left.dim} vs {right.dim}")
    groups_l, groups_r = defaultdict(list), defaultdict(list)
    for k, sig in enumerate(left.signatures(), 1):
        groups_l[sig].append(k)
    for k, sig in enumerate(right.signatures(), 1):
        groups_r[sig].append(k)
    for sig in sorted(set(groups_l) | set(groups_r)):
        nl, nr = len(groups_l.get(sig, ())), len(groups_r.get(sig, ()))
        if nl != nr:
            leaves, w = sig
            return AssociativityResult(
                False,
                detail=(f"weight mismatch: product of vertices {leaves} has {nl} refining vertices "
                        f"of weight {exact.format_rational(w)} in {left.bracketing()} "
                        f"but {nr} in {right.bracketing()}"),
            )
    bij = {}
    for sig, ks in groups_l.items():
        bij.update(zip(ks, groups_r[sig]))
    return AssociativityResult(True, bijection=dict(sorted(bij.items())))


def check_associativity(t: Theory, a: str, b: str, c: str) -> AssociativityResult:
    ab = t.rule_for(a, b)
    bc = t.rule_for(b, c)
    left = compose_nfold(t, [a, b, c])
    abc2 = t.rule_for(a, bc.name)
    right = CompositeSystem(abc2.system, abc2, (t.tree(a), t.tree(bc.name)))
    assert left.rule.left.name == ab.name
    return match_brackets(left, right)


def discriminability_degree(t: Theory, factors) -> int:
    """Least ``n`` such that products of effects on at most ``n`` factors span the composite dual.

    Only contiguous groupings of the left-associated composite are used.
    """
    factors = list(factors)
    if len(factors) > 3:
        raise TooManyFactors(f"{len(factors)} factors; at most 3 are supported")
    if not factors:
        raise ValueError("no factors given")
    if len(factors) == 1:
        return 1
    tree = compose_nfold(t, factors)
    dim = tree.dim
    if len(factors) == 2:
        return 1 if product_effect_rank(tree.rule) == dim else 2
    sigs = tree.signatures()
    by_leaves = defaultdict(list)
    for k, (leaves, _) in enumerate(sigs, 1):
        by_leaves[leaves].append(k)
    local = _indicator_rows(dim, by_leaves.values())
    if exact.rank(local) == dim:
        return 1
    rows = local + _indicator_rows(dim, tree.rule.blocks.values())  # {AB|C}
    try:
        a, b, c = factors
        bc = t.rule_for(b, c)
        abc2 = t.rule_for(a, bc.name)
    except OPTError:
        abc2 = None
    if abc2 is not None:  # {A|BC}, transported through the vertex bijection
        other = CompositeSystem(abc2.system, abc2, (t.tree(a), t.tree(bc.name)))
        match = match_brackets(tree, other)
        if match.associative:
            inverse = {v: k for k, v in match.bijection.items()}
            rows += _indicator_rows(dim, [[inverse[k] for k in ks] for ks in abc2.blocks.values()])
    return 2 if exact.rank(rows) == dim else 3


# --------------------------------------------------------------------------
# aggregated report


class InconsistentAnalysis(OPTError, AssertionError):
    pass


@dataclass(frozen=True)
class AnalysisReport:
    composite: str
    excess_dimension: int
    causal: dict  # system name -> all-ones effect coordinates
    classical: dict  # system name -> bool
    atomic_composition: bool
    violating_block: Optional[tuple]
    local_discriminability: bool
    entanglement_present: bool
    witness_vertex: Optional[int]
    discriminability_degree: int
    entangled_certificate: Optional[SeparabilityCertificate] = None
    vertex_refinement: tuple = field(default=())  # k -> (i_k, j_k)

    def __post_init__(self):
        checks = {
            "entanglement vs local discriminability": self.entanglement_present == (not self.local_discriminability),
            "entanglement vs atomicity": self.entanglement_present == (not self.atomic_composition),
            "entanglement vs excess dimension": self.entanglement_present == (self.excess_dimension > 0),
            "local discriminability vs degree": self.local_discriminability == (self.discriminability_degree == 1),
        }
        bad = [name for name, ok in checks.items() if not ok]
        if bad:
            raise InconsistentAnalysis(f"{self.composite}: sub-answers disagree ({', '.join(bad)})")


def analyse_composite(t: Theory, name: str) -> AnalysisReport:
    r = t.rule(name)
    causal, classical = {}, {}
    for s in (r.left, r.right, r.system):
        causal[s.name] = check_causality(s).effect.coords
        classical[s.name] = check_classicality(s).classical
    ent = entanglement_present(r)
    atomic, block = check_atomicity(r)
    degree = discriminability_degree(t, [r.left.name, r.right.name])
    return AnalysisReport(
        composite=name,
        excess_dimension=excess_dimension(r),
        causal=causal,
        classical=classical,
        atomic_composition=atomic,
        violating_block=block,
        local_discriminability=degree == 1,
        entanglement_present=ent.present,
        witness_vertex=ent.witness_vertex,
        discriminability_degree=degree,
        entangled_certificate=ent.certificate,
        vertex_refinement=tuple(r.refine(k) for k in range(1, r.dim + 1)),
    )
