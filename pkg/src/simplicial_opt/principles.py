"""Superposition and purification checkers for simplicial systems."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import exact
from .analysis import ObservationSpace, jointly_discriminable
from .composition import Side, Theory, marginalize
from .errors import InvalidDistribution, MissingRule, NotDeterministic, NotMaximal
from .exact import ONE, ZERO
from .system import (EffectVector, StateKind, StateVector, SystemSpace, classify_state,
                     deterministic_effect, pair)


def maximal_discriminable_set(s: SystemSpace) -> list:
    """Greedy lexicographic maximal set of jointly perfectly discriminable vertices."""
    chosen = [1]
    changed = True
    while changed:
        changed = False
        for v in range(1, s.dim + 1):
            if v not in chosen and jointly_discriminable(s, sorted(chosen + [v])).feasible:
                chosen = sorted(chosen + [v])
                changed = True
                break
    return chosen


def is_maximal_discriminable(s: SystemSpace, subset) -> bool:
    subset = sorted(subset)
    if not subset or not jointly_discriminable(s, subset).feasible:
        return False
    return not any(jointly_discriminable(s, sorted(subset + [v])).feasible
                   for v in range(1, s.dim + 1) if v not in subset)


class Mode(enum.Enum):
    ULTRAWEAK = "ultraweak"
    WEAK = "weak"
    STRONG = "strong"


@dataclass(frozen=True)
class DiscriminatingObservation:
    """Observation discriminating ``base_set``, given by its free columns.

    ``free_weights[k][t]`` is the value at vertex ``k`` of the effect that
    fires on the ``t``-th vertex of ``base_set``.
    """

    system: SystemSpace
    base_set: tuple
    free_weights: dict

    def effects(self) -> list:
        return ObservationSpace(self.system, self.base_set).effects(self.free_weights)

    def is_valid(self) -> bool:
        return ObservationSpace(self.system, self.base_set).admissible(self.free_weights)

    def outcome_distribution(self, vertex: int) -> tuple:
        v = self.system.vertex(vertex)
        return tuple(pair(a, v) for a in self.effects())

    def to_json(self) -> dict:
        return {
            "base_set": list(self.base_set),
            "free_weights": {str(k): [exact.format_rational(x) for x in col]
                             for k, col in sorted(self.free_weights.items())},
        }


@dataclass(frozen=True)
class SuperpositionVerdict:
    mode: Mode
    holds: Optional[bool]  # None when vacuous
    witness_vertex: Optional[int] = None
    observation: Optional[DiscriminatingObservation] = None
    reason: str = ""

    @property
    def vacuous(self) -> bool:
        return self.holds is None

    def __str__(self):
        if self.vacuous:
            return f"VACUOUS ({self.reason})"
        return f"{'HOLDS' if self.holds else 'FAILS'} ({self.reason})"


def _check_distribution(p, d):
    p = exact.vec(p)
    if len(p) != d:
        raise InvalidDistribution(f"distribution of length {len(p)} over a set of size {d}")
    if any(x < 0 for x in p) or sum(p) != 1:
        raise InvalidDistribution(f"{[exact.format_rational(x) for x in p]} is not a probability vector")
    return p


def _observation(space: ObservationSpace, x) -> DiscriminatingObservation:
    return DiscriminatingObservation(space.system, tuple(space.I), space.columns(x))


def _pin_column(space: ObservationSpace, k: int, p) -> list:
    out = []
    for t, i in enumerate(space.I):
        out.append((exact.basis_vector(space.n, space.q_index(i, k) + 1), p[t]))
    return out


def _constant_column(space: ObservationSpace, k: int, p):
    """``None`` if column ``k`` equals ``p`` on every admissible observation,
    otherwise a solution vector whose column ``k`` differs from ``p``."""
    for t, i in enumerate(space.I):
        obj = exact.basis_vector(space.n, space.q_index(i, k) + 1)
        for res in (exact.lp_minimize(space.problem, obj), exact.lp_maximize(space.problem, obj)):
            if res.value != p[t]:
                return res.x
    return None


def _defeats(obs: DiscriminatingObservation, p) -> bool:
    return obs.is_valid() and all(obs.outcome_distribution(v) != p
                                  for v in range(1, obs.system.dim + 1))


def _generic_combination(space: ObservationSpace, points, p):
    """A convex combination of ``points`` escaping every slice ``{column_k = p}``.

    The bad weight vectors form finitely many proper affine subspaces, so a
    short deterministic sequence of weightings always contains a good one.
    """
    for base in itertools.count(1):
        ws = [Fraction(base) ** t for t in range(len(points))]
        total = sum(ws)
        x = [ZERO] * space.n
        for w, pt in zip(ws, points):
            for j in range(space.n):
                x[j] += w / total * pt[j]
        obs = _observation(space, x)
        if _defeats(obs, p):
            return obs
        if base > 4 * len(points) + 8:
            raise RuntimeError("failed to separate observation from slices")


def _extreme_observations(space: ObservationSpace, limit: int = 64):
    """Observations whose free columns are all point masses (admissible ones only)."""
    combos = itertools.product(range(len(space.I)), repeat=len(space.K))
    for choice in itertools.islice(combos, limit):
        cols = {k: exact.basis_vector(len(space.I), t + 1) for k, t in zip(space.K, choice)}
        obs = DiscriminatingObservation(space.system, tuple(space.I), cols)
        if obs.is_valid():
            yield obs


def check_superposition(s: SystemSpace, discriminated, p, mode) -> SuperpositionVerdict:
    mode = Mode(mode)
    discriminated = sorted(discriminated)
    p = _check_distribution(p, len(discriminated))
    if not is_maximal_discriminable(s, discriminated):
        raise NotMaximal(f"{discriminated} is not a maximal jointly discriminable set of {s.name!r}")
    if len(discriminated) == 1:
        return SuperpositionVerdict(mode, None, reason="fewer than two discriminable states")
    space = ObservationSpace(s, discriminated)
    point_mass = next((discriminated[t] for t, x in enumerate(p) if x == 1), None)

    if mode is Mode.ULTRAWEAK:
        verdict = _ultraweak(space, p, point_mass)
    else:
        verdict = _weak_or_strong(space, p, point_mass, mode)
    _self_check(space, p, verdict)
    return verdict


def _ultraweak(space, p, point_mass) -> SuperpositionVerdict:
    for v in range(1, space.system.dim + 1):
        if v in space.I:
            if v != point_mass:
                continue
            res = exact.lp_feasible(space.problem)
        else:
            res = exact.lp_feasible(space.with_constraints(_pin_column(space, v, p)))
        if res.feasible:
            return SuperpositionVerdict(Mode.ULTRAWEAK, True, v, _observation(space, res.witness),
                                        reason=f"pure state |{v}> reproduces p")
    return SuperpositionVerdict(Mode.ULTRAWEAK, False,
                                reason="no observation and pure state reproduce p")


def _weak_or_strong(space, p, point_mass, mode) -> SuperpositionVerdict:
    if point_mass is not None:
        return SuperpositionVerdict(mode, True, point_mass,
                                    reason=f"point mass reproduced by |{point_mass}> for every observation")
    # the admissible observations form a convex set; it is covered by the
    # finitely many slices {column_k = p} only if it lies inside one of them
    escapes = []
    for k in space.K:
        x = _constant_column(space, k, p)
        if x is None:
            return SuperpositionVerdict(mode, True, k,
                                        reason=f"column {k} equals p on every observation")
        escapes.append(x)
    for t in range(len(space.I)):
        cols = {k: exact.basis_vector(len(space.I), t + 1) for k in space.K}
        obs = DiscriminatingObservation(space.system, tuple(space.I), cols)
        if _defeats(obs, p):
            break
    else:
        if escapes:
            obs = _generic_combination(space, escapes, p)
        else:
            base = exact.lp_feasible(space.problem)
            obs = _observation(space, base.witness)
    return SuperpositionVerdict(mode, False, observation=obs,
                                reason="counterexample observation admits no pure state reproducing p")


def _self_check(space, p, verdict: SuperpositionVerdict):
    """Re-evaluate the verdict; cross-check Weak/Strong on extreme observations."""
    if verdict.vacuous:
        return
    if verdict.mode is Mode.ULTRAWEAK:
        if verdict.holds:
            assert verdict.observation.is_valid()
            assert verdict.observation.outcome_distribution(verdict.witness_vertex) == p
        return
    if not verdict.holds:
        assert _defeats(verdict.observation, p)
        return
    for obs in _extreme_observations(space):
        assert obs.outcome_distribution(verdict.witness_vertex) == p, "extreme-point cross-check failed"


# --------------------------------------------------------------------------
# purification


@dataclass(frozen=True)
class PurificationResult:
    purifiable: bool
    scanned: int
    composite: Optional[str] = None
    witness_vertex: Optional[int] = None
    ancilla_effect: Optional[EffectVector] = None

    def __bool__(self):
        return self.purifiable


def ancilla_rules(t: Theory, system: str, ancilla: Optional[str] = None) -> list:
    """``(rule, kept side)`` for every declared composite pairing ``system`` with an ancilla."""
    out = []
    for r in t.rules.values():
        if r.left.name == system and (ancilla is None or r.right.name == ancilla):
            out.append((r, Side.LEFT))
        elif r.right.name == system and (ancilla is None or r.left.name == ancilla):
            out.append((r, Side.RIGHT))
    if not out:
        raise MissingRule(f"no composite pairs {system!r} with "
                          f"{repr(ancilla) if ancilla else 'any ancilla'}")
    return out


def check_purification(t: Theory, rho: StateVector, ancilla: Optional[str] = None) -> PurificationResult:
    """Scan every pure state of every admissible ``AB`` for a marginal equal to ``rho``."""
    if rho.norm != 1:
        raise NotDeterministic(f"state has norm {exact.format_rational(rho.norm)}, not 1")
    scanned = 0
    for r, side in ancilla_rules(t, rho.system.name, ancilla):
        other = r.right if side is Side.LEFT else r.left
        for k in range(1, r.dim + 1):
            scanned += 1
            if marginalize(r, r.system.vertex(k), side) == rho:
                assert classify_state(rho).kind is StateKind.PURE_VERTEX
                return PurificationResult(True, scanned, r.name, k, deterministic_effect(other))
    return PurificationResult(False, scanned)
