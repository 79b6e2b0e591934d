"""Single systems: simplicial state spaces, effects and the pairing.

States are stored in barycentric coordinates over the non-null vertices
``|1>, ..., |D>``; effects in the dual basis ``b_1, ..., b_D`` with
``b_i(|j>) = delta_ij``.  Pairing is therefore a plain dot product.

Effect models
-------------
``FULL_DUAL``
    every functional with values in ``[0, 1]`` on all vertices.
:class:`RestrictedCone`
    combinations ``sum_g c_g g`` with ``0 <= c_g <= 1`` of a finite generator
    family, clipped to the ``[0, 1]`` box.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import exact
from .errors import DimensionMismatch, NoDeterministicEffect, SystemMismatch
from .exact import ONE, ZERO, LPProblem, RVector


class _FullDual:
    def __repr__(self):
        return "FULL_DUAL"

    def __reduce__(self):
        return "FULL_DUAL"


FULL_DUAL = _FullDual()


@dataclass(frozen=True)
class RestrictedCone:
    generators: tuple

    def __post_init__(self):
        gens = tuple(exact.vec(g) for g in self.generators)
        if not gens:
            raise ValueError("a restricted effect model needs at least one generator")
        object.__setattr__(self, "generators", gens)


EffectModel = Union[_FullDual, RestrictedCone]


@dataclass(frozen=True)
class SystemSpace:
    name: str
    dim: int
    effect_model: EffectModel = FULL_DUAL

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError(f"system {self.name!r}: dimension must be a positive integer")
        if isinstance(self.effect_model, RestrictedCone):
            for g in self.effect_model.generators:
                if len(g) != self.dim:
                    raise DimensionMismatch(
                        f"system {self.name!r}: generator of length {len(g)}, dim is {self.dim}"
                    )
                if any(not 0 <= x <= 1 for x in g):
                    raise ValueError(f"system {self.name!r}: generator {g} leaves the [0,1] box")

    @property
    def restricted(self) -> bool:
        return isinstance(self.effect_model, RestrictedCone)

    def vertex(self, j: int) -> "StateVector":
        return StateVector(self, exact.basis_vector(self.dim, j))

    def vertices(self):
        return [self.vertex(j) for j in range(1, self.dim + 1)]

    def null_state(self) -> "StateVector":
        return StateVector(self, exact.zeros(self.dim))

    def state(self, coords) -> "StateVector":
        return StateVector(self, exact.vec(coords))

    def effect(self, coords) -> "EffectVector":
        return EffectVector(self, exact.vec(coords))

    def dual_basis(self, i: int) -> "EffectVector":
        """The functional ``b_i`` (not necessarily admissible under restriction)."""
        return EffectVector(self, exact.basis_vector(self.dim, i), check=False)


@dataclass(frozen=True)
class StateVector:
    system: SystemSpace
    coords: RVector

    def __post_init__(self):
        coords = exact.vec(self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != self.system.dim:
            raise DimensionMismatch(
                f"state of length {len(coords)} on system {self.system.name!r} of dim {self.system.dim}"
            )
        if any(c < 0 for c in coords):
            raise ValueError(f"negative barycentric coordinate in {coords}")
        if sum(coords) > 1:
            raise ValueError(f"state coordinates sum to {sum(coords)} > 1")

    @property
    def norm(self) -> Fraction:
        return sum(self.coords, ZERO)

    @property
    def support(self) -> list:
        return [j + 1 for j, c in enumerate(self.coords) if c]


class EffectVector:
    """Effect in dual-basis coordinates, validated against its system's model."""

    __slots__ = ("system", "coords", "witness")

    def __init__(self, system: SystemSpace, coords, check: bool = True):
        coords = exact.vec(coords)
        if len(coords) != system.dim:
            raise DimensionMismatch(
                f"effect of length {len(coords)} on system {system.name!r} of dim {system.dim}"
            )
        self.system = system
        self.coords = coords
        self.witness = None
        if check:
            ok, witness = is_effect(system, coords)
            if not ok:
                raise ValueError(f"{coords} is not an effect of system {system.name!r}")
            self.witness = witness

    def __eq__(self, other):
        if not isinstance(other, EffectVector):
            return NotImplemented
        return self.system == other.system and self.coords == other.coords

    def __hash__(self):
        return hash((self.system, self.coords))

    def __repr__(self):
        vals = ", ".join(exact.format_rational(c) for c in self.coords)
        return f"EffectVector({self.system.name}, ({vals}))"


def pair(a: EffectVector, rho: StateVector) -> Fraction:
    """Probability ``<a|rho>``."""
    if a.system != rho.system:
        raise SystemMismatch(f"effect on {a.system.name!r} paired with state on {rho.system.name!r}")
    return exact.dot(a.coords, rho.coords)


# --------------------------------------------------------------------------
# effect-model membership


def cone_problem(gens, targets: dict) -> LPProblem:
    """LP over bounded generator coefficients reproducing prescribed values.

    ``targets`` maps 0-based vertex positions to required values; positions
    absent from ``targets`` are only box-constrained.
    """
    m = len(gens)
    dim = len(gens[0])
    p = LPProblem.nonnegative(m)
    for j in range(dim):
        row = [g[j] for g in gens]
        if j in targets:
            p.add_eq(row, targets[j])
        else:
            p.add_le(row, ONE)
    for t in range(m):
        p.add_le(exact.basis_vector(m, t + 1), ONE)
    return p


def is_effect(s: SystemSpace, v) -> tuple:
    """``(True, witness)`` when ``v`` lies in the effect set of ``s``.

    For restricted systems the witness is the tuple of generator coefficients;
    for the full dual it is ``v`` itself.  Infeasible restricted cases carry the
    Farkas certificate as second item.
    """
    v = exact.vec(v)
    if len(v) != s.dim:
        raise DimensionMismatch(f"vector of length {len(v)} on system of dim {s.dim}")
    if any(not 0 <= x <= 1 for x in v):
        return False, None
    if not s.restricted:
        return True, v
    res = exact.lp_feasible(cone_problem(s.effect_model.generators, dict(enumerate(v))))
    if res.feasible:
        return True, res.witness
    return False, res.certificate


def deterministic_effect(s: SystemSpace) -> EffectVector:
    ones = (ONE,) * s.dim
    ok, _ = is_effect(s, ones)
    if not ok:
        raise NoDeterministicEffect(f"the all-ones functional is not an effect of {s.name!r}")
    return EffectVector(s, ones, check=False)


# --------------------------------------------------------------------------
# state classification


class StateKind(enum.Enum):
    NULL = "Null"
    PURE_VERTEX = "PureVertex"
    DETERMINISTIC_MIXED = "DeterministicMixed"
    SUBNORMALIZED_ATOMIC = "SubnormalizedAtomic"
    SUBNORMALIZED_MIXED = "SubnormalizedMixed"


@dataclass(frozen=True)
class StateClass:
    kind: StateKind
    vertex: Optional[int] = None

    def __str__(self):
        if self.kind is StateKind.PURE_VERTEX:
            return f"PureVertex({self.vertex})"
        return self.kind.value


def classify_state(rho: StateVector) -> StateClass:
    support = rho.support
    total = rho.norm
    if not support:
        return StateClass(StateKind.NULL)
    if total == 1:
        if len(support) == 1:
            return StateClass(StateKind.PURE_VERTEX, support[0])
        return StateClass(StateKind.DETERMINISTIC_MIXED)
    if len(support) == 1:
        return StateClass(StateKind.SUBNORMALIZED_ATOMIC, support[0])
    return StateClass(StateKind.SUBNORMALIZED_MIXED)
