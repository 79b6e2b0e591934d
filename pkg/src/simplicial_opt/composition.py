"""Composite systems built from a block partition of the composite vertices.

A rule for ``AB`` fixes the composite dimension and, for every pair of
vertices ``(i, j)``, the block ``I_ij`` of composite vertices refining the
product ``|i>|j>`` together with positive weights summing to one::

    |i>_A |j>_B = sum_{k in I_ij} p_k^{ij} |k>_AB

Blocks are disjoint and cover the composite vertex set, so every composite
vertex ``k`` refines exactly one product ``(i_k, j_k)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import exact
from .errors import MissingRule, SystemMismatch, TheoryValidationError, UnknownSystem
from .exact import ONE, ZERO
from .system import FULL_DUAL, EffectModel, EffectVector, StateVector, SystemSpace


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class Violation:
    clause: str
    detail: str
    indices: tuple = ()

    def __str__(self):
        return f"{self.clause}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid

    def __str__(self):
        if self.valid:
            return "valid"
        return "; ".join(str(v) for v in self.violations)


@dataclass(frozen=True, eq=False)
class CompositionRule:
    name: str
    left: SystemSpace
    right: SystemSpace
    dim: int
    blocks: dict  # (i, j) -> tuple of composite vertex indices (1-based)
    weights: dict  # (i, j) -> tuple of Fractions aligned with blocks
    effect_model: EffectModel = FULL_DUAL

    def __post_init__(self):
        object.__setattr__(self, "blocks", {
            (int(i), int(j)): tuple(int(k) for k in ks)
            for (i, j), ks in sorted(self.blocks.items())
        })
        object.__setattr__(self, "weights", {
            key: exact.vec(ws) for key, ws in sorted(self.weights.items())
        })

    def __eq__(self, other):
        if not isinstance(other, CompositionRule):
            return NotImplemented
        return (self.name, self.left, self.right, self.dim, self.blocks, self.weights,
                self.effect_model) == (other.name, other.left, other.right, other.dim,
                                       other.blocks, other.weights, other.effect_model)

    __hash__ = None

    @classmethod
    def canonical(cls, name, left, right, block_weights: dict, effect_model=FULL_DUAL):
        """Number vertices consecutively over blocks in lexicographic ``(i, j)`` order."""
        blocks, weights = {}, {}
        k = 1
        for key in sorted(block_weights):
            ws = exact.vec(block_weights[key])
            blocks[key] = tuple(range(k, k + len(ws)))
            weights[key] = ws
            k += len(ws)
        return cls(name, left, right, k - 1, blocks, weights, effect_model)

    @property
    def system(self) -> SystemSpace:
        return SystemSpace(self.name, self.dim, self.effect_model)

    @property
    def refinement(self) -> dict:
        """``k -> (i_k, j_k, p_k)``; meaningful only for a valid rule."""
        cached = self.__dict__.get("_refinement")
        if cached is None:
            cached = {}
            for key, ks in self.blocks.items():
                for k, w in zip(ks, self.weights.get(key, ())):
                    cached[k] = (key[0], key[1], w)
            object.__setattr__(self, "_refinement", cached)
        return cached

    def refine(self, k: int) -> tuple:
        i, j, _ = self.refinement[k]
        return i, j


def validate_rule(r: CompositionRule) -> ValidationReport:
    """Check every structural invariant of a composition rule; never raises."""
    out = []
    da, db = r.left.dim, r.right.dim
    if not isinstance(r.dim, int) or r.dim < 1:
        out.append(Violation("composite dimension", f"D_AB = {r.dim} is not a positive integer"))
    elif r.dim < da * db:
        out.append(Violation("composite dimension below product",
                             f"D_AB = {r.dim} < D_A*D_B = {da * db}"))
    expected = {(i, j) for i in range(1, da + 1) for j in range(1, db + 1)}
    for key in sorted(expected - set(r.blocks)):
        out.append(Violation("missing block", f"no block for product {key}", key))
    for key in sorted(set(r.blocks) - expected):
        out.append(Violation("unknown block", f"block {key} outside 1..{da} x 1..{db}", key))
    if set(r.weights) != set(r.blocks):
        for key in sorted(set(r.blocks) ^ set(r.weights)):
            out.append(Violation("weights misaligned", f"block {key} lacks weights or vertices", key))
    owner = {}
    for key, ks in r.blocks.items():
        if not ks:
            out.append(Violation("empty block", f"block {key} has no vertices", key))
        ws = r.weights.get(key)
        if ws is not None and len(ws) != len(ks):
            out.append(Violation("weights misaligned",
                                 f"block {key} has {len(ks)} vertices and {len(ws)} weights", key))
        for k in ks:
            if isinstance(r.dim, int) and not 1 <= k <= r.dim:
                out.append(Violation("vertex out of range", f"vertex {k} in block {key}", (k,)))
            if k in owner:
                other = owner[k]
                if other == key:
                    out.append(Violation("duplicate vertex", f"vertex {k} repeated in block {key}", (k,)))
                else:
                    out.append(Violation("blocks not disjoint",
                                         f"vertex {k} lies in blocks {other} and {key}",
                                         (k, other, key)))
            else:
                owner[k] = key
        if ws is not None:
            bad = [t for t, w in enumerate(ws) if w <= 0]
            for t in bad:
                out.append(Violation("non-positive weight",
                                     f"weight {exact.format_rational(ws[t])} in block {key}", key))
            if ws and sum(ws) != 1:
                out.append(Violation("weights sum ≠ 1",
                                     f"block {key} weights sum to {exact.format_rational(sum(ws))}",
                                     key))
    if isinstance(r.dim, int) and r.dim >= 1:
        uncovered = [k for k in range(1, r.dim + 1) if k not in owner]
        if uncovered:
            out.append(Violation("blocks do not cover",
                                 f"composite vertices {uncovered} lie in no block", tuple(uncovered)))
    return ValidationReport(tuple(out))


def excess_dimension(r: CompositionRule) -> int:
    return r.dim - r.left.dim * r.right.dim


def _check(state_or_effect, system, role):
    if state_or_effect.system != system:
        raise SystemMismatch(
            f"{role} lives on {state_or_effect.system.name!r}, rule expects {system.name!r}"
        )


def compose_states(r: CompositionRule, rho: StateVector, sigma: StateVector) -> StateVector:
    _check(rho, r.left, "left state")
    _check(sigma, r.right, "right state")
    coords = [ZERO] * r.dim
    for k, (i, j, p) in r.refinement.items():
        coords[k - 1] = rho.coords[i - 1] * sigma.coords[j - 1] * p
    return StateVector(r.system, tuple(coords))


def compose_effects(r: CompositionRule, a: EffectVector, b: EffectVector) -> EffectVector:
    _check(a, r.left, "left effect")
    _check(b, r.right, "right effect")
    coords = [ZERO] * r.dim
    for k, (i, j, _) in r.refinement.items():
        coords[k - 1] = a.coords[i - 1] * b.coords[j - 1]
    # products of valid effects are box-valued; the composite model is checked
    # only when it is restricted
    return EffectVector(r.system, tuple(coords), check=r.system.restricted)


def product_vertex(r: CompositionRule, i: int, j: int) -> StateVector:
    """``|i>_A |j>_B`` on the composite."""
    return compose_states(r, r.left.vertex(i), r.right.vertex(j))


def marginalize(r: CompositionRule, omega: StateVector, keep: Side) -> StateVector:
    """Discard one factor with its deterministic effect."""
    _check(omega, r.system, "composite state")
    keep = Side(keep)
    target = r.left if keep is Side.LEFT else r.right
    coords = [ZERO] * target.dim
    for k, (i, j, _) in r.refinement.items():
        coords[(i if keep is Side.LEFT else j) - 1] += omega.coords[k - 1]
    return StateVector(target, tuple(coords))


# --------------------------------------------------------------------------
# composite trees and theories


@dataclass(frozen=True, eq=False)
class CompositeSystem:
    """A system together with the bracketing that produced it.

    Leaves have ``rule is None`` and no factors.
    """

    system: SystemSpace
    rule: Optional[CompositionRule] = None
    factors: tuple = ()

    @property
    def dim(self) -> int:
        return self.system.dim

    @property
    def leaves(self) -> tuple:
        if self.rule is None:
            return (self.system,)
        return self.factors[0].leaves + self.factors[1].leaves

    def bracketing(self) -> str:
        if self.rule is None:
            return self.system.name
        return f"({self.factors[0].bracketing()} {self.factors[1].bracketing()})"

    def refinement(self, k: int) -> tuple:
        """Leaf vertex tuple refined by vertex ``k`` and the product of weights along the tree."""
        if self.rule is None:
            return (k,), ONE
        i, j, p = self.rule.refinement[k]
        ls, lw = self.factors[0].refinement(i)
        rs, rw = self.factors[1].refinement(j)
        return ls + rs, p * lw * rw

    def signatures(self) -> list:
        return [self.refinement(k) for k in range(1, self.dim + 1)]


@dataclass
class Theory:
    """Registry of systems and composition rules.

    ``systems`` contains the elementary systems in declaration order;
    ``rules`` maps composite names to their rules.  Composites are themselves
    systems and may appear as factors of further composites.
    """

    systems: dict = field(default_factory=dict)
    rules: dict = field(default_factory=dict)

    def add_system(self, s: SystemSpace) -> SystemSpace:
        if s.name in self.systems or s.name in self.rules:
            raise TheoryValidationError(f"duplicate system name {s.name!r}")
        self.systems[s.name] = s
        return s

    def add_rule(self, r: CompositionRule) -> CompositionRule:
        if r.name in self.systems or r.name in self.rules:
            raise TheoryValidationError(f"duplicate system name {r.name!r}")
        for f in (r.left, r.right):
            if self.system(f.name) != f:
                raise TheoryValidationError(f"factor {f.name!r} of {r.name!r} differs from the declared system")
        report = validate_rule(r)
        if not report.valid:
            raise TheoryValidationError(str(report), path=r.name, violations=report.violations)
        for other in self.rules.values():
            if (other.left.name, other.right.name) == (r.left.name, r.right.name):
                raise TheoryValidationError(
                    f"{r.name!r} and {other.name!r} both compose ({r.left.name}, {r.right.name})"
                )
        self.rules[r.name] = r
        return r

    def system(self, name: str) -> SystemSpace:
        if name in self.systems:
            return self.systems[name]
        if name in self.rules:
            return self.rules[name].system
        raise UnknownSystem(f"unknown system {name!r}")

    def all_systems(self) -> list:
        return list(self.systems.values()) + [r.system for r in self.rules.values()]

    def rule_for(self, left: str, right: str) -> CompositionRule:
        for r in self.rules.values():
            if r.left.name == left and r.right.name == right:
                return r
        raise MissingRule(f"no composition rule declared for ({left}, {right})")

    def rule(self, name: str) -> CompositionRule:
        try:
            return self.rules[name]
        except KeyError:
            raise UnknownSystem(f"unknown composite {name!r}") from None

    def tree(self, name: str) -> CompositeSystem:
        """The bracketing recorded by the declarations for system ``name``."""
        if name in self.rules:
            r = self.rules[name]
            return CompositeSystem(r.system, r, (self.tree(r.left.name), self.tree(r.right.name)))
        return CompositeSystem(self.system(name))


def compose_nfold(t: Theory, factors) -> CompositeSystem:
    """Left-associated composite ``((A1 A2) A3) ...`` of the named factors."""
    factors = list(factors)
    if not factors:
        raise ValueError("compose_nfold needs at least one factor")
    node = t.tree(factors[0])
    for name in factors[1:]:
        r = t.rule_for(node.system.name, name)
        node = CompositeSystem(r.system, r, (node, t.tree(name)))
    return node
