"""Randomised property battery over generated theories.

Each ``criterion_*`` function runs one family of exact checks and returns a
:class:`CriterionResult`.  Sizes are parameters so the CLI ``selftest`` can
run a reduced battery while the acceptance suite runs the full one.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import exact
from .analysis import (ObservationSpace, check_atomicity, check_causality, check_classicality,
                       discriminability_degree, entanglement_present, is_separable,
                       reconstruct, separable_by_lp)
from .errors import MissingRule
from .composition import (Side, Theory, compose_effects, compose_states, excess_dimension,
                          marginalize, validate_rule)
from .generators import (generate_ct, generate_random, generate_toy, random_cone_system,
                         random_distribution, random_noisy_system, random_rule, t5_theory)
from .principles import (Mode, ancilla_rules, check_purification, check_superposition,
                         maximal_discriminable_set)
from .report import build_report, report_json
from .system import StateKind, SystemSpace, classify_state, pair
from .theory_io import parse_theory, serialize_theory


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number}: {self.title} -- {self.detail}"


class _Failure(Exception):
    pass


def _require(cond, message):
    if not cond:
        raise _Failure(message)


def _run(number, title, body):
    try:
        detail = body()
        return CriterionResult(number, title, True, detail)
    except _Failure as exc:
        return CriterionResult(number, title, False, str(exc))


# --------------------------------------------------------------------------
# samplers


def random_state(rng: random.Random, s: SystemSpace, kind: str = "any", max_den: int = 16):
    """Random state; ``kind`` is ``vertex``, ``mixed`` (deterministic, >= 2 support points) or ``any``."""
    if kind == "vertex" or (kind == "any" and rng.random() < 0.2):
        return s.vertex(rng.randint(1, s.dim))
    if kind == "mixed":
        if s.dim < 2:
            raise ValueError("a one-vertex system has no mixed states")
        size = rng.randint(2, s.dim)
    else:
        size = rng.randint(1, s.dim)
    support = rng.sample(range(s.dim), size)
    weights = random_distribution(rng, size, max(max_den, size))
    if kind == "any" and rng.random() < 0.3:
        scale = Fraction(rng.randint(0, max_den), max_den)
        weights = tuple(scale * w for w in weights)
    coords = [Fraction(0)] * s.dim
    for pos, w in zip(support, weights):
        coords[pos] = w
    return s.state(coords)


def random_box_effect(rng: random.Random, s: SystemSpace, max_den: int = 16):
    den = rng.randint(1, max_den)
    return s.effect([Fraction(rng.randint(0, den), den) for _ in range(s.dim)])


def random_two_system_rule(rng: random.Random, max_dim: int = 4, deltas=(0, 0, 1, 2, 3)):
    a = SystemSpace("A", rng.randint(1, max_dim))
    b = SystemSpace("B", rng.randint(1, max_dim))
    t = Theory()
    t.add_system(a)
    t.add_system(b)
    r = t.add_rule(random_rule(rng, "AB", a, b, rng.choice(deltas)))
    return t, r


# --------------------------------------------------------------------------
# criteria


def criterion_causality(n_systems: int = 200, seed: int = 1) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        n_full = n_restricted = 0
        for t in range(n_systems):
            choice = t % 3
            if choice == 0:
                s = SystemSpace(f"S{t}", rng.randint(1, 8))
            elif choice == 1:
                s = random_cone_system(rng, f"S{t}", rng.randint(1, 8))
            else:
                s = random_noisy_system(rng, f"S{t}", rng.randint(1, 4), rng.randint(1, 4))
            res = check_causality(s)
            e = res.effect
            _require(all(pair(e, v) == 1 for v in s.vertices()), f"{s}: effect not one on vertices")
            if s.restricted:
                n_restricted += 1
            else:
                n_full += 1
                _require(e.coords == (1,) * s.dim, f"{s}: deterministic effect {e} is not all-ones")
        return f"{n_full} full-dual and {n_restricted} restricted systems, all causal with a unique effect"
    return _run(1, "every system has a unique deterministic effect", body)


def rule_battery(n_rules: int, seed: int, max_dim: int = 4):
    rng = random.Random(seed)
    return [random_two_system_rule(rng, max_dim) for _ in range(n_rules)]


def criterion_entanglement_vs_discriminability(n_rules: int = 200, seed: int = 2) -> CriterionResult:
    def body():
        n_ent = 0
        for t, r in rule_battery(n_rules, seed):
            ent = entanglement_present(r).present
            delta = excess_dimension(r)
            degree = discriminability_degree(t, ["A", "B"])
            _require(ent == (delta > 0) == (degree == 2),
                     f"{r.name}: entangled={ent}, delta={delta}, degree={degree}")
            n_ent += ent
        return f"{n_rules} rules ({n_ent} with excess dimension), zero exceptions"
    return _run(2, "entanglement <=> excess dimension > 0 <=> degree 2", body)


def criterion_entanglement_vs_atomicity(n_rules: int = 200, seed: int = 2) -> CriterionResult:
    def body():
        for t, r in rule_battery(n_rules, seed):
            ent = entanglement_present(r)
            atomic, block = check_atomicity(r)
            _require(ent.present == (not atomic), f"{r.name}: entangled={ent.present}, atomic={atomic}")
            if ent.present:
                v = r.system.vertex(ent.witness_vertex)
                _require(not separable_by_lp(r, v).feasible, "LP oracle finds the witness separable")
        return f"{n_rules} rules, zero exceptions"
    return _run(3, "entanglement <=> atomicity of state-composition fails", body)


def criterion_separability_oracle(n_rules: int = 100, states_per_rule: int = 10,
                                  seed: int = 4) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        n = n_sep = 0
        for t, r in (random_two_system_rule(rng) for _ in range(n_rules)):
            for s_idx in range(states_per_rule):
                kind = s_idx % 4
                if kind == 0:
                    omega = random_state(rng, r.system, "vertex")
                elif kind == 1:
                    omega = compose_states(r, random_state(rng, r.left), random_state(rng, r.right))
                elif kind == 2:
                    terms = [compose_states(r, random_state(rng, r.left), random_state(rng, r.right))
                             for _ in range(rng.randint(1, 3))]
                    ws = random_distribution(rng, len(terms))
                    coords = exact.zeros(r.dim)
                    for w, term in zip(ws, terms):
                        coords = exact.add(coords, exact.scale(w, term.coords))
                    omega = r.system.state(coords)
                else:
                    omega = random_state(rng, r.system, "any")
                cert = is_separable(r, omega)
                lp = separable_by_lp(r, omega)
                _require(cert.separable == lp.feasible,
                         f"{r.name}: closed form {cert.separable} vs LP {lp.feasible} on {omega.coords}")
                if cert.separable:
                    _require(reconstruct(r, cert.lambdas) == omega.coords, "lambda fails to reconstruct")
                    n_sep += 1
                else:
                    _require(r.name and lp.certificate is not None, "missing Farkas certificate")
                n += 1
        return f"{n} states over {n_rules} rules: 100% agreement ({n_sep} separable, all reconstructed)"
    return _run(4, "closed-form separability agrees with exact LP", body)


def criterion_structure(n_rules: int = 100, n_quadruples: int = 1000, seed: int = 5) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        rules = [random_two_system_rule(rng)[1] for _ in range(n_rules)]
        for r in rules:
            _require(validate_rule(r).valid, f"{r.name}: {validate_rule(r)}")
        for _ in range(n_quadruples):
            r = rng.choice(rules)
            a, b = random_box_effect(rng, r.left), random_box_effect(rng, r.right)
            rho, sigma = random_state(rng, r.left), random_state(rng, r.right)
            lhs = pair(compose_effects(r, a, b), compose_states(r, rho, sigma))
            _require(lhs == pair(a, rho) * pair(b, sigma), "pairing does not factorise")
        return f"{n_rules} rules valid; {n_quadruples} quadruples factorise exactly"
    return _run(5, "block-partition invariants and pairing factorisation", body)


def criterion_no_superposition(n_dists: int = 50, n_restricted: int = 20,
                               dists_per_restricted: int = 5, seed: int = 6) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        n_ultra = 0
        for dim in range(2, 7):
            s = SystemSpace(f"C{dim}", dim)
            dset = maximal_discriminable_set(s)
            _require(dset == list(range(1, dim + 1)), f"{s}: full dual is not classical")
            for _ in range(n_dists):
                p = random_distribution(rng, dim)
                v = check_superposition(s, dset, p, Mode.ULTRAWEAK)
                _require(v.holds is False, f"D={dim}, p={p}: ultraweak {v}")
                n_ultra += 1
        n_weak = 0
        for t in range(n_restricted):
            d, k = rng.randint(2, 3), rng.randint(1, 2)
            s = random_noisy_system(rng, f"N{t}", d, k)
            dset = maximal_discriminable_set(s)
            _require(len(dset) < s.dim, f"{s}: expected a nontrivial K")
            for _ in range(dists_per_restricted):
                p = random_distribution(rng, len(dset))
                v = check_superposition(s, dset, p, Mode.WEAK)
                _require(v.holds is False and v.observation.is_valid(),
                         f"{s.name}, p={p}: weak {v}")
                n_weak += 1
            for t0 in range(len(dset)):
                p = exact.basis_vector(len(dset), t0 + 1)
                v = check_superposition(s, dset, p, Mode.WEAK)
                _require(v.holds is True, f"{s.name}: point mass {p} fails weak")
                space = ObservationSpace(s, dset)
                base = exact.lp_feasible(space.problem)
                _require(base.feasible, "no discriminating observation")
                obs_effects = space.effects(space.columns(base.witness))
                got = tuple(pair(a, s.vertex(v.witness_vertex)) for a in obs_effects)
                _require(got == p, f"point-mass witness re-evaluates to {got}")
        return (f"ultraweak fails on {n_ultra} classical instances; weak fails on {n_weak} "
                f"restricted instances; point masses hold with verified witnesses")
    return _run(6, "no superposition in simplicial theories", body)


def criterion_no_purification(n_theories: int = 60, mixed_per_factor: int = 10,
                              seed: int = 7, min_mixed: int = 500) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        n_mixed = n_pure = 0
        for idx in range(n_theories):
            if idx % 2:
                t = generate_toy(rng.randint(2, 4), rng.randint(2, 4), rng.randint(1, 4), seed=rng.random())
            else:
                t = generate_random(seed=rng.random())
                if all(excess_dimension(r) == 0 for r in t.rules.values()):
                    continue
            for s in t.systems.values():
                try:
                    rules = ancilla_rules(t, s.name)
                except MissingRule:
                    continue
                ancillas = {(r.right if side is Side.LEFT else r.left).name for r, side in rules}
                if s.dim >= 2:
                    for _ in range(mixed_per_factor):
                        rho = random_state(rng, s, "mixed")
                        _require(classify_state(rho).kind is StateKind.DETERMINISTIC_MIXED, "sampler")
                        for anc in ancillas:
                            _require(not check_purification(t, rho, anc).purifiable,
                                     f"mixed state {rho.coords} purified by {anc}")
                        n_mixed += 1
                for v in s.vertices():
                    res = check_purification(t, v)
                    _require(res.purifiable, f"vertex {v.coords} of {s.name} not purifiable")
                    r = t.rule(res.composite)
                    side = Side.LEFT if r.left == s else Side.RIGHT
                    _require(marginalize(r, r.system.vertex(res.witness_vertex), side) == v,
                             "witness marginal mismatch")
                    n_pure += 1
        _require(n_mixed >= min_mixed, f"only {n_mixed} mixed states sampled")
        return f"{n_mixed} mixed states not purifiable; {n_pure} vertices purified with verified witnesses"
    return _run(7, "no mixed state has a purification", body)


def criterion_ct_regression() -> CriterionResult:
    def body():
        t = generate_ct((2, 2))
        r = t.rule("AB")
        for s in t.systems.values():
            _require(check_classicality(s).classical, f"{s.name} not classical")
        _require(not entanglement_present(r).present, "CT composite entangled")
        _require(excess_dimension(r) == 0, "CT excess dimension nonzero")
        half = Fraction(1, 2)
        for p, expected in [((1, 0), True), ((0, 1), True), ((half, half), False),
                            ((Fraction(1, 3), Fraction(2, 3)), False)]:
            v = check_superposition(t.system("A"), [1, 2], p, Mode.WEAK)
            _require(v.holds is expected, f"weak superposition of {p}: {v}")
        for s in t.systems.values():
            rho = s.state((half, half))
            _require(not check_purification(t, rho).purifiable, "mixed CT state purifiable")
        return "classical, no entanglement, delta 0, weak superposition only for point masses, no purification"
    return _run(8, "classical theory regression", body)


def criterion_t5_golden(golden_text=None) -> CriterionResult:
    def body():
        t = t5_theory()
        text = report_json(build_report(t))
        _require(text == report_json(build_report(parse_theory(serialize_theory(t)))), "report not stable")
        if golden_text is not None:
            _require(text == golden_text, "report differs from golden file")
        c = build_report(t)["composites"]["AB"]
        _require(c["excess_dimension"] == 1, "delta != 1")
        _require(c["witness_vertex"] == 1, "witness != 1")
        _require(c["atomic_composition"] is False, "atomic")
        _require(c["discriminability_degree"] == 2, "degree != 2")
        _require(c["vertex_marginals"]["left"][0] == 1, "marginal of vertex 1 != |1>_A")
        return "delta 1, witness vertex 1, not atomic, degree 2, vertex 1 marginalises to |1>_A" + (
            ", byte-identical to golden" if golden_text is not None else "")
    return _run(9, "toy theory T5 report", body)


def criterion_round_trip(n_files: int = 100, seed: int = 10) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        for idx in range(n_files):
            kind = idx % 3
            if kind == 0:
                t = generate_random(seed=rng.random())
            elif kind == 1:
                t = generate_toy(rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 5), seed=rng.random())
            else:
                t = generate_ct([rng.randint(1, 4) for _ in range(rng.randint(1, 3))])
            text = serialize_theory(t)
            _require(serialize_theory(parse_theory(text)) == text, f"file {idx} not round-trip stable")
        return f"{n_files} canonical files byte-identical after parse + serialize"
    return _run(10, "serialization round trip", body)


def run_all(scale: float = 1.0, golden_text=None) -> list:
    """Run every criterion; ``scale < 1`` shrinks the randomised batteries."""
    def n(x, lo=1):
        return max(lo, int(x * scale))
    return [
        criterion_causality(n(200)),
        criterion_entanglement_vs_discriminability(n(200)),
        criterion_entanglement_vs_atomicity(n(200)),
        criterion_separability_oracle(n(100), 10),
        criterion_structure(n(100), n(1000)),
        criterion_no_superposition(n(50), n(20), n(5)),
        criterion_no_purification(n(60, 2), 10, min_mixed=n(500)),
        criterion_ct_regression(),
        criterion_t5_golden(golden_text),
        criterion_round_trip(n(100)),
    ]
