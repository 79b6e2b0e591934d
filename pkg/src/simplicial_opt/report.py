"""Report documents: one JSON-able dict, rendered both as JSON and as text."""
from __future__ import annotations

from fractions import Fraction

from . import exact
from .analysis import analyse_composite, check_causality, check_classicality
from .composition import Side, Theory, marginalize
from .errors import MissingRule, NoDeterministicEffect, NonUniqueDeterministicEffect
from .principles import check_purification, check_superposition, maximal_discriminable_set
from .system import StateKind, classify_state
from .theory_io import FORMAT_VERSION, dumps_canonical

fmt = exact.format_rational


def _vec(v):
    return [fmt(x) for x in v]


def system_section(t: Theory, s) -> dict:
    out = {"dim": s.dim, "effect_model": "restricted" if s.restricted else "full_dual"}
    try:
        out["causal"] = True
        out["deterministic_effect"] = _vec(check_causality(s).effect.coords)
    except (NoDeterministicEffect, NonUniqueDeterministicEffect) as exc:
        out["causal"] = False
        out["deterministic_effect"] = None
        out["causality_error"] = str(exc)
        return out
    out["classical"] = check_classicality(s).classical
    dset = maximal_discriminable_set(s)
    out["maximal_discriminable_set"] = dset
    d = len(dset)
    uniform = [Fraction(1, d)] * d
    sup = {}
    for mode in ("ultraweak", "weak", "strong"):
        v = check_superposition(s, dset, uniform, mode)
        sup[mode] = "vacuous" if v.vacuous else v.holds
    out["uniform_superposition"] = sup
    if s.dim >= 2:
        bary = s.state([Fraction(1, s.dim)] * s.dim)
        try:
            out["barycenter_purifiable"] = check_purification(t, bary).purifiable
        except MissingRule:
            out["barycenter_purifiable"] = None
    return out


def composite_section(t: Theory, name: str) -> dict:
    rep = analyse_composite(t, name)
    r = t.rule(name)
    marg = {}
    for side in (Side.LEFT, Side.RIGHT):
        idx = []
        for k in range(1, r.dim + 1):
            cls = classify_state(marginalize(r, r.system.vertex(k), side))
            assert cls.kind is StateKind.PURE_VERTEX
            idx.append(cls.vertex)
        marg[side.value] = idx
    cert = rep.entangled_certificate
    return {
        "left": r.left.name,
        "right": r.right.name,
        "dim": r.dim,
        "excess_dimension": rep.excess_dimension,
        "entanglement_present": rep.entanglement_present,
        "witness_vertex": rep.witness_vertex,
        "entangled_certificate": None if cert is None else {
            "block": list(cert.violating_block),
            "vertices": list(cert.inconsistent_indices),
            "ratios": _vec(cert.ratios),
        },
        "atomic_composition": rep.atomic_composition,
        "violating_block": None if rep.violating_block is None else list(rep.violating_block),
        "local_discriminability": rep.local_discriminability,
        "discriminability_degree": rep.discriminability_degree,
        "vertex_marginals": marg,
    }


def build_report(t: Theory) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "systems": {s.name: system_section(t, s) for s in t.systems.values()},
        "composites": {name: composite_section(t, name) for name in t.rules},
    }


def report_json(doc: dict) -> str:
    return dumps_canonical(doc)


def _yn(b):
    return {True: "yes", False: "no", None: "n/a"}.get(b, str(b))


def render_text(doc: dict) -> str:
    lines = []
    for name, s in sorted(doc["systems"].items()):
        lines.append(f"system {name} (D = {s['dim']}, {s['effect_model']})")
        if not s["causal"]:
            lines.append(f"  causal: NO - {s['causality_error']}")
            continue
        lines.append(f"  causal: yes, deterministic effect ({', '.join(s['deterministic_effect'])})")
        lines.append(f"  classical: {_yn(s['classical'])}")
        lines.append(f"  maximal discriminable set: {s['maximal_discriminable_set']}")
        sup = ", ".join(f"{m}={_yn(v) if v != 'vacuous' else v}"
                        for m, v in s["uniform_superposition"].items())
        lines.append(f"  superposition of the uniform distribution: {sup}")
        if "barycenter_purifiable" in s:
            lines.append(f"  barycenter purifiable: {_yn(s['barycenter_purifiable'])}")
    for name, c in sorted(doc["composites"].items()):
        lines.append(f"composite {name} = {c['left']} x {c['right']} (D = {c['dim']})")
        lines.append(f"  excess dimension: {c['excess_dimension']}")
        if c["entanglement_present"]:
            cert = c["entangled_certificate"]
            lines.append(f"  entangled states: yes, witness vertex {c['witness_vertex']} "
                         f"(block {tuple(cert['block'])}, vertices {tuple(cert['vertices'])}, "
                         f"ratios {cert['ratios'][0]} vs {cert['ratios'][1]})")
        else:
            lines.append("  entangled states: no")
        atom = "yes" if c["atomic_composition"] else f"no, block {tuple(c['violating_block'])}"
        lines.append(f"  atomic composition: {atom}")
        lines.append(f"  local discriminability: {_yn(c['local_discriminability'])} "
                     f"(degree {c['discriminability_degree']})")
        lines.append(f"  vertex marginals: left {c['vertex_marginals']['left']}, "
                     f"right {c['vertex_marginals']['right']}")
    return "\n".join(lines) + "\n"
