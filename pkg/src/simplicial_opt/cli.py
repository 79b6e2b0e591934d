"""Command-line interface.

Exit codes: 0 success, 1 a property violation was found, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import exact
from .analysis import (check_associativity, check_atomicity, check_causality, check_classicality,
                       discriminability_degree, entanglement_present, is_separable)
from .battery import run_all
from .composition import compose_nfold, compose_states, excess_dimension, validate_rule
from .errors import NoDeterministicEffect, NonUniqueDeterministicEffect, OPTError
from .generators import DEFAULT_MAX_DEN, generate_ct, generate_random, generate_toy
from .principles import check_purification, check_superposition, maximal_discriminable_set
from .report import build_report, render_text, report_json
from .theory_io import dumps_canonical, parse_theory, read_document, serialize_theory

EXIT_OK, EXIT_FINDING, EXIT_INPUT = 0, 1, 2

fmt = exact.format_rational


class UsageError(Exception):
    pass


def _vector(text):
    try:
        return exact.vec(x for x in text.split(","))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _ints(text):
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _names(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(path):
    return parse_theory(_read(path))


class Output:
    """Collects a machine dict and human lines from the same values."""

    def __init__(self, args):
        self.args = args
        self.data = {}
        self.lines = []

    def emit(self):
        text = dumps_canonical(self.data) if self.args.json else "\n".join(self.lines) + "\n"
        if getattr(self.args, "output", None):
            with open(self.args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


# --------------------------------------------------------------------------
# subcommands


def cmd_validate(args, out):
    doc = read_document(_read(args.theory))
    status = EXIT_OK
    out.data["composites"] = {}
    for path, r in doc.rules:
        rep = validate_rule(r)
        out.data["composites"][r.name] = {"valid": rep.valid, "violations": [str(v) for v in rep.violations]}
        if rep.valid:
            out.lines.append(f"{r.name}: valid (excess dimension {excess_dimension(r)})")
        else:
            status = EXIT_FINDING
            out.lines.append(f"{r.name} ({path}): INVALID")
            out.lines.extend(f"  - {v}" for v in rep.violations)
    if status == EXIT_OK:
        try:
            parse_theory(_read(args.theory))
        except OPTError as exc:
            out.lines.append(f"theory: INVALID - {exc}")
            out.data["error"] = str(exc)
            status = EXIT_FINDING
    out.data["valid"] = status == EXIT_OK
    out.lines.append("theory valid" if status == EXIT_OK else "theory invalid")
    return status


def cmd_report(args, out):
    doc = build_report(_load(args.theory))
    out.data = doc
    out.lines = render_text(doc).rstrip("\n").split("\n")
    return EXIT_OK


def cmd_compose(args, out):
    t = _load(args.theory)
    if args.factors:
        node = compose_nfold(t, _names(args.factors))
        sigs = node.signatures()
        out.data = {"bracketing": node.bracketing(), "dim": node.dim,
                    "vertices": [{"vertex": k, "factors": list(s), "weight": fmt(w)}
                                 for k, (s, w) in enumerate(sigs, 1)]}
        out.lines.append(f"{node.bracketing()}: D = {node.dim}")
        out.lines.extend(f"  |{k}> refines {tuple(s)} with weight {fmt(w)}" for k, (s, w) in enumerate(sigs, 1))
        return EXIT_OK
    if not (args.composite and args.left and args.right):
        raise UsageError("compose needs --factors, or --composite with --left and --right")
    r = t.rule(args.composite)
    omega = compose_states(r, r.left.state(_vector(args.left)), r.right.state(_vector(args.right)))
    out.data = {"composite": r.name, "state": [fmt(x) for x in omega.coords]}
    out.lines.append(f"{r.name}: ({', '.join(out.data['state'])})")
    return EXIT_OK


def cmd_check(args, out):
    t = _load(args.theory)
    prop = args.property
    if prop in ("causality", "classicality"):
        if not args.system:
            raise UsageError(f"check {prop} needs --system")
        s = t.system(args.system)
        if prop == "causality":
            try:
                e = check_causality(s).effect
            except (NoDeterministicEffect, NonUniqueDeterministicEffect) as exc:
                out.data = {"system": s.name, "causal": False, "error": str(exc)}
                out.lines.append(f"{s.name}: NOT causal - {exc}")
                return EXIT_FINDING
            out.data = {"system": s.name, "causal": True, "deterministic_effect": [fmt(x) for x in e.coords]}
            out.lines.append(f"{s.name}: causal, unique deterministic effect "
                             f"({', '.join(out.data['deterministic_effect'])})")
            return EXIT_OK
        res = check_classicality(s)
        out.data = {"system": s.name, "classical": res.classical}
        if res.classical:
            out.data["test"] = [[fmt(x) for x in a.coords] for a in res.test]
            out.lines.append(f"{s.name}: classical, discriminating test = dual basis")
        else:
            out.data["certificate"] = [fmt(x) for x in res.certificate]
            out.lines.append(f"{s.name}: NOT classical (infeasibility certificate "
                             f"{out.data['certificate']})")
        return EXIT_OK
    if prop == "associativity" or (prop == "local-discriminability" and args.factors):
        if not args.factors:
            raise UsageError("check associativity needs --factors A,B,C")
        names = _names(args.factors)
        if prop == "local-discriminability":
            deg = discriminability_degree(t, names)
            out.data = {"factors": names, "discriminability_degree": deg, "local_discriminability": deg == 1}
            out.lines.append(f"{'x'.join(names)}: discriminability degree {deg}")
            return EXIT_OK
        if len(names) != 3:
            raise UsageError("associativity needs exactly three factors")
        res = check_associativity(t, *names)
        out.data = {"factors": names, "associative": res.associative, "detail": res.detail,
                    "bijection": {str(k): v for k, v in (res.bijection or {}).items()}}
        out.lines.append("associative" + (f", bijection {res.bijection}" if res.associative
                                          else f": NO - {res.detail}"))
        return EXIT_OK if res.associative else EXIT_FINDING
    if not args.composite:
        raise UsageError(f"check {prop} needs --composite")
    r = t.rule(args.composite)
    if prop == "atomicity":
        ok, block = check_atomicity(r)
        out.data = {"composite": r.name, "atomic_composition": ok, "violating_block": list(block) if block else None}
        out.lines.append(f"{r.name}: atomic composition" if ok else
                         f"{r.name}: NOT atomic, |{block[0]}>|{block[1]}> is mixed")
    elif prop == "entanglement":
        ent = entanglement_present(r)
        out.data = {"composite": r.name, "entanglement_present": ent.present,
                    "witness_vertex": ent.witness_vertex,
                    "certificate": str(ent.certificate) if ent.certificate else None}
        out.lines.append(f"{r.name}: entangled states present, witness vertex {ent.witness_vertex}: "
                         f"{ent.certificate}" if ent.present else f"{r.name}: no entangled states")
    else:
        deg = discriminability_degree(t, [r.left.name, r.right.name])
        out.data = {"composite": r.name, "discriminability_degree": deg, "local_discriminability": deg == 1}
        out.lines.append(f"{r.name}: local discriminability {'holds' if deg == 1 else 'fails'} (degree {deg})")
    return EXIT_OK


def cmd_separable(args, out):
    t = _load(args.theory)
    r = t.rule(args.composite)
    cert = is_separable(r, r.system.state(_vector(args.state)))
    out.data = {"composite": r.name, "separable": cert.separable}
    if cert.separable:
        out.data["lambda"] = {f"{i},{j}": fmt(v) for (i, j), v in cert.lambdas.items()}
    else:
        out.data.update(block=list(cert.violating_block), vertices=list(cert.inconsistent_indices),
                        ratios=[fmt(x) for x in cert.ratios])
    out.lines.append(str(cert))
    return EXIT_OK


def cmd_superposition(args, out):
    t = _load(args.theory)
    s = t.system(args.system)
    dset = _ints(args.set) if args.set else maximal_discriminable_set(s)
    p = _vector(args.dist)
    v = check_superposition(s, dset, p, args.mode)
    out.data = {"system": s.name, "mode": v.mode.value, "discriminable_set": dset,
                "distribution": [fmt(x) for x in p],
                "holds": v.holds, "witness_vertex": v.witness_vertex, "reason": v.reason,
                "observation": None if v.observation is None else {**v.observation.to_json(), "effects": [[fmt(x) for x in a.coords] for a in v.observation.effects()]}}
    out.lines.append(f"{args.mode} superposition on {s.name}: {v}")
    if v.observation is not None and not v.holds:
        rows = [", ".join(fmt(x) for x in a.coords) for a in v.observation.effects()]
        out.lines.append("  counterexample observation: " + "; ".join(f"a{t}=({r})" for t, r in enumerate(rows, 1)))
    return EXIT_OK


def cmd_purify(args, out):
    t = _load(args.theory)
    s = t.system(args.system)
    res = check_purification(t, s.state(_vector(args.state)), args.ancilla)
    out.data = {"system": s.name, "purifiable": res.purifiable, "scanned": res.scanned,
                "composite": res.composite, "witness_vertex": res.witness_vertex}
    if res.purifiable:
        out.lines.append(f"purifiable: vertex {res.witness_vertex} of {res.composite} "
                         f"marginalises to the state")
    else:
        out.lines.append(f"NOT purifiable ({res.scanned} pure states scanned)")
    return EXIT_OK


def cmd_generate(args, out):
    if args.kind == "ct":
        t = generate_ct(_ints(args.dims))
    elif args.kind == "toy":
        if args.delta < 1:
            raise UsageError("--delta must be at least 1")
        t = generate_toy(args.da, args.db, args.delta, seed=args.seed, max_den=args.max_den)
    else:
        t = generate_random(seed=args.seed, max_den=args.max_den)
    text = serialize_theory(t)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return None


def cmd_selftest(args, out):
    results = run_all(scale=args.scale)
    out.data = {"criteria": [{"number": r.number, "title": r.title, "passed": r.passed,
                              "detail": r.detail} for r in results]}
    out.lines = [r.line() for r in results]
    return EXIT_OK if all(r.passed for r in results) else EXIT_FINDING


# --------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("-o", "--output", help="write output to a file")

    p = argparse.ArgumentParser(prog="simplicial-opt",
                                description="Exact analysis of simplicial probabilistic theories.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", parents=[common], help="check every composition rule")
    sp.add_argument("theory")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("report", parents=[common], help="full analysis report")
    sp.add_argument("theory")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("compose", parents=[common], help="compose states or list n-fold vertices")
    sp.add_argument("theory")
    sp.add_argument("--composite")
    sp.add_argument("--left", help="left state, e.g. 1/2,1/2")
    sp.add_argument("--right", help="right state")
    sp.add_argument("--factors", help="comma-separated factor names (left-associated)")
    sp.set_defaults(func=cmd_compose)

    sp = sub.add_parser("check", parents=[common], help="decide one structural property")
    sp.add_argument("property", choices=["causality", "classicality", "atomicity", "entanglement",
                                         "local-discriminability", "associativity"])
    sp.add_argument("theory")
    sp.add_argument("--system")
    sp.add_argument("--composite")
    sp.add_argument("--factors")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("separable", parents=[common], help="separability certificate for a state")
    sp.add_argument("theory")
    sp.add_argument("--composite", required=True)
    sp.add_argument("--state", required=True)
    sp.set_defaults(func=cmd_separable)

    sp = sub.add_parser("superposition", parents=[common], help="superposition principle for a distribution")
    sp.add_argument("theory")
    sp.add_argument("--system", required=True)
    sp.add_argument("--dist", required=True)
    sp.add_argument("--set", help="discriminable vertex set (default: greedy maximal set)")
    sp.add_argument("--mode", choices=["ultraweak", "weak", "strong"], default="weak")
    sp.set_defaults(func=cmd_superposition)

    sp = sub.add_parser("purify", parents=[common], help="search a purification of a state")
    sp.add_argument("theory")
    sp.add_argument("--system", required=True)
    sp.add_argument("--state", required=True)
    sp.add_argument("--ancilla")
    sp.set_defaults(func=cmd_purify)

    sp = sub.add_parser("generate", help="emit a generated theory file")
    sp.add_argument("kind", choices=["ct", "toy", "random"])
    sp.add_argument("--dims", default="2,2", help="ct: comma-separated dimensions")
    sp.add_argument("--da", type=int, default=2)
    sp.add_argument("--db", type=int, default=2)
    sp.add_argument("--delta", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-den", type=int, default=DEFAULT_MAX_DEN)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("selftest", parents=[common], help="run the property battery")
    sp.add_argument("--scale", type=float, default=0.1, help="battery size relative to the full suite")
    sp.add_argument("--seed", type=int, default=0, help="unused; batteries use fixed seeds")
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    out = Output(args)
    try:
        status = args.func(args, out)
    except (UsageError, OPTError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    if status is not None:
        out.emit()
        return status
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
