"""JSON theory files.

Schema (format_version "1")::

    {"format_version": "1",
     "systems": [{"name": "A", "dim": 2, "effect_model": "full_dual"}, ...],
     "composites": [{"name": "AB", "left": "A", "right": "B", "dim": 5,
                     "blocks": [{"i": 1, "j": 1, "vertices": [1, 2],
                                 "weights": ["1/2", "1/2"]}, ...]}, ...]}

Restricted effect models are written ``{"cone": [["1", "1"], ["1", "0"]]}``.
Composites may carry an ``effect_model`` too; it defaults to the full dual.
Rationals are strings ``"p/q"`` or ``"p"``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from . import exact
from .composition import CompositionRule, Theory, validate_rule
from .errors import TheorySyntaxError, TheoryValidationError, UnknownSystem
from .system import FULL_DUAL, RestrictedCone, SystemSpace

FORMAT_VERSION = "1"


def _expect(cond, message, path):
    if not cond:
        raise TheorySyntaxError(message, path=path)


def _int(value, path, minimum=None):
    _expect(isinstance(value, int) and not isinstance(value, bool), f"expected an integer, got {value!r}", path)
    if minimum is not None:
        _expect(value >= minimum, f"expected an integer >= {minimum}, got {value}", path)
    return value


def _rational(value, path):
    _expect(isinstance(value, (str, int)) and not isinstance(value, bool),
            f"expected a rational string, got {value!r}", path)
    try:
        return exact.parse_rational(value)
    except ValueError as exc:
        raise TheorySyntaxError(str(exc), path=path) from None


def _effect_model(value, dim, path):
    if value is None or value == "full_dual":
        return FULL_DUAL
    _expect(isinstance(value, dict) and set(value) == {"cone"},
            'effect_model must be "full_dual" or {"cone": [...]}', path)
    gens = value["cone"]
    _expect(isinstance(gens, list) and gens, "cone needs a nonempty generator list", f"{path}.cone")
    out = []
    for g_idx, g in enumerate(gens):
        gp = f"{path}.cone[{g_idx}]"
        _expect(isinstance(g, list) and len(g) == dim, f"generator must list {dim} rationals", gp)
        out.append(tuple(_rational(x, f"{gp}[{t}]") for t, x in enumerate(g)))
    return RestrictedCone(tuple(out))


@dataclass
class TheoryDocument:
    """Parsed but not yet validated theory file."""

    systems: list
    rules: list  # CompositionRule in file order, unvalidated


def read_document(text: str) -> TheoryDocument:
    """Parse JSON and resolve names; composition invariants are *not* checked."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TheorySyntaxError(exc.msg, line=exc.lineno) from None
    _expect(isinstance(data, dict), "top level must be an object", "$")
    _expect(data.get("format_version") == FORMAT_VERSION,
            f"format_version must be {FORMAT_VERSION!r}", "format_version")
    unknown = set(data) - {"format_version", "systems", "composites"}
    _expect(not unknown, f"unknown fields {sorted(unknown)}", "$")
    systems_raw = data.get("systems", [])
    composites_raw = data.get("composites", [])
    _expect(isinstance(systems_raw, list), "must be a list", "systems")
    _expect(isinstance(composites_raw, list), "must be a list", "composites")

    known = {}
    systems = []
    for n, item in enumerate(systems_raw):
        path = f"systems[{n}]"
        _expect(isinstance(item, dict), "must be an object", path)
        extra = set(item) - {"name", "dim", "effect_model"}
        _expect(not extra, f"unknown fields {sorted(extra)}", path)
        name = item.get("name")
        _expect(isinstance(name, str) and name, "name must be a nonempty string", f"{path}.name")
        _expect(name not in known, f"duplicate system name {name!r}", f"{path}.name")
        dim = _int(item.get("dim"), f"{path}.dim", minimum=1)
        model = _effect_model(item.get("effect_model"), dim, f"{path}.effect_model")
        try:
            s = SystemSpace(name, dim, model)
        except ValueError as exc:
            raise TheoryValidationError(str(exc), path=path) from None
        known[name] = s
        systems.append(s)

    pending = []
    for n, item in enumerate(composites_raw):
        path = f"composites[{n}]"
        _expect(isinstance(item, dict), "must be an object", path)
        extra = set(item) - {"name", "left", "right", "dim", "blocks", "effect_model"}
        _expect(not extra, f"unknown fields {sorted(extra)}", path)
        for key in ("name", "left", "right"):
            _expect(isinstance(item.get(key), str) and item.get(key),
                    f"{key} must be a nonempty string", f"{path}.{key}")
        dim = _int(item.get("dim"), f"{path}.dim", minimum=1)
        blocks_raw = item.get("blocks")
        _expect(isinstance(blocks_raw, list), "blocks must be a list", f"{path}.blocks")
        blocks, weights = {}, {}
        for b, blk in enumerate(blocks_raw):
            bp = f"{path}.blocks[{b}]"
            _expect(isinstance(blk, dict) and set(blk) == {"i", "j", "vertices", "weights"},
                    "block needs exactly i, j, vertices, weights", bp)
            key = (_int(blk["i"], f"{bp}.i", 1), _int(blk["j"], f"{bp}.j", 1))
            _expect(key not in blocks, f"block {key} listed twice", bp)
            _expect(isinstance(blk["vertices"], list), "vertices must be a list", f"{bp}.vertices")
            _expect(isinstance(blk["weights"], list), "weights must be a list", f"{bp}.weights")
            blocks[key] = tuple(_int(v, f"{bp}.vertices[{t}]", 1) for t, v in enumerate(blk["vertices"]))
            weights[key] = tuple(_rational(w, f"{bp}.weights[{t}]") for t, w in enumerate(blk["weights"]))
        model = _effect_model(item.get("effect_model"), dim, f"{path}.effect_model")
        pending.append((path, item, dim, blocks, weights, model))

    rules = []
    while pending:
        progress = False
        for entry in list(pending):
            path, item, dim, blocks, weights, model = entry
            if item["left"] in known and item["right"] in known:
                _expect(item["name"] not in known, f"duplicate system name {item['name']!r}", f"{path}.name")
                try:
                    r = CompositionRule(item["name"], known[item["left"]], known[item["right"]],
                                        dim, blocks, weights, model)
                    known[r.name] = r.system
                except ValueError as exc:
                    raise TheoryValidationError(str(exc), path=path) from None
                rules.append((path, r))
                pending.remove(entry)
                progress = True
        if not progress:
            path, item = pending[0][:2]
            missing = item["left"] if item["left"] not in known else item["right"]
            raise UnknownSystem(f"{path}: unknown system {missing!r}")
    rules.sort(key=lambda pr: int(pr[0].split("[")[1].rstrip("]")))
    return TheoryDocument(systems, rules)


def _dependency_order(rules):
    """File order, except that a composite comes after the composites it uses."""
    names = {r.name for _, r in rules}
    done, out, pending = set(), [], list(rules)
    while pending:
        for idx, (path, r) in enumerate(pending):
            if all(f.name not in names or f.name in done for f in (r.left, r.right)):
                break
        out.append(pending.pop(idx))
        done.add(r.name)
    return out


def parse_theory(text: str) -> Theory:
    """Parse and validate a theory file; raises on the first problem found."""
    doc = read_document(text)
    t = Theory()
    for s in doc.systems:
        t.add_system(s)
    for path, r in _dependency_order(doc.rules):
        report = validate_rule(r)
        if not report.valid:
            raise TheoryValidationError(str(report.violations[0]), path=path,
                                        violations=report.violations)
        try:
            t.add_rule(r)
        except TheoryValidationError as exc:
            raise TheoryValidationError(str(exc), path=path) from None
    return t


def load_theory(path) -> Theory:
    with open(path, encoding="utf-8") as fh:
        return parse_theory(fh.read())


# --------------------------------------------------------------------------
# serialization


def _model_json(model):
    if model is FULL_DUAL:
        return "full_dual"
    return {"cone": [[exact.format_rational(x) for x in g] for g in model.generators]}


def theory_to_json(t: Theory) -> dict:
    systems = [{"name": s.name, "dim": s.dim, "effect_model": _model_json(s.effect_model)}
               for s in sorted(t.systems.values(), key=lambda s: s.name)]
    composites = []
    for r in sorted(t.rules.values(), key=lambda r: r.name):
        entry = {
            "name": r.name,
            "left": r.left.name,
            "right": r.right.name,
            "dim": r.dim,
            "blocks": [{"i": i, "j": j, "vertices": list(r.blocks[i, j]),
                        "weights": [exact.format_rational(w) for w in r.weights[i, j]]}
                       for (i, j) in sorted(r.blocks)],
        }
        if r.effect_model is not FULL_DUAL:
            entry["effect_model"] = _model_json(r.effect_model)
        composites.append(entry)
    return {"format_version": FORMAT_VERSION, "systems": systems, "composites": composites}


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize_theory(t: Theory) -> str:
    return dumps_canonical(theory_to_json(t))
