import json
import random

import pytest

from simplicial_opt.analysis import check_classicality, entanglement_present
from simplicial_opt.composition import excess_dimension, validate_rule
from simplicial_opt.errors import TheorySyntaxError, TheoryValidationError, UnknownSystem
from simplicial_opt.generators import (generate_ct, generate_random, generate_toy, random_distribution,
                                       t5_theory)
from simplicial_opt.theory_io import parse_theory, serialize_theory

CT_BIT = {
    "format_version": "1",
    "systems": [{"name": "A", "dim": 2, "effect_model": "full_dual"}],
    "composites": [{"name": "AA", "left": "A", "right": "A", "dim": 4, "blocks": [
        {"i": i, "j": j, "vertices": [2 * (i - 1) + j], "weights": ["1"]}
        for i in (1, 2) for j in (1, 2)]}],
}


def t5_doc(weights=("1/2", "1/2")):
    return {
        "format_version": "1",
        "systems": [{"name": "A", "dim": 2, "effect_model": "full_dual"},
                    {"name": "B", "dim": 2, "effect_model": "full_dual"}],
        "composites": [{"name": "AB", "left": "A", "right": "B", "dim": 5, "blocks": [
            {"i": 1, "j": 1, "vertices": [1, 2], "weights": list(weights)},
            {"i": 1, "j": 2, "vertices": [3], "weights": ["1"]},
            {"i": 2, "j": 1, "vertices": [4], "weights": ["1"]},
            {"i": 2, "j": 2, "vertices": [5], "weights": ["1"]}]}],
    }


def test_parse_ct_bit():
    t = parse_theory(json.dumps(CT_BIT))
    assert len(t.systems) == 1 and len(t.rules) == 1
    assert excess_dimension(t.rule("AA")) == 0


def test_parse_t5():
    t = parse_theory(json.dumps(t5_doc()))
    assert excess_dimension(t.rule("AB")) == 1
    assert serialize_theory(t) == serialize_theory(t5_theory())


def test_weights_not_summing_to_one():
    with pytest.raises(TheoryValidationError) as info:
        parse_theory(json.dumps(t5_doc(("1/2", "1/3"))))
    assert "weights sum ≠ 1" in str(info.value)


def test_syntax_error_reports_line():
    with pytest.raises(TheorySyntaxError) as info:
        parse_theory('{\n  "format_version": "1",\n  "systems": [,]\n}')
    assert info.value.line == 3


@pytest.mark.parametrize("mutate,fragment", [
    (lambda d: d["composites"][0]["blocks"][0].update(weights=[0.5, 0.5]), "composites[0].blocks[0].weights"),
    (lambda d: d["systems"][0].update(dim=0), "systems[0].dim"),
    (lambda d: d.update(format_version="2"), "format_version"),
    (lambda d: d["systems"][0].update(effect_model="quantum"), "systems[0].effect_model"),
])
def test_field_errors_carry_path(mutate, fragment):
    doc = t5_doc()
    mutate(doc)
    with pytest.raises((TheorySyntaxError, TheoryValidationError)) as info:
        parse_theory(json.dumps(doc))
    assert fragment in str(info.value)


def test_unknown_system():
    doc = t5_doc()
    doc["composites"][0]["right"] = "Q"
    with pytest.raises(UnknownSystem):
        parse_theory(json.dumps(doc))


def test_restricted_cone_round_trip():
    doc = {"format_version": "1",
           "systems": [{"name": "R", "dim": 2, "effect_model": {"cone": [["1", "1"], ["1", "0"]]}}],
           "composites": []}
    t = parse_theory(json.dumps(doc))
    assert t.system("R").restricted
    assert serialize_theory(parse_theory(serialize_theory(t))) == serialize_theory(t)
    assert not check_classicality(t.system("R")).classical


def test_nested_composites_any_order():
    text = serialize_theory(generate_ct([2, 2, 2]))
    doc = json.loads(text)
    doc["composites"].reverse()
    assert serialize_theory(parse_theory(json.dumps(doc))) == text


def test_canonical_form_sorted():
    text = serialize_theory(generate_ct([2, 3]))
    doc = json.loads(text)
    assert [s["name"] for s in doc["systems"]] == ["A", "B"]
    keys = [(b["i"], b["j"]) for b in doc["composites"][0]["blocks"]]
    assert keys == sorted(keys)
    assert text.endswith("\n")


# --------------------------------------------------------------------------
# generators


def test_generate_ct():
    t = generate_ct([2, 2])
    assert not any(entanglement_present(r).present for r in t.rules.values())
    trit = generate_ct([3])
    assert not trit.rules and check_classicality(trit.system("A")).classical
    assert generate_ct([2, 3]).rule("AB").dim == 6


def test_generate_toy():
    t = generate_toy(2, 2, 1, seed=0)
    r = t.rule("AB")
    assert r.dim == 5 and entanglement_present(r).present
    with pytest.raises(ValueError):
        generate_toy(2, 2, 0)


def test_generate_toy_deterministic_and_bounded():
    a = serialize_theory(generate_toy(3, 2, 4, seed=11, max_den=8))
    assert a == serialize_theory(generate_toy(3, 2, 4, seed=11, max_den=8))
    r = parse_theory(a).rule("AB")
    assert validate_rule(r).valid and r.dim == 10
    assert all(w.denominator <= 8 for ws in r.weights.values() for w in ws)


@pytest.mark.parametrize("seed", range(20))
def test_generated_theories_validate(seed):
    t = generate_random(seed=seed)
    assert all(validate_rule(r).valid for r in t.rules.values())
    t = generate_toy(1 + seed % 3, 1 + seed % 4, 1 + seed % 5, seed=seed)
    assert validate_rule(t.rule("AB")).valid


def test_random_distribution():
    rng = random.Random(0)
    for size in range(1, 8):
        p = random_distribution(rng, size, 16)
        assert sum(p) == 1 and all(x > 0 and x.denominator <= 16 for x in p)
    with pytest.raises(ValueError):
        random_distribution(rng, 20, 16)
