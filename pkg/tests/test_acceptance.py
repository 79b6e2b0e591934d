"""Acceptance battery: ten criteria, exact checks, one PASS/FAIL line each.

Run directly (``python tests/test_acceptance.py``) or through pytest, where
each criterion is its own test and its line is written to the terminal.
"""
import json
import time
from pathlib import Path

import pytest

from simplicial_opt import battery

GOLDEN = Path(__file__).resolve().parent / "golden" / "t5_report.json"

CRITERIA = {
    1: lambda: battery.criterion_causality(200),
    2: lambda: battery.criterion_entanglement_vs_discriminability(200),
    3: lambda: battery.criterion_entanglement_vs_atomicity(200),
    4: lambda: battery.criterion_separability_oracle(100, 10),
    5: lambda: battery.criterion_structure(100, 1000),
    6: lambda: battery.criterion_no_superposition(50, 20, 5),
    7: lambda: battery.criterion_no_purification(60, 10, min_mixed=500),
    8: battery.criterion_ct_regression,
    9: lambda: battery.criterion_t5_golden(GOLDEN.read_text(encoding="utf-8")),
    10: lambda: battery.criterion_round_trip(100),
}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    start = time.perf_counter()
    result = CRITERIA[number]()
    elapsed = time.perf_counter() - start
    with capsys.disabled():
        print(f"\n{result.line()} ({elapsed:.1f} s)")
    assert result.passed, result.detail
    assert elapsed < 60


def test_golden_values_by_hand():
    # values worked out by hand for the five-vertex toy composite
    doc = json.loads(GOLDEN.read_text(encoding="utf-8"))
    ab = doc["composites"]["AB"]
    assert ab["dim"] == 5 and ab["excess_dimension"] == 1
    assert ab["entanglement_present"] is True and ab["witness_vertex"] == 1
    assert ab["atomic_composition"] is False and ab["violating_block"] == [1, 1]
    assert ab["discriminability_degree"] == 2 and ab["local_discriminability"] is False
    assert ab["vertex_marginals"] == {"left": [1, 1, 1, 2, 2], "right": [1, 1, 2, 1, 2]}
    for name in ("A", "B"):
        assert doc["systems"][name]["deterministic_effect"] == ["1", "1"]
        assert doc["systems"][name]["classical"] is True


if __name__ == "__main__":
    results = [CRITERIA[n]() for n in sorted(CRITERIA)]
    for r in results:
        print(r.line())
    raise SystemExit(0 if all(r.passed for r in results) else 1)
