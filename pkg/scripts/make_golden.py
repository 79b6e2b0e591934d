"""Regenerate tests/golden/t5_report.json after checking its key values."""
from pathlib import Path

from simplicial_opt.battery import criterion_t5_golden
from simplicial_opt.generators import t5_theory
from simplicial_opt.report import build_report, report_json

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden" / "t5_report.json"

if __name__ == "__main__":
    check = criterion_t5_golden()
    print(check.line())
    if not check.passed:
        raise SystemExit(1)
    GOLDEN.parent.mkdir(parents=True, exist_ok=True)
    GOLDEN.write_text(report_json(build_report(t5_theory())), encoding="utf-8")
    print(f"wrote {GOLDEN}")
