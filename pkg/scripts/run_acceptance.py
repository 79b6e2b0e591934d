"""Run the acceptance battery at a chosen scale and print one line per criterion."""
import argparse
import time
from pathlib import Path

from simplicial_opt.battery import run_all

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden" / "t5_report.json"

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args()
    start = time.perf_counter()
    results = run_all(args.scale, golden_text=GOLDEN.read_text(encoding="utf-8"))
    for r in results:
        print(r.line())
    print(f"{sum(r.passed for r in results)}/{len(results)} passed in {time.perf_counter() - start:.1f} s")
    raise SystemExit(0 if all(r.passed for r in results) else 1)
