#!/usr/bin/env python3
"""Run the verification suite and print a one-line-per-check summary.

Usage:
    python scripts/verify_report.py [--only NAME]
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from heatent.verify import run_checks


def main() -> int:
    only = None
    if len(sys.argv) == 3 and sys.argv[1] == "--only":
        only = sys.argv[2]
    start = time.monotonic()
    results = run_checks(only=only)
    width = max(len(name) for name in results)
    failures = 0
    for name, result in sorted(results.items()):
        status = "pass" if result.passed else "FAIL"
        print(f"{name:<{width}}  {status}  max_error={result.max_error:.3e}  "
              f"{result.details}")
        failures += 0 if result.passed else 1
    print(f"{len(results)} checks, {failures} failures, "
          f"{time.monotonic() - start:.2f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
