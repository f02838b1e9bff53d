"""Run the acceptance suite and print one pass/fail line per criterion.

    python3 scripts/run_acceptance.py            # all ten, including the large tier
    python3 scripts/run_acceptance.py --quick    # skip the large tier
"""
import argparse
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="acceptance criteria")
    ap.add_argument("--quick", action="store_true", help="skip the large-tier build")
    args = ap.parse_args(argv)
    opts = [str(ROOT / "tests" / "test_acceptance.py"), "-q", "-p", "no:cacheprovider"]
    if args.quick:
        opts += ["-k", "not large_tier"]
    return int(pytest.main(opts))


if __name__ == "__main__":
    sys.exit(main())
