"""Regenerate the example documents under fixtures/."""
from __future__ import annotations

import argparse
from pathlib import Path

from gatewaylogic.fixtures import write_fixtures


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args()
    for path in write_fixtures(args.out):
        print(path)


if __name__ == "__main__":
    main()
