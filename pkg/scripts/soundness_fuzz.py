"""Model-check random axiom instances on random protocols and report any counterexample."""
from __future__ import annotations

import argparse
import json
import time

from gatewaylogic.fuzz import FuzzConfig, soundness_fuzz


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--protocols", type=int, default=200)
    ap.add_argument("--per-schema", type=int, default=10)
    ap.add_argument("--depth", type=int, default=3)
    args = ap.parse_args()
    cfg = FuzzConfig(seed=args.seed, protocols=args.protocols, per_schema=args.per_schema, depth=args.depth)
    start = time.perf_counter()
    report = soundness_fuzz(cfg)
    doc = report.to_doc()
    doc["seconds"] = round(time.perf_counter() - start, 2)
    print(json.dumps(doc, indent=2))
    return 1 if report.counterexamples else 0


if __name__ == "__main__":
    raise SystemExit(main())
