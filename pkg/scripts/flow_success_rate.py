"""How often the flow construction succeeds on random well-formed knowledge profiles.

Profiles without any sink but with some knowing edge must fail; the rest may
fail too when no licensed path reaches a sink. Both counts are reported.
"""
from __future__ import annotations

import argparse
import json
import random
from collections import Counter

from gatewaylogic.canonical_flow import ProfileBounds, build_flow, random_profile, verify_flow
from gatewaylogic.errors import InconsistentProfile


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=6)
    ap.add_argument("--profiles", type=int, default=300)
    ap.add_argument("--max-edges", type=int, default=6)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    tally = Counter()
    for _ in range(args.profiles):
        p = random_profile(rng, ProfileBounds(max_edges=args.max_edges))
        sink_free = not any(p.sink.values())
        knowing = any(p.knows_delta[e] and not p.sink[e] for e in p.graph.edge_ids)
        kind = "sink_free" if sink_free else "with_sinks"
        try:
            f = build_flow(p)
        except InconsistentProfile:
            tally[f"{kind}_inconsistent"] += 1
            continue
        assert verify_flow(p, f, p.graph.edge_ids) == []
        tally[f"{kind}_built"] += 1
        tally["built_with_knowledge"] += knowing
    doc = dict(sorted(tally.items()))
    doc["success_rate"] = round((tally["sink_free_built"] + tally["with_sinks_built"]) / args.profiles, 3)
    print(json.dumps(doc, indent=2))


if __name__ == "__main__":
    main()
