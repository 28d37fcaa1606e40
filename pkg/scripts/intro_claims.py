"""Check the eavesdropper claims on the one-bit and noisy four-bit encryption protocols."""
from __future__ import annotations

from gatewaylogic.catalog import bits, hamming, p1_protocol, p2_protocol
from gatewaylogic.formula import Box, neg
from gatewaylogic.modelcheck import satisfies, state_space


def main():
    P1 = p1_protocol()
    r = {"m": "1", "k": "0", "c": "1", "m'": "1"}
    p1 = P1.sig.prop("p1")
    for e in ("m", "c", "k"):
        print(f"P1 run {r}: [{e}] p1 = {satisfies(P1, r, Box(e, p1))}")

    P2 = p2_protocol(4)
    space = state_space(P2)
    print(f"P2 has {len(space.runs)} runs")
    r = space.runs[len(space.runs) // 3]
    seen = r["m'"]
    print(f"P2 run {dict(r)}")
    print(f"  ~[m] (m' = {seen}) = {satisfies(P2, r, neg(Box('m', P2.sig.prop(f'eq_{seen}'))))}")
    for w in bits(4):
        if hamming(w, r["m"]) == 3:
            holds = satisfies(P2, r, Box("m", neg(P2.sig.prop(f"eq_{w}"))))
            print(f"  [m] (m' != {w}) = {holds}")


if __name__ == "__main__":
    main()
