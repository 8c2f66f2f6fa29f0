"""Proxy table for the canonical, hand-optimized and automatically optimized Toffoli.

    python3 scripts/reproduce_proxy_table.py --device configs/device_example.json
"""

from __future__ import annotations

import argparse

from pulseforge import io, library, metrics
from pulseforge import transpile as tp
from pulseforge.peephole import PassConfig, optimize


def rows(convention: str, device):
    conv = metrics.get_convention(convention)
    canonical = tp.transpile(library.canonical_toffoli(), single_qubit=conv.single_qubit)
    auto = optimize(canonical, PassConfig(convention=convention), device).circuit
    return [
        ("canonical", metrics.proxies(canonical, device, conv)),
        ("hand-optimized", metrics.proxies(library.optimized_toffoli(), device, conv)),
        ("auto-optimized", metrics.proxies(auto, device, conv)),
    ]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--device", default=None, help="device JSON; without it lengths are reported as 0")
    ap.add_argument("--convention", action="append", choices=sorted(metrics.CONVENTIONS))
    args = ap.parse_args()
    device = io.load_device(args.device) if args.device else None
    for name in args.convention or sorted(metrics.CONVENTIONS):
        table = rows(name, device)
        base = table[0][1]
        print(f"convention {name}")
        print(f"  {'circuit':<16} {'length ns':>10} {'rotation':>9} {'gates':>6} {'d rot':>7} {'d gates':>8}")
        for label, rep in table:
            d_rot = 100 * (rep.total_rotation_deg - base.total_rotation_deg) / base.total_rotation_deg
            d_cnt = 100 * (rep.native_gate_count - base.native_gate_count) / base.native_gate_count
            print(f"  {label:<16} {rep.length_ns:>10.1f} {rep.total_rotation_deg:>9g} "
                  f"{rep.native_gate_count:>6} {d_rot:>6.1f}% {d_cnt:>7.1f}%")


if __name__ == "__main__":
    main()
