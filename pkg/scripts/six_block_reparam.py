"""Reparameterize the six-block MCR Toffoli skeleton with the angle penalty.

Fits the fixed structure cx02, cx01, mcr, mcr, mcr, cx01 against the Toffoli
with alpha=0.30, gamma=1e-8 (penalty continuation), snaps angles onto the pi/12 grid and prints the
snapped U3 layers.

    python3 scripts/six_block_reparam.py --restarts 8 --seed 0
"""

from __future__ import annotations

import argparse
import math

from pulseforge import library
from pulseforge.synthesis import ObjectiveSettings, parse_block, search, snap_and_verify

STRUCTURE = "cx02,cx01,mcr,mcr,mcr,cx01"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--restarts", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--alpha", type=float, default=0.30)
    ap.add_argument("--gamma", type=float, default=1e-8)
    args = ap.parse_args()
    target = library.toffoli_target()
    config = tuple(parse_block(s, 3) for s in STRUCTURE.split(","))
    settings = ObjectiveSettings(alpha=args.alpha, gamma=args.gamma)
    outcome = search(target, sorted(set(config), key=config.index), len(config), args.restarts, settings, seed=args.seed,
                     jobs=args.jobs, configs=[config])
    print(f"{len(outcome.feasible)} of {args.restarts} restarts feasible")
    if not outcome.feasible:
        return
    best = snap_and_verify(outcome.best, target, settings=settings)
    print(f"infidelity {best.infidelity:.3e}, penalty {best.penalty_value:.3e}")
    grid = math.pi / 12
    on_grid = sum(abs(b / grid - round(b / grid)) < 1e-9 for b in best.beta)
    print(f"{on_grid} of {len(best.beta)} angles on the pi/12 grid")
    for layer in range(len(config) + 1):
        triples = best.beta[9 * layer: 9 * layer + 9]
        cells = []
        for b in triples:
            k = b / grid
            cells.append(f"{round(k):>4d}" if abs(k - round(k)) < 1e-9 else f"{b:>7.3f}")
        block = config[layer].label if layer < len(config) else ""
        print(f"  layer {layer}: " + " ".join(cells) + (f"   then {block}" if block else ""))


if __name__ == "__main__":
    main()
