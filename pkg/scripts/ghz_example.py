"""Two-qubit worked example: synthesize H(q0) CX H(q0) X(q1) with one CX block.

Runs the penalized search, snaps angles, keeps results exactly equivalent to the
target, lowers them to native gates, optimizes and compares rotation proxies
with the transpiled input.

    python3 scripts/ghz_example.py --restarts 30 --seed 0
"""

from __future__ import annotations

import argparse
import math

from pulseforge import circuit as ir
from pulseforge import library, metrics
from pulseforge import linalg as la
from pulseforge import transpile as tp
from pulseforge.peephole import optimize
from pulseforge.synthesis import ObjectiveSettings, params_to_circuit, parse_block, search, snap_and_verify


def u3_layers(c: ir.Circuit) -> int:
    """Number of maximal U3 runs between multi-qubit gates."""
    layers, open_layer = 0, False
    for g in c.gates:
        if g.name == "u3":
            if not open_layer:
                layers += 1
            open_layer = True
        else:
            open_layer = False
    return layers


def run(restarts: int = 30, seed: int = 0):
    """Best native result as (abstract circuit, optimized native circuit, input proxies)."""
    target = library.ghz_example_target()
    settings = ObjectiveSettings(alpha=0.30, gamma=1e-8)
    outcome = search(target, [parse_block("cx01", 2)], 1, restarts, settings, seed=seed)
    candidates = []
    for r in outcome.feasible:
        snapped = snap_and_verify(r, target, settings=settings)
        abstract = params_to_circuit(snapped.config, snapped.beta, 2)
        if not la.phase_equivalent(target, ir.unitary_of(abstract)):
            continue
        native = optimize(tp.transpile(abstract, single_qubit="u3")).circuit
        rep = metrics.proxies(native)
        candidates.append((rep.total_rotation_deg, rep.native_gate_count, r.restart_index, abstract, native))
    baseline = metrics.proxies(tp.transpile(library.ghz_example_input(), single_qubit="u3"))
    if not candidates:
        return None, None, baseline
    _, _, _, abstract, native = min(candidates, key=lambda t: t[:3])
    return abstract, native, baseline


def _pi12(x: float) -> str:
    k = x / (math.pi / 12)
    return f"{round(k)}pi/12" if abs(k - round(k)) < 1e-9 else f"{x:.6f}"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--restarts", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    abstract, native, baseline = run(args.restarts, args.seed)
    print(f"input: rotation {baseline.total_rotation_deg:g} deg, {baseline.native_gate_count} native gates")
    if abstract is None:
        raise SystemExit("no exactly equivalent snapped result; raise --restarts")
    for g in abstract.gates:
        print(f"  {g.name}{list(g.qubits)} " + " ".join(_pi12(p) for p in g.params))
    rep = metrics.proxies(native)
    print(f"result: {abstract.count('cx')} CX, {u3_layers(abstract)} U3 layers, "
          f"rotation {rep.total_rotation_deg:g} deg, {rep.native_gate_count} native gates")
    print("native:", " ".join(repr(g) for g in native.gates))


if __name__ == "__main__":
    main()
