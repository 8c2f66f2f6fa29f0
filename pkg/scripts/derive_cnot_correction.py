"""Derive the single-qubit corrections that turn the echoed CR into a CNOT.

Fits U3 layers before and after one native CR(0 -> 1) against CNOT(0, 1),
snaps the angles onto the pi/12 grid, lowers each layer to native pulses,
cleans up with the peephole optimizer and checks the result against the template frozen in ``pulseforge.transpile``.

    python3 scripts/derive_cnot_correction.py --restarts 20 --seed 0
"""

from __future__ import annotations

import argparse
import math

import numpy as np

from pulseforge import circuit as ir
from pulseforge import linalg as la
from pulseforge import onequbit
from pulseforge import transpile as tp
from pulseforge.peephole import optimize
from pulseforge.library import cnot_target
from pulseforge.synthesis import LMSettings, lm_minimize, snap_angles
from pulseforge.synthesis.objective import penalty_terms

CR = ir.native_gate_unitary(ir.cr(0, 1, 1))


def layer(beta: np.ndarray) -> np.ndarray:
    return la.tensor(la.u3_unitary(*beta[0:3]), la.u3_unitary(*beta[3:6]))


def unitary(beta: np.ndarray) -> np.ndarray:
    return layer(beta[6:]) @ CR @ layer(beta[:6])


def residuals(beta: np.ndarray, target: np.ndarray, alpha: float) -> np.ndarray:
    diff = (target - unitary(beta)).ravel()
    return np.concatenate([diff.real, diff.imag, math.sqrt(alpha) * penalty_terms(beta)])


def fit(target: np.ndarray, restarts: int, seed: int, alpha: float) -> np.ndarray:
    best, best_cost = None, math.inf
    for r in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence([seed, r]))
        out = lm_minimize(lambda b: residuals(b, target, alpha), rng.uniform(0, 2 * math.pi, 12), LMSettings())
        beta = snap_angles(out.beta, snap_tol=1e-2)
        if la.phase_equivalent(target, unitary(beta), 1e-9):
            cost = onequbit.pulse_count(_lower(beta))
            if cost < best_cost:
                best, best_cost = beta, cost
    if best is None:
        raise SystemExit("no exact solution after snapping; raise --restarts")
    return best


def _lower(beta: np.ndarray) -> list[ir.Gate]:
    pre = [tp.synth_single(la.u3_unitary(*beta[3 * q:3 * q + 3]), q, "minimal") for q in (0, 1)]
    post = [tp.synth_single(la.u3_unitary(*beta[6 + 3 * q:9 + 3 * q]), q, "minimal") for q in (0, 1)]
    return pre[0] + pre[1] + [ir.cr(0, 1, 1)] + post[0] + post[1]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--restarts", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--alpha", type=float, default=0.3)
    args = ap.parse_args()

    target = cnot_target()
    beta = fit(target, args.restarts, args.seed, args.alpha)
    gates = _lower(beta)
    derived = optimize(ir.Circuit(2, tuple(gates))).circuit
    frozen = ir.Circuit(2, tuple(tp.cx_native(0, 1)))
    print("derived :", " ".join(repr(g) for g in derived.gates))
    print("frozen  :", " ".join(repr(g) for g in frozen.gates))
    print("derived pulses:", onequbit.pulse_count(list(derived.gates)), "frozen pulses:", onequbit.pulse_count(list(frozen.gates)))
    print("derived == CNOT:", la.phase_equivalent(target, ir.unitary_of(derived)))
    print("frozen  == CNOT:", la.phase_equivalent(target, ir.unitary_of(frozen)))


if __name__ == "__main__":
    main()
