"""``pulseforge`` command-line interface.

Exit codes: 0 success, 1 verification failed, 2 usage or input error,
3 synthesis search finished without a feasible result.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from . import circuit as ir
from . import estimator as est
from . import io
from . import library
from . import linalg as la
from . import metrics
from . import transpile as tp
from .errors import PulseforgeError
from .peephole import DEFAULT_PASSES, PASSES, PassConfig, optimize
from .synthesis import (
    LMSettings,
    ObjectiveSettings,
    params_to_circuit,
    parse_alphabet,
    search,
    snap_and_verify,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3
_OBJECTIVE_FLAGS = {"count": "gate_count", "gate_count": "gate_count", "rotation": "rotation", "length": "length"}


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("PULSEFORGE_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"PULSEFORGE_SEED must be an integer, got {raw!r}") from None


def _emit(payload: dict, out: Optional[str] = None) -> None:
    text = io.dumps(payload)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _table(text: str, quiet: bool) -> None:
    if not quiet:
        sys.stderr.write(text.rstrip("\n") + "\n")


def _digest(path: str) -> str:
    try:
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()
    except OSError:
        return ""


def _manifest(args, argv, inputs, started: float) -> dict:
    flags = {k: v for k, v in vars(args).items() if k not in ("func",)}
    return {
        "command": args.command,
        "argv": list(argv),
        "flags": flags,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "inputs": {p: _digest(p) for p in inputs if p and Path(p).exists()},
        "wall_time_s": round(time.time() - started, 3),
    }


def _resolve_target(spec: str, num_qubits: Optional[int] = None) -> np.ndarray:
    if spec == "identity":
        if num_qubits is None:
            raise UsageError("the identity target needs a circuit to size it")
        return np.eye(2**num_qubits, dtype=complex)
    if spec in library.BUILTIN_NAMES:
        obj = library.builtin(spec)
        return ir.unitary_of(obj) if isinstance(obj, ir.Circuit) else obj
    doc = io._read_json(spec)
    if isinstance(doc, dict) and doc.get("format") == io.CIRCUIT_FORMAT:
        return ir.unitary_of(io.circuit_from_dict(doc))
    return io.target_from_dict(doc)


def _load_input_circuit(spec: str) -> ir.Circuit:
    if spec in library.BUILTIN_NAMES:
        obj = library.builtin(spec)
        if not isinstance(obj, ir.Circuit):
            raise UsageError(f"builtin {spec!r} is a matrix, not a circuit")
        return obj
    return io.load_circuit(spec)


def _parse_coupling(spec: Optional[str], m: int) -> ir.CouplingMap:
    if not spec:
        return ir.CouplingMap.linear(m)
    edges = []
    for item in spec.split(","):
        try:
            a, b = item.split("-")
            edges.append((int(a), int(b)))
        except ValueError:
            raise UsageError(f"bad coupling edge {item!r}; expected c-t") from None
    return ir.CouplingMap(frozenset(edges))


def _to_native(c: ir.Circuit, convention: str, coupling: Optional[ir.CouplingMap] = None) -> ir.Circuit:
    if c.is_native:
        return c
    mode = metrics.get_convention(convention).single_qubit
    if any(g.name == "ccx" for g in c.gates):
        raise UsageError("circuit contains ccx; run decompose-ccx first")
    return tp.transpile(c, coupling, single_qubit=mode)


def _load_device(path: Optional[str]) -> Optional[ir.DeviceModel]:
    return io.load_device(path) if path else None


# --------------------------------------------------------------------------
# commands

def cmd_synth(args, argv) -> int:
    started = time.time()
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.restarts < 1 or args.jobs < 1:
        raise UsageError("--restarts and --jobs must be at least 1")
    target = _resolve_target(args.target)
    m = target.shape[0].bit_length() - 1
    labels = args.alphabet or ("mcr,cx01,cx02" if m >= 3 else ",".join(f"cx0{t}" for t in range(1, m)))
    alphabet = parse_alphabet(labels, m)
    configs = None
    if args.structure:
        by_label = {b.label: b for b in alphabet}
        try:
            cfg = tuple(by_label[s.strip()] for s in args.structure.split(","))
        except KeyError as err:
            raise UsageError(f"structure uses a block outside the alphabet: {err}") from None
        if len(cfg) != args.n:
            raise UsageError("--structure length must equal --n")
        configs = [cfg]
    settings = ObjectiveSettings(alpha=args.alpha, gamma=args.gamma)
    lm = LMSettings(max_iterations=args.max_iterations)
    outcome = search(target, alphabet, args.n, args.restarts, settings, lm, args.seed, args.jobs, configs)
    results = list(outcome.feasible) or [outcome.best]
    if args.snap:
        results = [snap_and_verify(r, target, settings=settings) if r.feasible else r for r in results]
    payload = [r.as_dict() for r in results]
    text = io.dumps(payload)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        manifest = _manifest(args, argv, [args.target], started)
        manifest["results_file"] = args.out
        Path(args.out + ".manifest.json").write_text(io.dumps(manifest), encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.circuit_out and outcome.best.feasible:
        io.save_circuit(params_to_circuit(outcome.best.config, outcome.best.beta, m), args.circuit_out)
    _table(
        f"configs={outcome.num_configs} runs={outcome.num_runs} feasible={len(outcome.feasible)} "
        f"best={'-'.join(outcome.best.labels)} residual={outcome.best.residual_sq:.3e} "
        f"infidelity={outcome.best.infidelity:.3e}",
        args.quiet,
    )
    return EXIT_OK if outcome.feasible else EXIT_INFEASIBLE


def _parse_passes(spec: str) -> tuple[str, ...]:
    if spec == "all":
        return DEFAULT_PASSES
    if spec == "none":
        return ()
    names = tuple(p.strip() for p in spec.split(",") if p.strip())
    unknown = [p for p in names if p not in PASSES]
    if unknown:
        raise UsageError(f"unknown pass(es): {', '.join(unknown)}")
    return names


def _report_table(before: metrics.ProxyReport, after: Optional[metrics.ProxyReport] = None) -> str:
    rows = [("length_ns", "length (ns)"), ("total_rotation_deg", "total rotation (deg)"),
            ("native_gate_count", "native gates")]
    if after is None:
        return "\n".join(f"{label:<22} {getattr(before, key):>10g}" for key, label in rows) + \
            f"\nconvention: {before.counting_convention}"
    lines = [f"{'proxy':<22} {'before':>10} {'after':>10} {'change':>8}"]
    for key, label in rows:
        b, a = getattr(before, key), getattr(after, key)
        change = f"{100 * (a - b) / b:+.1f}%" if b else "n/a"
        lines.append(f"{label:<22} {b:>10g} {a:>10g} {change:>8}")
    lines.append(f"convention: {before.counting_convention}")
    return "\n".join(lines)


def cmd_opt(args, argv) -> int:
    objective = _OBJECTIVE_FLAGS[args.objective]
    device = _load_device(args.device)
    if objective == "length" and device is None:
        raise UsageError("--objective length needs --device")
    c = _to_native(_load_input_circuit(args.input), args.convention)
    passes = _parse_passes(args.passes)
    if passes:
        cfg = PassConfig(passes, objective, args.max_sweeps, args.convention)
        res = optimize(c, cfg, device)
        out_c, before, after, sweeps = res.circuit, res.before, res.after, res.sweeps
    else:
        out_c, sweeps = c, 0
        before = after = metrics.proxies(c, device, args.convention)
    if args.out:
        io.save_circuit(out_c, args.out)
    payload = {"before": before.as_dict(), "after": after.as_dict(), "sweeps": sweeps, "passes": list(passes)}
    if not args.out:
        payload["circuit"] = io.circuit_to_dict(out_c)
    _emit(payload)
    _table(_report_table(before, after), args.quiet)
    return EXIT_OK


def cmd_verify(args, argv) -> int:
    c = _load_input_circuit(args.input)
    target = _resolve_target(args.target, c.num_qubits)
    u = ir.unitary_of(c)
    if u.shape != target.shape:
        raise UsageError(f"circuit dimension {u.shape[0]} does not match target {target.shape[0]}")
    dist = la.phase_distance(target, u)
    ok = la.phase_equivalent(target, u, args.tol)
    _emit({"equivalent": ok, "phase_distance": dist, "trace_infidelity": la.trace_infidelity(target, u),
           "tol": args.tol})
    _table(f"{'equivalent' if ok else 'NOT equivalent'} (distance {dist:.3e}, tol {args.tol:g})", args.quiet)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_report(args, argv) -> int:
    c = _to_native(_load_input_circuit(args.input), args.convention)
    rep = metrics.proxies(c, _load_device(args.device), args.convention)
    payload = rep.as_dict()
    payload["convention_rules"] = metrics.get_convention(args.convention).as_dict()
    _emit(payload)
    _table(_report_table(rep), args.quiet)
    return EXIT_OK


def cmd_estimate(args, argv) -> int:
    device = io.load_device(args.device)
    if args.benchmarks:
        rows, gmean = est.benchmark_report(device, args.scale, args.convention)
        payload = {
            "rows": [
                {"name": r.name, "qubits": r.qubits, "counts": dict(r.counts), "canonical": r.canonical,
                 "optimized": r.optimized, "improvement": _finite(r.improvement),
                 "log_improvement": r.log_improvement}
                for r in rows
            ],
            "geometric_mean_improvement": _finite(gmean),
            "scale": args.scale,
        }
        _emit(payload)
        _table(est.format_benchmark_table(rows, gmean), args.quiet)
        return EXIT_OK
    variants = []
    for path in args.stats or []:
        variants.extend(io.load_stats(path))
    for path in args.input or []:
        c = _to_native(_load_input_circuit(path), args.convention)
        variants.append(est.stats_of(c, device, args.convention, label=Path(path).stem if path not in library.BUILTIN_NAMES else path))
    if not variants:
        raise UsageError("give --stats, --in or --benchmarks")
    ranked = est.compare_variants(variants, device, args.scale)
    payload = {
        "scale": args.scale,
        "variants": [
            {"label": r.label, "probability": r.probability, "ratio_to_worst": _finite(r.ratio_to_worst),
             **r.estimate.as_dict()}
            for r in ranked
        ],
    }
    _emit(payload)
    lines = [f"{'variant':<24} {'P(success)':>11} {'ratio':>7}"]
    lines += [f"{r.label:<24} {r.probability:>11.5f} {r.ratio_to_worst:>6.2f}x" for r in ranked]
    _table("\n".join(lines), args.quiet)
    return EXIT_OK


def _finite(x: float):
    return x if math.isfinite(x) else None


def cmd_decompose(args, argv) -> int:
    c = _load_input_circuit(args.input)
    coupling = _parse_coupling(args.coupling, c.num_qubits)
    mode = metrics.get_convention(args.convention).single_qubit
    out = tp.decompose_ccx(c, args.impl, coupling, single_qubit=mode)
    if args.out:
        io.save_circuit(out, args.out)
    else:
        _emit(io.circuit_to_dict(out))
    if out.is_native:
        _table(_report_table(metrics.proxies(out, None, args.convention)), args.quiet)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pulseforge", description="Native-gate circuit synthesis and optimization.")
    p.add_argument("--version", action="version", version=f"pulseforge {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--quiet", action="store_true", help="suppress the human-readable table on stderr")
        sp.add_argument("--convention", default=metrics.DEFAULT_CONVENTION, choices=sorted(metrics.CONVENTIONS))

    s = sub.add_parser("synth", help="search block configurations for a target unitary")
    s.add_argument("--target", required=True, help="builtin name or target JSON file")
    s.add_argument("--n", type=int, required=True, help="number of multi-qubit blocks")
    s.add_argument("--alphabet", default=None, help="comma-separated block labels, e.g. mcr,cx01,cx02")
    s.add_argument("--structure", default=None, help="restrict the search to one configuration")
    s.add_argument("--restarts", type=int, default=30)
    s.add_argument("--alpha", type=float, default=0.30)
    s.add_argument("--gamma", type=float, default=1e-8)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--max-iterations", type=int, default=200)
    s.add_argument("--snap", action="store_true", help="snap near-grid angles of feasible results")
    s.add_argument("--out", default=None)
    s.add_argument("--circuit-out", default=None, help="write the best feasible circuit here")
    common(s)
    s.set_defaults(func=cmd_synth)

    o = sub.add_parser("opt", help="run the peephole optimizer")
    o.add_argument("--in", dest="input", required=True)
    o.add_argument("--passes", default="all")
    o.add_argument("--objective", default="count", choices=sorted(_OBJECTIVE_FLAGS))
    o.add_argument("--device", default=None)
    o.add_argument("--max-sweeps", type=int, default=50)
    o.add_argument("--out", default=None)
    common(o)
    o.set_defaults(func=cmd_opt)

    v = sub.add_parser("verify", help="check a circuit against a target up to global phase")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--target", required=True)
    v.add_argument("--tol", type=float, default=la.DEFAULT_TOL)
    common(v)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("report", help="fidelity proxies of a circuit")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--device", default=None)
    common(r)
    r.set_defaults(func=cmd_report)

    e = sub.add_parser("estimate", help="success probability under scaled noise")
    e.add_argument("--device", required=True)
    e.add_argument("--stats", action="append", help="stats JSON file (repeatable)")
    e.add_argument("--in", dest="input", action="append", help="circuit file or builtin (repeatable)")
    e.add_argument("--benchmarks", action="store_true", help="canonical vs optimized Toffoli on the shipped benchmarks")
    e.add_argument("--scale", type=float, default=est.DEFAULT_SCALE)
    common(e)
    e.set_defaults(func=cmd_estimate)

    d = sub.add_parser("decompose-ccx", help="expand CCX gates into native linear-chain Toffolis")
    d.add_argument("--in", dest="input", required=True)
    d.add_argument("--impl", default="optimized", choices=tp.CCX_IMPLS)
    d.add_argument("--coupling", default=None, help="calibrated CR edges as c-t pairs, e.g. 0-1,1-2")
    d.add_argument("--out", default=None)
    common(d)
    d.set_defaults(func=cmd_decompose)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", "absent") is None:
            args.seed = _default_seed()
        return args.func(args, argv)
    except (UsageError, PulseforgeError, ValueError) as err:
        sys.stderr.write(f"pulseforge {args.command}: error: {err}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
