"""Success-probability estimates under scaled near-term noise.

P = exp(-s D / T1 - s D / T2) * prod_i (1 - (1 - F_i) / s) ** n_i

where ``n_i`` counts gates of type i with fidelity ``F_i``, ``D`` is the run
time and ``s`` is the improvement factor assumed for future hardware.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Optional, Sequence

from . import circuit as ir
from . import metrics
from . import transpile as tp
from .errors import InvalidInputError

DEFAULT_SCALE = 10.0


@dataclass(frozen=True)
class GateStats:
    counts: Mapping[str, int] = field(default_factory=dict)
    delta_ns: float = 0.0
    label: str = ""

    def __post_init__(self):
        counts = {str(k): int(v) for k, v in dict(self.counts).items()}
        if any(v < 0 for v in counts.values()):
            raise InvalidInputError("gate counts must be non-negative")
        if not (self.delta_ns >= 0 and math.isfinite(self.delta_ns)):
            raise InvalidInputError("duration must be finite and non-negative")
        object.__setattr__(self, "counts", counts)

    def __add__(self, other: "GateStats") -> "GateStats":
        keys = set(self.counts) | set(other.counts)
        counts = {k: self.counts.get(k, 0) + other.counts.get(k, 0) for k in keys}
        return GateStats(counts, self.delta_ns + other.delta_ns, self.label)

    def scaled(self, k: int) -> "GateStats":
        return GateStats({g: n * k for g, n in self.counts.items()}, self.delta_ns * k, self.label)

    def relabel(self, label: str) -> "GateStats":
        return GateStats(self.counts, self.delta_ns, label)

    def as_dict(self) -> dict:
        return {"label": self.label, "counts": dict(sorted(self.counts.items())), "delta_ns": self.delta_ns}


@dataclass(frozen=True)
class SuccessEstimate:
    probability: float
    decoherence_factor: float
    gate_factors: Mapping[str, float]
    log_probability: float = 0.0

    def as_dict(self) -> dict:
        return {
            "log_probability": self.log_probability,
            "probability": self.probability,
            "decoherence_factor": self.decoherence_factor,
            "gate_factors": dict(sorted(self.gate_factors.items())),
        }


def success_probability(stats: GateStats, device: ir.DeviceModel, scale: float = DEFAULT_SCALE) -> SuccessEstimate:
    """Estimated probability that a run of ``stats`` succeeds on ``device``."""
    if not scale > 0:
        raise InvalidInputError("scale must be positive")
    log_decoherence = -scale * stats.delta_ns / device.t1_ns - scale * stats.delta_ns / device.t2_ns
    factors = {}
    log_p = log_decoherence
    for kind, n in sorted(stats.counts.items()):
        if n == 0:
            continue
        f = device.fidelity(kind)
        log_factor = n * math.log1p(-(1.0 - f) / scale)
        factors[kind] = math.exp(log_factor)
        log_p += log_factor
    # The log is kept because deep circuits underflow the probability itself.
    return SuccessEstimate(math.exp(log_p), math.exp(log_decoherence), factors, log_p)


def stats_of(c: ir.Circuit, device: ir.DeviceModel, convention=None, label: str = "") -> GateStats:
    """Native instruction counts and critical-path duration of a circuit."""
    counts = {k: v for k, v in metrics.gate_counts(c, convention).items() if v}
    return GateStats(counts, metrics.schedule_asap(c, device), label)


@dataclass(frozen=True)
class VariantRow:
    label: str
    probability: float
    ratio_to_worst: float
    estimate: SuccessEstimate


def compare_variants(variants: Sequence[GateStats], device: ir.DeviceModel, scale: float = DEFAULT_SCALE) -> list[VariantRow]:
    """Rank variants by estimated success, best first; ratios are relative to the worst."""
    if not variants:
        raise InvalidInputError("nothing to compare")
    estimates = [(v.label, success_probability(v, device, scale)) for v in variants]
    worst = min(e.log_probability for _, e in estimates)
    rows = [VariantRow(label, e.probability, _exp(e.log_probability - worst), e) for label, e in estimates]
    # Stable sort keeps input order among ties.
    return sorted(rows, key=lambda r: -r.estimate.log_probability)


def _exp(x: float) -> float:
    return math.exp(x) if x < 700 else math.inf


def geometric_mean(values: Sequence[float]) -> float:
    if not values:
        raise InvalidInputError("geometric mean of nothing")
    return math.exp(sum(math.log(v) for v in values) / len(values))


def geometric_mean_of_logs(logs: Sequence[float]) -> float:
    if not logs:
        raise InvalidInputError("geometric mean of nothing")
    return _exp(sum(logs) / len(logs))


# --------------------------------------------------------------------------
# benchmark expansion

def load_benchmarks() -> list[dict]:
    text = resources.files("pulseforge").joinpath("data/benchmark_counts.json").read_text()
    return json.loads(text)["benchmarks"]


def primitive_stats(device: ir.DeviceModel, impl: str, convention=None) -> dict[str, GateStats]:
    """Native stats of one Toffoli (via ``impl``), one CNOT and one generic U3."""
    conv = metrics.get_convention(convention)
    toffoli = tp.decompose_ccx(ir.Circuit(3, (ir.ccx(0, 1, 2),)), impl, single_qubit=conv.single_qubit)
    cnot = tp.transpile(ir.Circuit(2, (ir.cx(0, 1),)))
    u3 = tp.transpile(ir.Circuit(1, (ir.u3(0, 1.0, 2.0, 3.0),)), single_qubit="u3")
    return {
        "toffoli": stats_of(toffoli, device, conv),
        "cnot": stats_of(cnot, device, conv),
        "u3": stats_of(u3, device, conv),
    }


def expand_counts(counts: Mapping[str, int], prims: Mapping[str, GateStats], label: str = "") -> GateStats:
    """Native stats of a circuit given only abstract gate counts.

    Durations add serially, an upper bound on the critical path.
    """
    total = GateStats({}, 0.0, label)
    for kind, n in counts.items():
        if kind not in prims:
            raise InvalidInputError(f"no native expansion for {kind!r}")
        total = total + prims[kind].scaled(int(n))
    return total.relabel(label)


@dataclass(frozen=True)
class BenchmarkRow:
    name: str
    qubits: int
    counts: Mapping[str, int]
    canonical: float
    optimized: float
    log_improvement: float

    @property
    def improvement(self) -> float:
        return _exp(self.log_improvement)


def benchmark_report(
    device: ir.DeviceModel,
    scale: float = DEFAULT_SCALE,
    convention=None,
    benchmarks: Optional[Sequence[dict]] = None,
) -> tuple[list[BenchmarkRow], float]:
    """Per-benchmark success with canonical vs optimized Toffoli expansion, plus the geometric-mean improvement."""
    benchmarks = load_benchmarks() if benchmarks is None else benchmarks
    prims = {impl: primitive_stats(device, impl, convention) for impl in ("canonical", "optimized")}
    rows = []
    for b in benchmarks:
        counts = {k: int(b.get(k, 0)) for k in ("toffoli", "cnot", "u3")}
        e = {impl: success_probability(expand_counts(counts, prims[impl], impl), device, scale) for impl in prims}
        rows.append(
            BenchmarkRow(
                b["name"], int(b.get("qubits", 0)), counts,
                e["canonical"].probability, e["optimized"].probability,
                e["optimized"].log_probability - e["canonical"].log_probability,
            )
        )
    return rows, geometric_mean_of_logs([r.log_improvement for r in rows])


def format_benchmark_table(rows: Sequence[BenchmarkRow], gmean: float) -> str:
    header = f"{'benchmark':<18} {'qubits':>6} {'toffoli':>7} {'cnot':>5} {'u3':>4} {'canonical':>10} {'optimized':>10} {'improve':>8}"
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(
            f"{r.name:<18} {r.qubits:>6} {r.counts['toffoli']:>7} {r.counts['cnot']:>5} {r.counts['u3']:>4} "
            f"{100 * r.canonical:>9.3g}% {100 * r.optimized:>9.3g}% {r.improvement:>7.2f}x"
        )
    lines.append(f"{'geometric mean':<18} {'':>6} {'':>7} {'':>5} {'':>4} {'':>10} {'':>10} {gmean:>7.2f}x")
    return "\n".join(lines)
