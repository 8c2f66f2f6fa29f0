import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pulseforge import circuit as ir
from pulseforge import estimator as est
from pulseforge import library
from pulseforge import transpile as tp
from pulseforge.errors import ConfigurationError, InvalidInputError

KINDS = ("toffoli", "cnot", "u3")
fid = st.floats(0.5, 1.0, exclude_min=True)
counts = st.fixed_dictionaries({k: st.integers(0, 60) for k in KINDS})


def flat_device(f=1.0, t=1.0e5):
    return ir.DeviceModel(fidelities={k: f for k in (*KINDS, "sx", "x", "cr", "mcr")}, t1_ns=t, t2_ns=t)


def test_perfect_device_gives_one():
    stats = est.GateStats({"toffoli": 5, "u3": 3}, 0.0)
    assert est.success_probability(stats, flat_device()).probability == 1.0


def test_worked_example():
    dev = ir.DeviceModel(fidelities={"g": 0.99}, t1_ns=100.0, t2_ns=100.0)
    p = est.success_probability(est.GateStats({"g": 10}, 1.0), dev, 10.0)
    assert p.probability == pytest.approx(0.81058, abs=1e-5)
    assert p.probability == pytest.approx(math.exp(-0.2) * 0.999**10, rel=1e-12)


def test_probability_is_product_of_factors(device):
    s = est.GateStats({"cr": 8, "sx": 9}, 3000.0)
    e = est.success_probability(s, device)
    assert e.probability == pytest.approx(e.decoherence_factor * math.prod(e.gate_factors.values()), rel=1e-12)


def test_errors(device):
    with pytest.raises(ConfigurationError):
        est.success_probability(est.GateStats({"swap": 1}), device)
    with pytest.raises(InvalidInputError):
        est.success_probability(est.GateStats(), device, 0.0)
    with pytest.raises(InvalidInputError):
        est.GateStats({"sx": -1})
    with pytest.raises(InvalidInputError):
        est.compare_variants([], device)


@settings(max_examples=1000)
@given(counts, st.floats(0, 1e4), fid, fid, st.floats(1e3, 1e6), st.floats(1.0, 100.0))
def test_monotonicity(n, delta, f, f_better, t, s):
    lo, hi = sorted((f, f_better))
    stats = est.GateStats(n, delta)
    dev = flat_device(lo, t)
    p = est.success_probability(stats, dev, s).probability
    assert 0.0 <= p <= 1.0
    assert est.success_probability(stats, flat_device(hi, t), s).probability >= p
    assert est.success_probability(stats, flat_device(lo, 2 * t), s).probability >= p
    assert est.success_probability(est.GateStats(n, delta * 2), dev, s).probability <= p
    doubled = est.GateStats({k: 2 * v for k, v in n.items()}, delta)
    assert est.success_probability(doubled, dev, s).probability <= p
    if lo < 1.0 and sum(n.values()) > 0:
        assert est.success_probability(doubled, dev, s).probability < p or p == 0.0


@given(counts, counts, st.floats(0, 1e4), st.floats(0, 1e4))
def test_log_probability_is_additive(a, b, da, db):
    dev = flat_device(0.97)
    sa, sb = est.GateStats(a, da), est.GateStats(b, db)
    pa, pb = (est.success_probability(x, dev).probability for x in (sa, sb))
    pab = est.success_probability(sa + sb, dev).probability
    assert pab == pytest.approx(pa * pb, rel=1e-9, abs=1e-300)


def test_stats_of_circuits(device):
    assert est.stats_of(ir.Circuit(2, ()), device).counts == {}
    canonical = est.stats_of(tp.transpile(library.canonical_toffoli(), single_qubit="u3"), device)
    optimized = est.stats_of(library.optimized_toffoli(), device)
    assert optimized.delta_ns < canonical.delta_ns
    assert all(optimized.counts.get(k, 0) <= v for k, v in canonical.counts.items())
    with pytest.raises(InvalidInputError):
        est.stats_of(library.canonical_toffoli(), device)


def test_stats_of_concatenation_adds_counts(device):
    c = library.optimized_toffoli()
    one, two = est.stats_of(c, device), est.stats_of(c + c, device)
    assert two.counts == {k: 2 * v for k, v in one.counts.items()}


def test_compare_variants(device):
    a = est.GateStats({"cr": 8, "sx": 4}, 3000.0, "a")
    same = est.compare_variants([a, a.relabel("b")], device)
    assert [r.ratio_to_worst for r in same] == [1.0, 1.0]
    better = est.GateStats({"cr": 7, "sx": 3}, 2500.0, "better")
    rows = est.compare_variants([a, better], device)
    assert rows[0].label == "better" and rows[0].probability > rows[1].probability


def test_shipped_benchmarks():
    rows = {b["name"]: b for b in est.load_benchmarks()}
    assert len(rows) == 10
    assert (rows["grovers"]["toffoli"], rows["grovers"]["cnot"], rows["grovers"]["u3"]) == (84, 0, 78)
    assert (rows["cuccaro_adder"]["toffoli"], rows["cuccaro_adder"]["cnot"], rows["cuccaro_adder"]["u3"]) == (18, 46, 18)


@settings(max_examples=20)
@given(st.floats(10, 100), st.floats(100, 1000), st.floats(1e4, 1e6), st.floats(0.9, 0.9999), st.floats(0.9, 0.9999))
def test_optimized_expansion_never_ranks_below_canonical(sx, cr, t, f1, f2):
    dev = ir.DeviceModel(
        durations_ns={"sx": sx, "x": sx, "cr": cr},
        fidelities={"sx": f1, "x": f1, "cr": f2},
        t1_ns=t,
        t2_ns=t,
    )
    rows, gmean = est.benchmark_report(dev)
    assert all(r.optimized >= r.canonical for r in rows)
    assert gmean >= 1.0
    table = est.format_benchmark_table(rows, gmean)
    assert "geometric mean" in table and "grovers" in table
