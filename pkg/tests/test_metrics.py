import pytest
from hypothesis import given

from pulseforge import circuit as ir
from pulseforge import library, metrics
from pulseforge import transpile as tp
from pulseforge.errors import InvalidInputError

from conftest import native_circuits


def test_empty_circuit_reports_zeros(device):
    rep = metrics.proxies(ir.Circuit(3, ()), device)
    assert (rep.length_ns, rep.total_rotation_deg, rep.native_gate_count) == (0.0, 0.0, 0)


def test_hand_counted_small_circuit(device):
    c = ir.Circuit(2, (ir.rz(0, 0.3), ir.sx(0), ir.x(1), ir.cr(0, 1, 1, "plus90"), ir.sx(1)))
    paper = metrics.proxies(c, device, "paper")
    pulse = metrics.proxies(c, device, "pulse")
    assert paper.total_rotation_deg == pulse.total_rotation_deg == 90 + 180 + 180 + 90 + 90
    assert paper.native_gate_count == 5
    assert pulse.native_gate_count == 4
    assert paper.length_ns == pytest.approx(35.6 + 450 + 35.6)


def test_rz_is_free(device):
    c = ir.Circuit(1, tuple(ir.rz(0, 0.1 * k) for k in range(10)))
    assert metrics.proxies(c, device) == metrics.ProxyReport(0.0, 0.0, 0, "paper")


def test_parallel_gates_share_time(device):
    c = ir.Circuit(3, (ir.sx(0), ir.sx(1), ir.sx(2)))
    assert metrics.schedule_asap(c, device) == pytest.approx(35.6)


def test_abstract_input_rejected(device):
    with pytest.raises(InvalidInputError):
        metrics.proxies(library.canonical_toffoli(), device)
    with pytest.raises(InvalidInputError):
        metrics.get_convention("nope")


@given(native_circuits(), native_circuits())
def test_counts_and_rotation_are_additive(a, b):
    for conv in metrics.CONVENTIONS:
        ab = metrics.proxies(a + b, None, conv)
        pa, pb = metrics.proxies(a, None, conv), metrics.proxies(b, None, conv)
        assert ab.native_gate_count == pa.native_gate_count + pb.native_gate_count
        assert ab.total_rotation_deg == pa.total_rotation_deg + pb.total_rotation_deg


@given(native_circuits())
def test_schedule_bounds(c):
    dev = ir.DeviceModel(durations_ns={"sx": 35.6, "x": 35.6, "cr": 450.0, "mcr": 520.0})
    length = metrics.schedule_asap(c, dev)
    durations = [dev.duration(g) for g in c.gates]
    busiest = max((sum(dev.duration(g) for g in c.gates if q in g.qubits) for q in range(c.num_qubits)), default=0.0)
    assert busiest - 1e-9 <= length <= sum(durations) + 1e-9


@given(native_circuits(), native_circuits())
def test_schedule_subadditive(a, b):
    dev = ir.DeviceModel(durations_ns={"sx": 35.6, "x": 35.6, "cr": 450.0, "mcr": 520.0})
    assert metrics.schedule_asap(a + b, dev) <= metrics.schedule_asap(a, dev) + metrics.schedule_asap(b, dev) + 1e-9


def test_length_orders_toffolis_under_any_positive_device():
    canonical = tp.transpile(library.canonical_toffoli(), single_qubit="u3")
    optimized = library.optimized_toffoli()
    for sx, cr in [(35.6, 450.0), (20.0, 300.0), (50.0, 200.0), (10.0, 1000.0)]:
        dev = ir.DeviceModel(durations_ns={"sx": sx, "x": sx, "cr": cr})
        assert metrics.schedule_asap(optimized, dev) < metrics.schedule_asap(canonical, dev)


def test_objective_value_ordering(device):
    c = tp.transpile(library.canonical_toffoli())
    count, rot = metrics.objective_value(c, "gate_count", device)
    assert metrics.objective_value(c, "rotation", device) == (rot, count)
    assert metrics.objective_value(c, "length", device)[0] == metrics.schedule_asap(c, device)
    with pytest.raises(InvalidInputError):
        metrics.objective_value(c, "length", None)
