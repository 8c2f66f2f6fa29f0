import numpy as np
import pytest

from pulseforge import circuit as ir
from pulseforge import library, metrics
from pulseforge import linalg as la
from pulseforge import transpile as tp
from pulseforge.peephole import optimize
from pulseforge.synthesis import ObjectiveSettings, params_to_circuit, parse_block, search, snap_and_verify

TARGET = library.ghz_example_target()
CX = la.controlled_x(2, 0, [1])


def schmidt_rank(u: np.ndarray) -> int:
    """Operator Schmidt rank of a two-qubit operator across the qubit cut."""
    r = u.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    return int(np.sum(np.linalg.svd(r, compute_uv=False) > 1e-9))


def test_target_matches_its_definition():
    expected = la.tensor(la.HADAMARD, la.PAULI_X) @ CX @ la.tensor(la.HADAMARD, la.I2)
    assert np.allclose(TARGET, expected)


def test_ghz_drawn_form_is_not_equivalent():
    drawn = ir.unitary_of(library.ghz_example_optimized())
    assert not la.phase_equivalent(TARGET, drawn, 1e-3)
    assert la.trace_infidelity(TARGET, drawn) > 0.1


def test_no_single_u3_layer_form_exists():
    # (A (x) B) CX = T  iff  T CX^-1 is a product operator; likewise CX (A (x) B) = T.
    assert schmidt_rank(TARGET @ CX.conj().T) == 2
    assert schmidt_rank(CX.conj().T @ TARGET) == 2
    assert schmidt_rank(la.tensor(la.HADAMARD, la.PAULI_X)) == 1


def test_input_rotation_is_990():
    assert metrics.proxies(tp.transpile(library.ghz_example_input(), single_qubit="u3")).total_rotation_deg == 990


def test_two_layer_synthesis_is_exact_and_cheap():
    settings = ObjectiveSettings(alpha=0.30, gamma=1e-8)
    out = search(TARGET, [parse_block("cx01", 2)], 1, restarts=8, settings=settings, seed=0)
    best = None
    for r in out.feasible:
        snapped = snap_and_verify(r, TARGET, settings=settings)
        c = params_to_circuit(snapped.config, snapped.beta, 2)
        if la.phase_equivalent(TARGET, ir.unitary_of(c)):
            native = optimize(tp.transpile(c, single_qubit="u3")).circuit
            rot = metrics.proxies(native).total_rotation_deg
            best = rot if best is None else min(best, rot)
            assert la.phase_equivalent(TARGET, ir.unitary_of(native))
    assert best is not None and best <= 540
