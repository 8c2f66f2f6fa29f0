"""JSON documents: circuits, device models, target unitaries, stats and search results."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import circuit as ir
from .errors import CircuitFormatError, InvalidInputError

CIRCUIT_FORMAT = "pulseforge-circuit/1"
_POLARITY = {"+": 1, "-": -1}
_POLARITY_STR = {1: "+", -1: "-"}


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _read_json(path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise CircuitFormatError("malformed", f"cannot read {path}: {err.strerror}") from None
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except CircuitFormatError:
        raise
    except ValueError as err:
        raise CircuitFormatError("malformed", f"{path}: invalid JSON ({err})") from None


def _reject_constant(name: str):
    raise CircuitFormatError("bad_angle", f"non-finite number {name} is not allowed")


def _angle(raw, where: str) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float, str)):
        raise CircuitFormatError("bad_angle", f"{where}: angle must be a number")
    try:
        value = float(raw)
    except ValueError:
        raise CircuitFormatError("bad_angle", f"{where}: angle {raw!r} is not a number") from None
    if not math.isfinite(value):
        raise CircuitFormatError("bad_angle", f"{where}: angle must be finite, got {raw!r}")
    return value


# --------------------------------------------------------------------------
# circuits

def circuit_to_dict(c: ir.Circuit) -> dict:
    gates = []
    for g in c.gates:
        entry: dict[str, Any] = {"name": g.name, "q": list(g.qubits)}
        if g.name == "rz":
            entry["angle"] = g.angle
        elif g.name == "u3":
            entry["theta"], entry["phi"], entry["lambda"] = g.params
        if g.name in ("cr", "mcr"):
            entry["polarity"] = _POLARITY_STR[g.polarity]
        if g.name == "cr":
            entry["sandwich"] = g.sandwich
        gates.append(entry)
    kind = c.kind
    if kind == "mixed":
        raise InvalidInputError("mixed circuits cannot be saved")
    return {"format": CIRCUIT_FORMAT, "qubits": c.num_qubits, "kind": kind, "gates": gates}


def circuit_from_dict(doc: Mapping) -> ir.Circuit:
    if not isinstance(doc, Mapping):
        raise CircuitFormatError("malformed", "circuit document must be a JSON object")
    if doc.get("format") != CIRCUIT_FORMAT:
        raise CircuitFormatError("malformed", f"format must be {CIRCUIT_FORMAT!r}")
    m = doc.get("qubits")
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise CircuitFormatError("malformed", "qubits must be a positive integer")
    kind = doc.get("kind")
    if kind not in ("native", "abstract"):
        raise CircuitFormatError("bad_enum", f"kind must be 'native' or 'abstract', got {kind!r}")
    raw_gates = doc.get("gates")
    if not isinstance(raw_gates, list):
        raise CircuitFormatError("malformed", "gates must be a list")
    gates = [_gate_from_dict(entry, k, m) for k, entry in enumerate(raw_gates)]
    c = ir.Circuit(m, tuple(gates))
    # rz/sx/x belong to both vocabularies, so an all-shared circuit fits either kind.
    if (kind == "native" and c.kind != "native") or (kind == "abstract" and _has_native_only(gates)):
        raise CircuitFormatError("kind_mismatch", f"declared kind {kind!r} but gates are {c.kind}")
    return c


def _has_native_only(gates) -> bool:
    return any(g.name in ir.NATIVE_ONLY for g in gates)


def _gate_from_dict(entry, k: int, m: int) -> ir.Gate:
    where = f"gate {k}"
    if not isinstance(entry, Mapping):
        raise CircuitFormatError("malformed", f"{where}: must be an object")
    name = entry.get("name")
    if name not in ir.NATIVE | ir.ABSTRACT:
        raise CircuitFormatError("bad_enum", f"{where}: unknown gate name {name!r}")
    qubits = entry.get("q")
    if not isinstance(qubits, list) or not all(isinstance(q, int) and not isinstance(q, bool) for q in qubits):
        raise CircuitFormatError("malformed", f"{where}: q must be a list of integers")
    if any(q < 0 or q >= m for q in qubits):
        raise CircuitFormatError("qubit_range", f"{where}: qubit index out of range 0..{m - 1}")
    params: tuple = ()
    if name == "rz":
        if "angle" not in entry:
            raise CircuitFormatError("malformed", f"{where}: rz needs an angle")
        params = (_angle(entry["angle"], where),)
    elif name == "u3":
        missing = [p for p in ("theta", "phi", "lambda") if p not in entry]
        if missing:
            raise CircuitFormatError("malformed", f"{where}: u3 needs {', '.join(missing)}")
        params = tuple(_angle(entry[p], where) for p in ("theta", "phi", "lambda"))
    polarity = 1
    sandwich = "none"
    if name in ("cr", "mcr"):
        pol = entry.get("polarity", "+")
        if pol not in _POLARITY:
            raise CircuitFormatError("bad_enum", f"{where}: polarity must be '+' or '-'")
        polarity = _POLARITY[pol]
    if name == "cr":
        sandwich = entry.get("sandwich", "none")
        if sandwich not in ir.SANDWICHES:
            raise CircuitFormatError("bad_enum", f"{where}: sandwich must be one of {ir.SANDWICHES}")
    try:
        return ir.Gate(name, tuple(qubits), params, polarity, sandwich)
    except InvalidInputError as err:
        raise CircuitFormatError("malformed", f"{where}: {err}") from None


def load_circuit(path) -> ir.Circuit:
    return circuit_from_dict(_read_json(path))


def save_circuit(c: ir.Circuit, path) -> None:
    Path(path).write_text(dumps(circuit_to_dict(c)), encoding="utf-8")


# --------------------------------------------------------------------------
# devices

def device_from_dict(doc: Mapping) -> ir.DeviceModel:
    if not isinstance(doc, Mapping):
        raise CircuitFormatError("malformed", "device document must be a JSON object")
    try:
        return ir.DeviceModel(
            durations_ns=dict(doc.get("durations_ns", {})),
            fidelities=dict(doc.get("fidelities", {})),
            t1_ns=float(doc.get("t1_ns", 1.0e5)),
            t2_ns=float(doc.get("t2_ns", 1.0e5)),
        )
    except (TypeError, ValueError) as err:
        raise CircuitFormatError("malformed", f"device: {err}") from None


def device_to_dict(d: ir.DeviceModel) -> dict:
    return {
        "durations_ns": {k: (dict(v) if isinstance(v, Mapping) else v) for k, v in d.durations_ns.items()},
        "fidelities": dict(d.fidelities),
        "t1_ns": d.t1_ns,
        "t2_ns": d.t2_ns,
    }


def load_device(path) -> ir.DeviceModel:
    return device_from_dict(_read_json(path))


# --------------------------------------------------------------------------
# target unitaries

def target_to_dict(u: np.ndarray) -> dict:
    u = np.asarray(u, dtype=complex)
    return {"dim": int(u.shape[0]), "re": u.real.tolist(), "im": u.imag.tolist()}


def target_from_dict(doc: Mapping) -> np.ndarray:
    if not isinstance(doc, Mapping) or not {"dim", "re", "im"} <= set(doc):
        raise CircuitFormatError("malformed", "target needs dim, re and im")
    try:
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc["im"], dtype=float)
    except (TypeError, ValueError):
        raise CircuitFormatError("malformed", "target entries must be numbers") from None
    d = doc["dim"]
    if not isinstance(d, int) or re.shape != (d, d) or im.shape != (d, d):
        raise CircuitFormatError("malformed", "target re/im must be dim x dim")
    if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
        raise CircuitFormatError("bad_angle", "target entries must be finite")
    return re + 1j * im


def load_target(path) -> np.ndarray:
    return target_from_dict(_read_json(path))


# --------------------------------------------------------------------------
# stats

def load_stats(path) -> list:
    from .estimator import GateStats

    doc = _read_json(path)
    items = doc if isinstance(doc, list) else [doc]
    out = []
    for item in items:
        if not isinstance(item, Mapping) or not isinstance(item.get("counts"), Mapping):
            raise CircuitFormatError("malformed", "stats entries need a counts object")
        try:
            out.append(GateStats(item["counts"], float(item.get("delta_ns", 0.0)), str(item.get("label", ""))))
        except (TypeError, ValueError, InvalidInputError) as err:
            raise CircuitFormatError("malformed", f"stats: {err}") from None
    return out
