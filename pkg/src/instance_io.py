"""
Instance and channel files

Both are UTF-8 JSON with complex numbers written as [re, im] pairs and a
"version" tag. An instance file looks like

    {
      "version": 1,
      "mode": "pure",
      "states":  [[[1, 0], [0, 0]], [[0.7071, 0], [0.7071, 0]]],
      "targets": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
      "priors":  [0.5, 0.5]
    }

Mixed mode writes each state as a matrix (list of rows). A "cloning"
block {"M": m, "N": n} replaces "targets": the instance then maps
rho^(x)M to rho^(x)N for each listed state rho.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from .bounds import CloningSetup
from .config import CHANNEL_FILE_VERSION, INSTANCE_FILE_VERSION
from .construction import KrausChannel
from .errors import InstanceFileError, SeparationError
from .feasibility import SeparationInstance, StateKind, create_separation_instance
from .qmat import DensityMatrix, PureState, State

__all__ = [
    'ParsedInstance',
    'input_digest',
    'parse_instance',
    'load_instance_file',
    'instance_to_dict',
    'write_instance',
    'channel_to_dict',
    'channel_from_dict',
    'save_channel',
    'load_channel',
    'default_channel_path',
]

logger = logging.getLogger(__name__)

# Pure amplitudes whose norm is further than this from 1 are reported when renormalized
RENORMALIZE_WARN_TOL = 1e-9


@dataclass
class ParsedInstance:
    instance: SeparationInstance
    digest: str
    cloning: Optional[CloningSetup] = None
    warnings: List[str] = field(default_factory=list)
    source: Optional[Path] = None


def input_digest(data: Union[bytes, str]) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


# ---------------------------------------------------------------- decoding
class _Decoder:
    """Decodes one document, attributing errors to the line of the offending key."""

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def line_of(self, key: str) -> Optional[int]:
        needle = f'"{key}"'
        for number, line in enumerate(self.lines, start=1):
            if needle in line:
                return number
        return None

    def fail(self, field_name: str, message: str) -> InstanceFileError:
        root = field_name.split("[")[0].split(".")[0]
        return InstanceFileError(field_name, message, self.line_of(root))

    def complex_value(self, value: Any, field_name: str) -> complex:
        if (not isinstance(value, list) or len(value) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
            raise self.fail(field_name, f"expected a [re, im] pair (got {value!r})")
        z = complex(float(value[0]), float(value[1]))
        if not np.isfinite(z):
            raise self.fail(field_name, "non-finite number")
        return z

    def vector(self, value: Any, field_name: str) -> np.ndarray:
        if not isinstance(value, list) or not value:
            raise self.fail(field_name, "expected a non-empty list of [re, im] pairs")
        return np.array([self.complex_value(v, f"{field_name}[{k}]") for k, v in enumerate(value)])

    def matrix(self, value: Any, field_name: str) -> np.ndarray:
        if not isinstance(value, list) or not value:
            raise self.fail(field_name, "expected a non-empty list of rows")
        rows = [self.vector(row, f"{field_name}[{k}]") for k, row in enumerate(value)]
        if len({row.size for row in rows}) != 1:
            raise self.fail(field_name, "rows have different lengths")
        return np.vstack(rows)


def _decode_states(decoder: _Decoder, data: Dict[str, Any], key: str, kind: StateKind,
                   warnings: List[str]) -> List[State]:
    raw = data.get(key)
    if not isinstance(raw, list) or not raw:
        raise decoder.fail(key, "expected a non-empty list of states")
    states: List[State] = []
    for k, item in enumerate(raw):
        name = f"{key}[{k}]"
        try:
            if kind is StateKind.PURE:
                amplitudes = decoder.vector(item, name)
                norm = float(np.linalg.norm(amplitudes))
                if norm == 0.0:
                    raise decoder.fail(name, "zero vector")
                if abs(norm - 1.0) > RENORMALIZE_WARN_TOL:
                    warnings.append(f"{name}: amplitudes renormalized (norm was {norm:.12g})")
                states.append(PureState.from_amplitudes(amplitudes))
            else:
                states.append(DensityMatrix(decoder.matrix(item, name)))
        except InstanceFileError:
            raise
        except SeparationError as exc:
            raise decoder.fail(name, str(exc)) from exc
    return states


def _decode_priors(decoder: _Decoder, data: Dict[str, Any]) -> Optional[np.ndarray]:
    raw = data.get("priors")
    if raw is None:
        return None
    if (not isinstance(raw, list)
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw)):
        raise decoder.fail("priors", "expected a list of numbers")
    return np.array(raw, dtype=float)


def _decode_cloning(decoder: _Decoder, data: Dict[str, Any]) -> Optional[Dict[str, int]]:
    raw = data.get("cloning")
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise decoder.fail("cloning", "expected an object {\"M\": m, \"N\": n}")
    copies = {}
    for key in ("M", "N"):
        value = raw.get(key)
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise decoder.fail(f"cloning.{key}", f"expected a positive integer (got {value!r})")
        copies[key] = value
    if copies["M"] > copies["N"]:
        raise decoder.fail("cloning", f"needs M <= N (got M={copies['M']}, N={copies['N']})")
    return copies


def parse_instance(text: str, source: Optional[Path] = None) -> ParsedInstance:
    """
    Parse instance-file text.

    Raises:
        InstanceFileError: malformed JSON or any field that does not yield a
            valid SeparationInstance; carries the field name and line
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFileError("document", exc.msg, exc.lineno) from exc
    decoder = _Decoder(text)
    if not isinstance(data, dict):
        raise InstanceFileError("document", "top level must be an object", 1)

    version = data.get("version")
    if version != INSTANCE_FILE_VERSION:
        raise decoder.fail("version", f"unsupported version {version!r} (expected {INSTANCE_FILE_VERSION})")
    mode = data.get("mode")
    try:
        kind = StateKind(mode)
    except ValueError:
        raise decoder.fail("mode", f"expected 'pure' or 'mixed' (got {mode!r})") from None

    warnings: List[str] = []
    states = _decode_states(decoder, data, "states", kind, warnings)
    priors = _decode_priors(decoder, data)
    copies = _decode_cloning(decoder, data)
    cloning = None
    try:
        if copies is not None:
            if "targets" in data:
                raise decoder.fail("targets", "a cloning block replaces the targets; give one or the other")
            instance = SeparationInstance.cloning(states, priors, copies["M"], copies["N"])
            cloning = CloningSetup(tuple(states), copies["M"], copies["N"])
        else:
            targets = _decode_states(decoder, data, "targets", kind, warnings)
            instance = create_separation_instance(states, targets, priors, kind)
    except InstanceFileError:
        raise
    except SeparationError as exc:
        field_name = "priors" if "prior" in str(exc) else "states"
        raise decoder.fail(field_name, str(exc)) from exc

    for message in warnings:
        logger.warning(message)
    return ParsedInstance(instance, input_digest(text), cloning, warnings, source)


def load_instance_file(path: Union[str, Path]) -> ParsedInstance:
    """
    Read and parse an instance file; the digest covers the raw bytes.

    Raises:
        OSError: unreadable file
        InstanceFileError: see parse_instance
    """
    path = Path(path)
    raw = path.read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InstanceFileError("document", f"not UTF-8 ({exc.reason})") from exc
    parsed = parse_instance(text, path)
    parsed.digest = input_digest(raw)
    return parsed


# ---------------------------------------------------------------- encoding
def _encode_vector(v: np.ndarray) -> List[List[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=np.complex128)]


def _encode_matrix(m: np.ndarray) -> List[List[List[float]]]:
    return [_encode_vector(row) for row in np.asarray(m, dtype=np.complex128)]


def _encode_state(state: State) -> List:
    if isinstance(state, PureState):
        return _encode_vector(state.amplitudes)
    return _encode_matrix(state.matrix)


def instance_to_dict(instance: SeparationInstance, cloning: Optional[CloningSetup] = None) -> Dict[str, Any]:
    document: Dict[str, Any] = {"version": INSTANCE_FILE_VERSION, "mode": instance.kind.value}
    if cloning is not None:
        document["states"] = [_encode_state(s) for s in cloning.states]
        document["cloning"] = {"M": cloning.m_copies, "N": cloning.n_copies}
    else:
        document["states"] = [_encode_state(s) for s in instance.inputs]
        document["targets"] = [_encode_state(s) for s in instance.targets]
    document["priors"] = [float(e) for e in instance.etas]
    return document


def write_instance(path: Union[str, Path], instance: SeparationInstance,
                   cloning: Optional[CloningSetup] = None) -> Path:
    path = Path(path)
    path.write_text(json.dumps(instance_to_dict(instance, cloning), indent=2) + "\n", encoding="utf-8")
    return path


def channel_to_dict(channel: KrausChannel) -> Dict[str, Any]:
    return {
        "version": CHANNEL_FILE_VERSION,
        "input_dim": channel.input_dim,
        "output_dim": channel.output_dim,
        "success_ops": [_encode_matrix(op) for op in channel.success_ops],
        "failure_ops": [_encode_matrix(op) for op in channel.failure_ops],
    }


def channel_from_dict(data: Dict[str, Any], text: str = "") -> KrausChannel:
    decoder = _Decoder(text)
    if not isinstance(data, dict):
        raise InstanceFileError("document", "top level must be an object", 1)
    if data.get("version") != CHANNEL_FILE_VERSION:
        raise decoder.fail("version", f"unsupported channel version {data.get('version')!r}")
    groups = {}
    for key in ("success_ops", "failure_ops"):
        raw = data.get(key, [])
        if not isinstance(raw, list):
            raise decoder.fail(key, "expected a list of matrices")
        groups[key] = [decoder.matrix(op, f"{key}[{k}]") for k, op in enumerate(raw)]
    try:
        channel = KrausChannel(tuple(groups["success_ops"]), tuple(groups["failure_ops"]))
    except SeparationError as exc:
        raise decoder.fail("success_ops", str(exc)) from exc
    for key, actual in (("input_dim", channel.input_dim), ("output_dim", channel.output_dim)):
        if key in data and data[key] != actual:
            raise decoder.fail(key, f"declared {data[key]!r} but operators give {actual}")
    return channel


def save_channel(path: Union[str, Path], channel: KrausChannel) -> Path:
    path = Path(path)
    path.write_text(json.dumps(channel_to_dict(channel), indent=2) + "\n", encoding="utf-8")
    return path


def load_channel(path: Union[str, Path]) -> KrausChannel:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFileError("document", exc.msg, exc.lineno) from exc
    return channel_from_dict(data, text)


def default_channel_path(instance_path: Union[str, Path]) -> Path:
    """`<stem>.channel.json` next to the instance file."""
    path = Path(instance_path)
    return path.with_name(f"{path.stem}.channel.json")
