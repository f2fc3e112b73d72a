"""Reading and writing ``tradeoff-lab/1`` instance files.

An instance is ``{"format", "name", "ensemble", "instrument"}``. Instruments are
either explicit (``in_dim``, ``out_dim``, ``outcomes`` with Kraus matrices) or a
``builtin`` family with its parameters; ensembles are explicit or the
``christandl_winter`` ensemble of a full-rank state. Every validation failure is
an InstanceValidationError carrying the JSON path of the offending value.
"""

import json
import logging
from pathlib import Path
from typing import Any, Union

from ..models.ensemble import Ensemble
from ..models.instrument import OutcomeBranch, QuantumInstrument
from ..models.scenario import Instance
from ..utils.errors import InstanceValidationError, TradeoffLabError
from ..utils.matrix_codec import FORMAT_TAG, decode_matrix
from .ensembles import christandl_winter_ensemble
from .instruments import (
    channel_instrument,
    depolarizing_channel,
    identity_instrument,
    unitary_branch_instrument,
    von_neumann_instrument,
    weak_measurement_instrument,
)

logger = logging.getLogger(__name__)

BUILTIN_INSTRUMENTS = (
    "identity",
    "von_neumann",
    "depolarizing",
    "weak_measurement",
    "unitary_branches",
)


def _require_object(data: Any, path: str) -> dict:
    if not isinstance(data, dict):
        raise InstanceValidationError(path, "expected an object")
    return data


def _require_int(data: dict, key: str, path: str) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise InstanceValidationError(f"{path}.{key}", "expected a positive integer")
    return value


def _require_number(data: dict, key: str, path: str) -> float:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceValidationError(f"{path}.{key}", "expected a number")
    return float(value)


def _builtin_instrument(data: dict, path: str) -> QuantumInstrument:
    name = data["builtin"]
    if name not in BUILTIN_INSTRUMENTS:
        raise InstanceValidationError(
            f"{path}.builtin",
            f"unknown instrument {name!r}; known: {', '.join(BUILTIN_INSTRUMENTS)}",
        )
    if name == "unitary_branches":
        weights = data.get("weights")
        unitaries = data.get("unitaries")
        if not isinstance(weights, list) or not weights:
            raise InstanceValidationError(f"{path}.weights", "expected a non-empty list")
        if not isinstance(unitaries, list) or len(unitaries) != len(weights):
            raise InstanceValidationError(f"{path}.unitaries", "expected one matrix per weight")
        mats = [decode_matrix(u, f"{path}.unitaries[{i}]") for i, u in enumerate(unitaries)]
        return unitary_branch_instrument([float(w) for w in weights], mats)
    d = _require_int(data, "dim", path)
    if name == "identity":
        return identity_instrument(d)
    if name == "von_neumann":
        basis = data.get("basis")
        if basis is not None:
            basis = decode_matrix(basis, f"{path}.basis")
        return von_neumann_instrument(d, basis)
    if name == "depolarizing":
        return channel_instrument(depolarizing_channel(d, _require_number(data, "p", path)))
    return weak_measurement_instrument(d, _require_number(data, "strength", path))


def parse_instrument(data: Any, path: str = "$.instrument") -> QuantumInstrument:
    """Decode an explicit or builtin instrument."""
    data = _require_object(data, path)
    try:
        if "builtin" in data:
            return _builtin_instrument(data, path)
        outcomes = data.get("outcomes")
        if not isinstance(outcomes, list) or not outcomes:
            raise InstanceValidationError(f"{path}.outcomes", "expected a non-empty list")
        branches = []
        for i, raw in enumerate(outcomes):
            where = f"{path}.outcomes[{i}]"
            raw = _require_object(raw, where)
            raw = {"label": str(i), **raw}
            try:
                branches.append(OutcomeBranch.from_dict(raw, where))
            except InstanceValidationError:
                raise
            except TradeoffLabError as exc:
                raise InstanceValidationError(where, str(exc)) from exc
        in_dim = data.get("in_dim", branches[0].in_dim)
        out_dim = data.get("out_dim", branches[0].out_dim)
        return QuantumInstrument(tuple(branches), in_dim, out_dim)
    except InstanceValidationError:
        raise
    except (TradeoffLabError, ValueError) as exc:
        raise InstanceValidationError(path, str(exc)) from exc


def parse_ensemble(data: Any, path: str = "$.ensemble") -> Ensemble:
    """Decode an explicit ensemble or ``{"builtin": "christandl_winter", "rho": ...}``."""
    data = _require_object(data, path)
    if "builtin" in data:
        if data["builtin"] != "christandl_winter":
            raise InstanceValidationError(
                f"{path}.builtin", f"unknown ensemble {data['builtin']!r}"
            )
        rho = decode_matrix(data.get("rho"), f"{path}.rho")
        try:
            return christandl_winter_ensemble(rho)
        except TradeoffLabError as exc:
            raise InstanceValidationError(f"{path}.rho", str(exc)) from exc
    return Ensemble.from_dict(data, path)


def parse_instance(data: Any, default_name: str = "instance") -> Instance:
    """Validate a decoded JSON document and build the Instance."""
    data = _require_object(data, "$")
    tag = data.get("format")
    if tag != FORMAT_TAG:
        raise InstanceValidationError("$.format", f"expected {FORMAT_TAG!r}, got {tag!r}")
    name = data.get("name", default_name)
    if not isinstance(name, str) or not name:
        raise InstanceValidationError("$.name", "expected a non-empty string")
    if "ensemble" not in data:
        raise InstanceValidationError("$.ensemble", "missing")
    if "instrument" not in data:
        raise InstanceValidationError("$.instrument", "missing")
    ensemble = parse_ensemble(data["ensemble"])
    instrument = parse_instrument(data["instrument"])
    if ensemble.dim != instrument.in_dim:
        raise InstanceValidationError(
            "$.instrument",
            f"instrument input dimension {instrument.in_dim} does not match "
            f"ensemble dimension {ensemble.dim}",
        )
    return Instance(name, ensemble, instrument, str(data.get("description", "")))


def load_instance(path: Union[str, Path]) -> Instance:
    """Read and validate an instance file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceValidationError("$", f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceValidationError("$", f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    instance = parse_instance(data, default_name=path.stem)
    logger.info(
        "loaded %s: %d states in dimension %d, %d outcomes",
        instance.name,
        len(instance.ensemble),
        instance.ensemble.dim,
        instance.instrument.n_outcomes,
    )
    return instance


def dumps(document: dict) -> str:
    """Deterministic JSON text used for every file and stdout document."""
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def write_instance(instance: Instance, path: Union[str, Path]) -> Path:
    """Write an instance in explicit form; builtins are expanded to Kraus matrices."""
    path = Path(path)
    path.write_text(dumps(instance.to_dict()), encoding="utf-8")
    return path

