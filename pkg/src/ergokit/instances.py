"""Instance files: one JSON document describing a state, a Hamiltonian, and
optional named measurements and post-processing matrices.

Complex numbers are two-element arrays [re, im] (a bare number is accepted on
input and read as real); matrices are row-major nested arrays. Validation
errors carry the path of the offending field, e.g. ``state[1][0]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ErgokitError, InvalidGrid, ParseError, UnknownFamily, ValidationError
from .measurement import Povm, StochasticMatrix
from .states import DensityMatrix, Hamiltonian


@dataclass(frozen=True, eq=False)
class Instance:
    dimension: int
    hamiltonian: Hamiltonian
    state: DensityMatrix
    measurements: dict
    post_processing: dict


def _complex_entry(node, path: str) -> complex:
    if isinstance(node, bool):
        raise ValidationError(f"{path}: expected a number or [re, im] pair, got a boolean")
    if isinstance(node, (int, float)):
        return complex(node)
    if isinstance(node, list) and len(node) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in node):
        return complex(node[0], node[1])
    raise ValidationError(f"{path}: expected a number or [re, im] pair, got {node!r}")


def _complex_matrix(node, path: str, dim: int) -> np.ndarray:
    if not isinstance(node, list) or len(node) != dim:
        raise ValidationError(f"{path}: expected {dim} rows")
    out = np.zeros((dim, dim), dtype=complex)
    for r, row in enumerate(node):
        if not isinstance(row, list) or len(row) != dim:
            raise ValidationError(f"{path}[{r}]: expected {dim} entries")
        for c, entry in enumerate(row):
            out[r, c] = _complex_entry(entry, f"{path}[{r}][{c}]")
    return out


def _real_matrix(node, path: str) -> np.ndarray:
    if not isinstance(node, list) or not node:
        raise ValidationError(f"{path}: expected a non-empty list of rows")
    width = None
    rows = []
    for r, row in enumerate(node):
        if not isinstance(row, list) or not row:
            raise ValidationError(f"{path}[{r}]: expected a non-empty row")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValidationError(f"{path}[{r}]: expected {width} entries, got {len(row)}")
        for c, entry in enumerate(row):
            if isinstance(entry, bool) or not isinstance(entry, (int, float)):
                raise ValidationError(f"{path}[{r}][{c}]: expected a real number, got {entry!r}")
        rows.append([float(v) for v in row])
    return np.array(rows)


def _domain(path: str, build):
    """Run a domain constructor, re-tagging its invariant errors with the field path."""
    try:
        return build()
    except ErgokitError as exc:
        raise ValidationError(f"{path}: {exc}") from exc
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def instance_from_dict(doc, source: str = "instance") -> Instance:
    if not isinstance(doc, dict):
        raise ValidationError(f"{source}: top level must be a JSON object")
    if "dimension" not in doc:
        raise ValidationError("dimension: missing required field")
    dim = doc["dimension"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ValidationError(f"dimension: expected a positive integer, got {dim!r}")
    for key in ("hamiltonian", "state"):
        if key not in doc:
            raise ValidationError(f"{key}: missing required field")
    known = {"dimension", "hamiltonian", "state", "measurements", "post_processing"}
    for key in doc:
        if key not in known:
            raise ValidationError(f"{key}: unknown field")

    hamiltonian = _domain("hamiltonian", lambda: Hamiltonian(_complex_matrix(doc["hamiltonian"], "hamiltonian", dim)))
    state = _domain("state", lambda: DensityMatrix(_complex_matrix(doc["state"], "state", dim)))

    measurements = {}
    for name, node in _named_section(doc, "measurements").items():
        path = f"measurements.{name}"
        if not isinstance(node, list) or not node:
            raise ValidationError(f"{path}: expected a non-empty list of POVM elements")
        elements = tuple(_complex_matrix(el, f"{path}[{k}]", dim) for k, el in enumerate(node))
        measurements[name] = _domain(path, lambda els=elements: Povm(elements=els))

    post_processing = {}
    for name, node in _named_section(doc, "post_processing").items():
        path = f"post_processing.{name}"
        post_processing[name] = _domain(path, lambda n=node, p=path: StochasticMatrix(_real_matrix(n, p)))

    return Instance(dimension=dim, hamiltonian=hamiltonian, state=state,
                    measurements=measurements, post_processing=post_processing)


def _named_section(doc: dict, key: str) -> dict:
    section = doc.get(key)
    if section is None:
        return {}
    if not isinstance(section, dict):
        raise ValidationError(f"{key}: expected an object mapping names to entries")
    return section


def load_instance(path) -> Instance:
    path = Path(path)
    text = path.read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return instance_from_dict(doc, source=str(path))


def complex_to_json(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def matrix_to_json(m: np.ndarray) -> list:
    return [[complex_to_json(entry) for entry in row] for row in np.asarray(m, dtype=complex)]


def povm_to_json(p: Povm) -> list:
    return [matrix_to_json(e) for e in p.elements]


# --- post-processing families for parameter sweeps ------------------------

def _merge_family(b: float, n_outcomes: int) -> StochasticMatrix:
    if n_outcomes != 2:
        raise InvalidGrid(f"family 'merge' needs a 2-outcome measurement, got {n_outcomes} outcomes")
    if not 0.0 <= b <= 1.0:
        raise InvalidGrid(f"family 'merge' needs parameters in [0, 1], got {b!r}")
    return StochasticMatrix(np.array([[b, 1.0], [1.0 - b, 0.0]]))


def _mix_family(t: float, n_outcomes: int) -> StochasticMatrix:
    if not 0.0 <= t <= 1.0:
        raise InvalidGrid(f"family 'mix' needs parameters in [0, 1], got {t!r}")
    n = n_outcomes
    return StochasticMatrix((1.0 - t) * np.eye(n) + t * np.full((n, n), 1.0 / n))


# 'merge' folds the second outcome into the first at rate b (total merge at
# b=1); 'mix' interpolates between no post-processing and uniform relabeling.
FAMILIES = {
    "merge": _merge_family,
    "mix": _mix_family,
}


def family_matrix(name: str, param: float, n_outcomes: int) -> StochasticMatrix:
    if name not in FAMILIES:
        raise UnknownFamily(f"unknown family {name!r} (expected one of: {', '.join(FAMILIES)})")
    return FAMILIES[name](param, n_outcomes)


def parse_grid(spec: str) -> list:
    """Grid: either 'start:stop:count' or a comma-separated list of values."""
    spec = spec.strip()
    if not spec:
        raise InvalidGrid("empty grid specification")
    try:
        if ":" in spec:
            parts = spec.split(":")
            if len(parts) != 3:
                raise ValueError("expected start:stop:count")
            start, stop = float(parts[0]), float(parts[1])
            count = int(parts[2])
            if count < 1:
                raise ValueError("count must be at least 1")
            return [float(v) for v in np.linspace(start, stop, count)]
        return [float(v) for v in spec.split(",")]
    except ValueError as exc:
        raise InvalidGrid(f"cannot parse grid {spec!r}: {exc}") from exc


__all__ = [
    "FAMILIES",
    "Instance",
    "complex_to_json",
    "family_matrix",
    "instance_from_dict",
    "load_instance",
    "matrix_to_json",
    "parse_grid",
    "povm_to_json",
]
