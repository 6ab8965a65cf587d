"""JSON file formats for systems, pairs, and eigenvalue lists.

Complex scalars are always two-element [re, im] arrays.  Serialization is
canonical: fixed key order, two-space indent, shortest round-trip float
formatting (Python repr), so parse -> serialize is byte identical.
"""

import json

import numpy as np

from .system import PalindromicSystem, SymmetryClass

FORMAT_TAG = "palinverse-v1"


class FileFormatError(ValueError):
    """Raised for malformed or unsupported input files."""


def _complex_to_pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _matrix_to_json(M):
    M = np.asarray(M, dtype=np.complex128)
    return [[_complex_to_pair(z) for z in row] for row in M]


def _pair_to_complex(item, what):
    if (not isinstance(item, (list, tuple))) or len(item) != 2 or \
            not all(isinstance(x, (int, float)) for x in item):
        raise FileFormatError(f"parse: {what} must be a [re, im] pair, got {item!r}")
    return complex(float(item[0]), float(item[1]))


def _matrix_from_json(data, what):
    if not isinstance(data, list) or not data or \
            not all(isinstance(row, list) for row in data):
        raise FileFormatError(f"parse: {what} must be a nested list")
    ncols = len(data[0])
    out = np.zeros((len(data), ncols), dtype=np.complex128)
    for i, row in enumerate(data):
        if len(row) != ncols:
            raise FileFormatError(f"parse: ragged rows in {what}")
        for j, item in enumerate(row):
            out[i, j] = _pair_to_complex(item, f"{what}[{i}][{j}]")
    return out


def _dump(obj, path):
    text = json.dumps(obj, indent=2)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def _load(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"parse: invalid JSON in {path}: {exc}") from exc


def _check_format(doc, path):
    if not isinstance(doc, dict):
        raise FileFormatError(f"parse: {path} must hold a JSON object")
    tag = doc.get("format", FORMAT_TAG)
    if tag != FORMAT_TAG:
        raise FileFormatError(f"parse: unsupported format {tag!r} in {path}")


def save_system(sys, path):
    doc = {
        "format": FORMAT_TAG,
        "class": {"star": sys.cls.star, "epsilon": sys.cls.epsilon},
        "n": sys.n,
        "A1": _matrix_to_json(sys.A1),
        "A0": _matrix_to_json(sys.A0),
    }
    _dump(doc, path)


def load_system(path):
    doc = _load(path)
    _check_format(doc, path)
    try:
        cdoc = doc["class"]
        cls = SymmetryClass(str(cdoc["star"]), int(cdoc["epsilon"]))
        A1 = _matrix_from_json(doc["A1"], "A1")
        A0 = _matrix_from_json(doc["A0"], "A0")
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"parse: bad system file {path}: {exc}") from exc
    n = doc.get("n")
    if n is not None and int(n) != A1.shape[0]:
        raise FileFormatError(f"parse: declared n = {n} does not match A1")
    return PalindromicSystem(cls, A1, A0)


def save_pair(X, T, path):
    doc = {
        "format": FORMAT_TAG,
        "X": _matrix_to_json(X),
        "T": _matrix_to_json(T),
    }
    _dump(doc, path)


def load_pair(path):
    doc = _load(path)
    _check_format(doc, path)
    try:
        X = _matrix_from_json(doc["X"], "X")
        T = _matrix_from_json(doc["T"], "T")
    except KeyError as exc:
        raise FileFormatError(f"parse: pair file {path} misses {exc}") from exc
    return X, T


def save_values(values, path):
    _dump([_complex_to_pair(v) for v in values], path)


def load_values(path):
    doc = _load(path)
    if isinstance(doc, dict):
        doc = doc.get("values")
    if not isinstance(doc, list):
        raise FileFormatError(f"parse: {path} must hold a list of [re, im] pairs")
    return [_pair_to_complex(item, "value") for item in doc]
