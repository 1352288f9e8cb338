"""Frame JSON files and CSV tables.

Frame file layout::

    {"dim": 2, "field": "real",
     "vectors": [[[re, im], [re, im]], ...],
     "labels": [1.0, 2.0, 3.0]}

``labels`` is optional. Extra keys (e.g. ``provenance``) are preserved on
load in the returned metadata and ignored otherwise.
"""

import csv
import io
import json

import numpy as np

from .errors import ParseError
from .frames import Frame


def _parse_scalar(x, where):
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(
        isinstance(t, (int, float)) and not isinstance(t, bool) for t in x
    ):
        return complex(x[0], x[1])
    raise ParseError(f"{where}: expected [re, im] or a number, got {x!r}")


def frame_from_dict(data, drop_zero=False):
    """Parse a frame document; returns ``(frame, labels_or_None, extra_keys)``."""
    if not isinstance(data, dict):
        raise ParseError("frame document must be a JSON object")
    for key in ("dim", "vectors"):
        if key not in data:
            raise ParseError(f"missing required key {key!r}")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError(f"'dim' must be a positive integer, got {dim!r}")
    field = data.get("field", "complex")
    if field not in ("real", "complex"):
        raise ParseError(f"'field' must be 'real' or 'complex', got {field!r}")
    vectors = data["vectors"]
    if not isinstance(vectors, list) or not vectors:
        raise ParseError("'vectors' must be a non-empty list")
    rows = []
    for j, v in enumerate(vectors):
        if not isinstance(v, list) or len(v) != dim:
            raise ParseError(f"vector {j} must have {dim} entries")
        rows.append([_parse_scalar(x, f"vector {j}") for x in v])
    V = np.array(rows, dtype=complex)
    labels = data.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != len(rows):
            raise ParseError(f"'labels' must be a list of {len(rows)} numbers")
        try:
            labels = np.array([float(x) for x in labels])
        except (TypeError, ValueError) as exc:
            raise ParseError(f"non-numeric label: {exc}") from exc
    try:
        if drop_zero:
            frame, keep = Frame.drop_zero_vectors(V, field)
            if labels is not None:
                labels = labels[keep]
        else:
            frame = Frame(V, field)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    extra = {k: v for k, v in data.items() if k not in ("dim", "field", "vectors", "labels")}
    return frame, labels, extra


def load_frame(path, drop_zero=False):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    return frame_from_dict(data, drop_zero)


def frame_to_dict(frame, labels=None, **extra):
    doc = {
        "dim": frame.dim,
        "field": frame.field,
        "vectors": [[[float(z.real), float(z.imag)] for z in row] for row in frame.vectors],
    }
    if labels is not None:
        doc["labels"] = [float(x) for x in labels]
    doc.update(extra)
    return doc


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays and complex numbers for :mod:`json`."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj


def dumps(obj):
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True)


def write_frame(path, frame, labels=None, **extra):
    with open(path, "w") as fh:
        fh.write(dumps(frame_to_dict(frame, labels, **extra)) + "\n")


def matrix_to_csv(M):
    """Real matrices as plain CSV; complex ones as ``re+imj`` strings."""
    M = np.asarray(M)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if np.issubdtype(M.dtype, np.integer):
        w.writerows(M.tolist())
    elif np.iscomplexobj(M) and np.any(M.imag):
        w.writerows([[repr(complex(z)) for z in row] for row in M])
    else:
        w.writerows([[repr(float(np.real(z))) for z in row] for row in M])
    return buf.getvalue()


def table_to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()
