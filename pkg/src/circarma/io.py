"""JSON and CSV serialization with 17 significant digits."""

import csv
import io
import json
import math

import numpy as np


def _fmt(v):
    v = float(v)
    if not math.isfinite(v):
        raise ValueError(f"cannot serialize non-finite number {v}")
    s = format(v, ".17g")
    if s == "-0":
        s = "0"
    return s


def _encode(obj):
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{_fmt(obj.real)}, {_fmt(obj.imag)}]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    """JSON text with every float written to 17 significant digits."""
    return _encode(obj) + "\n"


def complex_list(values):
    """Nested [re, im] pairs for an array of any shape."""
    arr = np.asarray(values, dtype=complex)
    if arr.ndim == 0:
        return [float(arr.real), float(arr.imag)]
    return [complex_list(v) for v in arr]


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def spectrum_rows(phi, P, Q):
    """Rows (k, theta_k, Phi, P, Q) for a scalar spectrum on the grid."""
    circle = phi.circle
    Pv = P.values(circle)
    Qv = Q.values(circle)
    return [(int(k), float(t), float(f), float(p), float(q))
            for k, t, f, p, q in zip(circle.indices, circle.thetas, phi.values, Pv, Qv)]
