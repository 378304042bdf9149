"""JSON encoding of scalars, matrices, rational matrices and representations.

Complex numbers are ``[re, im]`` pairs; exact rationals are ``"p/q"`` strings,
so an exact scalar is a pair of strings and a float scalar a pair of numbers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import linalg
from .cartan import CartanData
from .errors import SchemaError
from .poly import Poly
from .ratfun import RatFun
from .ratmat import RatMat
from .repn import Representation
from .scalars import EXACT, FLOAT, QI, parse_scalar


def _q_str(q) -> str:
    f = Fraction(int(q.numerator), int(q.denominator))
    return str(f)


def encode_scalar(x):
    if isinstance(x, QI):
        return [_q_str(x.re), _q_str(x.im)]
    if isinstance(x, (int, Fraction)):
        return [str(Fraction(x)), "0"]
    z = complex(x)
    return [z.real, z.imag]


def decode_scalar(obj, backend: str | None = None):
    """Inverse of :func:`encode_scalar`; also accepts CLI-style strings and plain numbers."""
    if isinstance(obj, list):
        if len(obj) != 2:
            raise SchemaError(f"complex scalar must be a [re, im] pair, got {obj!r}")
        re_, im_ = obj
        if isinstance(re_, str) and isinstance(im_, str):
            val = QI(Fraction(re_), Fraction(im_))
            return val if backend != FLOAT else complex(val)
        if isinstance(re_, (int, float)) and isinstance(im_, (int, float)):
            if backend == EXACT:
                raise SchemaError("float entries cannot be read on the exact backend")
            return complex(re_, im_)
        raise SchemaError(f"mixed scalar encoding {obj!r}")
    if isinstance(obj, (str, int, float)) and not isinstance(obj, bool):
        return parse_scalar(obj, backend)
    raise SchemaError(f"cannot decode scalar {obj!r}")


def encode_matrix(m: np.ndarray) -> list:
    return [[encode_scalar(x) for x in row] for row in m]


def decode_matrix(obj, backend: str | None = None) -> np.ndarray:
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise SchemaError("matrix must be a list of rows")
    rows = [[decode_scalar(x, backend) for x in row] for row in obj]
    if len({len(r) for r in rows}) > 1:
        raise SchemaError("matrix rows have different lengths")
    if rows and rows[0] and isinstance(rows[0][0], QI):
        return linalg.exact_array(rows)
    return np.array(rows, dtype=complex)


def encode_ratfun(f: RatFun) -> dict:
    return {"num": [encode_scalar(c) for c in f.num.c], "den": [encode_scalar(c) for c in f.den.c]}


def decode_ratfun(obj, backend: str) -> RatFun:
    try:
        num = [decode_scalar(c, backend) for c in obj["num"]]
        den = [decode_scalar(c, backend) for c in obj["den"]]
    except (KeyError, TypeError):
        raise SchemaError("rational function needs 'num' and 'den' coefficient lists") from None
    return RatFun(Poly(num, backend), Poly(den, backend))


def encode_ratmat(M: RatMat) -> dict:
    return {"kind": "ratmat", "backend": M.backend, "shape": list(M.shape),
            "entries": [[encode_ratfun(f) for f in row] for row in M.a]}


def decode_ratmat(obj) -> RatMat:
    if obj.get("kind") != "ratmat":
        raise SchemaError("not a rational matrix document")
    backend = obj.get("backend", EXACT)
    rows = [[decode_ratfun(f, backend) for f in row] for row in obj["entries"]]
    return RatMat(rows, backend)


def _encode_any(x):
    if isinstance(x, QI):
        return encode_scalar(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {k: _encode_any(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_encode_any(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


def encode_rep(V: Representation) -> dict:
    return {
        "cartan": V.cartan.to_json(),
        "hbar": encode_scalar(V.hbar),
        "dim": V.dim,
        "backend": V.backend,
        "xi0": [encode_matrix(m) for m in V.xi0],
        "xp0": [encode_matrix(m) for m in V.xp0],
        "xm0": [encode_matrix(m) for m in V.xm0],
        "t1": [encode_matrix(m) for m in V.t1],
        "poles": None if V.declared_poles is None else [encode_scalar(p) for p in V.declared_poles],
        "provenance": _encode_any(V.provenance),
    }


def decode_rep(obj, backend: str | None = None) -> Representation:
    from .repn import from_matrices
    if not isinstance(obj, dict):
        raise SchemaError("representation document must be a JSON object")
    missing = [k for k in ("cartan", "hbar", "xi0", "xp0", "xm0", "t1") if k not in obj]
    if missing:
        raise SchemaError(f"representation is missing {', '.join(missing)}")
    backend = backend or obj.get("backend")
    cd = CartanData.from_json(obj["cartan"])
    mats = {k: [decode_matrix(m, backend) for m in obj[k]] for k in ("xi0", "xp0", "xm0", "t1")}
    if "dim" in obj and any(m.shape[0] != obj["dim"] for ms in mats.values() for m in ms):
        raise SchemaError("matrix size disagrees with 'dim'")
    poles = obj.get("poles")
    poles = None if poles is None else [decode_scalar(p, backend) for p in poles]
    hbar = decode_scalar(obj["hbar"], backend)
    return from_matrices(cd, hbar, mats["xi0"], mats["xp0"], mats["xm0"], mats["t1"], poles,
                         obj.get("provenance") or {})


def dump(obj, path: str | Path | None = None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def load(path: str | Path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from None
