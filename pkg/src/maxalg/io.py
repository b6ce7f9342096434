"""JSON file formats and exact serialization.

Entries are strings so that decimals stay exact (``"0.72"`` is 18/25).
Root values may also be written as ``"w^(1/l)"``.  A file is one of

* matrix: ``{"rows": n, "cols": m, "data": [[...], ...]}``
* family: ``{"matrices": {name: matrix, ...}}``
* polynomial: ``{"coeffs": [matrix, ...]}`` (ascending degree)
* scenario: any of ``family``, ``polys``, ``matrix``, ``word``, ``x``,
  ``options`` at top level.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .core import EXACT, FLOAT, Family, MaxMatrix, RootValue, format_scalar, scalar
from .errors import MaxAlgebraError
from .polynomial import MaxPoly

OPTION_KEYS = {"epsilon", "max_iter", "horizon", "norm", "cap"}
_ROOT = re.compile(r"^\s*([0-9./]+)\s*\^\s*\(\s*1\s*/\s*([0-9]+)\s*\)\s*$")


class ParseError(MaxAlgebraError):
    """Malformed input; the message names the file, JSON path and token."""

    def __init__(self, message: str, file: str = "<input>", path: str = "$", token=None):
        self.file, self.path, self.token = file, path, token
        where = f"{file}: {path}"
        if token is not None:
            where += f": offending token {token!r}"
        super().__init__(f"{where}: {message}")


@dataclass
class Scenario:
    """Everything a command may need; absent parts are None or empty."""

    matrix: MaxMatrix | None = None
    family: Family | None = None
    polys: list[MaxPoly] = field(default_factory=list)
    word: str | None = None
    x: MaxMatrix | None = None
    options: dict = field(default_factory=dict)


class _Ctx:
    def __init__(self, file: str, backend: str):
        if backend not in (EXACT, FLOAT):
            raise MaxAlgebraError(f"unknown backend {backend!r}")
        self.file, self.backend = file, backend

    def fail(self, msg: str, path: str, token=None):
        raise ParseError(msg, self.file, path, token)


def parse_entry(token, backend: str = EXACT, file: str = "<input>", path: str = "$"):
    """One matrix entry: a string (or int) holding a nonnegative rational or root."""
    if isinstance(token, bool) or not isinstance(token, (str, int)):
        raise ParseError("entries must be strings or integers", file, path, token)
    try:
        if isinstance(token, str) and (m := _ROOT.match(token)):
            value = RootValue(m.group(1), int(m.group(2)))
            if value.is_rational():
                value = value.as_fraction()
        else:
            value = scalar(token)
    except (MaxAlgebraError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), file, path, token) from None
    return float(value) if backend == FLOAT else value


def _matrix(obj, ctx: _Ctx, path: str) -> MaxMatrix:
    if not isinstance(obj, dict):
        ctx.fail("expected a matrix object", path, type(obj).__name__)
    for key in ("rows", "cols", "data"):
        if key not in obj:
            ctx.fail(f"missing key {key!r}", path)
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    for key, val in (("rows", rows), ("cols", cols)):
        if isinstance(val, bool) or not isinstance(val, int) or val < 1:
            ctx.fail(f"{key} must be a positive integer", f"{path}.{key}", val)
    if not isinstance(data, list) or len(data) != rows:
        ctx.fail(f"data must have {rows} rows", f"{path}.data",
                 len(data) if isinstance(data, list) else data)
    out = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            ctx.fail(f"row must have {cols} entries", f"{path}.data[{i}]",
                     len(row) if isinstance(row, list) else row)
        out.append([parse_entry(tok, ctx.backend, ctx.file, f"{path}.data[{i}][{j}]")
                    for j, tok in enumerate(row)])
    return MaxMatrix(out, ctx.backend)


def _family(obj, ctx: _Ctx, path: str) -> Family:
    if not isinstance(obj, dict) or "matrices" not in obj:
        ctx.fail("expected an object with key 'matrices'", path)
    mats = obj["matrices"]
    if not isinstance(mats, dict) or not mats:
        ctx.fail("'matrices' must be a nonempty object", f"{path}.matrices")
    members = {name: _matrix(body, ctx, f"{path}.matrices.{name}") for name, body in mats.items()}
    try:
        return Family(members)
    except MaxAlgebraError as exc:
        ctx.fail(str(exc), f"{path}.matrices")


def _poly(obj, ctx: _Ctx, path: str) -> MaxPoly:
    if not isinstance(obj, dict) or "coeffs" not in obj:
        ctx.fail("expected an object with key 'coeffs'", path)
    coeffs = obj["coeffs"]
    if not isinstance(coeffs, list) or not coeffs:
        ctx.fail("'coeffs' must be a nonempty list", f"{path}.coeffs")
    mats = [_matrix(c, ctx, f"{path}.coeffs[{j}]") for j, c in enumerate(coeffs)]
    try:
        return MaxPoly(mats)
    except MaxAlgebraError as exc:
        ctx.fail(str(exc), f"{path}.coeffs")


def _vector(obj, ctx: _Ctx, path: str) -> MaxMatrix:
    if not isinstance(obj, list) or not obj:
        ctx.fail("expected a nonempty list of entries", path, obj)
    return MaxMatrix.vector([parse_entry(t, ctx.backend, ctx.file, f"{path}[{i}]")
                             for i, t in enumerate(obj)], ctx.backend)


def parse_document(obj, file: str = "<input>", backend: str = EXACT) -> Scenario:
    """Turn a decoded JSON document of any supported kind into a Scenario."""
    ctx = _Ctx(file, backend)
    if not isinstance(obj, dict):
        ctx.fail("top level must be an object", "$", type(obj).__name__)
    sc = Scenario()
    if "data" in obj:
        sc.matrix = _matrix(obj, ctx, "$")
        return sc
    if "coeffs" in obj:
        sc.polys = [_poly(obj, ctx, "$")]
        return sc
    if "matrices" in obj:
        sc.family = _family(obj, ctx, "$")
        return sc
    known = {"matrix", "family", "polys", "word", "x", "options"}
    extra = set(obj) - known
    if extra:
        ctx.fail("unknown key", "$", sorted(extra)[0])
    if not set(obj) & known - {"options"}:
        ctx.fail("document holds no matrix, family, polynomial or scenario", "$")
    if "matrix" in obj:
        sc.matrix = _matrix(obj["matrix"], ctx, "$.matrix")
    if "family" in obj:
        sc.family = _family(obj["family"], ctx, "$.family")
    if "polys" in obj:
        if not isinstance(obj["polys"], list):
            ctx.fail("'polys' must be a list", "$.polys")
        sc.polys = [_poly(p, ctx, f"$.polys[{k}]") for k, p in enumerate(obj["polys"])]
    if "word" in obj:
        word = obj["word"]
        if isinstance(word, list):
            word = ",".join(str(s) for s in word)
        if not isinstance(word, str) or not word:
            ctx.fail("'word' must be a nonempty string or list", "$.word", word)
        sc.word = word
    if "x" in obj:
        sc.x = _vector(obj["x"], ctx, "$.x")
    opts = obj.get("options", {})
    if not isinstance(opts, dict):
        ctx.fail("'options' must be an object", "$.options")
    for key, val in opts.items():
        if key not in OPTION_KEYS:
            ctx.fail("unknown option", f"$.options.{key}", key)
        if key == "epsilon":
            val = parse_entry(val, EXACT, file, "$.options.epsilon")
        elif key in ("max_iter", "horizon", "cap"):
            if isinstance(val, bool) or not isinstance(val, int) or val < 1:
                ctx.fail(f"{key} must be a positive integer", f"$.options.{key}", val)
        elif val not in ("linf", "l1"):
            ctx.fail("norm must be 'linf' or 'l1'", "$.options.norm", val)
        sc.options[key] = val
    return sc


def load(path, backend: str = EXACT) -> Scenario:
    """Read and parse a JSON input file.  Raises ParseError or OSError."""
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg}, line {exc.lineno} column {exc.colno})",
                         str(p), "$", text[exc.pos:exc.pos + 12] or None) from None
    return parse_document(obj, str(p), backend)


def entry_text(x) -> str:
    """Canonical string for a matrix entry, readable by :func:`parse_entry`."""
    return format_scalar(x)


def dump_matrix(M: MaxMatrix) -> dict:
    return {"rows": M.rows, "cols": M.cols,
            "data": [[entry_text(x) for x in row] for row in M.entries]}


def dump_family(F: Family) -> dict:
    return {"matrices": {name: dump_matrix(M) for name, M in F.items()}}


def dump_poly(P: MaxPoly) -> dict:
    return {"coeffs": [dump_matrix(A) for A in P.coeffs]}


def dump_vector(v: MaxMatrix) -> list[str]:
    return [entry_text(x) for x in v.flat()]


def dump_scenario(sc: Scenario) -> dict:
    out: dict = {}
    if sc.matrix is not None:
        out["matrix"] = dump_matrix(sc.matrix)
    if sc.family is not None:
        out["family"] = dump_family(sc.family)
    if sc.polys:
        out["polys"] = [dump_poly(P) for P in sc.polys]
    if sc.word is not None:
        out["word"] = sc.word
    if sc.x is not None:
        out["x"] = dump_vector(sc.x)
    if sc.options:
        out["options"] = {k: (entry_text(v) if k == "epsilon" else v) for k, v in sc.options.items()}
    return out


def dump_value(x) -> dict:
    """Report form of a scalar: exact text plus a float rendering."""
    if isinstance(x, RootValue):
        if x.is_rational():
            x = x.as_fraction()
        else:
            return {"base": format_scalar(x.base), "degree": x.degree, "float": float(x)}
    if isinstance(x, float):
        return {"exact": None, "float": x}
    return {"exact": format_scalar(x), "float": float(x)}


def load_value(obj):
    """Inverse of :func:`dump_value` (exact forms only)."""
    if "base" in obj:
        return RootValue(obj["base"], obj["degree"])
    if obj.get("exact") is None:
        return float(obj["float"])
    return scalar(obj["exact"])


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_default)


def _default(o):
    if isinstance(o, (Fraction, RootValue)):
        return dump_value(o)
    if isinstance(o, MaxMatrix):
        return dump_matrix(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")
