"""Config parsing and exports: JSON-shaped configs, point-set CSV, report JSON."""
from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .pointset import CpsDescriptor, PointSet
from .quadratic import GOLDEN, QuadElem, QuadRing
from .windows import Ball, Box, Interval

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "load_config",
    "parse_cps",
    "parse_window",
    "parse_number",
    "parse_element",
    "encode_number",
    "write_pointset_csv",
    "read_pointset_csv",
    "dump_json",
    "FIBONACCI_CONFIG",
]

FIBONACCI_CONFIG = {
    "cps": "golden",
    "window": {"type": "interval", "lo": {"m": -1, "n": 0}, "hi": {"m": -1, "n": 1}},
}


class ConfigError(ValueError):
    """Malformed configuration; the message names the offending field."""


def _fail(path: str, msg: str):
    raise ConfigError(f"{path}: {msg}")


_TERM = re.compile(r"[+-]?[^+-]+")


def parse_element(text: str, ring: QuadRing = GOLDEN) -> QuadElem:
    """``"3τ+2"``, ``"2+3t"``, ``"-τ"``, ``"1/2τ-1/2"``, ``"5"`` -> field element."""
    s = text.replace(" ", "")
    if not s or _TERM.sub("", s):
        raise ConfigError(f"cannot read {text!r} as an element m+nτ")
    m = n = Fraction(0)
    try:
        for term in _TERM.findall(s):
            if term[-1] in "τtw":
                coef = term[:-1].rstrip("*")
                n += Fraction(coef + "1") if coef in ("", "+", "-") else Fraction(coef)
            else:
                m += Fraction(term)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot read {text!r} as an element m+nτ") from None
    return QuadElem(m, n, ring)


def parse_number(value, path: str = "value", ring: QuadRing | None = GOLDEN):
    """``{"m":..,"n":..}`` (ring element), int, float, ``"p/q"`` or ``"3τ+2"``."""
    if isinstance(value, dict):
        if set(value) - {"m", "n"}:
            _fail(path, f"unexpected keys {sorted(set(value) - {'m', 'n'})}")
        if ring is None:
            _fail(path, "quadratic endpoints need an algebraic CPS")
        try:
            return QuadElem(Fraction(str(value.get("m", 0))), Fraction(str(value.get("n", 0))), ring)
        except (ValueError, ZeroDivisionError) as exc:
            _fail(path, str(exc))
    if isinstance(value, bool):
        _fail(path, "expected a number")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            f = Fraction(value)
            return f.numerator if f.denominator == 1 else f
        except ValueError:
            if ring is None:
                _fail(path, f"cannot read {value!r}")
            try:
                return parse_element(value, ring)
            except ConfigError as exc:
                _fail(path, str(exc))
    _fail(path, f"expected a number, got {type(value).__name__}")


def encode_number(x):
    """JSON-friendly exact encoding of a number or ring element."""
    if isinstance(x, QuadElem):
        return {"m": _enc_coef(x.m), "n": _enc_coef(x.n)}
    if isinstance(x, tuple):
        return [encode_number(v) for v in x]
    return _enc_coef(x)


def _enc_coef(v):
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, Fraction):
        return str(v)
    return float(v)


def parse_cps(spec, path: str = "cps") -> CpsDescriptor:
    if spec == "golden" or spec is None:
        return CpsDescriptor.golden()
    if not isinstance(spec, dict):
        _fail(path, "expected \"golden\" or an object")
    kind = spec.get("type")
    if kind == "golden":
        return CpsDescriptor.golden()
    if kind == "algebraic":
        try:
            return CpsDescriptor.algebraic(QuadRing(int(spec["a"]), int(spec["b"])))
        except KeyError as exc:
            _fail(path, f"missing field {exc.args[0]}")
        except ValueError as exc:
            _fail(path, str(exc))
    if kind == "numeric":
        try:
            basis = [[Fraction(str(v)) for v in row] for row in spec["basis"]]
            return CpsDescriptor.numeric(basis, int(spec["physical_dim"]))
        except KeyError as exc:
            _fail(path, f"missing field {exc.args[0]}")
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            _fail(path, str(exc))
    _fail(f"{path}.type", f"unknown CPS type {kind!r}")


def _parse_interval(spec: dict, path: str, ring) -> Interval:
    for key in ("lo", "hi"):
        if key not in spec:
            _fail(f"{path}.{key}", "missing")
    lo = parse_number(spec["lo"], f"{path}.lo", ring)
    hi = parse_number(spec["hi"], f"{path}.hi", ring)
    try:
        return Interval(lo, hi, bool(spec.get("closed_lo", True)), bool(spec.get("closed_hi", False)))
    except ValueError as exc:
        _fail(path, str(exc))


def parse_window(spec, cps: CpsDescriptor, path: str = "window"):
    if not isinstance(spec, dict):
        _fail(path, "expected an object")
    ring = cps.ring
    kind = spec.get("type")
    if kind == "interval":
        return _parse_interval(spec, path, ring)
    if kind == "box":
        factors = spec.get("factors")
        if not isinstance(factors, list) or not factors:
            _fail(f"{path}.factors", "expected a non-empty list")
        return Box(tuple(_parse_interval(f, f"{path}.factors[{i}]", ring) for i, f in enumerate(factors)))
    if kind == "ball":
        if "center" not in spec or "radius" not in spec:
            _fail(path, "ball needs center and radius")
        center = tuple(parse_number(c, f"{path}.center[{i}]", None) for i, c in enumerate(spec["center"]))
        try:
            return Ball(center, parse_number(spec["radius"], f"{path}.radius", None), bool(spec.get("closed", False)))
        except ValueError as exc:
            _fail(path, str(exc))
    _fail(f"{path}.type", f"unknown window type {kind!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    cps: CpsDescriptor
    window: object
    region: tuple | None = None
    seed: int = 0
    params: dict = field(default_factory=dict)

    def param(self, name, default=None):
        return self.params.get(name, default)


def load_config(source=None) -> ExperimentConfig:
    """Read a config from a JSON file or a dict; ``None`` gives the Fibonacci default."""
    if source is None:
        raw = dict(FIBONACCI_CONFIG)
    elif isinstance(source, dict):
        raw = source
    else:
        p = Path(source)
        try:
            text = p.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {source}: {exc.strerror}") from None
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    cps = parse_cps(raw.get("cps", "golden"))
    window = parse_window(raw.get("window", FIBONACCI_CONFIG["window"]), cps)
    if window.dim != cps.internal_dim:
        _fail("window", "dimension does not match the internal space")
    region = raw.get("region")
    if region is not None:
        if not isinstance(region, list) or len(region) != 2:
            _fail("region", "expected [lo, hi]")
        region = tuple(parse_number(v, f"region[{i}]", None) for i, v in enumerate(region))
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        _fail("seed", "expected an integer")
    params = {k: v for k, v in raw.items() if k not in {"cps", "window", "region", "seed"}}
    return ExperimentConfig(cps, window, region, seed, params)


# -- exports -----------------------------------------------------------------------------

def _g17(v: float) -> str:
    return "%.17g" % v


def write_pointset_csv(ps: PointSet, dest=None) -> str:
    """CSV with exact coordinates first; returns the text and writes it to ``dest`` if given.

    Algebraic sets use the header ``m,n,phys,star``.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    algebraic = ps.cps is not None and ps.cps.ring is not None
    if algebraic:
        w.writerow(["m", "n", "phys", "star"])
        for (m, n), p, s in zip(ps.coords, ps.phys[:, 0], ps.internal[:, 0]):
            w.writerow([int(m), int(n), _g17(p), _g17(s)])
    else:
        width = ps.coords.shape[1] if ps.coords is not None else 0
        head = [f"c{i}" for i in range(width)] + [f"phys{i}" for i in range(ps.dim)]
        if ps.internal is not None:
            head += [f"internal{i}" for i in range(ps.internal.shape[1])]
        w.writerow(head)
        for i in range(len(ps)):
            row = [] if ps.coords is None else [int(v) for v in ps.coords[i]]
            row += [_g17(v) for v in ps.phys[i]]
            if ps.internal is not None:
                row += [_g17(v) for v in ps.internal[i]]
            w.writerow(row)
    text = buf.getvalue()
    if dest is not None:
        Path(dest).write_text(text)
    return text


def read_pointset_csv(source, cps: CpsDescriptor | None = None, region=None) -> PointSet:
    """Inverse of :func:`write_pointset_csv` on the exact coordinates."""
    text = Path(source).read_text() if not (isinstance(source, str) and "\n" in source) else source
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ConfigError("empty CSV")
    head, body = rows[0], rows[1:]
    if head[:2] == ["m", "n"]:
        cps = cps or CpsDescriptor.golden()
        coords = np.array([[int(r[0]), int(r[1])] for r in body], dtype=np.int64).reshape(-1, 2)
    else:
        idx = [i for i, h in enumerate(head) if h.startswith("c")]
        if not idx:
            phys = np.array([[float(r[i]) for i, h in enumerate(head) if h.startswith("phys")] for r in body])
            return PointSet.from_floats(phys, region)
        coords = np.array([[int(r[i]) for i in idx] for r in body], dtype=np.int64).reshape(-1, len(idx))
    if region is None:
        phys_cols = [i for i, h in enumerate(head) if h.startswith("phys")]
        if body:
            vals = np.array([[float(r[i]) for i in phys_cols] for r in body])
            region = tuple((float(lo), float(hi)) for lo, hi in zip(vals.min(axis=0), vals.max(axis=0)))
        else:
            region = tuple((0, 0) for _ in phys_cols)
    return PointSet.from_coords(coords, cps, region)


def _default(o):
    if isinstance(o, QuadElem):
        return encode_number(o)
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.bool_,)):
        return bool(o)
    raise TypeError(f"cannot encode {type(o).__name__}")


def dump_json(obj, dest=None) -> str:
    """Deterministic JSON (sorted keys, fixed indent)."""
    text = json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n"
    if dest is not None:
        Path(dest).write_text(text)
    return text
