"""Plot-ready data for the Fibonacci strip picture and its five-term progression."""
from __future__ import annotations

import csv
from pathlib import Path

from .cps import enumerate_model_set, is_member
from .io import dump_json
from .pointset import CpsDescriptor
from .quadratic import TAU
from .windows import Interval

__all__ = ["strip_data", "progression_data", "reproduce_figures", "PROGRESSION_STEP"]

PROGRESSION_STEP = 3 * TAU + 2


def strip_data(region=(-6, 10), band=(-3, 3)):
    """Lattice points ``(x, x*)`` with ``x`` in ``region`` and ``x*`` in ``band``.

    Each row carries whether ``x*`` lies in the Fibonacci window, i.e.
    whether the lattice point sits in the strip ``R x [-1, tau-1)``.
    """
    cps = CpsDescriptor.golden()
    window = Interval(-1, TAU - 1)
    lo, hi = region
    if hi < lo:
        raise ValueError("region endpoints out of order")
    lattice = enumerate_model_set(cps, Interval(band[0], band[1], True, True), (lo, hi))
    rows = []
    for e, p, s in zip(lattice.elements(), lattice.phys[:, 0], lattice.internal[:, 0]):
        rows.append({"m": e.m, "n": e.n, "phys": float(p), "star": float(s),
                     "in_strip": is_member(cps, window, e)})
    model = enumerate_model_set(cps, window, (lo, hi))
    return rows, model


def progression_data():
    """The terms ``j*(3τ+2)``, ``j = 0..4``, with their star images and window checks."""
    cps = CpsDescriptor.golden()
    window = Interval(-1, TAU - 1)
    rows = []
    for j in range(5):
        x = j * PROGRESSION_STEP
        s = x.conj()
        rows.append({"j": j, "m": x.m, "n": x.n, "phys": float(x), "star": float(s),
                     "in_window": is_member(cps, window, x)})
    return rows


def _write_csv(path: Path, rows, header):
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=header, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("%.17g" % v if isinstance(v, float) else v) for k, v in r.items()})


def reproduce_figures(out_dir, region=(-6, 10)) -> dict:
    """Write the figure data files into ``out_dir`` and return their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows, model = strip_data(region)
    lattice_path = out / "strip_lattice.csv"
    _write_csv(lattice_path, rows, ["m", "n", "phys", "star", "in_strip"])
    model_path = out / "strip_modelset.csv"
    _write_csv(model_path, [{"m": int(m), "n": int(n), "phys": float(p)}
                            for (m, n), p in zip(model.coords, model.phys[:, 0])], ["m", "n", "phys"])
    window_path = out / "strip_window.json"
    dump_json({"window": {"lo": {"m": -1, "n": 0}, "hi": {"m": -1, "n": 1},
                          "lo_float": -1.0, "hi_float": float(TAU - 1)},
               "region": [float(region[0]), float(region[1])]}, window_path)
    prog_path = out / "progression.csv"
    _write_csv(prog_path, progression_data(), ["j", "m", "n", "phys", "star", "in_window"])
    return {"lattice": str(lattice_path), "modelset": str(model_path),
            "window": str(window_path), "progression": str(prog_path)}
