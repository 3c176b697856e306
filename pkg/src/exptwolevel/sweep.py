"""Parameter-sweep execution and dataset serialization.

A sweep evaluates one quantity (populations, amplitudes, spectrum, rabi, or
interferogram) over a 1-D or 2-D uniform grid of model parameters, optionally
alongside the independent ODE oracle, and serializes the result as CSV or
JSON with a full provenance header.

Grid points are evaluated by a bounded thread pool (size from the
EXPTWOLEVEL_WORKERS environment variable, default: core count); rows are
collected in grid order, so output is deterministic and independent of
scheduling.  The oracle runs outside the pool as one batched integration per
common time window, which keeps it both fast and bitwise reproducible.

Per-point numerical failures do not abort the sweep: the row is emitted with
NaN values and a nonzero error code (1 = domain, 2 = degenerate basis,
3 = accuracy/overflow, 4 = other).
"""

from __future__ import annotations

import datetime
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .analytic import AmplitudePair, amplitudes, populations
from .errors import (
    AccuracyError,
    ConfigError,
    DegeneracyError,
    DomainError,
    ExponentOverflowError,
)
from .model import AxisSpec, ModelParams
from .oracle import IntegratorConfig, integrate_tdse, integrate_tdse_batch
from .rabi import RabiParams, interferogram, rabi_survival_closed_form, rabi_survival_oracle
from .spectrum import energy_decomposition
from .specfun import SWITCHING

QUANTITIES = ("populations", "amplitudes", "spectrum", "rabi", "interferogram")
CONVENTIONS = ("mod2", "paper")
FORMATS = ("csv", "json")
_MODEL_AXES = ("A", "alpha", "beta", "epsilon", "Delta", "t")
_RABI_AXES = ("epsilon", "Delta", "t")

WORKERS_ENV = "EXPTWOLEVEL_WORKERS"

_ORACLE_CFG = IntegratorConfig(rel_tol=1e-11, abs_tol=1e-13)


@dataclass(frozen=True)
class SweepConfig:
    base: ModelParams
    axes: tuple
    quantity: str
    convention: str = "mod2"
    oracle: bool = False
    fmt: str = "csv"
    out: str | None = None

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ConfigError(f"unknown quantity {self.quantity!r}; choose from {QUANTITIES}")
        if self.convention not in CONVENTIONS:
            raise ConfigError(f"unknown convention {self.convention!r}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"unknown format {self.fmt!r}")
        if not 1 <= len(self.axes) <= 2:
            raise ConfigError("sweeps take one or two axes")
        allowed = _RABI_AXES if self.quantity in ("rabi", "interferogram") else _MODEL_AXES
        names = [ax.name for ax in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError("swept axis names must be distinct")
        for n in names:
            if n not in allowed:
                raise ConfigError(f"axis {n!r} not sweepable for {self.quantity}; choose from {allowed}")
        if self.quantity == "interferogram":
            if len(self.axes) != 2 or names[0] != "t" or names[1] != "epsilon":
                raise ConfigError("interferogram needs axes t (first) and epsilon (second)")

    def to_json_dict(self) -> dict:
        return {
            "base": self.base.to_json_dict(),
            "axes": [
                {"name": a.name, "start": a.start, "stop": a.stop, "samples": a.samples}
                for a in self.axes
            ],
            "quantity": self.quantity,
            "convention": self.convention,
            "oracle": self.oracle,
            "format": self.fmt,
            "out": self.out,
        }

    @staticmethod
    def from_json_dict(d: dict) -> "SweepConfig":
        try:
            return SweepConfig(
                base=ModelParams.from_json_dict(d["base"]),
                axes=tuple(
                    AxisSpec(a["name"], float(a["start"]), float(a["stop"]), int(a["samples"]))
                    for a in d["axes"]
                ),
                quantity=d["quantity"],
                convention=d.get("convention", "mod2"),
                oracle=bool(d.get("oracle", False)),
                fmt=d.get("format", "csv"),
                out=d.get("out"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed sweep config: {exc}") from exc


@dataclass
class Dataset:
    columns: list
    rows: list
    provenance: dict = field(default_factory=dict)


def _error_code(exc: Exception) -> int:
    if isinstance(exc, (DegeneracyError,)):
        return 2
    if isinstance(exc, (DomainError,)):  # PoleError and ConfigError subclass these
        return 1
    if isinstance(exc, (AccuracyError, ExponentOverflowError, OverflowError)):
        return 3
    return 4


def _grid_points(cfg: SweepConfig):
    """Row-major list of {axis_name: value} dicts."""
    if len(cfg.axes) == 1:
        return [{cfg.axes[0].name: v} for v in cfg.axes[0].values()]
    return [
        {cfg.axes[0].name: v1, cfg.axes[1].name: v2}
        for v1 in cfg.axes[0].values()
        for v2 in cfg.axes[1].values()
    ]


def _apply_point(base: ModelParams, pt: dict):
    """Split a grid point into a ModelParams override and an end time."""
    t_end = pt.get("t", base.t1)
    overrides = {k: v for k, v in pt.items() if k != "t"}
    q = replace(base, **overrides) if overrides else base
    if t_end <= q.t0:
        raise DomainError(f"sample time t = {t_end} must exceed t0 = {q.t0}")
    if t_end != q.t1:
        q = replace(q, t1=float(t_end))
    return q, float(t_end)


def _workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ConfigError(f"{WORKERS_ENV} must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


def _oracle_finals(base: ModelParams, pts: list) -> list:
    """Final (c1, c2) from the ODE oracle for each grid point, or None on error.

    Points sharing a common end time are integrated as one batch; points that
    differ only in end time share a single sampled trajectory.  Always runs
    serially (outside the worker pool) so datasets are scheduling-independent.
    """
    resolved = [None] * len(pts)
    ok, params, t_ends = [], [], []
    for i, pt in enumerate(pts):
        try:
            q, t_end = _apply_point(base, pt)
        except Exception:
            continue
        ok.append(i)
        params.append(q)
        t_ends.append(t_end)
    if not ok:
        return resolved
    if len(set(t_ends)) == 1:
        finals = integrate_tdse_batch(params, (0.0, 1.0), base.t0, t_ends[0], _ORACLE_CFG)
        for i, row in zip(ok, finals):
            resolved[i] = (complex(row[0]), complex(row[1]))
        return resolved
    # group points by everything except the end time and sample one trajectory
    groups = {}
    for idx, q, t_end in zip(ok, params, t_ends):
        key = (q.A, q.alpha, q.beta, q.epsilon, q.Delta)
        groups.setdefault(key, []).append((idx, q, t_end))
    for members in groups.values():
        t_max = max(m[2] for m in members)
        q0 = replace(members[0][1], t1=t_max)
        res = integrate_tdse(
            q0,
            AmplitudePair(0.0, 1.0, base.t0),
            _ORACLE_CFG,
            t_eval=[m[2] for m in members],
        )
        for (idx, _, _), samp in zip(members, res.samples):
            resolved[idx] = (complex(samp[0]), complex(samp[1]))
    return resolved


def _populations_columns(cfg):
    cols = ["p12_paper", "p22_paper", "p12_mod2", "p22_mod2", "norm"]
    if cfg.oracle:
        cols += ["oracle_p12_mod2", "oracle_p22_mod2", "deviation"]
    return cols


def _amplitudes_columns(cfg):
    cols = ["re_c1", "im_c1", "re_c2", "im_c2", "norm"]
    if cfg.oracle:
        cols += ["oracle_re_c1", "oracle_im_c1", "oracle_re_c2", "oracle_im_c2", "deviation"]
    return cols


def run_sweep(cfg: SweepConfig) -> Dataset:
    pts = _grid_points(cfg)
    axis_names = [ax.name for ax in cfg.axes]
    nan = float("nan")

    if cfg.quantity == "interferogram":
        r = RabiParams(epsilon=cfg.base.epsilon, Delta=cfg.base.Delta, t=cfg.base.t1)
        grid = interferogram(r, cfg.axes[0], cfg.axes[1])
        columns = ["t", "epsilon", "p_real", "p_modulus", "p_mod2_oracle", "error"]
        rows = []
        for i, t in enumerate(cfg.axes[0].values()):
            for j, e in enumerate(cfg.axes[1].values()):
                rows.append(
                    [t, e, grid.p_real[i][j], grid.p_modulus[i][j], grid.p_mod2_oracle[i][j], 0]
                )
        return _finish(cfg, columns, rows)

    if cfg.quantity == "rabi":
        def eval_point(pt):
            r = RabiParams(
                epsilon=pt.get("epsilon", cfg.base.epsilon),
                Delta=pt.get("Delta", cfg.base.Delta),
                t=pt.get("t", cfg.base.t1),
            )
            vals = []
            cf = rabi_survival_closed_form(r)
            vals += [cf.real_part, cf.modulus]
            if cfg.oracle:
                orc = rabi_survival_oracle(r)
                ref = cf.modulus if cfg.convention == "mod2" else cf.real_part
                vals += [orc.p22_mod2, orc.p12_mod2, abs(ref - orc.p22_mod2)]
            return vals

        columns = ["p_real", "p_modulus"]
        if cfg.oracle:
            columns += ["oracle_p22_mod2", "oracle_p12_mod2", "deviation"]
        n_vals = len(columns)
        columns = axis_names + columns + ["error"]
        rows = _map_points(pts, eval_point, axis_names, n_vals)
        return _finish(cfg, columns, rows)

    if cfg.quantity == "spectrum":
        def eval_point(pt):
            q, t_end = _apply_point(cfg.base, pt)
            d = energy_decomposition(q, t_end)
            return [d.re_plus, d.im_plus, d.re_minus, d.im_minus, d.phi, d.z_mag]

        value_cols = ["re_e_plus", "im_e_plus", "re_e_minus", "im_e_minus", "phi", "z_mag"]
        columns = axis_names + value_cols + ["error"]
        rows = _map_points(pts, eval_point, axis_names, len(value_cols))
        return _finish(cfg, columns, rows)

    # populations / amplitudes share the oracle plumbing
    oracle_vals = _oracle_finals(cfg.base, pts) if cfg.oracle else None

    if cfg.quantity == "populations":
        value_cols = _populations_columns(cfg)

        def eval_point(i_pt):
            i, pt = i_pt
            q, t_end = _apply_point(cfg.base, pt)
            rec = populations(q, q.t0, t_end)
            vals = [rec.p12_paper, rec.p22_paper, rec.p12_mod2, rec.p22_mod2, rec.norm]
            if cfg.oracle:
                o = oracle_vals[i]
                if o is None:
                    vals += [nan, nan, nan]
                else:
                    o12, o22 = abs(o[0]) ** 2, abs(o[1]) ** 2
                    vals += [o12, o22, max(abs(rec.p12_mod2 - o12), abs(rec.p22_mod2 - o22))]
            return vals
    else:  # amplitudes
        value_cols = _amplitudes_columns(cfg)

        def eval_point(i_pt):
            i, pt = i_pt
            q, t_end = _apply_point(cfg.base, pt)
            a = amplitudes(q, AmplitudePair(0.0, 1.0, q.t0), t_end)
            vals = [a.c1.real, a.c1.imag, a.c2.real, a.c2.imag, a.norm]
            if cfg.oracle:
                o = oracle_vals[i]
                if o is None:
                    vals += [nan, nan, nan, nan, nan]
                else:
                    vals += [
                        o[0].real, o[0].imag, o[1].real, o[1].imag,
                        max(abs(a.c1 - o[0]), abs(a.c2 - o[1])),
                    ]
            return vals

    columns = axis_names + value_cols + ["error"]
    rows = _map_points(list(enumerate(pts)), eval_point, axis_names, len(value_cols),
                       pt_of=lambda ip: ip[1])
    return _finish(cfg, columns, rows)


def _map_points(items, eval_point, axis_names, n_vals, pt_of=lambda pt: pt):
    nan = float("nan")

    def task(item):
        pt = pt_of(item)
        prefix = [pt[n] for n in axis_names]
        try:
            return prefix + eval_point(item) + [0]
        except Exception as exc:  # flagged row, sweep continues
            return prefix + [nan] * n_vals + [_error_code(exc)]

    n_workers = _workers()
    if n_workers == 1 or len(items) <= 1:
        return [task(it) for it in items]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(task, items))


def _finish(cfg: SweepConfig, columns, rows) -> Dataset:
    provenance = {
        "generator": f"exptwolevel {__version__}",
        "config": cfg.to_json_dict(),
        "integrator": {
            "rel_tol": _ORACLE_CFG.rel_tol,
            "abs_tol": _ORACLE_CFG.abs_tol,
        },
        "specfun_accuracy_target": SWITCHING.accuracy_target,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    for row in rows:
        assert len(row) == len(columns)
    return Dataset(columns=list(columns), rows=rows, provenance=provenance)


def _fmt_value(v) -> str:
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".17g")


def emit(ds: Dataset, fmt: str, path=None) -> None:
    """Serialize a dataset as CSV or JSON to a path or file object."""
    if fmt not in FORMATS:
        raise ConfigError(f"unknown format {fmt!r}")
    close = False
    if path is None:
        fh = sys.stdout
    elif hasattr(path, "write"):
        fh = path
    else:
        try:
            fh = open(path, "w", encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot write dataset to {path}: {exc}") from exc
        close = True
    try:
        if fmt == "csv":
            for key, val in ds.provenance.items():
                fh.write(f"# {key}: {json.dumps(val, sort_keys=True)}\n")
            fh.write(",".join(ds.columns) + "\n")
            for row in ds.rows:
                fh.write(",".join(_fmt_value(v) for v in row) + "\n")
        else:
            json.dump(
                {"provenance": ds.provenance, "columns": ds.columns, "rows": ds.rows},
                fh,
                indent=1,
            )
            fh.write("\n")
    finally:
        if close:
            fh.close()


def load_json_dataset(path) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    return Dataset(columns=obj["columns"], rows=obj["rows"], provenance=obj["provenance"])


# Built-in figure sweeps.  Captions fix only some constants; the remaining
# windows and resolutions are package defaults chosen for smooth curves.
def _figure_config(n: int, oracle: bool = True, fmt: str = "csv", out=None) -> SweepConfig:
    if n == 2:
        base = ModelParams(A=2.0, alpha=1.0, beta=1.5, epsilon=0.0, Delta=0.5, t0=0.0, t1=3.0)
        axes = (AxisSpec("epsilon", -2.0, 2.0, 201),)
        return SweepConfig(base, axes, "populations", oracle=oracle, fmt=fmt, out=out)
    if n == 3:
        base = ModelParams(A=2.0, alpha=1.0, beta=0.0, epsilon=0.2, Delta=0.0, t0=0.0, t1=5.0)
        axes = (AxisSpec("Delta", -2.0, 2.0, 201),)
        return SweepConfig(base, axes, "populations", oracle=oracle, fmt=fmt, out=out)
    if n == 4:
        base = ModelParams(A=2.0, alpha=1.0, beta=0.0, epsilon=0.0, Delta=0.5, t0=0.0, t1=5.0)
        axes = (AxisSpec("epsilon", -2.0, 2.0, 201),)
        return SweepConfig(base, axes, "populations", oracle=oracle, fmt=fmt, out=out)
    if n == 5:
        base = ModelParams(A=1.0, alpha=-15.0, beta=0.0, epsilon=0.0, Delta=0.0, t0=0.0, t1=7.0)
        axes = (AxisSpec("Delta", -3.0, 3.0, 121), AxisSpec("epsilon", 0.0, 4.0, 81))
        return SweepConfig(base, axes, "spectrum", oracle=False, fmt=fmt, out=out)
    if n == 6:
        base = ModelParams(A=20.0, alpha=0.5, beta=0.0, epsilon=1.0, Delta=0.0, t0=0.0, t1=15.0)
        axes = (AxisSpec("Delta", -3.0, 3.0, 121), AxisSpec("beta", -60.0, -20.0, 81))
        return SweepConfig(base, axes, "spectrum", oracle=False, fmt=fmt, out=out)
    if n == 7:
        base = ModelParams(A=0.0, alpha=1.0, beta=0.0, epsilon=0.0, Delta=0.2, t0=-1.0, t1=0.0)
        axes = (AxisSpec("t", 0.0, 10.0, 121), AxisSpec("epsilon", -2.0, 2.0, 81))
        return SweepConfig(base, axes, "interferogram", oracle=oracle, fmt=fmt, out=out)
    raise ConfigError(f"no built-in figure {n}; choose 2-7")


FIGURES = {n: _figure_config for n in (2, 3, 4, 5, 6, 7)}
