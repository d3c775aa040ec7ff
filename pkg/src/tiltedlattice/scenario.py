"""Run a ScenarioConfig and write its CSV, PGM and manifest files.

Outputs are byte-deterministic: floats are written with ``repr`` (shortest
round-trip form), lines end in ``\\n``, and all sums have a fixed order.
"""

import math
from dataclasses import replace
from pathlib import Path

import numpy as np

from .analytic1d import (
    GaussianSpec1D,
    LatticeParams1D,
    center_expectation,
    gaussian_1d,
    localized,
    moments,
    neighbour_overlap,
    propagate,
)
from .config import ScenarioConfig, format_config, parse_config
from .errors import ConfigError
from .lattice2d import GaussianSpec2D, LatticeParams2D, union_window
from .lissajous import LissajousTarget, plan
from .observables import TrajectorySample, record_trajectory

TRAJECTORY_HEADER = ("t", "cx", "cy", "vx", "vy", "px", "py", "dev")


def _fmt(v):
    return repr(float(v))


# ---------------------------------------------------------------------------
# writers

def write_trajectory_csv(path, samples):
    lines = [",".join(TRAJECTORY_HEADER)]
    for s in samples:
        row = (s.time, s.center_x, s.center_y, s.var_x, s.var_y, s.predicted_x, s.predicted_y, s.deviation)
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")


def write_density_csv(path, times, columns, rows):
    """One row per time: ``t`` then one density value per labelled column."""
    lines = [",".join(("t",) + tuple(columns))]
    for t, row in zip(times, rows):
        lines.append(",".join([_fmt(t)] + [_fmt(v) for v in row]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")


def write_pgm(path, density):
    """Binary graymap (P5, maxval 255) of a 2D density, max-normalized.

    ``density[i, j]`` is site (x_i, y_j); x runs left to right and y bottom
    to top.
    """
    img = np.asarray(density, dtype=float).T[::-1]
    peak = img.max()
    scaled = np.zeros(img.shape, dtype=np.uint8) if peak <= 0 else np.rint(255.0 * img / peak).astype(np.uint8)
    header = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii")
    Path(path).write_bytes(header + scaled.tobytes())


def read_pgm(path):
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError(f"{path} is not a binary PGM")
    w, h = (int(v) for v in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)


# ---------------------------------------------------------------------------
# single scenarios

def _sample(t, cx, vx, px, cy=0.0, vy=0.0, py=0.0):
    return TrajectorySample(t, cx, cy, vx, vy, px, py, math.hypot(cx - px, cy - py))


def _free_center(spec, params, t):
    drift = 2 * params.tunneling_J * math.sin(spec.momentum_P) * neighbour_overlap(spec.center_X, spec.width_sigma)
    return spec.center_X + drift * t


def _run_1d(cfg):
    J = cfg["J"]
    params = LatticeParams1D(J, cfg["F_over_J"] * J)
    times = cfg.times()
    if cfg.mode == "breathing":
        x0 = cfg["x0"]
        state0 = localized(x0)
        predicted = [float(x0)] * len(times)
    else:
        spec = GaussianSpec1D(cfg["X"], cfg["P"], cfg["sigma"])
        state0 = gaussian_1d(spec)
        if params.tilt_F > 0:
            predicted = [center_expectation(spec, params, t) for t in times]
        else:
            predicted = [_free_center(spec, params, t) for t in times]
    states = [propagate(state0, params, t) for t in times]
    samples = []
    for t, st, px in zip(times, states, predicted):
        cx, vx = moments(st)
        samples.append(_sample(t, cx, vx, px))
    return times, samples, states


def _run_2d(cfg):
    J = cfg["J"]
    if cfg.mode == "lissajous":
        target = LissajousTarget(
            cfg["p"], cfg["q"], cfg["phi"], cfg.get("amp_A"), cfg.get("amp_B"), cfg.get("base_frequency")
        )
        pl = plan(target, J, cfg["sigma"])
        if cfg.get("t_end") is None:
            cfg = replace(cfg, values={**cfg.values, "t_end": cfg["t_start"] + pl.period_T})
        samples, states = record_trajectory(pl.spec, pl.params, cfg.times(), predictor=pl, keep_states=True)
        resolved = [
            f"resolved Fx_over_J = {pl.params.tilt_Fx / J!r}",
            f"resolved Fy_over_J = {pl.params.tilt_Fy / J!r}",
            f"resolved X = {pl.spec.center_X!r}",
            f"resolved Y = {pl.spec.center_Y!r}",
            f"resolved Px = {pl.spec.momentum_Px!r}",
            f"resolved period_T = {pl.period_T!r}",
        ]
        return cfg, samples, states, resolved
    params = LatticeParams2D(J, cfg["Fx_over_J"] * J, cfg["Fy_over_J"] * J)
    spec = GaussianSpec2D(cfg["X"], cfg["Y"], cfg["Px"], cfg["Py"], cfg["sigma"])
    samples, states = record_trajectory(spec, params, cfg.times(), keep_states=True)
    return cfg, samples, states, []


def _emit(cfg, out, times, samples, states, resolved):
    written = []
    kinds = cfg.outputs
    if "trajectory-csv" in kinds:
        p = out / "trajectory.csv"
        write_trajectory_csv(p, samples)
        written.append(p)
    two_d = cfg.mode in ("evolve2d", "lissajous")
    if two_d:
        x0, y0, nx, ny = union_window(*states)
        grids = [s.on_window(x0, y0, nx, ny).density() for s in states]
    else:
        lo = min(s.offset for s in states)
        hi = max(s.stop for s in states)
        grids = [s.on_window(lo, hi - lo).density()[:, None] for s in states]
        x0, nx = lo, hi - lo
    if "density-csv" in kinds:
        cols = [f"x={x}" for x in range(x0, x0 + nx)]
        rows = [g.sum(axis=1) for g in grids]
        if two_d:
            cols += [f"y={y}" for y in range(y0, y0 + ny)]
            rows = [np.concatenate([g.sum(axis=1), g.sum(axis=0)]) for g in grids]
        p = out / "density.csv"
        write_density_csv(p, times, cols, rows)
        written.append(p)
    if "density-frames" in kinds:
        fdir = out / "frames"
        fdir.mkdir(exist_ok=True)
        width = len(str(len(grids) - 1))
        for k, g in enumerate(grids):
            p = fdir / f"frame_{k:0{max(width, 4)}d}.pgm"
            write_pgm(p, g)
            written.append(p)
    p = out / "manifest.txt"
    p.write_text(format_config(cfg, comments=resolved), encoding="ascii", newline="\n")
    written.append(p)
    return written


def _run_single(cfg, out):
    if cfg.mode in ("breathing", "evolve1d"):
        times, samples, states = _run_1d(cfg)
        resolved = []
    else:
        cfg, samples, states, resolved = _run_2d(cfg)
        times = cfg.times()
    out.mkdir(parents=True, exist_ok=True)
    return _emit(cfg, out, times, samples, states, resolved)


# ---------------------------------------------------------------------------
# figure presets

FIG1_FORCES = (0.5, 0.2, 0.05)
FIG2_FORCES = (0.05, 0.1, 0.2)
FIG2_MOMENTA = (0.0, math.pi / 4, math.pi / 2)
FIG3_WIDTHS = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)
FIG4_WIDTHS = (1.0, 5.0)
FIG5_RATIOS = ((1, 2), (2, 3), (3, 4))
FIG5_PHASES = (0.0, math.pi / 4, math.pi / 2)


def _tag(v):
    return repr(float(v)).replace("-", "m")


def _sub(mode, outputs, **values):
    # normalized through the parser so defaults match a re-read manifest
    base = {"output_dir": "out", "outputs": outputs, "J": 1.0, "t_start": 0.0}
    base.update(values)
    return parse_config(format_config(ScenarioConfig(mode, base)))


def preset_runs(cfg):
    """Expand a figure-preset config into (subdirectory, ScenarioConfig) pairs."""
    name = cfg["preset"]
    forces = cfg.get("F_over_J_values")
    momenta = cfg.get("P_values")
    widths = cfg.get("sigma_values")
    phases = cfg.get("phi_values")
    samples = cfg.get("samples")
    runs = []
    if name == "fig1":
        outputs = cfg.get("outputs", ("trajectory-csv", "density-csv"))
        for F in forces or FIG1_FORCES:
            if F > 0:
                n = samples or 129
                runs.append((f"F_{_tag(F)}", _sub("breathing", outputs, F_over_J=F, x0=0,
                                                 t_end=2 * 2 * math.pi / F, samples=n)))
            else:
                runs.append(("F_0.0", _sub("breathing", outputs, F_over_J=0.0, x0=0, t_end=20.0,
                                           samples=samples or 101)))
        if not forces:
            runs.append(("F_0.0", _sub("breathing", outputs, F_over_J=0.0, x0=0, t_end=20.0,
                                       samples=samples or 101)))
    elif name == "fig2":
        outputs = cfg.get("outputs", ("trajectory-csv", "density-csv"))
        pairs = [(F, 0.0) for F in (forces or FIG2_FORCES)] + [(0.1, P) for P in (momenta or FIG2_MOMENTA)]
        seen = []
        for F, P in pairs:
            if (F, P) in seen:
                continue
            seen.append((F, P))
            if F <= 0:
                raise ConfigError("fig2 forces must be positive")
            runs.append((f"F_{_tag(F)}_P_{_tag(P)}", _sub("evolve1d", outputs, F_over_J=F, sigma=10.0, X=0.0, P=P,
                                                          t_end=2 * 2 * math.pi / F, samples=samples or 129)))
    elif name == "fig3":
        outputs = cfg.get("outputs", ("trajectory-csv", "density-csv"))
        F = (forces or (0.1,))[0]
        if F <= 0:
            raise ConfigError("fig3 force must be positive")
        for s in widths or FIG3_WIDTHS:
            runs.append((f"sigma_{_tag(s)}", _sub("evolve1d", outputs, F_over_J=F, sigma=s, X=0.0, P=0.0,
                                                  t_end=2 * 2 * math.pi / F, samples=samples or 129)))
    elif name == "fig4":
        outputs = cfg.get("outputs", ("trajectory-csv", "density-frames"))
        # P_x = pi/2 as in the figure, i.e. phase phi = -pi/2
        for s in widths or FIG4_WIDTHS:
            runs.append((f"sigma_{_tag(s)}", _sub("lissajous", outputs, p=1, q=1, phi=-math.pi / 2,
                                                  amp_A=25.0, amp_B=25.0, sigma=s, samples=samples or 64)))
    elif name == "fig5":
        outputs = cfg.get("outputs", ("trajectory-csv",))
        s = (widths or (5.0,))[0]
        for p, q in FIG5_RATIOS:
            for phi in phases or FIG5_PHASES:
                runs.append((f"ratio_{p}_{q}_phi_{_tag(phi)}",
                             _sub("lissajous", outputs, p=p, q=q, phi=phi, amp_A=25.0 * q / p, amp_B=25.0,
                                  sigma=s, samples=samples or 64)))
    return runs


def run_scenario(cfg, output_dir=None):
    """Execute ``cfg``; returns the list of files written.

    Raises WindowError (or OSError) on runtime failure. Nothing is written
    unless every sub-run validates first.
    """
    out = Path(output_dir if output_dir is not None else cfg.output_dir)
    cfg = replace(cfg, values={**cfg.values, "output_dir": str(out)})
    if cfg.mode != "figure-preset":
        return _run_single(cfg, out)
    runs = preset_runs(cfg)
    written = []
    for sub, sub_cfg in runs:
        sub_out = out / sub
        sub_cfg = replace(sub_cfg, values={**sub_cfg.values, "output_dir": str(sub_out)})
        written += _run_single(sub_cfg, sub_out)
    p = out / "manifest.txt"
    p.write_text(format_config(cfg, comments=[f"run {sub}" for sub, _ in runs]), encoding="ascii", newline="\n")
    written.append(p)
    return written
