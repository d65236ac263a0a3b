"""Sweep runner: one directory of artifacts per configured run.

Layout::

    <out>/<run-id>/profile.csv   t,theta,ds_exact,ds_fd,entropy
    <out>/<run-id>/report.json   fits, controls, config echo
    <out>/<run-id>/kernel.csv    optional, full kernel matrix

Report files contain nothing time- or host-dependent, so an identical
config reproduces them byte for byte. Wall time is returned on the
:class:`RunArtifact` only.
"""

from __future__ import annotations

import copy
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .controls import (
    Unfolding,
    bilaplacian_control,
    gue_eigenvalues,
    ks_distance_wigner,
    nn_spacings,
    rescale_eigenvalues,
)
from .divergence import write_matrix_csv
from .errors import InsufficientData
from .fits import fit_eigenvalue_growth, fit_entropy_exponent, fit_pcp
from .io import atomic_write_text
from .observables import TimeGrid, profile
from .operators import build_operator
from .pipeline import build_kernel
from .spectrum import symmetric_eigenvalues

log = logging.getLogger(__name__)

PLATEAU_BAND = (0.45, 0.55)


@dataclass
class RunArtifact:
    run_id: str
    directory: Path
    profile_csv: Optional[Path]
    report_json: Path
    kernel_csv: Optional[Path]
    ok: bool
    wall_time: float
    errors: list = field(default_factory=list)


def report_schema() -> dict:
    return json.loads(resources.files("primecoherence").joinpath("report.schema.json").read_text())


def _clean(value):
    """Make a value JSON-safe: numpy scalars to Python, non-finite floats to ``None``."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def plateau_span(t: np.ndarray, ds: np.ndarray, band=PLATEAU_BAND) -> dict:
    """Longest contiguous stretch of grid points with ``band[0] <= d_s <= band[1]``."""
    inside = (ds >= band[0]) & (ds <= band[1])
    best, start = None, None
    for i, flag in enumerate(np.append(inside, False)):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            if best is None or (i - 1 - start) > (best[1] - best[0]):
                best = (start, i - 1)
            start = None
    if best is None:
        return {"t_lo": None, "t_hi": None, "decades": 0.0}
    t_lo, t_hi = float(t[best[0]]), float(t[best[1]])
    return {"t_lo": t_lo, "t_hi": t_hi, "decades": math.log10(t_hi / t_lo)}


def _spacing_stats(levels, label: str, warnings: list) -> dict:
    out = {}
    for mode in Unfolding:
        try:
            sample = nn_spacings(levels, mode)
            ks = ks_distance_wigner(sample)
            out[mode.value] = {"ks_d": ks.d_statistic, "size": ks.sample_size,
                               "mean": float(np.mean(sample.spacings)), "spacings": sample.spacings}
        except InsufficientData as exc:
            warnings.append(f"{label} ({mode.value}): {exc}")
            out[mode.value] = None
    return out


def execute_run(run: dict, out_dir, emit_kernel: bool = False) -> RunArtifact:
    """Run the full pipeline for one merged, validated run mapping and write its artifacts."""
    start = time.perf_counter()
    run = copy.deepcopy(run)
    run_id = run["id"]
    directory = Path(out_dir) / run_id
    directory.mkdir(parents=True, exist_ok=True)
    model = run["model"]
    kind = model["kind"]
    n = run["n"]
    gamma = model.get("gamma", 1.0) if kind == "index-power" else None

    report = {
        "run_id": run_id,
        "status": "ok",
        "model": kind,
        "n": n,
        "delta0": run["delta0"],
        "normalization": run["normalization"],
        "order": run["order"],
        "seed": run["seed"],
        "alpha": None,
        "ds": None,
        "beta": None,
        "pcp": None,
        "windows": {"alpha": None, "beta": None},
        "diagnostics": {},
        "controls": {},
        "warnings": [],
        "errors": [],
        "provenance": {"software": {"name": "primecoherence", "version": __version__}, "config": run},
    }
    if gamma is not None:
        report["gamma"] = gamma
    warnings = report["warnings"]
    profile_path = kernel_path = None

    try:
        if kind == "bilaplacian":
            system = bilaplacian_control(n)
        else:
            kernel = build_kernel(kind, n, run["delta0"], gamma=gamma or 1.0,
                                  literal_diagonal=bool(model.get("literal_diagonal", False)), seed=run["seed"])
            if emit_kernel or run["emit_kernel"]:
                kernel_path = directory / "kernel.csv"
                write_matrix_csv(kernel_path, kernel.k)
            op = build_operator(kernel, run["normalization"], run["order"])
            op.provenance.update(n=n, normalization=run["normalization"], order=run["order"])
            system = symmetric_eigenvalues(op)
            if kind == "gue":
                report["diagnostics"]["gue_delta_bulk"] = kernel.provenance["delta_bulk"]
        eigs = system.eigenvalues
        report["diagnostics"].update(
            eigenvalue_min=float(eigs[0]), eigenvalue_max=float(eigs[-1]), trace=float(np.sum(eigs)))

        grid = TimeGrid(run["grid"]["t_min"], run["grid"]["t_max"], run["grid"]["count"])
        prof = profile(system, grid)
        profile_path = directory / "profile.csv"
        prof.write_csv(profile_path)
        peak_t, peak_ds = prof.peak()
        report["diagnostics"].update(peak_t=peak_t, peak_ds=peak_ds,
                                     ds_fd_max_discrepancy=float(np.max(np.abs(prof.ds - prof.ds_fd)[1:-1])))

        fits = run["fits"]
        if fits["alpha"]:
            try:
                fit = fit_eigenvalue_growth(system, tuple(fits["alpha_window"]) if fits["alpha_window"] else None)
                report["alpha"] = fit.alpha
                report["ds"] = fit.ds_from_alpha
                report["windows"]["alpha"] = list(fit.window)
                report["diagnostics"]["alpha_r2"] = fit.r_squared
            except InsufficientData as exc:
                warnings.append(f"alpha fit skipped: {exc}")
        if fits["beta"]:
            try:
                fit = fit_entropy_exponent(prof, tuple(fits["beta_window"]))
                report["beta"] = fit.beta
                report["windows"]["beta"] = list(fit.t_window)
                report["diagnostics"]["beta_r2"] = fit.r_squared
            except InsufficientData as exc:
                warnings.append(f"beta fit skipped: {exc}")
        if fits["pcp"]:
            try:
                fit = fit_pcp(prof)
                report["pcp"] = fit.as_dict()
                report["diagnostics"]["pcp_starts_tried"] = fit.starts_tried
            except InsufficientData as exc:
                warnings.append(f"pcp fit skipped: {exc}")

        controls = run["controls"]
        if controls["gue"]:
            draw = gue_eigenvalues(n, run["seed"])
            report["controls"]["gue"] = {"n": n, "seed": run["seed"], "delta_bulk": draw.delta_bulk,
                                         "spacings": _spacing_stats(draw.eigenvalues, "gue spacings", warnings)
                                         if n >= 50 else None}
        if controls["bilaplacian"]:
            control = profile(bilaplacian_control(n), grid)
            c_peak_t, c_peak_ds = control.peak()
            report["controls"]["bilaplacian"] = {"n": n, "peak_t": c_peak_t, "peak_ds": c_peak_ds,
                                                 "plateau": plateau_span(control.t, control.ds)}
        if controls["ks"]:
            factor = 2.0 * math.pi / math.log(n)
            report["controls"]["ks"] = {"rescale_factor": factor,
                                        "spacings": _spacing_stats(rescale_eigenvalues(system, n),
                                                                   "rescaled spacings", warnings)}
    except Exception as exc:  # noqa: BLE001 - a failing run is recorded, the sweep continues
        log.warning("run %s failed: %s", run_id, exc)
        report["status"] = "failed"
        report["errors"].append({"type": type(exc).__name__, "message": str(exc)})

    report_path = directory / "report.json"
    atomic_write_text(report_path, json.dumps(_clean(report), indent=2, allow_nan=False) + "\n")
    return RunArtifact(run_id, directory, profile_path, report_path, kernel_path,
                       report["status"] == "ok", time.perf_counter() - start, report["errors"])


def run(config, out_dir, jobs: int = 1, emit_kernel: bool = False, seed: Optional[int] = None) -> list[RunArtifact]:
    """Execute every run in ``config`` (a :class:`~primecoherence.config.Config`).

    ``seed`` overrides every run's seed. Results come back in config order
    whatever ``jobs`` is.
    """
    runs = [copy.deepcopy(r) for r in config.runs]
    if seed is not None:
        for r in runs:
            r["seed"] = int(seed)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if jobs <= 1 or len(runs) == 1:
        return [execute_run(r, out_dir, emit_kernel) for r in runs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(execute_run, r, out_dir, emit_kernel) for r in runs]
        return [f.result() for f in futures]
