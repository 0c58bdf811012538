"""Monte Carlo experiment harness.

Each experiment runs seeded trials of the pipeline: draw a structured random
signal, take its row transform, push it through the erasure channel, then
either record erasure statistics (the sweep modes) or run a recovery and
compare against ground truth. Summaries carry empirical frequencies with
Wilson intervals next to the matching closed forms, and trial records
serialize to CSV for external tooling. Identical configs produce
byte-identical artifacts; per-trial seeds derive from the base seed so any
single trial can be re-run in isolation.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from .channel import apply_erasure, erasure_stats, sample_erasure
from .probbounds import (
    binom_tail_upper,
    lemma_tail_bound,
    prob_mmax_below,
    prob_mmin_below,
)
from .recovery import RowStatus, recover_rows, recover_two_stage
from .signal import GridDims, Signal2D, column_support_max, support_profile
from .transforms import gabor_col, gabor_row

__all__ = [
    "ExperimentMode",
    "ProfileShape",
    "ExperimentConfig",
    "TrialRecord",
    "TRIAL_CSV_HEADER",
    "config_from_mapping",
    "generate_test_signal",
    "run_experiment",
    "run_sweep",
    "emit_results",
    "wilson_interval",
]

# a trial counts as exact when the relative l2 error against ground truth
# is below this; separate from the runtime feasibility tolerance
EXACT_REL_TOL = 1e-6

TRIAL_CSV_HEADER = "seed,m_max,m_min,rows_recovered,exact_recovery,residual"

WILSON_Z_95 = 1.959963984540054
WILSON_Z_99 = 2.5758293035489004


class ExperimentMode(Enum):
    MmaxSweep = "MmaxSweep"
    MminSweep = "MminSweep"
    RowRecovery = "RowRecovery"
    TwoStage = "TwoStage"
    TailBounds = "TailBounds"


class ProfileShape(Enum):
    UniformRows = "UniformRows"
    SkewedRows = "SkewedRows"


@dataclass(frozen=True)
class ExperimentConfig:
    dims: GridDims
    theta: float
    e_max_target: int
    trials: int
    base_seed: int
    mode: ExperimentMode
    profile_shape: ProfileShape = ProfileShape.UniformRows
    sweep: tuple = ()
    tol: float = 1e-9
    output_path: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.dims, GridDims):
            raise ValueError("dims must be a GridDims")
        if not (0.0 <= self.theta <= 1.0):
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not (1 <= self.e_max_target <= self.dims.n):
            raise ValueError(
                f"e_max_target must lie in [1, n={self.dims.n}], got {self.e_max_target}"
            )
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if not isinstance(self.mode, ExperimentMode):
            raise ValueError(f"mode must be an ExperimentMode, got {self.mode!r}")
        if not isinstance(self.profile_shape, ProfileShape):
            raise ValueError(f"profile_shape must be a ProfileShape, got {self.profile_shape!r}")
        sweep = tuple(int(v) for v in self.sweep)
        if any(b <= a for a, b in zip(sweep, sweep[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if any(v < 1 for v in sweep):
            raise ValueError("sweep values must be positive")
        object.__setattr__(self, "sweep", sweep)


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    m_max: int
    m_min: int
    rows_recovered: int
    exact_recovery: bool
    residual: float


def config_from_mapping(data: dict) -> ExperimentConfig:
    """Build a config from a plain mapping (the JSON config file format)."""
    try:
        dims = GridDims(n=int(data["n"]), t=int(data["t"]))
        return ExperimentConfig(
            dims=dims,
            theta=float(data["theta"]),
            e_max_target=int(data["e_max_target"]),
            trials=int(data["trials"]),
            base_seed=int(data["base_seed"]),
            mode=ExperimentMode(data["mode"]),
            profile_shape=ProfileShape(data.get("profile_shape", "UniformRows")),
            sweep=tuple(int(v) for v in data.get("sweep", ())),
            tol=float(data.get("tol", 1e-9)),
            output_path=data.get("output_path"),
        )
    except KeyError as exc:
        raise ValueError(f"config is missing required field {exc.args[0]!r}") from exc


# ----------------------------------------------------------------------------
# signal generation
# ----------------------------------------------------------------------------

def generate_test_signal(dims: GridDims, e_max_target: int, seed: int,
                         profile_shape: ProfileShape = ProfileShape.UniformRows) -> Signal2D:
    """Draw a structured random signal with a prescribed max row support.

    ``UniformRows``: every row gets exactly ``e_max_target`` distinct uniform
    positions holding unit-modulus random-phase values.

    ``SkewedRows``: a mixed-support signal whose column transforms are all
    exactly 2-sparse. It lives on ``e_max_target`` random columns; each
    column is a sum of two complex exponentials down the time axis, phased to
    vanish on one dyadic coset of row indices. The cosets tile everything
    except one shared row, so that row sees every column (support
    ``e_max_target``) while each remaining row loses at least one column
    (support strictly smaller). Requires the number of rows to be a power of
    two, at least 4, with ``log2(t) <= e_max_target <= n``.
    """
    n, t = dims.n, dims.t
    if not (1 <= e_max_target <= n):
        raise ValueError(f"e_max_target must lie in [1, n={n}], got {e_max_target}")
    rng = np.random.Generator(np.random.PCG64(seed))
    if profile_shape is ProfileShape.UniformRows:
        order = np.argsort(rng.random((t, n)), axis=1)[:, :e_max_target]
        phases = np.exp(2j * np.pi * rng.random((t, e_max_target)))
        vals = np.zeros((t, n), dtype=np.complex128)
        np.put_along_axis(vals, order, phases, axis=1)
        return Signal2D(dims=dims, values=vals)
    if profile_shape is not ProfileShape.SkewedRows:
        raise ValueError(f"unknown profile shape {profile_shape!r}")

    levels = t.bit_length() - 1
    if t < 4 or (1 << levels) != t:
        raise ValueError(f"SkewedRows needs t to be a power of two >= 4, got t={t}")
    if e_max_target < levels:
        raise ValueError(
            f"SkewedRows needs e_max_target >= log2(t)={levels}, got {e_max_target}"
        )
    cols = rng.choice(n, size=e_max_target, replace=False)
    dense_row = int(rng.integers(t))
    # one column per dyadic level first, extras rotate from the largest coset down
    mult = [1] * levels
    for i in range(e_max_target - levels):
        mult[i % levels] += 1
    vals = np.zeros((t, n), dtype=np.complex128)
    y = np.arange(t)
    col_pos = 0
    for level, count in enumerate(mult, start=1):
        step = t >> level                       # frequency offset for this level
        for _ in range(count):
            freq = int(rng.integers(t))
            amp = np.exp(2j * np.pi * rng.random())
            pair = amp * np.exp(-2j * np.pi * dense_row / (1 << level))
            wave = (amp * np.exp(2j * np.pi * freq * y / t)
                    + pair * np.exp(2j * np.pi * ((freq + step) % t) * y / t))
            vals[:, cols[col_pos]] = wave
            col_pos += 1
    return Signal2D(dims=dims, values=vals)


# ----------------------------------------------------------------------------
# trials
# ----------------------------------------------------------------------------

def _run_trial(config: ExperimentConfig, index: int) -> TrialRecord:
    trial_seed = config.base_seed + index
    signal = generate_test_signal(config.dims, config.e_max_target,
                                  2 * trial_seed, config.profile_shape)
    pattern = sample_erasure(config.dims, config.theta, 2 * trial_seed + 1)
    stats = erasure_stats(pattern)

    if config.mode in (ExperimentMode.MmaxSweep, ExperimentMode.MminSweep):
        return TrialRecord(seed=trial_seed, m_max=stats.m_max, m_min=stats.m_min,
                           rows_recovered=0, exact_recovery=False, residual=0.0)

    problem = apply_erasure(gabor_row(signal), pattern)
    if config.mode is ExperimentMode.RowRecovery:
        report = recover_rows(problem, profile=support_profile(signal), tol=config.tol)
    elif config.mode is ExperimentMode.TwoStage:
        report = recover_two_stage(
            problem, col_transform_support_max=column_support_max(gabor_col(signal)),
            tol=config.tol,
        )
    else:
        raise ValueError(f"mode {config.mode.value} does not run per-trial recovery")

    rows_recovered = sum(1 for s in report.row_status if s is RowStatus.Recovered)
    exact = False
    if rows_recovered == config.dims.t and report.recovered is not None:
        diff = report.recovered.values - signal.values
        denom = float(np.linalg.norm(signal.values))
        exact = bool(np.linalg.norm(diff) < EXACT_REL_TOL * denom) if denom > 0 else True
    return TrialRecord(seed=trial_seed, m_max=stats.m_max, m_min=stats.m_min,
                       rows_recovered=rows_recovered, exact_recovery=exact,
                       residual=float(report.residual))


def _worker_count(trials: int) -> int:
    cap = os.environ.get("GABOR_RECOVER_THREADS")
    if cap is not None:
        limit = int(cap)
        if limit < 1:
            raise ValueError("GABOR_RECOVER_THREADS must be a positive integer")
    else:
        limit = os.cpu_count() or 1
    return max(1, min(limit, trials))


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z_95):
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not (0 <= successes <= trials):
        raise ValueError("successes must lie in [0, trials]")
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials))
    return (max(0.0, center - half), min(1.0, center + half))


def _tail_table_row(config: ExperimentConfig) -> dict:
    n, t = config.dims.n, config.dims.t
    theta, e_max = config.theta, config.e_max_target
    c = n / (2 * e_max)
    k = 1.0 / (2 * e_max)
    row = {
        "n": n,
        "t": t,
        "theta": theta,
        "e_max": e_max,
        "c": c,
        "p_mmax_below": prob_mmax_below(n, t, theta, c),
        "p_mmin_below": prob_mmin_below(n, t, theta, c),
        "exact_tail": binom_tail_upper(n, theta, c),
        "lemma_bound": None,
        "valid": False,
    }
    if 0.0 < theta < k < 1.0:
        bound = lemma_tail_bound(n, theta, k)
        row["lemma_bound"] = bound.lemma_bound if bound.valid else None
        row["valid"] = bound.valid
    return row


def run_experiment(config: ExperimentConfig):
    """Run one experiment point; returns ``(summary, records)``.

    The summary is a plain dict: the config echo, empirical frequencies with
    Wilson 95% intervals, the matching closed forms, and wall-clock stats
    (the one field :func:`emit_results` strips so artifacts stay
    reproducible). Records are per-trial, ordered by seed.
    """
    start = time.perf_counter()
    n, t = config.dims.n, config.dims.t
    summary = {
        "mode": config.mode.value,
        "n": n,
        "t": t,
        "theta": config.theta,
        "e_max_target": config.e_max_target,
        "trials": config.trials,
        "base_seed": config.base_seed,
        "profile_shape": config.profile_shape.value,
        "tol": config.tol,
    }

    if config.mode is ExperimentMode.TailBounds:
        summary["tail_table"] = [_tail_table_row(config)]
        summary["wall_clock"] = {"elapsed_s": time.perf_counter() - start}
        return summary, []

    workers = _worker_count(config.trials)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_trial, [config] * config.trials,
                                    range(config.trials), chunksize=64))
    else:
        records = [_run_trial(config, i) for i in range(config.trials)]

    c = n / (2 * config.e_max_target)
    mmax_below = sum(1 for r in records if r.m_max < c)
    mmin_below = sum(1 for r in records if r.m_min < c)
    summary["threshold_c"] = c
    summary["mmax_below_count"] = mmax_below
    summary["mmin_below_count"] = mmin_below

    if config.mode is ExperimentMode.MmaxSweep:
        frac = mmax_below / config.trials
        summary["fraction_below"] = frac
        summary["wilson_95"] = wilson_interval(mmax_below, config.trials)
        summary["closed_form"] = prob_mmax_below(n, t, config.theta, c)
    elif config.mode is ExperimentMode.MminSweep:
        frac = mmin_below / config.trials
        summary["fraction_below"] = frac
        summary["wilson_95"] = wilson_interval(mmin_below, config.trials)
        summary["closed_form"] = prob_mmin_below(n, t, config.theta, c)
    else:
        exact = sum(1 for r in records if r.exact_recovery)
        guarded = [r for r in records if r.m_max < c]
        guarded_exact = sum(1 for r in guarded if r.exact_recovery)
        summary["exact_count"] = exact
        summary["exact_rate"] = exact / config.trials
        summary["wilson_95"] = wilson_interval(exact, config.trials)
        summary["guarded_trials"] = len(guarded)
        summary["guarded_exact"] = guarded_exact
        summary["closed_form"] = prob_mmax_below(n, t, config.theta, c)

    summary["wall_clock"] = {"elapsed_s": time.perf_counter() - start}
    return summary, records


def run_sweep(config: ExperimentConfig):
    """Run the config at every swept grid width; returns a list of points."""
    widths = config.sweep if config.sweep else (config.dims.n,)
    out = []
    for width in widths:
        point = dataclasses.replace(config, dims=GridDims(n=int(width), t=config.dims.t),
                                    sweep=())
        out.append(run_experiment(point))
    return out


# ----------------------------------------------------------------------------
# artifacts
# ----------------------------------------------------------------------------

def _mode_token(mode_value: str) -> str:
    out = []
    for i, ch in enumerate(mode_value):
        if ch.isupper() and i > 0:
            out.append("_")
        out.append(ch.lower())
    return "".join(out)


def _fmt_float(v: float) -> str:
    return format(float(v), ".17g")


TAIL_CSV_HEADER = "n,t,theta,e_max,c,p_mmax_below,p_mmin_below,exact_tail,lemma_bound,valid"


def emit_results(summary: dict, records, out_dir) -> list:
    """Write the summary JSON and per-trial CSV; returns the written paths.

    Artifacts are deterministic: records are ordered by seed, floats use a
    fixed 17-significant-digit format, and wall-clock stats are dropped from
    the persisted summary.
    """
    out = Path(out_dir)
    token = _mode_token(summary["mode"])
    base = f"{token}_n{summary['n']}"
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)

        csv_path = out / f"{base}_trials.csv"
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(TRIAL_CSV_HEADER.split(","))
            for rec in sorted(records, key=lambda r: r.seed):
                writer.writerow([
                    rec.seed, rec.m_max, rec.m_min, rec.rows_recovered,
                    "true" if rec.exact_recovery else "false",
                    _fmt_float(rec.residual),
                ])
        written.append(csv_path)

        persisted = {k: v for k, v in summary.items() if k != "wall_clock"}
        json_path = out / f"{base}_summary.json"
        with open(json_path, "w") as fh:
            json.dump(persisted, fh, sort_keys=True, indent=2)
            fh.write("\n")
        written.append(json_path)

        if "tail_table" in summary:
            table_path = out / f"{base}_table.csv"
            with open(table_path, "w", newline="") as fh:
                fh.write(TAIL_CSV_HEADER + "\n")
                for row in summary["tail_table"]:
                    fields = [
                        str(row["n"]), str(row["t"]), _fmt_float(row["theta"]),
                        str(row["e_max"]), _fmt_float(row["c"]),
                        _fmt_float(row["p_mmax_below"]), _fmt_float(row["p_mmin_below"]),
                        _fmt_float(row["exact_tail"]),
                        "" if row["lemma_bound"] is None else _fmt_float(row["lemma_bound"]),
                        "true" if row["valid"] else "false",
                    ]
                    fh.write(",".join(fields) + "\n")
            written.append(table_path)
    except OSError as exc:
        raise OSError(f"failed writing experiment artifacts under {out}: {exc}") from exc
    return written
