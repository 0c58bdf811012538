"""Random erasure of transform values, one independent coin per grid position.

Every position ``(x, y)`` is lost with probability ``theta``, independently of
all others, driven by numpy's PCG64 generator so identical ``(dims, theta,
seed)`` triples give identical patterns on every platform.
"""

from __future__ import annotations

import json

from dataclasses import dataclass

import numpy as np

from .signal import GridDims, Signal2D
from .transforms import TransformKind

__all__ = [
    "ErasurePattern",
    "ErasureStats",
    "sample_erasure",
    "erasure_stats",
    "apply_erasure",
    "pattern_to_json",
    "pattern_from_json",
]


@dataclass
class ErasurePattern:
    """Which grid positions were lost.

    ``mask`` has shape ``(t, n)`` with True marking a missing position.
    Count vectors and the position set are derived views of the mask.
    """

    dims: GridDims
    mask: np.ndarray

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=bool)
        if mask.shape != (self.dims.t, self.dims.n):
            raise ValueError(
                f"mask shape {mask.shape} does not match dims "
                f"(t={self.dims.t}, n={self.dims.n})"
            )
        mask = mask.copy()
        mask.flags.writeable = False
        self.mask = mask

    @property
    def missing(self) -> frozenset:
        ys, xs = np.nonzero(self.mask)
        return frozenset((int(x), int(y)) for x, y in zip(xs, ys))

    @property
    def per_row_counts(self) -> np.ndarray:
        return self.mask.sum(axis=1)

    @property
    def per_col_counts(self) -> np.ndarray:
        return self.mask.sum(axis=0)

    def missing_count(self) -> int:
        return int(self.mask.sum())

    @classmethod
    def from_missing(cls, dims: GridDims, positions) -> "ErasurePattern":
        mask = np.zeros((dims.t, dims.n), dtype=bool)
        for x, y in positions:
            if not (0 <= x < dims.n and 0 <= y < dims.t):
                raise ValueError(f"position ({x}, {y}) outside grid {dims.n}x{dims.t}")
            mask[y, x] = True
        return cls(dims=dims, mask=mask)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ErasurePattern):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.mask, other.mask)


@dataclass(frozen=True)
class ErasureStats:
    """Extremes of the per-row missing counts."""

    m_max: int
    m_min: int


def sample_erasure(dims: GridDims, theta: float, seed: int) -> ErasurePattern:
    """Draw one erasure pattern; each position lost independently w.p. theta."""
    if not (0.0 <= theta <= 1.0):
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    rng = np.random.Generator(np.random.PCG64(seed))
    mask = rng.random((dims.t, dims.n)) < theta
    return ErasurePattern(dims=dims, mask=mask)


def erasure_stats(pattern: ErasurePattern) -> ErasureStats:
    counts = pattern.per_row_counts
    return ErasureStats(m_max=int(counts.max()), m_min=int(counts.min()))


def apply_erasure(transform: Signal2D, pattern: ErasurePattern,
                  kind: TransformKind = TransformKind.GaborRow):
    """Erase the pattern's positions from a transform, yielding a recovery problem.

    The surviving values are kept dense with NaN poison at missing positions;
    consumers must gate reads on the pattern's mask.
    """
    from .recovery import RecoveryProblem

    if transform.dims != pattern.dims:
        raise ValueError(
            f"transform dims {transform.dims} do not match pattern dims {pattern.dims}"
        )
    observed = transform.values.copy()
    observed[pattern.mask] = complex(np.nan, np.nan)
    return RecoveryProblem(
        dims=transform.dims,
        kind=kind,
        observed_values=observed,
        pattern=pattern,
    )


def pattern_to_json(pattern: ErasurePattern) -> str:
    """Canonical JSON: ``{"n", "t", "missing": [[x, y], ...]}`` sorted lexicographically."""
    positions = sorted(pattern.missing)
    payload = {
        "n": pattern.dims.n,
        "t": pattern.dims.t,
        "missing": [[x, y] for x, y in positions],
    }
    return json.dumps(payload, sort_keys=True)


def pattern_from_json(text: str) -> ErasurePattern:
    payload = json.loads(text)
    try:
        dims = GridDims(int(payload["n"]), int(payload["t"]))
        positions = [(int(x), int(y)) for x, y in payload["missing"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed pattern JSON: {exc}") from exc
    return ErasurePattern.from_missing(dims, positions)
