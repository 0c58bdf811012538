"""Dense 2D signals on Z_n x Z_t and their support queries.

A signal assigns a complex value to each grid position ``(x, y)`` with
``x`` in ``{0..n-1}`` (position inside a row) and ``y`` in ``{0..t-1}``
(row index). Storage is row-major by row index: ``values[y, x]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GridDims",
    "Signal2D",
    "SupportProfile",
    "support",
    "support_profile",
    "column_support_max",
    "signal_to_json",
    "signal_from_json",
]

# Relative factor applied to the max modulus when no explicit tolerance is given.
DEFAULT_REL_TOL = 1e-9


@dataclass(frozen=True)
class GridDims:
    """Grid shape: rows of length ``n``, ``t`` rows."""

    n: int
    t: int

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and isinstance(self.t, (int, np.integer))):
            raise ValueError("grid dimensions must be integers")
        if self.n < 1 or self.t < 1:
            raise ValueError(f"grid dimensions must be positive, got n={self.n}, t={self.t}")
        # normalize numpy ints so serialization stays plain
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "t", int(self.t))

    @property
    def size(self) -> int:
        return self.n * self.t


@dataclass
class Signal2D:
    """A dense complex signal on the grid.

    ``values`` has shape ``(t, n)``: ``values[y, x]`` is the entry at row
    ``y``, position ``x``. The array is copied, cast to complex128 and
    locked against writes. All entries must be finite.
    """

    dims: GridDims
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.dims.t, self.dims.n):
            raise ValueError(
                f"values shape {vals.shape} does not match dims "
                f"(t={self.dims.t}, n={self.dims.n})"
            )
        if not np.all(np.isfinite(vals.real)) or not np.all(np.isfinite(vals.imag)):
            raise ValueError("signal entries must be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        self.values = vals

    def max_modulus(self) -> float:
        if self.values.size == 0:
            return 0.0
        return float(np.abs(self.values).max())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Signal2D):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.values, other.values)


@dataclass(frozen=True)
class SupportProfile:
    """Per-row support sizes plus their max and total."""

    row_supports: tuple
    e_max: int
    total_support: int

    def __post_init__(self):
        object.__setattr__(self, "row_supports", tuple(int(s) for s in self.row_supports))
        if any(s < 0 for s in self.row_supports):
            raise ValueError("row supports must be non-negative")
        if self.e_max != (max(self.row_supports) if self.row_supports else 0):
            raise ValueError("e_max must equal the max row support")
        if self.total_support != sum(self.row_supports):
            raise ValueError("total_support must equal the sum of row supports")


def _threshold(signal: Signal2D, tol) -> float:
    """Resolve the support threshold: explicit, or relative to max modulus."""
    if tol is None:
        return DEFAULT_REL_TOL * signal.max_modulus()
    tol = float(tol)
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    return tol


def support(signal: Signal2D, tol=None) -> set:
    """Positions ``(x, y)`` whose modulus exceeds the threshold.

    ``tol`` is an absolute modulus threshold; when omitted it defaults to
    1e-9 relative to the signal's max modulus.
    """
    thr = _threshold(signal, tol)
    ys, xs = np.nonzero(np.abs(signal.values) > thr)
    return {(int(x), int(y)) for x, y in zip(xs, ys)}


def support_profile(signal: Signal2D, tol=None) -> SupportProfile:
    """Per-row support counts of the signal."""
    thr = _threshold(signal, tol)
    counts = (np.abs(signal.values) > thr).sum(axis=1)
    row_supports = tuple(int(c) for c in counts)
    return SupportProfile(
        row_supports=row_supports,
        e_max=max(row_supports) if row_supports else 0,
        total_support=sum(row_supports),
    )


def column_support_max(signal: Signal2D, tol=None) -> int:
    """Max over columns ``x`` of the number of rows where ``(x, y)`` is active.

    Typically applied to a column-wise transform to measure its largest
    per-column spectral support.
    """
    thr = _threshold(signal, tol)
    counts = (np.abs(signal.values) > thr).sum(axis=0)
    return int(counts.max()) if counts.size else 0


def signal_to_json(signal: Signal2D) -> str:
    """Serialize to the canonical JSON form.

    Schema: ``{"n", "t", "re": [...], "im": [...]}`` with both coefficient
    lists flattened row-major by row index (entry index ``y*n + x``).
    """
    flat = signal.values.reshape(-1)
    payload = {
        "n": signal.dims.n,
        "t": signal.dims.t,
        "re": [float(v) for v in flat.real],
        "im": [float(v) for v in flat.imag],
    }
    return json.dumps(payload, sort_keys=True)


def signal_from_json(text: str) -> Signal2D:
    """Inverse of :func:`signal_to_json`, validating shape and finiteness."""
    payload = json.loads(text)
    try:
        dims = GridDims(int(payload["n"]), int(payload["t"]))
        re = np.asarray(payload["re"], dtype=np.float64)
        im = np.asarray(payload["im"], dtype=np.float64)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed signal JSON: {exc}") from exc
    if re.shape != (dims.size,) or im.shape != (dims.size,):
        raise ValueError(
            f"coefficient lists must have length n*t={dims.size}, "
            f"got re={re.shape}, im={im.shape}"
        )
    values = (re + 1j * im).reshape(dims.t, dims.n)
    return Signal2D(dims=dims, values=values)
