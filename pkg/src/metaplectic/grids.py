"""Centered sampling grids and square-integrable sampled functions.

Axis convention: x_j = (j - N/2) dx with dx = 2X/N, j = 0..N-1, so the
center sample x_{N/2} is exactly 0 and the grid covers [-X, X).  N must be
a power of two, at least 8.  The hbar-dual axis has spacing pi hbar / X.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.ndimage import map_coordinates
from scipy.special import eval_hermite

from . import config
from .errors import GridMismatchError, OutOfDomainError

__all__ = [
    "Grid",
    "SampledFunction",
    "sample",
    "gaussian",
    "hermite_function",
    "interpolate_values",
]


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


class Grid:
    """Uniform centered grid on [-X, X)^n."""

    __slots__ = ("n", "N", "X")

    def __init__(self, n: int, N: int, X: float):
        if n not in (1, 2):
            raise GridMismatchError(f"spatial dimension must be 1 or 2, got {n}")
        if not _is_pow2(N) or N < 8:
            raise GridMismatchError(f"N must be a power of two >= 8, got {N}")
        if not X > 0:
            raise GridMismatchError(f"half-width must be positive, got {X}")
        self.n = int(n)
        self.N = int(N)
        self.X = float(X)

    @property
    def dx(self) -> float:
        return 2.0 * self.X / self.N

    def axis(self) -> np.ndarray:
        """Sample points along one axis; axis()[N/2] == 0 exactly."""
        return (np.arange(self.N) - self.N // 2) * self.dx

    def meshgrid(self) -> list[np.ndarray]:
        return list(np.meshgrid(*([self.axis()] * self.n), indexing="ij"))

    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    def cell_volume(self) -> float:
        return self.dx ** self.n

    def dual(self, hbar: float) -> "Grid":
        """hbar-Fourier dual grid: spacing pi hbar / X, same point count."""
        return Grid(self.n, self.N, math.pi * hbar * self.N / (2.0 * self.X))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Grid)
            and self.n == other.n
            and self.N == other.N
            and math.isclose(self.X, other.X, rel_tol=1e-12, abs_tol=0.0)
        )

    def __hash__(self):
        return hash((self.n, self.N, round(self.X, 12)))

    def __repr__(self) -> str:
        return f"Grid(n={self.n}, N={self.N}, X={self.X:g})"


class SampledFunction:
    """Complex samples of an L^2 function on a Grid, tagged with hbar.

    Mixing different hbar values in one expression is an error; hbar is a
    physical constant of the whole computation, not a per-axis scale.
    """

    __slots__ = ("grid", "hbar", "values")

    def __init__(self, grid: Grid, hbar: float, values: np.ndarray,
                 tail_tol: float = config.TAIL_TOL, check_tails: bool = True):
        if not hbar > 0:
            raise GridMismatchError(f"hbar must be positive, got {hbar}")
        values = np.asarray(values, dtype=complex)
        if values.shape != grid.shape():
            raise GridMismatchError(
                f"values shape {values.shape} does not match grid shape {grid.shape()}"
            )
        self.grid = grid
        self.hbar = float(hbar)
        self.values = values
        if check_tails:
            peak = float(np.max(np.abs(values)))
            if peak > 0.0:
                edge = self._edge_max() / peak
                if edge > tail_tol:
                    warnings.warn(
                        f"function reaches the grid edge: relative tail {edge:.2e} "
                        f"> {tail_tol:g}; results may lose accuracy",
                        stacklevel=2,
                    )

    def _edge_max(self) -> float:
        a = np.abs(self.values)
        worst = 0.0
        for ax in range(self.grid.n):
            sl_lo = [slice(None)] * self.grid.n
            sl_hi = [slice(None)] * self.grid.n
            sl_lo[ax] = slice(0, 2)
            sl_hi[ax] = slice(-2, None)
            worst = max(worst, float(np.max(a[tuple(sl_lo)])), float(np.max(a[tuple(sl_hi)])))
        return worst

    def with_values(self, values: np.ndarray, check_tails: bool = False) -> "SampledFunction":
        return SampledFunction(self.grid, self.hbar, values, check_tails=check_tails)

    def norm(self) -> float:
        """L^2 norm: sqrt(dx^n sum |f_j|^2)."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.cell_volume()))

    def inner(self, other: "SampledFunction") -> complex:
        """(f | g) = dx^n sum f_j conj(g_j), linear in the first slot."""
        require_same_frame(self, other)
        return complex(np.sum(self.values * np.conj(other.values)) * self.grid.cell_volume())

    def __repr__(self) -> str:
        return f"SampledFunction({self.grid!r}, hbar={self.hbar:g})"


def require_same_frame(f: SampledFunction, g: SampledFunction) -> None:
    if f.grid != g.grid:
        raise GridMismatchError(f"grids differ: {f.grid!r} vs {g.grid!r}")
    if not math.isclose(f.hbar, g.hbar, rel_tol=1e-12, abs_tol=0.0):
        raise GridMismatchError(f"hbar differs: {f.hbar} vs {g.hbar}")


def sample(fn, grid: Grid, hbar: float, check_tails: bool = True) -> SampledFunction:
    """Sample a callable of n coordinate arrays onto a grid."""
    vals = fn(*grid.meshgrid())
    return SampledFunction(grid, hbar, np.asarray(vals, dtype=complex),
                           check_tails=check_tails)


def gaussian(grid: Grid, hbar: float) -> SampledFunction:
    """Standard normalized Gaussian (pi hbar)^(-n/4) exp(-|x|^2 / 2 hbar)."""
    mesh = grid.meshgrid()
    r2 = sum(x * x for x in mesh)
    vals = (math.pi * hbar) ** (-grid.n / 4.0) * np.exp(-r2 / (2.0 * hbar))
    return SampledFunction(grid, hbar, vals.astype(complex))


def hermite_function(k: int, grid: Grid, hbar: float) -> SampledFunction:
    """k-th normalized Hermite function on a one-dimensional grid.

    h_k(x) = (pi hbar)^(-1/4) (2^k k!)^(-1/2) H_k(x / sqrt(hbar))
             exp(-x^2 / 2 hbar),

    an orthonormal family; the hbar Fourier transform maps h_k to
    (-i)^k h_k.
    """
    if grid.n != 1:
        raise GridMismatchError("hermite_function is one-dimensional; take products for n=2")
    if k < 0:
        raise ValueError("order must be nonnegative")
    x = grid.axis()
    t = x / math.sqrt(hbar)
    norm = (math.pi * hbar) ** (-0.25) / math.sqrt(2.0 ** k * math.factorial(k))
    vals = norm * eval_hermite(k, t) * np.exp(-t * t / 2.0)
    return SampledFunction(grid, hbar, vals.astype(complex))


def interpolate_values(values: np.ndarray, grid: Grid, points: list[np.ndarray],
                       require_inside: bool = False) -> np.ndarray:
    """Cubic-spline interpolation of sampled values at arbitrary points.

    ``points`` is a list of n coordinate arrays (broadcast to a common
    shape).  Points outside the grid evaluate to 0 (the tails), unless
    ``require_inside`` asks for a hard error.
    """
    shape = np.broadcast(*points).shape if len(points) > 1 else np.asarray(points[0]).shape
    coords = []
    for ax_pts in points:
        idx = np.broadcast_to(np.asarray(ax_pts, dtype=float), shape) / grid.dx + grid.N // 2
        coords.append(idx)
    if require_inside:
        for idx in coords:
            if np.any(idx < 0.0) or np.any(idx > grid.N - 1):
                raise OutOfDomainError("interpolation points leave the sampled domain")
    coords = np.stack(coords)
    re = map_coordinates(values.real, coords, order=3, mode="constant", cval=0.0)
    im = map_coordinates(values.imag, coords, order=3, mode="constant", cval=0.0)
    return re + 1j * im
