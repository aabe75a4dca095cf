"""Phase-space side of the metaplectic calculus.

Cross-Wigner transforms, phase-space translations, Bopp operators, and the
extended metaplectic operators acting on functions of z = (x, p).  The
extended operator attached to (S, nu) is realized by honest quadrature of
its phase-space integral, in any of three algebraically equivalent forms:

    s1:    (2 pi hbar)^{-n} i^nu / sqrt|det(S-I)|
           Integral exp(i M_S z0.z0 / 2 hbar) Ttilde(z0) F dz0
    alfa2: (2 pi hbar)^{-n} i^nu sqrt|det(S-I)|
           Integral exp(-i sigma(S z, z) / 2 hbar) Ttilde((S-I) z) F dz
    alfa1: the same integral with the integrand assembled as the literal
           composition Ttilde(S z) Ttilde(-z).

All forms are reduced, by the substitution v = z - A z0 that places the
integration variable on the sample lattice of F, to a quadratic chirp
times a sheared-lattice Fourier sum, which is evaluated by a type-2
nonuniform FFT.  One degree of freedom (two-dimensional phase space).
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.ndimage import map_coordinates

from . import config
from .errors import (
    BandwidthExceededWarning,
    GridMismatchError,
    OutOfDomainError,
    SingularSMinusIError,
    TruncationError,
)
from .grids import Grid, SampledFunction, hermite_function, require_same_frame
from .nufft import nufft2d2
from .operators import _integer_shift
from .symplectic import SymplecticMatrix, cayley, standard_j

__all__ = [
    "PhaseGrid",
    "PhaseFunction",
    "cross_wigner",
    "phase_shift",
    "compose_linear",
    "moyal_inner",
    "wigner_basis",
    "metaplectic_phase_apply",
    "bopp_apply",
]


class PhaseGrid:
    """Uniform centered lattice on two-dimensional phase space.

    x-axis: N points, spacing 2X/N; p-axis: N_p points, spacing 2P_max/N_p.
    The grid compatible with a configuration Grid (the one produced by
    cross_wigner) has N_p = N and P_max = pi hbar N / (4X): the p-lattice
    sits at half the dual-grid spacing, which is exactly the resolution at
    which the x +- y/2 diagonal sampling of the Wigner integral becomes
    integer index arithmetic.
    """

    __slots__ = ("n", "N", "X", "N_p", "P_max")

    def __init__(self, n: int, N: int, X: float, N_p: int, P_max: float):
        if n != 1:
            raise GridMismatchError("phase-space grids support n = 1 only")
        if N < 8 or N_p < 8:
            raise GridMismatchError("phase-space grid needs at least 8 points per axis")
        if X <= 0 or P_max <= 0:
            raise GridMismatchError("X and P_max must be positive")
        self.n = n
        self.N = int(N)
        self.X = float(X)
        self.N_p = int(N_p)
        self.P_max = float(P_max)

    @classmethod
    def compatible(cls, grid: Grid, hbar: float) -> "PhaseGrid":
        if grid.n != 1:
            raise GridMismatchError("phase-space grids support n = 1 only")
        return cls(1, grid.N, grid.X, grid.N, math.pi * hbar * grid.N / (4.0 * grid.X))

    @property
    def dx(self) -> float:
        return 2.0 * self.X / self.N

    @property
    def dp(self) -> float:
        return 2.0 * self.P_max / self.N_p

    def x_axis(self) -> np.ndarray:
        return (np.arange(self.N) - self.N // 2) * self.dx

    def p_axis(self) -> np.ndarray:
        return (np.arange(self.N_p) - self.N_p // 2) * self.dp

    def meshgrid(self):
        return np.meshgrid(self.x_axis(), self.p_axis(), indexing="ij")

    def shape(self) -> tuple:
        return (self.N, self.N_p)

    def cell_volume(self) -> float:
        return self.dx * self.dp

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhaseGrid):
            return NotImplemented
        return (self.N == other.N and self.N_p == other.N_p
                and abs(self.X - other.X) < 1e-12 * max(1.0, self.X)
                and abs(self.P_max - other.P_max) < 1e-12 * max(1.0, self.P_max))

    def __repr__(self) -> str:
        return (f"PhaseGrid(n=1, N={self.N}, X={self.X}, "
                f"N_p={self.N_p}, P_max={self.P_max})")


def _trapezoid_2d(grid: PhaseGrid) -> np.ndarray:
    wx = np.full(grid.N, grid.dx)
    wx[0] *= 0.5
    wx[-1] *= 0.5
    wp = np.full(grid.N_p, grid.dp)
    wp[0] *= 0.5
    wp[-1] *= 0.5
    return np.multiply.outer(wx, wp)


class PhaseFunction:
    """Complex samples of F: phase space -> C, with hbar attached.

    L2 quantities use the product trapezoid weight (boundary samples
    half-weighted)."""

    __slots__ = ("grid", "hbar", "values")

    def __init__(self, grid: PhaseGrid, hbar: float, values: np.ndarray):
        if hbar <= 0:
            raise GridMismatchError("hbar must be positive")
        values = np.asarray(values, dtype=complex)
        if values.shape != grid.shape():
            raise GridMismatchError(
                f"values shape {values.shape} does not match grid {grid.shape()}"
            )
        if not np.all(np.isfinite(values.view(float))):
            raise GridMismatchError("values must be finite")
        self.grid = grid
        self.hbar = float(hbar)
        self.values = values
        self.values.flags.writeable = False

    def with_values(self, values: np.ndarray) -> "PhaseFunction":
        return PhaseFunction(self.grid, self.hbar, values)

    def norm(self) -> float:
        return math.sqrt(abs(self.inner(self)))

    def inner(self, other: "PhaseFunction") -> complex:
        if self.grid != other.grid or abs(self.hbar - other.hbar) > 1e-15:
            raise GridMismatchError("phase functions live on different frames")
        w = _trapezoid_2d(self.grid)
        return complex(np.sum(self.values * np.conj(other.values) * w))

    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.values) * _trapezoid_2d(self.grid)))


def _centered_fft_axis(values: np.ndarray, axis: int) -> np.ndarray:
    """out_k = sum_m values_m exp(-2 pi i (k - N/2)(m - N/2) / N) along axis."""
    return np.fft.fftshift(
        np.fft.fft(np.fft.ifftshift(values, axes=axis), axis=axis), axes=axis
    )


def cross_wigner(f: SampledFunction, g: SampledFunction) -> PhaseFunction:
    """Cross-Wigner transform
    W(f,g)(x,p) = (2 pi hbar)^{-n} Integral e^{-i p.y / hbar}
                  f(x + y/2) conj(g(x - y/2)) dy.

    The y-integral is sampled at y = 2 m dx so both factors are read at
    exact lattice indices; one centered FFT per x row then lands the
    result on the compatible PhaseGrid.
    """
    require_same_frame(f, g)
    if f.grid.n != 1:
        raise GridMismatchError("cross_wigner supports n = 1 only")
    n_pts = f.grid.N
    j = np.arange(n_pts)[:, None]
    m = (np.arange(n_pts) - n_pts // 2)[None, :]
    ia = j + m
    ib = j - m
    valid = (ia >= 0) & (ia < n_pts) & (ib >= 0) & (ib < n_pts)
    fa = np.where(valid, f.values[np.clip(ia, 0, n_pts - 1)], 0.0)
    gb = np.where(valid, np.conj(g.values[np.clip(ib, 0, n_pts - 1)]), 0.0)
    corr = fa * gb
    vals = (f.grid.dx / (math.pi * f.hbar)) * _centered_fft_axis(corr, axis=1)
    return PhaseFunction(PhaseGrid.compatible(f.grid, f.hbar), f.hbar, vals)


def _interp_2d(values: np.ndarray, grid: PhaseGrid,
               zx: np.ndarray, zp: np.ndarray) -> np.ndarray:
    ix = zx / grid.dx + grid.N // 2
    ip = zp / grid.dp + grid.N_p // 2
    coords = np.stack([ix, ip])
    re = map_coordinates(values.real, coords, order=3, mode="constant", cval=0.0)
    im = map_coordinates(values.imag, coords, order=3, mode="constant", cval=0.0)
    return re + 1j * im


def phase_shift(F: PhaseFunction, z0: np.ndarray) -> PhaseFunction:
    """Phase-space translation
    Ttilde(z0) F(z) = exp(-i sigma(z, z0) / hbar) F(z - z0/2).

    When the half-shift lands on the lattice the translation is an exact
    index move; otherwise cubic interpolation is used.
    """
    z0 = np.asarray(z0, dtype=float).reshape(-1)
    if z0.size != 2:
        raise GridMismatchError("z0 must have length 2")
    x0, p0 = float(z0[0]), float(z0[1])
    grid = F.grid
    sx = 0.5 * x0 / grid.dx
    sp = 0.5 * p0 / grid.dp
    if abs(sx - round(sx)) < 1e-9 and abs(sp - round(sp)) < 1e-9:
        shifted = _integer_shift(F.values, (int(round(sx)), int(round(sp))))
    else:
        xx, pp = grid.meshgrid()
        shifted = _interp_2d(F.values, grid, xx - 0.5 * x0, pp - 0.5 * p0)
    xx, pp = grid.meshgrid()
    mult = np.exp(-1j * (pp * x0 - xx * p0) / F.hbar)
    return F.with_values(mult * shifted)


def compose_linear(F: PhaseFunction, mat: np.ndarray) -> PhaseFunction:
    """Samples of F(mat z) on F's own grid, by cubic interpolation."""
    mat = np.asarray(mat, dtype=float)
    if mat.shape != (2, 2):
        raise GridMismatchError("mat must be 2x2")
    xx, pp = F.grid.meshgrid()
    return F.with_values(_interp_2d(
        F.values, F.grid, mat[0, 0] * xx + mat[0, 1] * pp,
        mat[1, 0] * xx + mat[1, 1] * pp,
    ))


def moyal_inner(F: PhaseFunction, G: PhaseFunction) -> complex:
    """L2 phase-space inner product (F|G), first argument linear."""
    return F.inner(G)


def wigner_basis(j_max: int, k_max: int, hbar: float, grid: Grid) -> list:
    """The system (2 pi hbar)^{n/2} W(h_j, h_k), j <= j_max, k <= k_max,
    in row-major order; orthonormal by the Moyal identity."""
    if j_max > 8 or k_max > 8:
        raise OutOfDomainError("Hermite orders above 8 are not grid-admissible")
    hs = [hermite_function(j, grid, hbar) for j in range(max(j_max, k_max) + 1)]
    scale = math.sqrt(2.0 * math.pi * hbar)
    out = []
    for j in range(j_max + 1):
        for k in range(k_max + 1):
            w = cross_wigner(hs[j], hs[k])
            out.append(w.with_values(scale * w.values))
    return out


# ----------------------------------------------------------------------
# extended metaplectic operators

def _support_box(values: np.ndarray, pad: int = 2):
    a = np.abs(values)
    peak = float(a.max())
    if peak == 0.0:
        return None
    keep = a > config.TAIL_TOL * peak
    rows = np.nonzero(keep.any(axis=1))[0]
    cols = np.nonzero(keep.any(axis=0))[0]
    i0 = max(0, rows[0] - pad)
    i1 = min(values.shape[0], rows[-1] + 1 + pad)
    k0 = max(0, cols[0] - pad)
    k1 = min(values.shape[1], cols[-1] + 1 + pad)
    return i0, i1, k0, k1


def _fft_upsample(vals: np.ndarray, u1: int, u2: int) -> np.ndarray:
    """Trigonometric upsampling by integer factors (zero-padded spectrum)."""
    if u1 == 1 and u2 == 1:
        return vals
    n1, n2 = vals.shape
    spec = np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(vals)))
    big = np.zeros((n1 * u1, n2 * u2), dtype=complex)
    r0 = (n1 * u1) // 2 - n1 // 2
    c0 = (n2 * u2) // 2 - n2 // 2
    big[r0:r0 + n1, c0:c0 + n2] = spec
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(big))) * (u1 * u2)


_MAX_WORK_POINTS = 8_000_000


def _phase_form_parameters(s: SymplecticMatrix, nu: int, det_si: float,
                           hbar: float, form: str):
    """(R_bil, Sigma, A, pref) with the integral written as
    pref Integral exp(i (z.R_bil z0 + z0.Sigma z0 / 2) / hbar) F(z - A z0) dz0."""
    j2 = standard_j(1)
    eye = np.eye(2)
    if form == "s1":
        r_bil = j2
        sigma = cayley(s)
        a_mat = 0.5 * eye
        pref = (1j ** (int(nu) % 4)) / math.sqrt(abs(det_si))
    elif form == "alfa2":
        r_bil = j2 @ (s.entries - eye)
        js = j2 @ s.entries
        sigma = -0.5 * (js + js.T)
        a_mat = 0.5 * (s.entries - eye)
        pref = (1j ** (int(nu) % 4)) * math.sqrt(abs(det_si))
    elif form == "alfa1":
        # literal composition Ttilde(S z0) Ttilde(-z0):
        # -sigma(z, S z0) + sigma(z, z0) gives the bilinear part,
        # -sigma(S z0, z0)/2 the quadratic part
        r_bil = j2 @ s.entries - j2
        js = j2 @ s.entries
        sigma = -0.5 * (js + js.T)
        a_mat = 0.5 * (s.entries - eye)
        pref = (1j ** (int(nu) % 4)) * math.sqrt(abs(det_si))
    else:
        raise ValueError(f"unknown form {form!r}")
    return r_bil, sigma, a_mat, pref / (2.0 * math.pi * hbar)


def metaplectic_phase_apply(s: SymplecticMatrix, nu: int, F: PhaseFunction,
                            form: str = "s1",
                            r_factor: float = config.R_FACTOR,
                            det_floor: float = 1e-6) -> PhaseFunction:
    """Apply the extended metaplectic operator of (S, nu) to F.

    The selected integral form is reduced by the substitution
    v = z - A z0 to a sum over the sample lattice of F, where the
    integrand decays through F itself, so the truncation region is the
    support box of F (the radial cutoff of the z0-form is redundant in
    these coordinates: shifts outside r_factor times the support radius
    land outside the reachable output box, which is zero-filled).  The
    lattice is refined by trigonometric upsampling until it resolves the
    chirp and output bandwidths; the sheared Fourier sum is evaluated by
    a type-2 nonuniform FFT.
    """
    if F.grid.n != 1:
        raise GridMismatchError("metaplectic_phase_apply supports n = 1 only")
    if s.n != 1:
        raise GridMismatchError("S must be 2x2 for one degree of freedom")
    det_si = float(np.linalg.det(s.entries - np.eye(2)))
    if abs(det_si) <= det_floor:
        raise SingularSMinusIError(f"|det(S - I)| = {abs(det_si):.3e} <= {det_floor:g}")
    hbar = F.hbar
    grid = F.grid
    box = _support_box(F.values)
    if box is None:
        return F.with_values(np.zeros_like(F.values))
    i0, i1, k0, k1 = box
    xs = grid.x_axis()[i0:i1]
    ps = grid.p_axis()[k0:k1]
    r_supp = max(abs(xs[0]), abs(xs[-1]), abs(ps[0]), abs(ps[-1]))

    r_bil, sigma_mat, a_mat, pref = _phase_form_parameters(s, nu, det_si, hbar, form)
    b_mat = np.linalg.inv(a_mat)
    c_mat = b_mat.T @ sigma_mat @ b_mat
    c_mat = 0.5 * (c_mat + c_mat.T)
    g_mat = -(r_bil @ b_mat + c_mat)
    rb = r_bil @ b_mat
    mz = c_mat + (rb + rb.T)
    pref_full = pref * abs(np.linalg.det(b_mat))

    # reachable output box: the left-slot transport is bounded by the top
    # singular value of S; beyond it the true values are tail
    sig_max = float(np.linalg.svd(s.entries, compute_uv=False)[0])
    r_out = 1.15 * sig_max * r_supp + 3.0 * math.sqrt(hbar) * max(1.0, r_factor / 3.0)
    xo = grid.x_axis()
    po = grid.p_axis()
    ox = np.nonzero(np.abs(xo) <= r_out)[0]
    op = np.nonzero(np.abs(po) <= r_out)[0]
    zx = xo[ox[0]:ox[-1] + 1]
    zp = po[op[0]:op[-1] + 1]

    # per-axis bandwidth budget: chirp on the v-box plus output coupling
    mvx, mvp = max(abs(xs[0]), abs(xs[-1])), max(abs(ps[0]), abs(ps[-1]))
    mzx, mzp = max(abs(zx[0]), abs(zx[-1])), max(abs(zp[0]), abs(zp[-1]))
    bound1 = (abs(c_mat[0, 0]) * mvx + abs(c_mat[0, 1]) * mvp
              + abs(g_mat[0, 0]) * mzx + abs(g_mat[1, 0]) * mzp) / hbar
    bound2 = (abs(c_mat[1, 0]) * mvx + abs(c_mat[1, 1]) * mvp
              + abs(g_mat[0, 1]) * mzx + abs(g_mat[1, 1]) * mzp) / hbar
    u1 = max(1, math.ceil(grid.dx * bound1 * 1.1 / math.pi + 1.0))
    u2 = max(1, math.ceil(grid.dp * bound2 * 1.1 / math.pi + 1.0))
    if xs.size * u1 * ps.size * u2 > _MAX_WORK_POINTS:
        raise TruncationError(
            f"workspace would need {xs.size * u1} x {ps.size * u2} points; "
            "the chirp bandwidth exceeds the refinement budget"
        )
    work = _fft_upsample(F.values[i0:i1, k0:k1], u1, u2)
    dv1 = grid.dx / u1
    dv2 = grid.dp / u2
    nj, nk = work.shape
    vx = xs[xs.size // 2] + (np.arange(nj) - nj // 2) * dv1
    vp = ps[ps.size // 2] + (np.arange(nk) - nk // 2) * dv2

    quad_v = 0.5 * (c_mat[0, 0] * vx[:, None] ** 2
                    + 2.0 * c_mat[0, 1] * vx[:, None] * vp[None, :]
                    + c_mat[1, 1] * vp[None, :] ** 2)
    coeffs = work * np.exp(1j * quad_v / hbar) * (dv1 * dv2)

    gz1 = (g_mat[0, 0] * zx[:, None] + g_mat[1, 0] * zp[None, :]) / hbar
    gz2 = (g_mat[0, 1] * zx[:, None] + g_mat[1, 1] * zp[None, :]) / hbar
    xi1 = dv1 * gz1
    xi2 = dv2 * gz2
    if max(float(np.max(np.abs(xi1))), float(np.max(np.abs(xi2)))) >= math.pi:
        raise TruncationError("sheared targets exceed the refined Nyquist box")
    core = nufft2d2(xi1, xi2, coeffs)

    vcx, vcp = vx[nj // 2], vp[nk // 2]
    quad_z = 0.5 * (mz[0, 0] * zx[:, None] ** 2
                    + 2.0 * mz[0, 1] * zx[:, None] * zp[None, :]
                    + mz[1, 1] * zp[None, :] ** 2)
    lin_z = gz1 * vcx + gz2 * vcp
    block = pref_full * np.exp(1j * (quad_z / hbar + lin_z)) * core

    out = np.zeros(grid.shape(), dtype=complex)
    out[ox[0]:ox[-1] + 1, op[0]:op[-1] + 1] = block
    edge = max(
        float(np.max(np.abs(block[:2]))), float(np.max(np.abs(block[-2:]))),
        float(np.max(np.abs(block[:, :2]))), float(np.max(np.abs(block[:, -2:]))),
    )
    peak = float(np.max(np.abs(block)))
    if peak > 0 and edge > 1e-6 * peak and (ox[0] > 0 or op[0] > 0):
        warnings.warn(
            "output mass reaches the reachable-box boundary; "
            "increase r_factor or the grid extent",
            BandwidthExceededWarning,
            stacklevel=2,
        )
    return F.with_values(out)


# ----------------------------------------------------------------------
# Bopp operators

def bopp_apply(a_sigma, F: PhaseFunction,
               r_factor: float = config.R_FACTOR,
               cutoff_fraction: float = config.CUTOFF_FRACTION) -> PhaseFunction:
    """Bopp operator with twisted symbol a_sigma:
    A F = (2 pi hbar)^{-n} Integral a_sigma(z0) Ttilde(z0) F dz0.

    a_sigma is a callable (z_x array, z_p array) -> complex array.  The
    z0 lattice is the even sublattice (2 dx, 2 dp), so every half-shift
    is an exact index move; truncation at R = r_factor * support radius
    with a radial raised-cosine roll-off.  The symbol must have decayed
    at the truncation ring, else the quadrature is meaningless.
    """
    grid = F.grid
    hbar = F.hbar
    box = _support_box(F.values)
    if box is None:
        return F.with_values(np.zeros_like(F.values))
    i0, i1, k0, k1 = box
    xs = grid.x_axis()
    ps = grid.p_axis()
    r_supp = max(abs(xs[i0]), abs(xs[i1 - 1]), abs(ps[k0]), abs(ps[k1 - 1]))
    radius = r_factor * max(r_supp, grid.dx)

    step_x = 2.0 * grid.dx
    step_p = 2.0 * grid.dp
    kx = int(math.floor(radius / step_x))
    kp = int(math.floor(radius / step_p))
    x0 = np.arange(-kx, kx + 1) * step_x
    p0 = np.arange(-kp, kp + 1) * step_p
    xx0, pp0 = np.meshgrid(x0, p0, indexing="ij")
    rr = np.hypot(xx0, pp0) / radius

    a_vals = np.asarray(a_sigma(xx0, pp0), dtype=complex)
    if a_vals.shape != xx0.shape:
        raise TruncationError("a_sigma must return an array matching its inputs")
    peak = float(np.max(np.abs(a_vals)))
    ring = (rr >= 0.9) & (rr <= 1.0)
    if peak > 0 and ring.any() and float(np.max(np.abs(a_vals[ring]))) > 1e-3 * peak:
        raise TruncationError(
            "twisted symbol has not decayed at the truncation radius"
        )

    flat_end = 1.0 - cutoff_fraction
    chi = np.ones_like(rr)
    roll = (rr > flat_end) & (rr <= 1.0)
    chi[roll] = 0.5 * (1.0 + np.cos(math.pi * (rr[roll] - flat_end) / cutoff_fraction))
    chi[rr > 1.0] = 0.0
    weights = a_vals * chi * (step_x * step_p) / (2.0 * math.pi * hbar)

    keep = np.abs(weights) > 1e-14 * max(peak, 1e-300)
    out = np.zeros(grid.shape(), dtype=complex)
    xg = grid.x_axis()
    pg = grid.p_axis()
    for ix, ip in zip(*np.nonzero(keep)):
        w = weights[ix, ip]
        shifted = _integer_shift(F.values, (ix - kx, ip - kp))
        col = np.exp(1j * xg * p0[ip] / hbar)
        row = np.exp(-1j * pg * x0[ix] / hbar)
        out += (w * col)[:, None] * row[None, :] * shifted
    return F.with_values(out)
