#!/usr/bin/env python3
"""Tour: cross-Wigner transforms and the extended (phase-space) operators.

Four stations:

  1. Moyal orthogonality — the rescaled cross-Wigner transforms of Hermite
     pairs form an orthonormal family on phase space.
  2. Shift intertwining — a grid-aligned Heisenberg-Weyl shift of the input
     becomes an exact phase-space translation-with-multiplier.
  3. Metaplectic intertwining — the phase-space operator Stilde applied to
     W(f, g) equals W(S f, g) computed entirely on configuration space.
  4. L1 invariance — the auto-Wigner L1 norm (a modulation-space witness)
     is unchanged by shifts and metaplectic maps.

Run:  python3 demos/phase_space_tour.py
"""

import math

import numpy as np

from metaplectic import (
    conley_zehnder,
    cross_wigner,
    gaussian,
    Grid,
    heisenberg_weyl,
    hermite_function,
    invariance_check,
    metaplectic_phase_apply,
    moyal_inner,
    phase_shift,
    qfio_apply,
    rotation,
    rotation_generating,
    s0_norm,
    wigner_basis,
)

HBAR = 1.0
GRID = Grid(n=1, N=512, X=12.0)


def moyal_station():
    basis = wigner_basis(2, 2, HBAR, GRID)
    gram = np.array([[moyal_inner(a, b) for b in basis] for a in basis])
    err = float(np.max(np.abs(gram - np.eye(len(basis)))))
    print("1. Moyal orthogonality")
    print(f"   Gram matrix of sqrt(2 pi hbar) W(h_j, h_k), j,k <= 2:"
          f" max |G - I| = {err:.3e}\n")


def shift_station():
    phi0 = gaussian(GRID, HBAR)
    h1 = hermite_function(1, GRID, HBAR)
    dx = GRID.dx
    dp = math.pi * HBAR / GRID.X
    z0 = np.array([8 * dx, 12 * dp])
    lhs = cross_wigner(heisenberg_weyl(phi0, z0), h1)
    rhs = phase_shift(cross_wigner(phi0, h1), z0)
    err = float(np.max(np.abs(lhs.values - rhs.values)))
    print("2. Shift intertwining")
    print(f"   z0 = ({z0[0]:.4f}, {z0[1]:.4f}) grid-aligned:"
          f" max |W(T f, g) - Ttilde W(f, g)| = {err:.3e}\n")


def metaplectic_station():
    phi0 = gaussian(GRID, HBAR)
    h1 = hermite_function(1, GRID, HBAR)
    alpha = math.pi / 2
    w = rotation_generating(alpha)
    nu = conley_zehnder(w, 0)
    lhs = metaplectic_phase_apply(rotation(alpha), nu, cross_wigner(phi0, h1))
    rhs = cross_wigner(qfio_apply(w, 0, phi0), h1)
    rel = float(np.linalg.norm(lhs.values - rhs.values)
                / np.linalg.norm(rhs.values))
    print("3. Metaplectic intertwining (quarter rotation)")
    print(f"   relative L2 gap between Stilde W(f,g) and W(S f, g):"
          f" {rel:.3e}\n")


def l1_station():
    phi0 = gaussian(GRID, HBAR)
    h1 = hermite_function(1, GRID, HBAR)
    rep = s0_norm(phi0, phi0, window_id="gaussian")
    print("4. L1 invariance")
    print(f"   ||W(phi0, phi0)||_L1 = {rep.norm_value:.8f}"
          f"  (truncation estimate {rep.truncation_estimate:.1e})")
    dx = GRID.dx
    dp = math.pi * HBAR / GRID.X
    z0 = np.array([16 * dx, 12 * dp])
    before, after = invariance_check(h1, lambda f: heisenberg_weyl(f, z0))
    print(f"   shift:    L1 before {before:.8f}  after {after:.8f}")
    w = rotation_generating(math.pi / 3)
    before, after = invariance_check(h1, lambda f: qfio_apply(w, 0, f))
    print(f"   rotation: L1 before {before:.8f}  after {after:.8f}\n")


if __name__ == "__main__":
    moyal_station()
    shift_station()
    metaplectic_station()
    l1_station()
    print("done.")
