#!/usr/bin/env python3
"""Ladder: stationary-phase asymptotics for the phase-space operators.

The extended operator Stilde acts, for small hbar, like an oscillatory
integral with quadratic phase governed by the symplectic Cayley transform
M_S.  The leading stationary-phase term carries the Conley-Zehnder index
as an i^nu prefactor and a 1/sqrt(|det(S - I)|) amplitude; the first
correction is O(hbar), so halving hbar should halve the gap between the
leading term and a converged oscillatory quadrature.

Stations:

  1. Determinant identity  det M_S = 2^{-2n} det(S + I) / det(S - I)
     sampled over random symplectic matrices in n = 1 and n = 2.
  2. The hbar-halving ladder for a rotation, printing the leading term,
     the quadrature oracle, and the per-halving error ratio (ideal 0.5).

Run:  python3 demos/small_hbar_ladder.py
"""

import math

import numpy as np

from metaplectic import (
    cayley,
    conley_zehnder,
    metaplectic_asymptotic,
    random_symplectic,
    rotation,
    rotation_generating,
)


def det_identity_station():
    rng = np.random.default_rng(2718)
    worst = 0.0
    for n in (1, 2):
        for _ in range(25):
            s = random_symplectic(n, rng)
            det_si = np.linalg.det(s.entries - np.eye(2 * n))
            if abs(det_si) < 1e-3:
                continue
            lhs = np.linalg.det(cayley(s))
            rhs = (2.0 ** (-2 * n)
                   * np.linalg.det(s.entries + np.eye(2 * n)) / det_si)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    print("1. det M_S = 2^{-2n} det(S + I) / det(S - I)")
    print(f"   worst relative residual over 50 samples: {worst:.3e}\n")


def ladder_station():
    alpha = 2 * math.pi / 3
    s = rotation(alpha)
    nu = conley_zehnder(rotation_generating(alpha), 0)
    bump = lambda z: np.exp(-np.sum(np.asarray(z) ** 2, axis=-1))
    z_eval = np.array([0.7, -0.4])
    print(f"2. hbar-halving ladder (rotation alpha = {alpha:.6f}, nu = {nu})")
    print(f"{'hbar':>9} {'|leading|':>12} {'|quadrature|':>13}"
          f" {'rel error':>10} {'ratio':>7}")
    prev = None
    for i in range(4):
        hbar = 0.1 / 2 ** i
        res = metaplectic_asymptotic(s, nu, bump, z_eval, hbar=hbar,
                                     support_radius=5.0)
        ratio = "" if prev is None else f"{res.relative_error / prev:7.3f}"
        print(f"{hbar:9.5f} {abs(res.leading):12.6e}"
              f" {abs(res.quadrature):13.6e}"
              f" {res.relative_error:10.3e} {ratio:>7}")
        prev = res.relative_error
    print()


if __name__ == "__main__":
    det_identity_station()
    ladder_station()
    print("done.")
