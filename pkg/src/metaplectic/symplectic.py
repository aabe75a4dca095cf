"""Linear symplectic algebra: Sp(n) matrices, free generating functions,
and the symplectic Cayley transform.

Phase-space vectors are ordered z = (x_1..x_n, p_1..p_n).  The standard
symplectic form is sigma(z, z') = (J z) . z' with J = [[0, I], [-I, 0]],
so for n = 1, sigma((x, p), (x', p')) = p x' - x p'.

A free symplectic matrix is one whose upper-right n x n block is
invertible.  Such matrices are exactly the ones generated by a quadratic
form W(x, x') = (1/2) P x.x - L x.x' + (1/2) Q x'.x' with P, Q symmetric
and det L != 0:

    (x, p) = S_W (x', p')   iff   p = d_x W,  p' = -d_x' W.
"""

from __future__ import annotations

import numpy as np

from . import config
from .errors import (
    DegenerateMatrixError,
    NotFreeError,
    SingularAngleError,
    SingularMMinusHalfJError,
    SingularSMinusIError,
)

__all__ = [
    "standard_j",
    "symplectic_form",
    "is_symplectic",
    "SymplecticMatrix",
    "GeneratingFunction",
    "free_from_generating",
    "generating_from_free",
    "chirp_matrix",
    "scaling_matrix",
    "cayley",
    "cayley_inverse",
    "det_s_minus_i",
    "rotation",
    "rotation_generating",
    "random_free_generating",
    "random_symplectic",
]


def standard_j(n: int) -> np.ndarray:
    """Standard symplectic matrix J = [[0, I], [-I, 0]] of size 2n x 2n."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def symplectic_form(z1: np.ndarray, z2: np.ndarray) -> float:
    """sigma(z1, z2) = (J z1) . z2 = p1.x2 - x1.p2."""
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    if z1.shape != z2.shape or z1.ndim != 1 or z1.size % 2:
        raise DegenerateMatrixError("symplectic_form expects two equal-length even vectors")
    n = z1.size // 2
    return float(z1[n:] @ z2[:n] - z1[:n] @ z2[n:])


def is_symplectic(entries: np.ndarray, tol: float = config.TOL_SYMP) -> bool:
    """Check S^T J S = J entrywise within tol."""
    entries = np.asarray(entries, dtype=float)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] % 2:
        return False
    n = entries.shape[0] // 2
    jmat = standard_j(n)
    return bool(np.max(np.abs(entries.T @ jmat @ entries - jmat)) <= tol)


class SymplecticMatrix:
    """A validated element of Sp(n) with block access.

    Parameters
    ----------
    entries : (2n, 2n) array_like
        Real matrix satisfying S^T J S = J within ``tol``.
    tol : float
        Symplecticity tolerance used at construction.
    """

    __slots__ = ("n", "entries")

    def __init__(self, entries: np.ndarray, tol: float = config.TOL_SYMP):
        entries = np.array(entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] % 2:
            raise DegenerateMatrixError(f"expected a square even-dimension matrix, got {entries.shape}")
        if not is_symplectic(entries, tol):
            n = entries.shape[0] // 2
            jmat = standard_j(n)
            resid = np.max(np.abs(entries.T @ jmat @ entries - jmat))
            raise DegenerateMatrixError(f"matrix is not symplectic: |S^T J S - J| = {resid:.3e} > {tol:g}")
        self.n = entries.shape[0] // 2
        self.entries = entries
        self.entries.setflags(write=False)

    # Blocks S = [[A, B], [C, D]].
    @property
    def a(self) -> np.ndarray:
        return self.entries[: self.n, : self.n]

    @property
    def b(self) -> np.ndarray:
        return self.entries[: self.n, self.n:]

    @property
    def c(self) -> np.ndarray:
        return self.entries[self.n:, : self.n]

    @property
    def d(self) -> np.ndarray:
        return self.entries[self.n:, self.n:]

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        if not isinstance(other, SymplecticMatrix):
            return NotImplemented
        if other.n != self.n:
            raise DegenerateMatrixError("cannot compose symplectic matrices of different n")
        return SymplecticMatrix(self.entries @ other.entries)

    def inv(self) -> "SymplecticMatrix":
        """Symplectic inverse S^{-1} = [[D^T, -B^T], [-C^T, A^T]] (exact blocks)."""
        return SymplecticMatrix(np.block([[self.d.T, -self.b.T], [-self.c.T, self.a.T]]))

    def __repr__(self) -> str:
        return f"SymplecticMatrix(n={self.n})"


class GeneratingFunction:
    """Quadratic generating function W = (P, L, Q) of a free symplectic matrix.

    W(x, x') = (1/2) P x.x - L x.x' + (1/2) Q x'.x', with P, Q symmetric
    and L invertible.
    """

    __slots__ = ("n", "P", "L", "Q")

    def __init__(self, P, L, Q, tol: float = config.TOL_SYMP):
        P = np.atleast_2d(np.array(P, dtype=float))
        L = np.atleast_2d(np.array(L, dtype=float))
        Q = np.atleast_2d(np.array(Q, dtype=float))
        n = P.shape[0]
        for name, mat in (("P", P), ("L", L), ("Q", Q)):
            if mat.shape != (n, n):
                raise DegenerateMatrixError(f"{name} must be {n}x{n}, got {mat.shape}")
        for name, mat in (("P", P), ("Q", Q)):
            if np.max(np.abs(mat - mat.T)) > tol:
                raise DegenerateMatrixError(f"{name} must be symmetric within {tol:g}")
        if abs(np.linalg.det(L)) <= config.TOL_SING:
            raise DegenerateMatrixError("L must be invertible")
        self.n = n
        self.P = 0.5 * (P + P.T)
        self.Q = 0.5 * (Q + Q.T)
        self.L = L
        for mat in (self.P, self.L, self.Q):
            mat.setflags(write=False)

    def value(self, x: np.ndarray, xp: np.ndarray):
        """Evaluate W(x, x'); accepts broadcastable stacks of n-vectors."""
        x = np.asarray(x, dtype=float)
        xp = np.asarray(xp, dtype=float)
        px = 0.5 * np.einsum("...i,ij,...j->...", x, self.P, x)
        lx = np.einsum("...i,ij,...j->...", xp, self.L, x)
        qx = 0.5 * np.einsum("...i,ij,...j->...", xp, self.Q, xp)
        return px - lx + qx

    def hessian_xx(self) -> np.ndarray:
        """Hessian of x -> W(x, x): P + Q - L - L^T."""
        return self.P + self.Q - self.L - self.L.T

    def inverse(self) -> "GeneratingFunction":
        """Generating function of S_W^{-1}: W'(x, x') = -W(x', x)."""
        return GeneratingFunction(-self.Q, -self.L.T, -self.P)

    def __repr__(self) -> str:
        return f"GeneratingFunction(n={self.n})"


def free_from_generating(w: GeneratingFunction) -> SymplecticMatrix:
    """Free symplectic matrix of a generating function.

    S_W = [[L^{-1} Q, L^{-1}], [P L^{-1} Q - L^T, P L^{-1}]].  The
    lower-right block is P L^{-1}: this is the unique choice that is
    symplectic for noncommuting blocks and satisfies the round trip
    P = D B^{-1} (for n = 1 it coincides with L^{-1} P).
    """
    linv = np.linalg.inv(w.L)
    a = linv @ w.Q
    b = linv
    c = w.P @ linv @ w.Q - w.L.T
    d = w.P @ linv
    return SymplecticMatrix(np.block([[a, b], [c, d]]))


def generating_from_free(s: SymplecticMatrix, tol: float = config.TOL_SING) -> GeneratingFunction:
    """Generating function of a free symplectic matrix.

    P = D B^{-1}, L = B^{-1}, Q = B^{-1} A.  Raises NotFreeError when the
    upper-right block is numerically singular.
    """
    if abs(np.linalg.det(s.b)) <= tol:
        raise NotFreeError(f"upper-right block has |det| <= {tol:g}; matrix is not free")
    binv = np.linalg.inv(s.b)
    return GeneratingFunction(s.d @ binv, binv, binv @ s.a)


def is_free(s: SymplecticMatrix, tol: float = config.TOL_SING) -> bool:
    return abs(np.linalg.det(s.b)) > tol


def chirp_matrix(p: np.ndarray) -> SymplecticMatrix:
    """Projection of the chirp multiplier exp(i P x.x / 2 hbar): [[I, 0], [P, I]]."""
    p = np.atleast_2d(np.asarray(p, dtype=float))
    n = p.shape[0]
    return SymplecticMatrix(np.block([[np.eye(n), np.zeros((n, n))], [p, np.eye(n)]]))


def scaling_matrix(l: np.ndarray) -> SymplecticMatrix:
    """Projection of the scaling operator f -> sqrt|det L| f(Lx): [[L^{-1}, 0], [0, L^T]]."""
    l = np.atleast_2d(np.asarray(l, dtype=float))
    n = l.shape[0]
    return SymplecticMatrix(
        np.block([[np.linalg.inv(l), np.zeros((n, n))], [np.zeros((n, n)), l.T]])
    )


def cayley(s: SymplecticMatrix, tol: float = config.TOL_SING) -> np.ndarray:
    """Symplectic Cayley transform M_S = (1/2) J (S + I)(S - I)^{-1}.

    Returns the symmetric matrix M_S; equals (1/2) J + J (S - I)^{-1}.
    Raises SingularSMinusIError when det(S - I) is below ``tol``.
    """
    two_n = 2 * s.n
    smi = s.entries - np.eye(two_n)
    if abs(np.linalg.det(smi)) <= tol:
        raise SingularSMinusIError(f"|det(S - I)| <= {tol:g}")
    jmat = standard_j(s.n)
    m = 0.5 * jmat + jmat @ np.linalg.inv(smi)
    asym = np.max(np.abs(m - m.T))
    if asym > config.TOL_SYMP * max(1.0, np.max(np.abs(m))):
        raise DegenerateMatrixError(f"Cayley transform not symmetric: asymmetry {asym:.3e}")
    return 0.5 * (m + m.T)


def cayley_inverse(m: np.ndarray, tol: float = config.TOL_SING) -> SymplecticMatrix:
    """Recover S from M_S: S = (M - J/2)^{-1} (M + J/2)."""
    m = np.asarray(m, dtype=float)
    two_n = m.shape[0]
    jmat = standard_j(two_n // 2)
    lower = m - 0.5 * jmat
    if abs(np.linalg.det(lower)) <= tol:
        raise SingularMMinusHalfJError(f"|det(M - J/2)| <= {tol:g}")
    return SymplecticMatrix(np.linalg.inv(lower) @ (m + 0.5 * jmat))


def det_s_minus_i(w: GeneratingFunction) -> float:
    """det(S_W - I) in closed form: (-1)^n det(L^{-1}) det(P + Q - L - L^T)."""
    sign = -1.0 if w.n % 2 else 1.0
    return float(sign / np.linalg.det(w.L) * np.linalg.det(w.hessian_xx()))


def rotation(alpha: float, n: int = 1) -> SymplecticMatrix:
    """Rotation by alpha in each (x_i, p_i) plane:
    [[cos a I, sin a I], [-sin a I, cos a I]]."""
    eye = np.eye(n)
    return SymplecticMatrix(
        np.block([[np.cos(alpha) * eye, np.sin(alpha) * eye],
                  [-np.sin(alpha) * eye, np.cos(alpha) * eye]])
    )


def rotation_generating(alpha: float, n: int = 1, tol: float = 1e-12) -> GeneratingFunction:
    """Generating function of the rotation: P = Q = cot(a) I, L = I / sin(a).

    Undefined at integer multiples of pi (SingularAngleError).
    """
    s = np.sin(alpha)
    if abs(s) <= tol:
        raise SingularAngleError(f"rotation angle {alpha!r} is within {tol:g} of a multiple of pi")
    c = np.cos(alpha) / s
    eye = np.eye(n)
    return GeneratingFunction(c * eye, eye / s, c * eye)


def _random_symmetric(n: int, rng: np.random.Generator, scale: float) -> np.ndarray:
    m = rng.uniform(-scale, scale, size=(n, n))
    return 0.5 * (m + m.T)


def random_free_generating(
    n: int,
    rng: np.random.Generator,
    pq_scale: float = 2.0,
    l_pert: float = 0.5,
    max_singular: float | None = None,
    min_det_l: float = 0.5,
) -> GeneratingFunction:
    """Draw a random free generating function.

    P, Q have entries uniform in [-pq_scale, pq_scale]; L = I + U with U
    uniform in [-l_pert, l_pert] and |det L| >= min_det_l.  When
    ``max_singular`` is given, rejection-sample until the largest singular
    value of S_W stays below it (keeps transported supports on the grid).
    """
    for _ in range(1000):
        p = _random_symmetric(n, rng, pq_scale)
        q = _random_symmetric(n, rng, pq_scale)
        l = np.eye(n) + rng.uniform(-l_pert, l_pert, size=(n, n))
        if abs(np.linalg.det(l)) < min_det_l:
            continue
        w = GeneratingFunction(p, l, q)
        if max_singular is not None:
            smax = np.linalg.svd(free_from_generating(w).entries, compute_uv=False)[0]
            if smax > max_singular:
                continue
        return w
    raise DegenerateMatrixError("could not draw an admissible generating function")


def random_symplectic(n: int, rng: np.random.Generator, n_factors: int = 2) -> SymplecticMatrix:
    """Random element of Sp(n): a product of free matrices from random
    generating functions (symplectic by construction)."""
    s = free_from_generating(random_free_generating(n, rng))
    for _ in range(n_factors - 1):
        s = s @ free_from_generating(random_free_generating(n, rng))
    return s
