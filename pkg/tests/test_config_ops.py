"""Configuration-space operators: chirps, scaled Fourier, QFIOs, words,
Heisenberg-Weyl shifts, and the phase-space (Bochner) realization."""

import math

import numpy as np
import pytest

from metaplectic import (
    bochner_apply,
    cayley,
    chirp_multiply,
    conley_zehnder,
    cz_compose,
    factor_pair,
    free_from_generating,
    gaussian,
    Grid,
    GridMismatchError,
    hbar_fourier,
    heisenberg_weyl,
    hermite_function,
    maslov_branch,
    maslov_compose,
    MetaplecticWord,
    qfio_apply,
    random_free_generating,
    random_symplectic,
    rotation,
    rotation_generating,
    scale_op,
    support_radius,
)

HBAR = 1.0


@pytest.fixture(scope="module")
def grid():
    return Grid(n=1, N=512, X=12.0)


@pytest.fixture(scope="module")
def phi0(grid):
    return gaussian(grid, HBAR)


def test_gaussian_is_fourier_eigenvector(phi0):
    out = hbar_fourier(phi0)
    target = gaussian(out.grid, HBAR)
    np.testing.assert_allclose(
        out.values, np.exp(-1j * math.pi / 4) * target.values, atol=1e-8)


def test_fourier_unitarity_and_fourth_power(grid):
    f = hermite_function(3, grid, HBAR)
    out = f
    for _ in range(4):
        out = hbar_fourier(out)
    # J^4 = (-1)^n = -1 on n = 1 (e^{-i n pi / 4} normalization to the
    # fourth power times the parity operator squared)
    np.testing.assert_allclose(out.values, -f.values, atol=1e-7)
    assert abs(hbar_fourier(f).norm() - f.norm()) < 1e-8


def test_fourier_inverse_round_trip(grid):
    f = hermite_function(2, grid, HBAR)
    back = hbar_fourier(hbar_fourier(f), inverse=True)
    np.testing.assert_allclose(back.values, f.values, atol=1e-10)


def test_chirp_multiply_phase(grid, phi0):
    p = np.array([[0.7]])
    out = chirp_multiply(phi0, p)
    x = grid.axis()
    np.testing.assert_allclose(
        out.values, np.exp(0.5j * 0.7 * x * x / HBAR) * phi0.values,
        atol=1e-12)


def test_scale_op_unitary_and_parity(grid, phi0):
    out = scale_op(phi0, np.array([[2.0]]), 0)
    assert abs(out.norm() - phi0.norm()) < 1e-6
    # h_1 is odd, so a negative scaling flips its sign; det L < 0 wants odd m
    h1 = hermite_function(1, grid, HBAR)
    flipped = scale_op(h1, np.array([[-1.0]]), 1)
    np.testing.assert_allclose(flipped.values, 1j * -h1.values, atol=1e-10)


@pytest.mark.parametrize("k", range(5))
def test_mehler_eigenphases(grid, k):
    alpha = math.pi / 3
    w = rotation_generating(alpha)
    hk = hermite_function(k, grid, HBAR)
    out = qfio_apply(w, 0, hk)
    np.testing.assert_allclose(
        out.values, np.exp(-1j * alpha * (k + 0.5)) * hk.values, atol=1e-7)


def test_quarter_rotation_is_fourier():
    # S_{pi/2} = J, whose operator is i^{-1/2} F_hbar = e^{-i pi/4} F_hbar.
    # On the self-dual box X = sqrt(pi hbar N / 2) the transform's dual
    # lattice coincides with the sampling lattice, so values compare directly.
    sd = Grid(n=1, N=512, X=math.sqrt(math.pi * HBAR * 512 / 2))
    f = hermite_function(1, sd, HBAR)
    w = rotation_generating(math.pi / 2)
    lhs = qfio_apply(w, 0, f)
    rhs = hbar_fourier(f)
    np.testing.assert_allclose(lhs.values, rhs.values, atol=1e-8)


def test_factored_against_quadrature(grid, phi0):
    rng = np.random.default_rng(101)
    for _ in range(3):
        w = random_free_generating(1, rng, max_singular=1.4, min_det_l=0.5)
        a = qfio_apply(w, 0, phi0, method="factored")
        b = qfio_apply(w, 0, phi0, method="quadrature")
        err = np.max(np.abs(a.values - b.values)) / np.max(np.abs(b.values))
        assert err < 1e-5


def test_qfio_unitarity_random_words(grid):
    rng = np.random.default_rng(55)
    hs = [hermite_function(k, grid, HBAR) for k in range(5)]
    for _ in range(5):
        w = random_free_generating(1, rng, max_singular=1.4, min_det_l=0.5)
        for h in hs:
            assert abs(qfio_apply(w, 0, h).norm() - h.norm()) < 1e-6


def test_qfio_inverse_round_trip(grid, phi0):
    rng = np.random.default_rng(77)
    w = random_free_generating(1, rng, max_singular=1.4, min_det_l=0.5)
    m = maslov_branch(w.L, 0)
    word = MetaplecticWord([(w, m)])
    back = word.inverse().apply(word.apply(phi0))
    np.testing.assert_allclose(back.values, phi0.values, atol=1e-9)


def test_word_projection_multiplies_factors():
    rng = np.random.default_rng(31)
    w1 = random_free_generating(1, rng)
    w2 = random_free_generating(1, rng)
    word = MetaplecticWord([(w1, 0), (w2, 0)])
    s = free_from_generating(w1) @ free_from_generating(w2)
    np.testing.assert_allclose(word.projection().entries, s.entries,
                               atol=1e-10)


def test_word_application_order(grid, phi0):
    # leftmost factor acts last: [(w1, m1), (w2, m2)] f = S_{W1} (S_{W2} f)
    w1 = rotation_generating(math.pi / 3)
    w2 = rotation_generating(math.pi / 4)
    word = MetaplecticWord([(w1, 0), (w2, 0)])
    lhs = word.apply(phi0)
    rhs = qfio_apply(w1, 0, qfio_apply(w2, 0, phi0))
    np.testing.assert_allclose(lhs.values, rhs.values, atol=1e-12)


def test_heisenberg_weyl_shift_and_norm(grid, phi0):
    dx = grid.dx
    dp = math.pi * HBAR / grid.X
    z0 = np.array([10 * dx, 8 * dp])
    out = heisenberg_weyl(phi0, z0)
    assert abs(out.norm() - phi0.norm()) < 1e-12
    x = grid.axis()
    expected = (np.exp(1j * (z0[1] * x - 0.5 * z0[1] * z0[0]) / HBAR)
                * np.roll(phi0.values, 10))
    np.testing.assert_allclose(out.values, expected, atol=1e-12)


def test_weyl_cocycle_aligned(grid, phi0):
    dx = grid.dx
    dp = math.pi * HBAR / grid.X
    z0 = np.array([8 * dx, 6 * dp])
    z1 = np.array([-6 * dx, 10 * dp])
    lhs = heisenberg_weyl(heisenberg_weyl(phi0, z1), z0)
    phase = np.exp(1j * (z0[1] * z1[0] - z0[0] * z1[1]) / (2 * HBAR))
    rhs = heisenberg_weyl(phi0, z0 + z1)
    np.testing.assert_allclose(lhs.values, phase * rhs.values, atol=1e-9)


def test_fractional_rotation_additivity(grid, phi0):
    # composing two rotation operators reproduces the composed-angle
    # operator up to the i^k branch phase predicted by the Maslov cocycle
    f = hermite_function(1, grid, HBAR)
    for alpha, beta in ((math.pi / 4, math.pi / 3),
                        (math.pi / 2, 2 * math.pi / 3)):
        gamma = alpha + beta
        wa, wb, wg = (rotation_generating(t) for t in (alpha, beta, gamma))
        lhs = qfio_apply(wa, 0, qfio_apply(wb, 0, f))
        m_comp = maslov_compose(0, 0, wb.P + wa.Q)
        m_base = maslov_branch(wg.L, m_comp)
        rhs = qfio_apply(wg, m_base, f)
        assert m_base == m_comp
        np.testing.assert_allclose(lhs.values, rhs.values, atol=1e-6)


def test_support_radius_gaussian(grid, phi0):
    r = support_radius(phi0)
    assert 4.0 < r < 9.0  # exp(-r^2/2) crosses 1e-12 of peak near r = 7.4


def test_bochner_matches_factored_rotation(grid, phi0):
    w = rotation_generating(math.pi / 2)
    nu = conley_zehnder(w, 0)
    boch = bochner_apply(rotation(math.pi / 2), nu, phi0)
    fact = qfio_apply(w, 0, phi0)
    err = np.max(np.abs(boch.values - fact.values)) / np.max(np.abs(fact.values))
    assert err < 1e-3


@pytest.mark.parametrize("form", ["s1", "s2", "s3"])
def test_bochner_forms_agree(grid, form):
    f = hermite_function(1, grid, HBAR)
    w = rotation_generating(2 * math.pi / 3)
    nu = conley_zehnder(w, 0)
    s = rotation(2 * math.pi / 3)
    out = bochner_apply(s, nu, f, form=form)
    ref = qfio_apply(w, 0, f)
    err = np.max(np.abs(out.values - ref.values)) / np.max(np.abs(ref.values))
    assert err < 1e-3


def test_bochner_generic_symplectic_with_composed_index(grid, phi0):
    # draw a non-free S, factor it, compose the Conley-Zehnder index from the
    # factors' Cayley transforms, and check the Bochner realization against
    # the factored word: this exercises the full index-composition chain
    rng = np.random.default_rng(4)
    tested = 0
    while tested < 2:
        s = random_symplectic(1, rng)
        sv = np.linalg.svd(s.entries, compute_uv=False)
        if sv[0] > 1.5 or abs(np.linalg.det(s.entries - np.eye(2))) < 0.3:
            continue
        tested += 1
        (w1, m1), (w2, m2) = factor_pair(s)
        nu = cz_compose(conley_zehnder(w1, m1), conley_zehnder(w2, m2),
                        cayley(free_from_generating(w1)),
                        cayley(free_from_generating(w2)))
        boch = bochner_apply(s, nu, phi0)
        word = MetaplecticWord([(w1, m1), (w2, m2)])
        ref = word.apply(phi0)
        err = np.max(np.abs(boch.values - ref.values)) / np.max(np.abs(ref.values))
        assert err < 1e-3


def test_qfio_rejects_frame_mismatch(grid):
    other = Grid(n=1, N=256, X=12.0)
    f = gaussian(other, HBAR)
    w = rotation_generating(math.pi / 3)
    out = qfio_apply(w, 0, f)        # different N is fine on its own grid
    assert out.grid.N == 256
    g2 = Grid(n=2, N=64, X=8.0)
    f2 = gaussian(g2, HBAR)
    with pytest.raises(GridMismatchError):
        # rotation generating function is n = 1; dimensions must match
        qfio_apply(w, 0, f2)
