"""Core state machinery, checked against independent oracles.

Oracles used here and nowhere overwritten:
  - dense matrix exponential of the truncated squeeze generator,
  - brute-force grids for angle extrema,
  - direct Hermite-polynomial sums for wavefunctions,
  - 1-D quadrature for Wigner probe points.
"""

import io

import numpy as np
import pytest
from scipy.linalg import expm
from scipy.special import eval_hermite, factorial

from catgen import (
    CatTarget,
    DomainError,
    FockDensityMatrix,
    FockVector,
    ThetaParams,
    TruncationError,
    cat_fock,
    db_to_r,
    default_cutoff,
    extremal_mean_photons,
    fidelity,
    mean_photon_number,
    position_wavefunction,
    r_to_db,
    squeeze_fock,
    squeeze_matrix,
    squeezed_theta_fock,
    theta_extrema,
    wigner,
    wrap_theta,
)
from catgen.serialize import (
    density_matrix_from_json,
    density_matrix_to_json,
    fock_vector_from_json,
    fock_vector_to_json,
    wigner_to_csv,
)


def oracle_psi(amps, x):
    """Position wavefunction via raw Hermite polynomials (independent path)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    for n, a in enumerate(amps):
        if a == 0:
            continue
        norm = (2.0**n * factorial(n)) ** -0.5 * np.pi**-0.25
        out += a * norm * eval_hermite(n, x) * np.exp(-0.5 * x * x)
    return out


def oracle_wigner_point(amps, x0, p0):
    """W(x0,p0) = (1/pi) * integral psi(x0+y) conj(psi(x0-y)) e^{-2 i p0 y} dy."""
    y = np.linspace(-9.0, 9.0, 6001)
    f = oracle_psi(amps, x0 + y) * np.conj(oracle_psi(amps, x0 - y)) * np.exp(-2j * p0 * y)
    return float(np.real(np.trapezoid(f, y)) / np.pi)


def squeeze_generator(r, dim):
    """Dense -(r/2)(a^2 - a^dag^2) on the truncated space."""
    a = np.diag(np.sqrt(np.arange(1, dim)), k=1)
    return -(r / 2.0) * (a @ a - a.T @ a.T)


# ---------------------------------------------------------------- parameters


def test_db_conversion():
    assert db_to_r(10.0) == pytest.approx(np.log(10.0) / 2.0, rel=1e-15)
    assert r_to_db(db_to_r(4.0)) == pytest.approx(4.0, rel=1e-15)


def test_theta_wrapping_and_domain():
    p = ThetaParams(0.3, -0.5)
    assert 0.0 <= p.theta < 2.0 * np.pi
    assert p.theta == pytest.approx(2.0 * np.pi - 0.5)
    with pytest.raises(DomainError):
        ThetaParams(3.5, 0.0)
    with pytest.raises(DomainError):
        ThetaParams(np.nan, 0.0)


def test_default_cutoff_even_and_monotone():
    cuts = [default_cutoff(v) for v in (0.0, 0.5, 2.0, 10.0)]
    assert all(c % 2 == 0 for c in cuts)
    assert cuts == sorted(cuts)


# ---------------------------------------------------------- mean photon number


def test_mean_photon_trivial():
    assert mean_photon_number(ThetaParams(0.0, 0.0)) == pytest.approx(0.0, abs=1e-14)
    assert mean_photon_number(ThetaParams(0.0, np.pi)) == pytest.approx(2.0, rel=1e-14)


def test_mean_photon_matches_fock_sum():
    for r, th in [(0.5, theta_extrema(0.5)[0]), (0.8, 1.1), (-0.6, 4.0), (1.0, 2.5)]:
        vec = squeezed_theta_fock(ThetaParams(r, th), cutoff=120)
        assert vec.mean_photon() == pytest.approx(
            mean_photon_number(ThetaParams(r, th)), abs=1e-8
        )


def test_extremal_mean_photons_closed_form():
    for r in (0.05, 0.4, 1.0, 2.0):
        th_max, th_min = theta_extrema(r)
        n_max, n_min = extremal_mean_photons(r)
        assert n_max == pytest.approx(mean_photon_number(ThetaParams(r, th_max)), abs=1e-12)
        assert n_min == pytest.approx(mean_photon_number(ThetaParams(r, th_min)), abs=1e-12)


def test_theta_extrema_against_grid_search():
    r = 0.5
    th = np.linspace(0.0, 2.0 * np.pi, 100_000, endpoint=False)
    nbar = np.cosh(2 * r) * (1.5 - np.cos(th)) + np.sinh(2 * r) * np.sin(th) / np.sqrt(2) - 0.5
    th_max, th_min = theta_extrema(r)
    assert abs(th[np.argmax(nbar)] - th_max) < 1e-4
    assert abs(th[np.argmin(nbar)] - th_min) < 1e-4


def test_theta_extrema_bound_everywhere():
    th = np.linspace(0.0, 2.0 * np.pi, 10_000, endpoint=False)
    for r in (0.0, 0.3, 0.9):
        vals = np.cosh(2 * r) * (1.5 - np.cos(th)) + np.sinh(2 * r) * np.sin(th) / np.sqrt(2) - 0.5
        th_max, th_min = theta_extrema(r)
        hi = mean_photon_number(ThetaParams(r, th_max))
        lo = mean_photon_number(ThetaParams(r, th_min))
        assert hi >= vals.max() - 1e-12
        assert lo <= vals.min() + 1e-12


def test_theta_extrema_limits():
    assert theta_extrema(0.0) == (pytest.approx(np.pi), pytest.approx(0.0, abs=1e-15))
    th_max_inf, _ = theta_extrema(2.9)
    assert th_max_inf == pytest.approx(np.pi - np.arctan(1.0 / np.sqrt(2.0)), abs=1e-4)


# ----------------------------------------------------------- squeezed θ states


def test_squeezed_theta_trivial_vacuum():
    v = squeezed_theta_fock(ThetaParams(0.0, 0.0), cutoff=10)
    expect = np.zeros(11)
    expect[0] = 1.0
    np.testing.assert_allclose(v.amps, expect, atol=1e-14)


def test_squeezed_theta_trivial_two_photon():
    v = squeezed_theta_fock(ThetaParams(0.0, np.pi), cutoff=10)
    assert v.amps[2] == pytest.approx(1.0, rel=1e-14)
    assert np.abs(np.delete(v.amps, 2)).max() < 1e-14


def test_squeezed_theta_parity_and_norm():
    for r, th in [(0.3, 0.7), (0.9, 3.0), (-0.5, 5.5), (1.0, np.pi)]:
        v = squeezed_theta_fock(ThetaParams(r, th), cutoff=100)
        assert np.abs(v.amps[1::2]).max() == 0.0
        assert v.norm() == pytest.approx(1.0, abs=1e-10)


def test_squeezed_theta_matches_squeeze_of_bare_superposition():
    r, th = 0.7, 2.1
    direct = squeezed_theta_fock(ThetaParams(r, th), cutoff=80)
    bare = np.zeros(3, dtype=complex)
    bare[0], bare[2] = np.cos(th / 2), np.sin(th / 2)
    via_matrix = squeeze_fock(FockVector(bare), r, cutoff=80)
    np.testing.assert_allclose(direct.amps, via_matrix.amps, atol=1e-10)


def test_squeezed_theta_truncation_error():
    with pytest.raises(TruncationError):
        squeezed_theta_fock(ThetaParams(1.0, np.pi), cutoff=10)


# ----------------------------------------------------------------- squeezing


def test_squeeze_matrix_against_expm():
    # same truncated generator, independent algorithm (Pade vs eigensolve)
    for r, dim in [(0.5, 160), (1.0, 120), (-0.8, 120)]:
        S = squeeze_matrix(r, dim)
        S_oracle = expm(squeeze_generator(r, dim))
        np.testing.assert_allclose(S, S_oracle, atol=1e-12)


def test_squeeze_matrix_orthogonal():
    S = squeeze_matrix(0.5, 160)
    np.testing.assert_allclose(S @ S.T, np.eye(160), atol=1e-12)


def test_squeezed_vacuum_amplitudes():
    r = 0.6
    v = squeeze_fock(FockVector(np.array([1.0 + 0j])), r, cutoff=60)
    n = np.arange(31)
    expect = (
        np.tanh(r) ** n
        * np.exp(0.5 * np.log(factorial(2 * n)) - n * np.log(2.0) - np.log(factorial(n)))
        / np.sqrt(np.cosh(r))
    )
    np.testing.assert_allclose(v.amps[0::2].real, expect, atol=1e-10)
    assert np.abs(v.amps[1::2]).max() == 0.0


def test_squeeze_sign_convention_position_width():
    # positive r must widen the position wavefunction: s = e^r
    r = 0.6
    s = np.exp(r)
    v = squeeze_fock(FockVector(np.array([1.0 + 0j])), r, cutoff=80)
    x = np.linspace(-4.0, 4.0, 41)
    psi = position_wavefunction(v, x)
    expect = np.pi**-0.25 * s**-0.5 * np.exp(-(x * x) / (2 * s * s))
    np.testing.assert_allclose(psi.real, expect, atol=1e-9)
    assert np.abs(psi.imag).max() < 1e-12


def test_squeeze_round_trip():
    rng = np.random.default_rng(11)
    amps = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi = FockVector(amps / np.linalg.norm(amps))
    # moderate squeezing: cutoff 100 holds the full state, exact recovery
    back = squeeze_fock(squeeze_fock(psi, 0.5, cutoff=100), -0.5, cutoff=100)
    np.testing.assert_allclose(back.amps[:4], psi.amps, atol=1e-12)
    assert np.abs(back.amps[4:]).max() < 1e-12
    # strong squeezing: the hard edge at 100 scatters ~1e-5 amplitude to the
    # caustic rows on the way back; the input support still recovers cleanly
    back1 = squeeze_fock(squeeze_fock(psi, 1.0, cutoff=100), -1.0, cutoff=100)
    np.testing.assert_allclose(back1.amps[:4], psi.amps, atol=1e-8)
    assert np.abs(back1.amps[4:]).max() < 5e-5


def test_squeeze_composition():
    rng = np.random.default_rng(3)
    amps = rng.normal(size=6) + 1j * rng.normal(size=6)
    psi = FockVector(amps / np.linalg.norm(amps))
    two_step = squeeze_fock(squeeze_fock(psi, 0.4, cutoff=120), 0.3, cutoff=120)
    one_step = squeeze_fock(psi, 0.7, cutoff=120)
    np.testing.assert_allclose(two_step.amps, one_step.amps, atol=1e-8)


def test_squeeze_identity_and_domain():
    psi = FockVector(np.array([0.6, 0.0, 0.8], dtype=complex))
    out = squeeze_fock(psi, 0.0)
    np.testing.assert_allclose(out.amps, psi.amps)
    with pytest.raises(DomainError):
        squeeze_fock(psi, 3.2)


def test_squeeze_preserves_parity():
    v = squeezed_theta_fock(ThetaParams(0.2, 1.0), cutoff=40)
    w = squeeze_fock(v, 0.5, cutoff=120)
    assert np.abs(w.amps[1::2]).max() < 1e-12


# ----------------------------------------------------------------- cat states


def test_cat_parity_support():
    v = cat_fock(CatTarget(1.0, "odd"), cutoff=30)
    assert v.amps[0] == 0.0
    assert np.abs(v.amps[0::2]).max() == 0.0
    assert v.norm() == pytest.approx(1.0, abs=1e-12)


def test_cat_vacuum_limit():
    v = cat_fock(CatTarget(0.0, "even"))
    assert v.amps[0] == pytest.approx(1.0)
    assert np.abs(v.amps[1:]).max() == 0.0


def test_cat_mean_photon_coth():
    a = 2.0
    v = cat_fock(CatTarget(a, "odd"))
    expect = a * a / np.tanh(a * a)
    # direct Fock-sum oracle over independently computed weights
    n = np.arange(1, 61, 2)
    w = a ** (2 * n) / factorial(n)
    w /= w.sum()
    assert v.mean_photon() == pytest.approx(float(n @ w), abs=1e-10)
    assert v.mean_photon() == pytest.approx(expect, abs=1e-10)


def test_cat_zero_alpha_odd_rejected():
    with pytest.raises(DomainError):
        CatTarget(0.0, "odd")


def test_cat_with_post_squeeze_matches_squeeze_fock():
    plain = cat_fock(CatTarget(1.5, "odd"), cutoff=40)
    squeezed = cat_fock(CatTarget(1.5, "odd", r_post=0.3), cutoff=80)
    via = squeeze_fock(plain, 0.3, cutoff=80)
    np.testing.assert_allclose(squeezed.amps, via.amps, atol=1e-9)


# ------------------------------------------------------------------- fidelity


def test_fidelity_self_and_orthogonal():
    v = squeezed_theta_fock(ThetaParams(0.4, 1.2), cutoff=60)
    assert fidelity(v, v) == pytest.approx(1.0, abs=1e-12)
    vac = FockVector(np.array([1.0 + 0j]))
    two = FockVector(np.array([0.0, 0.0, 1.0], dtype=complex))
    assert fidelity(vac, two) == 0.0


def test_fidelity_pads_and_handles_density_matrices():
    v = FockVector(np.array([1.0, 0.0, 1.0], dtype=complex) / np.sqrt(2))
    w = FockVector(np.array([1.0 + 0j]))
    assert fidelity(v, w) == pytest.approx(0.5, abs=1e-12)
    rho = FockDensityMatrix.from_pure(v)
    assert fidelity(rho, w) == pytest.approx(0.5, abs=1e-12)
    mixed = FockDensityMatrix(0.5 * np.eye(2, dtype=complex))
    assert fidelity(mixed, w) == pytest.approx(0.5, abs=1e-12)


# --------------------------------------------------------------------- wigner


def test_wigner_vacuum_and_single_photon():
    vac = FockVector(np.array([1.0 + 0j]))
    g = wigner(vac, np.linspace(-5, 5, 101), np.linspace(-5, 5, 101))
    i0 = 50
    assert g.values[i0, i0] == pytest.approx(1.0 / np.pi, rel=1e-12)
    one = FockVector(np.array([0.0, 1.0], dtype=complex))
    g1 = wigner(one, np.linspace(-5, 5, 101), np.linspace(-5, 5, 101))
    assert g1.values[i0, i0] == pytest.approx(-1.0 / np.pi, rel=1e-12)
    assert g.integral() == pytest.approx(1.0, abs=1e-3)
    assert g1.integral() == pytest.approx(1.0, abs=1e-3)


def test_wigner_odd_cat_probe_points():
    v = cat_fock(CatTarget(2.0, "odd"))
    lobe = 2.0 * np.sqrt(2.0)
    probes = [
        (0.0, 0.0),
        (lobe, 0.0),
        (-lobe, 0.0),
        (0.0, 0.55),
        (0.0, -0.55),
        (1.3, 0.7),
        (-0.8, -1.1),
        (2.0, 1.0),
        (0.5, 0.0),
    ]
    xs = np.array(sorted({p[0] for p in probes}))
    ps = np.array(sorted({p[1] for p in probes}))
    g = wigner(v, xs, ps)
    for x0, p0 in probes:
        i = int(np.searchsorted(xs, x0))
        j = int(np.searchsorted(ps, p0))
        assert g.values[i, j] == pytest.approx(
            oracle_wigner_point(v.amps, x0, p0), abs=1e-8
        )
    iz = int(np.searchsorted(xs, 0.0))
    jz = int(np.searchsorted(ps, 0.0))
    assert g.values[iz, jz] < 0.0
    assert g.values[int(np.searchsorted(xs, lobe)), jz] > 0.0
    assert g.values[int(np.searchsorted(xs, -lobe)), jz] > 0.0


def test_wigner_real_integral_and_parity():
    v = squeezed_theta_fock(ThetaParams(0.5, 2.0), cutoff=60)
    g = wigner(v)
    assert np.isrealobj(g.values)
    assert g.integral() == pytest.approx(1.0, abs=1e-3)
    # definite photon-number parity forces W(x,p) = W(-x,-p)
    np.testing.assert_allclose(g.values, g.values[::-1, ::-1], atol=1e-12)


def test_wigner_density_matrix_input():
    v = cat_fock(CatTarget(1.2, "even"))
    rho = FockDensityMatrix.from_pure(v)
    ax = np.linspace(-4, 4, 41)
    gv = wigner(v, ax, ax)
    gr = wigner(rho, ax, ax)
    np.testing.assert_allclose(gv.values, gr.values, atol=1e-12)


# ---------------------------------------------------------------- serialization


def test_fock_vector_json_round_trip():
    v = squeezed_theta_fock(ThetaParams(0.4, 1.0), cutoff=30)
    w = fock_vector_from_json(fock_vector_to_json(v))
    np.testing.assert_array_equal(v.amps, w.amps)


def test_density_matrix_json_round_trip():
    rho = FockDensityMatrix.from_pure(cat_fock(CatTarget(1.0, "odd"), cutoff=20))
    back = density_matrix_from_json(density_matrix_to_json(rho))
    np.testing.assert_array_equal(rho.mat, back.mat)


def test_wigner_csv_format():
    vac = FockVector(np.array([1.0 + 0j]))
    g = wigner(vac, np.linspace(-1, 1, 3), np.linspace(-1, 1, 3))
    buf = io.StringIO()
    wigner_to_csv(g, buf)
    lines = buf.getvalue().strip().split("\n")
    assert lines[0] == "x,p,w"
    assert len(lines) == 1 + 9
    first = lines[1].split(",")
    assert float(first[0]) == -1.0 and float(first[1]) == -1.0


def test_wrap_theta():
    assert wrap_theta(2 * np.pi) == 0.0
    assert wrap_theta(-np.pi) == pytest.approx(np.pi)
