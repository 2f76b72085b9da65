import numpy as np
import pytest

from gibbsnd import filters
from gibbsnd.errors import AliasRegimeViolated
from gibbsnd.filters import (
    FilterSpec,
    QuadratureGrid,
    bandlimit,
    bandlimit_tail_envelope,
    filter_fourier,
    filter_time,
    filtered_exact,
    filtered_quadrature,
    imaginary_shift,
    l1_norm,
    quadrature_error_bound,
    smooth_cutoff,
)
from gibbsnd.gibbs import make_gibbs_context

from conftest import X, Z, dag, random_hermitian


def test_fourier_normalization_at_zero():
    assert filter_fourier(FilterSpec.gaussian(1.7), 0.0) == pytest.approx(1.0)
    assert filter_fourier(FilterSpec.shifted_gaussian(1.0, -0.5), 0.0) == pytest.approx(1.0)


def test_fourier_gaussian_point_value():
    assert filter_fourier(FilterSpec.gaussian(1.0), 2.0) == pytest.approx(np.exp(-2.0))


def test_fourier_shifted_matches_product_form():
    # Completed-square form against the direct product exp(-s w) exp(-t^2 w^2/2)
    # on 100 sample points.
    spec = FilterSpec.shifted_gaussian(1.3, -0.8)
    omegas = np.linspace(-4, 4, 100)
    direct = np.exp(-spec.shift_s * omegas) * np.exp(-0.5 * spec.tau**2 * omegas**2)
    assert np.max(np.abs(filter_fourier(spec, omegas) - direct)) < 1e-12


def test_l1_norms():
    beta = 0.9
    assert l1_norm(FilterSpec.gaussian(2.3)) == pytest.approx(1.0)
    assert l1_norm(FilterSpec.shifted_gaussian(beta, -beta / 2)) == pytest.approx(np.exp(1 / 8))
    assert l1_norm(FilterSpec.shifted_gaussian(4 * beta, -beta / 2)) == pytest.approx(
        np.exp(1 / 128)
    )


def test_time_domain_l1_numerically():
    spec = FilterSpec.shifted_gaussian(1.1, -0.7)
    ts = np.linspace(-15, 15, 40001)
    approx = np.trapezoid(np.abs(filter_time(spec, ts)), ts)
    assert approx == pytest.approx(l1_norm(spec), rel=1e-8)


def test_filtered_exact_commuting_case(rng):
    ctx = make_gibbs_context(Z, 1.0)
    a = np.diag(rng.standard_normal(2)).astype(complex)
    out = filtered_exact(a, ctx, FilterSpec.gaussian(1.5))
    assert np.allclose(out, a)


@pytest.mark.parametrize("tau", [0.5, 1.0, 2.0])
def test_filtered_exact_pauli_pair(tau):
    # Bohr frequencies of X under H=Z are +/-2, so A_f = exp(-2 tau^2) X.
    ctx = make_gibbs_context(Z, 1.0)
    out = filtered_exact(X, ctx, FilterSpec.gaussian(tau))
    assert np.allclose(out, np.exp(-2 * tau**2) * X, atol=1e-14)


def test_filtered_exact_vs_fine_quadrature():
    # Independent oracle: brute-force time quadrature with dt=1e-3, T=10 tau.
    ctx = make_gibbs_context(Z, 1.0)
    spec = FilterSpec.gaussian(1.0)
    exact = filtered_exact(X, ctx, spec)
    fine = filtered_quadrature(X, Z, spec, QuadratureGrid(10.0, 20000))
    assert np.linalg.norm(exact - fine, 2) < 1e-9


def test_filtered_exact_pinching_limit(rng):
    ctx = make_gibbs_context(Z, 1.0)
    a = random_hermitian(rng, 2)
    out = filtered_exact(a, ctx, FilterSpec.gaussian(50.0))
    pinched = np.diag(np.diag(a))
    assert np.linalg.norm(out - pinched, 2) <= 1e-8


def test_filtered_preserves_thermal_expectation(rng):
    for _ in range(20):
        d = int(rng.integers(2, 6))
        ctx = make_gibbs_context(random_hermitian(rng, d), rng.uniform(0, 2))
        a = random_hermitian(rng, d)
        tau = rng.uniform(0.3, 3.0)
        for spec in (
            FilterSpec.gaussian(tau),
            FilterSpec.shifted_gaussian(tau, -ctx.beta / 2),
        ):
            af = filtered_exact(a, ctx, spec)
            diff = abs(np.trace(ctx.sigma @ af) - np.trace(ctx.sigma @ a))
            assert diff <= 1e-10


def test_filtered_hermiticity(rng):
    ctx = make_gibbs_context(random_hermitian(rng, 3), 1.0)
    a = random_hermitian(rng, 3)
    af = filtered_exact(a, ctx, FilterSpec.gaussian(1.0))
    assert np.linalg.norm(af - dag(af), 2) < 1e-13
    aft = filtered_exact(a, ctx, FilterSpec.shifted_gaussian(1.0, -0.5))
    assert np.linalg.norm(aft - dag(aft), 2) > 1e-6


def test_filtered_norm_bounds(rng):
    for _ in range(50):
        d = int(rng.integers(2, 5))
        beta = rng.uniform(0.2, 2.0)
        tau = rng.uniform(0.5, 2.0) * beta
        ctx = make_gibbs_context(random_hermitian(rng, d), beta)
        a = random_hermitian(rng, d)
        na = np.linalg.norm(a, 2)
        af = filtered_exact(a, ctx, FilterSpec.gaussian(tau))
        assert np.linalg.norm(af, 2) <= na + 1e-12
        aft = filtered_exact(a, ctx, FilterSpec.shifted_gaussian(tau, -beta / 2))
        assert np.linalg.norm(aft, 2) <= np.exp(beta**2 / (8 * tau**2)) * na + 1e-10


def test_quadrature_commuting_prefactor(rng):
    spec = FilterSpec.gaussian(1.0)
    a = np.diag(rng.standard_normal(2)).astype(complex)
    grid = QuadratureGrid(6.0, 128)
    out = filtered_quadrature(a, Z, spec, grid)
    prefactor = grid.dt * np.sum(filter_time(spec, grid.times))
    assert np.allclose(out, prefactor * a, atol=1e-12)
    assert prefactor == pytest.approx(1.0, abs=1e-6)


def test_quadrature_error_vs_bound():
    ctx = make_gibbs_context(Z, 1.0)
    spec = FilterSpec.gaussian(1.0)
    grid = QuadratureGrid(8.0, 256)
    approx = filtered_quadrature(X, Z, spec, grid)
    bound = quadrature_error_bound(spec, grid, ctx.h_norm)
    assert np.linalg.norm(approx - np.exp(-2) * X, 2) <= bound


def test_quadrature_bound_holds_on_coarse_grid():
    ctx = make_gibbs_context(Z, 1.0)
    spec = FilterSpec.gaussian(1.0)
    grid = QuadratureGrid(0.5, 2)
    approx = filtered_quadrature(X, Z, spec, grid)
    exact = filtered_exact(X, ctx, spec)
    bound = quadrature_error_bound(spec, grid, ctx.h_norm)
    assert np.linalg.norm(approx - exact, 2) <= bound


def test_quadrature_bound_fine_grid_small():
    spec = FilterSpec.gaussian(1.0)
    bound = quadrature_error_bound(spec, QuadratureGrid(12.0, 4096), 1.0)
    assert bound < 1e-12


def test_quadrature_bound_monotone_in_dt():
    spec = FilterSpec.gaussian(1.0)
    b_coarse = quadrature_error_bound(spec, QuadratureGrid(8.0, 16), 1.0)
    b_fine = quadrature_error_bound(spec, QuadratureGrid(8.0, 64), 1.0)
    assert b_coarse > b_fine


def test_quadrature_alias_regime_guard():
    spec = FilterSpec.gaussian(1.0)
    with pytest.raises(AliasRegimeViolated):
        quadrature_error_bound(spec, QuadratureGrid(8.0, 2), 1.0)


def test_imaginary_shift_identity_at_zero(rng):
    ctx = make_gibbs_context(random_hermitian(rng, 3), 1.0)
    a = random_hermitian(rng, 3)
    assert np.allclose(imaginary_shift(a, 0.0, ctx), a)


def test_imaginary_shift_dual_path(rng):
    # Both sides computed independently: conjugation by exp(sH) of the
    # Gaussian-filtered observable against direct filtering by the shifted spec.
    for _ in range(10):
        d = int(rng.integers(2, 5))
        beta = rng.uniform(0.3, 1.5)
        tau = rng.uniform(0.8, 2.0)
        s = rng.uniform(-1.0, 1.0)
        ctx = make_gibbs_context(random_hermitian(rng, d), beta)
        a = random_hermitian(rng, d)
        af = filtered_exact(a, ctx, FilterSpec.gaussian(tau))
        lhs = imaginary_shift(af, s, ctx)
        rhs = filtered_exact(a, ctx, FilterSpec.shifted_gaussian(tau, s))
        assert np.linalg.norm(lhs - rhs, 2) <= 1e-9


def test_imaginary_shift_sigma_conjugation(rng):
    # s = -beta/2 realizes sigma^(1/2) A_f sigma^(-1/2).
    d = 3
    beta = 1.0
    ctx = make_gibbs_context(random_hermitian(rng, d), beta)
    a = random_hermitian(rng, d)
    af = filtered_exact(a, ctx, FilterSpec.gaussian(2.0))
    conj = ctx.sigma_pow[0.5] @ af @ ctx.sigma_pow[-0.5]
    shifted = filtered_exact(a, ctx, FilterSpec.shifted_gaussian(2.0, -beta / 2))
    assert np.linalg.norm(conj - shifted, 2) <= 1e-9


def test_imaginary_shift_warns_when_ill_scaled():
    ctx = make_gibbs_context(10.0 * Z, 0.1)
    with pytest.warns(RuntimeWarning):
        imaginary_shift(X, 1.0, ctx)


def test_smooth_cutoff_shape():
    assert smooth_cutoff(0.0) == 1.0
    assert smooth_cutoff(0.5) == 1.0
    assert smooth_cutoff(-0.3) == 1.0
    assert smooth_cutoff(1.0) == 0.0
    assert smooth_cutoff(-2.0) == 0.0
    assert smooth_cutoff(0.75) == pytest.approx(0.5, abs=1e-12)
    vals = [smooth_cutoff(x) for x in np.linspace(0.5, 1.0, 30)]
    assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))


def test_bandlimit_plateau_recovers_filtered(rng):
    ctx = make_gibbs_context(Z, 1.0)
    a = random_hermitian(rng, 2)
    spec = FilterSpec.gaussian(1.0)
    exact = filtered_exact(a, ctx, spec)
    sharp = bandlimit(a, ctx, spec, 2 * ctx.h_norm + 0.5, cutoff="sharp")
    assert np.allclose(sharp, exact, atol=1e-14)
    smooth = bandlimit(a, ctx, spec, 4 * ctx.h_norm + 0.5, cutoff="smooth")
    assert np.allclose(smooth, exact, atol=1e-13)


def test_bandlimit_excludes_all_off_diagonals():
    ctx = make_gibbs_context(Z, 1.0)
    out = bandlimit(X, ctx, FilterSpec.gaussian(1.0), 1.0, cutoff="sharp")
    assert np.linalg.norm(out, 2) <= 1e-14  # X has no energy-diagonal part


def test_bandlimit_support_certified(rng):
    d = 4
    ctx = make_gibbs_context(random_hermitian(rng, d, scale=2.0), 1.0)
    a = random_hermitian(rng, d)
    omega0 = 1.0
    for cutoff in ("sharp", "smooth"):
        out = bandlimit(a, ctx, FilterSpec.gaussian(1.0), omega0, cutoff=cutoff)
        v = ctx.eig.eigenvectors
        b = dag(v) @ out @ v
        e = ctx.eig.eigenvalues
        nu = np.abs(e[None, :] - e[:, None])
        assert np.max(np.abs(b[nu >= omega0])) <= 1e-14


def test_bandlimit_error_follows_envelope(rng):
    # The measured truncation error must sit below a single calibrated
    # multiple of the envelope across the sweep; constant frozen at 4.0
    # after measuring instances of this family.
    ctx = make_gibbs_context(random_hermitian(rng, 4, scale=1.0), 1.0)
    a = random_hermitian(rng, 4)
    for spec in (FilterSpec.gaussian(1.5), FilterSpec.shifted_gaussian(1.5, -0.5)):
        exact = filtered_exact(a, ctx, spec)
        for omega0 in (0.5, 1.0, 1.5, 2.0):
            out = bandlimit(a, ctx, spec, omega0, cutoff="smooth")
            measured = np.linalg.norm(exact - out, 2)
            assert measured <= 4.0 * bandlimit_tail_envelope(spec, omega0)
