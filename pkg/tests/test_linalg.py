import numpy as np
import pytest

from gibbsnd import linalg
from gibbsnd.errors import DomainError, NotHermitian, SeriesDiverges

from conftest import I2, Z, dag, random_hermitian


def test_herm_eig_identity():
    eig = linalg.herm_eig(I2)
    assert np.allclose(eig.eigenvalues, [1, 1])
    assert np.linalg.norm(eig.reconstruct() - I2) < 1e-14


def test_herm_eig_pauli_z_ascending():
    eig = linalg.herm_eig(Z)
    assert np.allclose(eig.eigenvalues, [-1, 1])


def test_herm_eig_reconstruction_residual(rng):
    # Oracle: rebuild V Lambda V^dag directly and compare in operator norm.
    a = random_hermitian(rng, 8, scale=3.0)
    eig = linalg.herm_eig(a)
    resid = np.linalg.norm(a - eig.reconstruct(), 2) / np.linalg.norm(a, 2)
    assert resid <= 1e-10
    v = eig.eigenvectors
    assert np.linalg.norm(dag(v) @ v - np.eye(8), 2) <= 1e-11


@pytest.mark.parametrize("d", [2, 16, 64, 256, 1024])
def test_herm_eig_residuals_across_dims(d):
    rng = np.random.default_rng(d)
    a = random_hermitian(rng, d, scale=2.0)
    eig = linalg.herm_eig(a)
    scale = np.linalg.norm(a, 2)
    assert np.linalg.norm(a - eig.reconstruct(), 2) <= 1e-10 * scale
    v = eig.eigenvectors
    assert np.linalg.norm(dag(v) @ v - np.eye(d), 2) <= 1e-11 * max(1, scale)


def test_herm_eig_rejects_non_hermitian(rng):
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    with pytest.raises(NotHermitian):
        linalg.herm_eig(a)


def test_herm_eig_deterministic(rng):
    a = random_hermitian(rng, 6)
    e1 = linalg.herm_eig(a)
    e2 = linalg.herm_eig(a.copy())
    assert np.array_equal(e1.eigenvalues, e2.eigenvalues)
    assert np.array_equal(e1.eigenvectors, e2.eigenvectors)


def test_matfun_exp_of_zero():
    assert np.allclose(linalg.matfun_herm(np.zeros((3, 3)), np.exp), np.eye(3))


def test_matfun_sqrt_diagonal():
    a = np.diag([4.0, 9.0]).astype(complex)
    assert np.allclose(linalg.matfun_herm(a, np.sqrt), np.diag([2.0, 3.0]))


def test_matfun_inverse_sqrt_of_gibbs_state():
    # Scalar oracle: sigma eigenvalues for H=Z, beta=1 are e^-1/Z and e^1/Z.
    z = np.exp(1) + np.exp(-1)
    sigma = np.diag([np.exp(-1) / z, np.exp(1) / z]).astype(complex)
    expect = np.diag([(np.exp(-1) / z) ** -0.5, (np.exp(1) / z) ** -0.5])
    got = linalg.matfun_herm(sigma, lambda x: x**-0.5)
    assert np.allclose(got, expect, atol=1e-12)


def test_matfun_exp_inverse_pair(rng):
    a = random_hermitian(rng, 6, scale=2.0)
    prod = linalg.matfun_herm(a, np.exp) @ linalg.matfun_herm(a, lambda x: np.exp(-x))
    assert np.linalg.norm(prod - np.eye(6), 2) <= 1e-9 * np.linalg.norm(prod, 2)


def test_matfun_domain_error():
    a = np.diag([1.0, -1.0]).astype(complex)
    with pytest.raises(DomainError):
        linalg.matfun_herm(a, np.sqrt)


def test_matfun_hermitian_output(rng):
    a = random_hermitian(rng, 5)
    out = linalg.matfun_herm(a, np.exp)
    assert np.linalg.norm(out - dag(out)) < 1e-12


def test_psd_sqrt_clips_roundoff():
    a = np.diag([1.0, -1e-12]).astype(complex)
    s = linalg.psd_sqrt(a)
    assert np.allclose(s, np.diag([1.0, 0.0]))
    with pytest.raises(DomainError):
        linalg.psd_sqrt(np.diag([1.0, -1e-6]).astype(complex))


def test_binom_half_values():
    c = linalg.binom_half(3)
    assert np.allclose(c, [1.0, 0.5, -0.125, 0.0625])


def test_taylor_sqrt_zero_matrix():
    out = linalg.taylor_matrix_sqrt(np.zeros((2, 2)), 1.0, 0)
    assert np.allclose(out, np.eye(2))


def test_taylor_sqrt_identity_argument():
    # Scalar oracle sqrt(1.5); tail bound (1/2)^41/(1-1/2) entrywise.
    out = linalg.taylor_matrix_sqrt(np.eye(2, dtype=complex), 0.5, 40)
    bound = 0.5**41 / 0.5
    assert np.max(np.abs(out - np.sqrt(1.5) * np.eye(2))) <= bound


def test_taylor_sqrt_square_residual_bound(rng):
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = 0.5 * b / np.linalg.norm(b, 2)
    for order in (3, 8, 15):
        p = linalg.taylor_matrix_sqrt(b, 1.0, order)
        r = np.linalg.norm(b, 2)
        resid = np.linalg.norm(p @ p - (np.eye(2) + b), 2)
        bound = 2 * r ** (order + 1) / (1 - r) * (2 - np.sqrt(1 - r))
        assert resid <= bound


def test_taylor_sqrt_geometric_decay():
    rng = np.random.default_rng(7)
    for _ in range(100):
        d = int(rng.integers(2, 5))
        b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        target = rng.uniform(0.1, 0.6)
        b = target * b / np.linalg.norm(b, 2)
        u = 1.0
        r = np.linalg.norm(b, 2)
        resid = []
        for order in (4, 8, 12):
            p = linalg.taylor_matrix_sqrt(b, u, order)
            resid.append(np.linalg.norm(p @ p - (np.eye(d) + b), 2))
        # Ratio over 4 extra orders must beat r^4 up to roundoff floor.
        if resid[1] > 1e-13:
            assert resid[1] / max(resid[0], 1e-300) <= r**4 * 1.5 + 1e-9
        if resid[2] > 1e-13:
            assert resid[2] / max(resid[1], 1e-300) <= r**4 * 1.5 + 1e-9


def test_taylor_sqrt_matches_matfun_for_hermitian(rng):
    b = random_hermitian(rng, 4, scale=0.5)
    order = 30
    r = np.linalg.norm(b, 2)
    p = linalg.taylor_matrix_sqrt(b, 1.0, order)
    exact = linalg.matfun_herm(np.eye(4) + b, np.sqrt)
    assert np.linalg.norm(p - exact, 2) <= r ** (order + 1) / (1 - r) + 1e-13


def test_taylor_sqrt_divergence_guard():
    with pytest.raises(SeriesDiverges):
        linalg.taylor_matrix_sqrt(np.eye(2, dtype=complex), 1.0, 5)


def test_taylor_sqrt_order_planner():
    for r in (0.1, 0.4, 0.6):
        for tol in (1e-6, 1e-12):
            k = linalg.taylor_sqrt_order(r, tol)
            assert r ** (k + 1) / (1 - r) <= tol
            if k > 0:
                assert r**k / (1 - r) > tol


def test_norms_identity_and_diag():
    assert linalg.norm(np.eye(5), "operator") == pytest.approx(1.0)
    assert linalg.norm(np.eye(5), "trace") == pytest.approx(5.0)
    d = np.diag([3.0, -4.0]).astype(complex)
    assert linalg.norm(d, "operator") == pytest.approx(4.0)
    assert linalg.norm(d, "trace") == pytest.approx(7.0)


def test_norm_ordering_random(rng):
    # SVD oracle: trace >= operator >= frobenius/sqrt(d).
    x = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    sv = np.linalg.svd(x, compute_uv=False)
    assert linalg.norm(x, "trace") == pytest.approx(sv.sum())
    assert linalg.norm(x, "operator") == pytest.approx(sv.max())
    assert linalg.norm(x, "trace") >= linalg.norm(x, "operator")
    assert linalg.norm(x, "operator") >= linalg.norm(x, "frobenius") / np.sqrt(6)


def test_policy_defaults_pinned():
    from gibbsnd.policy import DEFAULT_POLICY

    assert DEFAULT_POLICY.herm_tol == 1e-12
    assert DEFAULT_POLICY.recon_tol == 1e-10
    assert DEFAULT_POLICY.unitary_tol == 1e-11
    assert DEFAULT_POLICY.psd_clip == 1e-10
    assert DEFAULT_POLICY.tp_tol == 1e-8
    assert DEFAULT_POLICY.db_tol == 1e-7
    assert DEFAULT_POLICY.gap_db_tol == 1e-8
    assert DEFAULT_POLICY.sigma_min_floor == 1e-12
    assert DEFAULT_POLICY.sigma_min_warn == 1e-8
    assert DEFAULT_POLICY.prob_floor == 1e-12
    assert DEFAULT_POLICY.gap_floor == 1e-6
    assert DEFAULT_POLICY.var_floor == 1e-14
    assert DEFAULT_POLICY.tail_term_cutoff == 1e-18
    assert DEFAULT_POLICY.max_dim == 4096
    assert DEFAULT_POLICY.max_encoding_dim == 8192
