"""Gibbs-state context and KMS geometry.

Builds the thermal state sigma_beta = exp(-beta H)/Z together with the
fractional powers every weighted quantity needs, and provides the KMS inner
product, chi-square divergence, superoperator matrices under the
column-stacking convention, detailed-balance residuals, spectral gaps, and
the chi-square based mixing-time upper bound.

Vectorization is column-stacking throughout: vec(X)[i + d*j] = X[i, j], so a
Kraus conjugation K rho K^dag acts as (conj(K) kron K) vec(rho).
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import (
    GapTooSmall,
    IllConditioned,
    NotDetailedBalanced,
    ShapeMismatch,
    SpectrumOutOfRange,
)
from .linalg import dagger
from .policy import DEFAULT_POLICY

__all__ = [
    "GibbsContext",
    "Superoperator",
    "make_gibbs_context",
    "kms_inner",
    "chi2_divergence",
    "vec",
    "unvec",
    "superop_matrix",
    "kms_symmetrized",
    "kms_db_residual",
    "spectral_gap",
    "mixing_time_upper",
    "trace_distance",
]

SIGMA_EXPONENTS = (0.5, -0.5, 0.25, -0.25, -1.0)


@dataclass(frozen=True)
class GibbsContext:
    """Thermal state of a Hamiltonian with precomputed fractional powers.

    sigma_pow holds sigma^p for p in {+1/2, -1/2, +1/4, -1/4, -1}; sigma_min
    is the smallest eigenvalue of sigma and governs the conditioning of every
    weighted norm downstream.
    """

    h: np.ndarray
    beta: float
    eig: linalg.HermEig
    sigma: np.ndarray
    sigma_pow: dict
    sigma_eigs: np.ndarray
    sigma_min: float
    h_norm: float
    conditioning_warning: bool = field(default=False)

    @property
    def dim(self):
        return self.h.shape[0]


def make_gibbs_context(h, beta, policy=DEFAULT_POLICY):
    """Construct the Gibbs state exp(-beta H)/Z and its fractional powers.

    Raises IllConditioned when the smallest sigma eigenvalue falls below
    ``policy.sigma_min_floor`` (there the inverse square root is meaningless
    in double precision); sets a warning flag below ``policy.sigma_min_warn``.
    """
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    eig = linalg.herm_eig(h, policy)
    d = eig.dim
    if d > 1024:
        raise ShapeMismatch(f"context dimension {d} exceeds the 1024 cap")
    # Shift by the ground energy before exponentiating to avoid overflow.
    energies = eig.eigenvalues
    weights = np.exp(-beta * (energies - energies.min()))
    p = weights / weights.sum()
    sigma_min = float(p.min())
    if sigma_min < policy.sigma_min_floor:
        raise IllConditioned(
            f"smallest Gibbs eigenvalue {sigma_min:.3e} below floor "
            f"{policy.sigma_min_floor:.0e}; refusing to build sigma^(-1/2)"
        )
    warn = sigma_min < policy.sigma_min_warn
    if warn:
        warnings.warn(
            f"Gibbs state nearly singular (sigma_min={sigma_min:.3e}); "
            "weighted norms may lose precision",
            RuntimeWarning,
            stacklevel=2,
        )
    sigma = eig.apply(p)
    sigma = (sigma + dagger(sigma)) / 2
    powers = {q: eig.apply(p**q) for q in SIGMA_EXPONENTS}
    return GibbsContext(
        h=linalg.as_matrix(h),
        beta=float(beta),
        eig=eig,
        sigma=sigma,
        sigma_pow=powers,
        sigma_eigs=p,
        sigma_min=sigma_min,
        h_norm=float(np.abs(energies).max()),
        conditioning_warning=warn,
    )


def kms_inner(x, y, ctx):
    """KMS inner product Tr(X^dag sigma^(1/2) Y sigma^(1/2))."""
    x = linalg.as_matrix(x)
    y = linalg.as_matrix(y)
    if x.shape != (ctx.dim, ctx.dim) or y.shape != (ctx.dim, ctx.dim):
        raise ShapeMismatch("operand shape does not match the context dimension")
    s = ctx.sigma_pow[0.5]
    return complex(np.trace(dagger(x) @ s @ y @ s))


def chi2_divergence(rho, ctx, check_state=True):
    """Chi-square divergence Tr(sigma^(-1/2) (rho-sigma) sigma^(-1/2) (rho-sigma))."""
    rho = linalg.as_matrix(rho)
    if rho.shape != ctx.sigma.shape:
        raise ShapeMismatch("state shape does not match the context dimension")
    if check_state:
        if abs(np.trace(rho) - 1) > 1e-10:
            raise ValueError(f"state trace {np.trace(rho)} is not 1")
        w = np.linalg.eigvalsh((rho + dagger(rho)) / 2)
        if w.min() < -1e-10:
            raise ValueError(f"state not PSD: eigenvalue {w.min():.3e}")
    s = ctx.sigma_pow[-0.5]
    delta = rho - ctx.sigma
    val = np.trace(s @ delta @ s @ delta).real
    return max(val, 0.0)


def vec(x):
    """Column-stacking vectorization."""
    return np.asarray(x, dtype=np.complex128).reshape(-1, order="F")


def unvec(v):
    d = int(round(np.sqrt(v.shape[0])))
    return v.reshape(d, d, order="F")


@dataclass(frozen=True)
class Superoperator:
    """Dense matrix of a linear map on operators, column-stacking convention."""

    dim: int
    matrix: np.ndarray

    def __call__(self, rho):
        return unvec(self.matrix @ vec(rho))


def _kraus_of(op):
    """Extract a list of (weight, kraus) pairs from the accepted map forms."""
    if hasattr(op, "kraus"):  # MeasurementChannel duck type
        return [(1.0, k) for k in op.kraus]
    if isinstance(op, np.ndarray):
        return None
    if isinstance(op, (list, tuple)):
        out = []
        for item in op:
            if isinstance(item, tuple):
                out.append((complex(item[0]), linalg.as_matrix(item[1])))
            else:
                out.append((1.0, linalg.as_matrix(item)))
        return out
    raise TypeError(f"cannot interpret {type(op).__name__} as a superoperator")


def superop_matrix(op):
    """Superoperator matrix of a Kraus map: sum_a w_a conj(K_a) kron K_a.

    Accepts a MeasurementChannel, a list of Kraus operators, a list of
    (weight, kraus) pairs, a raw d^2 x d^2 matrix, or a Superoperator.
    """
    if isinstance(op, Superoperator):
        return op
    if isinstance(op, np.ndarray):
        m = linalg.as_matrix(op)
        d = int(round(np.sqrt(m.shape[0])))
        if d * d != m.shape[0]:
            raise ShapeMismatch("matrix size is not a perfect square")
        return Superoperator(d, m)
    pairs = _kraus_of(op)
    d = pairs[0][1].shape[0]
    m = np.zeros((d * d, d * d), dtype=np.complex128)
    for w, k in pairs:
        if k.shape != (d, d):
            raise ShapeMismatch("Kraus operators must share one square dimension")
        m += w * np.kron(np.conj(k), k)
    return Superoperator(d, m)


def _gamma_half(ctx):
    """Gamma^(+1/2) and Gamma^(-1/2) for the KMS weight Gamma = conj(sigma^(1/2)) kron sigma^(1/2)."""
    sp = ctx.sigma_pow[0.25]
    sm = ctx.sigma_pow[-0.25]
    g_plus = np.kron(np.conj(sp), sp)
    g_minus = np.kron(np.conj(sm), sm)
    return g_plus, g_minus


def kms_symmetrized(op, ctx):
    """KMS-symmetrized superoperator S = Gamma^(-1/2) M Gamma^(1/2).

    S is Hermitian exactly when the map satisfies KMS detailed balance with
    respect to sigma_beta.
    """
    so = superop_matrix(op)
    if so.dim != ctx.dim:
        raise ShapeMismatch("superoperator dimension does not match the context")
    g_plus, g_minus = _gamma_half(ctx)
    return g_minus @ so.matrix @ g_plus


def kms_db_residual(op, ctx):
    """Relative asymmetry ||S - S^dag|| / ||S|| of the KMS-symmetrized map."""
    s = kms_symmetrized(op, ctx)
    denom = linalg.norm(s, "operator")
    if denom == 0:
        return 0.0
    return linalg.norm(s - dagger(s), "operator") / denom


def spectral_gap(op, ctx, policy=DEFAULT_POLICY):
    """Spectral gap of a detailed-balanced channel.

    Checks the detailed-balance residual first, then diagonalizes the
    Hermitian-symmetrized S = Gamma^(-1/2) M Gamma^(1/2) and returns one minus
    the second-largest eigenvalue, clipped into [0, 1]. Raises
    SpectrumOutOfRange when the spectrum leaves [0, 1] beyond
    ``policy.spectrum_slack``.
    """
    res = kms_db_residual(op, ctx)
    if res > policy.gap_db_tol:
        raise NotDetailedBalanced(f"detailed-balance residual {res:.3e}")
    s = kms_symmetrized(op, ctx)
    s = (s + dagger(s)) / 2
    evals = np.linalg.eigvalsh(s)
    lo, hi = float(evals[0]), float(evals[-1])
    if lo < -policy.spectrum_slack or hi > 1 + policy.spectrum_slack:
        raise SpectrumOutOfRange(f"eigenvalues span [{lo:.3e}, {hi:.3e}]")
    gap = 1.0 - float(evals[-2])
    return min(max(gap, 0.0), 1.0)


def mixing_time_upper(op, ctx, eps, policy=DEFAULT_POLICY):
    """Steps after which every state is within eps trace distance of sigma.

    Uses the chi-square contraction chi2(N^k rho) <= (1-gap)^(2k) chi2(rho)
    with the exact worst case over pure states chi2_max = 1/sigma_min - 1,
    yielding ceil((1/gap) log(sqrt(chi2_max)/eps)). A unit gap hits sigma in
    a single step.
    """
    gap = spectral_gap(op, ctx, policy)
    if gap <= policy.gap_floor:
        raise GapTooSmall(f"gap {gap:.3e} at or below floor {policy.gap_floor:.0e}")
    if gap >= 1 - 1e-12:
        return 1
    chi2_max = 1.0 / ctx.sigma_min - 1.0
    steps = np.ceil(np.log(np.sqrt(chi2_max) / eps) / gap)
    return max(int(steps), 1)


def trace_distance(a, b):
    """Trace-norm distance ||a - b||_1."""
    return linalg.norm(np.asarray(a) - np.asarray(b), "trace")
