"""Dense complex linear algebra kernel.

Hermitian eigendecomposition, matrix functions through the spectral theorem,
operator/trace/Frobenius norms, and truncated binomial-series square roots
for non-Hermitian arguments. Everything operates on plain complex128 numpy
arrays in row-major storage; inputs are validated, never mutated.
"""

import numpy as np

from .errors import DomainError, NoConvergence, NotHermitian, SeriesDiverges, ShapeMismatch
from .policy import DEFAULT_POLICY

__all__ = [
    "HermEig",
    "as_matrix",
    "herm_eig",
    "matfun_herm",
    "psd_sqrt",
    "binom_half",
    "taylor_sqrt_order",
    "taylor_matrix_sqrt",
    "norm",
    "dagger",
]


def dagger(x):
    """Conjugate transpose."""
    return np.conj(np.swapaxes(np.asarray(x), -1, -2))


def as_matrix(x, square=True):
    """Validate and return a complex128 matrix (finite entries, 2-D)."""
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D array, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


class HermEig:
    """Eigendecomposition of a Hermitian matrix.

    Attributes
    ----------
    eigenvalues : real ndarray, ascending
    eigenvectors : unitary ndarray, eigenvectors as columns
    """

    __slots__ = ("eigenvalues", "eigenvectors")

    def __init__(self, eigenvalues, eigenvectors):
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)

    def apply(self, values):
        """Assemble V diag(values) V^dag for per-eigenvalue scalars ``values``."""
        v = self.eigenvectors
        return (v * np.asarray(values)) @ dagger(v)


def herm_eig(a, policy=DEFAULT_POLICY):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The input must be Hermitian within ``policy.herm_tol`` relative tolerance;
    it is symmetrized after the check so roundoff asymmetry cannot leak into
    the spectrum. Deterministic for identical input.
    """
    a = as_matrix(a)
    d = a.shape[0]
    if d > policy.max_dim:
        raise ShapeMismatch(f"dimension {d} exceeds the cap {policy.max_dim}")
    scale = np.linalg.norm(a)
    asym = np.linalg.norm(a - dagger(a))
    if scale > 0 and asym > policy.herm_tol * max(scale, 1.0):
        raise NotHermitian(f"relative symmetry residual {asym / scale:.3e}")
    a = (a + dagger(a)) / 2
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    return HermEig(w, v)


def matfun_herm(a, phi, policy=DEFAULT_POLICY):
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    Returns V phi(Lambda) V^dag. ``phi`` may be a ufunc or a scalar callable
    on the (real) eigenvalues; a non-finite value of phi at any eigenvalue
    raises DomainError.
    """
    eig = a if isinstance(a, HermEig) else herm_eig(a, policy)
    w = eig.eigenvalues
    with np.errstate(all="ignore"):
        try:
            fw = np.asarray(phi(w))
            if fw.shape != w.shape:
                raise TypeError
        except (TypeError, ValueError):
            fw = np.asarray([phi(x) for x in w])
    finite = np.isfinite(fw)
    if not np.all(finite):
        raise DomainError(f"function undefined at eigenvalue(s) {w[~finite][:3]}")
    return eig.apply(fw)


def psd_sqrt(a, clip=None, policy=DEFAULT_POLICY):
    """Square root of a PSD Hermitian matrix with roundoff repair.

    Eigenvalues in [-clip, 0) are clipped to zero; anything below -clip is a
    genuine domain violation and raises DomainError. Default clip is
    ``policy.psd_clip``.
    """
    if clip is None:
        clip = policy.psd_clip
    eig = a if isinstance(a, HermEig) else herm_eig(a, policy)
    w = eig.eigenvalues.copy()
    if np.any(w < -clip):
        raise DomainError(f"matrix not PSD: smallest eigenvalue {w.min():.3e}")
    np.clip(w, 0.0, None, out=w)
    return eig.apply(np.sqrt(w))


def binom_half(k_max):
    """Binomial coefficients binom(1/2, k) for k = 0..k_max."""
    c = np.empty(k_max + 1)
    c[0] = 1.0
    for k in range(1, k_max + 1):
        c[k] = c[k - 1] * (1.5 - k) / k
    return c


def taylor_sqrt_order(r, tol):
    """Smallest K with tail bound r^(K+1)/(1-r) <= tol for the sqrt series."""
    if not 0 <= r < 1:
        raise SeriesDiverges(f"series ratio r={r} outside [0, 1)")
    if r == 0:
        return 0
    k = 0
    tail = r / (1 - r)
    while tail > tol:
        k += 1
        tail *= r
        if k > 100_000:
            raise SeriesDiverges(f"no order reaches tolerance {tol} at r={r}")
    return k


def taylor_matrix_sqrt(b, u, order):
    """Truncated binomial series for sqrt(I + u B), valid for |u|·||B|| < 1.

    Evaluates P_K(uB) = sum_{k<=K} binom(1/2, k) (uB)^k by a Horner recursion
    so no intermediate powers are stored. The square of the result satisfies
    ||P_K(uB)^2 - (I + uB)|| <= 2 r^(K+1)/(1-r) (2 - sqrt(1-r)) with
    r = |u|·||B||.
    """
    b = as_matrix(b)
    r = abs(u) * norm(b, "operator")
    if r >= 1:
        raise SeriesDiverges(f"|u|·||B|| = {r:.6f} >= 1")
    coeff = binom_half(order)
    ub = u * b
    eye = np.eye(b.shape[0], dtype=np.complex128)
    p = coeff[order] * eye
    for k in range(order - 1, -1, -1):
        p = coeff[k] * eye + ub @ p
    return p


def norm(x, kind="operator"):
    """Matrix norm: largest singular value, sum of singular values, or Frobenius."""
    x = as_matrix(x, square=False)
    if kind == "operator":
        return float(np.linalg.norm(x, 2))
    if kind == "trace":
        return float(np.linalg.norm(x, "nuc"))
    if kind == "frobenius":
        return float(np.linalg.norm(x))
    raise ValueError(f"unknown norm kind {kind!r}")
