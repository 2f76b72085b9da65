"""Explicit-matrix block-encoding calculus.

A block encoding is a unitary whose top-left system block, rescaled by
alpha, approximates a target matrix to declared error eps using b ancilla
qubits. Ancillas are always the leading tensor factor and the all-zeros
ancilla state is index 0, so extraction is literally the top-left block.

Compositions implemented with exact parameter tracking:

* products on disjoint ancilla registers,
* linear combinations through prepare/select,
* filtered observables as a linear combination of Heisenberg-conjugated
  encodings over a time grid,
* truncated binomial-series square roots c sqrt(I + uB) as a combination of
  matrix powers.

The module also certifies quasi-locality in energy (vanishing matrix
elements beyond a Bohr-frequency window) for completion-branch operands,
including the band-limited series construction that keeps the window
support exact.
"""

import json
from dataclasses import dataclass, replace

import numpy as np

from . import filters, linalg
from .errors import (
    DegenerateCoefficients,
    NormTooLarge,
    ParameterOutOfRange,
    SeriesDiverges,
    ShapeMismatch,
    TooLarge,
)
from .linalg import dagger
from .policy import DEFAULT_POLICY

__all__ = [
    "BlockEncoding",
    "dilate",
    "extract",
    "be_identity",
    "be_product",
    "be_lcu",
    "be_filtered",
    "be_taylor_sqrt",
    "poly_sqrt_degree",
    "quasi_local_truncate",
    "band_support_excess",
    "PrecheckReport",
    "completion_precheck",
]

DILATION_EPS = 1e-12  # roundoff allowance declared by exact dilations


@dataclass(frozen=True)
class BlockEncoding:
    """Unitary with declared (alpha, b, eps) encoding a target_dim matrix."""

    unitary: np.ndarray
    alpha: float
    ancillas: int
    eps: float
    target_dim: int

    def __post_init__(self):
        u = self.unitary
        dim = u.shape[0]
        if dim != (1 << self.ancillas) * self.target_dim:
            raise ShapeMismatch(
                f"unitary size {dim} is not 2^{self.ancillas} * {self.target_dim}"
            )
        resid = linalg.norm(u @ dagger(u) - np.eye(dim), "operator")
        if resid > 1e-9:
            raise ShapeMismatch(f"unitarity residual {resid:.3e} exceeds 1e-9")

    @property
    def total_dim(self):
        return self.unitary.shape[0]


def extract(be):
    """Encoded matrix alpha * (<0|⊗I) U (|0>⊗I): the rescaled top-left block."""
    d = be.target_dim
    return be.alpha * be.unitary[:d, :d]


def be_identity(d):
    """Ancilla-free exact encoding of the identity."""
    return BlockEncoding(np.eye(d, dtype=np.complex128), 1.0, 0, 0.0, d)


def dilate(c, policy=DEFAULT_POLICY):
    """One-ancilla exact block encoding of a contraction via unitary completion.

    U = [[C, sqrt(I - C C^dag)], [sqrt(I - C^dag C), -C^dag]], assembled from
    one singular value decomposition so the off-diagonal blocks cancel
    exactly even at singular values equal to one. Operator norms up to
    1 + 1e-10 are clipped back to the unit ball; anything larger is
    rejected.
    """
    c = linalg.as_matrix(c)
    nrm = linalg.norm(c, "operator")
    if nrm > 1 + 1e-10:
        raise NormTooLarge(f"||C|| = {nrm:.6e} exceeds 1")
    d = c.shape[0]
    u_l, sing, v_h = np.linalg.svd(c)
    clip_excess = max(float(sing.max(initial=0.0)) - 1.0, 0.0)
    sing = np.clip(sing, 0.0, 1.0)
    comp = np.sqrt(1.0 - sing**2)
    top_left = (u_l * sing) @ v_h
    left = (u_l * comp) @ dagger(u_l)
    right = (dagger(v_h) * comp) @ v_h
    u = np.block([[top_left, left], [right, -dagger(top_left)]])
    return BlockEncoding(u, 1.0, 1, DILATION_EPS + clip_excess, d)


def _embed(u_j, anc_dims, j, d):
    """Embed U_j (acting on ancilla block j and the system) into the full space.

    Full space order: (anc_{M-1} ⊗ ... ⊗ anc_0) ⊗ sys. The embedding
    conjugates kron(I_rest, U_j) by the axis permutation that moves ancilla
    block j next to the system.
    """
    m = len(anc_dims)
    total_anc = int(np.prod(anc_dims))
    rest = total_anc // anc_dims[j]
    k = np.kron(np.eye(rest), u_j)
    if j == 0:
        return k
    dims = [anc_dims[m - 1 - i] for i in range(m)] + [d]
    src_axis = m - 1 - j
    perm = np.moveaxis(np.arange(total_anc * d).reshape(dims), src_axis, m - 1).ravel()
    qinv = np.argsort(perm)
    return k[np.ix_(qinv, qinv)]


def be_product(bes, policy=DEFAULT_POLICY):
    """Product of block encodings on disjoint ancilla registers.

    With inputs encoding A_0, ..., A_{M-1} (in list order of application) the
    result encodes A_{M-1} ... A_1 A_0 with parameters (prod alpha_j,
    sum b_j, prod(alpha_j + eps_j) - prod alpha_j).
    """
    bes = list(bes)
    d = bes[0].target_dim
    if any(be.target_dim != d for be in bes):
        raise ShapeMismatch("product factors must share the target dimension")
    anc_dims = [1 << be.ancillas for be in bes]
    total = int(np.prod(anc_dims)) * d
    if total > policy.max_encoding_dim:
        raise TooLarge(f"composite dimension {total} exceeds {policy.max_encoding_dim}")
    u = np.eye(total, dtype=np.complex128)
    for j, be in enumerate(bes):
        u = _embed(be.unitary, anc_dims, j, d) @ u
    alpha = float(np.prod([be.alpha for be in bes]))
    eps = float(np.prod([be.alpha + be.eps for be in bes]) - alpha)
    b = sum(be.ancillas for be in bes)
    return BlockEncoding(u, alpha, b, eps, d)


def _householder_prep(v):
    """Unitary sending e_0 to the given unit vector (real nonnegative entries)."""
    n = v.shape[0]
    e0 = np.zeros(n)
    e0[0] = 1.0
    w = e0 - v
    nw2 = np.dot(w, w)
    if nw2 < 1e-30:
        return np.eye(n, dtype=np.complex128)
    h = np.eye(n) - 2.0 * np.outer(w, w) / nw2
    return h.astype(np.complex128)


def be_lcu(bes, coeffs, policy=DEFAULT_POLICY):
    """Linear combination sum_j c_j A_j through prepare/select.

    Declared parameters (gamma, m + b, sum |c_j| eps_j) with
    gamma = sum |c_j| alpha_j; the prepare state carries sqrt(|c_j| alpha_j /
    gamma) amplitudes and coefficient phases sit in the select unitary.
    """
    bes = list(bes)
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if len(bes) != coeffs.size:
        raise ShapeMismatch("one coefficient per encoding required")
    d = bes[0].target_dim
    if any(be.target_dim != d for be in bes):
        raise ShapeMismatch("combination terms must share the target dimension")
    weights = np.abs(coeffs) * np.array([be.alpha for be in bes])
    gamma = float(weights.sum())
    if gamma <= 0:
        raise DegenerateCoefficients("all coefficients vanish")
    n_terms = len(bes)
    b = max(be.ancillas for be in bes)
    m = max(int(np.ceil(np.log2(n_terms))), 0) if n_terms > 1 else 0
    slots = 1 << m
    anc_dim = 1 << b
    block = anc_dim * d
    total = slots * block
    if total > policy.max_encoding_dim:
        raise TooLarge(f"composite dimension {total} exceeds {policy.max_encoding_dim}")

    amps = np.zeros(slots)
    amps[:n_terms] = np.sqrt(weights / gamma)
    u_prep = _householder_prep(amps)

    sel = np.zeros((total, total), dtype=np.complex128)
    phases = np.exp(1j * np.angle(coeffs))
    for j in range(slots):
        sl = slice(j * block, (j + 1) * block)
        if j < n_terms:
            padded = np.kron(np.eye(1 << (b - bes[j].ancillas)), bes[j].unitary)
            sel[sl, sl] = phases[j] * padded
        else:
            sel[sl, sl] = np.eye(block)

    wide_prep = np.kron(u_prep, np.eye(block))
    w = dagger(wide_prep) @ sel @ wide_prep
    eps = float(np.dot(np.abs(coeffs), [be.eps for be in bes]))
    return BlockEncoding(w, gamma, m + b, eps, d)


def be_filtered(a_be, h, spec, grid, policy=DEFAULT_POLICY):
    """Block encoding of the quadrature-filtered observable.

    Conjugates the input encoding by e^{iHt_j} on the system register at
    every grid time and combines with coefficients dt * g(t_j). The declared
    error adds the rigorous quadrature bound to the propagated encoding
    error, so extraction is certified against the exact filtered observable.
    """
    h = linalg.as_matrix(h)
    d = a_be.target_dim
    if h.shape != (d, d):
        raise ShapeMismatch("Hamiltonian dimension does not match the encoding")
    eig = linalg.herm_eig(h, policy)
    h_norm = float(np.abs(eig.eigenvalues).max())
    quad_bound = filters.quadrature_error_bound(spec, grid, h_norm, policy)

    anc_dim = 1 << a_be.ancillas
    terms, coeffs = [], []
    for t in grid.times:
        phase = eig.apply(np.exp(1j * eig.eigenvalues * t))
        conj = np.kron(np.eye(anc_dim), phase)
        w_j = conj @ a_be.unitary @ dagger(conj)
        terms.append(replace(a_be, unitary=w_j))
        coeffs.append(grid.dt * filters.filter_time(spec, t))
    combo = be_lcu(terms, coeffs, policy)
    return replace(combo, eps=combo.eps + quad_bound)


def be_taylor_sqrt(b_be, u, c, order, policy=DEFAULT_POLICY):
    """Encoding of c sqrt(I + uB) by combining encoded powers of B.

    Valid for r = |u| alpha <= 1/2 and |u| (alpha + eps) < 1. Declared
    normalization is the exact partial sum c sum_k |binom(1/2,k)| r^k, at
    most c (2 - sqrt(1-r)); the declared error adds the series truncation
    tail c r^(order+1)/(1-r) to the propagated power-encoding errors.
    """
    r = abs(u) * b_be.alpha
    if r > 0.5 + 1e-12:
        raise SeriesDiverges(f"|u| alpha = {r:.4f} exceeds 1/2")
    if abs(u) * (b_be.alpha + b_be.eps) >= 1:
        raise SeriesDiverges("|u| (alpha + eps) must stay below 1")
    coeff = linalg.binom_half(order)
    terms = [be_identity(b_be.target_dim)]
    for k in range(1, order + 1):
        terms.append(be_product([b_be] * k, policy))
    weights = [c * coeff[k] * u**k for k in range(order + 1)]
    combo = be_lcu(terms, weights, policy)
    truncation = c * r ** (order + 1) / (1 - r) if r > 0 else 0.0
    return replace(combo, eps=combo.eps + truncation)


def poly_sqrt_degree(r, eps_prime, c=0.25):
    """Smallest truncation degree with sup error at most eps_prime on [-1, 1].

    The target is c sqrt(1 + r x); the degree is found by explicit summation
    of the coefficient tail c sum_{k>d} |binom(1/2,k)| r^k. Returns the
    degree together with the truncated polynomial coefficients in x.
    """
    if not 0 < r <= 0.5:
        raise ParameterOutOfRange(f"series ratio r = {r} outside (0, 1/2]")
    if not 0 < eps_prime <= 0.125:
        raise ParameterOutOfRange(f"eps_prime = {eps_prime} outside (0, 1/8]")
    terms = [c]
    k = 1
    b = 1.0
    while True:
        b *= (1.5 - k) / k
        term = c * abs(b) * r**k
        terms.append(term)
        if term < 1e-22 and k > 4:
            break
        k += 1
    suffix = np.cumsum(terms[::-1])[::-1]
    degree = None
    for deg in range(len(terms)):
        tail = suffix[deg + 1] if deg + 1 < len(terms) else 0.0
        if tail <= eps_prime:
            degree = deg
            break
    coeffs = c * linalg.binom_half(degree) * r ** np.arange(degree + 1)
    return degree, coeffs


def _masked(b, nu, omega):
    out = b.copy()
    out[np.abs(nu) >= omega] = 0.0
    return out


def quasi_local_truncate(o, ctx, omega, provenance=None, cutoff="smooth"):
    """Best-effort window truncation of an operator in energy.

    Without provenance, the energy-basis matrix elements at Bohr frequencies
    |nu| >= omega are zeroed directly. With provenance (the construction
    parameters a, u, c, tau, k of a jump-branch occupancy operator
    c^2 (I + u A_f) + c^2 X^dag X), the truncation instead band-limits both
    filtered observables at omega/(2k) and squares the degree-k series, which
    keeps the window support exact by construction. Returns the truncated
    operator and the operator-norm residual against the input.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    o = linalg.as_matrix(o)
    v = ctx.eig.eigenvectors
    energies = ctx.eig.eigenvalues
    nu = energies[None, :] - energies[:, None]
    if provenance is None:
        b = dagger(v) @ o @ v
        if not np.any((np.abs(nu) >= omega) & (np.abs(b) > 0)):
            return o, 0.0  # every populated Bohr frequency sits inside the window
        b = _masked(b, nu, omega)
        o_tilde = v @ b @ dagger(v)
        return o_tilde, linalg.norm(o - o_tilde, "operator")

    a = linalg.as_matrix(provenance["a"])
    u, c, tau, k = (provenance[key] for key in ("u", "c", "tau", "k"))
    omega0 = omega / (2 * k)
    f_spec = filters.FilterSpec.gaussian(tau)
    ft_spec = filters.FilterSpec.shifted_gaussian(tau, -ctx.beta / 2)
    af_b = dagger(v) @ filters.bandlimit(a, ctx, f_spec, omega0, cutoff) @ v
    aft_b = dagger(v) @ filters.bandlimit(a, ctx, ft_spec, omega0, cutoff) @ v
    # Re-zero the windows so products carry exact zeros.
    af_b = _masked(af_b, nu, omega0)
    aft_b = _masked(aft_b, nu, omega0)
    coeff = linalg.binom_half(k)
    eye = np.eye(ctx.dim)
    pk = coeff[k] * eye
    for j in range(k - 1, -1, -1):
        pk = coeff[j] * eye + (u * aft_b) @ pk
    b_tilde = c**2 * (eye + u * af_b) + c**2 * dagger(pk) @ pk
    o_tilde = v @ b_tilde @ dagger(v)
    return o_tilde, linalg.norm(o - o_tilde, "operator")


def band_support_excess(x, ctx, omega):
    """Largest energy-basis matrix element at Bohr frequencies |nu| >= omega."""
    v = ctx.eig.eigenvectors
    energies = ctx.eig.eigenvalues
    b = dagger(v) @ linalg.as_matrix(x) @ v
    nu = np.abs(energies[None, :] - energies[:, None])
    outside = np.abs(b)[nu >= omega]
    return float(outside.max()) if outside.size else 0.0


@dataclass(frozen=True)
class PrecheckReport:
    """Implementability report for a completion-branch operand."""

    s: int
    omega: float
    eps_prime: float
    norm_value: float
    norm_limit: float
    norm_pass: bool
    ql_residual: float
    ql_limit: float
    ql_pass: bool

    @property
    def ok(self):
        return self.norm_pass and self.ql_pass

    def to_json(self, indent=None):
        doc = {
            "s": self.s,
            "omega": self.omega,
            "eps_prime": self.eps_prime,
            "norm": {
                "value": self.norm_value,
                "limit": self.norm_limit,
                "margin": self.norm_limit - self.norm_value,
                "pass": self.norm_pass,
            },
            "quasi_locality": {
                "residual": self.ql_residual,
                "limit": self.ql_limit,
                "margin": self.ql_limit - self.ql_residual,
                "pass": self.ql_pass,
            },
            "pass": self.ok,
        }
        return json.dumps(doc, indent=indent, sort_keys=True)


def completion_precheck(o, ctx, eps):
    """Check the norm and energy-window preconditions for implementing the
    completion branch from an occupancy operand, without building anything.

    Fixed constant choices: s = ceil(log(2 + beta ||H||)), window
    omega = 1 / (10 floor(log2(1/eps))), target residual
    eps / (s^2 log2(1/eps)^2). Report only; never raises on failure.
    """
    if not 0 < eps <= 0.25:
        raise ParameterOutOfRange(f"eps = {eps} outside (0, 1/4]")
    o = linalg.as_matrix(o)
    s = int(np.ceil(np.log(2 + ctx.beta * ctx.h_norm)))
    s = max(s, 1)
    omega = 1.0 / (10 * int(np.floor(np.log2(1 / eps))))
    eps_prime = eps / (s**2 * max(1.0, np.log2(1 / eps)) ** 2)
    norm_value = linalg.norm(o, "operator")
    norm_limit = 1e-3 / s**2
    _, ql_residual = quasi_local_truncate(o, ctx, omega)
    return PrecheckReport(
        s=s,
        omega=omega,
        eps_prime=eps_prime,
        norm_value=norm_value,
        norm_limit=norm_limit,
        norm_pass=bool(norm_value <= norm_limit),
        ql_residual=ql_residual,
        ql_limit=eps_prime,
        ql_pass=bool(ql_residual <= eps_prime),
    )
