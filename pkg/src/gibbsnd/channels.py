"""Measurement channels on Gibbs states.

Three constructions:

* the exact detailed-balance measurement channel with Kraus operators
  K1 = c sqrt(I + u A_f), K2 = c sqrt(I + u A_ft) (ft the imaginary-shifted
  filter) and a completion branch K restoring trace preservation,
* the two-outcome warm-start POVM K_pm = sqrt((I +- u A_f)/2),
* two in-repo reference Gibbs samplers (an analytically solvable reset
  channel and a mixture of detailed-balance channels over jump operators)
  standing in for an external Gibbs sampling primitive.

K2 is always built through the truncated binomial series on the
non-Hermitian argument; the algebraic identity K2 = sigma^(1/2) K1
sigma^(-1/2) is reserved for verification.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import filters, linalg
from .errors import (
    BranchProbabilityZero,
    NotTracePreserving,
    ParameterOutOfRange,
    RejectionNotPSD,
    ShapeMismatch,
)
from .linalg import dagger
from .policy import DEFAULT_POLICY

__all__ = [
    "MeasurementChannel",
    "SamplerSpec",
    "default_db_params",
    "build_db_channel",
    "build_povm",
    "build_sampler",
    "apply_channel",
    "branch_probabilities",
    "post_select",
    "channel_to_json",
    "channel_from_json",
]


@dataclass(frozen=True)
class MeasurementChannel:
    """Ordered Kraus operators with per-branch real outcome values."""

    kraus: tuple
    outcomes: tuple
    labels: tuple
    meta: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.kraus[0].shape[0]

    @property
    def n_branches(self):
        return len(self.kraus)

    def completeness_residual(self):
        total = sum(dagger(k) @ k for k in self.kraus)
        return linalg.norm(total - np.eye(self.dim), "operator")


def make_channel(kraus, outcomes, labels, meta=None, policy=DEFAULT_POLICY):
    kraus = tuple(linalg.as_matrix(k) for k in kraus)
    d = kraus[0].shape[0]
    if any(k.shape != (d, d) for k in kraus):
        raise ShapeMismatch("Kraus operators must share one square dimension")
    if len(outcomes) != len(kraus) or len(labels) != len(kraus):
        raise ShapeMismatch("outcomes and labels must match the Kraus count")
    if not all(np.isfinite(v) for v in outcomes):
        raise ValueError("outcome values must be finite")
    ch = MeasurementChannel(kraus, tuple(float(v) for v in outcomes), tuple(labels), meta or {})
    resid = ch.completeness_residual()
    if resid > policy.tp_tol:
        raise NotTracePreserving(f"sum K^dag K deviates from I by {resid:.3e}")
    return ch


def default_db_params(a, ctx, tau=None):
    """Default (u, c, tau) for the detailed-balance channel.

    tau = 2 beta + 1; u = min(1/2, 1/(2||A_ft||)); c = min(1/4,
    1/(4 log(2 + beta ||H||))). All three can be overridden individually.
    """
    if tau is None:
        tau = 2 * ctx.beta + 1.0
    aft = filters.filtered_exact(a, ctx, filters.FilterSpec.shifted_gaussian(tau, -ctx.beta / 2))
    u = _u_cap(linalg.norm(aft, "operator"))
    c = min(0.25, 1.0 / (4 * np.log(2 + ctx.beta * ctx.h_norm)))
    return u, c, tau


def _u_cap(norm_aft):
    if norm_aft == 0:
        return 0.5
    return min(0.5, 1.0 / (2 * norm_aft))


def build_db_channel(a, ctx, u=None, c=None, tau=None, policy=DEFAULT_POLICY):
    """Exact detailed-balance measurement channel for an observable A.

    Branches "1" and "2" (the smoothed-jump pair) carry outcome value
    1/(2 c^2 u); the completion branch "3" carries 0, so the empirical mean
    of outcomes minus 1/u estimates Tr(sigma A) without bias at
    stationarity.
    """
    a = linalg.as_matrix(a)
    norm_a = linalg.norm(a, "operator")
    if norm_a > 1 + 1e-12:
        raise ParameterOutOfRange(f"||A|| = {norm_a:.6f} must be at most 1")
    tau = 2 * ctx.beta + 1.0 if tau is None else float(tau)
    f_spec = filters.FilterSpec.gaussian(tau)
    ft_spec = filters.FilterSpec.shifted_gaussian(tau, -ctx.beta / 2)
    af = filters.filtered_exact(a, ctx, f_spec)
    aft = filters.filtered_exact(a, ctx, ft_spec)
    norm_aft = linalg.norm(aft, "operator")
    u_cap = _u_cap(norm_aft)
    u = u_cap if u is None else float(u)
    c = min(0.25, 1.0 / (4 * np.log(2 + ctx.beta * ctx.h_norm))) if c is None else float(c)

    if not 0 < u <= u_cap + 1e-12:
        raise ParameterOutOfRange(
            f"u = {u} outside (0, min(1/2, 1/(2||A_ft||)) = {u_cap:.4f}]"
        )
    if not 0 < c <= 0.25:
        raise ParameterOutOfRange(f"c = {c} outside (0, 1/4]")
    shifted_growth = np.exp(ctx.beta**2 / (8 * tau**2))
    if 3 * c**2 * (1 + u * shifted_growth) > 1:
        raise ParameterOutOfRange(
            "3 c^2 (1 + u exp(beta^2/(8 tau^2))) must not exceed 1"
        )

    d = ctx.dim
    eye = np.eye(d)
    k1 = c * linalg.matfun_herm(eye + u * af, np.sqrt, policy)
    r = u * norm_aft
    order = linalg.taylor_sqrt_order(r, 1e-12)
    k2 = c * linalg.taylor_matrix_sqrt(aft, u, order)

    occupancy = dagger(k1) @ k1 + dagger(k2) @ k2
    p = ctx.sigma_pow[0.5] @ (eye - occupancy) @ ctx.sigma_pow[0.5]
    p = (p + dagger(p)) / 2
    eig = linalg.herm_eig(p, policy)
    if eig.eigenvalues.min() < -policy.psd_clip:
        raise RejectionNotPSD(
            f"I - K1^dag K1 - K2^dag K2 sandwich has eigenvalue "
            f"{eig.eigenvalues.min():.3e}; parameters too aggressive"
        )
    root = eig.apply(np.sqrt(np.clip(eig.eigenvalues, 0.0, None)))
    k3 = root @ ctx.sigma_pow[-0.5]

    value = 1.0 / (2 * c**2 * u)
    meta = {
        "kind": "db",
        "u": u,
        "c": c,
        "tau": tau,
        "beta": ctx.beta,
        "series_order": order,
    }
    return make_channel([k1, k2, k3], [value, value, 0.0], ["1", "2", "3"], meta, policy)


def build_povm(a, ctx, u=None, tau=None, policy=DEFAULT_POLICY):
    """Two-outcome warm-start POVM K_pm = sqrt((I +- u A_f)/2).

    Outcome values are +1/u and -1/u, so the probability gap gives
    p(+) - p(-) = u Tr(rho A_f) and the outcome mean estimates Tr(sigma A)
    at the Gibbs state. The warm-start guarantee needs u < 1/c_f with
    c_f = exp(beta^2/(32 tau^2)); constructions outside that range are
    rejected.
    """
    a = linalg.as_matrix(a)
    norm_a = linalg.norm(a, "operator")
    if norm_a > 1 + 1e-12:
        raise ParameterOutOfRange(f"||A|| = {norm_a:.6f} must be at most 1")
    if tau is None:
        tau = 2 * ctx.beta + 1.0
    c_f = float(np.exp(ctx.beta**2 / (32 * tau**2)))
    if u is None:
        u = min(0.5, 0.95 / c_f)
    if not 0 < u < 1:
        raise ParameterOutOfRange(f"u = {u} outside (0, 1)")
    if u >= 1 / c_f:
        raise ParameterOutOfRange(
            f"u = {u} outside the warm-start range (0, 1/c_f) with c_f = {c_f:.6f}"
        )
    af = filters.filtered_exact(a, ctx, filters.FilterSpec.gaussian(tau))
    eye = np.eye(ctx.dim)
    k_plus = linalg.psd_sqrt((eye + u * af) / 2, policy=policy)
    k_minus = linalg.psd_sqrt((eye - u * af) / 2, policy=policy)
    meta = {"kind": "povm", "u": u, "tau": tau, "beta": ctx.beta, "c_f": c_f}
    return make_channel(
        [k_plus, k_minus], [1.0 / u, -1.0 / u], ["+", "-"], meta, policy
    )


@dataclass(frozen=True)
class SamplerSpec:
    """Reference Gibbs sampler: analytic reset or a mixture of DB channels.

    kind "reset": N(rho) = (1-gamma) rho + gamma sigma.
    kind "pauli_db_mixture": uniform mixture of detailed-balance measurement
    channels over the given jump operators (outcome values discarded).
    """

    kind: str
    gamma: float = 1.0
    jump_ops: tuple = ()
    u: float = None
    c: float = None
    tau: float = None

    def __post_init__(self):
        if self.kind not in ("reset", "pauli_db_mixture"):
            raise ValueError(f"unknown sampler kind {self.kind!r}")
        if self.kind == "reset" and not 0 < self.gamma <= 1:
            raise ValueError("reset rate gamma must lie in (0, 1]")
        if self.kind == "pauli_db_mixture" and not self.jump_ops:
            raise ValueError("mixture sampler needs at least one jump operator")


def build_sampler(spec, ctx, policy=DEFAULT_POLICY):
    """Materialize a SamplerSpec as a channel with all outcome values zero."""
    if spec.kind == "reset":
        return _build_reset(spec.gamma, ctx, policy)
    jump_ops = [linalg.as_matrix(j) for j in spec.jump_ops]
    for j in jump_ops:
        if linalg.norm(j, "operator") > 1 + 1e-12:
            raise ParameterOutOfRange("mixture jump operators must have norm at most 1")
    if spec.u is None:
        u = min(default_db_params(j, ctx, spec.tau)[0] for j in jump_ops)
    else:
        u = spec.u
    kraus, labels = [], []
    m = len(jump_ops)
    for idx, j in enumerate(jump_ops):
        ch = build_db_channel(j, ctx, u=u, c=spec.c, tau=spec.tau, policy=policy)
        for k, lab in zip(ch.kraus, ch.labels):
            kraus.append(k / np.sqrt(m))
            labels.append(f"j{idx}b{lab}")
    meta = {"kind": "pauli_db_mixture", "n_jumps": m, "u": u, "beta": ctx.beta}
    return make_channel(kraus, [0.0] * len(kraus), labels, meta, policy)


def _build_reset(gamma, ctx, policy):
    """Kraus realization of N(rho) = (1-gamma) rho + gamma Tr(rho) sigma.

    In the sigma eigenbasis the jump family is sqrt(gamma p_i) |i><j|, whose
    weights sit on the target index so the completeness sum telescopes to
    gamma I.
    """
    d = ctx.dim
    v = ctx.eig.eigenvectors
    p = ctx.sigma_eigs
    kraus, labels = [], []
    if gamma < 1:
        kraus.append(np.sqrt(1 - gamma) * np.eye(d, dtype=complex))
        labels.append("keep")
    for i in range(d):
        ket = v[:, i : i + 1]
        for j in range(d):
            bra = dagger(v[:, j : j + 1])
            kraus.append(np.sqrt(gamma * p[i]) * (ket @ bra))
            labels.append(f"r{i}{j}")
    meta = {"kind": "reset", "gamma": gamma, "beta": ctx.beta}
    return make_channel(kraus, [0.0] * len(kraus), labels, meta, policy)


def jump_occupancy(ch):
    """Adjoint action on the identity of the two jump branches, K1'K1 + K2'K2.

    This is the operand whose square-rooted complement defines the
    completion branch; its norm and energy-window structure decide whether
    that branch is implementable.
    """
    if ch.meta.get("kind") != "db":
        raise ValueError("occupancy is defined for detailed-balance channels")
    k1, k2 = ch.kraus[0], ch.kraus[1]
    return dagger(k1) @ k1 + dagger(k2) @ k2


def apply_channel(ch, rho):
    """Channel action sum_a K_a rho K_a^dag."""
    rho = linalg.as_matrix(rho)
    if rho.shape != (ch.dim, ch.dim):
        raise ShapeMismatch("state shape does not match the channel")
    out = np.zeros_like(rho)
    for k in ch.kraus:
        out += k @ rho @ dagger(k)
    return out


def branch_probabilities(ch, rho):
    """Probability Tr(K_a rho K_a^dag) of observing each branch."""
    rho = linalg.as_matrix(rho)
    return np.array([np.trace(k @ rho @ dagger(k)).real for k in ch.kraus])


def post_select(ch, branch_index, rho, policy=DEFAULT_POLICY):
    """Conditional state and probability after observing one branch."""
    rho = linalg.as_matrix(rho)
    k = ch.kraus[branch_index]
    out = k @ rho @ dagger(k)
    prob = np.trace(out).real
    if prob < policy.prob_floor:
        raise BranchProbabilityZero(
            f"branch {ch.labels[branch_index]!r} has probability {prob:.3e}"
        )
    return out / prob, prob


def _matrix_to_interleaved(k):
    flat = np.asarray(k, dtype=np.complex128).reshape(-1)
    out = np.empty(2 * flat.size)
    out[0::2] = flat.real
    out[1::2] = flat.imag
    return out.tolist()


def _interleaved_to_matrix(values, d):
    arr = np.asarray(values, dtype=float)
    return (arr[0::2] + 1j * arr[1::2]).reshape(d, d)


def channel_to_json(ch, indent=None):
    """Serialize a channel: dimension, parameters, interleaved re/im Kraus."""
    doc = {
        "dim": ch.dim,
        "labels": list(ch.labels),
        "outcomes": list(ch.outcomes),
        "meta": ch.meta,
        "kraus": [_matrix_to_interleaved(k) for k in ch.kraus],
    }
    return json.dumps(doc, indent=indent, sort_keys=True)


def channel_from_json(text, policy=DEFAULT_POLICY):
    doc = json.loads(text)
    d = doc["dim"]
    kraus = [_interleaved_to_matrix(vals, d) for vals in doc["kraus"]]
    return make_channel(kraus, doc["outcomes"], doc["labels"], doc.get("meta", {}), policy)
