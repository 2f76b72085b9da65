"""End-to-end single-trajectory estimation protocols.

Two drivers, both returning the estimate together with the exactly computed
truth so desk-scale experiments can report true errors:

* the detailed-balance protocol: burn in with the sampler, then record
  outcomes of the sandwich instrument (measure, sample, measure) along one
  trajectory; the Chebyshev planner sizes the trajectory from the stationary
  variance and an autocorrelation-time bound,
* the measurement-remix protocol: burn in, then alternate the warm-start
  POVM with enough sampler steps that every pre-measurement state sits
  within u*eps/3 of the Gibbs state in trace norm, making the per-step
  conditional bias at most eps/3; the Azuma planner sizes the run with only
  logarithmic dependence on the failure probability.

The failure budget eta splits into thirds: one for the burn-in distance, the
rest for the concentration bound.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import channels, filters, linalg
from .errors import GapTooSmall
from .gibbs import (
    chi2_divergence,
    mixing_time_upper,
    spectral_gap,
    superop_matrix,
    trace_distance,
    unvec,
    vec,
)
from .instrument import (
    compose_db_instrument,
    compose_remix_instrument,
    sample_trajectory,
    stationary_stats,
    t_aut,
    theta_gap_bound,
    trajectory_states,
)
from .policy import DEFAULT_POLICY

__all__ = [
    "ProtocolConfig",
    "ProtocolResult",
    "run_db_protocol",
    "run_remix_protocol",
    "sample_count_chebyshev",
    "sample_count_azuma",
]

DIAG_TAUT_HORIZON = 2048
BIAS_CERT_STEPS = 50


@dataclass(frozen=True)
class ProtocolConfig:
    """Accuracy target, failure budget, and resolution of the auto fields."""

    eps: float
    eta: float
    burn_in: object = "auto"
    steps: object = "auto"
    k0: object = "auto"
    u: float = None
    c: float = None
    tau: float = None
    seed: int = 0
    init_state: object = "maximally_mixed"

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if not 0 < self.eta < 1:
            raise ValueError("eta must lie in (0, 1)")


@dataclass(frozen=True)
class ProtocolResult:
    estimate: float
    truth: float
    abs_error: float
    trajectory: object
    diagnostics: dict = field(default_factory=dict)

    def to_json(self, indent=None):
        doc = {
            "estimate": self.estimate,
            "truth": self.truth,
            "abs_error": self.abs_error,
            "seed": self.trajectory.seed,
            "steps": int(self.trajectory.labels.size),
            "empirical_mean": self.trajectory.empirical_mean,
            "diagnostics": _jsonable(self.diagnostics),
        }
        return json.dumps(doc, indent=indent, sort_keys=True)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def sample_count_chebyshev(var, taut, eps, eta):
    """Trajectory length 2 var t_aut / (eps^2 eta) from the Chebyshev route."""
    if min(var, taut, eps, eta) <= 0:
        raise ValueError("all planner inputs must be positive")
    return int(np.ceil(2 * var * taut / (eps**2 * eta)))


def sample_count_azuma(c, eps, eta):
    """Measurement count 18 c^2/eps^2 log(6/eta) from bounded-increment concentration."""
    if min(c, eps, eta) <= 0:
        raise ValueError("all planner inputs must be positive")
    return int(np.ceil(18 * c**2 / eps**2 * np.log(6 / eta)))


def _initial_state(cfg, ctx):
    if isinstance(cfg.init_state, str):
        if cfg.init_state == "maximally_mixed":
            return np.eye(ctx.dim, dtype=complex) / ctx.dim
        if cfg.init_state == "sigma":
            return ctx.sigma.copy()
        raise ValueError(f"unknown init_state {cfg.init_state!r}")
    return linalg.as_matrix(cfg.init_state)


def _burn_in(n_channel, ctx, cfg, policy):
    if cfg.burn_in == "auto":
        t_burn = mixing_time_upper(n_channel, ctx, cfg.eta / 3, policy)
    else:
        t_burn = int(cfg.burn_in)
    rho = _initial_state(cfg, ctx)
    step = superop_matrix(n_channel).matrix
    v = vec(rho)
    for _ in range(t_burn):
        v = step @ v
    rho = unvec(v)
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real, t_burn


def _rescaled(a):
    a = linalg.as_matrix(a)
    scale = linalg.norm(a, "operator")
    if scale <= 1 + 1e-12:
        return a, 1.0
    return a / scale, scale


def run_db_protocol(a, ctx, sampler_spec, cfg, policy=DEFAULT_POLICY):
    """Single-trajectory estimation with the detailed-balance channel.

    Output is the empirical outcome mean minus 1/u (rescaled if the
    observable norm exceeded one). Diagnostics carry the sampler gap, the
    burn-in length and quality, stationary variance, the autocorrelation
    time and its spectral bound, and per-branch counts.
    """
    a_n, scale = _rescaled(a)
    eps_n = cfg.eps / scale
    m_channel = channels.build_db_channel(a_n, ctx, u=cfg.u, c=cfg.c, tau=cfg.tau, policy=policy)
    n_channel = channels.build_sampler(sampler_spec, ctx, policy=policy)
    gap = spectral_gap(n_channel, ctx, policy)
    rho_burn, t_burn = _burn_in(n_channel, ctx, cfg, policy)
    inst = compose_db_instrument(m_channel, n_channel)
    v_bar, var = stationary_stats(inst, ctx, policy)
    theta, taut_bound = theta_gap_bound(m_channel, gap, ctx, policy)
    if cfg.steps == "auto":
        steps = sample_count_chebyshev(var, taut_bound, eps_n, cfg.eta / 3)
    else:
        steps = int(cfg.steps)
    record = sample_trajectory(inst, rho_burn, steps, cfg.seed)
    u = m_channel.meta["u"]
    estimate = (record.empirical_mean - 1 / u) * scale
    truth = float(np.trace(ctx.sigma @ linalg.as_matrix(a)).real)
    counts = np.bincount(record.labels, minlength=inst.n_branches)
    diagnostics = {
        "protocol": "db",
        "gap": gap,
        "burn_in": t_burn,
        "burn_in_trace_distance": trace_distance(rho_burn, ctx.sigma),
        "burn_in_chi2": chi2_divergence(rho_burn, ctx, check_state=False),
        "stationary_mean": v_bar,
        "stationary_var": var,
        "theta": theta,
        "t_aut_bound": taut_bound,
        "t_aut": t_aut(inst, ctx, min(steps, DIAG_TAUT_HORIZON), policy),
        "t_mix_upper": mixing_time_upper(n_channel, ctx, cfg.eta / 3, policy),
        "steps": steps,
        "branch_counts": counts.tolist(),
        "channel": dict(m_channel.meta),
        "observable_scale": scale,
    }
    return ProtocolResult(estimate, truth, abs(estimate - truth), record, diagnostics)


def _resolve_k0(gap, c_ws, u, eps, cfg):
    if cfg.k0 != "auto":
        return int(cfg.k0)
    if gap >= 1 - 1e-12:
        return 1
    target = np.log(3 * np.sqrt(c_ws) / (u * eps))
    return max(1, int(np.ceil(target / gap)))


def run_remix_protocol(a, ctx, sampler_spec, cfg, policy=DEFAULT_POLICY):
    """Measurement-remix estimation with the warm-start POVM.

    The remix depth k0 is resolved from the warm-start constant with the
    measured chi-square of the burn-in state, so every pre-measurement state
    stays within u*eps/3 of sigma in trace norm and the conditional bias of
    each outcome is at most eps/3. The first BIAS_CERT_STEPS steps of the
    sampled path are replayed exactly to certify that bias bound.
    """
    a_n, scale = _rescaled(a)
    eps_n = cfg.eps / scale
    m_povm = channels.build_povm(a_n, ctx, u=cfg.u, tau=cfg.tau, policy=policy)
    n_channel = channels.build_sampler(sampler_spec, ctx, policy=policy)
    gap = spectral_gap(n_channel, ctx, policy)
    if gap <= policy.gap_floor:
        raise GapTooSmall(f"sampler gap {gap:.3e} too small for remixing")
    rho_burn, t_burn = _burn_in(n_channel, ctx, cfg, policy)
    chi2_burn = chi2_divergence(rho_burn, ctx, check_state=False)
    u = m_povm.meta["u"]
    c_f = m_povm.meta["c_f"]
    c_level = max(chi2_burn, 1.0)
    c_ws = 4 * (1 + c_level) / ((1 - u) ** 2 * (1 - c_f * u) ** 2)
    k0 = _resolve_k0(gap, c_ws, u, eps_n, cfg)
    if cfg.steps == "auto":
        steps = sample_count_azuma(1 / u, eps_n, cfg.eta)
    else:
        steps = int(cfg.steps)
    inst = compose_remix_instrument(m_povm, n_channel, k0, want_kraus=False)
    record = sample_trajectory(inst, rho_burn, steps, cfg.seed)
    estimate = record.empirical_mean * scale
    truth = float(np.trace(ctx.sigma @ linalg.as_matrix(a)).real)

    af = filters.filtered_exact(a_n, ctx, filters.FilterSpec.gaussian(m_povm.meta["tau"]))
    target = np.trace(ctx.sigma @ af).real
    biases = []
    for t, rho_t in enumerate(
        trajectory_states(inst, rho_burn, record.labels[: BIAS_CERT_STEPS + 1])
    ):
        biases.append(abs(np.trace(rho_t @ af).real - target))
    counts = np.bincount(record.labels, minlength=inst.n_branches)
    diagnostics = {
        "protocol": "remix",
        "gap": gap,
        "burn_in": t_burn,
        "burn_in_trace_distance": trace_distance(rho_burn, ctx.sigma),
        "burn_in_chi2": chi2_burn,
        "warm_start_constant": c_ws,
        "k0": k0,
        "steps": steps,
        "t_mix_upper": mixing_time_upper(n_channel, ctx, cfg.eta / 3, policy),
        "bias_first_step": biases[0] if biases else 0.0,
        "bias_max_after_first": max(biases[1:], default=0.0),
        "bias_budget": eps_n / 3,
        "branch_counts": counts.tolist(),
        "channel": dict(m_povm.meta),
        "observable_scale": scale,
    }
    return ProtocolResult(estimate, truth, abs(estimate - truth), record, diagnostics)
