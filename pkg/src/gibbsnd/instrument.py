"""Quantum instruments: branch CP maps with real-valued outcomes.

An instrument is a finite family of completely positive branch maps summing
to a channel; applying it to a state yields a branch label (with probability
the branch trace) and the conditioned post-measurement state. Sequential
application produces a classical trajectory of labels whose statistics -
stationary mean and variance, lag correlations, the integrated
autocorrelation time, and the variance of the empirical mean - are all
computable exactly at desk scale from the branch superoperators.

Branch maps are stored in superoperator form (authoritative for powers and
correlation sums) and, when available, in Kraus form; consistency between
the two is asserted at construction. Sampling uses a counter-based Philox
stream keyed by (seed, stream), so batches of trajectories are reproducible
regardless of scheduling.
"""

import csv
import json
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    BranchProbabilityDegenerate,
    CenteredMapNotDB,
    DegenerateVariance,
    KrausExplosion,
    NotStationary,
    NotTracePreserving,
    ShapeMismatch,
    TooLarge,
)
from .gibbs import kms_db_residual, superop_matrix, trace_distance, unvec, vec
from .linalg import dagger
from .policy import DEFAULT_POLICY

__all__ = [
    "QuantumInstrument",
    "TrajectoryRecord",
    "as_instrument",
    "compose_db_instrument",
    "compose_remix_instrument",
    "sample_trajectory",
    "exact_trajectory_distribution",
    "trajectory_states",
    "stationary_stats",
    "autocorrelation",
    "t_aut",
    "theta_gap_bound",
    "approx_instrument_epsilon",
    "perturb_and_tv",
    "TVReport",
    "stinespring_isometry",
    "empirical_t_aut",
    "trajectories_to_csv",
    "trajectory_summary",
]

KRAUS_WORD_CAP = 4096


class QuantumInstrument:
    """Branch maps with outcomes; superoperator form kept per branch."""

    def __init__(self, branch_supers, outcomes, labels=None, branch_kraus=None,
                 tp_tol=1e-7):
        self.branch_supers = [np.asarray(m, dtype=np.complex128) for m in branch_supers]
        self.outcomes = np.asarray(outcomes, dtype=float)
        d2 = self.branch_supers[0].shape[0]
        self.dim = int(round(np.sqrt(d2)))
        if any(m.shape != (d2, d2) for m in self.branch_supers):
            raise ShapeMismatch("branch superoperators must share one dimension")
        if len(self.outcomes) != len(self.branch_supers):
            raise ShapeMismatch("outcome count must match branch count")
        self.labels = tuple(labels) if labels else tuple(str(i) for i in range(len(self.outcomes)))
        self.branch_kraus = branch_kraus
        self.aggregate = sum(self.branch_supers)
        # Trace preservation: the adjoint must fix the identity.
        eye = vec(np.eye(self.dim))
        resid = np.linalg.norm(dagger(self.aggregate) @ eye - eye)
        if resid > tp_tol:
            raise NotTracePreserving(f"aggregate channel residual {resid:.3e}")
        if branch_kraus is not None:
            self._assert_kraus_consistency()
        # Stacked form used by the sampling hot loop.
        self._stacked = np.ascontiguousarray(np.concatenate(self.branch_supers, axis=0))
        self._trace_idx = np.arange(self.dim) * (self.dim + 1)

    @property
    def n_branches(self):
        return len(self.branch_supers)

    def _assert_kraus_consistency(self):
        probe_rng = np.random.default_rng(0x5EED)
        g = probe_rng.standard_normal((self.dim, self.dim)) + 1j * probe_rng.standard_normal(
            (self.dim, self.dim)
        )
        rho = g @ dagger(g)
        rho /= np.trace(rho).real
        for m, ks in zip(self.branch_supers, self.branch_kraus):
            via_super = unvec(m @ vec(rho))
            via_kraus = sum(k @ rho @ dagger(k) for k in ks)
            if np.linalg.norm(via_super - via_kraus, 2) > 1e-10:
                raise ShapeMismatch("branch Kraus and superoperator forms disagree")

    def branch_apply(self, a, rho):
        return unvec(self.branch_supers[a] @ vec(rho))


def as_instrument(channel, tp_tol=1e-7):
    """Treat each Kraus operator of a channel as its own instrument branch."""
    supers = [superop_matrix([k]).matrix for k in channel.kraus]
    kraus = [[k] for k in channel.kraus]
    return QuantumInstrument(supers, channel.outcomes, channel.labels, kraus, tp_tol)


def compose_db_instrument(m_channel, n_channel, tp_tol=1e-7):
    """Sandwich instrument: branch a applies K_a, then the sampler, then the
    full measurement channel again; outcome values come from the measurement.
    """
    if m_channel.dim != n_channel.dim:
        raise ShapeMismatch("measurement and sampler dimensions differ")
    s_m = superop_matrix(m_channel).matrix
    s_n = superop_matrix(n_channel).matrix
    outer = s_m @ s_n
    supers, kraus = [], []
    for k_a in m_channel.kraus:
        supers.append(outer @ superop_matrix([k_a]).matrix)
        words = [
            k_c @ n_k @ k_a
            for n_k in n_channel.kraus
            for k_c in m_channel.kraus
        ]
        kraus.append(words)
    return QuantumInstrument(supers, m_channel.outcomes, m_channel.labels, kraus, tp_tol)


def compose_remix_instrument(m_povm, n_channel, k0, want_kraus="auto", tp_tol=1e-7):
    """Remix instrument: branch +- applies K_pm then k0 sampler steps.

    The branch superoperator is always available (matrix power); the explicit
    Kraus word list exists only while len(N Kraus)^k0 stays under the cap.
    """
    if m_povm.dim != n_channel.dim:
        raise ShapeMismatch("measurement and sampler dimensions differ")
    if k0 < 0:
        raise ValueError("k0 must be nonnegative")
    s_n = superop_matrix(n_channel).matrix
    s_n_k0 = np.linalg.matrix_power(s_n, k0)
    supers = [s_n_k0 @ superop_matrix([k]).matrix for k in m_povm.kraus]
    n_words = len(n_channel.kraus) ** k0 if k0 else 1
    kraus = None
    if want_kraus is True and n_words > KRAUS_WORD_CAP:
        raise KrausExplosion(
            f"{n_words} Kraus words per branch exceed the cap {KRAUS_WORD_CAP}"
        )
    if want_kraus is True or (want_kraus == "auto" and n_words <= KRAUS_WORD_CAP):
        words = [np.eye(m_povm.dim, dtype=complex)]
        for _ in range(k0):
            words = [nk @ w for w in words for nk in n_channel.kraus]
        kraus = [[w @ k for w in words] for k in m_povm.kraus]
    return QuantumInstrument(supers, m_povm.outcomes, m_povm.labels, kraus, tp_tol)


@dataclass(frozen=True)
class TrajectoryRecord:
    """One sampled run: branch labels, their outcome values, and the seed."""

    labels: np.ndarray
    values: np.ndarray
    seed: int
    stream: int
    empirical_mean: float


def _philox(seed, stream):
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))


def sample_trajectory(inst, rho0, steps, seed, stream=0):
    """Sample a trajectory of branch labels from an initial state.

    At each step branch a fires with probability Tr(E_a(rho)) and the state
    is renormalized conditionally. Deterministic given (seed, stream).
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    rng = _philox(seed, stream)
    v = vec(linalg.as_matrix(rho0))
    s = inst.n_branches
    d2 = inst.dim * inst.dim
    labels = np.empty(steps, dtype=np.int64)
    stacked = inst._stacked
    tr_idx = inst._trace_idx
    for t in range(steps):
        w = (stacked @ v).reshape(s, d2)
        probs = np.maximum(w[:, tr_idx].sum(axis=1).real, 0.0)
        total = probs.sum()
        if total < 1e-14:
            raise BranchProbabilityDegenerate(f"all branch probabilities vanish at step {t}")
        r = rng.random() * total
        a = int(np.searchsorted(np.cumsum(probs), r))
        a = min(a, s - 1)
        labels[t] = a
        v = w[a] / probs[a]
    values = inst.outcomes[labels]
    return TrajectoryRecord(labels, values, int(seed), int(stream), float(values.mean()))


def exact_trajectory_distribution(inst, rho0, steps):
    """Exact probability of every label sequence of the given length."""
    s = inst.n_branches
    if s**steps > 1_000_000:
        raise TooLarge(f"{s}^{steps} trajectories exceed the enumeration guard")
    eye = vec(np.eye(inst.dim))
    frontier = {(): vec(linalg.as_matrix(rho0))}
    for _ in range(steps):
        nxt = {}
        for prefix, v in frontier.items():
            for a in range(s):
                nxt[prefix + (a,)] = inst.branch_supers[a] @ v
        frontier = nxt
    return {seq: float(np.real(eye.conj() @ v)) for seq, v in frontier.items()}


def trajectory_states(inst, rho0, labels):
    """Pre-measurement states rho_t along a recorded label sequence.

    Yields the state seen by step t before branch labels[t] fires, starting
    with rho0 itself.
    """
    rho = linalg.as_matrix(rho0)
    for a in labels:
        yield rho
        out = inst.branch_apply(int(a), rho)
        p = np.trace(out).real
        if p < 1e-14:
            raise BranchProbabilityDegenerate("recorded branch has vanishing probability")
        rho = out / p


def stationary_stats(inst, ctx, policy=DEFAULT_POLICY):
    """Exact outcome mean and variance in the stationary (Gibbs) state."""
    fixed_resid = trace_distance(unvec(inst.aggregate @ vec(ctx.sigma)), ctx.sigma)
    if fixed_resid > 1e-6:
        raise NotStationary(f"aggregate moves sigma by {fixed_resid:.3e} in trace norm")
    probs = np.array(
        [np.trace(unvec(m @ vec(ctx.sigma))).real for m in inst.branch_supers]
    )
    v_bar = float(np.dot(inst.outcomes, probs))
    var = float(np.dot((inst.outcomes - v_bar) ** 2, probs))
    return v_bar, var


def _centered_superop(inst, v_bar):
    return sum(
        (v - v_bar) * m for v, m in zip(inst.outcomes, inst.branch_supers)
    )


def autocorrelation(inst, ctx, lag, policy=DEFAULT_POLICY):
    """Stationary outcome autocorrelation at the given lag index.

    Computed as the trace of centered-map, lag aggregate steps, centered-map
    applied to sigma; equals the covariance of outcomes separated by lag+1
    steps.
    """
    if lag < 0:
        raise ValueError("lag must be nonnegative")
    return _autocorrelation_sequence(inst, ctx, lag + 1)[lag]


def _autocorrelation_sequence(inst, ctx, count):
    v_bar, _ = stationary_stats(inst, ctx)
    centered = _centered_superop(inst, v_bar)
    eye = vec(np.eye(inst.dim))
    w = centered @ vec(ctx.sigma)
    out = np.empty(count)
    for t in range(count):
        out[t] = float(np.real(eye.conj() @ (centered @ w)))
        if t + 1 < count:
            w = inst.aggregate @ w
    return out


def t_aut(inst, ctx, horizon, policy=DEFAULT_POLICY):
    """Integrated autocorrelation time for trajectories of the given length.

    1/2 plus the triangular-weighted sum of lag correlations normalized by
    the stationary variance; satisfies var(empirical mean) =
    2 t_aut var / horizon exactly.
    """
    v_bar, var = stationary_stats(inst, ctx)
    if var <= policy.var_floor:
        raise DegenerateVariance(f"stationary variance {var:.3e} too small")
    corr = _autocorrelation_sequence(inst, ctx, horizon)
    ts = np.arange(1, horizon + 1)
    weights = 1.0 - ts / horizon
    return float(0.5 + np.dot(weights, corr[:horizon]) / var)


def theta_gap_bound(m_channel, n_gap, ctx, policy=DEFAULT_POLICY):
    """Spectral bound on the autocorrelation time: t_aut <= theta/gap + 1/2.

    theta is the variance-normalized double sum of centered outcome products
    weighted by the two-step branch traces of the measurement channel alone.
    Requires the measurement channel and its centered map to satisfy
    detailed balance.
    """
    if kms_db_residual(m_channel, ctx) > 1e-6:
        raise CenteredMapNotDB("measurement channel is not detailed balanced")
    probs = np.array(
        [np.trace(k @ ctx.sigma @ dagger(k)).real for k in m_channel.kraus]
    )
    outcomes = np.asarray(m_channel.outcomes)
    v_bar = float(np.dot(outcomes, probs))
    var = float(np.dot((outcomes - v_bar) ** 2, probs))
    if var <= policy.var_floor:
        raise DegenerateVariance("measurement outcomes carry no randomness")
    centered_pairs = [(v - v_bar, k) for v, k in zip(outcomes, m_channel.kraus)]
    resid = kms_db_residual(centered_pairs_superop(centered_pairs), ctx)
    if resid > 1e-6:
        raise CenteredMapNotDB(f"centered map residual {resid:.3e}")
    theta = 0.0
    for va, ka in centered_pairs:
        rho_a = ka @ ctx.sigma @ dagger(ka)
        for vb, kb in centered_pairs:
            theta += va * vb * np.trace(kb @ rho_a @ dagger(kb)).real
    theta /= var
    return theta, theta / n_gap + 0.5


def centered_pairs_superop(pairs):
    """Weighted superoperator sum_a w_a conj(K_a) kron K_a for (w, K) pairs."""
    d = pairs[0][1].shape[0]
    m = np.zeros((d * d, d * d), dtype=np.complex128)
    for w, k in pairs:
        m += w * np.kron(np.conj(k), k)
    return m


def approx_instrument_epsilon(inst, inst_tilde, states):
    """Largest single-step statistical deviation sum_a ||E~_a(rho) - E_a(rho)||_1
    over a probe set of states."""
    worst = 0.0
    for rho in states:
        v = vec(linalg.as_matrix(rho))
        total = 0.0
        for ma, mb in zip(inst.branch_supers, inst_tilde.branch_supers):
            total += linalg.norm(unvec((mb - ma) @ v), "trace")
        worst = max(worst, total)
    return worst


@dataclass(frozen=True)
class TVReport:
    tv: float
    bound: float
    eps: float
    eta: float


def perturb_and_tv(inst, inst_tilde, rho0, rho0_tilde, steps, extra_probes=(), seed=7):
    """Total variation between exact trajectory distributions and its bound.

    The per-step deviation eps is measured over a probe set (20 seeded random
    states, the computational basis states, both initial states, and any
    extras supplied); eta is the trace distance of the initial states. The
    accumulation bound is (eta + steps * eps) / 2.
    """
    d = inst.dim
    rng = np.random.default_rng(seed)
    probes = [rho0, rho0_tilde]
    for i in range(d):
        basis = np.zeros((d, d), dtype=complex)
        basis[i, i] = 1.0
        probes.append(basis)
    for _ in range(20):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        rho = g @ dagger(g)
        probes.append(rho / np.trace(rho).real)
    probes.extend(extra_probes)
    eps = approx_instrument_epsilon(inst, inst_tilde, probes)
    eta = trace_distance(rho0, rho0_tilde)
    p = exact_trajectory_distribution(inst, rho0, steps)
    q = exact_trajectory_distribution(inst_tilde, rho0_tilde, steps)
    tv = 0.5 * sum(abs(p[seq] - q[seq]) for seq in p)
    return TVReport(tv=tv, bound=0.5 * (eta + steps * eps), eps=eps, eta=eta)


def stinespring_isometry(channel, policy=DEFAULT_POLICY):
    """Isometry V stacking the Kraus blocks: V|psi> = sum_i |i> K_i |psi>.

    Measuring the index register of V rho V^dag reproduces the branch
    probabilities; V^dag V = I follows from trace preservation.
    """
    resid = channel.completeness_residual()
    if resid > policy.tp_tol:
        raise NotTracePreserving(f"channel completeness residual {resid:.3e}")
    return np.concatenate(channel.kraus, axis=0)


def empirical_t_aut(values, window_factor=6.0):
    """Windowed estimate of the integrated autocorrelation time of a series.

    Self-consistent truncation: the window is the smallest lag exceeding
    window_factor times the running estimate.
    """
    x = np.asarray(values, dtype=float)
    n = x.size
    x = x - x.mean()
    var = np.dot(x, x) / n
    if var == 0 or n < 2:
        return 0.5
    nfft = 1 << (2 * n - 1).bit_length()
    ft = np.fft.rfft(x, nfft)
    acov = np.fft.irfft(ft * np.conj(ft), nfft)[:n].real / n
    rho = acov / acov[0]
    t_est = 0.5
    for lag in range(1, n):
        t_est += rho[lag] * (1 - lag / n)
        if lag >= window_factor * t_est:
            break
    return max(t_est, 0.5)


def trajectories_to_csv(records, path):
    """Write trajectory batches as CSV rows (seed, t, label, value)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["seed", "t", "label", "value"])
        for rec in records:
            for t, (lab, val) in enumerate(zip(rec.labels, rec.values)):
                writer.writerow([rec.seed, t, int(lab), repr(float(val))])


def trajectory_summary(records):
    """Summary statistics of a trajectory batch as a JSON string."""
    all_values = np.concatenate([rec.values for rec in records])
    n = all_values.size
    mean = float(all_values.mean())
    var = float(all_values.var())
    taut = float(np.mean([empirical_t_aut(rec.values) for rec in records]))
    half_width = 1.96 * np.sqrt(max(2 * taut * var / n, 0.0))
    doc = {
        "mean": mean,
        "var": var,
        "t_aut_estimate": taut,
        "ci95": [mean - half_width, mean + half_width],
        "n_records": len(records),
        "n_steps_total": int(n),
    }
    return json.dumps(doc, sort_keys=True)
