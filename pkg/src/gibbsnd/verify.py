"""Named verification batteries for every module.

Each check compares a measured quantity against its bound on fixed seeded
instances and reports one machine-readable entry. `run_checks` drives the
batteries by scope; a tolerance scale below one tightens every bound by that
factor (useful for probing how much margin the defaults carry).
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import blockenc, channels, filters, gibbs, instrument, linalg, protocols
from .linalg import dagger

__all__ = ["CheckResult", "run_checks", "SCOPES", "max_workers"]

SCOPES = (
    "linalg",
    "gibbs",
    "filters",
    "channels",
    "instrument",
    "protocols",
    "blockenc",
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    scope: str
    params: dict
    measured: float
    bound: float
    passed: bool

    def to_dict(self):
        return {
            "name": self.name,
            "scope": self.scope,
            "params": self.params,
            "measured": self.measured,
            "bound": self.bound,
            "pass": self.passed,
        }


def max_workers():
    """Parallelism cap from the GIBBS_ND_THREADS environment variable."""
    try:
        return max(1, int(os.environ.get("GIBBS_ND_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    workers = max_workers()
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _entry(name, scope, params, measured, bound, tol_scale):
    bound_eff = bound * tol_scale
    return CheckResult(
        name=name,
        scope=scope,
        params=params,
        measured=float(measured),
        bound=float(bound_eff),
        passed=bool(measured <= bound_eff),
    )


def _random_hermitian(rng, d, scale=1.0):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = (g + dagger(g)) / 2
    return scale * h / np.linalg.norm(h, 2)


def _random_density(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def _checks_linalg(tol):
    rng = np.random.default_rng(101)
    out = []
    worst = 0.0
    for d in (4, 32, 128):
        a = _random_hermitian(rng, d, scale=2.0)
        eig = linalg.herm_eig(a)
        worst = max(worst, np.linalg.norm(a - eig.reconstruct(), 2) / np.linalg.norm(a, 2))
    out.append(_entry(
        "spectral decomposition reconstruction", "linalg",
        {"dims": [4, 32, 128]}, worst, 1e-10, tol))
    a = _random_hermitian(rng, 6, scale=2.0)
    prod = linalg.matfun_herm(a, np.exp) @ linalg.matfun_herm(a, lambda x: np.exp(-x))
    out.append(_entry(
        "matrix exponential inverse pair", "linalg", {"dim": 6},
        np.linalg.norm(prod - np.eye(6), 2), 1e-9, tol))
    worst = 0.0
    for _ in range(20):
        d = int(rng.integers(2, 5))
        b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        b = rng.uniform(0.2, 0.6) * b / np.linalg.norm(b, 2)
        r = np.linalg.norm(b, 2)
        order = 10
        p = linalg.taylor_matrix_sqrt(b, 1.0, order)
        resid = np.linalg.norm(p @ p - (np.eye(d) + b), 2)
        bound = 2 * r ** (order + 1) / (1 - r) * (2 - np.sqrt(1 - r))
        worst = max(worst, resid / bound if bound > 0 else 0.0)
    out.append(_entry(
        "square-root series truncation bound", "linalg",
        {"instances": 20, "order": 10}, worst, 1.0, tol))
    return out


def _checks_gibbs(tol):
    rng = np.random.default_rng(202)
    out = []
    ctx = gibbs.make_gibbs_context(_random_hermitian(rng, 4), 1.2)
    reset = channels.build_sampler(channels.SamplerSpec("reset", gamma=0.4), ctx)
    so = gibbs.superop_matrix(reset)
    out.append(_entry(
        "detailed balance implies fixed point", "gibbs", {"gamma": 0.4},
        gibbs.trace_distance(so(ctx.sigma), ctx.sigma), 1e-6, tol))
    lam = gibbs.spectral_gap(so, ctx)
    out.append(_entry(
        "spectral gap of the reset channel", "gibbs", {"gamma": 0.4},
        abs(lam - 0.4), 1e-9, tol))
    worst = 0.0
    for _ in range(50):
        rho = _random_density(rng, 4)
        before = gibbs.chi2_divergence(rho, ctx)
        after = gibbs.chi2_divergence(so(rho), ctx)
        worst = max(worst, after - (1 - lam) ** 2 * before)
    out.append(_entry(
        "chi-square contraction per step", "gibbs", {"instances": 50},
        worst, 1e-8, tol))
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(2, 5))
        ctx2 = gibbs.make_gibbs_context(_random_hermitian(rng, d), rng.uniform(0, 2))
        rho = _random_density(rng, d)
        t1 = gibbs.trace_distance(rho, ctx2.sigma)
        worst = max(worst, t1**2 - gibbs.chi2_divergence(rho, ctx2))
    out.append(_entry(
        "trace norm dominated by chi-square", "gibbs", {"instances": 100},
        worst, 1e-12, tol))
    ks = [rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(3)]
    so3 = gibbs.superop_matrix(ks)
    worst = 0.0
    for _ in range(20):
        rho = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        direct = sum(k @ rho @ dagger(k) for k in ks)
        worst = max(worst, np.linalg.norm(so3(rho) - direct, 2))
    out.append(_entry(
        "superoperator matches Kraus action", "gibbs", {"instances": 20},
        worst, 1e-10, tol))
    eps = 0.02
    k = gibbs.mixing_time_upper(so, ctx, eps)
    mk = np.linalg.matrix_power(so.matrix, k)
    worst = 0.0
    for i in range(4):
        rho = np.zeros((4, 4), dtype=complex)
        rho[i, i] = 1.0
        worst = max(worst, gibbs.trace_distance(gibbs.unvec(mk @ gibbs.vec(rho)), ctx.sigma))
    out.append(_entry(
        "mixing time upper bound empirical", "gibbs", {"eps": eps, "steps": k},
        worst, eps, tol))
    return out


def _checks_filters(tol):
    rng = np.random.default_rng(303)
    out = []
    worst = 0.0
    for _ in range(20):
        d = int(rng.integers(2, 6))
        ctx = gibbs.make_gibbs_context(_random_hermitian(rng, d), rng.uniform(0, 2))
        a = _random_hermitian(rng, d)
        tau = rng.uniform(0.3, 3.0)
        af = filters.filtered_exact(a, ctx, filters.FilterSpec.gaussian(tau))
        worst = max(worst, abs(np.trace(ctx.sigma @ af) - np.trace(ctx.sigma @ a)))
    out.append(_entry(
        "preserves the thermal expectation value", "filters",
        {"instances": 20}, worst, 1e-10, tol))

    worst_f, worst_ft = 0.0, 0.0
    for _ in range(50):
        d = int(rng.integers(2, 5))
        beta = rng.uniform(0.2, 2.0)
        tau = rng.uniform(0.5, 2.0) * beta
        ctx = gibbs.make_gibbs_context(_random_hermitian(rng, d), beta)
        a = _random_hermitian(rng, d)
        na = np.linalg.norm(a, 2)
        af = filters.filtered_exact(a, ctx, filters.FilterSpec.gaussian(tau))
        worst_f = max(worst_f, np.linalg.norm(af, 2) - na)
        aft = filters.filtered_exact(
            a, ctx, filters.FilterSpec.shifted_gaussian(tau, -beta / 2))
        worst_ft = max(
            worst_ft, np.linalg.norm(aft, 2) - np.exp(beta**2 / (8 * tau**2)) * na)
    out.append(_entry(
        "smoothed observable norm bounds", "filters", {"instances": 50},
        max(worst_f, worst_ft), 1e-10, tol))

    worst = 0.0
    for i in range(50):
        d = int(rng.integers(2, 5))
        beta = rng.uniform(0.3, 1.5)
        tau = rng.uniform(0.8, 2.0)
        s = -beta / 2 if i % 2 else rng.uniform(-1.0, 1.0)
        ctx = gibbs.make_gibbs_context(_random_hermitian(rng, d), beta)
        a = _random_hermitian(rng, d)
        af = filters.filtered_exact(a, ctx, filters.FilterSpec.gaussian(tau))
        lhs = filters.imaginary_shift(af, s, ctx)
        rhs = filters.filtered_exact(a, ctx, filters.FilterSpec.shifted_gaussian(tau, s))
        worst = max(worst, np.linalg.norm(lhs - rhs, 2))
    out.append(_entry(
        "imaginary shift lands on the shifted filter", "filters",
        {"instances": 50}, worst, 1e-9, tol))

    worst_ratio = 0.0
    ctx = gibbs.make_gibbs_context(_pauli_z(), 1.0)
    for spec in (filters.FilterSpec.gaussian(1.0),
                 filters.FilterSpec.shifted_gaussian(1.0, -0.5)):
        exact = filters.filtered_exact(_pauli_x(), ctx, spec)
        for m in (16, 64, 256):
            for t_cut in (4.0, 8.0):
                grid = filters.QuadratureGrid(t_cut, m)
                approx = filters.filtered_quadrature(_pauli_x(), _pauli_z(), spec, grid)
                bound = filters.quadrature_error_bound(spec, grid, ctx.h_norm)
                err = np.linalg.norm(approx - exact, 2)
                worst_ratio = max(worst_ratio, (err - 1e-13) / bound)
    out.append(_entry(
        "aliasing plus truncation quadrature bound", "filters",
        {"grids": "m in {16,64,256}, t_cut in {4,8}"}, worst_ratio, 1.0, tol))

    worst = 0.0
    ctx = gibbs.make_gibbs_context(_random_hermitian(rng, 4, scale=2.0), 1.0)
    a = _random_hermitian(rng, 4)
    spec = filters.FilterSpec.gaussian(1.0)
    for cutoff in ("sharp", "smooth"):
        band = filters.bandlimit(a, ctx, spec, 1.0, cutoff=cutoff)
        worst = max(worst, blockenc.band_support_excess(band, ctx, 1.0))
    out.append(_entry(
        "band-limited frequency support", "filters", {"omega0": 1.0},
        worst, 1e-14, tol))

    worst = 0.0
    for spec in (filters.FilterSpec.gaussian(1.5),
                 filters.FilterSpec.shifted_gaussian(1.5, -0.5)):
        exact = filters.filtered_exact(a, ctx, spec)
        for omega0 in (0.5, 1.0, 1.5, 2.0):
            band = filters.bandlimit(a, ctx, spec, omega0, cutoff="smooth")
            err = np.linalg.norm(exact - band, 2)
            worst = max(worst, err / filters.bandlimit_tail_envelope(spec, omega0))
    out.append(_entry(
        "band-limit tail envelope with calibrated constant", "filters",
        {"calibrated_constant": 4.0}, worst, 4.0, tol))
    return out


def _pauli_z():
    return np.array([[1, 0], [0, -1]], dtype=complex)


def _pauli_x():
    return np.array([[0, 1], [1, 0]], dtype=complex)


def _db_instances(count, seed=404):
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(1, 4))
        beta = float(rng.choice([0.2, 1.0, 3.0]))
        tau = float(rng.choice([1.0, 2.0, 4.0])) * beta
        ctx = gibbs.make_gibbs_context(_random_hermitian(rng, 2**n), beta)
        a = _random_hermitian(rng, 2**n)
        yield i, ctx, a, tau


def _checks_channels(tol):
    out = []
    worst_db, worst_fix, worst_tp, worst_unbias, worst_k2 = 0.0, 0.0, 0.0, 0.0, 0.0
    for _, ctx, a, tau in _db_instances(30):
        ch = channels.build_db_channel(a, ctx, tau=tau)
        worst_db = max(worst_db, gibbs.kms_db_residual(ch, ctx))
        worst_fix = max(worst_fix, gibbs.trace_distance(
            channels.apply_channel(ch, ctx.sigma), ctx.sigma))
        worst_tp = max(worst_tp, ch.completeness_residual())
        u, c = ch.meta["u"], ch.meta["c"]
        probs = channels.branch_probabilities(ch, ctx.sigma)
        est = (probs[0] + probs[1]) / (2 * c**2 * u) - 1 / u
        worst_unbias = max(worst_unbias, abs(est - np.trace(ctx.sigma @ a).real))
        oracle = ctx.sigma_pow[0.5] @ dagger(ch.kraus[0]) @ ctx.sigma_pow[-0.5]
        worst_k2 = max(worst_k2, np.linalg.norm(ch.kraus[1] - oracle, 2))
    out.append(_entry("exact detailed balance", "channels",
                      {"instances": 30}, worst_db, 1e-7, tol))
    out.append(_entry("gibbs state fixed by the measurement", "channels",
                      {"instances": 30}, worst_fix, 1e-8, tol))
    out.append(_entry("trace-preserving completion", "channels",
                      {"instances": 30}, worst_tp, 1e-8, tol))
    out.append(_entry("unbiased estimator identity", "channels",
                      {"instances": 30}, worst_unbias, 1e-9, tol))
    out.append(_entry("jump-branch conjugation identity", "channels",
                      {"instances": 30}, worst_k2, 1e-8, tol))

    rng = np.random.default_rng(505)
    u = 0.25
    worst_margin = -np.inf
    for _ in range(100):
        d = int(rng.integers(2, 5))
        beta = rng.uniform(0.2, 2.0)
        tau = 2 * beta
        ctx = gibbs.make_gibbs_context(_random_hermitian(rng, d), beta)
        a = _random_hermitian(rng, d)
        ch = channels.build_povm(a, ctx, u=u, tau=tau)
        c_f = ch.meta["c_f"]
        rho = _random_density(rng, d)
        chi = gibbs.chi2_divergence(rho, ctx)
        if chi > 4:
            scale = np.sqrt(4.0 / chi) * 0.99
            rho = (1 - scale) * ctx.sigma + scale * rho
            chi = gibbs.chi2_divergence(rho, ctx)
        bound = 4 * (1 + chi) / ((1 - u) ** 2 * (1 - c_f * u) ** 2)
        for branch in (0, 1):
            post, _ = channels.post_select(ch, branch, rho)
            worst_margin = max(
                worst_margin, gibbs.chi2_divergence(post, ctx) - bound)
    out.append(_entry("chi-square warm-start property", "channels",
                      {"instances": 100, "u": u}, worst_margin, 0.0, tol))

    worst = 0.0
    for _ in range(20):
        d = int(rng.integers(2, 5))
        ctx = gibbs.make_gibbs_context(_random_hermitian(rng, d), 1.0)
        a = _random_hermitian(rng, d)
        tau = 2.0
        ch = channels.build_povm(a, ctx, u=0.4, tau=tau)
        af = filters.filtered_exact(a, ctx, filters.FilterSpec.gaussian(tau))
        rho = _random_density(rng, d)
        probs = channels.branch_probabilities(ch, rho)
        worst = max(worst, abs(probs[0] - probs[1] - 0.4 * np.trace(rho @ af).real))
    out.append(_entry("probability gap reads the filtered observable", "channels",
                      {"instances": 20}, worst, 1e-10, tol))
    return out


def _checks_instrument(tol):
    out = []
    z, x = _pauli_z(), _pauli_x()
    ctx = gibbs.make_gibbs_context(z, 1.0)
    m = channels.build_db_channel(x, ctx, u=0.3, c=0.15, tau=2.0)
    n = channels.build_sampler(channels.SamplerSpec("reset", gamma=0.5), ctx)
    inst = instrument.compose_db_instrument(m, n)
    v_bar, var = instrument.stationary_stats(inst, ctx)

    worst = 0.0
    for p in (1, 2, 3):
        dist = instrument.exact_trajectory_distribution(inst, ctx.sigma, p + 1)
        cov = sum(
            prob * (inst.outcomes[seq[0]] - v_bar) * (inst.outcomes[seq[-1]] - v_bar)
            for seq, prob in dist.items()
        )
        worst = max(worst, abs(cov - instrument.autocorrelation(inst, ctx, p - 1)))
    out.append(_entry("covariance formula", "instrument", {"lags": [1, 2, 3]},
                      worst, 1e-9, tol))

    worst = 0.0
    for horizon in (2, 3, 4):
        dist = instrument.exact_trajectory_distribution(inst, ctx.sigma, horizon)
        means = {seq: np.mean([inst.outcomes[a] for a in seq]) for seq in dist}
        ex = sum(dist[s] * means[s] for s in dist)
        ex2 = sum(dist[s] * means[s] ** 2 for s in dist)
        identity = 2 * instrument.t_aut(inst, ctx, horizon) * var / horizon
        worst = max(worst, abs((ex2 - ex**2) - identity))
    out.append(_entry("variance of the empirical mean", "instrument",
                      {"horizons": [2, 3, 4]}, worst, 1e-9, tol))

    lam = gibbs.spectral_gap(n, ctx)
    _, bound = instrument.theta_gap_bound(m, lam, ctx)
    worst = -np.inf
    for horizon in (10, 100, 1000):
        worst = max(worst, instrument.t_aut(inst, ctx, horizon) - bound)
    out.append(_entry("spectral-gap bound on the autocorrelation time",
                      "instrument", {"horizons": [10, 100, 1000]}, worst, 0.0, tol))

    rng = np.random.default_rng(606)
    base = instrument.as_instrument(m)
    worst = -np.inf
    for i in range(50):
        perturbed = []
        for k in m.kraus:
            g = rng.standard_normal(k.shape) + 1j * rng.standard_normal(k.shape)
            perturbed.append(k + 1e-3 * (g + dagger(g)) / 2)
        total = sum(dagger(k) @ k for k in perturbed)
        fix = linalg.matfun_herm(total, lambda v: v**-0.5)
        ch = channels.make_channel([k @ fix for k in perturbed], m.outcomes, m.labels)
        tilde = instrument.as_instrument(ch)
        rho0 = ctx.sigma if i % 2 == 0 else _random_density(rng, 2)
        report = instrument.perturb_and_tv(
            base, tilde, rho0, rho0, 4, extra_probes=[ctx.sigma])
        worst = max(worst, report.tv - report.bound)
    out.append(_entry("error accumulation in sequential measurements",
                      "instrument", {"instances": 50, "steps": 4}, worst, 1e-9, tol))
    return out


def _checks_protocols(tol):
    out = []
    z, x = _pauli_z(), _pauli_x()
    ctx = gibbs.make_gibbs_context(z, 1.0)
    sampler = channels.SamplerSpec("reset", gamma=0.5)
    eps, eta, runs = 0.5, 0.25, 60

    def db_run(seed):
        cfg = protocols.ProtocolConfig(eps=eps, eta=eta, seed=seed)
        return protocols.run_db_protocol(x, ctx, sampler, cfg).abs_error > eps

    failures = sum(_pmap(db_run, range(runs)))
    sigma_bin = np.sqrt(eta * (1 - eta) / runs)
    out.append(_entry("sample complexity failure rate (db)", "protocols",
                      {"runs": runs, "eps": eps, "eta": eta},
                      failures / runs, eta + 3 * sigma_bin, tol))

    def remix_run(seed):
        cfg = protocols.ProtocolConfig(eps=eps, eta=eta, seed=seed)
        return protocols.run_remix_protocol(x, ctx, sampler, cfg).abs_error > eps

    failures = sum(_pmap(remix_run, range(runs)))
    out.append(_entry("sample complexity failure rate (remix)", "protocols",
                      {"runs": runs, "eps": eps, "eta": eta},
                      failures / runs, eta + 3 * sigma_bin, tol))

    cfg = protocols.ProtocolConfig(eps=0.4, eta=0.3, seed=5)
    res = protocols.run_remix_protocol(x, ctx, sampler, cfg)
    out.append(_entry("per-step conditional bias certificate", "protocols",
                      {"steps_checked": 50},
                      res.diagnostics["bias_max_after_first"],
                      res.diagnostics["bias_budget"], tol))
    return out


def _checks_blockenc(tol):
    rng = np.random.default_rng(707)
    out = []
    worst = -np.inf
    worst_rt = 0.0
    for i in range(100):
        d = 2
        kind = i % 3
        if kind == 0:
            c1 = 0.9 * _random_contraction(rng, d)
            c2 = 0.9 * _random_contraction(rng, d)
            be = blockenc.be_product([blockenc.dilate(c1), blockenc.dilate(c2)])
            target = c2 @ c1
        elif kind == 1:
            mats = [_random_contraction(rng, d) for _ in range(3)]
            coeffs = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            be = blockenc.be_lcu([blockenc.dilate(m) for m in mats], coeffs)
            target = sum(c * m for c, m in zip(coeffs, mats))
        else:
            c1 = _random_contraction(rng, d)
            inner = blockenc.be_lcu(
                [blockenc.dilate(c1), blockenc.be_identity(d)], [0.5, 0.5])
            be = blockenc.be_product([inner, blockenc.dilate(c1)])
            target = (0.5 * c1 + 0.5 * np.eye(d)) @ c1
        measured = np.linalg.norm(blockenc.extract(be) - target, 2)
        worst = max(worst, measured - be.eps)
        rt = blockenc.dilate(_random_contraction(rng, d))
        worst_rt = max(worst_rt, np.linalg.norm(blockenc.extract(rt) - rt.unitary[:d, :d], 2))
    out.append(_entry("product and linear combination soundness", "blockenc",
                      {"instances": 100}, worst, 0.0, tol))
    out.append(_entry("dilation round trip", "blockenc", {"instances": 100},
                      worst_rt, 1e-9, tol))

    b = _random_hermitian(rng, 2)
    u, c, order = 0.4, 0.25, 6
    be = blockenc.be_taylor_sqrt(blockenc.dilate(b), u, c, order)
    oracle = c * linalg.matfun_herm(np.eye(2) + u * b, np.sqrt)
    out.append(_entry("taylor square root block encoding", "blockenc",
                      {"u": u, "c": c, "order": order},
                      np.linalg.norm(blockenc.extract(be) - oracle, 2), be.eps, tol))
    r = u * 1.0
    out.append(_entry("square-root normalization ceiling", "blockenc",
                      {"r": r}, be.alpha, c * (2 - np.sqrt(1 - r)), tol))

    worst_resid, worst_support = -np.inf, 0.0
    for i in range(10):
        beta = 1.0
        d = int(rng.integers(2, 5))
        ctx = gibbs.make_gibbs_context(_random_hermitian(rng, d), beta)
        a = _random_hermitian(rng, d)
        omega, eps_prime = 1.0, 1e-3
        k = int(np.ceil(np.log2(1 / eps_prime)))
        u2, c2 = 0.3, 0.1
        tau = max(beta, 4 * (k / omega) * np.sqrt(np.log(k / (c2**2 * eps_prime))))
        ch = channels.build_db_channel(a, ctx, u=u2, c=c2, tau=tau)
        occ = channels.jump_occupancy(ch)
        prov = {"a": a, "u": u2, "c": c2, "tau": tau, "k": k}
        o_tilde, resid = blockenc.quasi_local_truncate(occ, ctx, omega, provenance=prov)
        worst_resid = max(worst_resid, resid - eps_prime)
        worst_support = max(worst_support, blockenc.band_support_excess(o_tilde, ctx, omega))
    out.append(_entry("quasi-local in energy: residual target", "blockenc",
                      {"instances": 10, "eps_prime": 1e-3}, worst_resid, 0.0, tol))
    out.append(_entry("quasi-local in energy: window support", "blockenc",
                      {"instances": 10}, worst_support, 1e-14, tol))

    ctx = gibbs.make_gibbs_context(_pauli_z(), 1.0)
    report = blockenc.completion_precheck(0.0001 * np.eye(2), ctx, 0.25)
    out.append(_entry("completion precheck arithmetic", "blockenc",
                      {"eps": 0.25}, abs(report.omega - 0.05), 1e-15, tol))
    return out


def _random_contraction(rng, d, scale=1.0):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * g / np.linalg.norm(g, 2)


_BATTERIES = {
    "linalg": _checks_linalg,
    "gibbs": _checks_gibbs,
    "filters": _checks_filters,
    "channels": _checks_channels,
    "instrument": _checks_instrument,
    "protocols": _checks_protocols,
    "blockenc": _checks_blockenc,
}


def run_checks(scope="all", tol_scale=1.0):
    """Run the verification batteries and return their check results."""
    if scope == "all":
        scopes = SCOPES
    elif scope in _BATTERIES:
        scopes = (scope,)
    else:
        raise ValueError(f"unknown scope {scope!r}; choose from {('all',) + SCOPES}")
    results = []
    for name in scopes:
        results.extend(_BATTERIES[name](tol_scale))
    return results
