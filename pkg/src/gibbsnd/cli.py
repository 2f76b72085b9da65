"""Config-driven experiment runner and verification harness.

Subcommands:

* ``run <config>``: execute one estimation protocol from a TOML or JSON
  config; writes result JSON, trajectory CSV, and diagnostics JSON.
* ``verify [--scope] [--tol-scale] [--out]``: run the named check
  batteries; nonzero exit when any check fails.
* ``report <glob...> [--out]``: aggregate result files into one CSV row per
  run.
* ``spectrum <config>``: dump the symmetrized superoperator eigenvalues of
  the configured sampler and measurement channels.

Exit codes: 0 success, 1 failed verification, 2 configuration error,
3 numerical precondition failure.
"""

import argparse
import glob as globmod
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import channels, gibbs, instrument, models, protocols, verify
from .errors import ConfigError, GibbsNDError
from .linalg import dagger

SPEC_VERSION = 1


@dataclass
class ExperimentConfig:
    model: str
    n_qubits: int
    beta: float
    observable: str
    protocol: str
    eps: float
    eta: float
    seed: int = 0
    g: float = 1.0
    model_seed: int = 0
    normalized_model: bool = False
    u: float = None
    c: float = None
    tau: float = None
    burn_in: object = "auto"
    steps: object = "auto"
    k0: object = "auto"
    init_state: str = "maximally_mixed"
    sampler: dict = field(default_factory=lambda: {"kind": "reset", "gamma": 0.5})
    output_dir: str = "."
    spec_version: int = SPEC_VERSION

    def __post_init__(self):
        if self.spec_version != SPEC_VERSION:
            raise ConfigError(f"unsupported spec_version {self.spec_version}")
        if not 1 <= int(self.n_qubits) <= 10:
            raise ConfigError(f"n_qubits {self.n_qubits} outside 1..10")
        if self.protocol not in ("db", "remix"):
            raise ConfigError(f"protocol must be 'db' or 'remix', got {self.protocol!r}")
        if not 0 < self.eps < 1 or not 0 < self.eta < 1:
            raise ConfigError("eps and eta must lie in (0, 1)")
        if self.beta < 0:
            raise ConfigError("beta must be nonnegative")


def _load_config_dict(path):
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def load_config(path):
    doc = _load_config_dict(path)
    try:
        return ExperimentConfig(**doc)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _observable(cfg):
    if cfg.observable.endswith((".npy", ".json")):
        try:
            a = models.load_matrix_file(cfg.observable)
        except OSError as exc:
            raise ConfigError(f"observable file: {exc}") from exc
    else:
        a = models.pauli_string_operator(cfg.observable, cfg.n_qubits)
    return a


def _sampler_spec(cfg, n_qubits):
    doc = dict(cfg.sampler)
    kind = doc.pop("kind", "reset")
    if kind == "reset":
        return channels.SamplerSpec("reset", gamma=float(doc.get("gamma", 0.5)))
    if kind == "pauli_db_mixture":
        strings = doc.get("jump_ops", [])
        if not strings:
            raise ConfigError("pauli_db_mixture sampler needs jump_ops")
        ops = tuple(models.pauli_string_operator(s, n_qubits) for s in strings)
        return channels.SamplerSpec(
            "pauli_db_mixture",
            jump_ops=ops,
            u=doc.get("u"),
            c=doc.get("c"),
            tau=doc.get("tau"),
        )
    raise ConfigError(f"unknown sampler kind {kind!r}")


def _build_problem(cfg):
    try:
        h = models.build_model(
            cfg.model, cfg.n_qubits, g=cfg.g, seed=cfg.model_seed,
            normalized=cfg.normalized_model,
        )
    except OSError as exc:
        raise ConfigError(f"model file: {exc}") from exc
    ctx = gibbs.make_gibbs_context(h, cfg.beta)
    a = _observable(cfg)
    sampler = _sampler_spec(cfg, cfg.n_qubits)
    return ctx, a, sampler


def run_experiment(config_path, out_dir=None):
    """Run one configured experiment; returns the written artifact paths."""
    cfg = load_config(config_path)
    ctx, a, sampler = _build_problem(cfg)
    pcfg = protocols.ProtocolConfig(
        eps=cfg.eps, eta=cfg.eta, burn_in=cfg.burn_in, steps=cfg.steps,
        k0=cfg.k0, u=cfg.u, c=cfg.c, tau=cfg.tau, seed=cfg.seed,
        init_state=cfg.init_state,
    )
    runner = protocols.run_db_protocol if cfg.protocol == "db" else protocols.run_remix_protocol
    result = runner(a, ctx, sampler, pcfg)

    out = Path(out_dir if out_dir is not None else cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{cfg.protocol}_{Path(config_path).stem}_seed{cfg.seed}"
    diagnostics = dict(result.diagnostics)
    if "t_aut" not in diagnostics:
        diagnostics["t_aut"] = instrument.empirical_t_aut(result.trajectory.values)
    run_doc = {
        "model": cfg.model,
        "n_qubits": cfg.n_qubits,
        "beta": cfg.beta,
        "observable": cfg.observable,
        "protocol": cfg.protocol,
        "seed": cfg.seed,
        "steps": int(result.trajectory.labels.size),
        "estimate": result.estimate,
        "truth": result.truth,
        "abs_error": result.abs_error,
        "t_aut": diagnostics["t_aut"],
        "gap": diagnostics["gap"],
        "t_mix_upper": diagnostics["t_mix_upper"],
    }
    result_path = out / f"{stem}_result.json"
    result_path.write_text(json.dumps(run_doc, indent=2, sort_keys=True))
    traj_path = out / f"{stem}_trajectory.csv"
    instrument.trajectories_to_csv([result.trajectory], traj_path)
    diag_path = out / f"{stem}_diagnostics.json"
    diag_path.write_text(
        json.dumps(json.loads(result.to_json()), indent=2, sort_keys=True)
    )
    return result_path, traj_path, diag_path


REPORT_COLUMNS = (
    "model", "n_qubits", "beta", "protocol", "steps",
    "estimate", "truth", "abs_error", "t_aut", "gap", "t_mix_upper",
)


def emit_report(paths, out_path):
    """Aggregate result JSON files into a CSV, one row per run.

    Floats use the shortest round-trip representation with '.' decimals;
    output is deterministic given the same inputs.
    """
    rows = []
    for path in sorted(str(p) for p in paths):
        doc = json.loads(Path(path).read_text())
        rows.append([_fmt(doc.get(col)) for col in REPORT_COLUMNS])
    lines = [",".join(REPORT_COLUMNS)]
    lines += [",".join(row) for row in rows]
    Path(out_path).write_text("\n".join(lines) + "\n")
    return len(rows)


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _spectrum_doc(cfg):
    ctx, a, sampler = _build_problem(cfg)
    n_channel = channels.build_sampler(sampler, ctx)
    scale = np.linalg.norm(a, 2)
    a_n = a / scale if scale > 1 else a
    if cfg.protocol == "db":
        m_channel = channels.build_db_channel(a_n, ctx, u=cfg.u, c=cfg.c, tau=cfg.tau)
    else:
        m_channel = channels.build_povm(a_n, ctx, u=cfg.u, tau=cfg.tau)
    doc = {}
    for name, ch in (("sampler", n_channel), ("measurement", m_channel)):
        s = gibbs.kms_symmetrized(ch, ctx)
        sym = (s + dagger(s)) / 2
        evals = np.linalg.eigvalsh(sym)[::-1]
        doc[name] = {
            "eigenvalues": [float(v) for v in evals],
            "db_residual": gibbs.kms_db_residual(ch, ctx),
            "gap": float(1.0 - evals[1]) if evals.size > 1 else 0.0,
        }
    return doc


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="gibbsnd",
        description="simulate and verify non-destructive measurements on Gibbs states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a configured experiment")
    p_run.add_argument("config")
    p_run.add_argument("--out-dir", default=None)

    p_verify = sub.add_parser("verify", help="run the verification batteries")
    p_verify.add_argument("--scope", default="all", choices=("all",) + verify.SCOPES)
    p_verify.add_argument("--tol-scale", type=float, default=1.0)
    p_verify.add_argument("--out", default=None)

    p_report = sub.add_parser("report", help="aggregate result files to CSV")
    p_report.add_argument("glob", nargs="+")
    p_report.add_argument("--out", default="report.csv")

    p_spec = sub.add_parser("spectrum", help="dump channel superoperator eigenvalues")
    p_spec.add_argument("config")
    p_spec.add_argument("--out", default=None)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except GibbsNDError as exc:
        print(
            f"numerical precondition failure ({type(exc).__name__}): {exc}",
            file=sys.stderr,
        )
        return 3


def _dispatch(args):
    if args.command == "run":
        paths = run_experiment(args.config, args.out_dir)
        for path in paths:
            print(path)
        return 0

    if args.command == "verify":
        results = verify.run_checks(args.scope, args.tol_scale)
        doc = {
            "scope": args.scope,
            "tol_scale": args.tol_scale,
            "checks": [r.to_dict() for r in results],
            "pass": all(r.passed for r in results),
        }
        text = json.dumps(doc, indent=2, sort_keys=True)
        if args.out:
            Path(args.out).write_text(text)
        else:
            print(text)
        failed = [r for r in results if not r.passed]
        for r in failed:
            print(
                f"FAIL [{r.scope}] {r.name}: measured {r.measured:.6e} "
                f"> bound {r.bound:.6e}",
                file=sys.stderr,
            )
        return 1 if failed else 0

    if args.command == "report":
        paths = []
        for pattern in args.glob:
            paths.extend(globmod.glob(pattern))
        if not paths:
            print("no input result files matched", file=sys.stderr)
            return 2
        n = emit_report(paths, args.out)
        print(f"{args.out}: {n} rows")
        return 0

    if args.command == "spectrum":
        cfg = load_config(args.config)
        doc = _spectrum_doc(cfg)
        text = json.dumps(doc, indent=2, sort_keys=True)
        if args.out:
            Path(args.out).write_text(text)
        else:
            print(text)
        return 0

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
