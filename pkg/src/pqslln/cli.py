"""Experiment runner: criteria evaluation, simulation, oracle suites, reports.

Subcommands
-----------
criteria   evaluate the membership criteria for a (model, p, q) config
simulate   run the Monte Carlo engine; writes the checkpoint CSV, a JSON
           summary, and a run manifest sufficient to reproduce the outputs
verify     run the oracle suites (lemmas, marcus-pisier, small-series, all)
report     consolidate manifests into a CSV comparing analytic verdicts
           against empirical ones

Exit codes: criteria 0 on Member/NonMember, 3 on Inconclusive; any config
parse error exits 2 with line/column diagnostics; verify exits 1 if any
inequality is violated.  No partial artifacts survive a failed run.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__, banach_lp, criteria, mc_engine, oracles, rng
from . import tail_models as tm
from .errors import ConfigError, PqsllnError

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# Config handling
# ---------------------------------------------------------------------------


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    if cfg.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema version {cfg.get('schema')!r}")
    return cfg


def resolve_model(spec, base_dir: str = ".") -> tuple[tm.TailModel | None, str | None]:
    """Model spec -> (TailModel, None) or (None, sequence rule)."""
    if not isinstance(spec, dict):
        raise ConfigError("model spec must be an object")
    if "sequence" in spec:
        return None, spec["sequence"]
    if "builtin" in spec:
        params = dict(spec.get("params", {}))
        try:
            return tm.make_builtin(spec["builtin"], **params), None
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad builtin model spec: {exc}") from exc
    if "custom" in spec:
        try:
            return tm.load_model(spec["custom"]), None
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad custom model: {exc}") from exc
    if "file" in spec:
        path = os.path.join(base_dir, spec["file"])
        try:
            with open(path) as fh:
                return tm.load_model(json.load(fh)), None
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ConfigError(f"bad model file {path}: {exc}") from exc
    raise ConfigError("model spec needs one of: builtin, custom, file, sequence")


def _experiment_config(cfg: dict, base_dir: str, seed_override: int | None
                       ) -> mc_engine.ExperimentConfig:
    model, sequence = resolve_model(cfg.get("model", {}), base_dir)
    sim = cfg.get("simulate", {})
    seed = seed_override if seed_override is not None else int(sim.get("master_seed", 0))
    try:
        return mc_engine.ExperimentConfig(
            model=model,
            p=float(cfg["p"]),
            q=float(cfg["q"]),
            n_max=int(sim.get("n_max", 1 << 14)),
            replications=int(sim.get("replications", 64)),
            master_seed=seed,
            epsilon_grid=tuple(sim.get("epsilon_grid", (0.5, 1.0))),
            mode=sim.get("mode", "plain"),
            sequence=sequence,
        )
    except KeyError as exc:
        raise ConfigError(f"config missing key {exc}") from exc


def _workers(args) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    env = os.environ.get("PQ_SLLN_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"bad PQ_SLLN_WORKERS value {env!r}") from exc
    return 1


class _AtomicWriter:
    """Collects output files and finalizes them together; a failure removes
    everything, so no partial artifacts are left behind."""

    def __init__(self):
        self._pending: list[tuple[str, str]] = []
        self._final: list[str] = []

    def write(self, path: str, content: str) -> None:
        tmp = f"{path}.tmp.{os.getpid()}"
        with open(tmp, "w") as fh:
            fh.write(content)
        self._pending.append((tmp, path))

    def commit(self) -> None:
        for tmp, path in self._pending:
            os.replace(tmp, path)
            self._final.append(path)
        self._pending.clear()

    def abort(self) -> None:
        for tmp, _ in self._pending:
            try:
                os.unlink(tmp)
            except OSError:
                pass
        self._pending.clear()
        for path in self._final:
            try:
                os.unlink(path)
            except OSError:
                pass
        self._final.clear()


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_criteria(args) -> int:
    cfg = _load_config(args.config)
    base = os.path.dirname(os.path.abspath(args.config))
    model, sequence = resolve_model(cfg.get("model", {}), base)
    if sequence is not None:
        raise ConfigError("criteria evaluation needs an iid tail model")
    crit = cfg.get("criteria", {})
    kwargs = {
        "t_cap": float(crit.get("t_cap", criteria.T_CAP_DEFAULT)),
        "series_n_max": int(crit.get("series_n_max", criteria.SERIES_N_MAX_DEFAULT)),
    }
    which = crit.get("criterion", "almost-sure")
    if which == "almost-sure":
        report = criteria.classify_slln(model, float(cfg["p"]), float(cfg["q"]), **kwargs)
    elif which == "expectation":
        report = criteria.series_expectation_criterion(
            model, float(cfg["p"]), float(cfg["q"]), **kwargs)
    else:
        raise ConfigError(f"unknown criterion {which!r}")

    payload = json.dumps(report.to_dict(), indent=2, sort_keys=True)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        out_path = os.path.join(args.out, "criterion_report.json")
        writer = _AtomicWriter()
        writer.write(out_path, payload + "\n")
        writer.commit()
        print(out_path)
    else:
        print(payload)
    print(f"membership: {report.membership}", file=sys.stderr)
    return 0 if report.membership in (criteria.MEMBER, criteria.NON_MEMBER) else 3


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    base = os.path.dirname(os.path.abspath(args.config))
    config = _experiment_config(cfg, base, args.seed)
    workers = _workers(args)
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    stem = cfg.get("name") or os.path.splitext(os.path.basename(args.config))[0]

    started = time.perf_counter()
    writer = _AtomicWriter()
    try:
        table = mc_engine.run_paths(config, workers=workers)
        summary = mc_engine.summary_dict(table, config)
        wall = time.perf_counter() - started
        csv_path = os.path.join(out_dir, f"{stem}_table.csv")
        summary_path = os.path.join(out_dir, f"{stem}_summary.json")
        manifest_path = os.path.join(out_dir, f"{stem}_manifest.json")
        manifest = {
            "schema": SCHEMA_VERSION,
            "kind": "simulate",
            "tool_version": __version__,
            "config": config.to_dict(),
            "criteria_defaults": cfg.get("criteria", {}),
            "master_seed": config.master_seed,
            "workers": workers,
            "backend": summary["backend"],
            "outputs": {"table_csv": csv_path, "summary_json": summary_path},
            "wallclock_s": wall,
        }
        if args.format in ("csv", "both"):
            writer.write(csv_path, table.to_csv())
        writer.write(summary_path, json.dumps(summary, indent=2, sort_keys=True) + "\n")
        writer.write(manifest_path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        writer.commit()
    except Exception:
        writer.abort()
        raise
    print(manifest_path)
    return 0


def _verify_lemmas(seed: int) -> list[dict]:
    results = []
    # maximal-inequality lattice: all n up to 2^10, theta = K/(j n), c scales
    for K in (1, 2):
        for n in range(1, (1 << 10) + 1):
            for j in range(1, 11):
                for c in (Fraction(1, 10), Fraction(1), Fraction(7)):
                    theta = Fraction(K, j * n)
                    law = oracles.DiscreteLaw(((Fraction(0), 1 - theta), (c, theta)))
                    lhs, rhs, holds = oracles.lemma_max_check(law, n, K)
                    if not holds or n in (1, 1 << 10):
                        results.append({"check": "max-inequality",
                                        "instance": {"n": n, "j": j, "c": float(c), "K": K},
                                        "lhs": lhs, "rhs": rhs, "holds": holds})
                    if not holds:
                        return results
    results.append({"check": "max-inequality", "instance": "full lattice",
                    "count": 2 * (1 << 10) * 10 * 3, "holds": True})

    # symmetrization lattice: randomized rational laws
    gen = rng.generator(seed, 0, rng.ROLE_PROBE)
    violations = 0
    for i in range(100):
        k = int(gen.integers(2, 7))
        values = np.round(gen.uniform(-4.0, 4.0, size=k), 6)
        weights = gen.integers(1, 20, size=k)
        total = int(weights.sum())
        law = oracles.DiscreteLaw.from_pairs(
            [(float(v), Fraction(int(w), total)) for v, w in zip(values, weights)])
        for p_exp in (0.3, 0.7, 1.0, 1.5):
            for t in (0.0, 0.25, 0.5, 1.0, 2.0):
                lhs, rhs, holds = oracles.symmetrization_check(law, p_exp, t)
                if not holds:
                    violations += 1
                    results.append({"check": "symmetrization",
                                    "instance": {"law": i, "p": p_exp, "t": t},
                                    "lhs": lhs, "rhs": rhs, "holds": False})
    results.append({"check": "symmetrization", "instance": "100 laws x 4 x 5",
                    "violations": violations, "holds": violations == 0})
    return results


def _verify_marcus_pisier(seed: int) -> list[dict]:
    cases = [
        (tm.pareto(1.5, "nonnegative"), 64, 1.2, np.geomspace(1.0, 1e4, 16), 100_000),
        (tm.pareto(3.0, "nonnegative"), 128, 1.5, np.geomspace(1.0, 1e3, 12), 20_000),
        (tm.degenerate(1.0), 32, 1.0, [0.5, 2.0, 8.0, 64.0], 5_000),
    ]
    results = []
    for model, n, r, grid, reps in cases:
        table = banach_lp.marcus_pisier_check(model, n, r, grid, reps, master_seed=seed)
        margin = min(rhs + 4.0 * se - l for l, rhs, se in
                     zip(table.empirical_lhs, table.analytic_rhs, table.standard_errors))
        results.append({"check": "marcus-pisier",
                        "instance": {"model": model.name, "n": n, "r": r, "reps": reps},
                        "min_margin": margin, "holds": table.holds(4.0)})
    return results


def _verify_small_series(seed: int) -> list[dict]:
    results = []
    law = oracles.rademacher_law()
    for p in (1.0, 1.5):
        for q in (0.5, 1.0):
            exact = oracles.exact_series_small(law, p, q, 12)
            mean, se = mc_engine.dense_ratio_moments(tm.rademacher(), p, q, 12,
                                                     100_000, seed)
            worst = 0.0
            holds = True
            for n in range(12):
                diff = float(abs(mean[n] - exact[n]))
                band = 4.0 * float(se[n])
                if band == 0.0:
                    ok = diff == 0.0
                else:
                    ok = diff <= band
                    worst = max(worst, diff / band)
                holds = holds and ok
            results.append({"check": "small-series", "instance": {"p": p, "q": q},
                            "worst_fraction_of_band": worst, "holds": bool(holds)})
    return results


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else 2024
    suites = {
        "lemmas": _verify_lemmas,
        "marcus-pisier": _verify_marcus_pisier,
        "small-series": _verify_small_series,
    }
    if args.suite == "all":
        chosen = list(suites)
    elif args.suite in suites:
        chosen = [args.suite]
    else:
        raise ConfigError(f"unknown suite {args.suite!r}; have {sorted(suites)} or 'all'")
    results = []
    for name in chosen:
        results.extend(suites[name](seed))
    payload = json.dumps({"suites": chosen, "results": results}, indent=2, sort_keys=True)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "verify_results.json")
        writer = _AtomicWriter()
        writer.write(path, payload + "\n")
        writer.commit()
        print(path)
    else:
        print(payload)
    ok = all(r["holds"] for r in results)
    print(f"verify: {'all hold' if ok else 'VIOLATIONS FOUND'}", file=sys.stderr)
    return 0 if ok else 1


_HARD = {(criteria.MEMBER, criteria.DIVERGES), (criteria.NON_MEMBER, criteria.CONVERGES)}


def cmd_report(args) -> int:
    rows = []
    contradictions = 0
    for manifest_path in args.manifests:
        with open(manifest_path) as fh:
            manifest = json.load(fh)
        cfg = manifest["config"]
        model, sequence = resolve_model(cfg["model"], os.path.dirname(manifest_path))
        p, q = float(cfg["p"]), float(cfg["q"])
        with open(manifest["outputs"]["summary_json"]) as fh:
            summary = json.load(fh)
        mc_kind = summary["w_verdict"]["kind"]
        if sequence is not None:
            # sequence rules have no iid criteria side; report empirical only
            rows.append({"model": sequence, "p": p, "q": q, "clause": "sequence",
                         "membership": "", "integral": "", "p_moment": "",
                         "series": "", "mc_w_verdict": mc_kind, "hard_contradiction": 0})
            continue
        crit_kwargs = manifest.get("criteria_defaults", {})
        report = criteria.classify_slln(
            model, p, q,
            t_cap=float(crit_kwargs.get("t_cap", criteria.T_CAP_DEFAULT)),
            series_n_max=int(crit_kwargs.get("series_n_max",
                                             criteria.SERIES_N_MAX_DEFAULT)))
        hard = int((report.membership, mc_kind) in _HARD)
        contradictions += hard
        rows.append({
            "model": report.model_name, "p": p, "q": q, "clause": report.clause,
            "membership": report.membership,
            "integral": report.integral_verdict.kind,
            "p_moment": report.p_moment_verdict.kind,
            "series": (report.truncated_series_verdict.kind
                       if report.truncated_series_verdict else ""),
            "mc_w_verdict": mc_kind,
            "hard_contradiction": hard,
        })

    header = ["model", "p", "q", "clause", "membership", "integral", "p_moment",
              "series", "mc_w_verdict", "hard_contradiction"]
    buffer = io.StringIO()
    writer_csv = csv.writer(buffer, lineterminator="\n")
    writer_csv.writerow(header)
    for row in rows:
        writer_csv.writerow([row[h] for h in header])
    csv_text = buffer.getvalue()
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "consistency_report.csv")
        writer = _AtomicWriter()
        writer.write(path, csv_text)
        writer.commit()
        print(path)
    else:
        print(csv_text, end="")
    print(f"hard_contradictions: {contradictions}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pqslln",
                                     description="(p,q)-type SLLN laboratory")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--seed", type=int, default=None,
                        help="master seed override (unsigned 64-bit)")
        sp.add_argument("--workers", type=int, default=None,
                        help="worker count; results do not depend on it "
                             "(fallback: PQ_SLLN_WORKERS)")
        sp.add_argument("--format", choices=("csv", "json", "both"), default="both")

    sp = sub.add_parser("criteria", help="evaluate membership criteria")
    sp.add_argument("--config", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_criteria)

    sp = sub.add_parser("simulate", help="run the Monte Carlo engine")
    sp.add_argument("--config", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_simulate)

    sp = sub.add_parser("verify", help="run oracle suites")
    sp.add_argument("suite", choices=("lemmas", "marcus-pisier", "small-series", "all"))
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("report", help="consolidate manifests into a comparison CSV")
    sp.add_argument("manifests", nargs="*")
    common(sp)
    sp.set_defaults(fn=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PqsllnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
