"""Command-line entry point wiring every module together.

Commands: solve, lp, synth, verify-lemma5, verify, oracle, bench, gen.
Exit codes: 0 success/pass, 1 certificate or verification failure,
2 input error, 3 synthesis error. JSON goes to stdout (and --out when
given); human-readable progress goes to stderr. Set EPR_DATA_DIR or pass
--data-dir to relocate the cycle-state cache.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .constants import (
    ALPHA,
    CYCLE_EDGE_THRESHOLD,
    GAMMA,
    PAIR_THRESHOLD,
    PSI_PATH_ENERGY,
    THETA,
    AlgorithmConstants,
    constants_block,
    path_state_slack,
)
from .cyclestates import (
    SynthesisFailed,
    cycle_state,
    load_cycle_block,
    synth_psi,
    synth_small_cycle,
    verify_lemma5,
    verify_psi,
)
from .graphs import InstanceError, detect_bipartition, generate, load_instance, qmc_to_epr
from .lp import solve_lp, upper_bound
from .oracle import (
    MAX_ORACLE_QUBITS,
    OracleError,
    corpus_small,
    measure_ratio,
)
from .quantum import DensityBlock, pair_energy
from .rounding import baseline_34, certify, round_solution

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_SYNTH = 3
SCHEMA_VERSION = 1
DEFAULT_LEMMA5_KS = (3, 5, 7, 9, 11, 13, 15)


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation: one command plus its validated options."""

    command: str
    instance: Path | None = None
    fmt: str | None = None
    algorithm: str = "main"
    out: Path | None = None
    seed: int = 0
    data_dir: Path | None = None
    audit_all_pairs: bool = False
    audit_star: bool = False
    plots: bool = False
    qmc: bool = False
    heavy: bool = False
    limit: int | None = None
    k: str | None = None
    ks: tuple[int, ...] = DEFAULT_LEMMA5_KS
    cert_tol: float = 1e-9
    p: float = 0.5
    family: str | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.cert_tol < 0:
            raise InstanceError(f"--cert-tol must be >= 0, got {self.cert_tol}")


def _emit(obj: dict, out: Path | None) -> None:
    text = json.dumps(obj, indent=2)
    print(text)
    if out is not None:
        out.write_text(text + "\n")


def _status(msg: str) -> None:
    print(msg, file=sys.stderr)


def _plot_path(out: Path | None, default: str) -> Path:
    return out.with_suffix(".png") if out is not None else Path(default)


def cmd_solve(cfg: RunConfig) -> int:
    g = load_instance(cfg.instance, cfg.fmt)
    frame = None
    if cfg.qmc:
        bip = detect_bipartition(g)
        if bip is None:
            raise InstanceError("--qmc requires a bipartite instance")
        g, frame = qmc_to_epr(g, bip)
    sol = solve_lp(g)
    if cfg.algorithm == "baseline34":
        rs, cert = baseline_34(g, sol, cfg.p)
    else:
        rs = round_solution(g, sol, frame=frame, data_path=cfg.data_dir)
        cert = certify(g, sol, rs)
    payload = cert.to_json()
    payload.update(
        {
            "instance": str(cfg.instance),
            "n": g.n,
            "num_edges": g.num_edges,
            "lp_value": float(sol.lp_value),
            "state": rs.structure_json(),
        }
    )
    if cfg.audit_all_pairs:
        floor = ALPHA * 0.5
        worst = min(
            (rs.pair_energy(i, j) for i in range(g.n) for j in range(i + 1, g.n)),
            default=float("inf"),
        )
        payload["audit_all_pairs"] = {
            "min_pair_energy": None if worst == float("inf") else worst,
            "threshold": floor,
            "pass": worst >= floor - cfg.cert_tol,
        }
    if cfg.plots:
        from .report import render_certificate

        png = render_certificate(payload, _plot_path(cfg.out, "certificate.png"))
        payload["plot"] = str(png)
    _emit(payload, cfg.out)
    passed = cert.min_ratio >= ALPHA - cfg.cert_tol
    return EXIT_OK if passed else EXIT_FAIL


def cmd_lp(cfg: RunConfig) -> int:
    g = load_instance(cfg.instance, cfg.fmt)
    sol = solve_lp(g)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "constants": constants_block(),
        "instance": str(cfg.instance),
        "n": g.n,
        "num_edges": g.num_edges,
        "lp_value": float(sol.lp_value),
        "lp_value_exact": str(sol.lp_value),
        "exact": sol.exact,
        "matched": sorted([list(e) for e in sol.matched]),
        "cycles": [list(c) for c in sol.cycles],
        "unmatched": sorted(sol.unmatched),
        "upper_bound": upper_bound(g, sol),
    }
    _emit(payload, cfg.out)
    return EXIT_OK


def cmd_synth(cfg: RunConfig) -> int:
    targets = ["rho3", "rho5", "psi"] if cfg.k == "all" else [
        {"3": "rho3", "5": "rho5", "psi": "psi"}[cfg.k]
    ]
    reports = []
    for name in targets:
        _status(f"synthesizing {name} ...")
        t0 = time.perf_counter()
        block = synth_psi() if name == "psi" else synth_small_cycle(3 if name == "rho3" else 5)
        elapsed = time.perf_counter() - t0
        base = cfg.data_dir if cfg.data_dir is not None else None
        if cfg.out is not None and len(targets) == 1:
            path = cfg.out
        else:
            from .cyclestates import data_dir

            root = Path(base) if base else data_dir()
            root.mkdir(parents=True, exist_ok=True)
            path = root / f"{name}.json"
        block.save(path)
        report = verify_psi(block) if name == "psi" else verify_lemma5(block, block.num_qubits)
        reports.append(
            {
                "state": name,
                "path": str(path),
                "seconds": elapsed,
                "report": report.to_json(),
            }
        )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "constants": constants_block(),
        "synthesized": reports,
    }
    _emit(payload, cfg.out if len(targets) > 1 else None)
    return EXIT_OK


def cmd_verify_lemma5(cfg: RunConfig) -> int:
    k = int(cfg.k)
    state = cycle_state(k, cfg.data_dir)
    report = verify_lemma5(state, k)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "constants": constants_block(),
        "report": report.to_json(),
    }
    _emit(payload, cfg.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def _check(name: str, measured: float, threshold: float, margin: float, passed: bool) -> dict:
    return {
        "name": name,
        "measured": measured,
        "threshold": threshold,
        "margin": margin,
        "passed": bool(passed),
    }


def _constants_checks() -> list[dict]:
    AlgorithmConstants().validate()
    rel = abs((THETA * (1.0 - THETA)) ** 0.5 - GAMMA)
    slack = path_state_slack()
    lhs = 4.0 * PSI_PATH_ENERGY + ALPHA / 2.0
    rhs = 5.0 * CYCLE_EDGE_THRESHOLD
    return [
        _check("theta_defining_relation", rel, 1e-14, 1e-14 - rel, rel <= 1e-14),
        _check("alpha_equals_half_plus_gamma", abs(ALPHA - 0.5 - GAMMA), 1e-15,
               1e-15 - abs(ALPHA - 0.5 - GAMMA), abs(ALPHA - 0.5 - GAMMA) <= 1e-15),
        _check("path_state_slack_positive", lhs - rhs, 0.0, slack, lhs > rhs),
    ]


def _identity_checks() -> list[dict]:
    from .quantum import pair_energy_from_marginals, tilted_epr, tilted_marginal

    pair_block = tilted_epr(THETA).density((0, 1))
    matched = pair_energy(pair_block, 0, 1)
    cross = pair_energy_from_marginals(tilted_marginal(), tilted_marginal())
    checks = [
        _check("tilted_pair_energy_alpha", matched, ALPHA, abs(matched - ALPHA),
               abs(matched - ALPHA) <= 1e-12),
        _check("cross_pair_energy_half_alpha", cross, 0.5 - GAMMA**2,
               abs(cross - (0.5 - GAMMA**2)), abs(cross - (0.5 - GAMMA**2)) <= 1e-12),
    ]
    g = generate("cycle", k=4)  # even cycle: bipartite, LP integral after normalize
    sol = solve_lp(g)
    _, cert = baseline_34(g, sol, 0.5)
    worst = max(abs(r.ratio - 0.75) for r in cert.records)
    checks.append(_check("baseline34_ratio_three_quarters", 0.75 + worst, 0.75, 1e-12 - worst,
                         worst <= 1e-12))
    return checks


def _star_bound_checks(seed: int, samples: int = 1000) -> list[dict]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        q = int(rng.integers(2, 6))
        dim = 1 << q
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        rho = a @ a.conj().T
        rho /= np.trace(rho).real
        block = DensityBlock(tuple(range(q)), rho)
        for i in range(q):
            energies = [pair_energy(block, i, j) for j in range(q) if j != i]
            worst = max(worst, sum(max(0.0, 2.0 * e - 1.0) for e in energies))
    return [
        _check("star_bound_random_states", worst, 1.0 + 1e-9, 1.0 + 1e-9 - worst,
               worst <= 1.0 + 1e-9)
    ]


def cmd_verify(cfg: RunConfig) -> int:
    groups = []
    groups.append({"group": "constants", "items": _constants_checks()})
    groups.append({"group": "state_identities", "items": _identity_checks()})
    groups.append({"group": "star_bound", "items": _star_bound_checks(cfg.seed)})
    psi = load_cycle_block("psi", cfg.data_dir)
    psi_report = verify_psi(psi).to_json()
    psi_report["group"] = "psi_conditions"
    groups.append(psi_report)
    for k in cfg.ks:
        rep = verify_lemma5(cycle_state(k, cfg.data_dir), k).to_json()
        rep["group"] = f"lemma5_k{k}"
        groups.append(rep)
    all_pass = True
    for grp in groups:
        for item in grp["items"]:
            all_pass &= item["passed"]
            mark = "PASS" if item["passed"] else "FAIL"
            label = f"[{grp.get('group')}] {item['name']}"
            _status(f"{mark:4s}  {label:55s} measured={item['measured']} margin={item['margin']}")
    payload = {
        "schema_version": SCHEMA_VERSION,
        "constants": constants_block(),
        "passed": all_pass,
        "groups": groups,
    }
    if cfg.plots:
        from .report import render_verify

        png = render_verify(groups, _plot_path(cfg.out, "verify.png"))
        payload["plot"] = str(png)
    _emit(payload, cfg.out)
    return EXIT_OK if all_pass else EXIT_FAIL


def cmd_oracle(cfg: RunConfig) -> int:
    g = load_instance(cfg.instance, cfg.fmt)
    if g.n > MAX_ORACLE_QUBITS:
        raise OracleError(f"oracle requires n <= {MAX_ORACLE_QUBITS}, got {g.n}")
    report = measure_ratio(g, audit_star_bound=cfg.audit_star)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "constants": constants_block(),
        "instance": str(cfg.instance),
        **report,
    }
    _emit(payload, cfg.out)
    return EXIT_OK


BENCH_COLUMNS = [
    "schema_version",
    "instance",
    "n",
    "num_edges",
    "lp_value",
    "upper_bound",
    "achieved",
    "lambda_max",
    "ratio_vs_upper_bound",
    "ratio_vs_lambda_max",
    "certificate_pass",
    "wall_time_s",
]


def cmd_bench(cfg: RunConfig) -> int:
    instances = corpus_small(include_heavy=cfg.heavy)
    if cfg.limit is not None:
        instances = instances[: cfg.limit]
    rows = []
    for t, (name, g) in enumerate(instances):
        t0 = time.perf_counter()
        try:
            rep = measure_ratio(g)
        except Exception as exc:  # keep the sweep alive; record the failure
            _status(f"[{t + 1}/{len(instances)}] {name}: ERROR {exc}")
            rows.append({"schema_version": SCHEMA_VERSION, "instance": name, "n": g.n,
                         "num_edges": g.num_edges, "certificate_pass": f"error: {exc}"})
            continue
        wall = time.perf_counter() - t0
        rows.append(
            {
                "schema_version": SCHEMA_VERSION,
                "instance": name,
                "n": rep["n"],
                "num_edges": rep["num_edges"],
                "lp_value": rep["lp_value"],
                "upper_bound": rep["upper_bound"],
                "achieved": rep["achieved"],
                "lambda_max": "" if rep["lambda_max"] is None else rep["lambda_max"],
                "ratio_vs_upper_bound": rep["ratio_vs_upper_bound"],
                "ratio_vs_lambda_max": ""
                if rep["ratio_vs_lambda_max"] is None
                else rep["ratio_vs_lambda_max"],
                "certificate_pass": rep["certificate_pass"],
                "wall_time_s": f"{wall:.4f}",
            }
        )
        if (t + 1) % 25 == 0:
            _status(f"[{t + 1}/{len(instances)}] done")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, extrasaction="ignore", restval="")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    text = buf.getvalue()
    if cfg.out is not None:
        cfg.out.write_text(text)
        _status(f"wrote {cfg.out}")
    else:
        sys.stdout.write(text)
    if cfg.plots:
        from .report import render_bench

        numeric = [r for r in rows if not str(r.get("certificate_pass", "")).startswith("error")]
        for r in numeric:
            r["ratio_vs_lambda_max"] = float(r["ratio_vs_lambda_max"]) if r["ratio_vs_lambda_max"] else None
            r["ratio_vs_upper_bound"] = float(r["ratio_vs_upper_bound"])
        png = render_bench(numeric, _plot_path(cfg.out, "bench.png"))
        _status(f"wrote {png}")
    return EXIT_OK


def cmd_gen(cfg: RunConfig) -> int:
    g = generate(cfg.family, **cfg.params)
    if cfg.out is not None:
        g.save(cfg.out, "json" if cfg.out.suffix == ".json" else "edgelist")
        _status(f"wrote {cfg.out}")
    else:
        lines = [str(g.n)] + [f"{i} {j} {w!r}" for i, j, w in g.edges]
        print("\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epr",
        description="Approximation pipeline and verifiers for the EPR ground-energy problem.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, instance: bool = True) -> None:
        if instance:
            p.add_argument("instance", type=Path, help="instance file (edge list or JSON)")
            p.add_argument("--format", dest="fmt", choices=["edgelist", "json"], default=None)
        p.add_argument("--out", type=Path, default=None, help="write the report here as well")
        p.add_argument("--data-dir", type=Path, default=None,
                       help="cycle-state cache directory (default: packaged data or EPR_DATA_DIR)")
        p.add_argument("--seed", type=int, default=0)

    p_solve = sub.add_parser("solve", help="run the pipeline and emit a certificate")
    common(p_solve)
    p_solve.add_argument("--algorithm", choices=["main", "baseline34"], default="main")
    p_solve.add_argument("--p", type=float, default=0.5, help="baseline mixing probability")
    p_solve.add_argument("--cert-tol", type=float, default=1e-9)
    p_solve.add_argument("--audit-all-pairs", action="store_true")
    p_solve.add_argument("--qmc", action="store_true",
                         help="treat the instance as bipartite QMC; record the Y-frame")
    p_solve.add_argument("--plots", action="store_true", help="render the certificate figure")

    p_lp = sub.add_parser("lp", help="solve the fractional matching LP")
    common(p_lp)

    p_synth = sub.add_parser("synth", help="synthesize and cache cycle states")
    common(p_synth, instance=False)
    p_synth.add_argument("--k", choices=["3", "5", "psi", "all"], required=True)

    p_v5 = sub.add_parser("verify-lemma5", help="verify cycle-state guarantees for one k")
    common(p_v5, instance=False)
    p_v5.add_argument("--k", required=True)

    p_verify = sub.add_parser("verify", help="run the full inequality verification suite")
    common(p_verify, instance=False)
    p_verify.add_argument("--k", dest="ks", type=int, action="append", default=None,
                          help="restrict cycle-state checks to these k (repeatable)")
    p_verify.add_argument("--plots", action="store_true", help="render the margin figure")

    p_oracle = sub.add_parser("oracle", help="exact ground truth for a small instance")
    common(p_oracle)
    p_oracle.add_argument("--audit-star", action="store_true")

    p_bench = sub.add_parser("bench", help="sweep the corpus and emit CSV")
    common(p_bench, instance=False)
    p_bench.add_argument("--heavy", action="store_true", help="include the n=12 instance")
    p_bench.add_argument("--limit", type=int, default=None)
    p_bench.add_argument("--plots", action="store_true", help="render the ratio figure")

    p_gen = sub.add_parser("gen", help="generate a test instance")
    p_gen.add_argument("family",
                       choices=["random_gnp", "cycle", "complete", "bipartite_random", "star"])
    p_gen.add_argument("--out", type=Path, default=None)
    p_gen.add_argument("--n", type=int)
    p_gen.add_argument("--k", type=int)
    p_gen.add_argument("--na", type=int)
    p_gen.add_argument("--nb", type=int)
    p_gen.add_argument("--p", type=float)
    p_gen.add_argument("--leaves", type=int)
    p_gen.add_argument("--weight", type=float)
    p_gen.add_argument("--weights", choices=["uniform", "unit"])
    p_gen.add_argument("--seed", type=int, default=0)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.command == "gen":
        params = {
            key: getattr(args, key)
            for key in ("n", "k", "na", "nb", "p", "leaves", "weight", "weights", "seed")
            if getattr(args, key, None) is not None
        }
        return RunConfig(command="gen", family=args.family, out=args.out, params=params)
    ks = tuple(args.ks) if getattr(args, "ks", None) else DEFAULT_LEMMA5_KS
    return RunConfig(
        command=args.command,
        instance=getattr(args, "instance", None),
        fmt=getattr(args, "fmt", None),
        algorithm=getattr(args, "algorithm", "main"),
        out=getattr(args, "out", None),
        seed=getattr(args, "seed", 0),
        data_dir=getattr(args, "data_dir", None),
        audit_all_pairs=getattr(args, "audit_all_pairs", False),
        audit_star=getattr(args, "audit_star", False),
        plots=getattr(args, "plots", False),
        qmc=getattr(args, "qmc", False),
        heavy=getattr(args, "heavy", False),
        limit=getattr(args, "limit", None),
        k=getattr(args, "k", None),
        ks=ks,
        cert_tol=getattr(args, "cert_tol", 1e-9),
        p=getattr(args, "p", 0.5),
    )


COMMANDS = {
    "solve": cmd_solve,
    "lp": cmd_lp,
    "synth": cmd_synth,
    "verify-lemma5": cmd_verify_lemma5,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "bench": cmd_bench,
    "gen": cmd_gen,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except SynthesisFailed as exc:
        _status(f"synthesis error: {exc}")
        return EXIT_SYNTH
    except (InstanceError, OracleError, FileNotFoundError, ValueError, KeyError) as exc:
        _status(f"input error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
