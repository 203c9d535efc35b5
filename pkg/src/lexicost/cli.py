"""Command-line front end: learn one task, benchmark a suite, analyze results.

Exit codes are a stable API: 0 success, 2 usage or input error, 3 resource
limit.  JSON is the machine interface; metric values are printed with four
decimals.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import analytics
from .analytics import ResultRow, STATUS_OK, analyze_results, read_results_csv, write_results_csv
from .combiner import dump_problem
from .cost import parse_cost_spec
from .engine import LearnOptions, LearnResult, evaluate_on_test, learn
from .errors import LexicostError, ParseError, ResourceLimitError
from .evaluator import Confusion
from .kb import Atom, Task, parse_bias, parse_examples, parse_facts, render_program

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _round4(x: float) -> float:
    return round(x, 4)


def _metric_json(conf: Confusion) -> dict:
    rep = analytics.metrics(conf)
    return {
        "accuracy": _round4(rep.accuracy),
        "balanced_accuracy": _round4(rep.balanced_accuracy),
        "precision": _round4(rep.precision),
        "recall": _round4(rep.recall),
        "flags": sorted(rep.flags),
        "tp": conf.tp,
        "fp": conf.fp,
        "tn": conf.tn,
        "fn": conf.fn,
    }


def _result_json(result: LearnResult, test_conf: Confusion | None) -> dict:
    out = {
        "hypothesis": [str(r) for r in result.best.rules],
        "cost": list(result.cost),
        "train": {
            "tp": result.train_conf.tp,
            "fp": result.train_conf.fp,
            "tn": result.train_conf.tn,
            "fn": result.train_conf.fn,
        },
        "stats": {
            "generated": result.stats.generated,
            "tested": result.stats.tested,
            "promising": result.stats.promising,
            "combine_calls": result.stats.combine_calls,
        },
        "proof": result.proof,
    }
    if test_conf is not None:
        out["test"] = _metric_json(test_conf)
    return out


def cmd_learn(args: argparse.Namespace) -> int:
    try:
        bk_text = Path(args.bk).read_text()
        exs_text = Path(args.exs).read_text()
        bias_text = Path(args.bias).read_text()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    spec = parse_cost_spec(args.cost)
    task = Task(
        bk_facts=parse_facts(bk_text),
        pos=(pn := parse_examples(exs_text))[0],
        neg=pn[1],
        bias=parse_bias(bias_text),
    )
    options = LearnOptions(
        spec=spec,
        max_size=args.max_size,
        candidate_cap=args.candidate_cap,
        combine_every=args.combine_every,
    )
    result = learn(task, options)

    test_conf = None
    if args.test_exs:
        test_pos, test_neg = parse_examples(Path(args.test_exs).read_text())
        test_conf = evaluate_on_test(result, task, test_pos, test_neg)

    if args.dump_combine:
        text = dump_problem(result.final_problem) if result.final_problem else ""
        Path(args.dump_combine).write_text(text + ("\n" if text else ""))

    payload = _result_json(result, test_conf)
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        hyp = render_program(result.best) or "<empty hypothesis>"
        print(hyp)
        print(f"cost: {list(result.cost)}  proof: {result.proof}")
        tc = result.train_conf
        print(f"train: tp={tc.tp} fp={tc.fp} tn={tc.tn} fn={tc.fn}")
        if test_conf is not None:
            rep = payload["test"]
            print(
                "test: accuracy={accuracy:.4f} balanced={balanced_accuracy:.4f} "
                "precision={precision:.4f} recall={recall:.4f}".format(**rep)
            )
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteConfig:
    root_dir: Path
    cost_fns: tuple[str, ...]
    repeats: int = 3
    split: float | None = None
    seed: int = 0
    output: Path = Path("results.csv")
    timing: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.repeats < 1:
            raise LexicostError("repeats must be >= 1")
        if self.split is not None and not (0.0 < self.split < 1.0):
            raise LexicostError("split must lie strictly between 0 and 1")


def discover_tasks(root: Path) -> list[tuple[str, str, Path]]:
    """(domain, task, dir) triples: every directory under root with bias.txt."""
    out = []
    for bias_file in sorted(root.rglob("bias.txt")):
        d = bias_file.parent
        rel = d.relative_to(root)
        parts = rel.parts
        if not parts:
            domain = task = root.name
        elif len(parts) == 1:
            domain = task = parts[0]
        else:
            domain, task = parts[0], "/".join(parts[1:])
        out.append((domain, task, d))
    return out


def _split_seed(seed: int, domain: str, task: str, repeat: int) -> int:
    digest = hashlib.sha256(f"{seed}:{domain}/{task}:{repeat}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def stratified_split(
    pos: tuple[Atom, ...],
    neg: tuple[Atom, ...],
    fraction: float,
    rng: random.Random,
):
    """Deterministic train/test split preserving the pos/neg ratio.

    The training side always keeps at least one positive, and leaves at least
    one positive for testing whenever two or more exist.
    """

    def cut(items, lo):
        order = list(items)
        rng.shuffle(order)
        n_train = round(fraction * len(order))
        n_train = max(lo, min(n_train, len(order) - (1 if len(order) > lo else 0)))
        return tuple(order[:n_train]), tuple(order[n_train:])

    train_pos, test_pos = cut(pos, 1)
    train_neg, test_neg = cut(neg, 0) if neg else ((), ())
    return train_pos, train_neg, test_pos, test_neg


def _bench_job(job: dict) -> ResultRow:
    base = dict(
        domain=job["domain"],
        task=job["task"],
        repeat=job["repeat"],
        cost_fn=job["cost_fn"],
    )
    try:
        pos, neg = parse_examples(job["exs_text"])
        bias = parse_bias(job["bias_text"])
        facts = parse_facts(job["bk_text"])

        test_pos: tuple[Atom, ...] = ()
        test_neg: tuple[Atom, ...] = ()
        if job["split"] is not None:
            rng = random.Random(
                _split_seed(job["seed"], job["domain"], job["task"], job["repeat"])
            )
            pos, neg, test_pos, test_neg = stratified_split(
                pos, neg, job["split"], rng
            )
        elif job["test_text"] is not None:
            test_pos, test_neg = parse_examples(job["test_text"])

        task = Task(bk_facts=facts, pos=pos, neg=neg, bias=bias)
        spec = parse_cost_spec(job["cost_fn"])
        started = time.perf_counter()
        result = learn(task, LearnOptions(spec=spec))
        elapsed_ms = int((time.perf_counter() - started) * 1000)

        if test_pos or test_neg:
            conf = evaluate_on_test(result, task, test_pos, test_neg)
        else:
            conf = result.train_conf
        return ResultRow(
            **base,
            tp=conf.tp,
            fp=conf.fp,
            tn=conf.tn,
            fn=conf.fn,
            size=result.best.size,
            cost_vector="[" + ",".join(str(v) for v in result.cost) + "]",
            runtime_ms=elapsed_ms if job["timing"] else 0,
            status=STATUS_OK,
        )
    except ResourceLimitError:
        return ResultRow(**base, status="resource_limit")
    except ParseError:
        return ResultRow(**base, status="parse_error")
    except LexicostError:
        return ResultRow(**base, status="error")


def run_bench(config: SuiteConfig) -> str:
    """Run every (task x cost_fn x repeat) and return the results CSV text."""
    jobs = []
    rows: list[ResultRow] = []
    for domain, task, d in discover_tasks(config.root_dir):
        try:
            bk_text = (d / "bk.datalog").read_text()
            exs_text = (d / "exs.datalog").read_text()
            bias_text = (d / "bias.txt").read_text()
            test_path = d / "test_exs.datalog"
            test_text = test_path.read_text() if test_path.exists() else None
        except OSError:
            for cost_fn in config.cost_fns:
                for repeat in range(1, config.repeats + 1):
                    rows.append(
                        ResultRow(
                            domain=domain,
                            task=task,
                            repeat=repeat,
                            cost_fn=cost_fn,
                            status="io_error",
                        )
                    )
            continue
        for cost_fn in config.cost_fns:
            for repeat in range(1, config.repeats + 1):
                jobs.append(
                    dict(
                        domain=domain,
                        task=task,
                        repeat=repeat,
                        cost_fn=cost_fn,
                        bk_text=bk_text,
                        exs_text=exs_text,
                        bias_text=bias_text,
                        test_text=test_text,
                        split=config.split,
                        seed=config.seed,
                        timing=config.timing,
                    )
                )

    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows.extend(pool.map(_bench_job, jobs))
    else:
        rows.extend(_bench_job(job) for job in jobs)
    return write_results_csv(rows)


def _worker_count(requested: int | None) -> int:
    cap = os.environ.get("LEXICOST_THREADS")
    workers = requested if requested is not None else (int(cap) if cap else 1)
    if cap:
        workers = min(workers, int(cap))
    return max(workers, 1)


def cmd_bench(args: argparse.Namespace) -> int:
    config = SuiteConfig(
        root_dir=Path(args.root),
        cost_fns=tuple(c.strip() for c in args.costs.split(",") if c.strip()),
        repeats=args.repeats,
        split=args.split,
        seed=args.seed,
        output=Path(args.out),
        timing=not args.no_timing,
        workers=_worker_count(args.workers),
    )
    for name in config.cost_fns:
        parse_cost_spec(name)
    csv_text = run_bench(config)
    config.output.write_text(csv_text)
    print(f"wrote {config.output}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def _write_analysis_csvs(report: dict, out_dir: Path) -> None:
    import csv as _csv

    out_dir.mkdir(parents=True, exist_ok=True)
    fns = report["cost_fns"]

    with open(out_dir / "overall_means.csv", "w", newline="") as fh:
        w = _csv.writer(fh, lineterminator="\n")
        w.writerow(["cost_fn", "accuracy_mean"])
        for fn in fns:
            v = report["overall_accuracy_mean"][fn]
            w.writerow([fn, "" if v is None else f"{v:.4f}"])

    with open(out_dir / "rank_table.csv", "w", newline="") as fh:
        w = _csv.writer(fh, lineterminator="\n")
        w.writerow(["cost_fn", "rank1", "rank2", "rank3"])
        for fn in fns:
            w.writerow([fn, *report["rank_table"][fn]])

    with open(out_dir / "pearson_accuracy.csv", "w", newline="") as fh:
        w = _csv.writer(fh, lineterminator="\n")
        w.writerow(["cost_fn", *fns])
        for f1 in fns:
            row = [f1]
            for f2 in fns:
                v = report["pearson_accuracy"][f1][f2]
                row.append("" if v is None else f"{v:.4f}")
            w.writerow(row)

    with open(out_dir / "wilcoxon_p.csv", "w", newline="") as fh:
        w = _csv.writer(fh, lineterminator="\n")
        w.writerow(["pair", "p_value"])
        for pair, p in sorted(report["wilcoxon_accuracy_p"].items()):
            w.writerow([pair, "" if p is None else f"{p:.6f}"])

    with open(out_dir / "per_domain.csv", "w", newline="") as fh:
        w = _csv.writer(fh, lineterminator="\n")
        w.writerow(["cost_fn", "domain", "n_tasks",
                    *(f"{m}_mean" for m in analytics.METRIC_NAMES),
                    *(f"{m}_stderr" for m in analytics.METRIC_NAMES)])
        for fn in fns:
            for domain, agg in sorted(report["per_domain"][fn].items()):
                w.writerow([
                    fn, domain, agg["n_tasks"],
                    *(f"{agg['mean'][m]:.4f}" for m in analytics.METRIC_NAMES),
                    *(f"{agg['stderr'][m]:.4f}" for m in analytics.METRIC_NAMES),
                ])


def _round_floats(obj):
    if isinstance(obj, float):
        return _round4(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round_floats(v) for v in obj]
    return obj


def cmd_analyze(args: argparse.Namespace) -> int:
    try:
        text = Path(args.results).read_text()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rows = read_results_csv(text)
    report = analyze_results(rows)
    if args.out_dir:
        _write_analysis_csvs(report, Path(args.out_dir))
    print(json.dumps(_round_floats(report), indent=2))
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexicost",
        description="Learn optimal logic programs under lexicographic cost functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="learn a hypothesis for one task")
    p.add_argument("--bk", required=True, help="background facts file")
    p.add_argument("--exs", required=True, help="training examples file")
    p.add_argument("--bias", required=True, help="bias directives file")
    p.add_argument("--cost", required=True,
                   help="cost function name or custom:fp+fn,size syntax")
    p.add_argument("--test-exs", help="held-out examples file")
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--candidate-cap", type=int, default=None)
    p.add_argument("--combine-every", type=int, default=1)
    p.add_argument("--dump-combine", metavar="PATH",
                   help="write the final combine problem to PATH")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("bench", help="run a task suite and write a results CSV")
    p.add_argument("--root", required=True, help="directory of task directories")
    p.add_argument("--costs", default=",".join(
        ("error", "errorsize", "fnfp", "fnfpsize", "fpfn", "fpfnsize", "mdl")))
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--split", type=float, default=None,
                   help="train fraction for a random stratified split")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="results.csv")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (capped by LEXICOST_THREADS)")
    p.add_argument("--no-timing", action="store_true",
                   help="write runtime_ms as 0 for byte-reproducible output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("analyze", help="aggregate a results CSV")
    p.add_argument("results", help="results CSV produced by bench")
    p.add_argument("--out-dir", help="also write aggregate CSV files here")
    p.set_defaults(func=cmd_analyze)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except LexicostError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
