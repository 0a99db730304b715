"""Command-line front end.

One executable, one subcommand per pipeline stage. Global options
(--config, --seed, --jobs) come before the subcommand; a config file sets
defaults and explicit flags win over it. Exit codes: 0 success, 1 any
validation failure (bad flags, bad schema, bad values), 2 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .diversity import build_similarity, select_diverse, subset_objective
from .errors import RepairEvalError, SchemaError
from .harness import (
    RunConfig,
    build_rollout_group,
    emit_report,
    iter_ingest,
    load_config,
    parse_report,
    run_eval,
    run_reward,
    _iter_jsonl,
)
from .metrics import as_ratio
from .normalize import Language, SourceText, normalize, render
from .specdecode import (
    SimTrace,
    profile,
    simulate_geometric,
    simulate_prompt_lookup,
)

LANG_CHOICES = [m.value for m in Language]


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract reserves 2 for
    # I/O problems, so route usage errors to the validation exit code.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self._exit_code(message))

    @staticmethod
    def _exit_code(message):
        sys.stderr.write(f"repaireval: error: {message}\n")
        return 1


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_text(path, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _add_language(p, default=None):
    p.add_argument(
        "--language",
        choices=LANG_CHOICES,
        default=default,
        help="language tag selecting comment syntax"
        + ("" if default is None else f" (default: {default})"),
    )


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="repaireval",
        description="Evaluate program-repair outputs: edit costs, fix metrics, "
        "diverse sampling, group rewards, speculative-edit throughput.",
    )
    parser.add_argument("--config", metavar="FILE", help="key = value defaults file")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (default 0)")
    parser.add_argument("--jobs", type=int, default=None, help="worker threads (default 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="canonicalize a source file")
    p.add_argument("input", help="path to source text, or - for stdin")
    _add_language(p, "plain")
    p.add_argument("--mode", choices=["line", "token"], default="line")
    p.add_argument("--json", action="store_true", help="emit lines/tokens as JSON")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("editcost", help="edit cost between two source files")
    p.add_argument("source")
    p.add_argument("target")
    _add_language(p, "plain")
    p.add_argument("--granularity", choices=["line", "token"], default=None)
    p.add_argument("--no-normalize", action="store_true", help="compare raw split lines")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("metrics", help="aggregate pass/fix metrics over a JSONL dataset")
    p.add_argument("-i", "--input", required=True, help="JSONL task records")
    p.add_argument("--ks", default=None, help="comma list, e.g. 1,5,10")
    p.add_argument("--ps", default=None, help="comma list of ratios, e.g. 1,1.5,2")
    p.add_argument("--n", type=int, default=None, help="expected candidates per task")
    p.add_argument("--granularity", choices=["line", "token"], default=None)
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("--format", choices=["json", "csv", "markdown"], default="json")
    p.add_argument("--details", default=None, help="also write per-task rows (JSON)")
    p.add_argument("--rejects", default=None, help="write skipped records (JSONL)")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("sample", help="pick a maximally diverse subset of programs")
    p.add_argument("-i", "--input", required=True, help="JSONL programs: {\"text\": ...}")
    p.add_argument("-k", type=int, required=True, help="subset size")
    p.add_argument("--strategy", choices=["exact", "greedy"], default=None)
    p.add_argument("--budget", type=int, default=None, help="exact enumeration cap")
    _add_language(p, "plain")
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("reward", help="reward/advantage vectors for rollout groups")
    p.add_argument("-i", "--input", required=True, help="JSONL rollout groups")
    p.add_argument("--alpha", default=None, help="activation threshold in [0, 1.1]")
    p.add_argument("--beta", default=None, help="penalty strength in [0, 1]")
    p.add_argument("--std", choices=["population", "sample"], default=None)
    _add_language(p, "plain")
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("--rejects", default=None, help="write bad lines (JSONL)")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("spec-sim", help="speculative-edit throughput sweeps and simulators")
    p.add_argument("--mode", choices=["sweep", "geometric", "lookup"], default="sweep")
    p.add_argument("--d-ec", default="0.05,0.1,0.2,0.3,0.5", help="sweep: comma list of edit costs")
    p.add_argument("--window", default="8", help="draft window(s); comma list in sweep mode")
    p.add_argument("--r", type=float, default=None, help="geometric: acceptance rate")
    p.add_argument("--steps", type=int, default=100_000, help="geometric: step count")
    p.add_argument("--buggy", default=None, help="lookup: buggy source path")
    p.add_argument("--fixed", default=None, help="lookup: fixed source path")
    p.add_argument("--ngram", type=int, default=None, help="lookup: anchor length")
    _add_language(p, "plain")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("report", help="re-render a JSON report as csv/markdown/json")
    p.add_argument("-i", "--input", required=True, help="report JSON from `metrics`")
    p.add_argument("--format", choices=["json", "csv", "markdown"], default="markdown")
    p.add_argument("-o", "--output", default=None)

    return parser


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    overrides = load_config(args.config) if args.config else {}
    flag_map = {
        "seed": args.seed,
        "jobs": args.jobs,
        "ks": tuple(int(s) for s in args.ks.split(",")) if getattr(args, "ks", None) else None,
        "ps": tuple(as_ratio(s) for s in args.ps.split(",")) if getattr(args, "ps", None) else None,
        "n_expected": getattr(args, "n", None),
        "granularity": getattr(args, "granularity", None),
        "alpha": as_ratio(args.alpha) if getattr(args, "alpha", None) is not None else None,
        "beta": as_ratio(args.beta) if getattr(args, "beta", None) is not None else None,
        "std": getattr(args, "std", None),
        "ngram": getattr(args, "ngram", None),
        "strategy": getattr(args, "strategy", None),
        "budget": getattr(args, "budget", None),
    }
    for key, value in overrides.items():
        setattr(cfg, key, value)
    for key, value in flag_map.items():
        if value is not None:
            setattr(cfg, key, value)
    if getattr(args, "no_normalize", False):
        cfg.normalization = False
    # spec-sim reuses --window as a comma list; RunConfig keeps a single int
    if getattr(args, "command", "") != "spec-sim" and getattr(args, "window", None):
        cfg.window = int(args.window)
    return cfg.validate()


def _cmd_normalize(args, cfg) -> int:
    prog = normalize(SourceText(_read_text(args.input), args.language), args.mode)
    if args.json:
        doc = {"language": prog.source_language.value, "lines": list(prog.lines)}
        if args.mode == "token":
            doc["tokens"] = list(prog.tokens)
        _write_text(args.output, json.dumps(doc, indent=2) + "\n")
    else:
        items = prog.tokens if args.mode == "token" else prog.lines
        _write_text(args.output, "\n".join(items) + ("\n" if items else ""))
    return 0


def _cmd_editcost(args, cfg) -> int:
    from .editcost import edit_cost_sequences
    from .normalize import tokens_of

    texts = [_read_text(args.source), _read_text(args.target)]
    gran = cfg.granularity
    seqs = []
    for text in texts:
        if cfg.normalization:
            prog = normalize(SourceText(text, args.language), "token" if gran == "token" else "line")
            seqs.append(prog.tokens if gran == "token" else prog.lines)
        else:
            raw = tuple(text.splitlines())
            seqs.append(tokens_of(raw) if gran == "token" else raw)
    r = edit_cost_sequences(seqs[0], seqs[1], gran)
    doc = {
        "distance": r.distance,
        "source_length": r.source_length,
        "edit_cost": float(r.edit_cost),
        "edit_cost_exact": f"{r.edit_cost.numerator}/{r.edit_cost.denominator}",
        "granularity": r.granularity,
    }
    _write_text(args.output, json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_metrics(args, cfg) -> int:
    rejections = []
    result = run_eval(iter_ingest(args.input, rejections.append), cfg)
    text = emit_report(result.report, args.format, details=result.details if args.format == "json" else None)
    _write_text(args.output, text)
    if args.details:
        detail_doc = emit_report(result.report, "json", details=result.details)
        _write_text(args.details, detail_doc)
    if args.rejects:
        lines = [
            json.dumps({"line": r.line_no, "task_id": r.task_id, "reason": r.reason})
            for r in rejections
        ]
        _write_text(args.rejects, "".join(s + "\n" for s in lines))
    if rejections:
        sys.stderr.write(f"repaireval: skipped {len(rejections)} record(s)\n")
    return 0


def _cmd_sample(args, cfg) -> int:
    programs = []
    ids = []
    for line_no, obj in _iter_jsonl(args.input):
        text = obj.get("text")
        if not isinstance(text, str):
            raise SchemaError(f"line {line_no}: field 'text' must be a string")
        lang = obj.get("language", args.language)
        if cfg.normalization:
            programs.append(normalize(SourceText(text, lang)))
        else:
            programs.append(tuple(text.splitlines()))
        ids.append(obj.get("id", f"item-{line_no}"))
    sim = build_similarity(programs)
    chosen = select_diverse(sim, args.k, strategy=cfg.strategy, budget=cfg.budget)
    doc = {
        "strategy": cfg.strategy,
        "k": args.k,
        "m": sim.m,
        "selected": list(chosen),
        "selected_ids": [ids[i] for i in chosen],
        "objective": subset_objective(sim, chosen),
    }
    _write_text(args.output, json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_reward(args, cfg) -> int:
    rejects = []

    def groups():
        for line_no, obj in _iter_jsonl(args.input):
            try:
                yield build_rollout_group(obj, cfg, line_no, default_language=args.language)
            except RepairEvalError as e:
                rejects.append({"line": line_no, "error": str(e)})

    out_lines = [json.dumps(row) for row in run_reward(groups(), cfg)]
    _write_text(args.output, "".join(s + "\n" for s in out_lines))
    if args.rejects:
        _write_text(args.rejects, "".join(json.dumps(r) + "\n" for r in rejects))
    if rejects:
        sys.stderr.write(f"repaireval: skipped {len(rejects)} group(s)\n")
    return 0


def _trace_doc(trace: SimTrace) -> dict:
    return {
        "trials": trace.trials,
        "accepted_tokens": trace.accepted_tokens,
        "draft_tokens": trace.draft_tokens,
        "empirical_acceptance": trace.empirical_acceptance,
        "empirical_expected_tokens": trace.empirical_expected_tokens,
        "seed": trace.seed,
    }


def _parse_numbers(text: str, conv, flag: str) -> list:
    try:
        values = [conv(s) for s in str(text).split(",") if s.strip()]
    except ValueError:
        raise SchemaError(f"bad value for {flag}: {text!r}") from None
    if not values:
        raise SchemaError(f"{flag} needs at least one value")
    return values


def _cmd_spec_sim(args, cfg) -> int:
    if args.mode == "sweep":
        d_values = _parse_numbers(args.d_ec, float, "--d-ec")
        windows = _parse_numbers(args.window, int, "--window")
        rows = [profile(d, w) for d in d_values for w in windows]
        if args.format == "csv":
            lines = ["d_ec,window,acceptance,expected_tokens,relative_throughput"]
            for p in rows:
                lines.append(
                    f"{p.d_ec!r},{p.window},{p.acceptance!r},"
                    f"{p.expected_tokens!r},{p.relative_throughput!r}"
                )
            _write_text(args.output, "\n".join(lines) + "\n")
        else:
            doc = [
                {
                    "d_ec": p.d_ec,
                    "window": p.window,
                    "acceptance": p.acceptance,
                    "expected_tokens": p.expected_tokens,
                    "relative_throughput": p.relative_throughput,
                }
                for p in rows
            ]
            _write_text(args.output, json.dumps(doc, indent=2) + "\n")
        return 0
    window = _parse_numbers(args.window, int, "--window")[0]
    if args.mode == "geometric":
        if args.r is None:
            raise SchemaError("spec-sim --mode geometric requires --r")
        if not 0.0 <= args.r <= 1.0:
            raise SchemaError(f"--r must be in [0, 1], got {args.r}")
        if args.steps < 1:
            raise SchemaError(f"--steps must be >= 1, got {args.steps}")
        trace = simulate_geometric(args.r, window, args.steps, cfg.seed)
        _write_text(args.output, json.dumps(_trace_doc(trace), indent=2) + "\n")
        return 0
    if args.buggy is None or args.fixed is None:
        raise SchemaError("spec-sim --mode lookup requires --buggy and --fixed")
    buggy = normalize(SourceText(_read_text(args.buggy), args.language))
    fixed = normalize(SourceText(_read_text(args.fixed), args.language))
    trace = simulate_prompt_lookup(buggy, fixed, ngram=cfg.ngram, window=window)
    _write_text(args.output, json.dumps(_trace_doc(trace), indent=2) + "\n")
    return 0


def _cmd_report(args, cfg) -> int:
    report = parse_report(_read_text(args.input))
    _write_text(args.output, emit_report(report, args.format))
    return 0


_HANDLERS = {
    "normalize": _cmd_normalize,
    "editcost": _cmd_editcost,
    "metrics": _cmd_metrics,
    "sample": _cmd_sample,
    "reward": _cmd_reward,
    "spec-sim": _cmd_spec_sim,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config_from_args(args)
        return _HANDLERS[args.command](args, cfg)
    except RepairEvalError as e:
        sys.stderr.write(f"repaireval: error: {e}\n")
        return 1
    except (ValueError, ZeroDivisionError) as e:
        # bad numeric literals in user-supplied flag/config values
        sys.stderr.write(f"repaireval: error: {e}\n")
        return 1
    except OSError as e:
        sys.stderr.write(f"repaireval: i/o error: {e}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
