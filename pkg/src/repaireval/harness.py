"""Dataset ingestion, batch evaluation, reward runs, and report emission.

Input datasets are JSONL: one task or rollout group per line. Ingestion
validates shape strictly (bad JSON or a bad schema aborts with a line
number) but skips semantically unusable records (duplicate ids, a golden
fix identical to the buggy program after normalization, a buggy program
that normalizes to nothing) and reports each skip with a reason.

All evaluation work is pure per-record computation, so --jobs fans out
over an ordered batched thread map and every output stays byte-identical
regardless of worker count.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .editcost import edit_cost_sequences
from .errors import (
    DomainError,
    InconsistentN,
    ParseError,
    SchemaError,
)
from .metrics import (
    DEFAULT_KS,
    DEFAULT_PS,
    CandidateOutcome,
    MetricReport,
    TaskOutcomes,
    as_ratio,
    fix_count,
    format_ratio,
    report as metric_report,
)
from .normalize import Language, SourceText, normalize, tokens_of
from .reward import DEFAULT_ALPHA, DEFAULT_BETA, RolloutGroup, advantages, rewards

__all__ = [
    "EvalRecord",
    "Rejection",
    "RunConfig",
    "TaskDetail",
    "EvalResult",
    "load_config",
    "ingest",
    "iter_ingest",
    "run_eval",
    "build_rollout_group",
    "run_reward",
    "emit_report",
    "parse_report",
]


@dataclass(frozen=True)
class EvalRecord:
    """One repair task: the buggy program, its golden fix, n candidates."""

    task_id: str
    language_tag: Language
    buggy: str
    golden: str
    candidates: tuple
    bug_category: "str | None" = None
    description: "str | None" = None


@dataclass(frozen=True)
class Rejection:
    """A skipped record and why it was skipped."""

    line_no: int
    task_id: "str | None"
    reason: str


@dataclass(frozen=True)
class TaskDetail:
    """Per-task evaluation row backing the aggregate report."""

    task_id: str
    golden_edit_cost: Fraction
    candidate_edit_costs: tuple
    correct: tuple
    c_pass: int
    c_fix: dict


@dataclass(frozen=True)
class EvalResult:
    report: MetricReport
    details: tuple


@dataclass
class RunConfig:
    """Batch-run settings; config file and CLI flags override the defaults."""

    ks: tuple = DEFAULT_KS
    ps: tuple = DEFAULT_PS
    alpha: Fraction = DEFAULT_ALPHA
    beta: Fraction = DEFAULT_BETA
    granularity: str = "line"
    normalization: bool = True
    n_expected: int = 20
    seed: int = 0
    jobs: int = 1
    std: str = "population"
    ngram: int = 2
    window: int = 8
    strategy: str = "exact"
    budget: int = 1_000_000

    def validate(self) -> "RunConfig":
        if self.granularity not in ("line", "token"):
            raise DomainError(f"granularity must be 'line' or 'token', got {self.granularity!r}")
        if self.std not in ("population", "sample"):
            raise DomainError(f"std must be 'population' or 'sample', got {self.std!r}")
        if self.strategy not in ("exact", "greedy"):
            raise DomainError(f"strategy must be 'exact' or 'greedy', got {self.strategy!r}")
        if not self.ks or any(k < 1 for k in self.ks):
            raise DomainError(f"ks must be positive integers, got {self.ks}")
        if not self.ps or any(p < 1 for p in self.ps):
            raise DomainError(f"ps must be ratios >= 1, got {self.ps}")
        if not Fraction(0) <= self.alpha <= Fraction(11, 10):
            raise DomainError(f"alpha must be in [0, 1.1], got {self.alpha}")
        if not Fraction(0) <= self.beta <= Fraction(1):
            raise DomainError(f"beta must be in [0, 1], got {self.beta}")
        for name in ("n_expected", "jobs", "ngram", "window", "budget"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be >= 1, got {getattr(self, name)}")
        return self


_CONFIG_KEYS = {
    "ks": lambda v: tuple(int(s) for s in _split_list(v)),
    "ps": lambda v: tuple(as_ratio(s) for s in _split_list(v)),
    "alpha": as_ratio,
    "beta": as_ratio,
    "granularity": str,
    "normalize": None,  # bool, handled below
    "n": int,
    "seed": int,
    "jobs": int,
    "std": str,
    "ngram": int,
    "window": int,
    "strategy": str,
    "budget": int,
}

_CONFIG_FIELD = {"normalize": "normalization", "n": "n_expected"}


def _split_list(v: str):
    parts = [s.strip() for s in str(v).split(",")]
    return [s for s in parts if s]


def _parse_bool(v: str) -> bool:
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise SchemaError(f"expected a boolean, got {v!r}")


def load_config(path: str) -> dict:
    """Parse a key = value config file into RunConfig field overrides.

    Blank lines and #-comments are ignored; unknown keys are SchemaErrors
    so typos fail loudly instead of silently keeping a default.
    """
    overrides: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SchemaError(f"{path}:{line_no}: expected 'key = value', got {raw.rstrip()!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _CONFIG_KEYS:
                raise SchemaError(f"{path}:{line_no}: unknown config key {key!r}")
            try:
                if key == "normalize":
                    parsed = _parse_bool(value)
                else:
                    parsed = _CONFIG_KEYS[key](value)
            except (ValueError, ZeroDivisionError) as e:
                raise SchemaError(f"{path}:{line_no}: bad value for {key!r}: {e}") from None
            overrides[_CONFIG_FIELD.get(key, key)] = parsed
    return overrides


def _require(obj: dict, key: str, typ, line_no: int):
    if key not in obj:
        raise SchemaError(f"line {line_no}: missing required field {key!r}")
    val = obj[key]
    if typ is bool:
        if not isinstance(val, bool):
            raise SchemaError(f"line {line_no}: field {key!r} must be a boolean")
    elif typ is str:
        if not isinstance(val, str):
            raise SchemaError(f"line {line_no}: field {key!r} must be a string")
    elif typ is list:
        if not isinstance(val, list):
            raise SchemaError(f"line {line_no}: field {key!r} must be a list")
    return val


def _parse_pairs(obj: dict, key: str, line_no: int) -> tuple:
    items = _require(obj, key, list, line_no)
    pairs = []
    for idx, entry in enumerate(items):
        if not isinstance(entry, dict):
            raise SchemaError(f"line {line_no}: {key}[{idx}] must be an object")
        text = entry.get("text")
        correct = entry.get("correct")
        if not isinstance(text, str):
            raise SchemaError(f"line {line_no}: {key}[{idx}].text must be a string")
        if not isinstance(correct, bool):
            raise SchemaError(f"line {line_no}: {key}[{idx}].correct must be a boolean")
        pairs.append((text, correct))
    return tuple(pairs)


def _iter_jsonl(path: str) -> Iterator[tuple[int, dict]]:
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as e:
                raise ParseError(line_no, f"invalid JSON: {e.msg}") from None
            if not isinstance(obj, dict):
                raise SchemaError(f"line {line_no}: expected a JSON object")
            yield line_no, obj


def iter_ingest(path: str, on_reject=None) -> Iterator[EvalRecord]:
    """Stream validated EvalRecords; skipped records go to on_reject.

    Memory stays bounded by one record (plus the seen-id set). Raises
    ParseError/SchemaError on malformed lines; semantic problems
    (duplicate task_id, golden identical to buggy after normalization,
    buggy with no semantic lines) are skipped, not raised.
    """
    seen: set = set()
    for line_no, obj in _iter_jsonl(path):
        task_id = _require(obj, "task_id", str, line_no)
        lang_raw = _require(obj, "language", str, line_no)
        try:
            lang = Language.coerce(lang_raw)
        except Exception:
            raise SchemaError(f"line {line_no}: unknown language tag {lang_raw!r}") from None
        buggy = _require(obj, "buggy", str, line_no)
        golden = _require(obj, "golden", str, line_no)
        candidates = _parse_pairs(obj, "candidates", line_no)
        record = EvalRecord(
            task_id=task_id,
            language_tag=lang,
            buggy=buggy,
            golden=golden,
            candidates=candidates,
            bug_category=obj.get("bug_category"),
            description=obj.get("description"),
        )
        reason = None
        if task_id in seen:
            reason = "duplicate task_id"
        else:
            b_norm = normalize(SourceText(buggy, lang))
            if not b_norm.lines:
                reason = "buggy program normalizes to an empty program"
            elif b_norm.lines == normalize(SourceText(golden, lang)).lines:
                reason = "golden fix is identical to the buggy program after normalization"
        if reason is not None:
            if on_reject is not None:
                on_reject(Rejection(line_no, task_id, reason))
            continue
        seen.add(task_id)
        yield record


def ingest(path: str) -> tuple:
    """Eager ingest: (records, rejections)."""
    rejections: list = []
    records = list(iter_ingest(path, rejections.append))
    return records, rejections


def _map_ordered(fn, items: Iterable, jobs: int, batch_size: int = 256) -> Iterator:
    items = iter(items)
    if jobs <= 1:
        for item in items:
            yield fn(item)
        return
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        while True:
            batch = list(itertools.islice(items, batch_size))
            if not batch:
                return
            yield from ex.map(fn, batch)


def _sequences(text: str, lang: Language, cfg: RunConfig) -> tuple:
    if cfg.normalization:
        mode = "token" if cfg.granularity == "token" else "line"
        prog = normalize(SourceText(text, lang), mode)
        return prog.tokens if cfg.granularity == "token" else prog.lines
    raw = tuple(text.splitlines())
    if cfg.granularity == "token":
        return tokens_of(raw)
    return raw


def _eval_one(record: EvalRecord, cfg: RunConfig) -> TaskDetail:
    if len(record.candidates) != cfg.n_expected:
        raise InconsistentN(
            f"task {record.task_id!r} has {len(record.candidates)} candidates, "
            f"expected {cfg.n_expected}"
        )
    src = _sequences(record.buggy, record.language_tag, cfg)
    gold = _sequences(record.golden, record.language_tag, cfg)
    golden_cost = edit_cost_sequences(src, gold, cfg.granularity).edit_cost
    costs = []
    flags = []
    for text, ok in record.candidates:
        cand = _sequences(text, record.language_tag, cfg)
        costs.append(edit_cost_sequences(src, cand, cfg.granularity).edit_cost)
        flags.append(bool(ok))
    outcomes = [
        CandidateOutcome(ok, cost, golden_cost) for ok, cost in zip(flags, costs)
    ]
    c_fix = {p: fix_count(outcomes, p) for p in cfg.ps}
    return TaskDetail(
        task_id=record.task_id,
        golden_edit_cost=golden_cost,
        candidate_edit_costs=tuple(costs),
        correct=tuple(flags),
        c_pass=sum(flags),
        c_fix=c_fix,
    )


def run_eval(records: Iterable[EvalRecord], cfg: "RunConfig | None" = None) -> EvalResult:
    """Evaluate records into a MetricReport plus per-task detail rows.

    Accepts any record iterable (including the streaming ingest); holds
    only the light detail rows, never the program texts. Detail rows come
    back sorted by task_id so output is order-independent.
    """
    cfg = (cfg or RunConfig()).validate()
    details = sorted(
        _map_ordered(lambda r: _eval_one(r, cfg), records, cfg.jobs),
        key=lambda d: d.task_id,
    )
    tasks = [
        TaskOutcomes(
            d.task_id,
            tuple(
                CandidateOutcome(ok, cost, d.golden_edit_cost)
                for ok, cost in zip(d.correct, d.candidate_edit_costs)
            ),
        )
        for d in details
    ]
    return EvalResult(report=metric_report(tasks, cfg.ks, cfg.ps), details=tuple(details))


def build_rollout_group(obj: dict, cfg: RunConfig, line_no: int = 0,
                        default_language: "Language | str" = Language.PLAIN) -> tuple:
    """(group_id, RolloutGroup) from one parsed JSONL object."""
    group_id = _require(obj, "group_id", str, line_no)
    lang = Language.coerce(obj.get("language", default_language))
    buggy_text = _require(obj, "buggy", str, line_no)
    samples = _parse_pairs(obj, "samples", line_no)
    if cfg.normalization:
        buggy = normalize(SourceText(buggy_text, lang))
        outs = [(normalize(SourceText(t, lang)), ok) for t, ok in samples]
    else:
        buggy = tuple(buggy_text.splitlines())
        outs = [(tuple(t.splitlines()), ok) for t, ok in samples]
    group = RolloutGroup(buggy=buggy, samples=tuple(outs), alpha=cfg.alpha, beta=cfg.beta)
    return group_id, group


def run_reward(groups: Iterable[tuple], cfg: "RunConfig | None" = None) -> Iterator[dict]:
    """Stream reward/advantage rows for (group_id, RolloutGroup) pairs."""
    cfg = (cfg or RunConfig()).validate()

    def work(item):
        group_id, group = item
        rv = rewards(group, cfg.std)
        av = advantages(rv, cfg.std)
        return {
            "group_id": group_id,
            "n_samples": len(group.samples),
            "activated": rv.activated,
            "group_accuracy": str(rv.group_accuracy),
            "rewards": list(rv.rewards),
            "penalties": list(rv.penalties),
            "advantages": list(av.advantages),
        }

    yield from _map_ordered(work, groups, cfg.jobs)


def _percent(v: Fraction) -> str:
    return f"{float(v) * 100:.2f}"


def emit_report(report: MetricReport, fmt: str = "json", details=None) -> str:
    """Serialize a MetricReport as json, csv, or a markdown table.

    JSON carries floats plus exact rationals (and per-task rows when
    details are given) and round-trips through parse_report; csv and
    markdown render percentages with two decimals.
    """
    if fmt == "json":
        doc: dict = {
            "n": report.n,
            "task_count": report.task_count,
            "ks": list(report.ks),
            "ps": [format_ratio(p) for p in report.ps],
            "metrics": {
                label: {
                    "value": float(v),
                    "exact": f"{v.numerator}/{v.denominator}",
                    "percent": _percent(v),
                }
                for label, v in report.labeled_values()
            },
        }
        if details is not None:
            doc["tasks"] = [
                {
                    "task_id": d.task_id,
                    "golden_edit_cost": float(d.golden_edit_cost),
                    "golden_edit_cost_exact": f"{d.golden_edit_cost.numerator}/{d.golden_edit_cost.denominator}",
                    "c_pass": d.c_pass,
                    "c_fix": {format_ratio(p): c for p, c in sorted(d.c_fix.items())},
                    "candidates": [
                        {
                            "correct": ok,
                            "edit_cost": float(cost),
                            "edit_cost_exact": f"{cost.numerator}/{cost.denominator}",
                        }
                        for ok, cost in zip(d.correct, d.candidate_edit_costs)
                    ],
                }
                for d in details
            ]
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        lines = ["metric,p,k,value,percent"]
        for k in report.ks:
            v = report.pass_at_k[k]
            lines.append(f"pass,,{k},{float(v)!r},{_percent(v)}")
        for p in report.ps:
            for k in report.ks:
                v = report.fix_at_k[(p, k)]
                lines.append(f"fix,{format_ratio(p)},{k},{float(v)!r},{_percent(v)}")
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        header = "| metric | " + " | ".join(f"k={k}" for k in report.ks) + " |"
        sep = "| --- |" + " --- |" * len(report.ks)
        rows = [header, sep]
        rows.append(
            "| pass | " + " | ".join(_percent(report.pass_at_k[k]) for k in report.ks) + " |"
        )
        for p in report.ps:
            rows.append(
                f"| fix_{format_ratio(p)} | "
                + " | ".join(_percent(report.fix_at_k[(p, k)]) for k in report.ks)
                + " |"
            )
        return "\n".join(rows) + "\n"
    raise DomainError(f"format must be 'json', 'csv', or 'markdown', got {fmt!r}")


def parse_report(text: str) -> MetricReport:
    """Rebuild a MetricReport from emit_report's JSON (exact values)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"not a valid JSON report: {e.msg}") from None
    try:
        ks = tuple(int(k) for k in doc["ks"])
        ps = tuple(as_ratio(p) for p in doc["ps"])
        metrics = doc["metrics"]
        pass_at_k = {k: Fraction(metrics[f"pass@{k}"]["exact"]) for k in ks}
        fix_at_k = {
            (p, k): Fraction(metrics[f"fix_{format_ratio(p)}@{k}"]["exact"])
            for p in ps
            for k in ks
        }
        return MetricReport(
            n=int(doc["n"]),
            task_count=int(doc["task_count"]),
            ks=ks,
            ps=ps,
            pass_at_k=pass_at_k,
            fix_at_k=fix_at_k,
        )
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"not a valid report document: {e}") from None
