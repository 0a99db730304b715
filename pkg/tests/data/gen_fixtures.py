"""Regenerate the committed test fixtures. Run from the repo root:

    python3 tests/data/gen_fixtures.py

Deterministic (fixed seeds), so reruns reproduce the committed files
byte for byte. Expected metric values are computed here from the task
construction plus the exhaustive-enumeration estimator oracle, never
from the package under test; every constructed edit distance is checked
against the recursive-oracle distance before anything is written.
"""

import json
import random
import sys
from fractions import Fraction
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))  # for oracles.py

from oracles import at_k_exhaustive, levenshtein_recursive, mean_fraction

KS = (1, 5, 10)
PS = (Fraction(1), Fraction(3, 2), Fraction(2))
N = 20
L = 10  # lines per base program


def base_lines(tid: str, lang: str):
    if lang == "python-like":
        return [f"{tid}_x{i} = step_{i}({tid}_x{i-1})" for i in range(L)]
    if lang == "verilog-like":
        return [f"assign {tid}_w{i} = {tid}_in{i} & mask{i};" for i in range(L)]
    return [f"{tid} record {i} value {i * 7 + 3}" for i in range(L)]


def fresh_line(tid: str, lang: str, salt: int) -> str:
    if lang == "python-like":
        return f"{tid}_y{salt} = patched_{salt}()"
    if lang == "verilog-like":
        return f"assign {tid}_z{salt} = fix_{salt};"
    return f"{tid} patched {salt} value {salt * 13 + 1}"


def substitute(lines, positions, tid, lang, salt0):
    out = list(lines)
    for off, pos in enumerate(positions):
        out[pos] = fresh_line(tid, lang, salt0 + off)
    return out


def with_noise(lines, lang, rng):
    """Comment/blank noise that normalization must erase."""
    out = []
    for i, ln in enumerate(lines):
        if rng.random() < 0.2:
            out.append("")
        if lang == "python-like" and rng.random() < 0.25:
            out.append(f"# reviewer note {rng.randrange(1000)}")
        if lang == "verilog-like" and rng.random() < 0.25:
            out.append(f"// synth note {rng.randrange(1000)}")
        suffix = ""
        if lang == "python-like" and rng.random() < 0.2:
            suffix = "   # checked"
        elif lang == "verilog-like" and rng.random() < 0.2:
            suffix = "  // ok"
        elif lang == "plain" and rng.random() < 0.2:
            ln = ln.replace(" ", "  ", 1)
        out.append(ln + suffix)
    if rng.random() < 0.5:
        out.append("")
    return out


TASKS = [
    # (task_id, language, golden_subs, correct dists, incorrect dists)
    ("t01-offbyone", "python-like", 2,
     [2, 2, 2, 3, 3, 4, 5, 6],
     [1, 2, 4, 5, 7, 7, 8, 9, 10, 10, 12, 14]),
    ("t02-guard", "python-like", 3,
     [3, 3, 6, 9],
     [1, 2, 2, 4, 5, 5, 6, 7, 8, 8, 9, 10, 10, 11, 13, 15]),
    ("t03-stuckbit", "verilog-like", 1,
     [1] * 10 + [2] * 5 + [3] * 5,
     []),
    ("t04-hopeless", "verilog-like", 2,
     [],
     [1, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7, 7, 8, 8, 9, 9, 10, 10, 11, 12]),
    ("t05-patchset", "plain", 4,
     [4] * 5 + [6] * 5 + [8] * 5,
     [2, 3, 5, 7, 9]),
]


def build_candidate(tid, lang, base, dist, salt):
    """A candidate at exactly `dist` from base: substitutions, and appends
    past L once dist exceeds the program length."""
    subs = min(dist, L)
    positions = list(range(subs))
    out = substitute(base, positions, tid, lang, salt)
    for extra in range(dist - subs):
        out.append(fresh_line(tid, lang, salt + 1000 + extra))
    return out


def gen_eval_fixture():
    rng = random.Random(0xE0A1)
    records = []
    expected_counts = {}
    for tid, lang, g, correct_dists, incorrect_dists in TASKS:
        base = base_lines(tid, lang)
        golden = substitute(base, list(range(L - g, L)), tid, lang, 9000)
        assert levenshtein_recursive(base, golden) == g
        cands = []
        salt = 0
        for dist in correct_dists:
            lines = build_candidate(tid, lang, base, dist, salt)
            assert levenshtein_recursive(base, lines) == dist, (tid, dist)
            cands.append((lines, True, dist))
            salt += 50
        for dist in incorrect_dists:
            lines = build_candidate(tid, lang, base, dist, salt)
            assert levenshtein_recursive(base, lines) == dist, (tid, dist)
            cands.append((lines, False, dist))
            salt += 50
        assert len(cands) == N
        rng.shuffle(cands)
        g_cost = Fraction(g, L)
        c_pass = sum(1 for _, ok, _ in cands if ok)
        c_fix = {
            p: sum(1 for _, ok, d in cands if ok and Fraction(d, L) <= p * g_cost)
            for p in PS
        }
        expected_counts[tid] = (c_pass, c_fix, g_cost)
        records.append(
            {
                "task_id": tid,
                "language": lang,
                "buggy": "\n".join(with_noise(base, lang, rng)),
                "golden": "\n".join(with_noise(golden, lang, rng)),
                "candidates": [
                    {
                        "text": "\n".join(
                            with_noise(lines, lang, rng)
                            if rng.random() < 0.6
                            else lines
                        ),
                        "correct": ok,
                    }
                    for lines, ok, _ in cands
                ],
                "bug_category": "synthetic",
            }
        )
    # aggregate expectations via the enumeration oracle only
    metrics = {}
    for k in KS:
        metrics[f"pass@{k}"] = mean_fraction(
            at_k_exhaustive(N, expected_counts[tid][0], k) for tid, *_ in TASKS
        )
    for p in PS:
        label = "1.5" if p == Fraction(3, 2) else str(p.numerator)
        for k in KS:
            metrics[f"fix_{label}@{k}"] = mean_fraction(
                at_k_exhaustive(N, expected_counts[tid][1][p], k) for tid, *_ in TASKS
            )
    expected = {
        "n": N,
        "task_count": len(TASKS),
        "metrics": {k: f"{v.numerator}/{v.denominator}" for k, v in metrics.items()},
        "tasks": {
            tid: {
                "golden_edit_cost": f"{gc.numerator}/{gc.denominator}",
                "c_pass": cp,
                "c_fix": {
                    "1.5" if p == Fraction(3, 2) else str(p.numerator): c
                    for p, c in cf.items()
                },
            }
            for tid, (cp, cf, gc) in expected_counts.items()
        },
    }
    with open(HERE / "eval_fixture.jsonl", "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
    with open(HERE / "eval_fixture_expected.json", "w") as fh:
        json.dump(expected, fh, indent=2)
        fh.write("\n")


PY_TEMPLATES = [
    "def {n}_fn{i}(arg{i}):",
    "    total{i} = arg{i} + {c}",
    "    total{i} = total{i} * scale{i}",
    "    if total{i} > limit{i}:",
    "        total{i} = limit{i}",
    "    return total{i}",
    "state{i} = {n}_fn{i}(seed{i})",
    "buffer{i} = [state{i}] * {c}",
    "for item{i} in buffer{i}:",
    "    sink{i}(item{i})",
]

VL_TEMPLATES = [
    "module {n}_m{i}(input clk, input [7:0] d{i}, output reg [7:0] q{i});",
    "always @(posedge clk) begin",
    "q{i} <= d{i} + 8'd{c};",
    "if (q{i} > 8'd{c}) q{i} <= 8'd0;",
    "end",
    "endmodule",
    "assign bus{i} = q{i} ^ mask{i};",
    "assign flag{i} = bus{i}[{b}];",
    "wire [7:0] spare{i};",
    "assign spare{i} = d{i} << 1;",
]


def gen_corpus():
    rng = random.Random(0xC0DE)
    programs = []
    for idx in range(50):
        lang = "python-like" if idx < 25 else "verilog-like"
        templates = PY_TEMPLATES if idx < 25 else VL_TEMPLATES
        length = rng.randrange(8, 21)
        lines = []
        for j in range(length):
            t = templates[j % len(templates)]
            lines.append(
                t.format(n=f"p{idx:02d}", i=j, c=rng.randrange(1, 200), b=rng.randrange(8))
            )
        programs.append({"id": f"prog-{idx:02d}", "language": lang, "text": "\n".join(lines)})
    with open(HERE / "fixture_corpus.jsonl", "w") as fh:
        for p in programs:
            fh.write(json.dumps(p) + "\n")


def gen_reward_groups():
    rng = random.Random(0x6E0)
    groups = []
    # (group_id, correct flags, substitution counts per sample)
    layouts = [
        ("g1-all-correct", [True] * 8, [1, 1, 2, 2, 3, 3, 4, 5]),
        ("g2-seven-eighths", [True] * 7 + [False], [1, 2, 2, 3, 3, 4, 5, 6]),
        ("g3-half", [True, False] * 4, [2, 6, 2, 6, 3, 7, 3, 7]),
        ("g4-same-cost", [True] * 6 + [False] * 2, [2] * 8),
        ("g5-quarter", [True, True] + [False] * 6, [1, 4, 5, 5, 6, 6, 7, 8]),
        ("g6-none", [False] * 8, [3, 4, 5, 5, 6, 6, 7, 8]),
    ]
    for gid, flags, subs in layouts:
        tidbase = gid.split("-")[0]
        base = [f"{tidbase}_stmt{i} = op{i}({tidbase}_stmt{i-1})" for i in range(12)]
        samples = []
        for s, (ok, nsub) in enumerate(zip(flags, subs)):
            lines = substitute(base, list(range(nsub)), tidbase, "python-like", s * 40)
            assert levenshtein_recursive(base, lines) == nsub
            noisy = with_noise(lines, "python-like", rng) if rng.random() < 0.5 else lines
            samples.append({"text": "\n".join(noisy), "correct": ok})
        groups.append(
            {
                "group_id": gid,
                "language": "python-like",
                "buggy": "\n".join(base),
                "samples": samples,
            }
        )
    with open(HERE / "reward_groups.jsonl", "w") as fh:
        for g in groups:
            fh.write(json.dumps(g) + "\n")


def gen_lookup_corpus():
    """Pairs with planted contiguous-block edits; see test_specdecode."""
    rng = random.Random(20260814)
    rows = []
    for n_blocks in (1, 2, 3):
        for pair_no in range(40):
            L, block = 60, 6
            base = [f"v{i} = compute_{rng.randrange(10**6)}({i})" for i in range(L)]
            starts = []
            attempts = 0
            while len(starts) < n_blocks and attempts < 1000:
                s = rng.randrange(1, L - block)
                if all(abs(s - t) >= block + 2 for t in starts):
                    starts.append(s)
                attempts += 1
            assert len(starts) == n_blocks
            fixed = list(base)
            for s in starts:
                for i in range(s, s + block):
                    fixed[i] = f"w{i} = patched_{rng.randrange(10**6)}({i})"
            rows.append(
                {
                    "pair_id": f"d{n_blocks}0-{pair_no:02d}",
                    "planted_d_ec": n_blocks * block / L,
                    "buggy": "\n".join(base),
                    "fixed": "\n".join(fixed),
                }
            )
    with open(HERE / "lookup_pairs.jsonl", "w") as fh:
        for r in rows:
            fh.write(json.dumps(r) + "\n")


if __name__ == "__main__":
    gen_eval_fixture()
    gen_corpus()
    gen_reward_groups()
    gen_lookup_corpus()
    print("fixtures written to", HERE)
