"""Command-line interface.

Exit codes: 0 = semantically correct, 1 = semantic failure, 2 = format
failure, 3 = operational/usage error. Data goes to stdout, logs to stderr.
All generation commands require an explicit --seed.

The environment variable SATQUIZ_DATA_DIR, when set, is prepended to relative
dataset paths that do not resolve from the working directory.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
from pathlib import Path

from . import data as dataset_mod
from .cnf import CnfError
from .generate import GenParams, GenerationError, gen_cnf_pair
from .render import ProblemType, QuestionFormat, render_question
from .verify import (
    AnswerFormatError,
    RewardWeights,
    combined_reward,
    extract_answer,
    verdict_record,
    verify,
    verify_response,
)

EX_OK = 0
EX_SEMANTIC = 1
EX_FORMAT = 2
EX_ERROR = 3


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise CliError(message)


def _resolve_dataset_path(path: str) -> Path:
    p = Path(path)
    if p.exists() or p.is_absolute():
        return p
    base = os.environ.get("SATQUIZ_DATA_DIR")
    if base:
        candidate = Path(base) / p
        if candidate.exists():
            return candidate
    return p


def _load_records(path: str):
    return dataset_mod.read_dataset(_resolve_dataset_path(path))


def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    with open(source, "r", encoding="utf-8") as fh:
        return fh.read()


def cmd_gen(args) -> int:
    params = GenParams(n=args.n, m=args.m, p_k2=args.p_k2, p_geo=args.p_geo, seed=args.seed)
    pair = gen_cnf_pair(params)
    from .cnf import serialize_dimacs

    sat_path = Path(f"{args.out}.sat.cnf")
    unsat_path = Path(f"{args.out}.unsat.cnf")
    sat_path.write_text(serialize_dimacs(pair.sat), encoding="utf-8")
    unsat_path.write_text(serialize_dimacs(pair.unsat), encoding="utf-8")
    print(f"wrote {sat_path} and {unsat_path} (flips: {pair.flip_count})", file=sys.stderr)
    return EX_OK


def cmd_dataset(args) -> int:
    if args.grid == "eval":
        records = dataset_mod.build_eval_grid(args.seed, jobs=args.jobs)
    else:
        records = dataset_mod.build_rft_grid(args.seed, jobs=args.jobs)
    dataset_mod.write_dataset(records, args.out)
    counts: dict[int, int] = {}
    for record in records:
        counts[record.params.n] = counts.get(record.params.n, 0) + 1
    if args.json:
        print(json.dumps({"records": len(records), "per_n": counts}))
    else:
        print(f"{len(records)} records -> {args.out}")
        for n in sorted(counts):
            print(f"  n={n:2d}: {counts[n]} pairs")
    return EX_OK


def _ptype(name: str) -> ProblemType:
    return ProblemType(name.lower())


def cmd_render(args) -> int:
    records = _load_records(args.dataset)
    record = dataset_mod.find_record(records, args.pair_id)
    questions = render_question(
        record.pair(),
        _ptype(args.ptype),
        QuestionFormat(args.format),
        template=args.template,
        pair_id=args.pair_id,
        ascii_ops=args.ascii,
    )
    if args.sub_task:
        questions = tuple(q for q in questions if q.sub_task == args.sub_task)
        if not questions:
            raise CliError(f"no sub-task {args.sub_task!r} for this problem type")
    if args.json:
        print(
            json.dumps(
                [
                    {
                        "pair_id": q.pair_id,
                        "ptype": q.ptype.value,
                        "format": q.format.value,
                        "template": q.template,
                        "sub_task": q.sub_task,
                        "system_prompt": q.system_prompt,
                        "prompt": q.prompt,
                        "expected_answer_len": q.expected_answer_len,
                        "extraction_mode": q.extraction_mode,
                    }
                    for q in questions
                ]
            )
        )
    else:
        if len(questions) > 1 and not args.sub_task:
            raise CliError(
                "this problem type renders two prompts; pass --sub-task or --json"
            )
        print(questions[0].prompt)
    return EX_OK


def cmd_verify(args) -> int:
    records = _load_records(args.dataset)
    record = dataset_mod.find_record(records, args.pair_id)
    pair = record.pair()
    ptype = _ptype(args.ptype)

    if args.answer:
        answers = args.answer[0] if len(args.answer) == 1 else tuple(args.answer)
        try:
            verdict = verify(pair, ptype, answers)
        except ValueError as exc:
            print(json.dumps({"error": str(exc)}))
            return EX_FORMAT if "length" in str(exc) else EX_ERROR
    else:
        texts = [_read_text(r) for r in args.response]
        verdict = verify_response(
            pair,
            ptype,
            texts[0] if len(texts) == 1 else (texts[0], texts[1]),
            args.mode,
            sub_task=args.sub_task,
        )
    print(json.dumps(verdict_record(verdict, args.pair_id, ptype)))
    if not verdict.format_ok:
        return EX_FORMAT
    return EX_OK if verdict.semantic_ok else EX_SEMANTIC


def _weights(args) -> RewardWeights:
    return RewardWeights(
        correctness=args.w_correctness,
        tag_count=args.w_tag_count,
        format_match=args.w_format_match,
    )


def cmd_reward(args) -> int:
    records = _load_records(args.dataset)
    weights = _weights(args)

    if args.batch:
        for line in sys.stdin:
            if not line.strip():
                continue
            try:
                item = json.loads(line)
                record = dataset_mod.find_record(records, item["pair_id"])
                reward = combined_reward(
                    item["response"],
                    record.pair(),
                    _ptype(item["ptype"]),
                    weights,
                    sub_task=item.get("sub_task"),
                )
                print(json.dumps({"reward": reward}), flush=True)
            except Exception as exc:  # noqa: BLE001 - per-item error marker
                print(json.dumps({"error": str(exc)}), flush=True)
        return EX_OK

    record = dataset_mod.find_record(records, args.pair_id)
    text = _read_text(args.response)
    reward = combined_reward(
        text, record.pair(), _ptype(args.ptype), weights, sub_task=args.sub_task
    )
    print(repr(reward))
    return EX_OK


def cmd_extract(args) -> int:
    text = _read_text(args.response)
    try:
        bits = extract_answer(text, args.mode, args.expected_len)
    except AnswerFormatError as exc:
        print(json.dumps({"ok": False, "kind": exc.kind, "detail": str(exc)}))
        return EX_FORMAT
    print(json.dumps({"ok": True, "bits": bits}))
    return EX_OK


def cmd_profile(args) -> int:
    records = _load_records(args.dataset)
    by_n: dict[int, list[dict]] = {}
    for record in records:
        if record.stats is None:
            raise CliError(f"record {record.pair_id} has no difficulty stats")
        by_n.setdefault(record.params.n, []).append(record.stats)

    rows = []
    for n in sorted(by_n):
        group = by_n[n]
        rows.append(
            {
                "n": n,
                "pairs": len(group),
                "median_unsat_decisions": statistics.median(
                    s["unsat"]["decisions"] for s in group
                ),
                "median_sat_decisions": statistics.median(
                    s["sat"]["decisions"] for s in group
                ),
                "median_unsat_conflicts": statistics.median(
                    s["unsat"]["conflicts"] for s in group
                ),
                "median_maxsat_nodes": statistics.median(
                    s["maxsat_nodes"] for s in group
                ),
                "median_mcs_solver_calls": statistics.median(
                    s["mcs_solver_calls"] for s in group
                ),
                "median_mus_solver_calls": statistics.median(
                    s["mus_solver_calls"] for s in group
                ),
            }
        )
    if args.json:
        print(json.dumps(rows))
    else:
        header = list(rows[0].keys()) if rows else []
        print("\t".join(header))
        for row in rows:
            print("\t".join(str(row[k]) for k in header))
    return EX_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="satquiz", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate one CNF pair to <stem>.{sat,unsat}.cnf")
    p_gen.add_argument("-n", type=int, required=True)
    p_gen.add_argument("-m", type=int, required=True)
    p_gen.add_argument("--p-k2", type=float, default=0.3)
    p_gen.add_argument("--p-geo", type=float, default=0.4)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("-o", "--out", required=True, help="output file stem")
    p_gen.set_defaults(func=cmd_gen)

    p_ds = sub.add_parser("dataset", help="build an annotated dataset grid")
    p_ds.add_argument("grid", choices=["eval", "rft"])
    p_ds.add_argument("--seed", type=int, required=True)
    p_ds.add_argument("-o", "--out", required=True)
    p_ds.add_argument("--jobs", type=int, default=1)
    p_ds.add_argument("--json", action="store_true")
    p_ds.set_defaults(func=cmd_dataset)

    ptype_choices = [p.value for p in ProblemType]
    fmt_choices = [f.value for f in QuestionFormat]

    p_render = sub.add_parser("render", help="render prompt(s) for one pair")
    p_render.add_argument("--dataset", required=True)
    p_render.add_argument("--pair-id", required=True)
    p_render.add_argument("--ptype", required=True, choices=ptype_choices)
    p_render.add_argument("--format", required=True, choices=fmt_choices)
    p_render.add_argument("--template", default="eval", choices=["eval", "rft"])
    p_render.add_argument("--sub-task", choices=["sat", "unsat"])
    p_render.add_argument("--ascii", action="store_true", help="ASCII logic symbols")
    p_render.add_argument("--json", action="store_true")
    p_render.set_defaults(func=cmd_render)

    p_verify = sub.add_parser("verify", help="check an answer or raw response")
    p_verify.add_argument("--dataset", required=True)
    p_verify.add_argument("--pair-id", required=True)
    p_verify.add_argument("--ptype", required=True, choices=ptype_choices)
    p_verify.add_argument("--mode", default="answer-line", choices=["answer-line", "tag"])
    p_verify.add_argument("--sub-task", choices=["sat", "unsat"])
    p_verify.add_argument(
        "--answer", action="append", help="pre-extracted bit string (twice for satdp)"
    )
    p_verify.add_argument(
        "--response", action="append", help="raw response file, '-' for stdin"
    )
    p_verify.set_defaults(func=cmd_verify)

    p_reward = sub.add_parser("reward", help="scalar reward for a raw response")
    p_reward.add_argument("--dataset", required=True)
    p_reward.add_argument("--pair-id")
    p_reward.add_argument("--ptype", choices=ptype_choices)
    p_reward.add_argument("--sub-task", choices=["sat", "unsat"])
    p_reward.add_argument("--response", help="response file, '-' for stdin")
    p_reward.add_argument("--batch", action="store_true", help="JSONL items on stdin")
    p_reward.add_argument("--w-correctness", type=float, default=1.0)
    p_reward.add_argument("--w-tag-count", type=float, default=0.05)
    p_reward.add_argument("--w-format-match", type=float, default=0.05)
    p_reward.set_defaults(func=cmd_reward)

    p_extract = sub.add_parser("extract", help="extract a binary answer string")
    p_extract.add_argument("--mode", required=True, choices=["answer-line", "tag"])
    p_extract.add_argument("--expected-len", type=int, required=True)
    p_extract.add_argument("--response", required=True, help="file or '-' for stdin")
    p_extract.set_defaults(func=cmd_extract)

    p_profile = sub.add_parser("profile", help="difficulty summary per n")
    p_profile.add_argument("--dataset", required=True)
    p_profile.add_argument("--json", action="store_true")
    p_profile.set_defaults(func=cmd_profile)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_ERROR
    try:
        if args.command == "verify" and bool(args.answer) == bool(args.response):
            raise CliError("pass exactly one of --answer / --response")
        if args.command == "reward" and not args.batch:
            if not (args.pair_id and args.ptype and args.response):
                raise CliError("--pair-id, --ptype, --response required without --batch")
        return args.func(args)
    except (CliError, CnfError, GenerationError, dataset_mod.DatasetError,
            KeyError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_ERROR


if __name__ == "__main__":
    sys.exit(main())
