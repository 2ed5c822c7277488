"""Answer extraction, semantic verification, and scalar rewards.

Extraction takes the LAST candidate in the text (models often restate their
answer) and accepts a surrounding ``\\boxed{...}`` wrapper. Format problems
and semantic failures are reported separately so format-accuracy statistics
can be recomputed from verdicts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .cnf import evaluate
from .generate import CnfPair
from .oracles import cached_maxsat_optimum, check_mcs, check_mus
from .render import ProblemType


class AnswerFormatError(ValueError):
    """No well-formed answer string could be extracted.

    ``kind`` is one of "missing" (no candidate found), "length" (wrong
    length), or "chars" (non-binary characters).
    """

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


@dataclass(frozen=True)
class Verdict:
    format_ok: bool
    semantic_ok: bool
    detail: str
    extracted: tuple[str, ...] | None


@dataclass(frozen=True)
class RewardWeights:
    correctness: float = 1.0
    tag_count: float = 0.05
    format_match: float = 0.05

    def __post_init__(self) -> None:
        if min(self.correctness, self.tag_count, self.format_match) < 0:
            raise ValueError("reward weights must be non-negative")


_ANSWER_LINE_RE = re.compile(r"(?im)^.*?answer\s*:\s*(.*)$")
_ANSWER_TAG_RE = re.compile(r"<answer>(.*?)</answer>", re.DOTALL)
_BOXED_RE = re.compile(r"\$?\\boxed\{\s*([^{}]*?)\s*\}\$?")
_FORMAT_PATTERN = re.compile(r"<think>.*?</think>\s?<answer>.*?</answer>", re.DOTALL)


def extract_answer(text: str, mode: str, expected_len: int) -> str:
    """Extract a binary answer string of exactly ``expected_len`` characters."""
    if expected_len < 1:
        raise ValueError("expected_len must be >= 1")
    if mode == "answer-line":
        matches = _ANSWER_LINE_RE.findall(text)
    elif mode == "tag":
        matches = _ANSWER_TAG_RE.findall(text)
    else:
        raise ValueError(f"unknown extraction mode {mode!r}")
    if not matches:
        raise AnswerFormatError("missing", f"no answer found in {mode} mode")
    candidate = matches[-1].strip()
    boxed = _BOXED_RE.fullmatch(candidate)
    if boxed:
        candidate = boxed.group(1).strip()
    if not candidate:
        raise AnswerFormatError("missing", "answer candidate is empty")
    if set(candidate) - {"0", "1"}:
        raise AnswerFormatError(
            "chars", f"answer contains non-binary characters: {candidate!r}"
        )
    if len(candidate) != expected_len:
        raise AnswerFormatError(
            "length",
            f"answer has length {len(candidate)}, expected {expected_len}",
        )
    return candidate


def expected_answer_lengths(pair: CnfPair, ptype: ProblemType) -> tuple[int, ...]:
    """Per-answer bit lengths for a task on this pair (two entries for SATDP)."""
    if ptype is ProblemType.SATDP:
        return (1, 1)
    if ptype in (ProblemType.SATSP, ProblemType.MAXSAT):
        return (pair.sat.num_vars,)
    return (pair.unsat.num_clauses,)


def _check_bits(answer: str, length: int) -> None:
    if set(answer) - {"0", "1"}:
        raise ValueError(f"answer is not a binary string: {answer!r}")
    if len(answer) != length:
        raise ValueError(f"answer length {len(answer)} != expected {length}")


def verify(pair: CnfPair, ptype: ProblemType, answers: str | tuple[str, str]) -> Verdict:
    """Check already-extracted answer bits against the task semantics.

    ``answers`` is a single bit string, except for the decision problem which
    takes (sat-member answer, unsat-member answer) and is correct only when
    both sub-tasks are.
    """
    strings = (answers,) if isinstance(answers, str) else tuple(answers)
    lengths = expected_answer_lengths(pair, ptype)
    if len(strings) != len(lengths):
        raise ValueError(
            f"{ptype.name} expects {len(lengths)} answer(s), got {len(strings)}"
        )
    for answer, length in zip(strings, lengths):
        _check_bits(answer, length)

    if ptype is ProblemType.SATDP:
        ok = strings == ("1", "0")
        detail = (
            "both sub-tasks answered correctly"
            if ok
            else f"expected ('1', '0') for (sat, unsat) members, got {strings}"
        )
        return Verdict(True, ok, detail, strings)

    answer = strings[0]
    if ptype is ProblemType.SATSP:
        assignment = tuple(b == "1" for b in answer)
        count, _ = evaluate(pair.sat, assignment)
        ok = count == pair.sat.num_clauses
        detail = f"assignment satisfies {count}/{pair.sat.num_clauses} clauses"
    elif ptype is ProblemType.MAXSAT:
        assignment = tuple(b == "1" for b in answer)
        count, _ = evaluate(pair.unsat, assignment)
        optimum = cached_maxsat_optimum(pair.unsat)
        ok = count == optimum
        detail = f"assignment satisfies {count} clauses, optimum is {optimum}"
    elif ptype is ProblemType.MCS:
        mask = tuple(b == "1" for b in answer)
        ok = check_mcs(pair.unsat, mask)
        detail = "valid minimal correction subset" if ok else "not a minimal correction subset"
    else:
        mask = tuple(b == "1" for b in answer)
        ok = check_mus(pair.unsat, mask)
        detail = "valid minimal unsatisfiable subset" if ok else "not a minimal unsatisfiable subset"
    return Verdict(True, ok, detail, strings)


def verify_response(
    pair: CnfPair,
    ptype: ProblemType,
    texts: str | tuple[str, str],
    mode: str,
    sub_task: str | None = None,
) -> Verdict:
    """Extract then verify; format failures yield a Verdict instead of raising.

    For the decision problem pass either both sub-task responses or a single
    response plus ``sub_task`` ("sat" or "unsat").
    """
    if ptype is ProblemType.SATDP and sub_task is not None:
        if sub_task not in ("sat", "unsat"):
            raise ValueError(f"unknown sub_task {sub_task!r}")
        try:
            bits = extract_answer(texts if isinstance(texts, str) else texts[0], mode, 1)
        except AnswerFormatError as exc:
            return Verdict(False, False, f"format error ({exc.kind}): {exc}", None)
        expected = "1" if sub_task == "sat" else "0"
        ok = bits == expected
        detail = (
            f"sub-task {sub_task}: correct"
            if ok
            else f"sub-task {sub_task}: expected {expected!r}, got {bits!r}"
        )
        return Verdict(True, ok, detail, (bits,))

    text_list = (texts,) if isinstance(texts, str) else tuple(texts)
    lengths = expected_answer_lengths(pair, ptype)
    if len(text_list) != len(lengths):
        raise ValueError(
            f"{ptype.name} expects {len(lengths)} response(s), got {len(text_list)}"
        )
    extracted = []
    for text, length in zip(text_list, lengths):
        try:
            extracted.append(extract_answer(text, mode, length))
        except AnswerFormatError as exc:
            return Verdict(False, False, f"format error ({exc.kind}): {exc}", None)
    answers = extracted[0] if len(extracted) == 1 else (extracted[0], extracted[1])
    return verify(pair, ptype, answers)


def tag_count_reward(text: str) -> float:
    """0.25 per reasoning/answer tag appearing exactly once."""
    count = 0.0
    for tag in ("<think>", "</think>", "<answer>", "</answer>"):
        if text.count(tag) == 1:
            count += 0.25
    return count


def format_match_reward(text: str) -> float:
    """Length fraction of the first think-then-answer span; 0 if absent or empty."""
    total_len = len(text)
    if total_len == 0:
        return 0.0
    match = _FORMAT_PATTERN.search(text)
    match_len = len(match.group()) if match else 0
    return match_len / total_len


def combined_reward(
    text: str,
    pair: CnfPair,
    ptype: ProblemType,
    weights: RewardWeights = RewardWeights(),
    sub_task: str | None = None,
) -> float:
    """Weighted sum of correctness and the two format rewards (tag mode).

    Total over all inputs: extraction or semantic failures contribute
    correctness 0, never an exception. ``sub_task`` is required for the
    decision problem (one response covers one sub-task during training).
    """
    if ptype is ProblemType.SATDP and sub_task is None:
        raise ValueError("combined_reward on the decision problem requires sub_task")
    verdict = verify_response(pair, ptype, text, "tag", sub_task=sub_task)
    correctness = 1.0 if verdict.semantic_ok else 0.0
    return (
        weights.correctness * correctness
        + weights.tag_count * tag_count_reward(text)
        + weights.format_match * format_match_reward(text)
    )


def verdict_record(
    verdict: Verdict,
    pair_id: str,
    ptype: ProblemType,
    format: str | None = None,
    reward: float | None = None,
) -> dict:
    """Documented JSON object for logging verdicts and rewards."""
    return {
        "pair_id": pair_id,
        "ptype": ptype.value,
        "format": format,
        "format_ok": verdict.format_ok,
        "semantic_ok": verdict.semantic_ok,
        "reward": reward,
        "detail": verdict.detail,
    }
