"""Question rendering: formula text in four formats plus full prompt assembly.

Answer-length contract: 1 bit per decision sub-task, n bits for assignment
tasks, m bits for clause-subset tasks. Bit i of a subset answer refers to
clause i+1 in DIMACS order; this is stated explicitly in the prompts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .cnf import CnfError, CnfFormula, serialize_dimacs
from .generate import CnfPair


class ProblemType(Enum):
    SATDP = "satdp"
    SATSP = "satsp"
    MAXSAT = "maxsat"
    MCS = "mcs"
    MUS = "mus"


class QuestionFormat(Enum):
    MATH = "math"
    DIMACS = "dimacs"
    STORY = "story"
    DUALSTORY = "dualstory"


@dataclass(frozen=True)
class StoryVocabulary:
    """Cookie descriptors per variable and person names per clause (cyclic).

    Variable i maps to flavor i; a positive literal is the crunchy variant,
    a negative literal the chewy one. Index annotations like ``(x1)`` or
    ``(¬x2)`` are always included so stories stay machine-checkable.
    """

    flavors: tuple[str, ...]
    names: tuple[str, ...]


DEFAULT_VOCABULARY = StoryVocabulary(
    flavors=(
        "choco", "vanilla", "peanut", "ginger", "lemon", "oatmeal",
        "almond", "caramel", "coconut", "espresso", "hazelnut", "maple",
        "matcha", "raisin", "sesame", "walnut",
    ),
    names=(
        "Alice", "Bob", "Carol", "Dave", "Erin", "Frank", "Grace", "Heidi",
        "Ivan", "Judy", "Karl", "Laura", "Mallory", "Niaj", "Olivia", "Peggy",
    ),
)

AND_SYM = {False: "∧", True: "&"}
OR_SYM = {False: "∨", True: "|"}
NOT_SYM = {False: "¬", True: "~"}

EVAL_SYSTEM_PROMPT = "You are a helpful assistant."
RFT_SYSTEM_PROMPT = (
    "You are a helpful AI Assistant that provides well-reasoned and detailed "
    "responses. You first think about the reasoning process as an internal "
    "monologue and then provide the user with the answer. Respond in the "
    "following format: <think>\\n...\\n</think>\\n<answer>\\n...\\n</answer>"
)

_EVAL_PREFIX = (
    "Solve the following problem step by step. The last line of your response "
    "should be of the form Answer: $ANSWER (without quotes) where $ANSWER is "
    "the answer to the problem."
)
_EVAL_SUFFIX = (
    'Remember to put your answer on its own line after "Answer:", and you do '
    "not need to use a \\boxed command."
)
_RFT_SUFFIX = (
    "Show your work in <think> </think> tags. And return the final answer in "
    "<answer> </answer> tags, for example <answer> 0101 </answer>."
)


@dataclass(frozen=True)
class RenderedQuestion:
    prompt: str
    system_prompt: str
    expected_answer_len: int
    extraction_mode: str  # "answer-line" | "tag"
    pair_id: str
    ptype: ProblemType
    format: QuestionFormat
    template: str  # "eval" | "rft"
    sub_task: str | None = None  # "sat" | "unsat" for decision sub-tasks


def _lit_text(lit: int, ascii_ops: bool) -> str:
    return f"{NOT_SYM[ascii_ops] if lit < 0 else ''}x{abs(lit)}"


def _story_item(lit: int, vocabulary: StoryVocabulary, ascii_ops: bool) -> str:
    texture = "crunchy" if lit > 0 else "chewy"
    flavor = vocabulary.flavors[abs(lit) - 1]
    return f"{texture} {flavor} ({_lit_text(lit, ascii_ops)})"


def _join_items(items: list[str], connective: str) -> str:
    if len(items) == 1:
        return items[0]
    if len(items) == 2:
        return f"{items[0]} {connective} {items[1]}"
    return ", ".join(items[:-1]) + f", {connective} " + items[-1]


def render_formula(
    formula: CnfFormula,
    format: QuestionFormat,
    vocabulary: StoryVocabulary = DEFAULT_VOCABULARY,
    ascii_ops: bool = False,
) -> str:
    """Deterministic text for one formula in the requested format."""
    if format is QuestionFormat.DIMACS:
        return serialize_dimacs(formula).rstrip("\n")
    if format is QuestionFormat.MATH:
        sep = f" {AND_SYM[ascii_ops]} "
        return sep.join(
            "(" + f" {OR_SYM[ascii_ops]} ".join(_lit_text(l, ascii_ops) for l in c) + ")"
            for c in formula.clauses
        )

    if formula.num_vars > len(vocabulary.flavors):
        raise CnfError(
            f"story vocabulary covers {len(vocabulary.flavors)} variables, "
            f"formula has {formula.num_vars}"
        )
    sentences = []
    for ci, clause in enumerate(formula.clauses):
        name = vocabulary.names[ci % len(vocabulary.names)]
        items = [_story_item(lit, vocabulary, ascii_ops) for lit in clause]
        if format is QuestionFormat.STORY:
            sentences.append(
                f"{name} will be happy if they get {_join_items(items, 'or')}."
            )
        else:
            sentences.append(
                f"{name} will be unhappy only if they are served "
                f"{_join_items(items, 'and')}."
            )
    return "\n".join(sentences)


_MATH_LIT_RE = re.compile(r"^(?:¬|~)?x(\d+)$")


def parse_math(text: str, num_vars: int | None = None) -> CnfFormula:
    """Inverse of the math rendering; accepts Unicode or ASCII connectives.

    ``num_vars`` defaults to the largest variable index mentioned.
    """
    stripped = text.strip()
    if not stripped:
        raise CnfError("empty math formula")
    clauses: list[tuple[int, ...]] = []
    max_var = 0
    for part in re.split(r"∧|&", stripped):
        part = part.strip()
        if not (part.startswith("(") and part.endswith(")")):
            raise CnfError(f"clause not parenthesized: {part!r}")
        lits: list[int] = []
        for tok in re.split(r"∨|\|", part[1:-1]):
            tok = tok.strip()
            match = _MATH_LIT_RE.match(tok)
            if not match:
                raise CnfError(f"malformed literal: {tok!r}")
            var = int(match.group(1))
            max_var = max(max_var, var)
            lits.append(-var if tok[0] in "¬~" else var)
        clauses.append(tuple(lits))
    return CnfFormula(num_vars if num_vars is not None else max_var, tuple(clauses))


_FORMAT_INTRO = {
    QuestionFormat.MATH: "in mathematical notation",
    QuestionFormat.DIMACS: "in DIMACS format",
    QuestionFormat.STORY: (
        "described as a cookie-day story where each sentence is one clause"
    ),
    QuestionFormat.DUALSTORY: (
        "described as a negated cookie-day story where each sentence is one clause"
    ),
}


def _task_instruction(ptype: ProblemType, n: int, m: int) -> tuple[str, int]:
    if ptype is ProblemType.SATDP:
        return (
            "Determine whether the formula is satisfiable.\n"
            "Output a single binary digit ('1' if satisfiable, '0' if unsatisfiable).",
            1,
        )
    if ptype is ProblemType.SATSP:
        return (
            "Find a satisfying assignment for the formula.\n"
            f"Output a binary string of length {n} ('1' for true, '0' for false).",
            n,
        )
    if ptype is ProblemType.MAXSAT:
        return (
            "Find an assignment that satisfies as many clauses as possible.\n"
            f"Output a binary string of length {n} ('1' for true, '0' for false).",
            n,
        )
    if ptype is ProblemType.MCS:
        return (
            "Find a minimal correction subset: a set of clauses whose removal "
            "makes the formula satisfiable, while removing any proper subset "
            "of it leaves the formula unsatisfiable.\n"
            f"Output a binary string of length {m} where position i is '1' if "
            "clause i (in the order given) belongs to the subset and '0' otherwise.",
            m,
        )
    return (
        "Find a minimal unsatisfiable subset: a set of clauses that is "
        "unsatisfiable on its own, while every proper subset of it is "
        "satisfiable.\n"
        f"Output a binary string of length {m} where position i is '1' if "
        "clause i (in the order given) belongs to the subset and '0' otherwise.",
        m,
    )


def _question_body(
    formula: CnfFormula,
    ptype: ProblemType,
    format: QuestionFormat,
    vocabulary: StoryVocabulary,
    ascii_ops: bool,
) -> tuple[str, int]:
    intro = (
        f"Given a CNF formula with {formula.num_vars} variables and "
        f"{formula.num_clauses} clauses {_FORMAT_INTRO[format]}:"
    )
    formula_text = render_formula(formula, format, vocabulary, ascii_ops)
    instruction, answer_len = _task_instruction(
        ptype, formula.num_vars, formula.num_clauses
    )
    return f"{intro}\n\n{formula_text}\n\n{instruction}", answer_len


def render_question(
    pair: CnfPair,
    ptype: ProblemType,
    format: QuestionFormat,
    template: str = "eval",
    pair_id: str = "",
    vocabulary: StoryVocabulary = DEFAULT_VOCABULARY,
    ascii_ops: bool = False,
) -> tuple[RenderedQuestion, ...]:
    """Render the question(s) for one pair; the decision problem yields two."""
    if template not in ("eval", "rft"):
        raise ValueError(f"unknown template {template!r}")

    if ptype is ProblemType.SATDP:
        members = [("sat", pair.sat), ("unsat", pair.unsat)]
    elif ptype is ProblemType.SATSP:
        members = [(None, pair.sat)]
    else:
        members = [(None, pair.unsat)]

    rendered = []
    for sub_task, formula in members:
        body, answer_len = _question_body(formula, ptype, format, vocabulary, ascii_ops)
        if template == "eval":
            prompt = f"{_EVAL_PREFIX}\n\n{body}\n\n{_EVAL_SUFFIX}"
            system_prompt = EVAL_SYSTEM_PROMPT
            extraction_mode = "answer-line"
        else:
            prompt = f"{body}\n\n{_RFT_SUFFIX}"
            system_prompt = RFT_SYSTEM_PROMPT
            extraction_mode = "tag"
        rendered.append(
            RenderedQuestion(
                prompt=prompt,
                system_prompt=system_prompt,
                expected_answer_len=answer_len,
                extraction_mode=extraction_mode,
                pair_id=pair_id,
                ptype=ptype,
                format=format,
                template=template,
                sub_task=sub_task,
            )
        )
    return tuple(rendered)
