"""Formula rendering in four formats, the inverse math parser, and prompts."""

import random

import pytest

from satquiz.cnf import CnfError, CnfFormula, parse_dimacs
from satquiz.generate import CnfPair, GenParams
from satquiz.render import (
    DEFAULT_VOCABULARY,
    ProblemType,
    QuestionFormat,
    parse_math,
    render_formula,
    render_question,
)

from conftest import random_formula

EXAMPLE = CnfFormula(3, ((1, -2, 3),))


def make_pair(n=3, m=2):
    sat = CnfFormula(n, tuple((1,) for _ in range(m - 1)) + ((2, 3),))
    unsat = CnfFormula(n, ((1,),) * (m - 1) + ((-1,),))
    return CnfPair(sat=sat, unsat=unsat, params=GenParams(n=n, m=m), flip_count=1)


class TestRenderFormula:
    def test_math_example(self):
        assert render_formula(EXAMPLE, QuestionFormat.MATH) == "(x1 ∨ ¬x2 ∨ x3)"

    def test_math_conjunction(self):
        f = CnfFormula(2, ((1, 2), (-1,)))
        assert render_formula(f, QuestionFormat.MATH) == "(x1 ∨ x2) ∧ (¬x1)"

    def test_math_ascii(self):
        f = CnfFormula(2, ((1, 2), (-1,)))
        assert render_formula(f, QuestionFormat.MATH, ascii_ops=True) == "(x1 | x2) & (~x1)"

    def test_dimacs_is_serialization(self):
        f = CnfFormula(2, ((1, 2), (-1,)))
        assert render_formula(f, QuestionFormat.DIMACS) == "p cnf 2 2\n1 2 0\n-1 0"
        assert parse_dimacs(render_formula(f, QuestionFormat.DIMACS)) == f

    def test_story_example(self):
        text = render_formula(EXAMPLE, QuestionFormat.STORY)
        assert "crunchy choco (x1), chewy vanilla (¬x2), or crunchy peanut (x3)" in text
        assert text.startswith("Alice will be happy if they get ")

    def test_dualstory_example(self):
        text = render_formula(EXAMPLE, QuestionFormat.DUALSTORY)
        assert "unhappy only if they are served " in text
        assert "crunchy choco (x1), chewy vanilla (¬x2), and crunchy peanut (x3)" in text

    def test_story_structure(self):
        rng = random.Random(2)
        for _ in range(30):
            f = random_formula(rng, rng.randint(1, 16), rng.randint(1, 20))
            story = render_formula(f, QuestionFormat.STORY).split("\n")
            dual = render_formula(f, QuestionFormat.DUALSTORY).split("\n")
            assert len(story) == len(dual) == f.num_clauses
            for clause, s_line, d_line in zip(f.clauses, story, dual):
                for lit in clause:
                    annotation = f"({'¬' if lit < 0 else ''}x{abs(lit)})"
                    assert annotation in s_line
                    assert annotation in d_line
                if len(clause) > 1:
                    assert " or " in s_line
                    assert " and " in d_line

    def test_story_names_cycle(self):
        f = CnfFormula(1, ((1,),) * 17)
        lines = render_formula(f, QuestionFormat.STORY).split("\n")
        assert lines[0].startswith("Alice ")
        assert lines[16].startswith("Alice ")

    def test_story_vocabulary_exhausted(self):
        f = CnfFormula(17, ((17,),))
        with pytest.raises(CnfError):
            render_formula(f, QuestionFormat.STORY)
        assert len(set(DEFAULT_VOCABULARY.flavors)) == 16


class TestParseMath:
    def test_example(self):
        assert parse_math("(x1 ∨ ¬x2 ∨ x3)") == EXAMPLE

    def test_unit_clause(self):
        assert parse_math("(x1)") == CnfFormula(1, ((1,),))

    def test_ascii_input(self):
        assert parse_math("(x1 | x2) & (~x1)") == CnfFormula(2, ((1, 2), (-1,)))

    def test_explicit_num_vars(self):
        assert parse_math("(x1)", num_vars=3) == CnfFormula(3, ((1,),))

    def test_malformed(self):
        for bad in ["", "x1 ∨ x2", "(x1 ∨ y2)", "(x1 ∨∨ x2)", "(x0)"]:
            with pytest.raises(CnfError):
                parse_math(bad)

    def test_round_trip(self):
        rng = random.Random(6)
        for _ in range(300):
            f = random_formula(rng, rng.randint(1, 12), rng.randint(1, 20))
            assert parse_math(render_formula(f, QuestionFormat.MATH), f.num_vars) == f
            ascii_text = render_formula(f, QuestionFormat.MATH, ascii_ops=True)
            assert parse_math(ascii_text, f.num_vars) == f


class TestRenderQuestion:
    def test_satdp_yields_two(self):
        qs = render_question(make_pair(), ProblemType.SATDP, QuestionFormat.MATH)
        assert len(qs) == 2
        assert [q.sub_task for q in qs] == ["sat", "unsat"]
        assert all(q.expected_answer_len == 1 for q in qs)

    def test_member_binding(self):
        pair = make_pair()
        (q_satsp,) = render_question(pair, ProblemType.SATSP, QuestionFormat.DIMACS)
        assert render_formula(pair.sat, QuestionFormat.DIMACS) in q_satsp.prompt
        for ptype in (ProblemType.MAXSAT, ProblemType.MCS, ProblemType.MUS):
            (q,) = render_question(pair, ptype, QuestionFormat.DIMACS)
            assert render_formula(pair.unsat, QuestionFormat.DIMACS) in q.prompt

    def test_answer_length_contract_all_combinations(self):
        pair = make_pair(n=4, m=6)
        expected = {
            ProblemType.SATDP: 1,
            ProblemType.SATSP: 4,
            ProblemType.MAXSAT: 4,
            ProblemType.MCS: 6,
            ProblemType.MUS: 6,
        }
        for ptype in ProblemType:
            for fmt in QuestionFormat:
                for template in ("eval", "rft"):
                    qs = render_question(pair, ptype, fmt, template=template)
                    assert len(qs) == (2 if ptype is ProblemType.SATDP else 1)
                    for q in qs:
                        assert q.expected_answer_len == expected[ptype]
                        assert q.template == template

    def test_satsp_instruction(self):
        (q,) = render_question(make_pair(n=4, m=3), ProblemType.SATSP, QuestionFormat.DIMACS)
        assert (
            "Find a satisfying assignment for the formula.\n"
            "Output a binary string of length 4" in q.prompt
        )

    def test_eval_template(self):
        (q,) = render_question(make_pair(), ProblemType.SATSP, QuestionFormat.MATH)
        assert q.extraction_mode == "answer-line"
        assert q.system_prompt == "You are a helpful assistant."
        assert "of the form Answer: $ANSWER (without quotes)" in q.prompt
        assert q.prompt.endswith(
            'Remember to put your answer on its own line after "Answer:", '
            "and you do not need to use a \\boxed command."
        )

    def test_rft_template(self):
        (q,) = render_question(
            make_pair(), ProblemType.MCS, QuestionFormat.MATH, template="rft"
        )
        assert q.extraction_mode == "tag"
        assert q.prompt.endswith("for example <answer> 0101 </answer>.")
        assert "<think>" in q.system_prompt

    def test_unknown_template(self):
        with pytest.raises(ValueError):
            render_question(make_pair(), ProblemType.SATSP, QuestionFormat.MATH, template="x")

    def test_deterministic_and_distinct(self):
        pair = make_pair()
        prompts = set()
        for ptype in ProblemType:
            for fmt in QuestionFormat:
                qs = render_question(pair, ptype, fmt)
                assert qs == render_question(pair, ptype, fmt)
                prompts.update(q.prompt for q in qs)
        assert len(prompts) == 4 * (len(ProblemType) + 1)
