"""satquiz: paired CNF generation, reasoning-question rendering, and
verifiable answer rewards for evaluation harnesses and RL fine-tuning."""

from .cnf import (
    Clause,
    CnfError,
    CnfFormula,
    evaluate,
    parse_dimacs,
    restrict,
    serialize_dimacs,
)
from .data import (
    DatasetError,
    DatasetRecord,
    annotate_difficulty,
    build_eval_grid,
    build_rft_grid,
    read_dataset,
    write_dataset,
)
from .engine import SolveResult, SolverStats, is_satisfiable, solve
from .generate import (
    CnfPair,
    GenParams,
    GenerationError,
    child_seed,
    flip_random_literal,
    gen_cnf_pair,
    random_clause,
    sample_clause_width,
)
from .oracles import (
    MaxSatResult,
    SatisfiableFormulaError,
    brute_force_maxsat,
    brute_force_solve,
    check_mcs,
    check_mus,
    find_one_mcs,
    find_one_mus,
    maxsat_optimum,
)
from .render import (
    DEFAULT_VOCABULARY,
    ProblemType,
    QuestionFormat,
    RenderedQuestion,
    StoryVocabulary,
    parse_math,
    render_formula,
    render_question,
)
from .verify import (
    AnswerFormatError,
    RewardWeights,
    Verdict,
    combined_reward,
    extract_answer,
    format_match_reward,
    tag_count_reward,
    verify,
    verify_response,
)

__version__ = "0.1.0"
