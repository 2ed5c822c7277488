"""Paired satisfiable/unsatisfiable CNF generation.

Phase 1 draws whole m-clause formulas until one is unsatisfiable. Phase 2
copies it and flips one uniformly chosen literal polarity at a time,
re-solving after each flip, until the copy becomes satisfiable. Both members
therefore share n, m, the clause-width multiset, and the total literal count.

Randomness comes from ``random.Random`` (Mersenne Twister), which is
platform-independent and fully determined by the seed. Grid builders derive
one child seed per pair via SHA-256 of ``"<master_seed>:<label>"`` so pairs
can be generated independently and in parallel.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, replace

from .cnf import CnfFormula
from .engine import is_satisfiable


class GenerationError(RuntimeError):
    """Retry cap exceeded; the parameters admit no (or only pathological) pairs."""


@dataclass(frozen=True)
class GenParams:
    n: int
    m: int
    p_k2: float = 0.3
    p_geo: float = 0.4
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not 0.0 <= self.p_k2 <= 1.0:
            raise ValueError(f"p_k2 must be in [0, 1], got {self.p_k2}")
        if not 0.0 < self.p_geo <= 1.0:
            raise ValueError(f"p_geo must be in (0, 1], got {self.p_geo}")


@dataclass(frozen=True)
class CnfPair:
    sat: CnfFormula
    unsat: CnfFormula
    params: GenParams
    flip_count: int


def child_seed(master_seed: int, label: str) -> int:
    """Deterministic 64-bit child seed for one labelled stream."""
    digest = hashlib.sha256(f"{master_seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _geometric(rng: random.Random, p: float) -> int:
    """Number of Bernoulli(p) trials to the first success; support {1, 2, ...}."""
    if p >= 1.0:
        return 1
    u = rng.random()
    return int(math.log(1.0 - u) / math.log(1.0 - p)) + 1


def sample_clause_width(params: GenParams, rng: random.Random) -> int:
    """Width 1 with probability p_k2, else 2 + geometric(p_geo), clamped to n."""
    if rng.random() < params.p_k2:
        k = 1
    else:
        k = 2 + _geometric(rng, params.p_geo)
    return min(k, params.n)


def random_clause(n: int, k: int, rng: random.Random) -> tuple[int, ...]:
    """k distinct variables sampled uniformly, each negated with probability 1/2."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    variables = rng.sample(range(1, n + 1), k)
    return tuple(v if rng.random() < 0.5 else -v for v in variables)


def flip_random_literal(formula: CnfFormula, rng: random.Random) -> CnfFormula:
    """Invert the polarity of one uniformly chosen literal."""
    ci = rng.randrange(formula.num_clauses)
    clause = formula.clauses[ci]
    li = rng.randrange(len(clause))
    new_clause = clause[:li] + (-clause[li],) + clause[li + 1 :]
    new_clauses = formula.clauses[:ci] + (new_clause,) + formula.clauses[ci + 1 :]
    return CnfFormula(formula.num_vars, new_clauses)


def gen_cnf_pair(
    params: GenParams,
    max_attempts: int = 10_000,
    max_flips: int = 20_000,
    max_restarts: int = 50,
) -> CnfPair:
    """Generate one (satisfiable, unsatisfiable) formula pair; deterministic per seed.

    The flip walk has a heavy tail on rare deeply-unsatisfiable structures, so
    a structure that does not convert within ``max_flips`` flips is discarded
    and a fresh unsatisfiable structure is drawn from the same stream.
    """
    rng = random.Random(params.seed)
    attempts_left = max_attempts

    for _ in range(max_restarts):
        unsat: CnfFormula | None = None
        while attempts_left > 0:
            attempts_left -= 1
            clauses = tuple(
                random_clause(params.n, sample_clause_width(params, rng), rng)
                for _ in range(params.m)
            )
            candidate = CnfFormula(params.n, clauses)
            if not is_satisfiable(candidate):
                unsat = candidate
                break
        if unsat is None:
            raise GenerationError(
                f"no unsatisfiable formula after {max_attempts} attempts "
                f"(n={params.n}, m={params.m})"
            )

        sat = unsat
        for flips in range(1, max_flips + 1):
            sat = flip_random_literal(sat, rng)
            if is_satisfiable(sat):
                return CnfPair(sat=sat, unsat=unsat, params=params, flip_count=flips)

    raise GenerationError(
        f"no satisfiable variant within {max_flips} flips over "
        f"{max_restarts} structures (n={params.n}, m={params.m})"
    )


def with_seed(params: GenParams, seed: int) -> GenParams:
    return replace(params, seed=seed)
