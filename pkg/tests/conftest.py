"""Shared fixtures and independent brute-force oracles for the test suite."""

from __future__ import annotations

import random

import pytest

from satquiz.cnf import CnfFormula, evaluate
from satquiz.data import DatasetRecord, annotate_difficulty, write_dataset
from satquiz.engine import is_satisfiable
from satquiz.generate import (
    GenParams,
    child_seed,
    gen_cnf_pair,
    random_clause,
    sample_clause_width,
)
from satquiz.cnf import serialize_dimacs


# One line per acceptance criterion, echoed after the run so the pass/fail
# report survives pytest's output capture.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def assignment_bits(index: int, n: int) -> tuple[bool, ...]:
    """Assignment number ``index`` in lexicographic order (x1 most significant)."""
    return tuple(bool((index >> (n - 1 - j)) & 1) for j in range(n))


def random_formula(rng: random.Random, n: int, m: int) -> CnfFormula:
    params = GenParams(n=n, m=m, seed=0)
    clauses = tuple(
        random_clause(n, sample_clause_width(params, rng), rng) for _ in range(m)
    )
    return CnfFormula(n, clauses)


def random_unsat_formula(rng: random.Random, n: int, m: int) -> CnfFormula:
    while True:
        f = random_formula(rng, n, m)
        if not is_satisfiable(f):
            return f


def keep_sat_table(formula: CnfFormula) -> list[bool]:
    """For every clause-subset bitmask S (bit i = clause i+1): is the
    conjunction of the selected clauses satisfiable? Computed by full
    assignment enumeration; the empty subset is satisfiable."""
    n, m = formula.num_vars, formula.num_clauses
    sat_masks = []
    for a in range(1 << n):
        _, per = evaluate(formula, assignment_bits(a, n))
        sat_masks.append(sum(1 << i for i, v in enumerate(per) if v))
    return [any(mask & s == s for mask in sat_masks) for s in range(1 << m)]


def mcs_set_by_definition(formula: CnfFormula, table: list[bool]) -> set[int]:
    """All correction-set bitmasks valid under the literal definition,
    checking every proper subset (not just single deletions)."""
    m = formula.num_clauses
    full = (1 << m) - 1
    valid = set()
    for s in range(1, 1 << m):
        if not table[full ^ s]:
            continue
        ok = True
        sub = (s - 1) & s
        while True:
            if table[full ^ sub]:
                ok = False
                break
            if sub == 0:
                break
            sub = (sub - 1) & s
        if ok:
            valid.add(s)
    return valid


def mus_set_by_definition(formula: CnfFormula, table: list[bool]) -> set[int]:
    m = formula.num_clauses
    valid = set()
    for s in range(1, 1 << m):
        if table[s]:
            continue
        ok = True
        sub = (s - 1) & s
        while True:
            if not table[sub]:
                ok = False
                break
            if sub == 0:
                break
            sub = (sub - 1) & s
        if ok:
            valid.add(s)
    return valid


def int_to_mask(s: int, m: int) -> tuple[bool, ...]:
    return tuple(bool(s >> i & 1) for i in range(m))


def mask_to_bits(s: int, m: int) -> str:
    return "".join("1" if s >> i & 1 else "0" for i in range(m))


@pytest.fixture(scope="session")
def mini_records() -> list[DatasetRecord]:
    """A handful of small annotated records for CLI and bindings-style tests."""
    records = []
    for i, (n, m) in enumerate([(3, 8), (3, 10), (4, 9), (4, 12), (5, 10), (5, 12)]):
        pair_id = f"mini-{i:02d}"
        params = GenParams(n=n, m=m, seed=child_seed(99, pair_id))
        pair = gen_cnf_pair(params)
        records.append(
            annotate_difficulty(
                DatasetRecord(
                    pair_id=pair_id,
                    params=params,
                    sat_dimacs=serialize_dimacs(pair.sat),
                    unsat_dimacs=serialize_dimacs(pair.unsat),
                    flip_count=pair.flip_count,
                )
            )
        )
    return records


@pytest.fixture(scope="session")
def mini_dataset_file(mini_records, tmp_path_factory) -> str:
    path = tmp_path_factory.mktemp("mini") / "mini.jsonl"
    write_dataset(mini_records, path)
    return str(path)
