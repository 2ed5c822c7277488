"""Ground-truth computations: MaxSAT optimum, correction-set and core checks.

Minimality of a candidate subset is established by single-element deletion
checks. This suffices because both defining properties are monotone:
removing fewer clauses keeps a superset of an unsatisfiable formula
unsatisfiable (correction sets), and subsets of a satisfiable clause set stay
satisfiable (cores). Hence if every ``S \\ {i}`` fails the property, so does
every proper subset of ``S``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .cnf import CnfError, CnfFormula, evaluate, restrict
from .engine import is_satisfiable


class SatisfiableFormulaError(ValueError):
    """The operation requires an unsatisfiable formula but got a satisfiable one."""


@dataclass(frozen=True)
class MaxSatResult:
    optimum: int
    witness: tuple[bool, ...]
    nodes: int  # branch-and-bound nodes explored (effort counter)


def _bit_tuple(index: int, n: int) -> tuple[bool, ...]:
    # x1 is the most significant bit so increasing index is lexicographic order.
    return tuple(bool((index >> (n - 1 - j)) & 1) for j in range(n))


def brute_force_solve(formula: CnfFormula) -> tuple[str, tuple[bool, ...] | None]:
    """Exact verdict by enumerating all assignments in lexicographic order."""
    n = formula.num_vars
    if n > 20:
        raise CnfError(f"brute force limited to 20 variables, got {n}")
    masks = []
    for clause in formula.clauses:
        pos = neg = 0
        for lit in clause:
            if lit > 0:
                pos |= 1 << (n - lit)
            else:
                neg |= 1 << (n + lit)
        masks.append((pos, neg))
    full = (1 << n) - 1
    for a in range(1 << n):
        inv = a ^ full
        if all(a & pos or inv & neg for pos, neg in masks):
            return "SAT", _bit_tuple(a, n)
    return "UNSAT", None


def brute_force_maxsat(formula: CnfFormula) -> tuple[int, tuple[bool, ...]]:
    """Exhaustive maximum and its lexicographically smallest witness."""
    n = formula.num_vars
    if n > 20:
        raise CnfError(f"brute force limited to 20 variables, got {n}")
    best = -1
    best_idx = 0
    for a in range(1 << n):
        count, _ = evaluate(formula, _bit_tuple(a, n))
        if count > best:
            best, best_idx = count, a
            if best == formula.num_clauses:
                break
    return best, _bit_tuple(best_idx, n)


def maxsat_optimum(formula: CnfFormula) -> MaxSatResult:
    """Exact MaxSAT optimum via branch and bound over partial assignments.

    The bound at a node is (clauses not yet falsified); search order is
    variable index with false tried first, so the returned witness is the
    lexicographically smallest assignment achieving the optimum.
    """
    n = formula.num_vars
    m = formula.num_clauses
    sizes = [len(c) for c in formula.clauses]
    occ: list[list[tuple[int, bool]]] = [[] for _ in range(n + 1)]
    for ci, clause in enumerate(formula.clauses):
        for lit in clause:
            occ[abs(lit)].append((ci, lit > 0))

    true_lits = [0] * m
    false_lits = [0] * m
    state = {"falsified": 0, "nodes": 0}
    assign = [False] * (n + 1)

    def apply(var: int, val: bool) -> None:
        for ci, pol in occ[var]:
            if pol == val:
                true_lits[ci] += 1
            else:
                false_lits[ci] += 1
                if false_lits[ci] == sizes[ci]:
                    state["falsified"] += 1

    def undo(var: int, val: bool) -> None:
        for ci, pol in occ[var]:
            if pol == val:
                true_lits[ci] -= 1
            else:
                if false_lits[ci] == sizes[ci]:
                    state["falsified"] -= 1
                false_lits[ci] -= 1

    # Seed the bound with a few cheap assignments.
    majority = tuple(
        sum(pol for _, pol in occ[v]) * 2 >= len(occ[v]) for v in range(1, n + 1)
    )
    best = max(
        evaluate(formula, seed)[0]
        for seed in ((False,) * n, (True,) * n, majority)
    )

    def dfs_value(var: int) -> None:
        nonlocal best
        state["nodes"] += 1
        if m - state["falsified"] <= best:
            return
        if var > n:
            best = m - state["falsified"]
            return
        for val in (False, True):
            apply(var, val)
            dfs_value(var + 1)
            undo(var, val)

    dfs_value(1)
    optimum = best

    witness: tuple[bool, ...] | None = None

    def dfs_witness(var: int) -> bool:
        state["nodes"] += 1
        if m - state["falsified"] < optimum:
            return False
        if var > n:
            nonlocal witness
            witness = tuple(assign[1:])
            return True
        for val in (False, True):
            assign[var] = val
            apply(var, val)
            done = dfs_witness(var + 1)
            undo(var, val)
            if done:
                return True
        return False

    dfs_witness(1)
    assert witness is not None
    return MaxSatResult(optimum, witness, state["nodes"])


def _sat_after(formula: CnfFormula, mask: Sequence[bool], mode: str, counter: list[int]) -> bool:
    """Satisfiability of the restricted formula; the empty formula is SAT."""
    want = mode == "keep"
    if not any(bool(sel) == want for sel in mask):
        return True
    counter[0] += 1
    return is_satisfiable(restrict(formula, mask, mode))


def _require_unsat(formula: CnfFormula) -> None:
    if is_satisfiable(formula):
        raise SatisfiableFormulaError(
            "operation requires an unsatisfiable formula"
        )


def check_mcs(formula: CnfFormula, subset: Sequence[bool]) -> bool:
    """True iff the subset is a minimal correction set of an unsatisfiable formula.

    Conditions: removing the subset yields a satisfiable formula, and removing
    any single-element-smaller subset does not. The empty subset is never a
    correction set (removing nothing leaves the formula unsatisfiable).
    """
    if len(subset) != formula.num_clauses:
        raise CnfError("subset length mismatch")
    _require_unsat(formula)
    mask = [bool(b) for b in subset]
    if not any(mask):
        return False
    counter = [0]
    if not _sat_after(formula, mask, "remove", counter):
        return False
    for i, selected in enumerate(mask):
        if not selected:
            continue
        mask[i] = False
        still_sat = _sat_after(formula, mask, "remove", counter)
        mask[i] = True
        if still_sat:
            return False
    return True


def check_mus(formula: CnfFormula, subset: Sequence[bool]) -> bool:
    """True iff the subset is a minimal unsatisfiable core of the formula."""
    if len(subset) != formula.num_clauses:
        raise CnfError("subset length mismatch")
    _require_unsat(formula)
    mask = [bool(b) for b in subset]
    if not any(mask):
        return False
    counter = [0]
    if _sat_after(formula, mask, "keep", counter):
        return False
    for i, selected in enumerate(mask):
        if not selected:
            continue
        mask[i] = False
        sat = _sat_after(formula, mask, "keep", counter)
        mask[i] = True
        if not sat:
            return False
    return True


def find_one_mcs(formula: CnfFormula) -> tuple[bool, ...]:
    return _find_one_mcs_counted(formula)[0]


def _find_one_mcs_counted(formula: CnfFormula) -> tuple[tuple[bool, ...], int]:
    """Linear-search correction set: greedily grow a satisfiable clause set in
    index order; the complement of the resulting maximal set is an MCS."""
    _require_unsat(formula)
    m = formula.num_clauses
    counter = [1]  # the unsat precondition check above
    keep = [False] * m
    for i in range(m):
        keep[i] = True
        if not _sat_after(formula, keep, "keep", counter):
            keep[i] = False
    mcs = [not k for k in keep]
    # The greedy set is already maximal; the shrink pass below is a guard for
    # the minimality contract and is normally a no-op.
    for i in range(m):
        if not mcs[i]:
            continue
        mcs[i] = False
        if not _sat_after(formula, mcs, "remove", counter):
            mcs[i] = True
    return tuple(mcs), counter[0]


def find_one_mus(formula: CnfFormula) -> tuple[bool, ...]:
    return _find_one_mus_counted(formula)[0]


def _find_one_mus_counted(formula: CnfFormula) -> tuple[tuple[bool, ...], int]:
    """Deletion-based core extraction: drop each clause in index order if the
    remainder stays unsatisfiable."""
    _require_unsat(formula)
    m = formula.num_clauses
    counter = [1]
    core = [True] * m
    for i in range(m):
        core[i] = False
        if _sat_after(formula, core, "keep", counter):
            core[i] = True
    return tuple(core), counter[0]


@lru_cache(maxsize=4096)
def cached_maxsat_optimum(formula: CnfFormula) -> int:
    """Memoized optimum value, used by the answer verifier."""
    return maxsat_optimum(formula).optimum
