"""Instrumented complete SAT solver.

DPLL with two watched literals, unit propagation, and chronological
backtracking. The branching heuristic is fixed (lowest-index unassigned
variable, positive polarity first) so verdicts, models, and counters are
deterministic for a given formula.

Counter definitions:
  decisions    -- one per branch opened (flipping the second polarity after a
                  conflict is not a new decision)
  conflicts    -- one per falsified clause discovered
  propagations -- one per literal assignment forced by a unit clause,
                  counted per forcing clause (so every input unit clause
                  contributes at least one)
"""

from __future__ import annotations

from dataclasses import dataclass

from .cnf import CnfFormula


@dataclass(frozen=True)
class SolverStats:
    decisions: int
    conflicts: int
    propagations: int


@dataclass(frozen=True)
class SolveResult:
    status: str  # "SAT" | "UNSAT"
    model: tuple[bool, ...] | None
    stats: SolverStats


def solve(formula: CnfFormula) -> SolveResult:
    """Decide satisfiability; on SAT return a model satisfying every clause."""
    n = formula.num_vars
    clauses = [list(c) for c in formula.clauses]
    assign = [0] * (n + 1)  # 0 unassigned, 1 true, -1 false
    trail: list[int] = []
    watches: dict[int, list[int]] = {}

    decisions = 0
    conflicts = 0
    propagations = 0

    units: list[int] = []
    for ci, cl in enumerate(clauses):
        if len(cl) == 1:
            units.append(cl[0])
        else:
            watches.setdefault(cl[0], []).append(ci)
            watches.setdefault(cl[1], []).append(ci)

    def value(lit: int) -> int:
        v = assign[lit if lit > 0 else -lit]
        return v if lit > 0 else -v

    def assign_lit(lit: int) -> None:
        assign[abs(lit)] = 1 if lit > 0 else -1
        trail.append(lit)

    def propagate(start: int) -> bool:
        """Process trail entries from ``start``; False on conflict."""
        nonlocal conflicts, propagations
        i = start
        while i < len(trail):
            neg = -trail[i]
            i += 1
            wl = watches.get(neg)
            if not wl:
                continue
            j = 0
            while j < len(wl):
                ci = wl[j]
                cl = clauses[ci]
                if cl[0] == neg:
                    cl[0], cl[1] = cl[1], cl[0]
                other = cl[0]
                ov = value(other)
                if ov == 1:
                    j += 1
                    continue
                moved = False
                for k in range(2, len(cl)):
                    if value(cl[k]) != -1:
                        cl[1], cl[k] = cl[k], cl[1]
                        watches.setdefault(cl[1], []).append(ci)
                        wl[j] = wl[-1]
                        wl.pop()
                        moved = True
                        break
                if moved:
                    continue
                if ov == -1:
                    conflicts += 1
                    return False
                assign_lit(other)
                propagations += 1
                j += 1
        return True

    def finish(status: str) -> SolveResult:
        model = tuple(assign[v] == 1 for v in range(1, n + 1)) if status == "SAT" else None
        return SolveResult(status, model, SolverStats(decisions, conflicts, propagations))

    # Root-level units; each input unit clause counts as one propagation,
    # even those after a root conflict, so propagations >= #input unit clauses.
    propagations += len(units)
    root_conflict = False
    for lit in units:
        v = value(lit)
        if v == -1:
            if not root_conflict:
                conflicts += 1
                root_conflict = True
        elif v == 0 and not root_conflict:
            assign_lit(lit)
    if root_conflict:
        return finish("UNSAT")

    if not propagate(0):
        return finish("UNSAT")

    # Branch stack: (variable, second polarity tried, trail length at branch).
    stack: list[tuple[int, bool, int]] = []
    next_var = 1
    while True:
        while next_var <= n and assign[next_var] != 0:
            next_var += 1
        if next_var > n:
            return finish("SAT")

        decisions += 1
        stack.append((next_var, False, len(trail)))
        assign_lit(next_var)  # positive polarity first
        prop_from = len(trail) - 1

        while not propagate(prop_from):
            while stack and stack[-1][1]:
                _, _, tl = stack.pop()
                while len(trail) > tl:
                    assign[abs(trail.pop())] = 0
            if not stack:
                return finish("UNSAT")
            var, _, tl = stack[-1]
            while len(trail) > tl:
                assign[abs(trail.pop())] = 0
            stack[-1] = (var, True, tl)
            assign_lit(-var)
            prop_from = len(trail) - 1
            next_var = var  # variables below var may have been unassigned


def is_satisfiable(formula: CnfFormula) -> bool:
    return solve(formula).status == "SAT"
