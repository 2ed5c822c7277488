"""Immutable CNF formulas: construction, DIMACS text, evaluation, clause restriction.

Literals use the DIMACS convention throughout the package: a literal is a
nonzero signed integer, ``abs(lit)`` is the variable index (1-based) and the
sign is the polarity. Clause subsets are boolean masks over clause positions;
bit ``i`` of a mask refers to clause ``i + 1`` in DIMACS order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Clause = tuple[int, ...]


class CnfError(ValueError):
    """Malformed formula, DIMACS text, or mismatched argument shapes."""


@dataclass(frozen=True)
class CnfFormula:
    """A CNF formula: ``num_vars`` variables and an ordered clause tuple.

    Clause order is significant and preserved everywhere; subset answers for
    correction-set and core tasks index clauses by position.
    """

    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise CnfError(f"num_vars must be >= 1, got {self.num_vars}")
        if not self.clauses:
            raise CnfError("formula must contain at least one clause")
        for idx, clause in enumerate(self.clauses, start=1):
            if not clause:
                raise CnfError(f"clause {idx} is empty")
            seen: set[int] = set()
            for lit in clause:
                if lit == 0:
                    raise CnfError(f"clause {idx} contains a zero literal")
                var = abs(lit)
                if var > self.num_vars:
                    raise CnfError(
                        f"clause {idx}: literal {lit} exceeds num_vars={self.num_vars}"
                    )
                if var in seen:
                    raise CnfError(f"clause {idx} repeats variable {var}")
                seen.add(var)

    @classmethod
    def from_clauses(cls, num_vars: int, clauses: Iterable[Iterable[int]]) -> "CnfFormula":
        return cls(num_vars, tuple(tuple(c) for c in clauses))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def clause_widths(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF text into a :class:`CnfFormula`.

    Tolerates comment lines (starting with ``c``) and arbitrary whitespace.
    Rejects: missing or malformed ``p cnf`` header, literals out of range,
    duplicate variables within a clause, clause count mismatches, and a final
    clause without its terminating ``0``.
    """
    header: tuple[int, int] | None = None
    tokens: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise CnfError("duplicate header line")
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise CnfError(f"malformed header: {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise CnfError(f"malformed header: {line!r}") from None
            continue
        if header is None:
            raise CnfError(f"clause data before header: {line!r}")
        tokens.extend(line.split())

    if header is None:
        raise CnfError("missing 'p cnf' header")
    num_vars, num_clauses = header

    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for tok in tokens:
        try:
            lit = int(tok)
        except ValueError:
            raise CnfError(f"non-integer token {tok!r}") from None
        if lit == 0:
            clauses.append(tuple(current))
            current = []
        else:
            if abs(lit) > num_vars:
                raise CnfError(f"literal {lit} exceeds declared num_vars={num_vars}")
            current.append(lit)
    if current:
        raise CnfError("last clause is missing its terminating 0")
    if len(clauses) != num_clauses:
        raise CnfError(
            f"header declares {num_clauses} clauses but {len(clauses)} were found"
        )
    return CnfFormula(num_vars, tuple(clauses))


def serialize_dimacs(formula: CnfFormula) -> str:
    """Serialize to DIMACS text: header, one clause per line, trailing newline.

    Emits no comment lines. ``parse_dimacs(serialize_dimacs(f)) == f`` exactly,
    preserving clause and literal order.
    """
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def evaluate(
    formula: CnfFormula, assignment: Sequence[bool]
) -> tuple[int, tuple[bool, ...]]:
    """Return (satisfied clause count, per-clause satisfaction vector)."""
    if len(assignment) != formula.num_vars:
        raise CnfError(
            f"assignment length {len(assignment)} != num_vars {formula.num_vars}"
        )
    per_clause = tuple(
        any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in clause)
        for clause in formula.clauses
    )
    return sum(per_clause), per_clause


def restrict(
    formula: CnfFormula, subset: Sequence[bool], mode: str = "remove"
) -> CnfFormula:
    """Keep or remove the clauses selected by a boolean mask.

    ``mode="remove"`` keeps clauses whose mask entry is false; ``mode="keep"``
    keeps clauses whose mask entry is true. Relative clause order and
    ``num_vars`` are unchanged. Raises if every clause would be eliminated.
    """
    if len(subset) != formula.num_clauses:
        raise CnfError(
            f"subset length {len(subset)} != num_clauses {formula.num_clauses}"
        )
    if mode not in ("remove", "keep"):
        raise CnfError(f"unknown restrict mode {mode!r}")
    want = mode == "keep"
    kept = tuple(c for c, sel in zip(formula.clauses, subset) if bool(sel) == want)
    if not kept:
        raise CnfError("restriction would eliminate every clause")
    return CnfFormula(formula.num_vars, kept)
