"""Solver verdicts, models, counters, and agreement with brute force."""

import random

from satquiz.cnf import CnfFormula, evaluate
from satquiz.engine import is_satisfiable, solve
from satquiz.oracles import brute_force_solve

from conftest import random_formula


class TestVerdicts:
    def test_single_unit(self):
        r = solve(CnfFormula(1, ((1,),)))
        assert r.status == "SAT"
        assert r.model == (True,)

    def test_contradictory_units(self):
        r = solve(CnfFormula(1, ((1,), (-1,))))
        assert r.status == "UNSAT"
        assert r.model is None

    def test_needs_branching(self):
        f = CnfFormula(2, ((1, 2), (-1, 2), (1, -2)))
        r = solve(f)
        assert r.status == "SAT"
        assert evaluate(f, r.model)[0] == 3

    def test_all_polarity_square_unsat(self):
        f = CnfFormula(2, ((1, 2), (1, -2), (-1, 2), (-1, -2)))
        assert solve(f).status == "UNSAT"

    def test_is_satisfiable(self):
        assert is_satisfiable(CnfFormula(1, ((1,),)))
        assert not is_satisfiable(CnfFormula(1, ((1,), (-1,))))


class TestCounters:
    def test_no_decisions_on_pure_propagation(self):
        # Unit chain: x1, then x1 forces x2, x2 forces x3.
        f = CnfFormula(3, ((1,), (-1, 2), (-2, 3)))
        r = solve(f)
        assert r.status == "SAT"
        assert r.stats.decisions == 0
        assert r.stats.propagations == 3
        assert r.stats.conflicts == 0

    def test_propagations_at_least_input_units(self):
        f = CnfFormula(2, ((1,), (-1,), (2,)))
        r = solve(f)
        assert r.status == "UNSAT"
        assert r.stats.propagations >= 3  # every input unit clause counts

    def test_conflict_counted(self):
        f = CnfFormula(1, ((1,), (-1,)))
        assert solve(f).stats.conflicts == 1

    def test_decision_per_branch(self):
        # No units: the first branch on x1=True already satisfies everything.
        f = CnfFormula(2, ((1, 2),))
        r = solve(f)
        assert r.stats.decisions == 2  # x1 then the unconstrained x2
        assert r.model == (True, True)  # positive polarity first

    def test_propagation_invariant_random(self):
        rng = random.Random(11)
        for _ in range(200):
            f = random_formula(rng, rng.randint(2, 8), rng.randint(2, 16))
            units = sum(1 for c in f.clauses if len(c) == 1)
            assert solve(f).stats.propagations >= units


class TestAgainstBruteForce:
    def test_random_formulas(self):
        rng = random.Random(42)
        for _ in range(500):
            f = random_formula(rng, rng.randint(1, 10), rng.randint(1, 30))
            expected, _ = brute_force_solve(f)
            r = solve(f)
            assert r.status == expected
            if r.status == "SAT":
                count, _ = evaluate(f, r.model)
                assert count == f.num_clauses

    def test_deterministic(self):
        rng = random.Random(5)
        for _ in range(50):
            f = random_formula(rng, rng.randint(2, 8), rng.randint(2, 20))
            assert solve(f) == solve(f)
