"""Dataset grids: build, annotate with difficulty counters, persist, load.

Files are UTF-8 line-delimited JSON, one record per pair, every record
carrying ``schema_version``. Difficulty counters come from this package's
deterministic engine and oracles, so absolute values are comparable only
within one package version.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

from .cnf import parse_dimacs, serialize_dimacs
from .engine import solve
from .generate import CnfPair, GenParams, child_seed, gen_cnf_pair
from .oracles import _find_one_mcs_counted, _find_one_mus_counted, maxsat_optimum

SCHEMA_VERSION = 1

EVAL_NS = tuple(range(3, 17))
EVAL_PAIRS_PER_CONFIG = 10
RFT_NS = tuple(range(3, 9))
RFT_RATIO_TENTHS = tuple(range(21, 41))  # 2.1 .. 4.0 in steps of 0.1
RFT_PAIRS_PER_CONFIG = 25


class DatasetError(ValueError):
    """Schema mismatch or corrupt dataset file."""


@dataclass(frozen=True)
class DatasetRecord:
    pair_id: str
    params: GenParams
    sat_dimacs: str
    unsat_dimacs: str
    flip_count: int
    stats: dict | None = None

    def pair(self) -> CnfPair:
        return CnfPair(
            sat=parse_dimacs(self.sat_dimacs),
            unsat=parse_dimacs(self.unsat_dimacs),
            params=self.params,
            flip_count=self.flip_count,
        )


def rft_clause_count(n: int, ratio_tenths: int) -> int:
    """m = round(ratio * n) with half-up rounding, floored at n + 1."""
    return max((ratio_tenths * n + 5) // 10, n + 1)


def _build_record(pair_id: str, params: GenParams, annotate: bool) -> DatasetRecord:
    pair = gen_cnf_pair(params)
    record = DatasetRecord(
        pair_id=pair_id,
        params=params,
        sat_dimacs=serialize_dimacs(pair.sat),
        unsat_dimacs=serialize_dimacs(pair.unsat),
        flip_count=pair.flip_count,
    )
    return annotate_difficulty(record) if annotate else record


def annotate_difficulty(record: DatasetRecord) -> DatasetRecord:
    """Attach engine stats for both members and oracle effort counters."""
    pair = record.pair()
    sat_result = solve(pair.sat)
    unsat_result = solve(pair.unsat)
    maxsat = maxsat_optimum(pair.unsat)
    _, mcs_calls = _find_one_mcs_counted(pair.unsat)
    _, mus_calls = _find_one_mus_counted(pair.unsat)
    stats = {
        "sat": {
            "decisions": sat_result.stats.decisions,
            "conflicts": sat_result.stats.conflicts,
            "propagations": sat_result.stats.propagations,
        },
        "unsat": {
            "decisions": unsat_result.stats.decisions,
            "conflicts": unsat_result.stats.conflicts,
            "propagations": unsat_result.stats.propagations,
        },
        "maxsat_optimum": maxsat.optimum,
        "maxsat_nodes": maxsat.nodes,
        "mcs_solver_calls": mcs_calls,
        "mus_solver_calls": mus_calls,
    }
    return replace(record, stats=stats)


def _build_grid(
    specs: list[tuple[str, GenParams]], annotate: bool, jobs: int
) -> list[DatasetRecord]:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_build_record, pair_id, params, annotate)
                for pair_id, params in specs
            ]
            return [f.result() for f in futures]
    return [_build_record(pair_id, params, annotate) for pair_id, params in specs]


def build_eval_grid(seed: int, annotate: bool = True, jobs: int = 1) -> list[DatasetRecord]:
    """14 variable counts (3..16), m = 4n, 10 pairs each: 140 records."""
    specs = []
    for n in EVAL_NS:
        for i in range(EVAL_PAIRS_PER_CONFIG):
            pair_id = f"eval-n{n:02d}-p{i:02d}"
            params = GenParams(n=n, m=4 * n, seed=child_seed(seed, pair_id))
            specs.append((pair_id, params))
    return _build_grid(specs, annotate, jobs)


def build_rft_grid(seed: int, annotate: bool = True, jobs: int = 1) -> list[DatasetRecord]:
    """6 variable counts (3..8) x 20 ratios (2.1..4.0) x 25 pairs: 3000 records."""
    specs = []
    for n in RFT_NS:
        for tenths in RFT_RATIO_TENTHS:
            for i in range(RFT_PAIRS_PER_CONFIG):
                pair_id = f"rft-n{n}-r{tenths / 10:.1f}-p{i:02d}"
                params = GenParams(
                    n=n, m=rft_clause_count(n, tenths), seed=child_seed(seed, pair_id)
                )
                specs.append((pair_id, params))
    return _build_grid(specs, annotate, jobs)


def _record_to_dict(record: DatasetRecord) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "pair_id": record.pair_id,
        "n": record.params.n,
        "m": record.params.m,
        "p_k2": record.params.p_k2,
        "p_geo": record.params.p_geo,
        "seed": record.params.seed,
        "flip_count": record.flip_count,
        "sat_dimacs": record.sat_dimacs,
        "unsat_dimacs": record.unsat_dimacs,
        "stats": record.stats,
    }


def _record_from_dict(obj: dict) -> DatasetRecord:
    version = obj.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DatasetError(f"unsupported schema_version {version!r}")
    params = GenParams(
        n=obj["n"], m=obj["m"], p_k2=obj["p_k2"], p_geo=obj["p_geo"], seed=obj["seed"]
    )
    return DatasetRecord(
        pair_id=obj["pair_id"],
        params=params,
        sat_dimacs=obj["sat_dimacs"],
        unsat_dimacs=obj["unsat_dimacs"],
        flip_count=obj["flip_count"],
        stats=obj.get("stats"),
    )


def write_dataset(records: Iterable[DatasetRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(_record_to_dict(record)) + "\n")


def read_dataset(path: str | Path) -> list[DatasetRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                records.append(_record_from_dict(obj))
            except DatasetError as exc:
                raise DatasetError(f"line {lineno}: {exc}") from None
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise DatasetError(f"line {lineno}: corrupt record ({exc})") from None
    return records


def find_record(records: list[DatasetRecord], pair_id: str) -> DatasetRecord:
    for record in records:
        if record.pair_id == pair_id:
            return record
    raise KeyError(f"unknown pair_id {pair_id!r}")
