"""Batch harnesses: composition tables, gadget censuses, amplifier suites.

Every emitted file starts with manifest comment rows (config, seed, package
version, and the bit-order convention) so a run can be reproduced exactly;
with a fixed seed the payload is byte-identical across reruns except for the
runtime column.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import metadata
from typing import Optional, Sequence

import numpy as np

from .amplify import AmplifierReport, verify_amplifier_pipeline
from .boolfn import (BooleanFunction, Classification, classify, compose,
                     functions_depending_on_all)
from .degrees import DegreesConfig, approx_degree, exact_degree
from .errors import BudgetError, InvariantError
from .exprs import parse_to_function
from .gadgets import find_min_sensitive_block2, simulate_and2, simulate_or2
from .rational import format_rational
from .spectral import spectral_sensitivity

BIT_ORDER_NOTE = "x1 is the least-significant bit of the table index"


def _package_version() -> str:
    try:
        return metadata.version("adeglab")
    except metadata.PackageNotFoundError:
        return "unversioned"


def manifest_lines(kind: str, config: dict) -> list:
    payload = json.dumps(config, sort_keys=True, default=str)
    return [
        f"# adeglab {kind} v{_package_version()}",
        f"# bit_order: {BIT_ORDER_NOTE}",
        f"# config: {payload}",
    ]


# ---------------------------------------------------------------------------
# composition tables
# ---------------------------------------------------------------------------

@dataclass
class ExperimentRow:
    f_id: str
    g_id: str
    adeg_f: int
    adeg_g: int
    adeg_fg: int
    deg_f: int
    deg_g: int
    deg_fg: int
    lambda_f: float
    lambda_g: float
    lambda_fg: float
    ratio: Optional[Fraction]          # adeg_fg / (adeg_f * adeg_g)
    sandwich_ok: bool
    runtime_ms: int
    error: str = ""

    CSV_COLUMNS = [
        "f_id", "g_id", "adeg_f", "adeg_g", "adeg_fg", "deg_f", "deg_g",
        "deg_fg", "lambda_f", "lambda_g", "lambda_fg", "ratio",
        "sandwich_ok", "runtime_ms", "error",
    ]

    def csv_row(self) -> list:
        out = []
        for col in self.CSV_COLUMNS:
            v = getattr(self, col)
            if isinstance(v, Fraction):
                v = format_rational(v)
            elif isinstance(v, float):
                v = f"{v:.9f}"
            elif v is None:
                v = ""
            out.append(v)
        return out

    def to_json(self) -> dict:
        return {c: (format_rational(v) if isinstance(v, Fraction) else v)
                for c in self.CSV_COLUMNS for v in [getattr(self, c)]}


def composition_row(f_id: str, g_id: str, eps: Fraction,
                    config: Optional[DegreesConfig] = None) -> ExperimentRow:
    start = time.monotonic()
    f = parse_to_function(f_id)
    g = parse_to_function(g_id)
    fg = compose(f, [g] * f.arity)
    adeg_f = approx_degree(f, eps, config=config).degree
    adeg_g = approx_degree(g, eps, config=config).degree
    adeg_fg = approx_degree(fg, eps, config=config).degree
    deg_f = exact_degree(f).degree
    deg_g = exact_degree(g).degree
    deg_fg = exact_degree(fg).degree
    lam_f = spectral_sensitivity(f).lam
    lam_g = spectral_sensitivity(g).lam
    lam_fg = spectral_sensitivity(fg).lam
    ratio = Fraction(adeg_fg, adeg_f * adeg_g) if adeg_f and adeg_g else None
    sandwich = max(adeg_f, adeg_g) <= adeg_fg <= deg_f * deg_g
    return ExperimentRow(
        f_id=f_id, g_id=g_id, adeg_f=adeg_f, adeg_g=adeg_g, adeg_fg=adeg_fg,
        deg_f=deg_f, deg_g=deg_g, deg_fg=deg_fg,
        lambda_f=lam_f, lambda_g=lam_g, lambda_fg=lam_fg,
        ratio=ratio, sandwich_ok=sandwich,
        runtime_ms=int((time.monotonic() - start) * 1000),
    )


DEFAULT_PAIR_GRID = [
    ("AND2", "OR2"), ("OR2", "AND2"), ("AND2", "PARITY2"),
    ("PARITY2", "PARITY2"), ("PARITY2", "AND2"), ("AND2", "MAJ3"),
    ("MAJ3", "AND2"), ("MAJ3", "PARITY2"), ("OR2", "OR3"),
    ("AND3", "OR2"), ("OR2", "MAJ3"), ("MAJ3", "MAJ3"),
]


def composition_table(pairs: Sequence, eps: Fraction,
                      config: Optional[DegreesConfig] = None,
                      jobs: int = 1) -> list:
    """One ExperimentRow per (f, g) pair; per-row failures are recorded
    in-row and the run continues."""

    def run(pair):
        f_id, g_id = pair
        try:
            return composition_row(f_id, g_id, eps, config)
        except (BudgetError, InvariantError) as exc:
            return ExperimentRow(
                f_id=f_id, g_id=g_id, adeg_f=0, adeg_g=0, adeg_fg=0,
                deg_f=0, deg_g=0, deg_fg=0, lambda_f=0.0, lambda_g=0.0,
                lambda_fg=0.0, ratio=None, sandwich_ok=False, runtime_ms=0,
                error=f"{type(exc).__name__}: {exc}",
            )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, pairs))
    return [run(p) for p in pairs]


def write_composition_csv(rows: Sequence, eps: Fraction, target,
                          include_runtime: bool = True) -> None:
    own = isinstance(target, (str, bytes))
    fh = open(target, "w", newline="", encoding="utf-8") if own else target
    try:
        for line in manifest_lines("composition-table", {"eps": format_rational(eps)}):
            fh.write(line + "\n")
        writer = csv.writer(fh)
        cols = list(ExperimentRow.CSV_COLUMNS)
        writer.writerow(cols)
        for row in rows:
            writer.writerow(row.csv_row())
    finally:
        if own:
            fh.close()


def composition_csv_text(rows, eps, include_runtime=True) -> str:
    buf = io.StringIO()
    write_composition_csv(rows, eps, buf, include_runtime)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# gadget census
# ---------------------------------------------------------------------------

@dataclass
class CensusRow:
    table_hex: str
    tag: str
    and_depth: int
    or_depth: int
    block_point: str
    block_indices: str
    passed: bool
    error: str = ""

    CSV_COLUMNS = ["table_hex", "tag", "and_depth", "or_depth",
                   "block_point", "block_indices", "passed", "error"]

    def csv_row(self):
        return [getattr(self, c) for c in self.CSV_COLUMNS]


@dataclass
class CensusReport:
    arity: int
    total_functions: int
    qualifying: int
    passed: int
    sampled: Optional[int]
    seed: Optional[int]
    rows: list = field(default_factory=list)

    def summary(self) -> dict:
        return {"arity": self.arity, "total_functions": self.total_functions,
                "qualifying": self.qualifying, "passed": self.passed,
                "sampled": self.sampled, "seed": self.seed}


_QUALIFYING = (Classification.MONOTONE_OTHER, Classification.NON_MONOTONE_OTHER)


def _census_one(h: BooleanFunction) -> CensusRow:
    tag = classify(h)
    try:
        ca = simulate_and2(h)
        co = simulate_or2(h)
        blk = find_min_sensitive_block2(h)
        if not blk.check(h):
            raise InvariantError("re-check of the sensitive block failed")
        ok = ca.verified and co.verified and ca.depth() <= 3 and co.depth() <= 3
        return CensusRow(
            table_hex=f"{h.table:x}", tag=tag.value,
            and_depth=ca.depth(), or_depth=co.depth(),
            block_point="".join(str(b) for b in blk.point),
            block_indices=f"{blk.indices[0]};{blk.indices[1]}",
            passed=ok,
        )
    except Exception as exc:      # a census failure is a finding, not a crash
        return CensusRow(table_hex=f"{h.table:x}", tag=tag.value, and_depth=-1,
                         or_depth=-1, block_point="", block_indices="",
                         passed=False, error=f"{type(exc).__name__}: {exc}")


def gadget_census(arity: int, sample: Optional[int] = None,
                  seed: Optional[int] = None) -> CensusReport:
    """Extraction census over base functions of the given arity.

    Exhaustive for arity <= 4 when sample is None; otherwise `sample`
    qualifying functions are drawn with the given seed.
    """
    rows = []
    qualifying = 0
    if sample is None:
        if arity > 4:
            raise BudgetError("exhaustive census capped at arity 4; pass sample=")
        total = 1 << (1 << arity)
        for h in functions_depending_on_all(arity):
            if classify(h) not in _QUALIFYING:
                continue
            qualifying += 1
            rows.append(_census_one(h))
    else:
        rng = np.random.default_rng(seed)
        total = sample
        seen = set()
        while qualifying < sample:
            table = int(rng.integers(0, 1 << (1 << arity), dtype=np.uint64)) \
                if arity <= 5 else int.from_bytes(rng.bytes((1 << arity) // 8), "little")
            if table in seen:
                continue
            seen.add(table)
            h = BooleanFunction(arity, table)
            if classify(h) not in _QUALIFYING:
                continue
            qualifying += 1
            rows.append(_census_one(h))
    passed = sum(1 for r in rows if r.passed)
    return CensusReport(arity=arity, total_functions=total, qualifying=qualifying,
                        passed=passed, sampled=sample, seed=seed, rows=rows)


def write_census_csv(report: CensusReport, target) -> None:
    own = isinstance(target, (str, bytes))
    fh = open(target, "w", newline="", encoding="utf-8") if own else target
    try:
        for line in manifest_lines("gadget-census", report.summary()):
            fh.write(line + "\n")
        writer = csv.writer(fh)
        writer.writerow(CensusRow.CSV_COLUMNS)
        for row in report.rows:
            writer.writerow(row.csv_row())
    finally:
        if own:
            fh.close()


# ---------------------------------------------------------------------------
# amplifier pipeline suite
# ---------------------------------------------------------------------------

DEFAULT_PIPELINE_GRID = (
    [(f_id, g_id, t, "MAJ")
     for f_id in ("AND2", "OR2", "PARITY2")
     for g_id in ("PARITY2", "OR2")
     for t in (1, 3)]
    + [("AND2", "MAJ3", 1, "MAJ"), ("AND2", "OR2", 2, "AND")]
)


def pipeline_suite(grid=None, eps: Fraction = Fraction(1, 3),
                   delta: Fraction = Fraction(1, 4),
                   config: Optional[DegreesConfig] = None,
                   jobs: int = 1) -> list:
    grid = DEFAULT_PIPELINE_GRID if grid is None else grid

    def run(item):
        f_id, g_id, t, middle = item
        return verify_amplifier_pipeline(
            parse_to_function(f_id), parse_to_function(g_id), t, eps, delta,
            middle, config=config)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, grid))
    return [run(item) for item in grid]


def write_pipeline_csv(reports: Sequence, target) -> None:
    own = isinstance(target, (str, bytes))
    fh = open(target, "w", newline="", encoding="utf-8") if own else target
    try:
        for line in manifest_lines("pipeline-suite", {}):
            fh.write(line + "\n")
        writer = csv.writer(fh)
        writer.writerow(AmplifierReport.CSV_COLUMNS)
        for report in reports:
            writer.writerow(report.csv_row())
    finally:
        if own:
            fh.close()
