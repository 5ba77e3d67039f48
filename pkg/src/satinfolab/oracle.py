"""Exhaustive SAT solving and model counting.

Assignments are swept as a binary counter with x_1 most significant and x_n
least significant, the same order the enumerator machine uses.  The sweep is
vectorized over chunks of the counter range with numpy; chunks are visited in
order so the first model found is the first in counter order.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Assignment, CnfInstance
from .codec import decode_clause

DEFAULT_CAP = 24
MODEL_SET_CAP = 16
CHUNK_BITS = 20
CAP_ENV = "SATINFOLAB_ORACLE_CAP"


class CapExceededError(RuntimeError):
    """Instance is larger than the configured exhaustive-search cap."""


def oracle_cap() -> int:
    value = os.environ.get(CAP_ENV)
    return int(value) if value else DEFAULT_CAP


@dataclass(frozen=True)
class SolveResult:
    model: Optional[Assignment] = None

    @property
    def sat(self) -> bool:
        return self.model is not None

    @property
    def verdict(self) -> str:
        return "SAT" if self.sat else "UNSAT"

    def __str__(self):
        return f"SAT {self.model}" if self.sat else "UNSAT"


UNSAT = SolveResult()


def _check_cap(instance: CnfInstance, cap: Optional[int]):
    cap = oracle_cap() if cap is None else cap
    if instance.n > cap:
        raise CapExceededError(f"n={instance.n} exceeds oracle cap {cap}")


def _chunks(n: int):
    total = 1 << n
    size = min(total, 1 << CHUNK_BITS)
    for start in range(0, total, size):
        yield np.arange(start, start + size, dtype=np.int64)


def satisfied_mask(instance: CnfInstance, values: np.ndarray) -> np.ndarray:
    """Boolean mask over counter values: which assignments satisfy every clause."""
    n = instance.n
    ok = np.ones(values.shape, dtype=bool)
    bit_cache: dict[int, np.ndarray] = {}
    for clause in instance.clauses:
        clause_ok = np.zeros(values.shape, dtype=bool)
        for lit in clause:
            bits = bit_cache.get(lit.var)
            if bits is None:
                bits = ((values >> (n - lit.var)) & 1).astype(bool)
                bit_cache[lit.var] = bits
            clause_ok |= ~bits if lit.negated else bits
        ok &= clause_ok
        if not ok.any():
            break
    return ok


def solve_brute(instance: CnfInstance, cap: Optional[int] = None) -> SolveResult:
    _check_cap(instance, cap)
    for values in _chunks(instance.n):
        hits = np.flatnonzero(satisfied_mask(instance, values))
        if hits.size:
            return SolveResult(Assignment.from_int(int(values[hits[0]]), instance.n))
    return UNSAT


def count_models(instance: CnfInstance, cap: Optional[int] = None) -> int:
    _check_cap(instance, cap)
    return sum(int(satisfied_mask(instance, values).sum()) for values in _chunks(instance.n))


def model_set(instance: CnfInstance, cap: Optional[int] = None) -> list[Assignment]:
    cap = MODEL_SET_CAP if cap is None else min(cap, MODEL_SET_CAP)
    _check_cap(instance, cap)
    models = []
    for values in _chunks(instance.n):
        mask = satisfied_mask(instance, values)
        models.extend(Assignment.from_int(int(v), instance.n) for v in values[mask])
    return models


def relation_record_count(max_n: int, max_m: int) -> int:
    """Records the enumerator should emit, counted with the brute-force oracle."""
    total = 0
    for n in range(1, max_n + 1):
        width = 2 * n
        for m in range(1, min(max_m, 4 ** n) + 1):
            for code in range(1 << (width * m)):
                bits = format(code, f"0{width * m}b")
                clauses = tuple(decode_clause(bits[k * width:(k + 1) * width], n) for k in range(m))
                total += max(1, len(model_set(CnfInstance(n, clauses))))
    return total
