"""Embedding a bit sequence of length 2^n into a batch of 3-SAT instances.

Instance j (0 <= j < 2^n) has one group of four clauses per variable x_i::

    (x_a ∨ x_b ∨ ~x_i) (¬x_a ∨ x_b ∨ ~x_i) (x_a ∨ ¬x_b ∨ ~x_i) (¬x_a ∨ ¬x_b ∨ ~x_i)

where ~x_i is x_i when digit i of j (digit 1 most significant) is 1 and
¬x_i otherwise.  With ~x_i written consistently the group forces ~x_i true,
so the instance has exactly one model: the digits of j.  A 0 bit is encoded
by flipping ~x_i in some of clauses 2..4 (a flip pattern) in every group.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .codec import encode_instance, read_ascii, decode_instance, INVALID
from .core import Clause, CnfInstance, Literal
from .metrics import logarithmic_length, uniform_length
from .oracle import count_models, oracle_cap, solve_brute

Pattern = frozenset  # subset of {2, 3, 4}

LITERAL_PATTERN = frozenset({2, 3})
PATTERN_FAMILY = (
    frozenset({2, 3}),
    frozenset({2}),
    frozenset({3}),
    frozenset({4}),
    frozenset({2, 4}),
    frozenset({3, 4}),
    frozenset({2, 3, 4}),
)
MODES = ("literal", "verified")
DISTINCT_COUNT_MAX_N = 16


class PatternExhausted(RuntimeError):
    """No pattern in the family made instance j unsatisfiable."""

    def __init__(self, j: int, row: dict):
        super().__init__(f"no flip pattern yields an unsatisfiable instance for j={j}")
        self.j = j
        self.row = row


def pattern_mask(pattern: Iterable[int]) -> int:
    """Bitmask of a flip pattern: clause 2 -> 1, clause 3 -> 2, clause 4 -> 4."""
    return sum(1 << (k - 2) for k in pattern)


def pattern_from_mask(mask: int) -> frozenset:
    return frozenset(k for k in (2, 3, 4) if mask >> (k - 2) & 1)


def parse_pattern_family(text: str) -> tuple[frozenset, ...]:
    """Parse ``"23,2,3,4"`` style family specs; ``-`` is the empty pattern."""
    family = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok in ("-", "", "{}"):
            family.append(frozenset())
            continue
        pattern = frozenset(int(ch) for ch in tok)
        if not pattern <= {2, 3, 4}:
            raise ValueError(f"flip pattern {tok!r} names clauses outside 2..4")
        family.append(pattern)
    return tuple(family)


def format_pattern(pattern: Iterable[int]) -> str:
    return "".join(str(k) for k in sorted(pattern)) or "-"


def support_pair(i: int, n: int) -> tuple[int, int]:
    """The two smallest variable indices different from i."""
    if n < 3:
        raise ValueError("support pairs need n >= 3")
    if not 1 <= i <= n:
        raise ValueError(f"i={i} outside 1..{n}")
    a, b = [k for k in range(1, 4) if k != i][:2]
    return a, b


@dataclass(frozen=True)
class GroupSpec:
    i: int
    a: int
    b: int
    positive: bool
    flips: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "flips", frozenset(self.flips))
        if self.a == self.b or self.i in (self.a, self.b):
            raise ValueError("support variables must differ from each other and from i")
        if not self.flips <= {2, 3, 4}:
            raise ValueError("flips must be a subset of {2, 3, 4}")

    @property
    def consistent(self) -> bool:
        return not self.flips


def make_group(spec: GroupSpec, n: int) -> tuple[Clause, ...]:
    if max(spec.i, spec.a, spec.b) > n:
        raise ValueError(f"group variables exceed n={n}")
    clauses = []
    for k, (neg_a, neg_b) in enumerate([(False, False), (True, False), (False, True), (True, True)], 1):
        positive = spec.positive != (k in spec.flips)
        clauses.append(Clause((Literal(spec.a, neg_a), Literal(spec.b, neg_b), Literal(spec.i, not positive))))
    return tuple(clauses)


def digits(j: int, n: int) -> list[int]:
    return [(j >> (n - i)) & 1 for i in range(1, n + 1)]


def build_instance(j: int, n: int, pattern: Iterable[int] = frozenset(),
                   pair_rule: Callable[[int, int], tuple[int, int]] = support_pair) -> CnfInstance:
    """Instance j with ``pattern`` flipped in every group (empty = consistent)."""
    if n < 3:
        raise ValueError("the construction needs n >= 3")
    if not 0 <= j < 1 << n:
        raise ValueError(f"j={j} outside [0, 2^{n})")
    clauses = []
    for i, d in enumerate(digits(j, n), 1):
        a, b = pair_rule(i, n)
        clauses.extend(make_group(GroupSpec(i, a, b, bool(d), frozenset(pattern)), n))
    return CnfInstance(n, tuple(clauses))


@dataclass
class TrbsBatch:
    n: int
    bits: str
    instances: list[CnfInstance]
    mode: str
    patterns: list[Optional[frozenset]]  # pattern used for instance j, None for a 1 bit
    family: tuple[frozenset, ...] = PATTERN_FAMILY


@dataclass
class DecodeResult:
    bits: str
    mismatches: list[tuple[int, str]]  # (j, first model) for Sat instances whose model is not j

    @property
    def ok(self) -> bool:
        return not self.mismatches


def random_bits(length: int, seed: Optional[int] = None) -> str:
    """Demo input bits from a seeded PCG64 stream, or OS entropy when seed is None."""
    if seed is None:
        raw = os.urandom((length + 7) // 8)
        return "".join(format(byte, "08b") for byte in raw)[:length]
    rng = np.random.default_rng(seed)
    return "".join("1" if b else "0" for b in rng.integers(0, 2, length))


def encode_trbs(bits: str, n: int, mode: str = "verified", family: Sequence[frozenset] = PATTERN_FAMILY,
                cap: Optional[int] = None,
                pair_rule: Callable[[int, int], tuple[int, int]] = support_pair) -> TrbsBatch:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if n < 3:
        raise ValueError("the construction needs n >= 3")
    if len(bits) != 1 << n or any(ch not in "01" for ch in bits):
        raise ValueError(f"need a binary string of length 2^{n}")
    cap = oracle_cap() if cap is None else cap
    if mode == "verified" and n > cap:
        raise ValueError(f"verified mode needs n <= oracle cap {cap}")
    instances, used = [], []
    for j, bit in enumerate(bits):
        if bit == "1":
            instances.append(build_instance(j, n, pair_rule=pair_rule))
            used.append(None)
        elif mode == "literal":
            instances.append(build_instance(j, n, LITERAL_PATTERN, pair_rule))
            used.append(LITERAL_PATTERN)
        else:
            row = {}
            for pattern in family:
                inst = build_instance(j, n, pattern, pair_rule)
                sat = solve_brute(inst, cap=cap).sat
                row[format_pattern(pattern)] = "SAT" if sat else "UNSAT"
                if not sat:
                    instances.append(inst)
                    used.append(pattern)
                    break
            else:
                raise PatternExhausted(j, {"n": n, "j": j, "verdicts": row})
    return TrbsBatch(n, bits, instances, mode, used, tuple(family))


def decode_instances(instances: Sequence[CnfInstance], n: int, cap: Optional[int] = None) -> DecodeResult:
    out, mismatches = [], []
    for j, inst in enumerate(instances):
        result = solve_brute(inst, cap=cap)
        out.append("1" if result.sat else "0")
        if result.sat and result.model.to_int() != j:
            mismatches.append((j, result.model.to_string()))
    return DecodeResult("".join(out), mismatches)


def decode_trbs(batch: TrbsBatch, cap: Optional[int] = None) -> DecodeResult:
    """Bit j is 1 iff instance j is satisfiable; Sat models must spell j."""
    return decode_instances(batch.instances, batch.n, cap)


@dataclass
class CensusReport:
    n: int
    family: tuple[frozenset, ...]
    rows: list[tuple[int, int, int, str]]  # (n, j, pattern mask, verdict)

    @property
    def unsat_fraction(self) -> float:
        return sum(r[3] == "UNSAT" for r in self.rows) / len(self.rows)

    def all_unsat(self) -> dict[str, bool]:
        """Per pattern: is the instance unsatisfiable for every j?"""
        result = {}
        for pattern in self.family:
            mask = pattern_mask(pattern)
            result[format_pattern(pattern)] = all(r[3] == "UNSAT" for r in self.rows if r[2] == mask)
        return result

    def unsat_counts(self) -> dict[str, int]:
        counts = {}
        for pattern in self.family:
            mask = pattern_mask(pattern)
            counts[format_pattern(pattern)] = sum(r[3] == "UNSAT" for r in self.rows if r[2] == mask)
        return counts

    def complete(self) -> bool:
        seen = {(r[1], r[2]) for r in self.rows}
        return len(self.rows) == len(seen) == (1 << self.n) * len(self.family)

    def summary(self) -> dict:
        return {
            "n": self.n,
            "rows": len(self.rows),
            "complete": self.complete(),
            "unsat_fraction": self.unsat_fraction,
            "unsat_counts": self.unsat_counts(),
            "all_unsat": self.all_unsat(),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("n,j,pattern_mask,verdict\n")
        for row in self.rows:
            buf.write(",".join(str(v) for v in row) + "\n")
        return buf.getvalue()


def census(n: int, family: Sequence[frozenset] = PATTERN_FAMILY, cap: Optional[int] = None,
           pair_rule: Callable[[int, int], tuple[int, int]] = support_pair) -> CensusReport:
    cap = oracle_cap() if cap is None else cap
    if not 3 <= n <= cap:
        raise ValueError(f"census needs 3 <= n <= {cap}")
    rows = []
    for j in range(1 << n):
        for pattern in family:
            verdict = solve_brute(build_instance(j, n, pattern, pair_rule), cap=cap)
            rows.append((n, j, pattern_mask(pattern), verdict.verdict))
    return CensusReport(n, tuple(family), rows)


def batch_size_report(n: int, K: int = 2) -> dict:
    """Encoded size of one batch instance next to the closed-form sizes."""
    if n < 3:
        raise ValueError("need n >= 3")
    encoded = len(encode_instance(build_instance(0, n)))
    distinct = None
    if n <= DISTINCT_COUNT_MAX_N:
        distinct = len({encode_instance(build_instance(j, n)) for j in range(1 << n)})
    return {
        "n": n,
        "K": K,
        "encoded_bits_per_instance": encoded,
        "uniform_length": uniform_length(n, K),
        "logarithmic_length": logarithmic_length(n),
        "distinct_yes_instances": distinct,
    }


def unique_model_check(n: int, js: Iterable[int], cap: Optional[int] = None) -> list[int]:
    """Return the j values whose consistent instance does not have exactly the model j."""
    bad = []
    for j in js:
        inst = build_instance(j, n)
        if count_models(inst, cap=cap) != 1 or solve_brute(inst, cap=cap).model.to_int() != j:
            bad.append(j)
    return bad


# Batch file: a header line, then one ASCII-encoded instance per line.

def write_batch(batch: TrbsBatch) -> str:
    family = ",".join(format_pattern(p) for p in batch.family)
    lines = [f"# trbs n={batch.n} mode={batch.mode} patterns={family}"]
    lines.extend(encode_instance(inst) for inst in batch.instances)
    return "\n".join(lines) + "\n"


def read_batch(text: str) -> tuple[dict, list[CnfInstance]]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# trbs "):
        raise ValueError("missing batch header")
    header = dict(tok.split("=", 1) for tok in lines[0][len("# trbs "):].split())
    meta = {"n": int(header["n"]), "mode": header["mode"], "patterns": parse_pattern_family(header["patterns"])}
    instances = []
    for bits in read_ascii("\n".join(lines[1:])):
        inst = decode_instance(bits)
        if inst is INVALID:
            raise ValueError(f"batch line does not decode: {bits[:32]}...")
        instances.append(inst)
    if len(instances) != 1 << meta["n"]:
        raise ValueError(f"batch holds {len(instances)} instances, expected 2^{meta['n']}")
    return meta, instances


def roundtrip_experiment(n: int, trials: int, seed: int, mode: str = "verified", family=PATTERN_FAMILY,
                         cap: Optional[int] = None) -> dict:
    """Encode then decode ``trials`` seeded bit strings; classify each outcome.

    A trial either round-trips, stops with PatternExhausted (whose census row
    must cover the whole family), or decodes to different bits.  The last is
    a silent failure in verified mode; in literal mode it is the measurement.
    """
    rows = []
    ok = exhausted = mismatched = silent = 0
    for t in range(trials):
        bits = random_bits(1 << n, seed + t)
        try:
            batch = encode_trbs(bits, n, mode, family, cap=cap)
        except PatternExhausted as exc:
            exhausted += 1
            complete = len(exc.row["verdicts"]) == len(family)
            silent += not complete
            rows.append({"trial": t, "bits": bits, "outcome": "pattern_exhausted", "row": exc.row})
            continue
        decoded = decode_trbs(batch, cap=cap)
        if decoded.bits == bits and decoded.ok:
            ok += 1
            rows.append({"trial": t, "bits": bits, "outcome": "ok"})
        else:
            mismatched += 1
            silent += mode == "verified"
            rows.append({"trial": t, "bits": bits, "outcome": "mismatch", "decoded": decoded.bits,
                         "model_mismatches": decoded.mismatches})
    return {"n": n, "mode": mode, "trials": trials, "roundtrip_ok": ok, "pattern_exhausted": exhausted,
            "mismatched": mismatched, "silent_failures": silent, "rows": rows}
