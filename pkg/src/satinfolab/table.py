"""Precomputed-solution table: a complete binary trie over all L-bit strings.

Internal nodes hold explicit left/right child references (heap-numbered, so
node k has children 2k+1 and 2k+2).  Leaf ``2^L - 1 + key`` holds the answer
for the L-bit string ``key``: the oracle's first model for a satisfiable
instance, or the empty answer for unsatisfiable and undecodable strings.
"""

from __future__ import annotations

import math
import struct
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .codec import INVALID, decode_instance
from .core import Assignment
from .oracle import SolveResult, UNSAT, oracle_cap, solve_brute

DEFAULT_DEPTH_CAP = 22
MAGIC = b"SITB"
FORMAT_VERSION = 1

# leaf answer codes
CODE_INVALID = -2
CODE_UNSAT = -1

_LEAF_KIND = {CODE_INVALID: 0, CODE_UNSAT: 1}


class TableCapError(RuntimeError):
    pass


@dataclass
class SolutionTable:
    depth: int
    left: np.ndarray  # child references of the 2^L - 1 internal nodes
    right: np.ndarray
    codes: np.ndarray  # per leaf: CODE_INVALID, CODE_UNSAT, or the model as a counter value
    nvars: np.ndarray  # per leaf: n of the decoded instance, 0 when invalid
    build_time: float = 0.0

    @property
    def internal_count(self) -> int:
        return len(self.left)

    @property
    def leaf_count(self) -> int:
        return len(self.codes)

    @property
    def node_count(self) -> int:
        return self.internal_count + self.leaf_count

    def leaf_answer(self, leaf: int) -> SolveResult:
        code = int(self.codes[leaf])
        if code < 0:
            return UNSAT
        return SolveResult(Assignment.from_int(code, int(self.nvars[leaf])))


@dataclass(frozen=True)
class LookupResult:
    answer: SolveResult
    invalid: bool
    steps: int
    bit_ops: int


@dataclass
class TableStats:
    depth: int
    internal_count: int
    leaf_count: int
    yes_leaves: int
    no_leaves: int
    invalid_leaves: int
    total_bits: int
    serialized_bytes: int
    entropy_bits_per_byte: float
    build_time: float
    mean_lookup_steps: float

    def payload(self) -> dict:
        """Fields that are deterministic for a given depth (no timings)."""
        d = dict(self.__dict__)
        d.pop("build_time")
        return d


def leaf_code(key: int, L: int, cap: Optional[int] = None) -> tuple[int, int]:
    """(answer code, n) for the L-bit string with integer value ``key``."""
    instance = decode_instance(format(key, f"0{L}b"))
    if instance is INVALID:
        return CODE_INVALID, 0
    result = solve_brute(instance, cap=cap)
    return (result.model.to_int() if result.sat else CODE_UNSAT), instance.n


def _build_range(args) -> tuple[np.ndarray, np.ndarray]:
    L, start, stop, cap = args
    codes = np.empty(stop - start, dtype=np.int64)
    nvars = np.empty(stop - start, dtype=np.uint8)
    for key in range(start, stop):
        codes[key - start], nvars[key - start] = leaf_code(key, L, cap)
    return codes, nvars


def build_table(L: int, *, depth_cap: int = DEFAULT_DEPTH_CAP, cap: Optional[int] = None,
                workers: int = 1, prefix_bits: int = 4) -> SolutionTable:
    """Build the complete trie of depth ``L``.

    With ``workers > 1`` the key space is split on its first ``prefix_bits``
    bits and each subtrie's leaves are solved in a separate process; results
    are stitched back in key order so the table is identical to a serial build.
    """
    if not 1 <= L <= depth_cap:
        raise TableCapError(f"depth {L} outside [1, {depth_cap}]")
    cap = oracle_cap() if cap is None else cap
    t0 = time.perf_counter()
    internal = (1 << L) - 1
    idx = np.arange(internal, dtype=np.int64)
    left, right = 2 * idx + 1, 2 * idx + 2

    total = 1 << L
    parts = min(1 << min(prefix_bits, L), total)
    size = total // parts
    jobs = [(L, k * size, (k + 1) * size, cap) for k in range(parts)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_build_range, jobs))
    else:
        results = [_build_range(job) for job in jobs]
    codes = np.concatenate([r[0] for r in results])
    nvars = np.concatenate([r[1] for r in results])
    return SolutionTable(L, left, right, codes, nvars, time.perf_counter() - t0)


def lookup(table: SolutionTable, key: str) -> LookupResult:
    """Walk from the root reading one key bit per level.

    Every child dereference costs L + 1 bit operations (one address of that
    width), so a lookup reports exactly L steps and L(L+1) bit operations.
    """
    L = table.depth
    if len(key) != L or any(ch not in "01" for ch in key):
        raise ValueError(f"key must be a {L}-bit binary string")
    internal = table.internal_count
    node = 0
    steps = 0
    for bit in key:
        node = int(table.right[node] if bit == "1" else table.left[node])
        steps += 1
        if steps > L:
            raise AssertionError("lookup visited more than L internal nodes")
    if node < internal:
        raise AssertionError("lookup ended on an internal node")
    leaf = node - internal
    return LookupResult(table.leaf_answer(leaf), int(table.codes[leaf]) == CODE_INVALID, steps, steps * (L + 1))


def serialize(table: SolutionTable) -> bytes:
    """Preorder node stream after a header of magic, version and depth.

    Internal node: ``0x00``.  Leaf: ``0x01``, kind byte (0 invalid, 1 unsat,
    2 sat), n byte, model as a 4-byte big-endian counter value.
    """
    out = bytearray(MAGIC)
    out += struct.pack(">BB", FORMAT_VERSION, table.depth)
    internal = table.internal_count
    left, right = table.left.tolist(), table.right.tolist()
    codes, nvars = table.codes.tolist(), table.nvars.tolist()
    stack = [0]
    while stack:
        node = stack.pop()
        if node < internal:
            out.append(0)
            stack.append(right[node])
            stack.append(left[node])
        else:
            leaf = node - internal
            code = codes[leaf]
            kind = _LEAF_KIND.get(code, 2)
            out += struct.pack(">BBBI", 1, kind, nvars[leaf], max(code, 0))
    return bytes(out)


def deserialize(data: bytes) -> SolutionTable:
    if data[:4] != MAGIC:
        raise ValueError("not a solution table file")
    version, L = struct.unpack_from(">BB", data, 4)
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported table format version {version}")
    internal = (1 << L) - 1
    codes = np.empty(1 << L, dtype=np.int64)
    nvars = np.zeros(1 << L, dtype=np.uint8)
    left = np.empty(internal, dtype=np.int64)
    right = np.empty(internal, dtype=np.int64)
    pos = 6
    next_leaf = 0
    # rebuild heap numbering while replaying the preorder stream
    stack = [0]
    while stack:
        node = stack.pop()
        if pos >= len(data):
            raise ValueError("truncated table stream")
        tag = data[pos]
        if tag == 0:
            if node >= internal:
                raise ValueError("internal node below depth L")
            pos += 1
            left[node], right[node] = 2 * node + 1, 2 * node + 2
            stack.append(2 * node + 2)
            stack.append(2 * node + 1)
        elif tag == 1:
            if node - internal != next_leaf:
                raise ValueError("leaf out of key order")
            if pos + 7 > len(data):
                raise ValueError("truncated table stream")
            _, kind, n, model = struct.unpack_from(">BBBI", data, pos)
            pos += 7
            codes[next_leaf] = model if kind == 2 else (CODE_INVALID if kind == 0 else CODE_UNSAT)
            nvars[next_leaf] = n
            next_leaf += 1
        else:
            raise ValueError(f"bad node tag {tag}")
    if pos != len(data) or next_leaf != 1 << L:
        raise ValueError("truncated or oversized table stream")
    return SolutionTable(L, left, right, codes, nvars)


def _entropy(data: bytes) -> float:
    counts = Counter(data)
    total = len(data)
    return -sum(c / total * math.log2(c / total) for c in counts.values())


def table_stats(table: SolutionTable, lookup_sample: int = 4096, seed: int = 0) -> TableStats:
    L = table.depth
    codes = table.codes
    invalid = int(np.count_nonzero(codes == CODE_INVALID))
    no = int(np.count_nonzero(codes == CODE_UNSAT))
    yes = table.leaf_count - invalid - no
    blob = serialize(table)
    if table.leaf_count <= lookup_sample:
        keys = range(table.leaf_count)
    else:
        keys = np.random.default_rng(seed).integers(0, table.leaf_count, lookup_sample).tolist()
    steps = [lookup(table, format(k, f"0{L}b")).steps for k in keys]
    return TableStats(
        depth=L,
        internal_count=table.internal_count,
        leaf_count=table.leaf_count,
        yes_leaves=yes,
        no_leaves=no,
        invalid_leaves=invalid,
        total_bits=table.node_count * 2 * (L + 1),
        serialized_bytes=len(blob),
        entropy_bits_per_byte=_entropy(blob),
        build_time=table.build_time,
        mean_lookup_steps=float(np.mean(steps)),
    )


def size_ratio_bounds(stats: list[TableStats]) -> tuple[float, float]:
    """Tightest (c1, c2) with c1 L <= total_bits / 2^L <= c2 L over ``stats``."""
    ratios = [s.total_bits / (1 << s.depth) / s.depth for s in stats]
    return min(ratios), max(ratios)
