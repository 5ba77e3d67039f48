"""Tape-level enumerator and verifier machines for SAT as a string relation.

The verifier is a literal three-state machine with two read heads, one on
the formula tape and one on the assignment tape.  The enumerator is written
as nested loops that drive explicit tapes through ``increment_tape``, and it
calls the verifier for every (formula, assignment) pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Optional

from .core import Assignment

BLANK = "b"
SEP = "s"
EMPTY = "E"  # the no-solution mark
ALPHABET = frozenset("01" + BLANK + SEP + EMPTY)


class TapeError(ValueError):
    pass


class Tape:
    """A tape unbounded in both directions; unwritten cells read as blank."""

    def __init__(self, content: str = "", head: int = 0):
        self.cells: dict[int, str] = {}
        for i, sym in enumerate(content):
            self.write_at(i, sym)
        self.head = head
        self.moves = 0

    def write_at(self, pos: int, sym: str):
        if sym not in ALPHABET:
            raise TapeError(f"symbol {sym!r} not in tape alphabet")
        if sym == BLANK:
            self.cells.pop(pos, None)
        else:
            self.cells[pos] = sym

    def read(self) -> str:
        return self.cells.get(self.head, BLANK)

    def write(self, sym: str):
        self.write_at(self.head, sym)

    def move(self, delta: int):
        if delta not in (-1, 0, 1):
            raise TapeError("heads move at most one cell per step")
        self.head += delta
        self.moves += abs(delta)

    def content(self) -> str:
        """Non-blank region from the leftmost to the rightmost written cell."""
        if not self.cells:
            return ""
        lo, hi = min(self.cells), max(self.cells)
        return "".join(self.cells.get(i, BLANK) for i in range(lo, hi + 1))

    def __repr__(self):
        return f"Tape({self.content()!r}, head={self.head})"


# Incrementer: 3 states x 3 read symbols = 9 arcs.
#   seek  - run right to the blank after the number
#   carry - propagate the carry leftwards
#   back  - rewind to the first digit
# Each arc: (state, read) -> (write, move, next state); ok/overflow halt.
_INC_HALT_OK = "ok"
_INC_HALT_OVERFLOW = "overflow"
INCREMENT_ARCS = {
    ("seek", "0"): ("0", +1, "seek"),
    ("seek", "1"): ("1", +1, "seek"),
    ("seek", BLANK): (BLANK, -1, "carry"),
    ("carry", "1"): ("0", -1, "carry"),
    ("carry", "0"): ("1", -1, "back"),
    ("carry", BLANK): (BLANK, +1, _INC_HALT_OVERFLOW),
    ("back", "0"): ("0", -1, "back"),
    ("back", "1"): ("1", -1, "back"),
    ("back", BLANK): (BLANK, +1, _INC_HALT_OK),
}


def increment_tape(tape: Tape) -> bool:
    """Add 1 to the binary number starting at the head (LSB rightmost).

    Leaves the head on the first digit.  Returns True on overflow, in which
    case the number has wrapped to all zeros.
    """
    state = "seek"
    while True:
        sym = tape.read()
        arc = INCREMENT_ARCS.get((state, sym))
        if arc is None:
            raise TapeError(f"non-binary symbol {sym!r} inside the number")
        write, move, state = arc
        tape.write(write)
        tape.move(move)
        if state == _INC_HALT_OK:
            return False
        if state == _INC_HALT_OVERFLOW:
            return True


@dataclass
class VerifierState:
    state: int = 0
    head3: int = 0
    head4: int = 0
    steps: int = 0


@dataclass(frozen=True)
class VerifyResult:
    accept: bool
    steps: int

    def __bool__(self):
        return self.accept


class _ListTape:
    """Read-only tape over a string, blank outside it."""

    __slots__ = ("cells", "size")

    def __init__(self, s: str):
        self.cells = s
        self.size = len(s)

    def read(self, pos: int) -> str:
        return self.cells[pos] if 0 <= pos < self.size else BLANK


def verify(formula_bits: str, assignment_bits: str, *, trace: Optional[list] = None) -> VerifyResult:
    """Run the verifier on a formula tape and an assignment tape.

    ``steps`` counts transitions that move at least one head (a transition
    may move both).  Rewinds are walked cell by cell.  ``trace`` receives a
    ``VerifierState`` snapshot per transition when given.
    """
    n = len(assignment_bits)
    if n == 0:
        raise TapeError("assignment tape is empty")
    if len(formula_bits) % (2 * n):
        raise TapeError(f"formula tape length {len(formula_bits)} is not a multiple of 2n={2 * n}")
    if any(ch not in "01" for ch in formula_bits + assignment_bits):
        raise TapeError("tapes must hold only 0/1 between blanks")
    t3, t4 = _ListTape(formula_bits), _ListTape(assignment_bits)
    vs = VerifierState()

    def step(state, d3=0, d4=0):
        vs.state, vs.head3, vs.head4 = state, vs.head3 + d3, vs.head4 + d4
        if d3 or d4:
            vs.steps += 1
        if trace is not None:
            trace.append(VerifierState(vs.state, vs.head3, vs.head4, vs.steps))

    def rewind(both: bool):
        while t4.read(vs.head4 - 1) != BLANK or (both and t3.read(vs.head3 - 1) != BLANK):
            d3 = -1 if both and t3.read(vs.head3 - 1) != BLANK else 0
            d4 = -1 if t4.read(vs.head4 - 1) != BLANK else 0
            step(vs.state, d3, d4)

    step(1)  # state 0: heads on the leftmost cells
    while True:
        if vs.state == 1:
            if t4.read(vs.head4) == BLANK:
                # no variable satisfied the current clause
                rewind(both=True)
                return VerifyResult(False, vs.steps)
            s3 = t3.read(vs.head3)
            if s3 == "0":
                step(1, 2, 1)
            elif s3 == "1":
                step(2, 1, 0)
            else:
                rewind(both=True)
                return VerifyResult(True, vs.steps)
        else:
            s3, s4 = t3.read(vs.head3), t4.read(vs.head4)
            if s3 != s4:
                # clause satisfied: skip to the start of the next clause
                step(2, 1, 1)
                while t4.read(vs.head4) != BLANK:
                    step(2, 2, 1)
                rewind(both=False)
                step(1)
            else:
                step(1, 1, 1)


@dataclass(frozen=True)
class RelationRecord:
    n: int
    m: int
    clause_bits: str
    answer: Optional[Assignment]

    def __post_init__(self):
        if len(self.clause_bits) != 2 * self.n * self.m:
            raise ValueError("clause_bits length must be 2nm")
        if self.answer is not None and len(self.answer) != self.n:
            raise ValueError("answer length must be n")

    @property
    def formula_key(self) -> tuple[int, int, str]:
        return (self.n, self.m, self.clause_bits)


def _binary_tape(width: int) -> Tape:
    return Tape("0" * width)


def enumerate_relation(max_n: int, max_m: int, max_records: Optional[int] = None) -> Iterator[RelationRecord]:
    """Stream the SAT relation in enumeration order.

    n ascending; for each n, m from 1 up to min(max_m, 2^(2n)); for each m the
    clause bits as an ascending counter; for each formula the assignments as
    an ascending counter.  One record per satisfying assignment, or a single
    record with answer None when there is none.  Stops after ``max_records``.
    """
    if max_n < 1 or max_m < 1 or (max_records is not None and max_records < 1):
        raise ValueError("limits must be positive")
    emitted = 0
    for n in range(1, max_n + 1):
        for m in range(1, min(max_m, 4 ** n) + 1):
            formula = _binary_tape(2 * n * m)
            while True:
                clause_bits = formula.content()
                assignment = _binary_tape(n)
                found = False
                while True:
                    x = assignment.content()
                    if verify(clause_bits, x).accept:
                        found = True
                        yield RelationRecord(n, m, clause_bits, Assignment.from_string(x))
                        emitted += 1
                        if max_records is not None and emitted >= max_records:
                            return
                    if increment_tape(assignment):
                        break
                if not found:
                    yield RelationRecord(n, m, clause_bits, None)
                    emitted += 1
                    if max_records is not None and emitted >= max_records:
                        return
                if increment_tape(formula):
                    break


def _field(value: int) -> str:
    return format(value, "b")


def _quad_prefix(rec: RelationRecord) -> str:
    return _field(rec.n) + BLANK + _field(rec.m - 1) + BLANK + rec.clause_bits + BLANK


def format_blocks(records: Iterable[RelationRecord]) -> Iterator[str]:
    """Group a record stream into tape-5 blocks, one string per formula.

    A yes block repeats the quadruplet ``n b m-1 b clauses b x b`` for every
    solution and ends with ``s``; a no block is ``n b m-1 b clauses b E s``.
    A block cut short by the record limit is still closed with ``s``.
    """
    current_key = None
    parts: list[str] = []
    for rec in records:
        if rec.formula_key != current_key:
            if parts:
                yield "".join(parts) + SEP
            parts = []
            current_key = rec.formula_key
        if rec.answer is None:
            parts.append(_quad_prefix(rec) + EMPTY)
        else:
            parts.append(_quad_prefix(rec) + rec.answer.to_string() + BLANK)
    if parts:
        yield "".join(parts) + SEP


def dump_tape5(records: Iterable[RelationRecord], sink: IO[str]) -> int:
    """Write tape-5 blocks, one per line; returns the number of blocks."""
    count = 0
    for block in format_blocks(records):
        sink.write(block + "\n")
        count += 1
    return count


def parse_block(line: str) -> list[RelationRecord]:
    if not line.endswith(SEP) or any(ch not in ALPHABET for ch in line):
        raise TapeError(f"malformed tape-5 block {line!r}")
    body = line[:-1]
    if body.endswith(EMPTY):
        fields = body[:-1].split(BLANK)
        if len(fields) != 4 or fields[3] != "":
            raise TapeError(f"malformed no-solution block {line!r}")
        n, m = int(fields[0], 2), int(fields[1], 2) + 1
        return [RelationRecord(n, m, fields[2], None)]
    fields = body.split(BLANK)
    if not fields or fields[-1] != "" or (len(fields) - 1) % 4:
        raise TapeError(f"malformed solution block {line!r}")
    records = []
    for k in range(0, len(fields) - 1, 4):
        n, m = int(fields[k], 2), int(fields[k + 1], 2) + 1
        records.append(RelationRecord(n, m, fields[k + 2], Assignment.from_string(fields[k + 3])))
    return records


def parse_tape5(text: str) -> list[RelationRecord]:
    records = []
    for line in text.splitlines():
        if line.strip():
            records.extend(parse_block(line.strip()))
    return records
