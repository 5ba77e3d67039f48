"""SAT instance types, direct formula evaluation and DIMACS interchange."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Assignment length does not match the instance's variable count."""


class DimacsError(ValueError):
    """Malformed DIMACS CNF text."""


class DuplicateVariableError(ValueError):
    """A clause mentions the same variable more than once."""


@dataclass(frozen=True, order=True)
class Literal:
    var: int
    negated: bool = False

    def __post_init__(self):
        if self.var < 1:
            raise ValueError(f"variable index must be >= 1, got {self.var}")

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(lit), lit < 0)

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    def __str__(self):
        return f"¬x{self.var}" if self.negated else f"x{self.var}"


@dataclass(frozen=True)
class Clause:
    """A disjunction of literals, at most one per variable.

    Literals are kept sorted by variable index so that two clauses with the
    same literal set compare equal.
    """

    literals: tuple[Literal, ...] = ()

    def __post_init__(self):
        lits = tuple(sorted(self.literals, key=lambda lit: lit.var))
        for prev, cur in zip(lits, lits[1:]):
            if prev.var == cur.var:
                raise DuplicateVariableError(f"variable x{cur.var} occurs twice in one clause")
        object.__setattr__(self, "literals", lits)

    @classmethod
    def of(cls, *lits: int) -> "Clause":
        """Build a clause from DIMACS-style signed integers: ``Clause.of(1, -2)``."""
        return cls(tuple(Literal.from_int(v) for v in lits))

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    @property
    def max_var(self) -> int:
        return self.literals[-1].var if self.literals else 0

    def __str__(self):
        if not self.literals:
            return "()"
        return "(" + " ∨ ".join(str(lit) for lit in self.literals) + ")"


@dataclass(frozen=True)
class CnfInstance:
    n: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"variable count must be >= 1, got {self.n}")
        clauses = tuple(self.clauses)
        for clause in clauses:
            if clause.max_var > self.n:
                raise ValueError(f"clause {clause} uses a variable beyond n={self.n}")
        object.__setattr__(self, "clauses", clauses)

    @classmethod
    def from_ints(cls, n: int, clauses: Iterable[Sequence[int]]) -> "CnfInstance":
        return cls(n, tuple(Clause.of(*c) for c in clauses))

    @property
    def m(self) -> int:
        return len(self.clauses)

    def __str__(self):
        if not self.clauses:
            return f"<n={self.n}, empty conjunction>"
        return " ∧ ".join(str(c) for c in self.clauses)


@dataclass(frozen=True)
class Assignment:
    """Truth values for x_1..x_n; ``bits[i - 1]`` is the value of x_i."""

    bits: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(bool(b) for b in self.bits))

    @classmethod
    def from_string(cls, s: str) -> "Assignment":
        if any(ch not in "01" for ch in s):
            raise ValueError(f"not a binary string: {s!r}")
        return cls(tuple(ch == "1" for ch in s))

    @classmethod
    def from_int(cls, value: int, n: int) -> "Assignment":
        """Counter value to assignment, x_n being the least significant bit."""
        return cls(tuple(bool((value >> (n - i)) & 1) for i in range(1, n + 1)))

    def to_int(self) -> int:
        value = 0
        for b in self.bits:
            value = (value << 1) | int(b)
        return value

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def __len__(self):
        return len(self.bits)

    def __getitem__(self, i):
        return self.bits[i]

    def __str__(self):
        return self.to_string()


def literal_value(lit: Literal, assignment: Assignment) -> bool:
    return assignment.bits[lit.var - 1] != lit.negated


def evaluate(instance: CnfInstance, assignment: Assignment) -> bool:
    """Value of the clause conjunction under ``assignment``.

    An empty clause is false; an instance with no clauses is true.
    """
    if len(assignment) != instance.n:
        raise DimensionError(f"assignment has {len(assignment)} values, instance has n={instance.n}")
    return all(any(literal_value(lit, assignment) for lit in clause) for clause in instance.clauses)


def parse_dimacs(text: str) -> CnfInstance:
    n = m = None
    tokens: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if n is not None:
                raise DimacsError(f"line {lineno}: second header line")
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            if n < 1 or m < 0:
                raise DimacsError(f"line {lineno}: header needs n >= 1 and m >= 0")
            continue
        if n is None:
            raise DimacsError(f"line {lineno}: clause before header")
        try:
            tokens.extend(int(tok) for tok in line.split())
        except ValueError:
            raise DimacsError(f"line {lineno}: non-integer token in {line!r}") from None
    if n is None:
        raise DimacsError("missing 'p cnf' header")

    clauses = []
    current: list[int] = []
    for tok in tokens:
        if tok == 0:
            clauses.append(current)
            current = []
            continue
        if abs(tok) > n:
            raise DimacsError(f"literal {tok} out of range for n={n}")
        current.append(tok)
    if current:
        raise DimacsError("last clause is not terminated by 0")
    if len(clauses) != m:
        raise DimacsError(f"header announces {m} clauses, found {len(clauses)}")
    return CnfInstance.from_ints(n, clauses)


def emit_dimacs(instance: CnfInstance) -> str:
    lines = [f"p cnf {instance.n} {instance.m}"]
    for clause in instance.clauses:
        lines.append(" ".join([str(lit.to_int()) for lit in clause] + ["0"]))
    return "\n".join(lines) + "\n"
