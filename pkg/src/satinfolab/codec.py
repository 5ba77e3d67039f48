"""Canonical binary encoding of SAT instances.

Layout of an encoded instance, as a string of ``'0'``/``'1'`` characters::

    [Elias-gamma(n)] [m - 1 in 2n bits, big-endian] [m clause fields of 2n bits]

Each clause field is n bit pairs, pair i describing x_i: ``00`` absent,
``10`` positive, ``11`` negated.  ``01`` is read as absent but never written.
"""

from __future__ import annotations

from typing import Iterable, Union

from .core import Clause, CnfInstance, Literal

BitString = str


class _Invalid:
    """Verdict for bit strings that do not encode any instance."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INVALID"

    def __bool__(self):
        return False

    def __reduce__(self):
        return (_Invalid, ())


INVALID = _Invalid()


def check_bits(bits: str) -> str:
    if any(ch not in "01" for ch in bits):
        raise ValueError(f"not a binary string: {bits!r}")
    return bits


def gamma_encode(value: int) -> str:
    if value < 1:
        raise ValueError(f"Elias gamma needs a positive integer, got {value}")
    binary = bin(value)[2:]
    return "0" * (len(binary) - 1) + binary


def gamma_decode(bits: str, pos: int = 0) -> tuple[int, int]:
    """Read one gamma code starting at ``pos``; return (value, next position)."""
    zeros = 0
    while pos + zeros < len(bits) and bits[pos + zeros] == "0":
        zeros += 1
    end = pos + 2 * zeros + 1
    if end > len(bits):
        raise ValueError("truncated gamma code")
    return int(bits[pos + zeros:end], 2), end


def gamma_length(value: int) -> int:
    return 2 * (value.bit_length() - 1) + 1


def encode_clause(clause: Clause, n: int) -> str:
    if clause.max_var > n:
        raise ValueError(f"clause {clause} uses a variable beyond n={n}")
    pairs = ["00"] * n
    for lit in clause:
        pairs[lit.var - 1] = "11" if lit.negated else "10"
    return "".join(pairs)


def decode_clause(bits: str, n: int) -> Clause:
    if len(bits) != 2 * n:
        raise ValueError(f"clause field must be {2 * n} bits, got {len(bits)}")
    check_bits(bits)
    lits = []
    for i in range(n):
        if bits[2 * i] == "1":
            lits.append(Literal(i + 1, bits[2 * i + 1] == "1"))
    return Clause(tuple(lits))


def encode_instance(instance: CnfInstance) -> str:
    n, m = instance.n, instance.m
    if not 1 <= m <= 4 ** n:
        raise ValueError(f"m={m} outside the encodable range [1, 2^(2n)] for n={n}")
    parts = [gamma_encode(n), format(m - 1, f"0{2 * n}b")]
    parts.extend(encode_clause(c, n) for c in instance.clauses)
    return "".join(parts)


def decode_instance(bits: str) -> Union[CnfInstance, _Invalid]:
    """Parse an encoded instance, or return ``INVALID``.

    The whole string must be consumed; trailing or missing bits are invalid.
    """
    if not bits or any(ch not in "01" for ch in bits):
        return INVALID
    try:
        n, pos = gamma_decode(bits)
    except ValueError:
        return INVALID
    width = 2 * n
    if pos + width > len(bits):
        return INVALID
    m = int(bits[pos:pos + width], 2) + 1
    pos += width
    if len(bits) - pos != m * width:
        return INVALID
    clauses = tuple(decode_clause(bits[pos + k * width:pos + (k + 1) * width], n) for k in range(m))
    return CnfInstance(n, clauses)


def encoded_length(n: int, m: int) -> int:
    return gamma_length(n) + 2 * n + 2 * n * m


def normalize_clause_bits(bits: str) -> str:
    """Rewrite every ``01`` pair to ``00``, the canonical absent code."""
    return "".join("00" if bits[i:i + 2] == "01" else bits[i:i + 2] for i in range(0, len(bits), 2))


# Packed form: bits MSB-first, zero-padded to whole bytes, then one trailer
# byte holding len(bits) % 8.

def pack_bits(bits: str) -> bytes:
    check_bits(bits)
    pad = (-len(bits)) % 8
    padded = bits + "0" * pad
    body = int(padded, 2).to_bytes(len(padded) // 8, "big") if padded else b""
    return body + bytes([len(bits) % 8])


def unpack_bits(data: bytes) -> str:
    if not data:
        raise ValueError("packed bit string needs a trailer byte")
    body, rem = data[:-1], data[-1]
    if rem > 7 or (rem and not body):
        raise ValueError(f"bad trailer byte {rem}")
    bits = "".join(format(byte, "08b") for byte in body)
    if rem:
        if bits[len(bits) - 8 + rem:].strip("0"):
            raise ValueError("nonzero padding bits")
        bits = bits[:len(bits) - 8 + rem]
    return bits


def write_ascii(lines: Iterable[str]) -> str:
    return "".join(check_bits(b) + "\n" for b in lines)


def read_ascii(text: str) -> list[str]:
    return [check_bits(line.strip()) for line in text.splitlines() if line.strip()]
