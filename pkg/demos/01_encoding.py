"""Canonical bit encoding of CNF instances, and what fraction of strings decode."""

from itertools import product

from satinfolab.codec import INVALID, decode_instance, encode_instance, pack_bits, unpack_bits
from satinfolab.core import CnfInstance, emit_dimacs

# (x1 or not x2) and (x2)
inst = CnfInstance.from_ints(2, [[1, -2], [2]])
bits = encode_instance(inst)
print("instance :", emit_dimacs(inst).replace("\n", " | "))
print("encoding :", bits, f"({len(bits)} bits)")
print("packed   :", pack_bits(bits).hex())
assert unpack_bits(pack_bits(bits)) == bits
assert decode_instance(bits) == inst

# Most short strings are not encodings at all.
for L in range(1, 12):
    valid = sum(decode_instance("".join(p)) is not INVALID for p in product("01", repeat=L))
    print(f"L={L:2d}  decodable {valid:5d} / {2 ** L}")
