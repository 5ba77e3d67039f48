"""The verifier machine on one formula, then the enumerator's tape-5 output."""

import io
import itertools

from satinfolab.machines import dump_tape5, enumerate_relation, verify

formula = "1011" + "0010"  # (x1 or not x2)(x2) as clause fields at n=2
for x in ("00", "01", "10", "11"):
    trace = []
    res = verify(formula, x, trace=trace)
    print(f"x={x}  accept={res.accept!s:5}  steps={res.steps}  transitions={len(trace)}")

buf = io.StringIO()
blocks = dump_tape5(enumerate_relation(max_n=1, max_m=2), buf)
print(f"\n{blocks} tape-5 blocks for n=1, m<=2; first few:")
for line in itertools.islice(buf.getvalue().splitlines(), 6):
    print("  ", line)
