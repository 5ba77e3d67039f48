"""Store a bit string in a batch of 3-SAT instances and read it back."""

from satinfolab.trbs import (PatternExhausted, batch_size_report, census, decode_trbs,
                             encode_trbs, random_bits)

n = 3
bits = "11111111"
batch = encode_trbs(bits, n, mode="literal")
print("literal mode, all ones:", decode_trbs(batch).bits == bits)

# A 0 bit needs an instance with no model.  Which flip patterns give one?
report = census(n)
print("census unsat counts per pattern:", report.unsat_counts())
print("unsat fraction:", round(report.unsat_fraction, 4))

bits = random_bits(1 << n, seed=7)
print("bits to store:", bits)
try:
    batch = encode_trbs(bits, n, mode="verified")
    print("recovered:", decode_trbs(batch).bits)
except PatternExhausted as exc:
    print(f"no pattern makes instance j={exc.j} unsat; verdicts {exc.row['verdicts']}")

print(batch_size_report(n))
