"""Build solution tables of growing depth and watch their size against L 2^L."""

from satinfolab.table import build_table, lookup, size_ratio_bounds, table_stats

stats = []
for L in (3, 5, 7, 9, 11, 13):
    t = build_table(L)
    s = table_stats(t)
    stats.append(s)
    print(f"L={L:2d} nodes={t.node_count:6d} yes={s.yes_leaves:5d} no={s.no_leaves:5d} "
          f"invalid={s.invalid_leaves:5d} bits={s.total_bits:8d} bits/(L 2^L)={s.total_bits / (L << L):.3f}")

print("c1, c2 =", size_ratio_bounds(stats))

t = build_table(7)
key = "1001011"
res = lookup(t, key)
print(f"lookup {key}: {res.answer}  steps={res.steps} bit_ops={res.bit_ops}")
