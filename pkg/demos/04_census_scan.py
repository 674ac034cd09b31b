"""Census of type classes that use fewer symbols than the full alphabet.

The shaped subset trades longer sequences for cheaper-to-describe ones:
a larger share of its members (always 100% at the worked-example scale)
draw on a strict sub-alphabet, which is what shrinks the coding scheme.
"""
from setshaping import Alphabet, ShapingParams, shaped_subset_stats, type_class_census

print("sequences with < 3 distinct symbols, ternary alphabet, K=1")
print()
print(f"{'N':>3} {'plain':>12} {'shaped':>12} {'plain %':>9} {'shaped %':>9}")
print("-" * 50)
for n in range(1, 7):
    c = type_class_census(n, Alphabet(3), 1)
    print(
        f"{n:>3} {c.plain_sequences_below_full:>6}/{c.plain_sequences_total:<5} "
        f"{c.shaped_sequences_below_full:>6}/{c.shaped_sequences_total:<5} "
        f"{100 * c.plain_sequence_fraction:>8.1f}% "
        f"{100 * c.shaped_sequence_fraction:>8.1f}%"
    )

print()
params = ShapingParams(length=3, alphabet=Alphabet(3), extra_length=1)
stats = shaped_subset_stats(params)
print(f"shaped subset for N=3: {len(stats.class_census)} type classes")
for comp, included in stats.class_census:
    rendered = tuple(comp.counts)
    print(f"  counts {rendered}: {included} sequence(s)")
print(f"max entropy inside the subset: {stats.max_entropy_in_subset:.4f} bits/symbol")
