"""Lower-bound certificates and how far they reach.

Three kinds of evidence about circuit size: exact unconditional counts
(determinant bound, distinct heavy rows, the Sierpinski closed form),
density quantities whose constants are open (k-freeness), and exhaustive
search where it is feasible.  The Boolean Sylvester-Hadamard family shows
the determinant bound at work; the Sierpinski family shows it failing.
"""

import math

import lincirc as lc

# The determinant bound: log2|det| lower-bounds cancellation-free size.
# For the Sylvester-Hadamard family it grows superlinearly...
print("n     |det H_n|            log2|det|   /(n log2 n)")
for n in (8, 16, 32, 64):
    h = lc.gen_hadamard(n)
    d = abs(lc.det_int(h))
    m = lc.morgenstern(h)
    print(f"{n:<5} {d:<20} {m:<11.0f} {m / (n * math.log2(n)):.4f}")

# ...while small XOR circuits exist anyway (the factorization has rank
# log2(n)+1), so cancellation beats cancellation-free by Ω(log n) here.
for n in (64, 256, 1024):
    res = lc.hadamard_circuit(n)
    print(f"H_{n}: XOR circuit with {res.cost} gates "
          f"({res.cost / n:.2f}n), cancellation-free: {res.cancellation_free}")

# The Sierpinski matrix defeats both generic certificates: det = 1 and
# k-freeness fails at k=1.  Its closed form is what remains.
print()
rep = lc.bound_report(lc.gen_sierpinski(8), kfree_ks=(1,), kst_a=2)
print("bound report for S_8:")
for key, value in rep.to_dict().items():
    print(f"  {key}: {value}")

# The density cap behind the freeness bookkeeping: a 1-free matrix can
# hold at most n^1.5 + n ones.
print("\nKST cap at a=2:", [round(lc.kst_bound(n, 2), 1) for n in (4, 8, 16)])
print("J_4 violates it (not 1-free):", lc.kst_cap(lc.ones(4, 4), 2))

# Exhaustive ground truth at tiny sizes: over all 512 3x3 matrices,
# cancellation never helps at all.
census = lc.census(3)
print("\n3x3 census:", census.matrices, "matrices;",
      "max CF/XOR ratio", census.max_ratio_cf_over_xor,
      "; XOR histogram", census.histograms["XOR"])
