"""Tour of the three circuit models on two small matrices.

A linear Boolean function y = Ax can be computed by a DAG of fan-in-2
gates.  With XOR gates, intermediate results may cancel (a ^ a = 0);
a circuit that never relies on that is cancellation-free, and the same
wiring read with OR gates computes A over the Boolean semiring.  This
script shows a 4x4 matrix where cancellation saves a gate, and a 6x6
matrix where OR circuits beat every cancellation-free circuit.
"""

import lincirc as lc

A = lc.example_a()
print("matrix A:")
print(A.to_text())

# A cancellation-free circuit: five gates, each combining disjoint inputs.
cf = lc.slp_loads("""\
inputs 4 connective XOR
t1 = x1 + x2
t2 = x3 + t1
t3 = x4 + t2
t4 = x2 + x3
t5 = x4 + t4
outputs: y1=t1 y2=t2 y3=t3 y4=t5
""")
print("cancellation-free circuit:", lc.size_gates(cf), "gates,",
      "verifies:", lc.verify(cf, A), "CF:", lc.is_cancellation_free(cf))

# Four gates suffice if the last gate cancels x1 back out of the chain.
clever = lc.slp_loads("""\
inputs 4 connective XOR
t1 = x1 + x2
t2 = x3 + t1
t3 = x4 + t2
t4 = x1 + t3
outputs: y1=t1 y2=t2 y3=t3 y4=t4
""")
print("cancelling circuit:  ", lc.size_gates(clever), "gates,",
      "verifies:", lc.verify(clever, A), "CF:", lc.is_cancellation_free(clever))
print("value vector of t4:", bin(lc.value_vectors(clever)[7]), "(x1 cancelled out)")

# Exhaustive search certifies both counts are optimal for their model.
print("\nexact optima for A:")
for model in lc.MODELS:
    out = lc.optimal_size(A, model)
    print(f"  {model:>3}: {out.optimal_size} gates "
          f"({out.nodes_expanded} search nodes)")

# The 6x6 matrix B separates OR circuits from cancellation-free ones:
# absorption (row containment) helps OR, cancellation does not apply.
B = lc.example_b()
print("\nmatrix B optima: OR =", lc.optimal_size(B, "OR").optimal_size,
      " CF =", lc.optimal_size(B, "CF").optimal_size)

# Heuristic synthesis reaches the CF optimum on A.
for method in (lc.naive_rowwise, lc.paar_greedy, lc.boyar_peralta):
    res = method(A)
    print(f"{res.method:>6}: {res.cost} gates, cancellation-free: {res.cancellation_free}")
