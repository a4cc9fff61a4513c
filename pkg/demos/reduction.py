"""Encode small CNF formulas and check the encodings against a SAT solver.

Run: python3 demos/reduction.py
"""
from curvematch.gadgets import gen_unique_subset_instance, transfer_chain, verify_equivalence
from curvematch.imprecise import discrete_cipsm_nonunique_decide
from curvematch.reductions import CnfFormula, enumerate_3b2, example_formula

T, F = True, False
micro = {
    "x": CnfFormula(1, [[(0, T)]]),
    "x & ~x": CnfFormula(1, [[(0, T)], [(0, F)]]),
    "(x|y) & ~x & ~y": CnfFormula(2, [[(0, T), (1, T)], [(0, F)], [(1, F)]]),
}
for name, f in micro.items():
    for variant in ("unique-subset", "discrete-cipsm"):
        rep = verify_equivalence(f, variant)
        print(f"{name:18s} {variant:15s} {rep.summary()}")

agree = sum(verify_equivalence(f, "discrete-cipsm", strict=True).agreement for f in enumerate_3b2(3))
print(f"exactly-twice 3-variable formulas: {agree}/12 agree")

inst = gen_unique_subset_instance(example_formula())
print("example formula instance:", inst.counts)

for with_a in (True, False):
    g = transfer_chain(4, with_a)
    print(f"transfer chain, a {'present' if with_a else 'absent '}:",
          discrete_cipsm_nonunique_decide(g.curve, g.regions, g.eps)[0])
