"""The abelian quotient pipeline and its rank ledger.

Every unit of group order is spent somewhere: extractions of discrepant
valuations, boundary drops at quasi-reflection divisors, and birational
steps of the relative minimal model program each carve off a computable
rank.  The ledger telescopes back to the order of the acting group.
"""

from toricmmp import make_group, mckay_pipeline


def show(label, G):
    rep = mckay_pipeline(G)
    print(f"== {label}")
    print(f"  order {rep.order}, SL: {rep.sl}")
    print(f"  stack rank {rep.rank_quotient} -> {rep.rank_resolution}")
    for e in rep.ledger:
        extra = ""
        if e.psi_value is not None:
            extra = f", log discrepancy {e.psi_value}"
        if e.components is not None:
            extra = f", components {list(e.components)}"
        print(f"  {e.kind:17s} ray {list(e.ray)}"
              f"  rank {e.rank_before} -> {e.rank_after}{extra}")
    spent = sum(e.rank_before - e.rank_after for e in rep.ledger)
    print(f"  telescope: {rep.order} = {rep.rank_resolution} + {spent}")
    print()


# a cyclic group mixing two quasi-reflections with a genuine singularity
show("(1/6)(3, 2)", make_group(2, [(6, (3, 2))]))

# the SL case: one crepant extraction, no rank ever spent
show("(1/3)(1, 1, 1)", make_group(3, [(3, (1, 1, 1))]))

# sign changes on both coordinates: a product of reflections
show("(1/2)(1, 0) x (1/2)(0, 1)",
     make_group(2, [(2, (1, 0)), (2, (0, 1))]))

# already terminal: nothing to do, nothing spent
show("(1/2)(1, 1, 1)", make_group(3, [(2, (1, 1, 1))]))
