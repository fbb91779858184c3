"""Walk through the special strata for ordinary nodes on four points.

Run with ``python3 demos/strata_and_orders.py``.
"""

from nodalis.cones import MultiplicityVector, cone_of, negative_indices
from nodalis.graphs import enumerate_adm, type_I_classes
from nodalis.orderings import OrderingContext
from nodalis.tau import tau_of

n = 4
m = MultiplicityVector.uniform(n)

print(f"adm({n}) has {len(enumerate_adm(n))} graphs")

ctx = OrderingContext(n, m)
print(f"\n{len(ctx.delta)} of them are special for m = ({m}); increasing order:")
for g in ctx.order:
    neg = [str(type_I_classes(g)[i - 1]) for i in negative_indices(g, m)]
    t = tau_of(g, m)
    note = "tau = 0" if t.zero_flag else f"tau rank {t.rank}"
    print(f"  {str(g):32s} negative classes {neg or '-'}  {note}")

print("\ncone of the three-point fan:")
fan = ctx.order[0]
print("  ", [str(e) for e in cone_of(fan, m).generators])

print("\nreduced index sets:")
for g in ctx.order:
    s = ctx.index_sets(g)
    if s.reduced:
        print(f"  {g}: {[str(h) for h in s.reduced]} (persistent: {[str(h) for h in s.persistent]})")
