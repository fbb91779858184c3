"""Universal node polynomials for one to four nodes, evaluated on plane curves.

Run with ``python3 demos/node_polynomials.py``; four nodes take a few seconds.
"""

import sys

from nodalis.oracles import jet_discriminant_delta1
from nodalis.tau import node_count

top = int(sys.argv[1]) if len(sys.argv) > 1 else 4


def plane(d):
    return {"L2": d * d, "LK": -3 * d, "K2": 9, "c2": 3}


print("one node, from the jet bundle:", jet_discriminant_delta1())
for delta in range(1, top + 1):
    res = node_count(delta)
    print(f"\ndelta = {delta}")
    print(f"  {delta}! * count = {res.pre_division}")
    values = [str(res.poly.evaluate(plane(d))) for d in range(1, 7)]
    print("  plane curves of degree 1..6:", ", ".join(values))
    for p in res.provenance:
        print(f"    {p['label']}: {p['status']}")
    if delta >= 4:
        print("  (four or more nodes: not validated, see README)")
