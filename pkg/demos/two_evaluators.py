"""Integrate random classes on M_2 and M_3 with both evaluators and compare.

Run with ``python3 demos/two_evaluators.py``.
"""

import random

from nodalis.chow import pushforward_to_point
from nodalis.oracles import alt_pushforward, random_top_monomial

rng = random.Random(0)
for n in (2, 3):
    for _ in range(5):
        e = random_top_monomial(rng, n)
        a, b = pushforward_to_point(e, n), alt_pushforward(e, n)
        print(f"M_{n}: {str(e):28s} engine {str(a):14s} rewriting {str(b):14s} {'ok' if a == b else 'MISMATCH'}")
