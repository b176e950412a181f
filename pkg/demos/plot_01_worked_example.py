"""
The four-couple worked example
==============================

A small instance with ties and incomplete lists, two marriages on it, and
what the search neighbourhood looks like from an unstable one.
"""

from smti import Matching, Side, blocking_pairs, evaluate, is_perfect, table1
from smti import remove_blocking_pair, undominated_blocking_pairs
from smti.instance import serialize_instance

inst = table1()
print(serialize_instance(inst))

# Parenthesised groups are ties: m2 likes w3 and w4 equally.
# A few list entries are one-sided (w1 names m2, who never names her);
# such pairs can never marry and are ignored when matching.

###############################################################################
# A perfect stable marriage
# -------------------------
good = Matching.from_row("2 3 1 4")
print(good.to_text())
print("perfect:", is_perfect(inst, good), "evaluation:", evaluate(inst, good))

###############################################################################
# An unstable one
# ---------------
# Pairing every m_i with w_i leaves two blocking pairs, both involving w2.
start = Matching.from_row("1 2 3 4")
print("blocking pairs:", [str(bp) for bp in blocking_pairs(inst, start)])
print("evaluation:", evaluate(inst, start))

# w2 prefers m1 to m4, so (m1, w2) dominates (m4, w2) from her side and is
# the only pair left after filtering.
print("undominated:", [str(bp) for bp in undominated_blocking_pairs(inst, start, Side.MAN)])

###############################################################################
# One move of the search
# ----------------------
# Removing a blocking pair marries the two; their old partners become single.
for bp in blocking_pairs(inst, start):
    nxt = remove_blocking_pair(inst, start, bp)
    print(f"remove {bp}: {nxt.to_row():10s} f = {evaluate(inst, nxt).f}")
