"""Two interval-decomposable modules that lines cannot tell apart.

F is a sum of two rectangles, G a notched square plus a smaller square.  Their
restrictions to every sampled positive line coincide, yet the pushforwards
along u = (1/2, 1/2) differ.
"""

from fractions import Fraction as Q

from projbar.matching import bottleneck
from projbar.oracles import fiber_cohomology
from projbar.persistence import Bar, GradedBarcode
from projbar.sheaf import restrict_to_line, separating_pair

F, G = separating_pair(3)
u = (Q(1, 2), Q(1, 2))

differ = 0
for k in range(1, 11):
    for j in range(-5, 5):
        for h in ((1, Q(k, 10)), (Q(k, 10), 1)):
            c = (Q(j, 2), -Q(j, 2))
            differ += not restrict_to_line(F, h, c).same_intervals(restrict_to_line(G, h, c))
print(f"lines with different fibered barcodes: {differ} of 200")

for t in (Q(1, 4), Q(3, 4), Q(5, 4), Q(7, 4), Q(9, 4), Q(11, 4)):
    print(f"t={str(t):5s} stalks F {fiber_cohomology(F, u, t)[:2]}  G {fiber_cohomology(G, u, t)[:2]}")

# barcodes of the two pushforwards as written down by hand
BF = GradedBarcode({0: [Bar(Q(1, 2), 3)] * 2})
BG = GradedBarcode({0: [Bar(Q(1, 2), 3), Bar(Q(1, 2), 1), Bar(1, 3)]})
d, w = bottleneck(BF, BG)
print(f"bottleneck between the stated barcodes: {d}")
print(w.to_json())
