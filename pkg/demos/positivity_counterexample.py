"""A mixed-sign linear form separates modules with the same support.

X is a segment, Y_s adds a filled triangle with apex (0, s).  Both upper sets
X + [0, inf)^2 and Y_s + [0, inf)^2 coincide, but pushing forward along
q(x, y) = (y - x) / 2 gives superlevel barcodes at distance max(s/2 - 1, 0),
which is |s/2 - 1| once s >= 2.
"""

from projbar.counterexamples import mixed_form_distance, segment_and_triangle, superlevel_h0, supports_agree

for s in (0.5, 1, 2, 3, 4, 6):
    fX, fY = segment_and_triangle(s)
    print(f"s={s:<4} supports agree: {supports_agree(fX, fY, n=100)}  "
          f"distance {mixed_form_distance(fX, fY):.3f}  expected {max(s / 2 - 1, 0):.3f}  "
          f"bars Y {superlevel_h0(fY).intervals(0)}")
