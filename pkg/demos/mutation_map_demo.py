"""The mutation map attached to four points.

Four points z1..z4 in general position determine a trace-zero Mobius
map that swaps z1 with z3 and z2 with z4.  Applied to a fifth point it
performs the local move on circle centers, and the star-ratio of the
fifth point against the four is preserved exactly.
"""

import numpy as np

from miqueldyn import apply_mobius, mobius_mutation, star_ratio

rng = np.random.default_rng(2024)


def random_point():
    return complex(rng.normal(), rng.normal())


z = [random_point() for _ in range(4)]
m = mobius_mutation(*z)

print("mutation map coefficients")
print("  a = %s" % (m.a,))
print("  b = %s" % (m.b,))
print("  c = %s" % (m.c,))
print("  d = %s  (note d = -a: trace zero)" % (m.d,))
print()

print("the map swaps opposite points:")
for k, (src, dst) in enumerate([(z[0], z[2]), (z[1], z[3]),
                                (z[2], z[0]), (z[3], z[1])]):
    image = apply_mobius(m, src)
    print("  z%d -> %s   (target z%d, error %.2e)"
          % (k + 1, image, (k + 2) % 4 + 1, abs(image - dst)))
print()

y = random_point()
before = star_ratio(y, *z)
after = star_ratio(apply_mobius(m, y), *z)
print("star-ratio of a fifth point y = %s" % y)
print("  before the move: %s" % before)
print("  after the move:  %s" % after)
print("  relative difference %.2e" % (abs(after - before) / abs(before)))
print()

# applying the map twice returns y (the map is an involution)
twice = apply_mobius(m, apply_mobius(m, y))
print("double application returns y: error %.2e" % abs(twice - y))
