"""Building a four-circle configuration and checking its incidences.

Four circles through one base point determine six pair points, four
derived circles, and a final point where the derived circles meet.
The fourfold symmetric arrangement (unit circles centred at the fourth
roots of unity) is so degenerate that the whole structure collapses
onto the original circles and the shift map becomes plain negation.
"""

import numpy as np

from miqueldyn import (
    Circle,
    build_c4,
    incidence_residual,
    menelaus_multiratios,
    verify_cross_ratio_system,
    verify_shift_identities,
)


def through_origin(center):
    return Circle.make_circle(center, abs(center))


def describe(tag, circles):
    cfg = build_c4(0j, circles)
    print("== %s ==" % tag)
    print("final point V1234 = %s" % (cfg.point(1, 2, 3, 4),))
    print("incidence residual:    %.2e" % incidence_residual(cfg))
    shift = verify_shift_identities(cfg)
    print("shift map residuals:   points %.2e, circles %.2e"
          % (shift.point_shift, shift.circle_shift))
    print("star-ratio residuals:  vertex %.2e, center %.2e"
          % (shift.vertex_star, shift.center_star))
    cross = verify_cross_ratio_system(cfg)
    print("cross-ratio system:    %.2e" % cross.max_residual())
    m1, m2 = menelaus_multiratios(cfg)
    print("six-point multi-ratios: %s, %s  (both should be -1)" % (m1, m2))
    print()


describe("fourfold symmetric", [through_origin(c) for c in (1, 1j, -1, -1j)])

rng = np.random.default_rng(5)
angles = np.sort(rng.uniform(0, 2 * np.pi, 4))
radii = rng.uniform(0.7, 1.5, 4)
centers = [complex(r * np.exp(1j * a)) for r, a in zip(radii, angles)]
describe("random pencil", [through_origin(c) for c in centers])
