"""Clifford configurations of circles indexed by subsets of {1..n}.

A configuration assigns a point V_I to every even-size subset I and a
circle c_I (with center M_I) to every odd-size subset, such that V_I
lies on c_J exactly when the symmetric difference of I and J is a
single index.  For n = 4 the four triple circles meet in one point
(V_1234); the builder verifies that concurrence numerically.

Subsets are represented as frozensets of ints.  Lines are admitted as
circle members; their centers are the point at infinity.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Sequence, Tuple

from .errors import (
    ConcurrenceFailure,
    ConstructionFailure,
    IndeterminateRatio,
    TangentAtBase,
)
from .geometry import (
    Circle,
    ExtendedComplex,
    INFINITY,
    apply_mobius,
    chordal,
    circle_center_of,
    circumcircle,
    close,
    cross_ratio,
    intersect_circles,
    is_infinite,
    mobius_mutation,
    multi_ratio,
    star_ratio,
)

Index = FrozenSet[int]

CONCURRENCE_REL = 1e-8


def _idx(*members: int) -> Index:
    return frozenset(members)


@dataclass
class CliffordConfiguration:
    """Points on even subsets, circles and their centers on odd ones."""

    n: int
    points: Dict[Index, ExtendedComplex]
    circles: Dict[Index, Circle]
    centers: Dict[Index, ExtendedComplex]

    def point(self, *members: int) -> ExtendedComplex:
        return self.points[_idx(*members)]

    def circle(self, *members: int) -> Circle:
        return self.circles[_idx(*members)]

    def center(self, *members: int) -> ExtendedComplex:
        return self.centers[_idx(*members)]


def _finite_spread(values: Sequence[ExtendedComplex]) -> float:
    pts = [complex(z) for z in values if not is_infinite(z)]
    best = 0.0
    for a, b in itertools.combinations(pts, 2):
        best = max(best, abs(a - b))
    return max(best, 1.0)


def _second_point(ca: Circle, cb: Circle, shared, allow_shared: bool,
                  scale: float):
    """Second common point of two circles known to meet at ``shared``.

    allow_shared admits a tangency (the second point is taken to be the
    shared point itself); otherwise tangency raises TangentAtBase.  Two
    distinct lines through a finite shared point also meet at infinity.
    """
    if ca.is_line() and cb.is_line() and not is_infinite(shared):
        pts = intersect_circles(ca, cb)
        if len(pts) == 1 and not is_infinite(pts[0]):
            if not allow_shared:
                raise TangentAtBase(
                    "line members meet only at the shared point "
                    "in the finite plane")
            return INFINITY
    pts = intersect_circles(ca, cb)
    if not pts:
        raise ConstructionFailure("member circles do not intersect")
    if len(pts) == 1:
        if not close(pts[0], shared, abs_tol=CONCURRENCE_REL * scale):
            raise ConstructionFailure(
                "tangency point does not match the shared point")
        if not allow_shared:
            raise TangentAtBase("member circles are tangent at the shared point")
        return shared
    gaps = []
    for p in pts:
        if is_infinite(p) or is_infinite(shared):
            gaps.append(0.0 if is_infinite(p) and is_infinite(shared) else math.inf)
        else:
            gaps.append(abs(complex(p) - complex(shared)))
    near = min(range(len(pts)), key=lambda i: gaps[i])
    if gaps[near] > CONCURRENCE_REL * scale:
        raise ConstructionFailure(
            "member circles do not pass through the shared point")
    return pts[1 - near]


def _concurrence_point(candidates: List[ExtendedComplex], scale: float,
                       tol: float):
    """Common value of near-coincident candidates, via the centroid."""
    infinite = [c for c in candidates if is_infinite(c)]
    if infinite:
        if len(infinite) != len(candidates):
            raise ConcurrenceFailure(
                "candidate intersection points mix finite and infinite values")
        return INFINITY, 0.0
    finite = [complex(c) for c in candidates]
    spread = max(abs(a - b) for a, b in itertools.combinations(finite, 2))
    if spread > tol * scale:
        raise ConcurrenceFailure(
            "circles fail to concur: candidate spread %.3e exceeds %.3e"
            % (spread, tol * scale))
    return sum(finite) / len(finite), spread


def build_c4(base, circles: Sequence[Circle],
             tol: float = CONCURRENCE_REL) -> CliffordConfiguration:
    """Clifford configuration from four circles through a common point.

    ``circles`` are taken in cyclic order c_1..c_4.  Consecutive members
    must meet the next one in a genuine second point (tangency at the
    base raises TangentAtBase); opposite members may be tangent at the
    base, in which case their pair point is the base itself.  The four
    triple circles must concur within ``tol`` times the configuration
    scale, else ConcurrenceFailure.
    """
    if len(circles) != 4:
        raise ConstructionFailure("a C4 configuration needs four circles")
    for c in circles:
        if not c.contains(base):
            raise ConstructionFailure("every member circle must pass through the base point")
    scale = _finite_spread([base] + [circle_center_of(c) for c in circles])

    points: Dict[Index, ExtendedComplex] = {_idx(): base}
    circle_map: Dict[Index, Circle] = {}
    for k in range(4):
        circle_map[_idx(k + 1)] = circles[k]

    # pair points: consecutive pairs are proper, opposite pairs may sit at the base
    for k in range(4):
        a, b = k + 1, (k + 1) % 4 + 1
        points[_idx(a, b)] = _second_point(
            circles[a - 1], circles[b - 1], base, False, scale)
    for a, b in ((1, 3), (2, 4)):
        points[_idx(a, b)] = _second_point(
            circles[a - 1], circles[b - 1], base, True, scale)

    # triple circles, each through the three pair points of its members
    for trip in (frozenset({1, 2, 3}), frozenset({2, 3, 4}),
                 frozenset({1, 3, 4}), frozenset({1, 2, 4})):
        pairs = [points[frozenset(p)] for p in itertools.combinations(sorted(trip), 2)]
        circle_map[trip] = circumcircle(*pairs)

    # the four triple circles concur at the last point
    quad_pairs = [
        (frozenset({1, 2, 3}), frozenset({2, 3, 4}), _idx(2, 3)),
        (frozenset({2, 3, 4}), frozenset({1, 3, 4}), _idx(3, 4)),
        (frozenset({1, 3, 4}), frozenset({1, 2, 4}), _idx(1, 4)),
        (frozenset({1, 2, 4}), frozenset({1, 2, 3}), _idx(1, 2)),
    ]
    candidates = []
    for ia, ib, shared in quad_pairs:
        candidates.append(_second_point(
            circle_map[ia], circle_map[ib], points[shared], True, scale))
    points[_idx(1, 2, 3, 4)], _ = _concurrence_point(candidates, scale, tol)

    centers = {key: circle_center_of(c) for key, c in circle_map.items()}
    return CliffordConfiguration(4, points, circle_map, centers)


def build_c3(base, circles: Sequence[Circle],
             tol: float = CONCURRENCE_REL) -> CliffordConfiguration:
    """Clifford configuration from three circles through a common point.

    All three pair points must be genuine second intersections; the
    fourth circle through them always exists (Miquel's theorem needs no
    concurrence check at this size).
    """
    if len(circles) != 3:
        raise ConstructionFailure("a C3 configuration needs three circles")
    for c in circles:
        if not c.contains(base):
            raise ConstructionFailure("every member circle must pass through the base point")
    scale = _finite_spread([base] + [circle_center_of(c) for c in circles])

    points: Dict[Index, ExtendedComplex] = {_idx(): base}
    circle_map: Dict[Index, Circle] = {}
    for k in range(3):
        circle_map[_idx(k + 1)] = circles[k]
    for a, b in ((1, 2), (1, 3), (2, 3)):
        points[_idx(a, b)] = _second_point(
            circles[a - 1], circles[b - 1], base, False, scale)

    circle_map[_idx(1, 2, 3)] = circumcircle(
        points[_idx(1, 2)], points[_idx(1, 3)], points[_idx(2, 3)])
    centers = {key: circle_center_of(c) for key, c in circle_map.items()}
    return CliffordConfiguration(3, points, circle_map, centers)


def incidence_residual(cfg: CliffordConfiguration) -> float:
    """Largest distance from a point to a circle it should lie on.

    V_I lies on c_J whenever the symmetric difference is one index.
    Distances are absolute; compare against a tolerance scaled by the
    configuration size.
    """
    worst = 0.0
    for key_p, z in cfg.points.items():
        for key_c, circ in cfg.circles.items():
            if len(key_p ^ key_c) != 1:
                continue
            worst = max(worst, circ.distance_to(z))
    return worst


def _chordal_to_circle(z, circ: Circle) -> float:
    """Chordal distance from a point to a circle as a subset of the sphere.

    Uses the euclidean projection as the witness point, an upper bound
    that is tight enough for residual reporting and stays finite for
    images near infinity (where absolute distances blow up).
    """
    if is_infinite(z):
        if circ.is_line():
            return 0.0
        reach = abs(circ.center) + circ.radius
        return 2.0 / math.sqrt(1.0 + reach * reach)
    z = complex(z)
    if circ.is_line():
        u = (circ.q - circ.p) / abs(circ.q - circ.p)
        foot = circ.p + ((z - circ.p) * u.conjugate()).real * u
        return chordal(z, foot)
    offset = z - circ.center
    if abs(offset) == 0:
        witness = circ.center + circ.radius
    else:
        witness = circ.center + circ.radius * offset / abs(offset)
    return chordal(z, witness)


def _guarded(thunk):
    try:
        return thunk()
    except IndeterminateRatio:
        return None


def _pair_residual(a, b) -> float:
    # identities between two genuinely indeterminate ratios hold vacuously;
    # a one-sided degeneracy is a real failure and maxes out the metric
    if a is None and b is None:
        return 0.0
    if a is None or b is None:
        return 2.0
    return chordal(a, b)


@dataclass
class ShiftReport:
    """Residuals of the mutation-map covariance identities."""

    point_shift: float
    circle_shift: float
    vertex_star: float
    center_star: float

    def max_residual(self) -> float:
        return max(self.point_shift, self.circle_shift,
                   self.vertex_star, self.center_star)


def _shift_map(cfg: CliffordConfiguration):
    return mobius_mutation(cfg.point(1, 2), cfg.point(2, 3),
                           cfg.point(3, 4), cfg.point(1, 4))


def verify_shift_identities(cfg: CliffordConfiguration) -> ShiftReport:
    """Check that the mutation map carries the configuration to its shift.

    The map mob(V_12, V_23, V_34, V_14) sends every V_I to
    V_{I xor 1234}, every circle c_I to c_{I xor 1234} as point sets,
    and preserves the star-ratio at the base vertex and at every circle
    center against its shifted partner.  Only defined for n = 4.
    """
    if cfg.n != 4:
        raise ConstructionFailure("shift identities need a four-member configuration")
    mat = _shift_map(cfg)
    full = _idx(1, 2, 3, 4)

    point_res = 0.0
    for key, z in cfg.points.items():
        image = apply_mobius(mat, z)
        point_res = max(point_res, chordal(image, cfg.points[key ^ full]))

    circle_res = 0.0
    for key, circ in cfg.circles.items():
        target = cfg.circles[key ^ full]
        for key_p, z in cfg.points.items():
            if len(key_p ^ key) != 1:
                continue
            circle_res = max(
                circle_res, _chordal_to_circle(apply_mobius(mat, z), target))

    ring = (cfg.point(1, 2), cfg.point(2, 3), cfg.point(3, 4), cfg.point(1, 4))
    vertex_res = _pair_residual(
        _guarded(lambda: star_ratio(cfg.point(), *ring)),
        _guarded(lambda: star_ratio(cfg.point(1, 2, 3, 4), *ring)))

    center_res = 0.0
    for key in cfg.centers:
        args = tuple(cfg.centers[key ^ _idx(a, b)]
                     for a, b in ((1, 2), (2, 3), (3, 4), (1, 4)))
        here, there = cfg.centers[key], cfg.centers[key ^ full]
        center_res = max(center_res, _pair_residual(
            _guarded(lambda: star_ratio(here, *args)),
            _guarded(lambda: star_ratio(there, *args))))

    return ShiftReport(point_res, circle_res, vertex_res, center_res)


@dataclass
class CrossRatioReport:
    """Residuals of the cross-ratio system on the hypercube."""

    opposite_faces: float
    tetrahedra: float

    def max_residual(self) -> float:
        return max(self.opposite_faces, self.tetrahedra)


def _site_values(cfg: CliffordConfiguration) -> Dict[Index, ExtendedComplex]:
    # points on even subsets, circle centers on odd ones
    values: Dict[Index, ExtendedComplex] = dict(cfg.points)
    values.update(cfg.centers)
    return values


def verify_cross_ratio_system(cfg: CliffordConfiguration) -> CrossRatioReport:
    """Cross-ratio coherence of the combined point/center field.

    Opposite 2-faces of every 3-cube carry equal cross-ratios, and for
    n = 4 the cross-ratio of each even tetrahedron V_I, V_{I^ab},
    V_{I^bc}, V_{I^ac} is unchanged by shifting all four indices by any
    single index k.
    """
    sites = _site_values(cfg)
    axes = list(range(1, cfg.n + 1))

    def cro_at(base: Index, a: int, b: int):
        return _guarded(lambda: cross_ratio(
            sites[base], sites[base ^ _idx(a)],
            sites[base ^ _idx(a, b)], sites[base ^ _idx(b)]))

    face_res = 0.0
    for trip in itertools.combinations(axes, 3):
        rest = [k for k in axes if k not in trip]
        bases: List[Index] = [_idx()]
        if rest:
            bases.append(_idx(*rest))
        for base in bases:
            for c in trip:
                a, b = [k for k in trip if k != c]
                face_res = max(face_res, _pair_residual(
                    cro_at(base, a, b), cro_at(base ^ _idx(c), a, b)))

    tetra_res = 0.0
    if cfg.n == 4:
        for trip in itertools.combinations(axes, 3):
            a, b, c = trip
            quad = (_idx(), _idx(a, b), _idx(b, c), _idx(a, c))
            reference = _guarded(lambda: cross_ratio(*(sites[i] for i in quad)))
            for k in axes:
                shifted = _guarded(
                    lambda: cross_ratio(*(sites[i ^ _idx(k)] for i in quad)))
                tetra_res = max(tetra_res, _pair_residual(reference, shifted))
    return CrossRatioReport(face_res, tetra_res)


def menelaus_multiratios(cfg: CliffordConfiguration) -> Tuple[complex, complex]:
    """The two six-point multi-ratios behind the concurrence proof.

    After a Moebius change of coordinates sending V_13 to infinity, the
    points V_34, V_14, V_1234, V_12, V_23 and the base V satisfy two
    Menelaus-type relations; both multi-ratios equal -1 exactly when the
    configuration closes.
    """
    if cfg.n != 4:
        raise ConstructionFailure("the Menelaus relations need a four-member configuration")
    pivot = cfg.point(1, 3)
    if is_infinite(pivot):
        send = lambda z: INFINITY if is_infinite(z) else complex(z)
    else:
        p = complex(pivot)

        def send(z):
            if is_infinite(z):
                return 0j
            if close(z, p):
                return INFINITY
            return 1.0 / (complex(z) - p)

    v34, v14, v0 = send(cfg.point(3, 4)), send(cfg.point(1, 4)), send(cfg.point())
    v12, v23, v1234 = send(cfg.point(1, 2)), send(cfg.point(2, 3)), send(cfg.point(1, 2, 3, 4))
    m1 = multi_ratio(v34, v14, v1234, v12, v23, v0)
    m2 = multi_ratio(v14, v34, v1234, v23, v12, v0)
    return m1, m2
