"""Clifford configuration builders and their invariants."""

import math

import numpy as np
import pytest

from miqueldyn.clifford import (
    CliffordConfiguration,
    _concurrence_point,
    build_c3,
    build_c4,
    incidence_residual,
    menelaus_multiratios,
    verify_cross_ratio_system,
    verify_shift_identities,
)
from miqueldyn.errors import (
    ConcurrenceFailure,
    ConstructionFailure,
    TangentAtBase,
)
from miqueldyn.geometry import (
    Circle,
    INFINITY,
    MobiusMap,
    apply_mobius,
    chordal,
    is_infinite,
    mobius_maps_equal,
    mobius_mutation,
    star_ratio,
)


def circle_through_origin(center: complex) -> Circle:
    return Circle.make_circle(center, abs(center))


def random_c4(rng) -> CliffordConfiguration:
    # centers in an annulus with separated angles so no pair is near-tangent
    while True:
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, 4))
        gaps = np.diff(np.concatenate([angles, [angles[0] + 2.0 * math.pi]]))
        if gaps.min() > 0.35:
            break
    radii = rng.uniform(0.6, 1.6, 4)
    centers = [r * complex(math.cos(t), math.sin(t)) for r, t in zip(radii, angles)]
    return build_c4(0j, [circle_through_origin(c) for c in centers])


def fourfold() -> CliffordConfiguration:
    return build_c4(0j, [circle_through_origin(c) for c in (1, 1j, -1, -1j)])


def test_fourfold_frozen_values():
    cfg = fourfold()
    assert chordal(cfg.point(1, 2), 1 + 1j) < 1e-12
    assert chordal(cfg.point(2, 3), -1 + 1j) < 1e-12
    assert chordal(cfg.point(3, 4), -1 - 1j) < 1e-12
    assert chordal(cfg.point(1, 4), 1 - 1j) < 1e-12
    # opposite members are tangent at the base, so their pair point is the base
    assert cfg.point(1, 3) == 0j
    assert cfg.point(2, 4) == 0j
    assert chordal(cfg.point(1, 2, 3, 4), 0j) < 1e-12
    # each triple circle collapses onto one of the members
    assert chordal(cfg.center(1, 2, 3), 1j) < 1e-12
    assert chordal(cfg.center(2, 3, 4), -1) < 1e-12
    assert chordal(cfg.center(1, 3, 4), -1j) < 1e-12
    assert chordal(cfg.center(1, 2, 4), 1) < 1e-12


def test_fourfold_star_ratio_values():
    cfg = fourfold()
    ring = (cfg.point(1, 2), cfg.point(2, 3), cfg.point(3, 4), cfg.point(1, 4))
    assert abs(star_ratio(cfg.point(), *ring) - 1.0) < 1e-12
    for key in cfg.centers:
        args = tuple(cfg.centers[key ^ frozenset(p)]
                     for p in ((1, 2), (2, 3), (3, 4), (1, 4)))
        assert abs(star_ratio(cfg.centers[key], *args) + 1.0) < 1e-12


def test_fourfold_shift_map_is_negation():
    cfg = fourfold()
    mat = mobius_mutation(cfg.point(1, 2), cfg.point(2, 3),
                          cfg.point(3, 4), cfg.point(1, 4))
    assert mobius_maps_equal(mat, MobiusMap(-1, 0, 0, 1))
    report = verify_shift_identities(cfg)
    assert report.max_residual() < 1e-12


def test_consecutive_tangency_rejected():
    # internally tangent at the base point
    members = [circle_through_origin(c) for c in (1, 2, -1, -1j)]
    with pytest.raises(TangentAtBase):
        build_c4(0j, members)


def test_four_lines_rejected():
    lines = [Circle.make_line(0j, complex(math.cos(t), math.sin(t)))
             for t in (0.0, 0.7, 1.9, 2.6)]
    with pytest.raises(TangentAtBase):
        build_c4(0j, lines)


def test_member_missing_base_rejected():
    members = [circle_through_origin(c) for c in (1, 1j, -1)]
    members.append(Circle.make_circle(5 + 5j, 1.0))
    with pytest.raises(ConstructionFailure):
        build_c4(0j, members)


def test_concurrence_point_rejects_spread_and_mixed():
    with pytest.raises(ConcurrenceFailure):
        _concurrence_point([0j, 0.5 + 0j, 0j, 0j], 1.0, 1e-8)
    with pytest.raises(ConcurrenceFailure):
        _concurrence_point([0j, INFINITY, 0j, 0j], 1.0, 1e-8)


def test_random_c4_incidence_and_shift():
    rng = np.random.default_rng(7)
    for _ in range(60):
        cfg = random_c4(rng)
        scale = max(c.radius for c in cfg.circles.values() if not c.is_line())
        assert incidence_residual(cfg) < 1e-9 * max(1.0, scale)
        assert verify_shift_identities(cfg).max_residual() < 1e-8


def test_random_c4_cross_ratio_system():
    rng = np.random.default_rng(19)
    for _ in range(40):
        report = verify_cross_ratio_system(random_c4(rng))
        assert report.opposite_faces < 1e-9
        assert report.tetrahedra < 1e-9


def test_random_c4_menelaus():
    # the multi-ratio amplifies construction error when two of its six
    # points nearly coincide, so demand general position before asserting
    rng = np.random.default_rng(23)
    tested = 0
    while tested < 40:
        cfg = random_c4(rng)
        six = [cfg.point(*p) for p in
               ((3, 4), (1, 4), (1, 2, 3, 4), (1, 2), (2, 3), ())]
        gap = min(chordal(a, b) for i, a in enumerate(six) for b in six[i + 1:])
        if gap < 5e-3:
            continue
        m1, m2 = menelaus_multiratios(cfg)
        assert abs(m1 + 1.0) < 1e-8
        assert abs(m2 + 1.0) < 1e-8
        tested += 1


def test_mutation_map_independent_of_axis_pair():
    rng = np.random.default_rng(31)
    probes = (0.3 + 0.1j, -0.8 + 1.2j, 2.0 - 0.4j)
    configs = [fourfold()] + [random_c4(rng) for _ in range(30)]
    for cfg in configs:
        v12, v23 = cfg.point(1, 2), cfg.point(2, 3)
        v34, v14 = cfg.point(3, 4), cfg.point(1, 4)
        v, v1234 = cfg.point(), cfg.point(1, 2, 3, 4)
        maps = [
            mobius_mutation(v12, v23, v34, v14),
            mobius_mutation(v12, v, v34, v1234),
            mobius_mutation(v23, v, v14, v1234),
        ]
        for other in maps[1:]:
            assert mobius_maps_equal(maps[0], other, rtol=1e-8)
            for z in probes:
                assert chordal(apply_mobius(maps[0], z), apply_mobius(other, z)) < 1e-8


def test_c3_builder_random():
    rng = np.random.default_rng(41)
    for _ in range(40):
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, 3))
        if np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]])).min() < 0.4:
            continue
        radii = rng.uniform(0.6, 1.6, 3)
        members = [circle_through_origin(r * complex(math.cos(t), math.sin(t)))
                   for r, t in zip(radii, angles)]
        cfg = build_c3(0j, members)
        assert set(cfg.points) == {frozenset(), frozenset({1, 2}),
                                   frozenset({1, 3}), frozenset({2, 3})}
        assert set(cfg.circles) == {frozenset({1}), frozenset({2}),
                                    frozenset({3}), frozenset({1, 2, 3})}
        assert incidence_residual(cfg) < 1e-8
        assert verify_cross_ratio_system(cfg).opposite_faces < 1e-9


def test_c3_tangency_rejected():
    members = [circle_through_origin(c) for c in (1, 2, -1)]
    with pytest.raises(TangentAtBase):
        build_c3(0j, members)


def test_line_member_c4():
    members = [
        Circle.make_line(0j, 3 + 0j),
        circle_through_origin(0.7 + 0.9j),
        circle_through_origin(-1.1 + 0.4j),
        circle_through_origin(0.2 - 1.3j),
    ]
    cfg = build_c4(0j, members)
    assert is_infinite(cfg.center(1))
    assert incidence_residual(cfg) < 1e-8
    assert verify_shift_identities(cfg).max_residual() < 1e-8
    assert verify_cross_ratio_system(cfg).max_residual() < 1e-8


def test_two_opposite_lines_meet_at_infinity():
    members = [
        Circle.make_line(0j, 3 + 0j),
        circle_through_origin(0.7 + 0.9j),
        Circle.make_line(0j, 1j),
        circle_through_origin(0.2 - 1.3j),
    ]
    cfg = build_c4(0j, members)
    assert is_infinite(cfg.point(1, 3))
    assert incidence_residual(cfg) < 1e-8
    assert verify_shift_identities(cfg).max_residual() < 1e-8
    m1, m2 = menelaus_multiratios(cfg)
    assert abs(m1 + 1.0) < 1e-8
    assert abs(m2 + 1.0) < 1e-8
