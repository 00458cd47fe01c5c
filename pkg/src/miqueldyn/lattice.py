"""Octahedral-lattice propagation and Miquel dynamics on torus patterns.

Values live on the even-parity points of an integer box.  A point
(x, y, z) with x+y+z odd is the center of a lattice octahedron; the
propagation equation transports the value below it to the value above
it by the mutation map of its four ring values

    z(x, y, c+1) = mob(z(x+1, y, c), z(x, y+1, c),
                       z(x-1, y, c), z(x, y-1, c)) (z(x, y, c-1)).

Two full consecutive levels (the Cauchy data) determine everything
above them on a window that loses one ring per level.  A Miquel
dynamics step on a torus pattern is the same equation applied to the
centers of every face of one parity class.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from .circle_pattern import CirclePattern, miquel_move, validate_pattern
from .errors import (
    ConsecutiveCoincidence,
    DegenerateRow,
    MiquelDynError,
    OctahedronRelationFailure,
    StencilDegenerate,
    WindowExhausted,
)
from .geometry import (
    ExtendedComplex,
    apply_mobius,
    chordal,
    is_infinite,
    mobius_mutation,
    star_ratio,
)
from .surface_graph import build_square_grid_torus, grid_face_parity

LatticePoint = Tuple[int, int, int]
Box = Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]]

RELATION_TOL = 1e-10


@dataclass
class OctahedralPatch:
    """Values on the even-parity points of an integer box.

    window is ((x0, x1), (y0, y1), (z0, z1)) with inclusive bounds; the
    two levels z0 and z0+1 form the Cauchy data and must be complete
    over the x/y box.  Higher levels shrink by one ring each.
    """

    window: Box
    values: Dict[LatticePoint, ExtendedComplex] = field(default_factory=dict)

    def level_bounds(self, level: int) -> Tuple[int, int, int, int]:
        """x/y bounds of the lattice points available at a level."""
        (x0, x1), (y0, y1), (z0, _) = self.window
        shrink = max(0, level - (z0 + 1))
        return x0 + shrink, x1 - shrink, y0 + shrink, y1 - shrink

    def level_points(self, level: int) -> Iterator[LatticePoint]:
        ax0, ax1, ay0, ay1 = self.level_bounds(level)
        for x in range(ax0, ax1 + 1):
            for y in range(ay0, ay1 + 1):
                if (x + y + level) % 2 == 0:
                    yield (x, y, level)


def _check_cauchy(patch: OctahedralPatch) -> None:
    (_, _), (_, _), (z0, z1) = patch.window
    if z1 < z0 + 1:
        raise MiquelDynError("window must span at least two levels")
    for level in (z0, z0 + 1):
        for p in patch.level_points(level):
            if p not in patch.values:
                raise MiquelDynError("Cauchy data misses lattice point %s" % (p,))
    for p in patch.values:
        if sum(p) % 2:
            raise MiquelDynError("odd-parity point %s carries a value" % (p,))


def _ring(values: Dict[LatticePoint, ExtendedComplex], a: int, b: int, c: int):
    # cyclic order +x, +y, -x, -y around the octahedron center (a, b, c)
    return (values[(a + 1, b, c)], values[(a, b + 1, c)],
            values[(a - 1, b, c)], values[(a, b - 1, c)])


def propagate_octahedral(patch: OctahedralPatch, target_level: int) -> OctahedralPatch:
    """Fill levels above the Cauchy data up to target_level.

    Each new level loses one ring of the x/y window; running past the
    point where the window is empty raises WindowExhausted.  Coinciding
    consecutive ring values raise StencilDegenerate naming the center.
    """
    _check_cauchy(patch)
    (x0, x1), (y0, y1), (z0, z1) = patch.window
    if target_level <= z1:
        raise MiquelDynError("target level %d is already filled" % target_level)
    values = dict(patch.values)
    for level in range(z1 + 1, target_level + 1):
        out = OctahedralPatch(((x0, x1), (y0, y1), (z0, level)), values)
        filled = 0
        for (x, y, _) in out.level_points(level):
            center = (x, y, level - 1)
            try:
                ring = _ring(values, *center)
            except KeyError as missing:
                raise MiquelDynError(
                    "stencil at %s misses ring point %s" % (center, missing))
            try:
                mat = mobius_mutation(*ring)
            except ConsecutiveCoincidence as err:
                raise StencilDegenerate(
                    "stencil at %s: %s" % (center, err)) from err
            values[(x, y, level)] = apply_mobius(mat, values[(x, y, level - 2)])
            filled += 1
        if filled == 0:
            raise WindowExhausted(
                "window is empty at level %d before reaching %d"
                % (level, target_level))
    return OctahedralPatch(((x0, x1), (y0, y1), (z0, target_level)), values)


def transversal_star_ratios(patch: OctahedralPatch, level: int):
    """Star-ratio below each octahedron center on a level, keyed by (x, y).

    The star at odd center (x, y, level) weighs the value at
    (x, y, level-1) against the four ring values of the level; the
    propagation preserves it, so the value above gives the same ratio.
    """
    out: Dict[Tuple[int, int], ExtendedComplex] = {}
    ax0, ax1, ay0, ay1 = patch.level_bounds(level)
    for x in range(ax0 + 1, ax1):
        for y in range(ay0 + 1, ay1):
            if (x + y + level) % 2 == 0:
                continue
            below = (x, y, level - 1)
            if below not in patch.values:
                continue
            try:
                ring = _ring(patch.values, x, y, level)
            except KeyError:
                continue
            out[(x, y)] = star_ratio(patch.values[below], *ring)
    return out


def octahedra_of(patch: OctahedralPatch) -> Iterator[Tuple[LatticePoint, Tuple]]:
    """All fully populated octahedra: center and its three axis pairs."""
    (_, _), (_, _), (z0, z1) = patch.window
    for c in range(z0 + 1, z1):
        ax0, ax1, ay0, ay1 = patch.level_bounds(c + 1)
        for x in range(ax0, ax1 + 1):
            for y in range(ay0, ay1 + 1):
                if (x + y + c) % 2 == 0:
                    continue
                needed = [(x + 1, y, c), (x - 1, y, c), (x, y + 1, c),
                          (x, y - 1, c), (x, y, c + 1), (x, y, c - 1)]
                if any(p not in patch.values for p in needed):
                    continue
                v = patch.values
                pairs = ((v[needed[0]], v[needed[1]]),
                         (v[needed[2]], v[needed[3]]),
                         (v[needed[4]], v[needed[5]]))
                yield (x, y, c), pairs


def direction_star_ratios(x_pair, y_pair, z_pair, tol: float = RELATION_TOL):
    """The three directional star-ratios of one octahedron.

    Arguments are the (plus, minus) value pairs along the three axes.
    Returns (sr1, sr2, sr3) where sr1 is the star along z, sr2 along y
    and sr3 along x; on a closed octahedron they satisfy

        sr2 = -1 / (1 + sr1),   sr3 = -(1 + 1/sr1),   sr1 sr2 sr3 = 1,

    checked within tol (OctahedronRelationFailure otherwise).  In
    particular a positive sr1 forces both transversal ratios negative.
    """
    xp, xm = x_pair
    yp, ym = y_pair
    zp, zm = z_pair
    sr1 = star_ratio(zm, xp, yp, xm, ym)
    sr2 = star_ratio(yp, zp, xp, zm, xm)
    sr3 = star_ratio(xp, yp, zp, ym, zm)
    if any(is_infinite(s) for s in (sr1, sr2, sr3)):
        raise OctahedronRelationFailure("infinite directional star-ratio")
    gap2 = chordal(sr2, -1.0 / (1.0 + sr1))
    gap3 = chordal(sr3, -(1.0 + 1.0 / sr1))
    gap_prod = abs(sr1 * sr2 * sr3 - 1.0)
    if max(gap2, gap3, gap_prod) > tol:
        raise OctahedronRelationFailure(
            "octahedron relations violated: %.3e %.3e %.3e"
            % (gap2, gap3, gap_prod))
    return sr1, sr2, sr3


def torus_displacement(a, b, periods) -> float:
    """Distance between two representatives modulo the period lattice.

    Mutation moves re-anchor face frames, so center representatives can
    legitimately jump by integer period combinations; this removes the
    nearest lattice vector before measuring.
    """
    if is_infinite(a) or is_infinite(b):
        return 0.0 if is_infinite(a) and is_infinite(b) else math.inf
    ox, oy = periods
    diff = complex(a) - complex(b)
    det = ox.real * oy.imag - ox.imag * oy.real
    if det == 0:
        raise MiquelDynError("periods are linearly dependent")
    s = (diff.real * oy.imag - diff.imag * oy.real) / det
    t = (ox.real * diff.imag - ox.imag * diff.real) / det
    return abs(diff - round(s) * ox - round(t) * oy)


@dataclass
class TorusPatternState:
    """A torus pattern plus the face parity class that moves next."""

    pattern: CirclePattern
    rows: int
    cols: int
    step_parity: int = 0


def make_torus_state(pattern: CirclePattern, rows: int, cols: int,
                     step_parity: int = 0) -> TorusPatternState:
    if rows % 2 or cols % 2:
        raise MiquelDynError("grid dimensions must be even")
    problems = validate_pattern(pattern)
    if problems:
        raise MiquelDynError("invalid pattern: " + "; ".join(problems))
    return TorusPatternState(pattern, rows, cols, step_parity % 2)


def miquel_dynamics_step(state: TorusPatternState) -> TorusPatternState:
    """Move every face of the current parity class and flip the parity.

    Faces are processed in increasing id order; the result does not
    depend on the order because same-parity faces share no moved data.
    Combinatorially the sweep returns to a square-grid torus: every
    original corner is split by its first moved face and merged away by
    the second one.
    """
    parity = grid_face_parity(state.rows, state.cols)
    p = state.pattern
    for f in sorted(fid for fid, par in parity.items()
                    if par == state.step_parity):
        try:
            p = miquel_move(p, f)
        except MiquelDynError as err:
            raise type(err)("face %d: %s" % (f, err)) from err
    return TorusPatternState(p, state.rows, state.cols, 1 - state.step_parity)


def _sample_spacings(rng, count: int, spread: float, retries: int = 100):
    """Positive grid spacings 1 + spread*U(-1/2, 1/2), resampled if tiny."""
    if spread < 0:
        raise DegenerateRow("spread must be nonnegative")
    out = []
    for _ in range(count):
        for attempt in range(retries + 1):
            gap = 1.0 + spread * rng.uniform(-0.5, 0.5)
            if gap > 1e-9:
                out.append(gap)
                break
            if attempt == retries:
                raise DegenerateRow(
                    "no admissible spacing after %d retries" % retries)
    return out


def generate_kasteleyn_cauchy_data(rows: int, cols: int, seed: int,
                                   spread: float = 0.5) -> CirclePattern:
    """Random rectangular torus pattern with an all-real-positive field.

    Vertices sit on a rectangular grid with seeded row/column spacings;
    every face center is the crossing of its diagonals' perpendicular
    bisectors, which keeps every star-ratio real and positive (the
    Kasteleyn condition).  spread 0 gives the regular isoradial pattern;
    the same seed always reproduces the same pattern.
    """
    if rows % 2 or cols % 2 or rows < 2 or cols < 2:
        raise MiquelDynError("grid dimensions must be even and at least 2")
    rng = np.random.default_rng(seed)
    dx = _sample_spacings(rng, cols, spread)
    dy = _sample_spacings(rng, rows, spread)
    xs = [0.0]
    for gap in dx:
        xs.append(xs[-1] + gap)
    ys = [0.0]
    for gap in dy:
        ys.append(ys[-1] + gap)

    g = build_square_grid_torus(rows, cols)
    vertex_points = {i * cols + j: complex(xs[j], ys[i])
                     for i in range(rows) for j in range(cols)}
    center_points = {i * cols + j: complex((xs[j] + xs[j + 1]) / 2.0,
                                           (ys[i] + ys[i + 1]) / 2.0)
                     for i in range(rows) for j in range(cols)}
    periods = (complex(xs[cols], 0.0), complex(0.0, ys[rows]))
    return CirclePattern(g, vertex_points, center_points, periods)


def patch_from_pattern(state: TorusPatternState, pad: int = 2) -> OctahedralPatch:
    """Cauchy data from a torus pattern's centers on the universal cover.

    Lattice x runs along columns and y along rows; face (i, j) sits at
    (x, y) = (j, i) with copies shifted by the periods.  Faces of the
    parity class that moves next land on the base level z0 = step_parity
    (which makes the lattice parities come out even), the others on
    z0 + 1, so one dynamics step computes exactly level z0 + 2.
    """
    p = state.pattern
    rows, cols = state.rows, state.cols
    if p.periods is None:
        raise MiquelDynError("the universal cover needs a torus pattern")
    ox, oy = p.periods
    z0 = state.step_parity
    values: Dict[LatticePoint, ExtendedComplex] = {}
    for x in range(-pad, cols + pad):
        for y in range(-pad, rows + pad):
            fid = (y % rows) * cols + (x % cols)
            lift = p.center_points[fid] \
                + (x - x % cols) // cols * ox + (y - y % rows) // rows * oy
            par = ((y % rows) + (x % cols)) % 2
            level = z0 if par == state.step_parity else z0 + 1
            if (x + y + level) % 2:
                raise MiquelDynError("face parity disagrees with lattice parity")
            values[(x, y, level)] = lift
    window = ((-pad, cols + pad - 1), (-pad, rows + pad - 1), (z0, z0 + 1))
    return OctahedralPatch(window, values)
