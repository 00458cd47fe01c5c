"""Stacking pattern time-slices into the octahedral lattice.

Two consecutive layers of centers (the Cauchy data) determine the whole
three-dimensional evolution: each new value is the mutation map of a
ring of four applied to the value two levels below.  The directional
star-ratios of every octahedron obey two rational relations, so one
positive ratio forces the two transversal ones negative.
"""

from miqueldyn import (
    direction_star_ratios,
    generate_kasteleyn_cauchy_data,
    make_torus_state,
    octahedra_of,
    patch_from_pattern,
    propagate_octahedral,
    transversal_star_ratios,
)

p = generate_kasteleyn_cauchy_data(4, 4, seed=3, spread=0.5)
state = make_torus_state(p, 4, 4)
patch = patch_from_pattern(state, pad=3)
print("cauchy data: levels 0 and 1, %d values" % len(patch.values))

patch = propagate_octahedral(patch, 4)
for level in range(5):
    count = sum(1 for pt in patch.values if pt[2] == level)
    srs = transversal_star_ratios(patch, level) if level else {}
    note = ""
    if srs:
        worst = max(abs(sr.imag) / abs(sr) for sr in srs.values())
        note = ", star-ratios real to %.1e" % worst
    print("level %d: %d values%s" % (level, count, note))

print()
sample = None
checked = 0
for center, (x_pair, y_pair, z_pair) in octahedra_of(patch):
    sr1, sr2, sr3 = direction_star_ratios(x_pair, y_pair, z_pair)
    if sample is None:
        sample = (center, sr1, sr2, sr3)
    assert sr1.real > 0 > sr2.real and sr3.real < 0
    checked += 1

center, sr1, sr2, sr3 = sample
print("checked %d octahedra; every sr1 > 0 with sr2, sr3 < 0" % checked)
print("sample octahedron at %s:" % (center,))
print("  sr1 = %.6f" % sr1.real)
print("  sr2 = %.6f  (equals -1/(1+sr1) = %.6f)"
      % (sr2.real, -1.0 / (1.0 + sr1.real)))
print("  sr3 = %.6f  (equals -(1+1/sr1) = %.6f)"
      % (sr3.real, -(1.0 + 1.0 / sr1.real)))
print("  product sr1*sr2*sr3 = %.12f" % (sr1 * sr2 * sr3).real)
