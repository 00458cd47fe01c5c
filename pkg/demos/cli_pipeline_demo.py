"""Driving the command line interface end to end.

Runs the same subcommands the shell would, inside one process: generate
a pattern, validate it, apply the local move twice at the same face,
check the dimer statistics across the move, and render layered SVG.
All outputs land in a temporary directory printed at the end.
"""

import json
import os
import tempfile

from miqueldyn import run_command

workdir = tempfile.mkdtemp(prefix="miqueldyn_demo_")
p = os.path.join(workdir, "p.json")
q = os.path.join(workdir, "q.json")
q2 = os.path.join(workdir, "q2.json")
svg = os.path.join(workdir, "p.svg")


def sh(*argv):
    result = run_command(list(argv))
    print("$ miqueldyn " + " ".join(argv))
    print("  exit %d" % result.exit_code)
    return result


sh("gen-pattern", "--size", "4x4", "--seed", "7", "--kasteleyn", "--out", p)
sh("validate", p)

result = sh("star-ratios", p, "--json")
field = json.loads(result.report)
print("  all positive: %s, product = %s" % (field["all_positive"],
                                            field["product"]))

sh("miquel-move", p, "--face", "5", "--out", q)
sh("miquel-move", q, "--face", "5", "--out", q2)
with open(p) as f1, open(q2) as f2:
    a, b = json.load(f1), json.load(f2)
gap = max(abs(complex(*a["centers"][k]) - complex(*b["centers"][k]))
          for k in a["centers"])
print("  double move returns the centers: max gap %.2e" % gap)

result = sh("check-urban-renewal", p, "--face", "5", "--json")
print("  " + result.report)

sh("export-svg", p, "--layers", "centers,dual", "--out", svg)
text = open(svg).read()
print("  svg has %d center dots and %d dual arrows"
      % (text.count('class="center"'), text.count('class="dual"')))

print()
print("outputs in %s" % workdir)
