"""Adding necessitation by trimming valuations level by level.

#(p -> p) fails in plain MK: nothing forces the second coordinate of
p -> p.  The level construction notices that p -> p is designated by every
valuation and keeps only those that also give it second coordinate 1.
A bounded Kripke search agrees with the outcome.
"""
from nmodal.formula import parse
from nmodal.kripke import kripke_check
from nmodal.levels import Fragment, check_validity_n, compute_levels
from nmodal.matrices import matrix_for

mk = matrix_for("MK")
goal = parse("#(p -> p)")

flat = check_validity_n(mk, goal, Fragment.of([goal]), max_levels=0)
print("level 0 only:", flat.status)
print("  ", flat.witness)

trace = compute_levels(mk, Fragment.of([goal]))
print()
print(trace.summary())

print()
print("at the fixpoint:", check_validity_n(mk, goal).status)
print("Kripke, all frames up to 4 worlds:", kripke_check("all", goal, 4).status)

# a non-theorem stays refuted at every level
other = parse("#p -> p")
print()
print(f"{other}: levels say {check_validity_n(mk, other).status}, "
      f"frames say {kripke_check('all', other, 4).status}")
print("  ", kripke_check("all", other, 4).witness)
