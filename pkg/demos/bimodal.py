"""Two modalities over eight truth values, tied together by restrictions.

Without restrictions the two boxes are unrelated.  The duality restrictions
make each the dual of the other, and the swap restriction validates an axiom
for which no Nmatrix presentation is known.
"""
from nmodal.formula import BIMODAL, parse
from nmodal.matrices import matrix_for
from nmodal.restrictions import check_validity_rn, rn_system

m2 = matrix_for("M2")

SETUPS = {
    "none": [],
    "dualities": ["bimodal-duality-21", "bimodal-duality-12"],
    "swap": ["bimodal-swap"],
    "mono": ["bimodal-mono"],
}
FORMULAS = ["#2p <-> ~#1~p", "#1p <-> ~#2~p", "#2#1p -> #1#2p", "#1p -> #2p"]

print(f"{'':<16}" + "".join(f"{name:>14}" for name in SETUPS))
for text in FORMULAS:
    goal = parse(text, BIMODAL)
    row = [check_validity_rn(rn_system(axioms, m2), goal).status for axioms in SETUPS.values()]
    print(f"{text:<16}" + "".join(f"{s:>14}" for s in row))
