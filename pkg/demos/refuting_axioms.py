"""Which modal axioms survive in which Nmatrix.

The minimal matrix M gives the modality no structure at all, so every
familiar axiom has a countermodel there.  Each refinement cuts cells out of
the tables and one more axiom becomes valid.
"""
from nmodal.formula import parse
from nmodal.matrices import matrix_for, render_table
from nmodal.valuations import check_validity

AXIOMS = {
    "K": "#(p -> q) -> (#p -> #q)",
    "T": "#p -> p",
    "4": "#p -> ##p",
}

print(render_table(matrix_for("M")))
print()

for system in ("M", "MK", "MKT", "MKT4"):
    m = matrix_for(system)
    print(f"== {system}")
    for name, text in AXIOMS.items():
        verdict = check_validity(m, parse(text))
        print(f"  {name:<2} {verdict.status}")
        if verdict.witness is not None:
            print(f"     {verdict.witness}")
