"""Hilbert proofs found by bounded search, then checked two ways.

Every proof goes back through the independent line checker, and its
conclusion is evaluated in the matching semantic engine.
"""
from nmodal.formula import parse
from nmodal.hilbert import check_proof, search_proof
from nmodal.levels import check_validity_n
from nmodal.matrices import matrix_for
from nmodal.valuations import check_validity

GOALS = [
    ("H", "p -> p", "M"),
    ("HK", "#(p -> q) -> (#p -> #q)", "MK"),
    ("HKT", "#(p -> p) -> (p -> p)", "MKT"),
    ("HKN", "#(p -> p)", "MK"),
    ("HKT4N", "#(p -> p) -> ##(p -> p)", "MKT4"),
]

for system, text, matrix in GOALS:
    goal = parse(text)
    proof = search_proof(system, goal, 8)
    print(f"== {system} |- {text}")
    if proof is None:
        print("   no proof within 8 lines")
        continue
    print(proof)
    m = matrix_for(matrix)
    semantic = check_validity_n(m, goal) if system.endswith("N") else check_validity(m, goal)
    print(f"   checker: {check_proof(system, proof, goal=goal)}; {matrix}: {semantic.status}")
    print()

print("HK on #p -> p:", search_proof("HK", parse("#p -> p"), 8))
