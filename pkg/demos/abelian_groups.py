"""Which finite abelian groups have a finitely generated clone of compatible functions?

Walks a few groups through the closed form and the lattice-based criteria and
prints the splitting pair that refutes finite generation when there is one.
"""

from congen.algebra import AbelianSpec, make_abelian
from congen.decide import decide, decide_abelian, recheck_splitting_witness

for orders in ([2, 2], [4, 2], [9, 3], [9, 9], [8, 4], [3, 25, 5], [27, 25, 25, 5]):
    spec = AbelianSpec(orders)
    v = decide_abelian(spec)
    print(f"{spec}: {v.status}")
    sp = v.witnesses.get("splitting_pair")
    if sp:
        print(f"  Sylow {sp['p']} splits at D = {sp['D']}, E = {sp['E']}")
    if spec.order <= 500:
        a = make_abelian(orders)
        w = decide(a)
        agree = "agrees" if w.status == v.status else "DISAGREES"
        print(f"  lattice route ({w.theorem}) {agree}", end="")
        if w.status == "not_finitely_generated":
            print(f", witness rechecks: {recheck_splitting_witness(a, w)}")
        else:
            print()
