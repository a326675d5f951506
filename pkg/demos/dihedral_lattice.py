"""The normal-subgroup lattice of D8 and what the commutator sees in it."""

from congen import lattice as L
from congen import zoo
from congen.commutator import binary_commutator, nilpotency_chain
from congen.congruence import congruence_lattice
from congen.decide import decide

d8 = zoo.dihedral(4)
cons, lat = congruence_lattice(d8)
print(f"D8 has {len(cons)} normal subgroups:")
for k, c in enumerate(cons):
    print(f"  {k}: {c.block_of(0)}")
print("covers:", L.covers(lat))
print("cutting chain:", L.cutting_elements(lat))
for iv in L.coalesced_decomposition(lat):
    sub = lat.interval(iv.lo, iv.hi)
    print(f"  [{iv.lo}, {iv.hi}]: {len(sub)} elements, simple={L.is_simple_lattice(sub)}, "
          f"splits={L.splitting_pair(sub) is not None}")

one = cons[lat.top]
print("[1, 1] =", binary_commutator(d8, one, one).block_of(0))
print("lower central series:", [c.block_of(0) for c in nilpotency_chain(d8)])
v = decide(d8)
print(f"verdict: {v.status} via {v.theorem}")
