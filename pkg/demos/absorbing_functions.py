"""On Z4 x Z2 the compatible functions need generators of every arity.

For each n an n-ary compatible function is built that depends on all of
its arguments yet collapses to a constant when one argument is absorbed.
Polynomials alone already miss most binary compatible functions.
"""

from congen.algebra import make_abelian
from congen.clone import absorbing_cn, closure, count_compatible, essential_arity, generates_up_to
from congen.congruence import Congruence, is_compatible
from congen.tables import FnTable

g = make_abelian([4, 2])
delta = Congruence.from_blocks(8, [[0, 1, 4, 5], [2, 3, 6, 7]])
eps = Congruence.from_blocks(8, [[0, 4], [1, 5], [2, 6], [3, 7]])
for n in (1, 2, 3):
    c = absorbing_cn(g, delta, eps, 0, 4, n)
    print(f"c{n}: compatible={is_compatible(g, c)}, essential arity={essential_arity(c)}")

for k in (1, 2):
    print(f"compatible functions of arity {k}:", count_compatible(g, k)[0])

# x + y, and the constants, generate the polynomial clone
plus = FnTable(2, 8, g.plus.ravel())
consts = [FnTable.constant(8, c, 1) for c in range(8)]
cl = closure(g, [plus] + consts, 2)
print("polynomial closure sizes:", cl.by_arity())
res = generates_up_to(g, [plus] + consts, 2, 2)
print("generates everything up to arity 2:", res.status, res.counts)
