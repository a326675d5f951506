"""Small named algebras used throughout the tests and demos."""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .algebra import EXPANDED_GROUP, FiniteAlgebra, direct_product, group_from_cayley, make_abelian


def cyclic(n: int) -> FiniteAlgebra:
    return make_abelian([n])


def dihedral(n: int) -> FiniteAlgebra:
    """Symmetries of the n-gon, order 2n; ``s^a r^k`` has index ``a * n + k``.

    Index 1 is the rotation r, index n the reflection s.
    """
    elems = [(a, k) for a in range(2) for k in range(n)]
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    for i, (a1, k1) in enumerate(elems):
        for j, (a2, k2) in enumerate(elems):
            # s^a1 r^k1 s^a2 r^k2 = s^(a1+a2) r^((-1)^a2 k1 + k2)
            k = ((-1) ** a2 * k1 + k2) % n
            table[i, j] = ((a1 + a2) % 2) * n + k
    return group_from_cayley(table, name=f"D{2 * n}")


def symmetric(k: int) -> FiniteAlgebra:
    """Sym(k) on permutations in lexicographic order; product is composition p*q = p after q."""
    perms = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[x]] for x in range(k))] for q in perms] for p in perms]
    return group_from_cayley(table, name=f"S{k}")


def prime_field(p: int) -> FiniteAlgebra:
    """``(Z_p; +, -, 0, *)`` as an expanded group."""
    i = np.arange(p)
    return FiniteAlgebra(p, [("add", 2, (i[:, None] + i[None, :]) % p), ("neg", 1, (-i) % p),
                             ("zero", 0, 0), ("mul", 2, (i[:, None] * i[None, :]) % p)],
                         kind=EXPANDED_GROUP, group_reduct=("add", "neg", "zero"), name=f"F{p}")


def field_square(p: int = 2) -> FiniteAlgebra:
    """The ring ``F_p x F_p``."""
    f = prime_field(p)
    out = direct_product(f, f)
    out.name = f"F{p} x F{p}"
    return out


def set_with_identity(n: int = 2) -> FiniteAlgebra:
    """An ``n``-element set whose only operation is the identity map."""
    return FiniteAlgebra(n, [("id", 1, np.arange(n))], name=f"set{n}")


def forget_group(a: FiniteAlgebra) -> FiniteAlgebra:
    """The same operations with the group reduct no longer marked."""
    return FiniteAlgebra(a.size, [(o.name, o.arity, o.table) for o in a.ops],
                         name=a.name, _trusted=True)
