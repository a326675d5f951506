"""Ideals of expanded groups and the function constructions built on them.

Functions "on I" use I's own dense indexing: the k-th smallest member of I
is element k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import FiniteAlgebra
from .congruence import Congruence, all_congruences, congruence_lattice, generated_congruence
from .errors import MalformedInputError, PreconditionError
from .lattice import FiniteLattice, cutting_elements
from .tables import FnTable


def _require_expanded(a: FiniteAlgebra) -> None:
    if not a.is_expanded_group:
        raise PreconditionError("operation needs an expanded group")


@dataclass(frozen=True)
class Ideal:
    members: tuple[int, ...]
    algebra: FiniteAlgebra = field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.members)

    def __contains__(self, x) -> bool:
        return int(x) in self._set

    @property
    def _set(self):
        return frozenset(self.members)

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.algebra.size, dtype=bool)
        m[list(self.members)] = True
        return m

    @property
    def index(self) -> np.ndarray:
        """Position of each member in I's own indexing (``-1`` outside I)."""
        pos = np.full(self.algebra.size, -1, dtype=np.int64)
        pos[list(self.members)] = np.arange(self.size)
        return pos

    def congruence(self) -> Congruence:
        """``x ~ y`` iff ``x - y`` lies in the ideal."""
        a = self.algebra
        idx = np.arange(a.size)
        d = a.sub(idx[:, None], idx[None, :])
        rel = self.mask[d]
        lab = rel.argmax(axis=1)  # first y with x - y in I, i.e. the block minimum
        return Congruence(lab, _canonical=True)


def ideal_of(a: FiniteAlgebra, theta: Congruence) -> Ideal:
    """The 0-class of ``theta``."""
    _require_expanded(a)
    return Ideal(tuple(theta.block_of(a.zero)), a)


def ideal_from_members(a: FiniteAlgebra, members) -> Ideal:
    """Validate ``members`` as an ideal (it must be the 0-class of the congruence it generates)."""
    _require_expanded(a)
    mem = tuple(sorted(set(int(m) for m in members)))
    z = a.zero
    if z not in mem:
        raise MalformedInputError("an ideal must contain 0")
    theta = generated_congruence(a, [(z, m) for m in mem])
    if tuple(theta.block_of(z)) != mem:
        raise MalformedInputError("subset is not an ideal")
    return Ideal(mem, a)


def ideal_lattice(a: FiniteAlgebra) -> tuple[list[Ideal], FiniteLattice]:
    """Ideals in the same order (and with the same lattice) as the congruences."""
    _require_expanded(a)
    cons, lat = congruence_lattice(a)
    return [ideal_of(a, c) for c in cons], lat


def is_cutting_ideal(a: FiniteAlgebra, i: Ideal) -> bool:
    ideals, lat = ideal_lattice(a)
    try:
        k = ideals.index(i)
    except ValueError:
        raise MalformedInputError("not an ideal of this algebra") from None
    return k in cutting_elements(lat)


def _require_cutting(a: FiniteAlgebra, i: Ideal) -> None:
    if not is_cutting_ideal(a, i):
        raise PreconditionError(f"ideal {list(i.members)} does not cut the ideal lattice")


# -- transversals and shifts ---------------------------------------------


@dataclass(frozen=True)
class Transversal:
    reps: tuple[int, ...]
    rep_of: np.ndarray = field(repr=False, compare=False)

    def r(self, x: int) -> int:
        return int(self.rep_of[x])


def transversal(a: FiniteAlgebra, i: Ideal, rng: np.random.Generator | None = None) -> Transversal:
    """Coset representatives modulo ``i`` with 0 first.

    The default picks the smallest member of each coset; with ``rng`` every
    coset other than ``i`` itself gets a random member.
    """
    _require_expanded(a)
    lab = i.congruence().array.copy()
    z = a.zero
    blocks = {}
    for x in range(a.size):
        blocks.setdefault(int(lab[x]), []).append(x)
    zero_block = int(lab[z])
    order = [zero_block] + sorted(b for b in blocks if b != zero_block)
    choice = {}
    for b in order:
        if b == zero_block:
            choice[b] = z
        elif rng is None:
            choice[b] = b
        else:
            choice[b] = int(rng.choice(blocks[b]))
    rep_of = np.array([choice[int(lab[x])] for x in range(a.size)], dtype=np.int64)
    rep_of.setflags(write=False)
    return Transversal(tuple(choice[b] for b in order), rep_of)


def shift(a: FiniteAlgebra, i: Ideal, t: Transversal, f: FnTable, alphas: Sequence[int]) -> FnTable:
    """``T(f)(x) = f(x1 + a1, ..., xn + an) - r(f(a1, ..., an))``."""
    _require_expanded(a)
    alphas = tuple(int(x) for x in alphas)
    if len(alphas) != f.arity:
        raise PreconditionError(f"need {f.arity} shift values, got {len(alphas)}")
    reps = set(t.reps)
    if any(x not in reps for x in alphas):
        raise PreconditionError("shift values must be transversal representatives")
    if f.size != a.size:
        raise MalformedInputError("function and algebra sizes differ")
    plus = a.plus
    if f.arity == 0:
        return f
    moved = f.table[np.ix_(*[plus[:, al] for al in alphas])]
    c = t.r(f(*alphas))
    return FnTable._wrap(f.arity, a.size, plus[moved, a.minus[c]])


def maps_into(f: FnTable, i: Ideal) -> bool:
    """Whether ``f(I^n)`` is contained in ``I``."""
    mem = np.array(i.members)
    vals = f.table[np.ix_(*([mem] * f.arity))] if f.arity else f.table
    return bool(i.mask[vals].all())


def restrict(a: FiniteAlgebra, i: Ideal, f: FnTable) -> FnTable:
    """``f|_I`` in I's indexing; ``f`` must map ``I^n`` into ``I``."""
    if not maps_into(f, i):
        raise PreconditionError("function does not map I^n into I")
    mem = np.array(i.members)
    return FnTable._wrap(f.arity, i.size, i.index[f.table[np.ix_(*([mem] * f.arity))]])


def extend(a: FiniteAlgebra, i: Ideal, f: FnTable, c: int) -> FnTable:
    """``f^c``: ``f`` on ``I^n`` and the constant ``c`` elsewhere."""
    _require_expanded(a)
    _require_cutting(a, i)
    if f.size != i.size:
        raise MalformedInputError("function must be given on the ideal's own indexing")
    if int(c) not in i:
        raise PreconditionError(f"{c} is not in the ideal")
    n, k = a.size, f.arity
    out = np.full((n,) * k, int(c), dtype=np.int64)
    mem = np.array(i.members)
    out[np.ix_(*([mem] * k))] = mem[f.table]
    return FnTable._wrap(k, n, out)


def modified_projection(a: FiniteAlgebra, i: Ideal, n: int, m: int) -> FnTable:
    """``x_m`` on ``I^n``, 0 elsewhere."""
    if not 1 <= m <= n:
        raise MalformedInputError(f"need 1 <= m <= n, got m={m}, n={n}")
    proj = FnTable.projection(i.size, n, m)
    idx = i.index
    zero = int(idx[a.zero])
    return extend(a, i, proj, i.members[zero])


def induced_congruences(a: FiniteAlgebra, i: Ideal) -> list[Congruence]:
    """Congruences of the induced algebra on ``I``, one per ideal ``J`` inside ``I``.

    ``x ~ y`` iff ``x - y`` is in ``J``; returned on I's own indexing.
    """
    _require_expanded(a)
    ideals, _ = ideal_lattice(a)
    mem = np.array(i.members)
    out = []
    d = a.sub(mem[:, None], mem[None, :])
    for j in ideals:
        if set(j.members) <= set(i.members):
            rel = j.mask[d]
            out.append(Congruence(rel.argmax(axis=1), _canonical=True))
    return out


def is_compatible_on_ideal(a: FiniteAlgebra, i: Ideal, f: FnTable) -> bool:
    """Compatibility of ``f`` (on I's indexing) with the induced algebra on ``I``."""
    from .congruence import preserves
    return all(preserves(f.table, th.array) for th in induced_congruences(a, i))


# -- lifting through a cutting congruence ---------------------------------


def lift_tilde(a: FiniteAlgebra, alpha: Congruence, f: FnTable,
               rng: np.random.Generator | None = None) -> FnTable:
    """``f~(x) = r(f(x / alpha))`` for ``f`` on the quotient ``A / alpha``.

    Quotient elements are the blocks in order of their smallest member; the
    transversal ``r`` takes block minima unless ``rng`` is given.
    """
    cons, lat = congruence_lattice(a)
    if alpha not in cons:
        raise MalformedInputError("not a congruence of this algebra")
    if cons.index(alpha) not in cutting_elements(lat):
        raise PreconditionError("alpha does not cut the congruence lattice")
    lab = alpha.array
    mins = np.unique(lab)
    if f.size != len(mins):
        raise MalformedInputError("function must live on the quotient")
    block = np.searchsorted(mins, lab)
    reps = mins.copy()
    if rng is not None:
        reps = np.array([int(rng.choice(np.flatnonzero(lab == b))) for b in mins])
    vals = f.table[np.ix_(*([block] * f.arity))] if f.arity else f.table
    return FnTable._wrap(f.arity, a.size, reps[vals])


def project_to_quotient(a: FiniteAlgebra, alpha: Congruence, f: FnTable) -> FnTable:
    """``f^{A/alpha}``; ``f`` must preserve ``alpha``."""
    from .congruence import preserves
    if not preserves(f.table, alpha.array):
        raise PreconditionError("function does not preserve alpha")
    lab = alpha.array
    mins = np.unique(lab)
    vals = f.table[np.ix_(*([mins] * f.arity))] if f.arity else f.table
    return FnTable._wrap(f.arity, len(mins), np.searchsorted(mins, lab[vals]))


# -- products ------------------------------------------------------------


def skew_free_check(a: FiniteAlgebra, b: FiniteAlgebra) -> bool:
    """Every congruence of ``a x b`` is a product of factor congruences.

    Products of factor congruences are distinct congruences of ``a x b``, so
    it is enough to compare counts.
    """
    from .algebra import direct_product
    return len(all_congruences(direct_product(a, b))) == \
        len(all_congruences(a)) * len(all_congruences(b))


def decompose_product(a: FiniteAlgebra, b: FiniteAlgebra, h: FnTable) -> tuple[FnTable, FnTable]:
    """Split ``h`` on ``A x B`` into ``(f, g)`` with ``h((x, y)) = (f(x), g(y))``.

    The equation is checked on every input.
    """
    na, nb, k = a.size, b.size, h.arity
    if h.size != na * nb:
        raise MalformedInputError("function does not live on the product")
    t = h.table.reshape((na, nb) * k)
    ha, hb = t // nb, t % nb
    lead = (slice(None), 0) * k
    f = ha[lead]
    g = hb[tuple(0 if s == slice(None) else slice(None) for s in lead)] if k else hb
    f_b = f.reshape(sum(((na, 1) for _ in range(k)), ()))
    g_b = g.reshape(sum(((1, nb) for _ in range(k)), ()))
    if not (np.array_equal(ha, np.broadcast_to(f_b, ha.shape))
            and np.array_equal(hb, np.broadcast_to(g_b, hb.shape))):
        raise PreconditionError("function does not act componentwise on the product")
    return FnTable._wrap(k, na, f), FnTable._wrap(k, nb, g)


def product_function(f: FnTable, g: FnTable) -> FnTable:
    """``(f x g)((x, y)) = (f(x), g(y))`` with pairs encoded as ``x * |B| + y``."""
    if f.arity != g.arity:
        raise MalformedInputError("arities differ")
    k, na, nb = f.arity, f.size, g.size
    ft = f.table.reshape(sum(((na, 1) for _ in range(k)), ()))
    gt = g.table.reshape(sum(((1, nb) for _ in range(k)), ()))
    return FnTable._wrap(k, na * nb, (ft.astype(np.int64) * nb + gt).reshape((na * nb,) * k))


def product_map_e(na: int, nb: int) -> FnTable:
    """``e((a1, b1), (a2, b2)) = (a1, b2)`` on ``A x B``."""
    x = np.arange(na * nb)
    return FnTable._wrap(2, na * nb, (x[:, None] // nb) * nb + (x[None, :] % nb))
