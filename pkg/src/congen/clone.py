"""The function algebra on a finite set: zeta, tau, Delta, nabla and composition.

Also bounded clone closure, enumeration of compatible functions, and the
absorbing functions used to refute finite generation.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .congruence import Congruence, join_irreducibles
from .errors import MalformedInputError, PreconditionError
from .lattice import is_splitting_pair
from .tables import FnTable

DEFAULT_MAX_ARITY = 3
DEFAULT_BUDGET = 2_000_000


def default_budget() -> int:
    env = os.environ.get("CONGEN_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise MalformedInputError(f"CONGEN_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


# -- the five operations ---------------------------------------------------


def zeta(f: FnTable) -> FnTable:
    """Cyclic shift: ``(zeta f)(x1, ..., xn) = f(x2, ..., xn, x1)``."""
    if f.arity < 2:
        return f
    return FnTable._wrap(f.arity, f.size, np.moveaxis(f.table, -1, 0))


def tau(f: FnTable) -> FnTable:
    """Swap of the first two arguments."""
    if f.arity < 2:
        return f
    return FnTable._wrap(f.arity, f.size, np.swapaxes(f.table, 0, 1))


def delta(f: FnTable) -> FnTable:
    """Identification of the first two arguments: ``f(x1, x1, x2, ...)``."""
    if f.arity < 2:
        return f
    return FnTable._wrap(f.arity - 1, f.size, np.moveaxis(np.diagonal(f.table, 0, 0, 1), -1, 0))


def nabla(f: FnTable) -> FnTable:
    """A new dummy first argument: ``(nabla f)(x1, ..., x_{n+1}) = f(x2, ..., x_{n+1})``."""
    s = f.size
    return FnTable._wrap(f.arity + 1, s, np.broadcast_to(f.table, (s,) + f.table.shape))


def compose(g: FnTable, f: FnTable) -> FnTable:
    """``(g o f)(x1, ..., x_{m+n-1}) = f(g(x1, ..., xm), x_{m+1}, ..., x_{m+n-1})``."""
    if g.size != f.size:
        raise MalformedInputError(f"universe sizes differ: {g.size} vs {f.size}")
    s, m, n = f.size, g.arity, f.arity
    if n == 0:
        return f
    flat = f.table.reshape(s, -1)[g.table.reshape(-1)]
    return FnTable._wrap(m + n - 1, s, flat.reshape((s,) * (m + n - 1)))


# -- closure ---------------------------------------------------------------


@dataclass
class ClosureResult:
    functions: frozenset
    complete: bool
    produced: int
    max_arity: int

    def __contains__(self, f):
        return f in self.functions

    def __len__(self):
        return len(self.functions)

    def __iter__(self):
        return iter(sorted(self.functions))

    def by_arity(self) -> dict[int, int]:
        return dict(sorted(Counter(f.arity for f in self.functions).items()))

    def of_arity(self, k: int) -> set:
        return {f for f in self.functions if f.arity == k}


def closure(a, generators: Iterable[FnTable], max_arity: int = DEFAULT_MAX_ARITY,
            budget: int | None = None) -> ClosureResult:
    """Least set containing ``generators`` and the identity, closed under the five operations.

    Composition and nabla are applied only when the result has arity at most
    ``max_arity``. The worklist is breadth-first; the result is marked
    incomplete if ``budget`` new tables were produced before the fixpoint.
    ``a`` may be an algebra or a universe size.
    """
    if max_arity < 1:
        raise MalformedInputError("max_arity must be at least 1")
    size = a if isinstance(a, (int, np.integer)) else a.size
    budget = default_budget() if budget is None else budget
    gens = list(generators)
    for g in gens:
        if g.size != size:
            raise MalformedInputError(f"generator on {g.size} elements, universe has {size}")
    known: dict[FnTable, None] = {}
    order: list[FnTable] = []
    produced = 0

    def add(h: FnTable) -> None:
        nonlocal produced
        if h.arity <= max_arity and h not in known:
            known[h] = None
            order.append(h)
            produced += 1

    add(FnTable.identity(size))
    for g in sorted(gens, key=lambda t: (t.arity, t.values.tobytes())):
        if g.arity > max_arity:
            raise MalformedInputError(f"generator of arity {g.arity} exceeds max_arity {max_arity}")
        add(g)
    k = 0
    complete = True
    while k < len(order):
        if produced >= budget:
            complete = False
            break
        h = order[k]
        for u in (zeta(h), tau(h), delta(h)):
            add(u)
        if h.arity < max_arity:
            add(nabla(h))
        # compose the new table with everything seen so far, on both sides
        for j in range(k + 1):
            other = order[j]
            if h.arity + other.arity - 1 <= max_arity:
                add(compose(h, other))
                if j != k:
                    add(compose(other, h))
        k += 1
    if produced >= budget and k < len(order):
        complete = False
    return ClosureResult(frozenset(known), complete, produced, max_arity)


def is_closed(result: ClosureResult) -> bool:
    """Recheck that no operation adds a new table of admissible arity."""
    fs = result.functions
    ma = result.max_arity
    for h in fs:
        for u in (zeta(h), tau(h), delta(h)):
            if u not in fs:
                return False
        if h.arity < ma and nabla(h) not in fs:
            return False
        for g in fs:
            if h.arity + g.arity - 1 <= ma and compose(h, g) not in fs:
                return False
    return True


# -- compatible functions --------------------------------------------------


@dataclass
class Enumeration:
    functions: list
    complete: bool

    def __len__(self):
        return len(self.functions)

    def __iter__(self):
        return iter(self.functions)


def _search_plan(a, arity: int):
    """Per cell: the earlier cells whose value confines it, with the block masks to use."""
    n = a.size
    cells = n ** arity
    full = (1 << n) - 1
    ji = join_irreducibles(a)
    coords = np.array(np.unravel_index(np.arange(cells), (n,) * arity)).T if arity else np.zeros((1, 0), int)
    deps = [[] for _ in range(cells)]
    masks = []
    for t, th in enumerate(ji):
        lab = th.array
        blockmask = [0] * n
        for v in range(n):
            blockmask[v] = sum(1 << y for y in np.flatnonzero(lab == lab[v]))
        masks.append(blockmask)
        rep = np.ravel_multi_index(tuple(lab[coords].T), (n,) * arity) if arity else np.zeros(1, int)
        for c in np.flatnonzero(rep != np.arange(cells)):
            deps[c].append((int(rep[c]), t))
    return cells, full, deps, masks


def _backtrack(a, arity: int, budget: int):
    n = a.size
    cells, full, deps, masks = _search_plan(a, arity)
    vals = [0] * cells
    options: list[list[int]] = [None] * cells

    def candidates(c):
        m = full
        for r, t in deps[c]:
            m &= masks[t][vals[r]]
        return [v for v in range(n - 1, -1, -1) if m >> v & 1]  # popped from the end

    found = 0
    c = 0
    options[0] = candidates(0)
    while c >= 0:
        if not options[c]:
            c -= 1
            continue
        vals[c] = options[c].pop()
        if c == cells - 1:
            yield list(vals)
            found += 1
            if found >= budget:
                return
            continue
        c += 1
        options[c] = candidates(c)


def enumerate_compatible(a, arity: int, budget: int | None = None) -> Enumeration:
    """All compatible functions of the given arity, in lexicographic order of their tables."""
    if arity < 1:
        raise MalformedInputError("arity must be at least 1")
    budget = default_budget() if budget is None else budget
    out = []
    complete = True
    for vals in _backtrack(a, arity, budget + 1):
        if len(out) == budget:
            complete = False
            break
        out.append(FnTable._wrap(arity, a.size, np.array(vals)))
    return Enumeration(out, complete)


def count_compatible(a, arity: int, budget: int | None = None) -> tuple[int, bool]:
    budget = default_budget() if budget is None else budget
    k = 0
    for _ in _backtrack(a, arity, budget + 1):
        k += 1
        if k > budget:
            return budget, False
    return k, True


def random_compatible(a, arity: int, rng: np.random.Generator) -> FnTable:
    """A compatible function found by a randomised depth-first search.

    Random value orders walk into dead ends far more often than the
    smallest-first order, so this search forward-checks: each assignment
    narrows the cells it constrains and is refused if one runs empty.
    """
    n = a.size
    cells, full, deps, masks = _search_plan(a, arity)
    rdeps = [[] for _ in range(cells)]
    for d in range(cells):
        for r, t in deps[d]:
            rdeps[r].append((d, t))
    dom = [full] * cells
    vals = [0] * cells
    options: list = [None] * cells
    trail: list = [None] * cells  # per cell, the domains it overwrote

    def opts(c):
        out = [v for v in range(n) if dom[c] >> v & 1]
        rng.shuffle(out)
        return out

    c = 0
    options[0] = opts(0)
    while c < cells:
        if trail[c] is not None:
            for d, old in reversed(trail[c]):
                dom[d] = old
            trail[c] = None
        if not options[c]:
            c -= 1
            if c < 0:
                raise PreconditionError("no compatible function of this arity")  # cannot happen: projections
            continue
        v = options[c].pop()
        saved = []
        ok = True
        for d, t in rdeps[c]:
            new = dom[d] & masks[t][v]
            if new != dom[d]:
                saved.append((d, dom[d]))
                dom[d] = new
                if not new:
                    ok = False
                    break
        trail[c] = saved
        if not ok:
            continue
        vals[c] = v
        c += 1
        if c < cells:
            options[c] = opts(c)
            trail[c] = None
    return FnTable._wrap(arity, n, np.array(vals))


@dataclass
class GenerationVerdict:
    status: str  # "yes" or "no-within-budget"
    counts: dict = field(default_factory=dict)  # arity -> (generated, compatible)
    missing: FnTable | None = None
    complete: bool = True


def generates_up_to(a, generators, k: int, max_arity: int = DEFAULT_MAX_ARITY,
                    budget: int | None = None) -> GenerationVerdict:
    """Whether the closure of ``generators`` contains every compatible function of arity <= k.

    A "yes" is definitive; "no-within-budget" only says the bounded closure
    fell short, since generation may need intermediate arities above the bound.
    """
    cl = closure(a, generators, max(max_arity, k), budget)
    counts = {}
    missing = None
    ok = cl.complete
    for j in range(1, k + 1):
        comp = enumerate_compatible(a, j, budget)
        have = cl.of_arity(j)
        counts[j] = (len(have), len(comp))
        ok = ok and comp.complete
        if missing is None:
            for f in comp:
                if f not in have:
                    missing = f
                    break
    status = "yes" if ok and missing is None else "no-within-budget"
    return GenerationVerdict(status, counts, missing, cl.complete)


# -- absorbing functions ---------------------------------------------------


def absorbing_cn(a, delta_: Congruence, eps: Congruence, o: int, c: int, n: int) -> FnTable:
    """``c`` on ``(o/delta)^n`` and ``o`` elsewhere, for a splitting pair ``(delta, eps)``."""
    from .congruence import congruence_lattice

    cons, lat = congruence_lattice(a)
    if delta_ not in cons or eps not in cons:
        raise PreconditionError("delta and eps must be congruences of the algebra")
    if not is_splitting_pair(lat, cons.index(delta_), cons.index(eps)):
        raise PreconditionError("(delta, eps) is not a splitting pair")
    if o == c or not eps.related(o, c):
        raise PreconditionError("need o != c with o eps c")
    if n < 1:
        raise MalformedInputError("n must be at least 1")
    inside = delta_.array == delta_.array[o]
    grid = np.ones((a.size,) * n, dtype=bool)
    for i in range(n):
        shape = [1] * n
        shape[i] = a.size
        grid &= inside.reshape(shape)
    return FnTable._wrap(n, a.size, np.where(grid, c, o))


def depends_on(f: FnTable, i: int) -> bool:
    """Whether ``f`` depends on its ``i``-th argument (0-based)."""
    t = f.table
    return bool((t != np.take(t, [0], axis=i)).any())


def essential_arity(f: FnTable) -> int:
    return sum(depends_on(f, i) for i in range(f.arity))


def is_absorbing_at(f: FnTable, point, o: int) -> bool:
    """``f(x) = o`` whenever some ``x_i`` equals ``point[i]``."""
    point = tuple(int(p) for p in point)
    if len(point) != f.arity:
        raise MalformedInputError("point has the wrong length")
    t = f.table
    for i, p in enumerate(point):
        if (np.take(t, p, axis=i) != o).any():
            return False
    return True
