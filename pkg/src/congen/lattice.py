"""Shape analysis of finite lattices given by their order relation.

A ``FiniteLattice`` carries opaque element ids (usually indices into a list of
congruences or ideals) and a boolean ``leq`` matrix indexed by position. All
public functions take and return ids, never positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CongenError, MalformedInputError, UnsupportedShapeError


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    def contains(self, lat: "FiniteLattice", c: int) -> bool:
        return lat.le(self.lo, c) and lat.le(c, self.hi)


class FiniteLattice:
    def __init__(self, leq, ids: Sequence[int] | None = None, labels: Sequence[str] | None = None,
                 check: bool = True, _tables=None):
        leq = np.array(leq, dtype=bool)
        m = leq.shape[0]
        if leq.shape != (m, m) or m == 0:
            raise MalformedInputError("leq must be a non-empty square matrix")
        self.leq = leq
        self.leq.setflags(write=False)
        self.elements: tuple[int, ...] = tuple(range(m)) if ids is None else tuple(int(i) for i in ids)
        if len(self.elements) != m or len(set(self.elements)) != m:
            raise MalformedInputError("ids must be distinct and match leq")
        self.labels = None if labels is None else tuple(labels)
        self._pos = {e: k for k, e in enumerate(self.elements)}
        if check:
            if not leq.diagonal().all():
                raise MalformedInputError("leq is not reflexive")
            if (leq & leq.T & ~np.eye(m, dtype=bool)).any():
                raise MalformedInputError("leq is not antisymmetric")
            li = leq.astype(np.int64)
            if ((li @ li > 0) & ~leq).any():
                raise MalformedInputError("leq is not transitive")
        if _tables is not None:
            self._join, self._meet = _tables
        else:
            self._join = _bound_table(leq, check)
            self._meet = _bound_table(leq.T, check)
        bottoms = np.flatnonzero(leq.all(axis=1))
        tops = np.flatnonzero(leq.all(axis=0))
        if len(bottoms) != 1 or len(tops) != 1:
            raise MalformedInputError("order has no least or greatest element")
        self.bottom = self.elements[bottoms[0]]
        self.top = self.elements[tops[0]]
        self._cache: dict = {}

    # -- id helpers ------------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def pos(self, e: int) -> int:
        try:
            return self._pos[e]
        except KeyError:
            raise MalformedInputError(f"{e} is not an element of this lattice") from None

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[self.pos(a), self.pos(b)])

    def join(self, a: int, b: int) -> int:
        return self.elements[self._join[self.pos(a), self.pos(b)]]

    def meet(self, a: int, b: int) -> int:
        return self.elements[self._meet[self.pos(a), self.pos(b)]]

    @property
    def join_table(self) -> np.ndarray:
        """Join by position."""
        return self._join

    @property
    def meet_table(self) -> np.ndarray:
        return self._meet

    def label(self, e: int) -> str:
        return self.labels[self.pos(e)] if self.labels else str(e)

    def interval(self, lo: int, hi: int) -> "FiniteLattice":
        """The sublattice ``I[lo, hi]``, keeping element ids."""
        p, q = self.pos(lo), self.pos(hi)
        if not self.leq[p, q]:
            raise MalformedInputError(f"{lo} is not below {hi}")
        keep = np.flatnonzero(self.leq[p] & self.leq[:, q])
        labels = [self.labels[k] for k in keep] if self.labels else None
        # intervals are closed under join and meet, so the tables restrict
        local = np.full(len(self), -1, dtype=np.int64)
        local[keep] = np.arange(len(keep))
        sub = np.ix_(keep, keep)
        return FiniteLattice(self.leq[sub], [self.elements[k] for k in keep], labels, check=False,
                             _tables=(local[self._join[sub]], local[self._meet[sub]]))

    def __repr__(self):
        return f"<FiniteLattice with {len(self)} elements>"


def _bound_table(leq: np.ndarray, check: bool = True) -> np.ndarray:
    """Least upper bounds by position (pass ``leq.T`` for meets).

    The candidate for ``a v b`` is the common upper bound with the smallest
    down-set; ``check`` confirms it lies below every other upper bound.
    """
    m = leq.shape[0]
    order = np.argsort(leq.sum(axis=0), kind="stable")  # a linear extension
    srt = leq[:, order]
    rows = np.arange(m)
    out = np.empty((m, m), dtype=np.int64)
    for a in range(m):
        ub = srt[a][None, :] & srt  # ub[b, k]: a and b lie below order[k]
        k = ub.argmax(axis=1)
        u = order[k]
        if not ub[rows, k].all() or (check and (ub & ~leq[u][:, order]).any()):
            raise MalformedInputError("order is not a lattice (missing join or meet)")
        out[a] = u
    return out


# -- constructors --------------------------------------------------------


def from_covers(n: int, covers: Iterable[tuple[int, int]], labels=None) -> FiniteLattice:
    """Lattice on ``0..n-1`` from its Hasse diagram ``(lo, hi)`` pairs."""
    leq = np.eye(n, dtype=bool)
    for lo, hi in covers:
        leq[lo, hi] = True
    for k in range(n):  # Warshall
        leq |= leq[:, k:k + 1] & leq[k:k + 1, :]
    return FiniteLattice(leq, labels=labels)


def chain(k: int) -> FiniteLattice:
    """The ``k``-element chain ``0 < 1 < ... < k-1``."""
    idx = np.arange(k)
    return FiniteLattice(idx[:, None] <= idx[None, :])


def m2() -> FiniteLattice:
    """The four-element Boolean lattice: 0 < 1, 2 < 3."""
    return from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


def m3() -> FiniteLattice:
    """The diamond: 0 < 1, 2, 3 < 4."""
    return from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])


def n5() -> FiniteLattice:
    """The pentagon: 0 < 1 < 2 < 4 and 0 < 3 < 4."""
    return from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])


def as_algebra(lat: FiniteLattice):
    """``(L; join, meet)`` as a general algebra on positions."""
    from .algebra import FiniteAlgebra

    return FiniteAlgebra(len(lat), [("join", 2, lat.join_table), ("meet", 2, lat.meet_table)],
                         _trusted=True)


# -- analysis ------------------------------------------------------------


def _cover_matrix(lat: FiniteLattice) -> np.ndarray:
    if "cov" not in lat._cache:
        lt = lat.leq & ~np.eye(len(lat), dtype=bool)
        lf = lt.astype(np.float32)  # BLAS product; path counts stay far below 2**24
        lat._cache["cov"] = lt & ((lf @ lf) == 0)
    return lat._cache["cov"]


def covers(lat: FiniteLattice) -> list[tuple[int, int]]:
    """All covering pairs ``(lo, hi)``, sorted by position."""
    p, q = np.nonzero(_cover_matrix(lat))
    return [(lat.elements[a], lat.elements[b]) for a, b in zip(p, q)]


def height(lat: FiniteLattice, e: int) -> int:
    """Length of the longest chain from the bottom to ``e``."""
    if "ht" not in lat._cache:
        cov = _cover_matrix(lat)
        order = np.argsort(lat.leq.sum(axis=0), kind="stable")  # down-set size is a linear extension
        ht = np.zeros(len(lat), dtype=np.int64)
        for b in order:
            below = np.flatnonzero(cov[:, b])
            if len(below):
                ht[b] = ht[below].max() + 1
        lat._cache["ht"] = ht
    return int(lat._cache["ht"][lat.pos(e)])


def is_modular(lat: FiniteLattice) -> bool:
    """Via heights: modular iff ``h(x) + h(y) = h(x v y) + h(x ^ y)`` for all pairs.

    An N5 inside would give comparable ``a < b`` of equal height, which
    longest-chain heights rule out; modular lattices are graded and satisfy it.
    """
    if "mod" not in lat._cache:
        height(lat, lat.bottom)
        h = lat._cache["ht"]
        lat._cache["mod"] = bool((h[:, None] + h[None, :] == h[lat._join] + h[lat._meet]).all())
    return lat._cache["mod"]


def _require_modular(lat: FiniteLattice, what: str) -> None:
    if not is_modular(lat):
        raise UnsupportedShapeError(f"{what} requires a modular lattice")


def cutting_elements(lat: FiniteLattice) -> list[int]:
    """Elements comparable to every element, ascending."""
    cut = np.flatnonzero((lat.leq | lat.leq.T).all(axis=1))
    cut = sorted(cut, key=lambda k: lat.leq[:, k].sum())
    return [lat.elements[k] for k in cut]


def splitting_pairs(lat: FiniteLattice) -> list[tuple[int, int]]:
    """All ``(delta, eps)`` with delta < 1, eps > 0 and each x <= delta or x >= eps."""
    nl = (~lat.leq).astype(np.float64)  # nl[x, d]: not x <= d
    nge = (~lat.leq.T).astype(np.float64)  # nge[x, e]: not e <= x
    bad = nl.T @ nge
    ok = bad == 0
    ok[lat.pos(lat.top), :] = False
    ok[:, lat.pos(lat.bottom)] = False
    d, e = np.nonzero(ok)
    return [(lat.elements[a], lat.elements[b]) for a, b in zip(d, e)]


def splitting_pair(lat: FiniteLattice) -> tuple[int, int] | None:
    """The first splitting pair in element order, or ``None`` if the lattice does not split."""
    pairs = splitting_pairs(lat)
    return pairs[0] if pairs else None


def is_splitting_pair(lat: FiniteLattice, delta: int, eps: int) -> bool:
    if delta == lat.top or eps == lat.bottom:
        return False
    d, e = lat.pos(delta), lat.pos(eps)
    return bool((lat.leq[:, d] | lat.leq[e, :]).all())


def m2_intervals(lat: FiniteLattice) -> list[tuple[int, int]]:
    """All intervals ``(a, b)`` isomorphic to the four-element Boolean lattice."""
    li = lat.leq.astype(np.int64)
    size = li @ li
    out = []
    for a, b in zip(*np.nonzero(size == 4)):
        mid = np.flatnonzero(lat.leq[a] & lat.leq[:, b])
        mid = [k for k in mid if k != a and k != b]
        if not lat.leq[mid[0], mid[1]] and not lat.leq[mid[1], mid[0]]:
            out.append((lat.elements[a], lat.elements[b]))
    return out


def has_m2_interval(lat: FiniteLattice) -> bool:
    return bool(m2_intervals(lat))


def transposes_up(lat: FiniteLattice, a: int, b: int, c: int, d: int) -> bool:
    """``I[a, b]`` transposes up to ``I[c, d]``: a = b ^ c and d = b v c."""
    if not (lat.le(a, b) and lat.le(c, d)):
        raise MalformedInputError("arguments do not form intervals")
    return lat.meet(b, c) == a and lat.join(b, c) == d


def transposes_down(lat: FiniteLattice, a: int, b: int, c: int, d: int) -> bool:
    return transposes_up(lat, c, d, a, b)


def perspective(lat: FiniteLattice, a: int, b: int, c: int, d: int) -> bool:
    return transposes_up(lat, a, b, c, d) or transposes_down(lat, a, b, c, d)


def _projectivity(lat: FiniteLattice):
    """Component label of every prime interval under perspectivity."""
    if "proj" not in lat._cache:
        cov = _cover_matrix(lat)
        prime = list(zip(*np.nonzero(cov)))
        index = {p: k for k, p in enumerate(prime)}
        src, dst = [], []
        J, M = lat._join, lat._meet
        m = len(lat)
        cs = np.arange(m)
        for k, (a, b) in enumerate(prime):
            # [a, b] up to [c, b v c] whenever b ^ c = a
            for c in cs[M[b] == a]:
                t = index.get((c, J[b, c]))
                if t is not None:
                    src.append(k)
                    dst.append(t)
        g = coo_matrix((np.ones(len(src)), (src, dst)), shape=(len(prime), len(prime)))
        ncomp, comp = connected_components(g, directed=True, connection="weak")
        lat._cache["proj"] = (index, comp, ncomp)
    return lat._cache["proj"]


def projective(lat: FiniteLattice, p1: tuple[int, int], p2: tuple[int, int]) -> bool:
    """Whether two prime intervals are connected by a chain of perspectivities."""
    index, comp, _ = _projectivity(lat)
    keys = []
    for lo, hi in (p1, p2):
        key = (lat.pos(lo), lat.pos(hi))
        if key not in index:
            raise MalformedInputError(f"[{lo}, {hi}] is not a prime interval")
        keys.append(index[key])
    return bool(comp[keys[0]] == comp[keys[1]])


def projectivity_classes(lat: FiniteLattice) -> list[list[tuple[int, int]]]:
    index, comp, ncomp = _projectivity(lat)
    out = [[] for _ in range(ncomp)]
    for (a, b), k in index.items():
        out[comp[k]].append((lat.elements[a], lat.elements[b]))
    return out


def has_ap(lat: FiniteLattice) -> bool:
    """Prime intervals sharing their bottom are always projective."""
    _require_modular(lat, "(AP)")
    index, comp, _ = _projectivity(lat)
    cov = _cover_matrix(lat)
    for a in range(len(lat)):
        ups = [comp[index[(a, b)]] for b in np.flatnonzero(cov[a])]
        if len(set(ups)) > 1:
            return False
    return True


def is_simple_lattice(lat: FiniteLattice) -> bool:
    """Simplicity via projectivity of all prime intervals (modular lattices only).

    The one-element lattice is not simple.
    """
    _require_modular(lat, "simplicity test")
    if len(lat) == 1:
        return False
    return _projectivity(lat)[2] == 1


def coalesced_decomposition(lat: FiniteLattice) -> list[Interval]:
    """Intervals between consecutive cutting elements, each checked to be simple."""
    _require_modular(lat, "coalesced decomposition")
    if not has_ap(lat):
        raise UnsupportedShapeError("lattice does not have (AP)")
    cut = cutting_elements(lat)
    out = [Interval(lo, hi) for lo, hi in zip(cut, cut[1:])]
    for iv in out:
        if not is_simple_lattice(lat.interval(iv.lo, iv.hi)):
            raise CongenError(f"interval [{iv.lo}, {iv.hi}] is not simple")
    return out


# -- export --------------------------------------------------------------


def to_dot(lat: FiniteLattice, name: str = "L") -> str:
    """Hasse diagram; cutting elements are double circles, the splitting pair is filled."""
    cut = set(cutting_elements(lat))
    sp = splitting_pair(lat)
    colour = {}
    if sp is not None:
        colour[sp[0]] = "lightblue"
        colour[sp[1]] = "salmon"
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for e in lat.elements:
        attrs = [f'label="{lat.label(e)}"']
        if e in cut:
            attrs.append("shape=doublecircle")
        if e in colour:
            attrs.append(f'style=filled fillcolor="{colour[e]}"')
        lines.append(f"  n{e} [{' '.join(attrs)}];")
    for lo, hi in covers(lat):
        lines.append(f"  n{lo} -> n{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"
