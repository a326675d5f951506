"""Congruences: principal generation, the full lattice, compatibility checks.

A congruence is stored as a label array sending each element to the smallest
member of its block.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import MalformedInputError
from .lattice import FiniteLattice, _cover_matrix
from .tables import FnTable


class Congruence:
    __slots__ = ("array", "size", "_key")

    def __init__(self, labels, _canonical: bool = False):
        arr = np.asarray(labels, dtype=np.int64)
        if not _canonical:
            arr = _canonical_labels(arr)
        arr.setflags(write=False)
        self.array = arr
        self.size = len(arr)
        self._key = arr.tobytes()

    @classmethod
    def from_blocks(cls, size: int, blocks: Iterable[Iterable[int]]) -> "Congruence":
        lab = np.arange(size)
        seen = np.zeros(size, dtype=bool)
        for blk in blocks:
            blk = sorted(int(x) for x in blk)
            if not blk:
                continue
            if min(blk) < 0 or max(blk) >= size or seen[blk].any():
                raise MalformedInputError("blocks must be disjoint subsets of the universe")
            seen[blk] = True
            lab[blk] = blk[0]
        return cls(lab, _canonical=True)

    @classmethod
    def zero(cls, size: int) -> "Congruence":
        return cls(np.arange(size), _canonical=True)

    @classmethod
    def one(cls, size: int) -> "Congruence":
        return cls(np.zeros(size, dtype=np.int64), _canonical=True)

    @property
    def n_blocks(self) -> int:
        return int(np.count_nonzero(self.array == np.arange(self.size)))

    def blocks(self) -> list[list[int]]:
        """Blocks sorted by smallest member."""
        out: dict[int, list[int]] = {}
        for x, r in enumerate(self.array.tolist()):
            out.setdefault(r, []).append(x)
        return [out[r] for r in sorted(out)]

    def block_of(self, x: int) -> list[int]:
        return np.flatnonzero(self.array == self.array[x]).tolist()

    def related(self, x: int, y: int) -> bool:
        return bool(self.array[x] == self.array[y])

    def __le__(self, other: "Congruence") -> bool:
        _same_size(self, other)
        return bool(np.array_equal(other.array[self.array], other.array))

    def __ge__(self, other: "Congruence") -> bool:
        return other <= self

    def __eq__(self, other):
        return isinstance(other, Congruence) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def sort_key(self):
        return (-self.n_blocks, tuple(self.array.tolist()))

    def is_zero(self) -> bool:
        return self.n_blocks == self.size

    def is_one(self) -> bool:
        return self.n_blocks == 1

    def __repr__(self):
        return "Congruence(" + "|".join(",".join(map(str, b)) for b in self.blocks()) + ")"


def _same_size(c1: Congruence, c2: Congruence) -> None:
    if c1.size != c2.size:
        raise MalformedInputError(f"universe sizes differ: {c1.size} vs {c2.size}")


def _canonical_labels(lab: np.ndarray) -> np.ndarray:
    """Relabel an arbitrary block labelling so each element maps to its block minimum."""
    _, inv = np.unique(lab, return_inverse=True)
    mins = np.full(inv.max() + 1 if len(inv) else 0, len(lab), dtype=np.int64)
    np.minimum.at(mins, inv, np.arange(len(lab)))
    return mins[inv]


def _components(n: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    g = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, comp = connected_components(g, directed=True, connection="weak")
    mins = np.full(comp.max() + 1, n, dtype=np.int64)
    np.minimum.at(mins, comp, np.arange(n))
    return mins[comp]


def join(c1: Congruence, c2: Congruence) -> Congruence:
    """Transitive closure of the union."""
    _same_size(c1, c2)
    r1, r2 = c1.array, c2.array
    lab = np.minimum(r1, r2)
    mins = np.empty_like(lab)
    while True:
        # alternately take block minima under each partition until stable
        prev = lab
        for r in (r1, r2):
            mins[:] = lab
            np.minimum.at(mins, r, lab)
            lab = mins[r]
        if np.array_equal(lab, prev):
            return Congruence(lab, _canonical=True)


def meet(c1: Congruence, c2: Congruence) -> Congruence:
    """Blockwise intersection."""
    _same_size(c1, c2)
    return Congruence(c1.array * c1.size + c2.array)


# -- generation ----------------------------------------------------------


def translations(a) -> np.ndarray:
    """All distinct basic translations of ``a`` as rows of a ``(k, size)`` array."""
    if "translations" in a._cache:
        return a._cache["translations"]
    n = a.size
    rows = []
    for o in a.ops:
        for i in range(o.arity):
            rows.append(np.moveaxis(o.table, i, -1).reshape(-1, n))
    if rows:
        t = np.unique(np.concatenate(rows), axis=0)
        t = t[~(t == np.arange(n)).all(axis=1)]  # drop the identity
    else:
        t = np.empty((0, n), dtype=np.int32)
    t = np.ascontiguousarray(t, dtype=np.int64)
    a._cache["translations"] = t
    return t


def close_labels(a, lab: np.ndarray) -> np.ndarray:
    """Smallest congruence above the equivalence given by canonical labels ``lab``."""
    T = translations(a)
    n = a.size
    idx = np.arange(n)
    if len(T) == 0:
        return lab
    while True:
        img = lab[T]  # label of t(x)
        img_rep = lab[T[:, lab]]  # label of t(rep(x))
        diff = img != img_rep
        if not diff.any():
            return lab
        src = np.concatenate([idx, img[diff]])
        dst = np.concatenate([lab, img_rep[diff]])
        lab = _components(n, src, dst)


def generated_congruence(a, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """The least congruence containing every pair."""
    n = a.size
    pairs = list(pairs)
    for x, y in pairs:
        if not (0 <= x < n and 0 <= y < n):
            raise MalformedInputError(f"pair ({x}, {y}) outside the universe")
    idx = np.arange(n)
    if pairs:
        p = np.array(pairs, dtype=np.int64)
        lab = _components(n, np.concatenate([idx, p[:, 0]]), np.concatenate([idx, p[:, 1]]))
    else:
        lab = idx.copy()
    return Congruence(close_labels(a, lab), _canonical=True)


def principal_congruence(a, x: int, y: int) -> Congruence:
    """``Cg(x, y)``."""
    return generated_congruence(a, [(x, y)])


def principal_congruences(a) -> list[Congruence]:
    """Distinct nonzero principal congruences.

    In an expanded group ``Cg(x, y) = Cg(x - y, 0)``, so only pairs with 0 are needed.
    """
    if "principal" in a._cache:
        return a._cache["principal"]
    n = a.size
    if a.is_expanded_group:
        z = a.zero
        seeds = [(z, t) for t in range(n) if t != z]
    else:
        seeds = [(x, y) for x in range(n) for y in range(x + 1, n)]
    found: dict[Congruence, None] = {}
    for x, y in seeds:
        c = principal_congruence(a, x, y)
        found.setdefault(c, None)
    out = sorted(found, key=Congruence.sort_key)
    a._cache["principal"] = out
    return out


def all_congruences(a) -> list[Congruence]:
    """Every congruence of ``a`` in canonical order (most blocks first, then labels)."""
    if "con" in a._cache:
        return a._cache["con"]
    n = a.size
    prin = principal_congruences(a)
    zero = Congruence.zero(n)
    known = {zero: None}
    for p in prin:
        known.setdefault(p, None)
    work = list(known)
    k = 0
    while k < len(work):
        th = work[k]
        k += 1
        for p in prin:
            if p <= th:
                continue
            j = join(th, p)
            if j not in known:
                known[j] = None
                work.append(j)
    out = sorted(known, key=Congruence.sort_key)
    a._cache["con"] = out
    return out


def congruence_lattice(a) -> tuple[list[Congruence], FiniteLattice]:
    """The congruences with their lattice; element ids index the list."""
    if "conlat" in a._cache:
        return a._cache["conlat"]
    cons = all_congruences(a)
    M = np.stack([c.array for c in cons])
    m = len(cons)
    leq = np.empty((m, m), dtype=bool)
    for i in range(m):
        # i <= j iff labels of j are constant on blocks of i
        leq[i] = (M[:, M[i]] == M).all(axis=1)
    res = (cons, FiniteLattice(leq, check=False))
    a._cache["conlat"] = res
    return res


def index_of(a, theta: Congruence) -> int:
    cons = all_congruences(a)
    try:
        return cons.index(theta)
    except ValueError:
        raise MalformedInputError("not a congruence of this algebra") from None


def join_irreducibles(a) -> list[Congruence]:
    """Congruences with exactly one lower cover."""
    if "ji" not in a._cache:
        cons, lat = congruence_lattice(a)
        cov = _cover_matrix(lat)
        a._cache["ji"] = [cons[k] for k in np.flatnonzero(cov.sum(axis=0) == 1)]
    return a._cache["ji"]


# -- compatibility -------------------------------------------------------


def preserves(table: np.ndarray, lab: np.ndarray) -> bool:
    """Whether the function with ``table`` preserves the partition ``lab``."""
    k = table.ndim
    if k == 0:
        return True
    moved = table[np.ix_(*([lab] * k))]
    return bool(np.array_equal(lab[table], lab[moved]))


def is_congruence(a, theta: Congruence) -> bool:
    if theta.size != a.size:
        return False
    return all(preserves(o.table, theta.array) for o in a.ops)


def is_compatible(a, f: FnTable) -> bool:
    """Whether ``f`` preserves every congruence of ``a``.

    Only join-irreducible congruences are checked: a function preserving two
    equivalences preserves their join, and every congruence is a join of
    join-irreducibles.
    """
    if f.size != a.size:
        raise MalformedInputError(f"function on {f.size} elements, algebra has {a.size}")
    return all(preserves(f.table, th.array) for th in join_irreducibles(a))


def to_blocks_json(theta: Congruence) -> list[list[int]]:
    return theta.blocks()
