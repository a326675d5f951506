"""Finite algebras given by operation tables.

Elements are the dense indices ``0..size-1``. An algebra is immutable; derived
data (congruence lists, Mal'cev terms, ...) is memoised on the instance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import (MalformedInputError, NotACongruenceError, SignatureError,
                     SizeLimitError)
from .tables import DTYPE, FnTable

DEFAULT_SIZE_CAP = 4096

GENERAL = "general"
EXPANDED_GROUP = "expanded-group"


@dataclass(frozen=True, eq=False)
class Operation:
    name: str
    arity: int
    table: np.ndarray  # shape (size,) * arity, read-only


class FiniteAlgebra:
    """A finite algebra ``(A, F)`` with ``A = {0..size-1}``.

    ``operations`` is a sequence of ``(name, arity, table)`` triples where
    ``table`` is anything numpy can reshape to ``(size,) * arity``.
    For ``kind="expanded-group"`` the ``group_reduct`` names the
    ``(plus, minus, zero)`` operations; the group axioms are verified.
    """

    def __init__(self, size: int, operations: Iterable, kind: str = GENERAL,
                 group_reduct: Sequence[str] | None = None, name: str = "",
                 max_size: int = DEFAULT_SIZE_CAP, _trusted: bool = False):
        if not isinstance(size, (int, np.integer)) or size < 1:
            raise MalformedInputError(f"size must be a positive integer, got {size!r}")
        size = int(size)
        if size > max_size:
            raise SizeLimitError(f"universe size {size} exceeds cap {max_size}")
        if kind not in (GENERAL, EXPANDED_GROUP):
            raise MalformedInputError(f"unknown kind {kind!r}")
        ops = []
        seen = set()
        for entry in operations:
            op_name, arity, table = entry
            if op_name in seen:
                raise MalformedInputError(f"duplicate operation name {op_name!r}")
            seen.add(op_name)
            arity = int(arity)
            if arity < 0:
                raise MalformedInputError(f"{op_name}: negative arity")
            arr = np.array(table, dtype=np.int64)
            if arr.size != size ** arity:
                raise MalformedInputError(
                    f"{op_name}: table length {arr.size} != {size}**{arity}")
            if not _trusted and (arr.min() < 0 or arr.max() >= size):
                raise MalformedInputError(f"{op_name}: table entry outside 0..{size - 1}")
            arr = arr.astype(DTYPE).reshape((size,) * arity)
            arr.setflags(write=False)
            ops.append(Operation(str(op_name), arity, arr))
        self.size = size
        self.ops: tuple[Operation, ...] = tuple(ops)
        self.kind = kind
        self.name = name
        self.group_reduct: tuple[str, str, str] | None = None
        self._cache: dict = {}
        if kind == EXPANDED_GROUP:
            if group_reduct is None or len(group_reduct) != 3:
                raise MalformedInputError("expanded group needs group_reduct (plus, minus, zero)")
            self.group_reduct = tuple(group_reduct)
            plus, minus, zero = (self.op(n) for n in self.group_reduct)
            if (plus.arity, minus.arity, zero.arity) != (2, 1, 0):
                raise MalformedInputError("group reduct arities must be (2, 1, 0)")
            if not _trusted:
                _check_group(plus.table, minus.table, int(zero.table))

    # -- accessors -------------------------------------------------------

    def op(self, name: str) -> Operation:
        for o in self.ops:
            if o.name == name:
                return o
        raise KeyError(name)

    @property
    def signature(self) -> tuple[tuple[str, int], ...]:
        return tuple((o.name, o.arity) for o in self.ops)

    @property
    def is_expanded_group(self) -> bool:
        return self.kind == EXPANDED_GROUP

    @property
    def is_group(self) -> bool:
        """True for an expanded group with no operations beyond its group reduct."""
        return self.is_expanded_group and len(self.ops) == 3

    @property
    def plus(self) -> np.ndarray:
        return self.op(self.group_reduct[0]).table

    @property
    def minus(self) -> np.ndarray:
        return self.op(self.group_reduct[1]).table

    @property
    def zero(self) -> int:
        return int(self.op(self.group_reduct[2]).table)

    def sub(self, x, y):
        """Group difference ``x - y`` (i.e. ``x + (-y)``); works elementwise on arrays."""
        return self.plus[x, self.minus[y]]

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<FiniteAlgebra{label} size={self.size} kind={self.kind} ops={list(self.signature)}>"

    # -- serialisation ---------------------------------------------------

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "size": self.size,
            "kind": self.kind,
            "operations": [
                {"name": o.name, "arity": o.arity,
                 "table": int(o.table) if o.arity == 0 else o.table.tolist()}
                for o in self.ops
            ],
        }
        if self.group_reduct:
            out["group_reduct"] = dict(zip(("plus", "minus", "zero"), self.group_reduct))
        return out

    @classmethod
    def from_json(cls, data: dict, max_size: int = DEFAULT_SIZE_CAP) -> "FiniteAlgebra":
        try:
            reduct = data.get("group_reduct")
            if reduct is not None:
                reduct = (reduct["plus"], reduct["minus"], reduct["zero"])
            ops = [(o["name"], o["arity"], o["table"]) for o in data["operations"]]
            return cls(data["size"], ops, kind=data.get("kind", GENERAL),
                       group_reduct=reduct, name=data.get("name", ""), max_size=max_size)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MalformedInputError):
                raise
            raise MalformedInputError(f"bad algebra description: {exc}") from exc


def load_algebra(path, max_size: int = DEFAULT_SIZE_CAP) -> FiniteAlgebra:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedInputError(f"{path}: {exc}") from exc
    return FiniteAlgebra.from_json(data, max_size=max_size)


def dump_algebra(a: FiniteAlgebra, path) -> None:
    with open(path, "w") as fh:
        json.dump(a.to_json(), fh)


def _check_group(plus: np.ndarray, minus: np.ndarray, zero: int) -> None:
    n = plus.shape[0]
    idx = np.arange(n)
    if not (np.array_equal(plus[zero], idx) and np.array_equal(plus[:, zero], idx)):
        raise MalformedInputError("group reduct: zero is not a two-sided identity")
    if not (np.all(plus[idx, minus] == zero) and np.all(plus[minus, idx] == zero)):
        raise MalformedInputError("group reduct: minus is not a two-sided inverse")
    step = max(1, 2 ** 22 // (n * n))
    for lo in range(0, n, step):
        xs = idx[lo:lo + step]
        left = plus[plus[xs][:, :, None], idx[None, None, :]]
        right = plus[xs[:, None, None], plus[None, :, :]]
        if not np.array_equal(left, right):
            raise MalformedInputError("group reduct: plus is not associative")


# -- constructions -------------------------------------------------------


@dataclass(frozen=True)
class AbelianSpec:
    """Direct product of cyclic groups of the given orders."""

    cyclic_orders: tuple[int, ...]

    def __init__(self, cyclic_orders: Iterable[int]):
        orders = tuple(int(k) for k in cyclic_orders)
        if not orders or any(k < 2 for k in orders):
            raise MalformedInputError("cyclic orders must be a non-empty list of integers >= 2")
        object.__setattr__(self, "cyclic_orders", orders)

    @property
    def order(self) -> int:
        return math.prod(self.cyclic_orders)

    def __str__(self):
        return " x ".join(f"Z{k}" for k in self.cyclic_orders)


def make_abelian(spec: AbelianSpec | Sequence[int], max_size: int = DEFAULT_SIZE_CAP) -> FiniteAlgebra:
    """The group ``Z_{k1} x ... x Z_{kr}`` with ops ``add``, ``neg``, ``zero``.

    Elements are numbered in mixed radix with the first factor most
    significant, so for ``[4, 2]`` the pair ``(a, b)`` has index ``2a + b``.
    """
    if not isinstance(spec, AbelianSpec):
        spec = AbelianSpec(spec)
    orders = spec.cyclic_orders
    n = spec.order
    if n > max_size:
        raise SizeLimitError(f"group order {n} exceeds cap {max_size}")
    coords = np.array(np.unravel_index(np.arange(n), orders))  # (r, n)
    mod = np.array(orders)[:, None]
    add = np.ravel_multi_index(tuple((coords[:, :, None] + coords[:, None, :]) % mod[:, :, None]), orders)
    neg = np.ravel_multi_index(tuple((-coords) % mod), orders)
    return FiniteAlgebra(n, [("add", 2, add), ("neg", 1, neg), ("zero", 0, 0)],
                         kind=EXPANDED_GROUP, group_reduct=("add", "neg", "zero"),
                         name=str(spec), max_size=max_size, _trusted=True)


def direct_product(a: FiniteAlgebra, b: FiniteAlgebra, max_size: int = DEFAULT_SIZE_CAP) -> FiniteAlgebra:
    """``a x b`` with the pair ``(x, y)`` encoded as ``x * |B| + y``."""
    if a.signature != b.signature:
        raise SignatureError(f"signatures differ: {a.signature} vs {b.signature}")
    na, nb = a.size, b.size
    if na * nb > max_size:
        raise SizeLimitError(f"product size {na * nb} exceeds cap {max_size}")
    ops = []
    for oa, ob in zip(a.ops, b.ops):
        k = oa.arity
        if k == 0:
            ops.append((oa.name, 0, int(oa.table) * nb + int(ob.table)))
            continue
        # argument i of the product op is the pair (x_i, y_i); interleave axes
        ta = oa.table.reshape(oa.table.shape + (1,) * k)
        tb = ob.table.reshape((1,) * k + ob.table.shape)
        t = (ta.astype(np.int64) * nb + tb)  # axes (x1..xk, y1..yk)
        order = [ax for i in range(k) for ax in (i, k + i)]
        t = t.transpose(order).reshape((na * nb,) * k)
        ops.append((oa.name, k, t))
    kind = EXPANDED_GROUP if (a.is_expanded_group and b.is_expanded_group
                              and a.group_reduct == b.group_reduct) else GENERAL
    name = f"{a.name} x {b.name}" if a.name and b.name else ""
    return FiniteAlgebra(na * nb, ops, kind=kind,
                         group_reduct=a.group_reduct if kind == EXPANDED_GROUP else None,
                         name=name, max_size=max_size, _trusted=True)


def quotient(a: FiniteAlgebra, theta) -> FiniteAlgebra:
    """``a / theta``; blocks are numbered in order of their smallest member."""
    from .congruence import is_congruence

    if theta.size != a.size:
        raise MalformedInputError("congruence and algebra sizes differ")
    if not is_congruence(a, theta):
        raise NotACongruenceError("partition is not preserved by the operations")
    labels = theta.array
    reps = np.unique(labels)
    block = np.empty(a.size, dtype=np.int64)
    block[reps] = np.arange(len(reps))
    block = block[labels]
    ops = []
    for o in a.ops:
        if o.arity == 0:
            ops.append((o.name, 0, int(block[int(o.table)])))
        else:
            sub = o.table[np.ix_(*([reps] * o.arity))]
            ops.append((o.name, o.arity, block[sub]))
    return FiniteAlgebra(len(reps), ops, kind=a.kind, group_reduct=a.group_reduct,
                         name=f"{a.name}/~" if a.name else "", _trusted=True)


def subalgebra(a: FiniteAlgebra, members: Iterable[int]) -> FiniteAlgebra:
    """The subalgebra on ``members`` (reindexed in increasing order)."""
    mem = np.array(sorted(set(int(m) for m in members)), dtype=np.int64)
    pos = np.full(a.size, -1, dtype=np.int64)
    pos[mem] = np.arange(len(mem))
    ops = []
    for o in a.ops:
        if o.arity == 0:
            vals = np.array(int(o.table))
        else:
            vals = o.table[np.ix_(*([mem] * o.arity))]
        img = pos[vals]
        if np.any(img < 0):
            raise MalformedInputError(f"subset is not closed under {o.name}")
        ops.append((o.name, o.arity, int(img) if o.arity == 0 else img))
    return FiniteAlgebra(len(mem), ops, kind=a.kind, group_reduct=a.group_reduct,
                         _trusted=True)


def group_from_cayley(table, name: str = "") -> FiniteAlgebra:
    """Wrap a Cayley table as an expanded group with ops ``mul``, ``inv``, ``e``."""
    t = np.array(table, dtype=np.int64)
    n = t.shape[0]
    if t.shape != (n, n):
        raise MalformedInputError("Cayley table must be square")
    idx = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(t[e], idx) and np.array_equal(t[:, e], idx)]
    if not ids:
        raise MalformedInputError("Cayley table has no identity")
    e = ids[0]
    inv = np.full(n, -1, dtype=np.int64)
    for x in range(n):
        hits = np.flatnonzero(t[x] == e)
        if len(hits) != 1:
            raise MalformedInputError(f"element {x} has no unique inverse")
        inv[x] = hits[0]
    return FiniteAlgebra(n, [("mul", 2, t), ("inv", 1, inv), ("e", 0, e)],
                         kind=EXPANDED_GROUP, group_reduct=("mul", "inv", "e"), name=name)


# -- Mal'cev terms -------------------------------------------------------


def is_malcev(m: FnTable) -> bool:
    if m.arity != 3:
        return False
    n = m.size
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    t = m.table
    return bool(np.all(t[i, i, j] == j) and np.all(t[j, i, i] == j))


def find_malcev_term(a: FiniteAlgebra, budget: int = 2000) -> FnTable | None:
    """A ternary term operation satisfying m(x,x,y) = y = m(y,x,x), or ``None``.

    Expanded groups return ``x - y + z`` directly. Otherwise ternary term
    tables are generated breadth-first from the projections; ``None`` means
    no such term was found among the first ``budget`` new tables.
    """
    key = ("malcev", budget)
    if key in a._cache:
        return a._cache[key]
    n = a.size
    if a.is_expanded_group:
        x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
        m = FnTable._wrap(3, n, a.plus[a.sub(x, y), z])
        a._cache[key] = m
        return m
    result = None
    known: dict[bytes, np.ndarray] = {}
    order: list[np.ndarray] = []

    def add(t: np.ndarray) -> bool:
        k = t.tobytes()
        if k in known:
            return False
        known[k] = t
        order.append(t)
        return True

    for p in range(1, 4):
        add(np.ascontiguousarray(FnTable.projection(n, 3, p).values))
    for o in a.ops:
        if o.arity == 0:
            add(np.full(n ** 3, int(o.table), dtype=DTYPE))
    produced = 0
    frontier_start = 0
    for t in order:
        if is_malcev(FnTable._wrap(3, n, t)):
            result = FnTable._wrap(3, n, t)
    while result is None and frontier_start < len(order) and produced < budget:
        old, end = frontier_start, len(order)
        frontier_start = end
        snapshot = order[:end]
        for o in a.ops:
            if o.arity == 0 or result is not None or produced >= budget:
                continue
            for combo in product(range(end), repeat=o.arity):
                if max(combo) < old:
                    continue
                t = o.table[tuple(snapshot[c] for c in combo)]
                if add(np.ascontiguousarray(t, dtype=DTYPE)):
                    produced += 1
                    cand = FnTable._wrap(3, n, t)
                    if is_malcev(cand):
                        result = cand
                        break
                    if produced >= budget:
                        break
    a._cache[key] = result
    return result
