"""Finitary functions on a finite universe stored as dense value tables."""

from __future__ import annotations

import json
from typing import Callable, Iterable

import numpy as np

from .errors import MalformedInputError

DTYPE = np.int32


class FnTable:
    """An ``arity``-ary function on ``{0..size-1}``.

    The table is an ndarray of shape ``(size,) * arity`` (row-major, so
    ``values[i * size + j] == f(i, j)`` for a binary function). Instances are
    immutable and hash by ``(arity, size, values)``.
    """

    __slots__ = ("arity", "size", "table", "_key")

    def __init__(self, arity: int, size: int, values):
        if arity < 0 or size < 1:
            raise MalformedInputError(f"bad arity/size {arity}/{size}")
        arr = np.array(values, dtype=DTYPE)
        if arr.size != size ** arity:
            raise MalformedInputError(
                f"table has {arr.size} entries, expected {size}**{arity}")
        arr = arr.reshape((size,) * arity)
        if arr.size and (arr.min() < 0 or arr.max() >= size):
            raise MalformedInputError("table entry outside the universe")
        arr.setflags(write=False)
        self.arity = arity
        self.size = size
        self.table = arr
        self._key = (arity, size, arr.tobytes())

    @classmethod
    def _wrap(cls, arity: int, size: int, arr: np.ndarray) -> "FnTable":
        # trusted fast path for internally computed tables
        obj = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=DTYPE).reshape((size,) * arity)
        arr.setflags(write=False)
        obj.arity, obj.size, obj.table = arity, size, arr
        obj._key = (arity, size, arr.tobytes())
        return obj

    @classmethod
    def from_function(cls, size: int, arity: int, fn: Callable[..., int]) -> "FnTable":
        vals = [fn(*args) for args in np.ndindex(*((size,) * arity))]
        return cls(arity, size, [int(v) for v in vals])

    @classmethod
    def projection(cls, size: int, n: int, m: int) -> "FnTable":
        """The ``n``-ary projection onto argument ``m`` (1-based)."""
        if not 1 <= m <= n:
            raise MalformedInputError(f"projection index {m} out of 1..{n}")
        shape = [1] * n
        shape[m - 1] = size
        arr = np.broadcast_to(np.arange(size).reshape(shape), (size,) * n)
        return cls._wrap(n, size, arr)

    @classmethod
    def identity(cls, size: int) -> "FnTable":
        return cls.projection(size, 1, 1)

    @classmethod
    def constant(cls, size: int, value: int, arity: int = 1) -> "FnTable":
        return cls(arity, size, np.full(size ** arity, value))

    @property
    def values(self) -> np.ndarray:
        return self.table.reshape(-1)

    def __call__(self, *args: int) -> int:
        if len(args) != self.arity:
            raise TypeError(f"expected {self.arity} arguments, got {len(args)}")
        return int(self.table[tuple(args)])

    def __eq__(self, other):
        return isinstance(other, FnTable) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other: "FnTable"):
        # canonical order: arity first, then values lexicographically
        return (self.arity, tuple(self.values)) < (other.arity, tuple(other.values))

    def __repr__(self):
        vals = self.values.tolist()
        shown = vals if len(vals) <= 16 else vals[:16] + ["..."]
        return f"FnTable(arity={self.arity}, size={self.size}, values={shown})"

    def to_json(self) -> dict:
        return {"arity": self.arity, "size": self.size, "values": self.values.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "FnTable":
        try:
            return cls(int(data["arity"]), int(data["size"]), data["values"])
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"bad function table: {exc}") from exc


def load_tables(path) -> list[FnTable]:
    """Read one table or a list of tables from a JSON file."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedInputError(f"{path}: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("functions", [data]) if "arity" not in data else [data]
    if not isinstance(data, list):
        raise MalformedInputError(f"{path}: expected a table or a list of tables")
    return [FnTable.from_json(d) for d in data]


def dump_tables(tables: Iterable[FnTable], path) -> None:
    with open(path, "w") as fh:
        json.dump([t.to_json() for t in tables], fh)
