"""Term-condition commutator of congruences in Mal'cev algebras."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_SIZE_CAP, FiniteAlgebra, find_malcev_term
from .congruence import (Congruence, _components, all_congruences, generated_congruence,
                         index_of)
from .errors import InconclusiveError, MalformedInputError, SizeLimitError

MALCEV_BUDGET = 2000


def _require_malcev(a: FiniteAlgebra, budget: int) -> None:
    if find_malcev_term(a, budget) is None:
        raise InconclusiveError(f"no Mal'cev term found within budget {budget}")


def pair_algebra(a: FiniteAlgebra, alpha: Congruence, max_size: int = DEFAULT_SIZE_CAP):
    """``A(alpha)``: the subalgebra of ``A x A`` on alpha-related pairs.

    Returns the algebra and the ``(size, size)`` map from pairs to its elements
    (``-1`` off alpha).
    """
    lab = alpha.array
    xs, ys = np.nonzero(lab[:, None] == lab[None, :])
    m = len(xs)
    if m > max_size:
        raise SizeLimitError(f"A(alpha) has {m} elements, cap is {max_size}")
    pid = np.full((a.size, a.size), -1, dtype=np.int64)
    pid[xs, ys] = np.arange(m)
    ops = []
    for o in a.ops:
        if o.arity == 0:
            z = int(o.table)
            ops.append((o.name, 0, pid[z, z]))
            continue
        fx = o.table[np.ix_(*([xs] * o.arity))]
        fy = o.table[np.ix_(*([ys] * o.arity))]
        ops.append((o.name, o.arity, pid[fx, fy]))
    return FiniteAlgebra(m, ops, max_size=max_size, _trusted=True), pid


def binary_commutator(a: FiniteAlgebra, alpha: Congruence, beta: Congruence,
                      budget: int = MALCEV_BUDGET) -> Congruence:
    """``[alpha, beta]`` via the congruence Delta on ``A(alpha)``.

    Delta is generated by ``((b, b), (b', b'))`` for ``b beta b'``, and
    ``x [alpha, beta] y`` iff ``(x, x) Delta (x, y)``. The commutator is
    symmetric in Mal'cev algebras, so the pair algebra is built over the
    smaller of the two congruences.
    """
    if alpha.size != a.size or beta.size != a.size:
        raise MalformedInputError("congruence size does not match the algebra")
    _require_malcev(a, budget)
    key = ("comm", alpha, beta)
    if key in a._cache:
        return a._cache[key]
    n = a.size
    if alpha.is_zero() or beta.is_zero():
        res = Congruence.zero(n)
    else:
        small, other = (alpha, beta) if alpha.n_blocks >= beta.n_blocks else (beta, alpha)
        aa, pid = pair_algebra(a, small)
        diag = pid[np.arange(n), np.arange(n)]
        rb = other.array
        seeds = [(diag[rb[b]], diag[b]) for b in range(n) if rb[b] != b]
        delta = generated_congruence(aa, seeds).array
        xs, ys = np.nonzero(pid >= 0)
        hit = delta[diag[xs]] == delta[pid[xs, ys]]
        res = Congruence(_components(n, np.concatenate([np.arange(n), xs[hit]]),
                                     np.concatenate([np.arange(n), ys[hit]])), _canonical=True)
    a._cache[key] = res
    a._cache[("comm", beta, alpha)] = res
    return res


@dataclass
class CommutatorTable:
    algebra: FiniteAlgebra
    entries: dict  # (i, j) -> index into all_congruences


def commutator_table(a: FiniteAlgebra, budget: int = MALCEV_BUDGET) -> CommutatorTable:
    cons = all_congruences(a)
    entries = {}
    for i, al in enumerate(cons):
        for j in range(i, len(cons)):
            k = index_of(a, binary_commutator(a, al, cons[j], budget))
            entries[(i, j)] = entries[(j, i)] = k
    return CommutatorTable(a, entries)


def nilpotency_chain(a: FiniteAlgebra, budget: int = MALCEV_BUDGET) -> list[Congruence]:
    """``[1, 1], [1, [1, 1]], ...`` until the chain stabilises."""
    one = Congruence.one(a.size)
    chain = [binary_commutator(a, one, one, budget)]
    while True:
        nxt = binary_commutator(a, one, chain[-1], budget)
        if nxt == chain[-1]:
            return chain
        chain.append(nxt)


def is_nilpotent(a: FiniteAlgebra, budget: int = MALCEV_BUDGET) -> bool:
    return nilpotency_chain(a, budget)[-1].is_zero()


def is_abelian(a: FiniteAlgebra, budget: int = MALCEV_BUDGET) -> bool:
    one = Congruence.one(a.size)
    return binary_commutator(a, one, one, budget).is_zero()
