"""Decide whether the clone of compatible functions is finitely generated.

Each ``decide_*`` function applies one criterion and raises
``InapplicableError`` when its hypotheses fail. ``decide`` chains them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import AbelianSpec, FiniteAlgebra, find_malcev_term, make_abelian, quotient, subalgebra
from .congruence import (Congruence, congruence_lattice, generated_congruence, join, meet,
                         principal_congruence)
from .errors import InapplicableError, InconclusiveError, SizeLimitError
from .lattice import (cutting_elements, is_modular, is_simple_lattice, is_splitting_pair, m2_intervals, splitting_pair)

FG = "finitely_generated"
NOT_FG = "not_finitely_generated"
FG_SUFFICIENT = "fg_sufficient"
INCONCLUSIVE = "inconclusive"

# criterion tags
ABELIAN = "abelian-sylow-closed-form"
PGROUP = "pgroup-cutting-intervals"
NILPOTENT = "nilpotent-sylow"
EXPANDED_SUFFICIENT = "expanded-group-sufficient"
EXPANDED_M2_FREE = "expanded-group-m2-free"
MALCEV_SIMPLE = "malcev-simple-lattice"
PRODUCT = "skew-free-product"


@dataclass
class FgVerdict:
    status: str
    theorem: str
    witnesses: dict = field(default_factory=dict)
    reason: str = ""
    attempts: list = field(default_factory=list)  # (theorem, outcome) tried before this one

    @property
    def is_fg(self) -> bool:
        return self.status == FG

    def to_json(self) -> dict:
        out = {"status": self.status, "theorem": self.theorem, "witnesses": self.witnesses}
        if self.reason:
            out["reason"] = self.reason
        if self.attempts:
            out["attempts"] = [list(t) for t in self.attempts]
        return out


# -- abelian groups in closed form ----------------------------------------


def _prime_powers(k: int) -> list[tuple[int, int]]:
    out, p = [], 2
    while p * p <= k:
        if k % p == 0:
            e = 0
            while k % p == 0:
                k //= p
                e += 1
            out.append((p, e))
        p += 1
    if k > 1:
        out.append((k, 1))
    return out


def sylow_components(spec: AbelianSpec) -> dict[int, list[int]]:
    """Prime -> exponents (descending) of the cyclic factors of that Sylow subgroup."""
    comps: dict[int, list[int]] = {}
    for k in spec.cyclic_orders:
        for p, e in _prime_powers(k):
            comps.setdefault(p, []).append(e)
    return {p: sorted(es, reverse=True) for p, es in sorted(comps.items())}


def _render(p: int, exps: list[int], shift: list[int]) -> str:
    parts = []
    for a, s in zip(exps, shift):
        m = p ** a
        if s <= 0:
            parts.append(f"Z{m}")
        elif s >= a:
            parts.append("{0}")
        else:
            parts.append(f"{p ** s}Z{m}")
    return " x ".join(parts)


def splitting_witness(p: int, exps: list[int]) -> dict:
    """The pair ``D = {x : p^(a1-1) x = 0}``, ``E = p^(a1-1) G`` for a Sylow component."""
    a1 = exps[0]
    d_shift = [a - a1 + 1 for a in exps]  # D is p^(a - a1 + 1) Z_{p^a} in each factor
    e_shift = [min(a1 - 1, a) for a in exps]
    wit = {"p": p, "component": [p ** a for a in exps],
           "D": _render(p, exps, d_shift), "E": _render(p, exps, e_shift)}
    order = p ** sum(exps)
    if order <= 4096:
        coords = np.array(np.unravel_index(np.arange(order), [p ** a for a in exps]))
        mods = np.array([p ** a for a in exps])[:, None]
        in_d = ((coords * p ** (a1 - 1)) % mods == 0).all(axis=0)
        in_e = (coords % np.array([p ** s for s in e_shift])[:, None] == 0).all(axis=0)
        wit["D_members"] = np.flatnonzero(in_d).tolist()
        wit["E_members"] = np.flatnonzero(in_e).tolist()
    return wit


def decide_abelian(spec: AbelianSpec) -> FgVerdict:
    """FG iff every Sylow component is cyclic or has its two largest exponents equal."""
    if not isinstance(spec, AbelianSpec):
        spec = AbelianSpec(spec)
    comps = sylow_components(spec)
    sylow = []
    failing = None
    for p, exps in comps.items():
        ok = len(exps) == 1 or exps[0] == exps[1]
        sylow.append({"p": p, "exponents": exps, "status": FG if ok else NOT_FG})
        if not ok and failing is None:
            failing = splitting_witness(p, exps)
    wit: dict = {"sylow": sylow}
    if failing is not None:
        wit["splitting_pair"] = failing
        return FgVerdict(NOT_FG, ABELIAN, wit,
                         f"Sylow {failing['p']}-component {failing['component']} is neither "
                         "cyclic nor has equal top exponents")
    return FgVerdict(FG, ABELIAN, wit)


# -- lattice based criteria ------------------------------------------------


def _describe(a: FiniteAlgebra, cons, k: int) -> dict:
    c = cons[k]
    if a.is_expanded_group:
        return {"id": k, "ideal": c.block_of(a.zero)}
    return {"id": k, "blocks": c.blocks()}


def _interval_scan(a: FiniteAlgebra):
    """Cutting chain and, for each consecutive interval, its size and first splitting pair."""
    cons, lat = congruence_lattice(a)
    chain = cutting_elements(lat)
    rows = []
    for lo, hi in zip(chain, chain[1:]):
        sub = lat.interval(lo, hi)
        rows.append((lo, hi, len(sub), splitting_pair(sub)))
    return cons, lat, chain, rows


def _chain_witness(a, cons, chain, rows) -> dict:
    return {
        "cutting_chain": [_describe(a, cons, k) for k in chain],
        "intervals": [{"lo": lo, "hi": hi, "size": size, "splits": sp is not None}
                      for lo, hi, size, sp in rows],
    }


def _pair_witness(a, cons, lo, hi, sp) -> dict:
    return {"interval": [lo, hi], "delta": _describe(a, cons, sp[0]),
            "eps": _describe(a, cons, sp[1])}


def _chain_verdict(a: FiniteAlgebra, theorem: str, allow_not_fg: bool) -> FgVerdict:
    cons, lat, chain, rows = _interval_scan(a)
    wit = _chain_witness(a, cons, chain, rows)
    bad = [(lo, hi, sp) for lo, hi, size, sp in rows if size > 2 and sp is not None]
    if not bad:
        return FgVerdict(FG, theorem, wit)
    lo, hi, sp = bad[0]
    wit["splitting_pair"] = _pair_witness(a, cons, lo, hi, sp)
    if allow_not_fg:
        return FgVerdict(NOT_FG, theorem, wit, f"interval [{lo}, {hi}] has more than two elements and splits")
    return FgVerdict(INCONCLUSIVE, theorem, wit, "condition fails but the lattice has an M2 interval")


def _prime_power(n: int) -> int | None:
    f = _prime_powers(n)
    return f[0][0] if len(f) == 1 else None


def decide_pgroup(a: FiniteAlgebra) -> FgVerdict:
    """Group of prime-power order: FG iff every interval between consecutive cutting normal
    subgroups has two elements or does not split."""
    if not a.is_group:
        raise InapplicableError("needs a group (no extra operations)")
    if a.size == 1 or _prime_power(a.size) is None:
        raise InapplicableError(f"group order {a.size} is not a prime power")
    return _chain_verdict(a, PGROUP, allow_not_fg=True)


def element_orders(a: FiniteAlgebra) -> np.ndarray:
    n, z = a.size, a.zero
    orders = np.zeros(n, dtype=np.int64)
    cur = np.arange(n)
    for k in range(1, n + 1):
        hit = (cur == z) & (orders == 0)
        orders[hit] = k
        if orders.all():
            break
        cur = a.plus[cur, np.arange(n)]
    return orders


def sylow_subgroups(a: FiniteAlgebra) -> dict[int, list[int]]:
    """For a nilpotent group: prime -> elements whose order is a power of it."""
    orders = element_orders(a)
    out = {}
    for p, _ in _prime_powers(a.size):
        keep = [x for x in range(a.size) if _is_power_of(int(orders[x]), p)]
        out[p] = keep
    return out


def _is_power_of(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def _group_commutator(a: FiniteAlgebra, n: np.ndarray) -> np.ndarray:
    """The subgroup ``[G, N]`` of a plain group; it equals the congruence commutator there."""
    g = np.arange(a.size)
    # g^-1 n^-1 g n
    comm = a.plus[a.plus[a.minus[g][:, None], a.minus[n][None, :]], g[:, None]]
    h = np.unique(a.plus[comm, n[None, :]])
    while True:
        nxt = np.unique(np.concatenate([h, a.plus[h[:, None], h[None, :]].ravel()]))
        if len(nxt) == len(h):
            return h
        h = nxt


def group_is_nilpotent(a: FiniteAlgebra) -> bool:
    """The lower central series of the group reaches the trivial subgroup."""
    cur = np.arange(a.size)
    while len(cur) > 1:
        nxt = _group_commutator(a, cur)
        if len(nxt) == len(cur):
            return False
        cur = nxt
    return True


def decide_nilpotent(a: FiniteAlgebra) -> FgVerdict:
    """Nilpotent group: FG iff every Sylow subgroup is."""
    if not a.is_group:
        raise InapplicableError("needs a group (no extra operations)")
    if not group_is_nilpotent(a):
        return FgVerdict(INCONCLUSIVE, NILPOTENT, {}, "group is not nilpotent")
    sylow = []
    status = FG
    first_bad = None
    for p, members in sylow_subgroups(a).items():
        sub = subalgebra(a, members)
        v = decide_pgroup(sub) if sub.size > 1 else FgVerdict(FG, PGROUP)
        wit = {"p": p, "order": sub.size, "members": members, "status": v.status}
        sylow.append(wit)
        if v.status == NOT_FG and first_bad is None:
            first_bad = (p, v)
            status = NOT_FG
    witnesses = {"sylow": sylow}
    if first_bad is not None:
        p, v = first_bad
        members = next(s["members"] for s in sylow if s["p"] == p)
        sp = dict(v.witnesses["splitting_pair"], p=p)
        # ids index the Sylow subgroup's lattice; members are shown in the whole group
        for key in ("delta", "eps"):
            sp[key] = dict(sp[key], ideal=[members[x] for x in sp[key]["ideal"]])
        witnesses["splitting_pair"] = sp
    return FgVerdict(status, NILPOTENT, witnesses)


def decide_expanded(a: FiniteAlgebra) -> FgVerdict:
    """Cutting-chain criterion on the ideal lattice.

    FG when every interval is two-element or non-splitting (no M2 hypothesis
    needed). Otherwise NOT-FG only if the lattice is M2-free; else inconclusive.
    """
    if not a.is_expanded_group:
        raise InapplicableError("needs an expanded group")
    v = _chain_verdict(a, EXPANDED_SUFFICIENT, allow_not_fg=False)
    if v.status == FG:
        return v
    cons, lat = congruence_lattice(a)
    m2 = m2_intervals(lat)
    if not m2:
        v.status, v.theorem, v.reason = NOT_FG, EXPANDED_M2_FREE, \
            "ideal lattice is M2-free and an interval with more than two elements splits"
    else:
        v.witnesses["m2_interval"] = list(m2[0])
    return v


def decide_malcev_simple(a: FiniteAlgebra, budget: int = 2000) -> FgVerdict:
    """Mal'cev algebra with simple congruence lattice: FG iff |Con| <= 2 or Con does not split."""
    if find_malcev_term(a, budget) is None:
        raise InapplicableError(f"no Mal'cev term found within budget {budget}")
    cons, lat = congruence_lattice(a)
    if not is_modular(lat) or not is_simple_lattice(lat):
        raise InapplicableError("congruence lattice is not simple")
    if len(lat) <= 2:
        return FgVerdict(FG, MALCEV_SIMPLE, {"lattice_size": len(lat)})
    sp = splitting_pair(lat)
    if sp is None:
        return FgVerdict(FG, MALCEV_SIMPLE, {"lattice_size": len(lat)})
    wit = {"lattice_size": len(lat),
           "splitting_pair": _pair_witness(a, cons, lat.bottom, lat.top, sp)}
    return FgVerdict(NOT_FG, MALCEV_SIMPLE, wit, "simple congruence lattice splits")


# -- skew-free products ----------------------------------------------------


def factor_pair(a: FiniteAlgebra) -> tuple[Congruence, Congruence] | None:
    """First pair of factor congruences whose product is skew-free, if any."""
    cons, _ = congruence_lattice(a)
    inner = [c for c in cons if not c.is_zero() and not c.is_one()]
    for i, t1 in enumerate(inner):
        for t2 in inner[i + 1:]:
            if t1.n_blocks * t2.n_blocks != a.size or not meet(t1, t2).is_zero():
                continue
            if all(meet(join(g, t1), join(g, t2)) == g for g in cons):
                return t1, t2
    return None


def decide_product(a: FiniteAlgebra) -> FgVerdict:
    """Skew-free product: FG iff both factors are."""
    pair = factor_pair(a)
    if pair is None:
        raise InapplicableError("no skew-free factorisation")
    parts = [decide(quotient(a, t)) for t in pair]
    wit = {"factors": [{"size": t.n_blocks, "kernel": t.blocks(),
                        "verdict": v.to_json()} for t, v in zip(pair, parts)]}
    if all(v.status == FG for v in parts):
        return FgVerdict(FG, PRODUCT, wit)
    for k, v in enumerate(parts):
        if v.status == NOT_FG:
            if "splitting_pair" in v.witnesses:
                wit["splitting_pair"] = dict(v.witnesses["splitting_pair"], factor=k)
            return FgVerdict(NOT_FG, PRODUCT, wit, f"factor {k} is not finitely generated")
    return FgVerdict(INCONCLUSIVE, PRODUCT, wit, "a factor is inconclusive")


# -- pipeline --------------------------------------------------------------


def decide(a) -> FgVerdict:
    """Apply the first criterion that settles the question."""
    if isinstance(a, AbelianSpec):
        return decide_abelian(a)
    attempts = []

    def finish(v: FgVerdict) -> FgVerdict:
        v.attempts = attempts + v.attempts
        return v

    if a.size == 1:
        return FgVerdict(FG, "trivial", {}, "one-element algebra")
    if a.is_group:
        if _prime_power(a.size) is not None:
            return finish(decide_pgroup(a))
        v = decide_nilpotent(a)
        if v.status != INCONCLUSIVE:
            return finish(v)
        attempts.append((v.theorem, v.reason))
    if a.is_expanded_group:
        v = decide_expanded(a)
        if v.status != INCONCLUSIVE:
            return finish(v)
        attempts.append((v.theorem, v.reason))
        last = v
    else:
        last = FgVerdict(INCONCLUSIVE, "none", {}, "no criterion applies")
    for step, tag in ((decide_malcev_simple, MALCEV_SIMPLE), (decide_product, PRODUCT)):
        try:
            v = step(a)
        except (InapplicableError, InconclusiveError, SizeLimitError) as exc:
            attempts.append((tag, str(exc)))
            continue
        if v.status != INCONCLUSIVE:
            return finish(v)
        attempts.append((v.theorem, v.reason))
        last = v
    return finish(FgVerdict(INCONCLUSIVE, last.theorem, last.witnesses,
                            "no criterion settles this algebra"))


# -- witness checks --------------------------------------------------------


def _splits_whole_group(g: FiniteAlgebra, d_members, e_members) -> bool:
    """``(D, E)`` splits ``Con(g)`` without building the lattice.

    A congruence not below delta holds some ``(0, t)`` with ``t`` outside D,
    so it suffices that every such ``Cg(0, t)`` lies above eps.
    """
    z = g.zero
    d = generated_congruence(g, [(z, x) for x in d_members])
    e = generated_congruence(g, [(z, x) for x in e_members])
    if d.block_of(z) != sorted(d_members) or e.block_of(z) != sorted(e_members):
        return False
    if d.is_one() or e.is_zero():
        return False
    inside = set(d_members)
    return all(e <= principal_congruence(g, z, t) for t in range(g.size) if t not in inside)


def recheck_splitting_witness(a, verdict: FgVerdict) -> bool:
    """Recompute the lattice and confirm the reported pair splits the reported interval."""
    sp = verdict.witnesses.get("splitting_pair")
    if sp is None:
        return False
    if "component" in sp:
        if "D_members" not in sp:
            return False
        return _splits_whole_group(make_abelian(sp["component"]), sp["D_members"], sp["E_members"])
    if "factor" in sp:
        pair = factor_pair(a)
        a = quotient(a, pair[sp["factor"]])
    if "p" in sp and "factor" not in sp and a.is_group and _prime_power(a.size) is None:
        a = subalgebra(a, sylow_subgroups(a)[sp["p"]])
    cons, lat = congruence_lattice(a)
    lo, hi = sp["interval"]
    sub = lat.interval(lo, hi)
    return len(sub) > 2 and is_splitting_pair(sub, sp["delta"]["id"], sp["eps"]["id"])


def recheck_decomposition(a: FiniteAlgebra, verdict: FgVerdict) -> bool:
    """Every reported interval between cutting elements has two elements or does not split."""
    cons, lat = congruence_lattice(a)
    chain = [c["id"] for c in verdict.witnesses["cutting_chain"]]
    if chain != cutting_elements(lat):
        return False
    for lo, hi in zip(chain, chain[1:]):
        sub = lat.interval(lo, hi)
        if len(sub) > 2 and splitting_pair(sub) is not None:
            return False
    return True
