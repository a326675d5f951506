"""Command-line front end: ``congen <command> ...``.

Exit status 1 means malformed input, 2 a violated precondition; everything
else (including inconclusive verdicts) exits 0.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import lattice as lat_mod
from .algebra import DEFAULT_SIZE_CAP, AbelianSpec, load_algebra
from .clone import closure, count_compatible, default_budget, enumerate_compatible, generates_up_to
from .commutator import binary_commutator
from .congruence import congruence_lattice
from .decide import decide
from .errors import InconclusiveError, MalformedInputError, PreconditionError, SizeLimitError
from .tables import dump_tables, load_tables


def _emit(args, data: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print("\n".join(lines))


def _load(args):
    return load_algebra(args.file, max_size=args.max_size)


def _fmt_blocks(blocks) -> str:
    return " | ".join(",".join(map(str, b)) for b in blocks)


def cmd_con(args) -> None:
    a = _load(args)
    cons, _ = congruence_lattice(a)
    data = {"size": a.size, "congruences": [c.blocks() for c in cons]}
    lines = [f"{len(cons)} congruences"] + [f"{k}: {_fmt_blocks(c.blocks())}" for k, c in enumerate(cons)]
    _emit(args, data, lines)


def cmd_lattice(args) -> None:
    a = _load(args)
    cons, lat = congruence_lattice(a)
    modular = lat_mod.is_modular(lat)
    ap = lat_mod.has_ap(lat) if modular else None
    simple = lat_mod.is_simple_lattice(lat) if modular else None
    cut = lat_mod.cutting_elements(lat)
    sp = lat_mod.splitting_pair(lat)
    m2 = lat_mod.has_m2_interval(lat)
    decomp = []
    if modular and ap:
        for iv in lat_mod.coalesced_decomposition(lat):
            sub = lat.interval(iv.lo, iv.hi)
            decomp.append({"lo": iv.lo, "hi": iv.hi, "size": len(sub),
                           "simple": lat_mod.is_simple_lattice(sub),
                           "splits": lat_mod.splitting_pair(sub) is not None})
    data = {"size": len(lat), "covers": len(lat_mod.covers(lat)), "modular": modular,
            "m2_free": not m2, "ap": ap, "simple": simple, "cutting_chain": cut,
            "splitting_pair": list(sp) if sp else None, "decomposition": decomp}
    yn = {True: "yes", False: "no", None: "n/a (not modular)"}
    lines = [
        f"elements: {len(lat)}",
        f"covering pairs: {data['covers']}",
        f"modular: {yn[modular]}",
        f"M2-free: {yn[not m2]}",
        f"(AP): {yn[ap]}",
        f"simple: {yn[simple]}",
        f"cutting chain: {' < '.join(map(str, cut))}",
        f"splitting pair: {'none' if sp is None else f'delta={sp[0]} eps={sp[1]}'}",
    ]
    if decomp:
        lines.append("decomposition:")
        for d in decomp:
            lines.append(f"  [{d['lo']}, {d['hi']}] size={d['size']} simple={yn[d['simple']]} "
                         f"splits={yn[d['splits']]}")
    elif not (modular and ap):
        lines.append("decomposition: n/a")
    _emit(args, data, lines)


def cmd_commutator(args) -> None:
    a = _load(args)
    cons, _ = congruence_lattice(a)
    for k in (args.alpha, args.beta):
        if not 0 <= k < len(cons):
            raise MalformedInputError(f"congruence index {k} out of range 0..{len(cons) - 1}")
    try:
        c = binary_commutator(a, cons[args.alpha], cons[args.beta])
    except InconclusiveError as exc:
        raise PreconditionError(str(exc)) from exc
    k = cons.index(c)
    data = {"alpha": args.alpha, "beta": args.beta, "commutator": k, "blocks": c.blocks()}
    _emit(args, data, [f"[{args.alpha}, {args.beta}] = {k}: {_fmt_blocks(c.blocks())}"])


def _parse_orders(text: str) -> AbelianSpec:
    try:
        return AbelianSpec(int(x) for x in text.split(","))
    except ValueError as exc:
        raise MalformedInputError(f"bad cyclic orders {text!r}") from exc


def _verdict_lines(v, indent="") -> list[str]:
    lines = [f"{indent}status: {v.status}", f"{indent}theorem: {v.theorem}"]
    if v.reason:
        lines.append(f"{indent}reason: {v.reason}")
    w = v.witnesses
    sp = w.get("splitting_pair")
    if sp:
        if "D" in sp:
            lines.append(f"{indent}witness: D = {sp['D']}, E = {sp['E']} (Sylow {sp['p']})")
        else:
            def show(d):
                return d.get("ideal", d.get("blocks"))
            lines.append(f"{indent}witness: interval [{sp['interval'][0]}, {sp['interval'][1]}], "
                         f"delta = {sp['delta']['id']} {show(sp['delta'])}, "
                         f"eps = {sp['eps']['id']} {show(sp['eps'])}")
    if "cutting_chain" in w:
        lines.append(f"{indent}cutting chain: " + " < ".join(str(c["id"]) for c in w["cutting_chain"]))
        for iv in w["intervals"]:
            lines.append(f"{indent}  [{iv['lo']}, {iv['hi']}] size={iv['size']} "
                         f"{'splits' if iv['splits'] else 'does not split'}")
    if "sylow" in w:
        for s in w["sylow"]:
            size = s.get("order", None)
            extra = f" exponents={s['exponents']}" if "exponents" in s else f" order={size}"
            lines.append(f"{indent}sylow p={s['p']}{extra}: {s['status']}")
    for k, f in enumerate(w.get("factors", [])):
        fv = f["verdict"]
        lines.append(f"{indent}factor {k}: {f['size']} elements, {fv['status']} ({fv['theorem']})")
    if "m2_interval" in w:
        lines.append(f"{indent}M2 interval: [{w['m2_interval'][0]}, {w['m2_interval'][1]}]")
    for t, why in v.attempts:
        lines.append(f"{indent}tried {t}: {why}")
    return lines


def cmd_decide(args) -> None:
    if args.cyclic_orders:
        target = _parse_orders(args.cyclic_orders)
    elif args.file:
        target = _load(args)
    else:
        raise MalformedInputError("give an algebra file or --cyclic-orders")
    v = decide(target)
    _emit(args, v.to_json(), _verdict_lines(v))


def cmd_compat(args) -> None:
    a = _load(args)
    budget = default_budget()
    if args.dump:
        res = enumerate_compatible(a, args.arity, budget)
        dump_tables(res.functions, args.dump)
        n, complete = len(res), res.complete
    else:
        n, complete = count_compatible(a, args.arity, budget)
    data = {"arity": args.arity, "count": n, "complete": complete}
    _emit(args, data, [f"arity {args.arity}: {n} compatible functions" + ("" if complete else " (truncated)")])


def cmd_closure(args) -> None:
    a = _load(args)
    gens = load_tables(args.generators)
    budget = default_budget()
    cl = closure(a, gens, args.max_arity, budget)
    data = {"max_arity": args.max_arity, "complete": cl.complete,
            "counts": {str(k): v for k, v in cl.by_arity().items()}}
    lines = [f"closure {'complete' if cl.complete else 'truncated'} at max arity {args.max_arity}"]
    lines += [f"  arity {k}: {v}" for k, v in cl.by_arity().items()]
    if args.check_up_to:
        g = generates_up_to(a, gens, args.check_up_to, args.max_arity, budget)
        data["generates"] = g.status
        data["check"] = {str(k): list(v) for k, v in g.counts.items()}
        lines.append(f"generates compatible functions up to arity {args.check_up_to}: {g.status}")
        lines += [f"  arity {k}: {h} of {c}" for k, (h, c) in g.counts.items()]
    _emit(args, data, lines)


def cmd_dot(args) -> None:
    a = _load(args)
    _, lat = congruence_lattice(a)
    text = lat_mod.to_dot(lat)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        _emit(args, {"out": args.out}, [f"wrote {args.out}"])
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-size", type=int, default=DEFAULT_SIZE_CAP, help="universe size cap")
    p = argparse.ArgumentParser(prog="congen", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, file_required=True):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("file", nargs=None if file_required else "?")
        sp.set_defaults(fn=fn)
        return sp

    add("con", cmd_con)
    add("lattice", cmd_lattice)
    c = add("commutator", cmd_commutator)
    c.add_argument("--alpha", type=int, required=True)
    c.add_argument("--beta", type=int, required=True)
    d = add("decide", cmd_decide, file_required=False)
    d.add_argument("--cyclic-orders", help="comma separated, e.g. 9,3")
    c = add("compat", cmd_compat)
    c.add_argument("--arity", type=int, required=True)
    c.add_argument("--dump", help="write the tables to this JSON file")
    c = add("closure", cmd_closure)
    c.add_argument("--generators", required=True)
    c.add_argument("--max-arity", type=int, default=3)
    c.add_argument("--check-up-to", type=int, default=0)
    c = add("dot", cmd_dot)
    c.add_argument("--out")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.fn(args)
    except (MalformedInputError, SizeLimitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
