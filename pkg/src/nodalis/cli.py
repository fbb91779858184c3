"""Command line front end.

Exit codes: 0 success, 1 internal failure or failed verification, 2 usage.
All JSON output is key-sorted so identical inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .cones import DomainError, MultiplicityVector
from .config import ResourceLimitError, check_n
from .graphs import AdmissibleGraph, AxiomError, GraphInputError, codim, enumerate_adm, is_chain_like, type_I_classes
from .poly import fraction_str


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _parse_edges(text: str) -> list[tuple[int, int]]:
    edges = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        a, sep, b = part.partition("-")
        if not sep:
            raise UsageError(f"edge {part!r} should look like 1-2")
        try:
            edges.append((int(a), int(b)))
        except ValueError:
            raise UsageError(f"edge {part!r} should look like 1-2")
    return edges


def _graph(args) -> AdmissibleGraph:
    check_n(args.n)
    return AdmissibleGraph.from_edges(args.n, _parse_edges(args.edges or ""))


def _mult(args, n: int) -> MultiplicityVector:
    m = MultiplicityVector.parse(args.mult) if args.mult else MultiplicityVector.uniform(n)
    if m.n != n:
        raise UsageError(f"--mult has {m.n} entries but n = {n}")
    return m


def _parse_eval(text: str) -> dict:
    values = {}
    for part in text.split(","):
        name, sep, value = part.partition("=")
        if not sep or name.strip() not in ("L2", "LK", "K2", "c2"):
            raise UsageError(f"--eval expects L2=..,LK=..,K2=..,c2=.. (got {part!r})")
        values[name.strip()] = Fraction(value.strip())
    missing = {"L2", "LK", "K2", "c2"} - set(values)
    if missing:
        raise UsageError(f"--eval is missing {sorted(missing)}")
    return values


# ---------------------------------------------------------------------------


def cmd_graphs(args) -> tuple[object, str]:
    check_n(args.n)
    records = []
    for g in enumerate_adm(args.n):
        records.append(
            {
                "graph": g.to_json(),
                "label": str(g),
                "codim": codim(g),
                "adm2": is_chain_like(g),
                "classes": [str(e) for e in type_I_classes(g)],
            }
        )
    text = "\n".join(f"{r['label']:40s} codim={r['codim']} adm2={int(r['adm2'])}  " + "  ".join(r["classes"]) for r in records)
    return records, text


def cmd_order(args) -> tuple[object, str]:
    from .orderings import OrderingContext

    check_n(args.n)
    m = _mult(args, args.n)
    ctx = OrderingContext(args.n, m, args.reverse_tie)
    order = [str(g) for g in ctx.order]
    idx = {g: i for i, g in enumerate(ctx.order)}
    reduced = {str(g): [str(h) for h in ctx.index_sets(g).reduced] for g in ctx.order}
    persistent = {str(g): [str(h) for h in ctx.index_sets(g).persistent] for g in ctx.order}
    out = {
        "n": args.n,
        "mult": list(m),
        "delta": [g.to_json() for g in ctx.delta],
        "order": order,
        "relations": ctx.relation_matrices(),
        "reduced_index_sets": reduced,
        "persistent_index_sets": persistent,
    }
    lines = [f"Delta({args.n}) for m=({m}): {len(order)} graphs, listed in increasing order"]
    lines += [f"  {i}: {g}" for i, g in enumerate(order)]
    if args.dot:
        lines = [_hasse_dot(ctx, idx)]
        out["dot"] = lines[0]
    return out, "\n".join(lines)


def _hasse_dot(ctx, idx) -> str:
    rows = ["digraph succ {"]
    for g in ctx.order:
        rows.append(f'  n{idx[g]} [label="{g}"];')
    for a in ctx.order:
        for b in ctx.order:
            if a == b or not ctx.succ(a, b) or ctx.succ(b, a):
                continue
            between = any(
                c not in (a, b) and ctx.succ(a, c) and ctx.succ(c, b) and not ctx.succ(c, a) and not ctx.succ(b, c)
                for c in ctx.order
            )
            if not between:
                rows.append(f"  n{idx[a]} -> n{idx[b]};")
    rows.append("}")
    return "\n".join(rows)


def cmd_tau(args) -> tuple[object, str]:
    from .tau import tau_of

    g = _graph(args)
    t = tau_of(g, _mult(args, g.n))
    out = t.to_json()
    text = f"{g}: zero={t.zero_flag} rank={t.rank}\n  c(tau) = {t.total_chern}"
    return out, text


def cmd_invariant(args) -> tuple[object, str]:
    from .tau import InvariantContext, mixed_invariant

    g = _graph(args)
    m = _mult(args, g.n)
    if args.star:
        value = InvariantContext(g.n, m, args.reverse_tie).afsw_star(g)
        kind = "corrected"
    else:
        value = mixed_invariant(g, m)
        kind = "mixed"
    out = {"graph": g.to_json(), "mult": list(m), "kind": kind, "invariant": value.to_json(), "parametric": value.parametric}
    return out, f"{kind} invariant of {g}, m=({m}): {value}"


def cmd_count(args) -> tuple[object, str]:
    from .tau import node_count

    if args.delta < 1:
        raise UsageError("--delta must be at least 1")
    res = node_count(args.delta, reverse_tie=args.reverse_tie)
    out = res.to_json()
    out["validated"] = args.delta <= 3
    lines = [f"delta={args.delta}: {res.poly}"]
    lines.append(f"  times {args.delta}!: {res.pre_division}")
    if args.eval:
        values = _parse_eval(args.eval)
        if res.parametric:
            out["value"] = None
            lines.append(f"  value: not evaluable, depends on {res.poly.extra_symbols()}")
        else:
            v = res.poly.evaluate(values)
            out["value"] = fraction_str(v)
            lines.append(f"  value: {fraction_str(v)}")
    for p in res.provenance:
        lines.append(f"  {p['label']}: {p['status']}")
    return out, "\n".join(lines)


def cmd_verify(args) -> tuple[object, str]:
    from .oracles import run_suite

    reports = run_suite(args.level)
    out = [r.to_json() for r in reports]
    text = "\n".join(f"{r.verdict.upper():4s} {r.check} {json.dumps(r.to_json()['inputs'], sort_keys=True)}" for r in reports)
    failed = sum(not r.ok for r in reports)
    text += f"\n{len(reports) - failed}/{len(reports)} checks passed"
    return out, text, failed == 0


COMMANDS = {
    "graphs": cmd_graphs,
    "order": cmd_order,
    "tau": cmd_tau,
    "invariant": cmd_invariant,
    "count": cmd_count,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nodalis", description="Admissible graphs, orderings and node-count polynomials.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = add("graphs", "list admissible graphs on n vertices")
    p.add_argument("--n", type=int, required=True)

    p = add("order", "special strata and their orderings")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mult", help="multiplicity vector, e.g. 2,2,2 (default all 2)")
    p.add_argument("--reverse-tie", action="store_true")
    p.add_argument("--dot", action="store_true", help="emit the cone-inclusion Hasse diagram in DOT")

    for name, help in (("tau", "tau class of a special stratum"), ("invariant", "mixed or corrected invariant of a stratum")):
        p = add(name, help)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--edges", default="", help="edge list such as 1-2,1-3")
        p.add_argument("--mult", help="multiplicity vector (default all 2)")
        if name == "invariant":
            p.add_argument("--star", action="store_true", help="apply the correction recursion")
            p.add_argument("--reverse-tie", action="store_true")

    p = add("count", "universal polynomial for delta-nodal curves")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--eval", help="L2=..,LK=..,K2=..,c2=..")
    p.add_argument("--reverse-tie", action="store_true")

    p = add("verify", "run the oracle suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except (UsageError, ResourceLimitError, DomainError, AxiomError, GraphInputError, ValueError) as exc:
        print(f"nodalis {args.command}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"nodalis {args.command}: internal error: {exc!r}", file=sys.stderr)
        return 1
    ok = True
    if len(result) == 3:
        out, text, ok = result
    else:
        out, text = result
    print(_dump(out) if args.json else text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
