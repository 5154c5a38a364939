"""Command line: instance generation, algorithm runs, oracles, audits and suites.

Every subcommand writes line-oriented text to ``--out`` (stdout by default).
Randomized steps are keyed by ``--seed``, so identical arguments reproduce
identical output bytes.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import statistics
import sys
from fractions import Fraction

from . import LOG_BASE
from .coloring import good_coloring
from .core import Hypergraph, incidence_graph, total_weight, unit_weights
from .formats import (
    dump_hypergraph,
    dump_matching,
    dump_orientation,
    format_rational,
    read_hypergraph,
    write_text,
)
from .fractional import hmwm_det_report, hmwm_rand_report
from .graphmatch import gmwm
from .hooks import degree_split_hook, good_coloring_hook, sample_audits, simple_matching_hook
from .localsim import BUILTIN_PROGRAMS, run
from .maximal import hmm_report, hmm_shattering, sample_matching
from .oracles import (
    TooLarge,
    brute_force_mwm,
    exact_fractional_opt,
    generate,
    matching_number,
    random_weights,
    ring,
)
from .orientation import orient, worst_case_orientation
from .rounding import chain_csv, compute_params, degree_reduce


def _parse_params(items: list[str]) -> dict:
    out = {}
    for item in items or []:
        key, _, value = item.partition("=")
        if not _:
            raise SystemExit(f"parameter {item!r} must look like key=value")
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def _load(args) -> tuple[Hypergraph, dict[int, Fraction]]:
    return read_hypergraph(args.input)


def _profile_kwargs(args) -> dict:
    return {"profile": args.profile}


def cmd_gen(args) -> str:
    H = generate(args.kind, _parse_params(args.param), args.seed)
    a = random_weights(H, args.seed, args.weights)
    return dump_hypergraph(H, a)


def cmd_run(args) -> str:
    H, _ = _load(args)
    inc = incidence_graph(H)
    prog = BUILTIN_PROGRAMS[args.program]()
    inputs = {u: (u == args.mark) for u in inc.nodes} if args.program == "bfs" else None
    outputs, trace = run(inc, prog, args.rounds, args.seed, inputs, snapshot_every=args.snapshot_every)
    lines = [f"OUT {u} {outputs[u]!r}" for u in sorted(outputs)]
    return trace.dump() + "\n".join(lines) + "\n"


def cmd_hmwm(args) -> str:
    H, a = _load(args)
    if args.mode == "det":
        res = hmwm_det_report(H, a, good_coloring(H), **_profile_kwargs(args))
    else:
        res = hmwm_rand_report(H, a, Fraction(args.delta), args.seed)
    return f"# weight {format_rational(total_weight(a, res.matching))} path {res.path}\n" + dump_matching(
        res.matching
    )


def cmd_gmwm(args) -> str:
    G, a = _load(args)
    res = gmwm(G, a, Fraction(args.epsilon), args.mode, Fraction(args.delta), args.seed)
    head = f"# weight {format_rational(res.weight)} stages {len(res.stages)} early_exit {res.early_exit}\n"
    return head + dump_matching(res.matching)


def cmd_hmm(args) -> str:
    H, _ = _load(args)
    if args.mode == "shatter":
        res = hmm_shattering(H, args.seed)
    else:
        res = hmm_report(H, args.mode, Fraction(args.delta), args.seed)
    return f"# size {len(res.matching)} stages {res.stage_count}\n" + dump_matching(res.matching)


def cmd_orient(args) -> str:
    G, _ = _load(args)
    init = worst_case_orientation(G) if args.worst_start else None
    res = orient(G, args.lam, Fraction(args.epsilon), args.mode, args.seed, init)
    o = res.orientation
    head = f"# max_out_degree {o.max_out_degree()} target {res.target} stages {len(res.stages)}\n"
    return head + dump_orientation({e: (o.tail[e], o.head(e)) for e in G.edges})


def _oracle_values(H, a, wanted) -> dict:
    out = {}
    try:
        if "mwm" in wanted:
            out["mwm"] = brute_force_mwm(H, a, max_edges=40)[1]
        if "lp" in wanted:
            out["lp"] = exact_fractional_opt(H, a, max_edges=60, max_vertices=200)
        if "tau" in wanted:
            out["tau"] = Fraction(matching_number(H, max_edges=40))
    except TooLarge as exc:
        raise SystemExit(f"oracle refused: {exc}")
    return out


def cmd_oracle(args) -> str:
    H, a = _load(args)
    vals = _oracle_values(H, a, args.what)
    return "".join(f"{k} {format_rational(v)}\n" for k, v in vals.items())


def cmd_audit(args) -> str:
    if args.kind == "chain":
        H, a = _load(args)
        params = compute_params(H.max_degree, H.rank, "scaled")
        return chain_csv(degree_reduce(H, a, good_coloring(H), params).rows)
    hooks = []
    for r, s in ((2, args.seed), (3, args.seed + 1)):
        H = ring(args.ring_size, r, seed=s)
        hooks.append(good_coloring_hook(H))
        hooks.append(simple_matching_hook(H, random_weights(H, s, "rational")))
        hooks.append(degree_split_hook(H, random_weights(H, s, "int")))
    rows = sample_audits(hooks, args.samples, args.seed)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, ["algorithm", "node", "radius", "changed", "passed"], lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


# ----------------------------------------------------------------------
# experiment suites
# ----------------------------------------------------------------------
SUITE_COLUMNS = [
    "index", "seed", "instance", "algorithm", "mode", "n", "m", "rank", "max_degree",
    "weight", "opt_matching", "opt_fractional", "tau", "ratio_fractional", "ratio_matching", "stages",
]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def instance_hash(H: Hypergraph, a) -> str:
    return hashlib.sha256(dump_hypergraph(H, a).encode()).hexdigest()[:16]


def _run_algorithm(spec: dict, H, a, seed: int):
    alg = spec["algorithm"]
    mode = spec.get("mode", "det")
    par = spec.get("parameters", {})
    if alg == "hmwm":
        if mode == "det":
            res = hmwm_det_report(H, a, good_coloring(H))
            return res.matching, 1
        res = hmwm_rand_report(H, a, Fraction(par.get("delta", "1/5")), seed)
        return res.matching, 1
    if alg == "gmwm":
        res = gmwm(H, a, Fraction(par.get("epsilon", "1/4")), mode, Fraction(par.get("delta", "1/5")), seed)
        return res.matching, len(res.stages)
    if alg == "hmm":
        if mode == "shatter":
            res = hmm_shattering(H, seed)
        else:
            res = hmm_report(H, mode, Fraction(par.get("delta", "1/5")), seed)
        return res.matching, res.stage_count
    if alg == "sample":
        return sample_matching(H, seed), 1
    raise SystemExit(f"unknown algorithm {alg!r}")


def run_suite(spec: dict) -> tuple[str, str]:
    """Rows for every seed in the spec plus a summary; both as CSV text."""
    rows = []
    wanted = [k for k, on in spec.get("oracles", {}).items() if on]
    for index, seed in enumerate(spec.get("seeds", [])):
        H = generate(spec["generator"], spec.get("params", {}), seed)
        kind = spec.get("weights", "int")
        a = unit_weights(H) if kind == "unit" else random_weights(H, seed, kind)
        if spec["algorithm"] == "hmm":
            a = unit_weights(H)
        M, stages = _run_algorithm(spec, H, a, seed)
        got = total_weight(a, M)
        vals = _oracle_values(H, a, wanted)
        row = {
            "index": index, "seed": seed, "instance": instance_hash(H, a),
            "algorithm": spec["algorithm"], "mode": spec.get("mode", "det"),
            "n": H.n, "m": H.m, "rank": H.rank, "max_degree": H.max_degree, "weight": got,
            "opt_matching": vals.get("mwm"), "opt_fractional": vals.get("lp"), "tau": vals.get("tau"),
            "ratio_fractional": vals["lp"] / got if "lp" in vals and got else None,
            "ratio_matching": vals["mwm"] / got if "mwm" in vals and got else None,
            "stages": stages,
        }
        rows.append(row)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUITE_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in SUITE_COLUMNS])
    summary = io.StringIO()
    sw = csv.writer(summary, lineterminator="\n")
    sw.writerow(["statistic", "count", "min", "median", "max"])
    for col in ("ratio_fractional", "ratio_matching"):
        xs = [row[col] for row in rows if row[col] is not None]
        if xs:
            sw.writerow([col, len(xs), _fmt(min(xs)), _fmt(statistics.median(xs)), _fmt(max(xs))])
    return buf.getvalue(), summary.getvalue()


def cmd_suite(args) -> str:
    with open(args.spec, encoding="utf-8") as fh:
        spec = json.load(fh)
    rows, summary = run_suite(spec)
    if args.summary:
        write_text(args.summary, summary)
    return rows


# ----------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--profile", choices=["paper", "scaled"], default="paper")
    common.add_argument("--log-base", type=int, choices=[LOG_BASE], default=LOG_BASE,
                        help="base of every unsubscripted logarithm (fixed at 2)")
    common.add_argument("--out", default="-", help="output file, '-' for stdout")

    p = argparse.ArgumentParser(prog="hypmatch", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate an instance")
    g.add_argument("--kind", required=True, choices=["random", "ring", "forests", "dense", "disjoint", "star"])
    g.add_argument("--param", action="append", metavar="KEY=VALUE")
    g.add_argument("--weights", choices=["int", "rational", "unit"], default="int")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", parents=[common], help="run a LOCAL program on Inc(H)")
    r.add_argument("input")
    r.add_argument("--program", choices=sorted(BUILTIN_PROGRAMS), default="max-id")
    r.add_argument("--rounds", type=int, required=True)
    r.add_argument("--snapshot-every", type=int)
    r.add_argument("--mark", type=int, default=0, help="marked node for the bfs program")
    r.set_defaults(func=cmd_run)

    h = sub.add_parser("hmwm", parents=[common], help="hypergraph maximum-weight matching")
    h.add_argument("input")
    h.add_argument("--mode", choices=["det", "rand"], default="det")
    h.add_argument("--delta", default="1/5")
    h.set_defaults(func=cmd_hmwm)

    gm = sub.add_parser("gmwm", parents=[common], help="graph maximum-weight matching")
    gm.add_argument("input")
    gm.add_argument("--epsilon", default="1/4")
    gm.add_argument("--mode", choices=["det", "rand"], default="det")
    gm.add_argument("--delta", default="1/5")
    gm.set_defaults(func=cmd_gmwm)

    mm = sub.add_parser("hmm", parents=[common], help="hypergraph maximal matching")
    mm.add_argument("input")
    mm.add_argument("--mode", choices=["det", "rand", "shatter"], default="det")
    mm.add_argument("--delta", default="1/5")
    mm.set_defaults(func=cmd_hmm)

    o = sub.add_parser("orient", parents=[common], help="low out-degree orientation")
    o.add_argument("input")
    o.add_argument("--lambda", dest="lam", type=int, required=True)
    o.add_argument("--epsilon", default="1")
    o.add_argument("--mode", choices=["det", "rand"], default="det")
    o.add_argument("--worst-start", action="store_true")
    o.set_defaults(func=cmd_orient)

    orc = sub.add_parser("oracle", parents=[common], help="exact reference values")
    orc.add_argument("input")
    orc.add_argument("--what", nargs="+", choices=["mwm", "lp", "tau"], default=["mwm", "lp", "tau"])
    orc.set_defaults(func=cmd_oracle)

    au = sub.add_parser("audit", parents=[common], help="locality audits or inequality-chain log")
    au.add_argument("input", nargs="?")
    au.add_argument("--kind", choices=["locality", "chain"], default="locality")
    au.add_argument("--samples", type=int, default=50)
    au.add_argument("--ring-size", type=int, default=80)
    au.set_defaults(func=cmd_audit)

    su = sub.add_parser("suite", parents=[common], help="run an experiment spec")
    su.add_argument("spec")
    su.add_argument("--summary", help="write the aggregate summary CSV here")
    su.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "audit" and args.kind == "chain" and not args.input:
        raise SystemExit("audit --kind chain needs an input file")
    text = args.func(args)
    write_text(args.out, text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
