"""Command-line entry point.

Every subcommand prints one JSON document (or CSV where tabular) to stdout
and nothing else; logging, notices and timing go to stderr.  Output depends
only on the inputs and the configuration, so repeated runs are
byte-identical.  Exit codes: 0 success, 1 failed verification or internal
error, 2 validation error, 3 numeric-domain error, 4 bounds error.
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import graphs, links, quotient, series, verify, wick
from . import io as cio
from .config import resolve_config
from .errors import CubicFeynError, ParseError
from .lie import lie_weight
from .weights import graph_weight

log = logging.getLogger("cubicfeyn")


def _digest(source: str) -> str:
    """sha256 of a file argument, or the literal spec for built-in inputs."""
    spec = source[5:] if source.startswith("file:") else source
    if Path(spec).is_file():
        return "sha256:" + cio.file_digest(spec)
    return "spec:" + source


def _parse_ints(text: str) -> list:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from exc


def _parse_vector(text: str) -> tuple:
    try:
        vec = tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise ParseError(f"expected x,y,z, got {text!r}") from exc
    if len(vec) != 3:
        raise ParseError(f"expected three components, got {text!r}")
    return vec


def _csv_text(rows) -> str:
    buf = _stdio.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _cjson(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


# -- subcommands --------------------------------------------------------------
# Each returns (payload, inputs) where payload is a dict or CSV text.

def cmd_graphs(args, config):
    table = graphs.enumerate_graphs(args.loops, config)
    if args.format == "csv":
        rows = [["index", "num_vertices", "aut", "symmetry_factor", "connected", "multiplicity", "matching"]]
        for i, c in enumerate(table.classes):
            rows.append([i, c.graph.num_vertices, c.aut, str(c.symmetry_factor), int(c.connected),
                         c.multiplicity, " ".join(f"{a}-{b}" for a, b in c.graph.matching)])
        return _csv_text(rows), {}
    payload = table.to_json()
    payload["aut_orders"] = [c.aut for c in table.classes]
    return payload, {}


def cmd_aut(args, config):
    g = cio.load_graph(args.graph)
    canon = graphs.canonical_form(g)
    aut = graphs.automorphism_order(g)
    return {"graph": g.to_json(), "canonical_form": canon.to_json(), "aut": aut,
            "symmetry_factor": str(Fraction(1, aut)), "connected": graphs.is_connected(g)}, \
        {"graph": _digest(args.graph)}


def cmd_weight(args, config):
    model = cio.load_model(args.model, config)
    g = cio.load_graph(args.graph)
    aut = graphs.automorphism_order(g)
    return {"weight": float(graph_weight(model, g)), "aut": aut, "symmetry_factor": str(Fraction(1, aut)),
            "canonical_form": graphs.canonical_form(g).to_json()}, \
        {"model": _digest(args.model), "graph": _digest(args.graph)}


def cmd_series(args, config):
    model = cio.load_model(args.model, config)
    fn = series.expand_connected if args.connected else series.expand
    result = fn(model, args.order, variant=args.variant, config=config)
    inputs = {"model": _digest(args.model)}
    if args.format == "csv":
        return _csv_text(result.to_csv_rows()), inputs
    return result.to_json(), inputs


def cmd_moments(args, config):
    form = cio.load_form(args.form, config)
    rows = [["indices", "re", "im"]]
    out = []
    for text in args.indices:
        idx = _parse_ints(text)
        val = wick.moment_wick(form, idx, args.variant)
        rows.append([" ".join(map(str, idx)), repr(float(val.real)), repr(float(val.imag))])
        out.append({"indices": idx, **_cjson(val)})
    inputs = {"form": _digest(args.form)}
    if args.format == "csv":
        return _csv_text(rows), inputs
    return {"variant": args.variant, "moments": out}, inputs


def cmd_lie_weight(args, config):
    data = cio.load_lie(args.algebra)
    og = cio.load_oriented_graph(args.graph)
    return {"algebra": args.algebra, "dim": data.dim, "orientation": og.to_json()["orientation"],
            "weight": float(lie_weight(data, og))}, \
        {"algebra": _digest(args.algebra), "graph": _digest(args.graph)}


def cmd_link(args, config):
    c1, c2 = cio.load_curve(args.c1), cio.load_curve(args.c2)
    res = links.linking_number(c1, c2, config.link_tol)
    return {"value": res.value, "estimate_error": res.integrality_defect,
            "nearest_integer": res.nearest_integer,
            "crossing_oracle": links.linking_number_exact(c1, c2)}, \
        {"c1": _digest(args.c1), "c2": _digest(args.c2)}


def cmd_writhe(args, config):
    c = cio.load_curve(args.c)
    payload = {"writhe": links.writhe(c), "segments": len(c)}
    if args.oracle_directions:
        mean, used = links.projection_average_writhe(c, args.oracle_directions, seed=config.rng_seed)
        payload["projection_average"] = {"value": mean, "directions_used": used}
    return payload, {"c": _digest(args.c)}


def cmd_selflink(args, config):
    c = cio.load_curve(args.c)
    direction = _parse_vector(args.direction)
    value = links.self_linking(c, args.offset, direction=direction, tol=config.link_tol)
    return {"value": value, "nearest_integer": int(round(value)), "offset": args.offset,
            "direction": list(direction)}, {"c": _digest(args.c)}


def cmd_quotient(args, config):
    f = quotient.load_integrand(args.integrand)
    value = quotient.quotient_integral(f, r_max=args.rmax)
    return {"integrand": f.name, "rmax": args.rmax, "value": value}, \
        {"integrand": _digest(args.integrand)}


def cmd_verify(args, config):
    results = verify.run_checks(args.level, seed=config.rng_seed)
    for r in results:
        log.info("%-34s %s  (%.2fs) %s", r.name, "PASS" if r.passed else "FAIL", r.seconds, r.detail)
    return {"level": args.level, "passed": all(r.passed for r in results),
            "properties": [r.to_json() for r in results]}, {}


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="config JSON (overrides $CUBICFEYN_CONFIG)")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS,
                        help="log progress and timing to stderr")

    parser = argparse.ArgumentParser(
        prog="cubicfeyn", description="Feynman-diagram expansions of cubic integrals, graph weights and linking integrals.")
    parser.add_argument("--config", default=None, help="config JSON (overrides $CUBICFEYN_CONFIG)")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress and timing to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("graphs", cmd_graphs, "isomorphism classes of trivalent graphs at a loop order")
    p.add_argument("--loops", type=int, required=True, help="loop order m (2m vertices)")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("aut", cmd_aut, "automorphism order and canonical form of a graph")
    p.add_argument("--graph", required=True)

    p = add("weight", cmd_weight, "tensor weight of a graph for a cubic model")
    p.add_argument("--model", required=True)
    p.add_argument("--graph", required=True)

    p = add("series", cmd_series, "asymptotic series coefficients with per-graph ledger")
    p.add_argument("--model", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--connected", action="store_true", help="connected graphs only (the logarithm)")
    p.add_argument("--variant", choices=wick.VARIANTS, default=wick.OSCILLATORY)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("moments", cmd_moments, "Gaussian moments by Wick pairing")
    p.add_argument("--form", required=True)
    p.add_argument("--indices", action="append", required=True, help="comma-separated, repeatable")
    p.add_argument("--variant", choices=wick.VARIANTS, default=wick.OSCILLATORY)
    p.add_argument("--format", choices=("json", "csv"), default="csv")

    p = add("lie-weight", cmd_lie_weight, "Lie-algebra weight of an oriented graph")
    p.add_argument("--algebra", required=True, help="su2 | sun:<n> | file:<path>")
    p.add_argument("--graph", required=True)

    p = add("link", cmd_link, "Gauss linking number of two closed polygons")
    p.add_argument("--c1", required=True)
    p.add_argument("--c2", required=True)

    p = add("writhe", cmd_writhe, "writhe of a closed polygon")
    p.add_argument("--c", required=True)
    p.add_argument("--oracle-directions", type=int, default=0,
                   help="also average signed crossings over this many projection directions")

    p = add("selflink", cmd_selflink, "linking number of a curve with a pushed-off parallel")
    p.add_argument("--c", required=True)
    p.add_argument("--offset", type=float, required=True)
    p.add_argument("--direction", default="0.1,0.05,1.0", help="push-off direction x,y,z")

    p = add("quotient", cmd_quotient, "plane integral of a radial function via the orbit space")
    p.add_argument("--integrand", required=True, help="gauss | disc | file:<path>")
    p.add_argument("--rmax", type=float, default=None)

    p = add("verify", cmd_verify, "run the oracle suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    return parser


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)
    start = time.perf_counter()
    try:
        config = resolve_config(args.config)
        payload, inputs = args.func(args, config)
    except CubicFeynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    log.info("%s finished in %.3fs", args.command, time.perf_counter() - start)
    if isinstance(payload, str):
        stdout.write(payload)
    else:
        stdout.write(cio.dumps({"command": args.command, "inputs": inputs, "result": payload}))
    if args.command == "verify" and not payload["passed"]:
        return 1
    return 0


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
