"""Command-line front door.

Subcommands: ``moments``, ``matroid``, ``trigonal``, ``enumerate``,
``verify``, ``oracle``, ``conjecture-check``.  Exit codes: 0 when every
requested check passes, 1 when a verification fails, 2 on usage or input
errors.  Numeric output always shows the exact rational with a decimal
approximation beside it; square roots appear only in the decimal column.
"""
from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction

from . import jsonio, moments, oracle, qcases
from .graph import Graph, GraphError, idkey
from .matroid import GraphicMatroidView, SignedMatroidView
from .morphism import CoverError, DoubleCover, MorphismError
from .poly import PiecewisePolynomial
from .pipeline import (
    generic_structures,
    monodromy_assignments,
    run_verification,
    trivalent_trees,
    type_markings,
)
from .randomgen import random_free_cover
from .trigonal import TrigonalError, build_pi, verify_tower

PASS = 0
FAIL = 1
USAGE = 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input/output helpers
# ---------------------------------------------------------------------------


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise UsageError(f"{path}: {err.strerror or err}") from err
    except json.JSONDecodeError as err:
        raise UsageError(f"{path}: malformed JSON: {err}") from err


def _wrap(path: str, builder, data):
    try:
        return builder(data)
    except (ValueError, GraphError, CoverError, MorphismError) as err:
        raise UsageError(f"{path}: {err}") from err


def load_graph(path: str) -> Graph:
    return _wrap(path, jsonio.graph_from_json, _load_json(path))


def load_cover(path: str) -> DoubleCover:
    return _wrap(path, jsonio.cover_from_json, _load_json(path))


def load_tower(path: str):
    return _wrap(path, jsonio.tower_from_json, _load_json(path))


def _dump(data) -> None:
    sys.stdout.write(json.dumps(data, indent=2) + "\n")


def _approx(value: float) -> str:
    return f"{value:.6g}"


def _rational(x: Fraction) -> str:
    return f"{x} ({_approx(float(x))})"


def _moment_strings(expr) -> list[tuple[str, str, str]]:
    """(cone, exact, decimal) rows of a MomentExpression at numeric lengths."""
    rows = []
    for cone, poly in expr.numerator.pieces:
        num = expr.scale * poly.evaluate({})
        rad = expr.radicand.evaluate({})
        where = "; ".join(str(f) + " >= 0" for f in cone.inequalities) or "everywhere"
        exact = f"({num}) / sqrt({rad})"
        dec = _approx(float(num) / math.sqrt(float(rad))) if rad > 0 else "undefined"
        rows.append((where, exact, dec))
    return rows


def _is_numeric(g: Graph) -> bool:
    return all(not f.variables() for f in g.lengths.values())


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------


def _cmd_moments(args) -> int:
    if args.which == "jac":
        g = load_graph(args.file)
        w0 = moments.w0_jac(g)
        p = moments.p_jac(g)
        i2 = moments.i2_jac(g)
        payload = {
            "kind": "jacobian",
            "w0": str(w0),
            "p": str(p),
            "i2": i2.to_json(),
        }
        extras = {}
        if args.numeric:
            if not _is_numeric(g):
                raise UsageError("--numeric needs a graph with numeric lengths")
            tau_num, tau_den = moments.tau_parts(g)
            extras = {
                "w0": w0.evaluate({}),
                "p": p.evaluate({}),
                "tau": tau_num.evaluate({}) / tau_den.evaluate({}),
            }
    else:
        cover = load_cover(args.file)
        w0 = moments.w0_prym(cover)
        p = moments.p_prym(cover, args.p_coefficient)
        i2 = moments.i2_prym(cover, args.p_coefficient)
        q = moments.q_prym(cover)
        payload = {
            "kind": "prym",
            "p_coefficient": args.p_coefficient,
            "w0": str(w0),
            "p": str(p),
            "q": [
                {
                    "cone": [str(f) for f in cone.inequalities],
                    "polynomial": str(poly),
                }
                for cone, poly in q.pieces
            ],
            "i2": i2.to_json(),
        }
        extras = {}
        if args.numeric:
            if not _is_numeric(cover.base):
                raise UsageError("--numeric needs a cover with numeric lengths")
            extras = {
                "w0": w0.evaluate({}),
                "q": q.evaluate({}),
            }
    if args.numeric:
        i2_expr = i2
        num, rad = i2_expr.evaluate_exact({})
        extras["i2_numerator"] = num
        extras["i2_radicand"] = rad
        payload["numeric"] = {
            k: str(v) for k, v in extras.items()
        }
        payload["numeric"]["i2_decimal"] = (
            _approx(float(num) / math.sqrt(float(rad))) if rad > 0 else "undefined"
        )
    if args.report == "json":
        _dump(payload)
        return PASS
    print(f"{payload['kind']} moments of {args.file}")
    print(f"  w0 = {payload['w0']}")
    if "p" in payload:
        print(f"  p  = {payload['p']}")
    if "q" in payload:
        for piece in payload["q"]:
            where = "; ".join(piece["cone"]) or "everywhere"
            print(f"  q  = {piece['polynomial']}   on [{where}]")
    if args.numeric:
        for key, value in payload["numeric"].items():
            print(f"  {key} = {value}")
        for where, exact, dec in _moment_strings(i2_expr):
            print(f"  I2 = {exact} = {dec}   on [{where}]")
    return PASS


# ---------------------------------------------------------------------------
# matroid
# ---------------------------------------------------------------------------


def _edge_list(edges) -> list[str]:
    return sorted((str(e) for e in edges), key=idkey)


def _looks_like_cover(data) -> bool:
    edges = data.get("edges") if isinstance(data, dict) else None
    return bool(edges) and all("sign" in e for e in edges)


def _cmd_matroid(args) -> int:
    data = _load_json(args.file)
    if args.which == "bases":
        if _looks_like_cover(data):
            cover = _wrap(args.file, jsonio.cover_from_json, data)
            sm = SignedMatroidView(cover)
            _dump({
                "ground": _edge_list(sm.ground),
                "torus_rank": sm.t,
                "cographic": [
                    {"edges": _edge_list(F), "components": c, "index": idx}
                    for F, c, idx in sm.cographic_bases()
                ],
                "graphic": [
                    {"edges": _edge_list(B), "index": idx}
                    for B, idx in sm.graphic_bases()
                ],
            })
        else:
            g = _wrap(args.file, jsonio.graph_from_json, data)
            view = GraphicMatroidView(g)
            _dump({
                "rank": view.rank,
                "bases": [_edge_list(b) for b in view.bases],
            })
        return PASS
    cover = _wrap(args.file, jsonio.cover_from_json, data)
    sm = SignedMatroidView(cover)
    sizes = [args.n] if args.n else list(range(2, max(cover.base.b1(), 2)))
    try:
        out = {str(n): [_edge_list(F) for F in sm.fs_sets(n)] for n in sizes}
    except CoverError as err:
        raise UsageError(f"{args.file}: {err}") from err
    _dump(out)
    return PASS


# ---------------------------------------------------------------------------
# trigonal
# ---------------------------------------------------------------------------


def _cmd_trigonal(args) -> int:
    tower = load_tower(args.file)
    if args.emit_pi:
        _, _, pi = build_pi(tower)
        with open(args.emit_pi, "w", encoding="utf-8") as fh:
            json.dump(jsonio.graph_to_json(pi), fh, indent=2)
            fh.write("\n")
    try:
        report = verify_tower(tower, args.p_coefficient)
    except TrigonalError as err:
        raise UsageError(f"{args.file}: {err}") from err
    payload = {
        "ok": report.ok,
        "genus_base": report.g_base,
        "genus_pi": report.g_pi,
        "p_coefficient": report.p_coefficient,
        "q_case": report.q_case,
        "w0": report.w0_value,
        "numerator": report.i2_numerator,
        "detail": report.detail,
    }
    if args.report == "json":
        _dump(payload)
    else:
        status = "PASS" if report.ok else "FAIL"
        print(f"{status} tower {args.file}: genus {report.g_base} base, "
              f"genus {report.g_pi} tetragonal graph, q case {report.q_case}")
        if report.detail:
            print(f"  {report.detail}")
        else:
            print(f"  w0 = {report.w0_value}")
            print(f"  numerator = {report.i2_numerator}")
    return PASS if report.ok else FAIL


# ---------------------------------------------------------------------------
# enumerate
# ---------------------------------------------------------------------------


def _structure_json(f) -> dict:
    return {
        "source": jsonio.graph_to_json(f.source),
        "tree": jsonio.graph_to_json(f.target),
        "vertex_map": {str(v): str(f.vertex_map[v])
                       for v in sorted(f.vertex_map, key=idkey)},
        "local_degrees": {
            "vertices": {str(v): d for v, d in sorted(
                f.vertex_degree.items(), key=lambda kv: idkey(kv[0]))},
            "edges": {str(e): d for e, d in sorted(
                f.edge_degree.items(), key=lambda kv: idkey(kv[0]))},
        },
    }


def _cmd_enumerate(args) -> int:
    genus = args.genus
    n_edges = 2 * genus + 1
    if args.stage is None:
        from .pipeline import _tower_payloads

        _, counts = _tower_payloads(genus)
        _dump(counts)
        return PASS
    if args.stage == "trees":
        trees = trivalent_trees(n_edges)
        if args.count_only:
            _dump({"trees": len(trees)})
        else:
            _dump([jsonio.graph_to_json(t) for t in trees])
        return PASS
    if args.stage == "typed":
        trees = trivalent_trees(n_edges)
        if args.count_only:
            _dump({"typed": sum(len(type_markings(t)) for t in trees)})
        else:
            _dump([
                {"tree": jsonio.graph_to_json(t), **tt.to_json()}
                for t in trees
                for tt in type_markings(t)
            ])
        return PASS
    if args.stage == "monodromy":
        trees = trivalent_trees(n_edges)
        if args.count_only:
            total = sum(
                len(monodromy_assignments(tt))
                for t in trees
                for tt in type_markings(t)
            )
            _dump({"monodromy": total})
        else:
            _dump([
                {"tree": jsonio.graph_to_json(t), **mt.to_json()}
                for t in trees
                for tt in type_markings(t)
                for mt in monodromy_assignments(tt)
            ])
        return PASS
    structures, counts = generic_structures(genus)
    if args.count_only:
        _dump({"generic": counts["generic"]})
    else:
        _dump([_structure_json(f) for f in structures])
    return PASS


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _cmd_verify(args) -> int:
    report = run_verification(args.genus, args.p_coefficient, args.jobs)
    payload = report.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    counts = report.counts
    print(f"genus {report.genus}, p coefficient {report.p_coefficient}")
    print("  counts: " + ", ".join(f"{k}={v}" for k, v in counts.items()))
    print(f"  towers passed: {report.passed}/{report.towers} "
          f"in {report.elapsed:.1f}s")
    if report.all_passed:
        print(f"  all towers verified with p coefficient {report.p_coefficient}")
        return PASS
    print(f"  FAILED: {report.failed} towers; first failures:")
    for failure in report.failures[:3]:
        print(f"    structure {failure['structure']} cover {failure['cover']}: "
              f"{failure['detail']}")
    return FAIL


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------


def _parse_gram(path: str):
    data = _load_json(path)
    if not isinstance(data, list) or not data:
        raise UsageError(f"{path}: expected a JSON matrix")
    try:
        gram = tuple(tuple(Fraction(str(x)) for x in row) for row in data)
    except (ValueError, ZeroDivisionError) as err:
        raise UsageError(f"{path}: bad matrix entry: {err}") from err
    return gram


def _cmd_oracle(args) -> int:
    if (args.gram is None) == (args.cover is None):
        raise UsageError("oracle mc needs exactly one of --gram or --cover")
    if args.gram:
        gram = _parse_gram(args.gram)
    else:
        cover = load_cover(args.cover)
        if not _is_numeric(cover.base):
            raise UsageError("--cover needs numeric lengths")
        try:
            gram = oracle.prym_gram(cover)
        except (CoverError, GraphError) as err:
            raise UsageError(f"{args.cover}: {err}") from err
    try:
        result = oracle.mc_moment(gram, args.samples, args.seed)
    except ValueError as err:
        raise UsageError(str(err)) from err
    print(f"det = {_rational(result.det)}")
    print(f"I0  = sqrt({result.det}) = {_approx(result.i0)}")
    print(f"I2  = {_approx(result.i2)} +- {_approx(result.std_error)} "
          f"({result.samples} samples)")
    return PASS


# ---------------------------------------------------------------------------
# conjecture-check
# ---------------------------------------------------------------------------


def _restricted_cover(cover: DoubleCover, verts, edges) -> DoubleCover:
    sub = cover.base.subgraph(verts, edges)
    return DoubleCover(sub, {e: cover.signs[e] for e in edges})


def _conjectured_numerator(cover: DoubleCover):
    """(numerator, label) per the two conjectured formulas, or None."""
    sm = SignedMatroidView(cover)
    genus = cover.base.b1()
    fs = {n: sm.fs_sets(n) for n in range(2, max(genus, 2))}
    if all(not sets for sets in fs.values()):
        return moments.p_prym(cover, 2), "no-fs-sets"
    if len(fs.get(2, [])) == 1 and all(not fs[n] for n in fs if n > 2):
        e, f = sorted(fs[2][0], key=idkey)
        comps = cover.base.components(removed_edges={e, f})
        if len(comps) != 2:
            return None
        w_parts = [
            moments.w0_prym(_restricted_cover(cover, cv, ce))
            for cv, ce in comps
        ]
        q = qcases.p2_atom(cover.base.lengths[e], cover.base.lengths[f])
        q = q * w_parts[0] * w_parts[1]
        return q + moments.p_prym(cover, 2), "one-fs2-set"
    return None


def _cmd_conjecture(args) -> int:
    rng = random.Random(args.seed)
    checked = 0
    skipped = 0
    failures = 0
    attempts = 0
    while checked < args.count and attempts < args.count * 40:
        attempts += 1
        cover = random_free_cover(rng, rng.randint(2, 4))
        conjectured = _conjectured_numerator(cover)
        if conjectured is None:
            skipped += 1
            continue
        numerator, label = conjectured
        value = PiecewisePolynomial.coerce(numerator).evaluate({}) / 12
        w0 = moments.w0_prym(cover).evaluate({})
        exact = float(value) / math.sqrt(float(w0))
        result = oracle.mc_moment(
            oracle.prym_gram(cover), args.samples, rng.randrange(2**32)
        )
        ok = result.within(exact)
        checked += 1
        status = "agree" if ok else "DISAGREE"
        print(f"{status}: genus {cover.base.b1()} cover, {label}, "
              f"conjectured {_approx(exact)}, "
              f"mc {_approx(result.i2)} +- {_approx(result.std_error)}")
        if not ok:
            failures += 1
    print(f"checked {checked}, skipped {skipped} (no matching conjecture), "
          f"{failures} disagreements")
    return PASS if failures == 0 else FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropprym",
        description="Exact moments of tropical Jacobians and Pryms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("moments", help="moment invariants of a graph or cover")
    m.add_argument("which", choices=["jac", "prym"])
    m.add_argument("file")
    m.add_argument("--numeric", action="store_true",
                   help="also evaluate at the file's numeric lengths")
    m.add_argument("--p-coefficient", type=int, choices=[1, 2], default=2)
    m.add_argument("--report", choices=["text", "json"], default="text")
    m.set_defaults(func=_cmd_moments)

    mat = sub.add_parser("matroid", help="matroid data of a graph or cover")
    mat.add_argument("which", choices=["bases", "fs-sets"])
    mat.add_argument("file")
    mat.add_argument("--n", type=int, default=None,
                     help="FS set size (default: every size up to the rank)")
    mat.set_defaults(func=_cmd_matroid)

    tr = sub.add_parser("trigonal", help="run the tower verification")
    tr.add_argument("which", choices=["run"])
    tr.add_argument("file")
    tr.add_argument("--emit-pi", default=None, metavar="PI_JSON")
    tr.add_argument("--p-coefficient", type=int, choices=[1, 2], default=2)
    tr.add_argument("--report", choices=["text", "json"], default="text")
    tr.set_defaults(func=_cmd_trigonal)

    en = sub.add_parser("enumerate", help="enumerate pipeline stages")
    en.add_argument("stage", nargs="?", default=None,
                    choices=["trees", "typed", "monodromy", "trigonal"])
    en.add_argument("--genus", type=int, required=True)
    en.add_argument("--count-only", action="store_true")
    en.set_defaults(func=_cmd_enumerate)

    ve = sub.add_parser("verify", help="verify every tower of a genus")
    ve.add_argument("--genus", type=int, choices=[2, 3, 4], required=True)
    ve.add_argument("--p-coefficient", type=int, choices=[1, 2], default=2)
    ve.add_argument("--jobs", type=int, default=1)
    ve.add_argument("--out", default=None, metavar="REPORT_JSON")
    ve.set_defaults(func=_cmd_verify)

    orc = sub.add_parser("oracle", help="Monte-Carlo moment oracle")
    orc.add_argument("which", choices=["mc"])
    orc.add_argument("--gram", default=None)
    orc.add_argument("--cover", default=None)
    orc.add_argument("--samples", type=int, default=100_000)
    orc.add_argument("--seed", type=int, default=0)
    orc.set_defaults(func=_cmd_oracle)

    cj = sub.add_parser(
        "conjecture-check",
        help="sample random covers against the conjectured formulas",
    )
    cj.add_argument("--count", type=int, default=5)
    cj.add_argument("--samples", type=int, default=200_000)
    cj.add_argument("--seed", type=int, default=0)
    cj.set_defaults(func=_cmd_conjecture)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
