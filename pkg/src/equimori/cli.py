"""Command-line front end.

Verbs mirror the library modules: ``surface info``, ``curves enum``,
``curves graph``, ``groups closure``, ``mori run``, ``hurwitz solve``,
``hurwitz bound``, ``k3 cases``, ``covers branch-check``,
``invariants families|singular|cusp-locus`` and ``catalog mukai|platonic``.
Output is byte-deterministic: no timestamps, no locale dependence, exact
integers and rationals only.  Exit codes: 0 success, 1 domain error, 2 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import covers, curves, groups, invariants, mori, picard
from .cyclo import CycNumber
from .errors import EquimoriError

USAGE_ERROR = 2
DOMAIN_ERROR = 1


def _load_surface(args) -> picard.SurfaceModel:
    if getattr(args, "file", None):
        return picard.surface_from_json(Path(args.file).read_text())
    kind = args.model
    m = args.m
    if kind == "blowup-p2":
        return picard.blowup_p2(m)
    if kind == "blowup-p1xp1":
        return picard.blowup_p1xp1(m)
    raise EquimoriError(f"unknown model kind {kind!r}")


def _load_group(path: str) -> groups.GroupAction:
    p = Path(path)
    return groups.group_from_json(p.read_text(), base_dir=p.parent)


def _emit(args, text_lines: List[str], payload) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


# -- subcommand handlers ------------------------------------------------------


def _cmd_surface_info(args) -> int:
    model = _load_surface(args)
    endpoint = None
    try:
        endpoint = str(picard.recognize_endpoint(model))
    except EquimoriError:
        endpoint = "unrecognized"
    payload = {
        "kind": model.kind.value,
        "m": model.m,
        "rank": model.rank,
        "K2": model.k_squared(),
        "catalog_size": len(model.catalog_coords),
        "endpoint": endpoint,
    }
    lines = [
        f"kind:         {payload['kind']}",
        f"m:            {payload['m']}",
        f"rank:         {payload['rank']}",
        f"K^2:          {payload['K2']}",
        f"catalog size: {payload['catalog_size']}",
        f"endpoint:     {payload['endpoint']}",
    ]
    _emit(args, lines, payload)
    return 0


def _cmd_curves_enum(args) -> int:
    model = _load_surface(args)
    if args.classes == "minus-one":
        found = curves.enumerate_minus_one_curves(model)
    else:
        found = curves.enumerate_minus_two_classes(model)
    if args.count_only:
        print(len(found))
        return 0
    payload = curves.classes_to_json(found)
    lines = [",".join(str(v) for v in c) for c in payload]
    _emit(args, lines, payload)
    return 0


def _cmd_curves_graph(args) -> int:
    model = _load_surface(args)
    found = curves.enumerate_minus_one_curves(model)
    graph = curves.build_graph(found)
    if args.format == "dot":
        sys.stdout.write(curves.export_dot(graph))
        return 0
    inv = curves.graph_invariants(graph)
    payload = {
        "vertex_count": inv.vertex_count,
        "edge_count": inv.edge_count,
        "degree_sequence": list(inv.degree_sequence),
        "girth": inv.girth,
        "automorphism_order": inv.automorphism_order,
    }
    lines = [
        f"vertices:           {inv.vertex_count}",
        f"edges:              {inv.edge_count}",
        f"degree sequence:    {list(inv.degree_sequence)}",
        f"girth:              {inv.girth}",
        f"automorphism order: {inv.automorphism_order}",
    ]
    _emit(args, lines, payload)
    return 0


def _cmd_groups_closure(args) -> int:
    action = _load_group(args.group)
    payload = {
        "order": action.order,
        "rank": action.model.rank,
        "invariant_rank": len(groups.invariant_subspace(action)),
    }
    lines = [
        f"order:          {payload['order']}",
        f"rank:           {payload['rank']}",
        f"invariant rank: {payload['invariant_rank']}",
    ]
    _emit(args, lines, payload)
    return 0


def _cmd_mori_run(args) -> int:
    action = _load_group(args.group)
    trace = mori.reduce_model(action.model, action)
    payload = mori.trace_to_dict(trace)
    lines = []
    for k, step in enumerate(payload["steps"], 1):
        orbit = " ".join("(" + ",".join(str(v) for v in c) + ")" for c in step["orbit"])
        lines.append(f"step {k}: rank {step['rank_before']}, contract {orbit}")
    term = payload["terminal"]
    lines.append(
        f"terminal: {term['endpoint_detail']} ({term['endpoint']}), "
        f"K^2={term['K2']}, rank={term['rank']}, invariant rank={term['invariant_rank']}"
    )
    _emit(args, lines, payload)
    return 0


def _cmd_hurwitz_solve(args) -> int:
    orders = tuple(int(v) for v in args.branch.split(",") if v) if args.branch else ()
    profile = covers.BranchProfile(args.order, args.base_genus, orders)
    res = covers.riemann_hurwitz(profile)
    payload = {
        "chi": str(res.chi),
        "genus": str(res.genus),
        "feasible": res.feasible,
        "reason": res.reason,
    }
    lines = [
        f"chi:      {res.chi}",
        f"genus:    {res.genus}",
        f"feasible: {res.feasible}" + (f" ({res.reason})" if res.reason else ""),
    ]
    _emit(args, lines, payload)
    return 0


def _cmd_hurwitz_bound(args) -> int:
    print(covers.hurwitz_bound(args.genus))
    return 0


def _cmd_k3_cases(args) -> int:
    m_allowed = [int(v) for v in args.m_allowed.split(",") if v]
    cases = covers.k3_euler_solve(args.emin, m_allowed, hsigma_acts_freely=not args.allow_elliptic_pair)
    payload = [
        {
            "m": c.m,
            "n": c.n,
            "e_Y": c.e_y,
            "genus_curve": c.genus_curve,
            "branch": c.branch_label,
        }
        for c in cases
    ]
    header = f"{'m':>3} {'n':>3} {'e(Y)':>5}  branch"
    lines = [header, "-" * len(header)]
    for c in cases:
        lines.append(f"{c.m:>3} {c.n:>3} {c.e_y:>5}  {c.branch_label}")
    _emit(args, lines, payload)
    return 0


def _cmd_covers_branch_check(args) -> int:
    genera = []
    for token in args.components.split(",") if args.components else []:
        token = token.strip()
        if not token:
            continue
        if token == "rational":
            genera.append(0)
        elif token == "elliptic":
            genera.append(1)
        elif token.startswith("genus:"):
            genera.append(int(token.split(":", 1)[1]))
        else:
            genera.append(int(token))
    verdict = covers.branch_type_check(genera)
    payload = {"valid": verdict.valid, "reason": verdict.reason}
    _emit(args, [f"{'valid' if verdict.valid else 'invalid'}: {verdict.reason}"], payload)
    return 0


def _cmd_invariants_families(args) -> int:
    fams = invariants.eigen_families()
    payload = []
    lines = []
    for fam in fams:
        chars = dict(fam.character)
        payload.append(
            {
                "label": fam.label,
                "dimension": fam.dimension,
                "character": {k: v for k, v in fam.character},
                "basis": {
                    name: form.to_json_dict() for name, form in zip(fam.names, fam.basis)
                },
            }
        )
        lines.append(f"{fam.label}: dimension {fam.dimension}, "
                     f"tau -> {chars['tau']:+d}, g -> {chars['g']:+d}")
        for name, form in zip(fam.names, fam.basis):
            lines.append(f"  {name} = {form}")
    _emit(args, lines, payload)
    return 0


def _cmd_invariants_singular(args) -> int:
    x = CycNumber.parse(args.x)
    res = invariants.singular_solve_at(x)
    payload = {
        "x": str(res.x),
        "kind": res.kind,
        "hessian_rank": res.hessian_rank,
        "coefficients": [str(c) for c in res.coefficients] if res.coefficients else None,
    }
    lines = [f"x = {res.x}", f"kind: {res.kind}"]
    if res.coefficients:
        a1, a2, a3 = res.coefficients
        lines.append(f"a1 = {a1}")
        lines.append(f"a2 = {a2}")
        lines.append(f"a3 = {a3}")
        lines.append(f"hessian rank: {res.hessian_rank}")
    _emit(args, lines, payload)
    return 0


def _cmd_invariants_cusp_locus(args) -> int:
    q, common, remaining = invariants.cusp_locus_factors()
    payload = {
        "degree": q.degree(),
        "reducible_gcd_degree": common.degree(),
        "irreducible_part_degree": remaining.degree(),
        "q": str(q),
        "irreducible_part": str(remaining),
    }
    lines = [
        f"deg q = {q.degree()}",
        f"deg gcd(q, reducibility locus) = {common.degree()}",
        f"deg q / gcd = {remaining.degree()}",
        f"q = {q}",
        f"q / gcd = {remaining}",
    ]
    _emit(args, lines, payload)
    return 0


def _cmd_catalog_mukai(args) -> int:
    entries = groups.mukai_catalog()
    payload = [
        {
            "index": e.index,
            "name": e.name,
            "order": e.order,
            "structure": e.structure,
            "structure_order": e.structure_order,
            "consistent": e.consistent,
        }
        for e in entries
    ]
    header = f"{'#':>2} {'name':<9} {'order':>5}  {'structure':<22} check"
    lines = [header, "-" * len(header)]
    for e in entries:
        mark = "ok" if e.consistent else f"FAIL ({e.structure_order})"
        lines.append(f"{e.index:>2} {e.name:<9} {e.order:>5}  {e.structure:<22} {mark}")
    _emit(args, lines, payload)
    return 0


def _cmd_catalog_platonic(args) -> int:
    entries = covers.platonic_catalog()
    payload = [{"name": name, "order": order} for name, order in entries]
    lines = [f"{name:<12} {order}" for name, order in entries]
    _emit(args, lines, payload)
    return 0


# -- parser -------------------------------------------------------------------


def _add_surface_args(p: argparse.ArgumentParser):
    p.add_argument("--model", choices=["blowup-p2", "blowup-p1xp1"], default="blowup-p2")
    p.add_argument("--m", type=int, default=0, help="number of blown-up points")
    p.add_argument("--file", help="surface JSON file (overrides --model/--m)")


def _add_format_arg(p: argparse.ArgumentParser, extra=()):
    p.add_argument("--format", choices=["text", "json", *extra], default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equimori",
        description="Equivariant reduction of rational-surface lattices and the "
        "supporting branched-cover and invariant-curve arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_surface = sub.add_parser("surface", help="surface model inspection")
    surface_sub = p_surface.add_subparsers(dest="subcommand", required=True)
    p = surface_sub.add_parser("info", help="rank, K^2, catalog, endpoint label")
    _add_surface_args(p)
    _add_format_arg(p)
    p.set_defaults(func=_cmd_surface_info)

    p_curves = sub.add_parser("curves", help="negative-curve enumeration and graphs")
    curves_sub = p_curves.add_subparsers(dest="subcommand", required=True)
    p = curves_sub.add_parser("enum", help="enumerate (-1)-curves or (-2)-classes")
    _add_surface_args(p)
    p.add_argument("--classes", choices=["minus-one", "minus-two"], default="minus-one")
    p.add_argument("--count-only", action="store_true")
    _add_format_arg(p)
    p.set_defaults(func=_cmd_curves_enum)
    p = curves_sub.add_parser("graph", help="intersection graph of the (-1)-curves")
    _add_surface_args(p)
    _add_format_arg(p, extra=("dot",))
    p.set_defaults(func=_cmd_curves_graph)

    p_groups = sub.add_parser("groups", help="lattice isometry groups")
    groups_sub = p_groups.add_subparsers(dest="subcommand", required=True)
    p = groups_sub.add_parser("closure", help="close a generator set and report the order")
    p.add_argument("--group", required=True, help="group config JSON file")
    _add_format_arg(p)
    p.set_defaults(func=_cmd_groups_closure)

    p_mori = sub.add_parser("mori", help="equivariant reduction")
    mori_sub = p_mori.add_subparsers(dest="subcommand", required=True)
    p = mori_sub.add_parser("run", help="reduce to a minimal model and print the trace")
    p.add_argument("--group", required=True, help="group config JSON file")
    _add_format_arg(p)
    p.set_defaults(func=_cmd_mori_run)

    p_hurwitz = sub.add_parser("hurwitz", help="ramified-cover arithmetic")
    hurwitz_sub = p_hurwitz.add_subparsers(dest="subcommand", required=True)
    p = hurwitz_sub.add_parser("solve", help="Euler characteristic and genus of the cover")
    p.add_argument("--order", type=int, required=True, help="group order")
    p.add_argument("--base-genus", type=int, default=0)
    p.add_argument("--branch", default="", help="comma-separated branch orders n(b)")
    _add_format_arg(p)
    p.set_defaults(func=_cmd_hurwitz_solve)
    p = hurwitz_sub.add_parser("bound", help="automorphism bound 84(g-1)")
    p.add_argument("--genus", type=int, required=True)
    p.set_defaults(func=_cmd_hurwitz_bound)

    p_k3 = sub.add_parser("k3", help="double-cover case analysis")
    k3_sub = p_k3.add_subparsers(dest="subcommand", required=True)
    p = k3_sub.add_parser("cases", help="branch shapes consistent with e(K3) = 24")
    p.add_argument("--emin", type=int, required=True, help="Euler number of the minimal model")
    p.add_argument("--m-allowed", default="0,8,16", help="admissible contracted-fiber counts")
    p.add_argument(
        "--allow-elliptic-pair",
        action="store_true",
        help="keep the two-elliptic-curve branch shape (off under the free-action hypothesis)",
    )
    _add_format_arg(p)
    p.set_defaults(func=_cmd_k3_cases)

    p_covers = sub.add_parser("covers", help="branch-locus shape checks")
    covers_sub = p_covers.add_subparsers(dest="subcommand", required=True)
    p = covers_sub.add_parser("branch-check", help="classify a branch-component multiset")
    p.add_argument(
        "--components",
        default="",
        help="comma-separated kinds: rational, elliptic, genus:<g> (or bare genus numbers)",
    )
    _add_format_arg(p)
    p.set_defaults(func=_cmd_covers_branch_check)

    p_inv = sub.add_parser("invariants", help="invariant (4,4)-curve analysis")
    inv_sub = p_inv.add_subparsers(dest="subcommand", required=True)
    p = inv_sub.add_parser("families", help="character families of invariant curves")
    _add_format_arg(p)
    p.set_defaults(func=_cmd_invariants_families)
    p = inv_sub.add_parser("singular", help="singular member through ([1:x],[1:x])")
    p.add_argument("--x", required=True, help="field element literal, e.g. '2' or '1/2 + z^2'")
    _add_format_arg(p)
    p.set_defaults(func=_cmd_invariants_singular)
    p = inv_sub.add_parser("cusp-locus", help="degree-24 cusp locus and its reducible part")
    _add_format_arg(p)
    p.set_defaults(func=_cmd_invariants_cusp_locus)

    p_catalog = sub.add_parser("catalog", help="reference tables")
    catalog_sub = p_catalog.add_subparsers(dest="subcommand", required=True)
    p = catalog_sub.add_parser("mukai", help="maximal symplectic groups")
    _add_format_arg(p)
    p.set_defaults(func=_cmd_catalog_mukai)
    p = catalog_sub.add_parser("platonic", help="finite rotation groups of the sphere")
    _add_format_arg(p)
    p.set_defaults(func=_cmd_catalog_platonic)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return args.func(args)
    except (EquimoriError, ValueError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
