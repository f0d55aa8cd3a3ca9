"""``kodaira-lab`` command line.

Exit status: 0 when every checked property holds, 1 when one fails,
2 on usage errors.  ``--json`` emits a report validated by
``schemas/report.schema.json``; ``--csv`` is available for tables.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import fp_groups, geometry, lie, topology
from . import oscillator as osc
from .exact_linalg import to_fraction
from .oscillator import Flavor, LatticeId, OscElement

SEED_ENV = "KODAIRA_LAB_SEED"


class UsageError(Exception):
    pass


def _rat(v) -> str:
    return str(Fraction(v))


def _vec(v) -> list[str]:
    return [_rat(x) for x in v]


def _form_json(alg: lie.LieAlgebra, form) -> dict:
    return {"text": alg.format_form(form),
            "terms": [{"monomial": list(m), "coeff": _rat(c)} for m, c in sorted(form.items())]}


def _poly_text(coeffs) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = Fraction(coeffs[i])
        if not c:
            continue
        mono = "" if i == 0 else ("λ" if i == 1 else f"λ^{i}")
        coef = str(abs(c)) if (abs(c) != 1 or not mono) else ""
        terms.append(("-" if c < 0 else "+", coef + mono))
    if not terms:
        return "0"
    head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    return " ".join([head] + [f"{sgn} {t}" for sgn, t in terms[1:]])


# ---------------------------------------------------------------------------
# argument parsing helpers


_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


def parse_rational(text: str) -> Fraction:
    if not _RATIONAL.fullmatch(text.strip()):
        raise argparse.ArgumentTypeError(f"not a rational 'p/q': {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise argparse.ArgumentTypeError(f"zero denominator in {text!r}") from None


def parse_flavor(text: str) -> Flavor:
    try:
        return Flavor.parse(text)
    except osc.LatticeError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


NAMED_ELEMENTS = {
    "e": OscElement(), "a": OscElement(0, 1), "b": OscElement(0, 0, 1),
    "s": OscElement(1), "s2": OscElement(2), "s4": OscElement(4),
}


def parse_element(text: str) -> OscElement:
    """JSON ``{"q":..,"x":..}``, ``q,x,y,z`` or a name among a, b, e, s, s2, s4."""
    text = text.strip()
    if text in NAMED_ELEMENTS:
        return NAMED_ELEMENTS[text]
    try:
        if text.startswith("{"):
            return OscElement.from_json(json.loads(text))
        parts = [p.strip() for p in text.strip("()").split(",")]
        if len(parts) != 4:
            raise ValueError
        return OscElement(int(parts[0]), *(to_fraction(p) for p in parts[1:]))
    except (ValueError, KeyError, TypeError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"cannot parse element {text!r}; use JSON, 'q,x,y,z' or one of "
            f"{', '.join(NAMED_ELEMENTS)}") from None


def _load_alg(name: str) -> lie.LieAlgebra:
    try:
        return lie.load(name)
    except (lie.LieAlgebraError, json.JSONDecodeError, KeyError) as exc:
        raise UsageError(str(exc)) from None


def _load_j(spec: str | None) -> list:
    if spec in (None, "builtin"):
        return geometry.standard_j()
    try:
        data = json.loads(Path(spec).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read J from {spec!r}: {exc}") from None
    if isinstance(data, dict):
        data = data.get("J")
    return [[to_fraction(x) for x in row] for row in data]


# ---------------------------------------------------------------------------
# commands; each returns (inputs, results, passed, text lines[, csv rows])


def cmd_betti(args):
    if args.target == "lie":
        if not args.name:
            raise UsageError("betti lie needs an algebra name or JSON file")
        alg = _load_alg(args.name)
        b = lie.betti(alg)
        return ({"target": "lie", "algebra": args.name}, {"betti": b}, None,
                [" ".join(map(str, b))], [["algebra"] + [f"b{i}" for i in range(len(b))],
                                          [alg.name or args.name] + b])
    if args.k is None or args.flavor is None:
        raise UsageError("betti solvmanifold needs --k and --flavor")
    lat = LatticeId(args.k, args.flavor)
    b = topology.solvmanifold_betti(lat)
    results: dict[str, Any] = {"lattice": str(lat), "betti": b,
                               "duality": topology.duality_checks(b)}
    lines = [" ".join(map(str, b))]
    rows = [["manifold", "b0", "b1", "b2", "b3", "b4"]]
    passed = results["duality"]
    if args.table:
        table = []
        lines = ["manifold       b0 b1 b2 b3 b4"]
        for f in Flavor:
            row = topology.solvmanifold_betti(LatticeId(args.k, f))
            name = f"M_{{{args.k},{f.symbol}}}"
            table.append({"manifold": name, "betti": row})
            lines.append(f"{name:<14} " + "  ".join(map(str, row)))
            rows.append([name] + row)
            passed &= topology.duality_checks(row)
        results["table"] = table
    else:
        rows.append([f"M_{{{args.k},{lat.flavor.symbol}}}"] + b)
    return ({"target": "solvmanifold", "k": args.k, "flavor": lat.flavor.value,
             "table": args.table}, results, passed, lines, rows)


def _lat(args) -> LatticeId:
    if args.k is None:
        raise UsageError("--k is required")
    return LatticeId(args.k, args.flavor or Flavor.ZERO)


def cmd_lattice(args):
    sub = args.sub
    bound = args.bound
    if bound is not None and bound < 1:
        raise UsageError("--bound must be >= 1")
    if sub == "verify":
        lat = _lat(args)
        ok = fp_groups.verify_presentation(lat, bound or 2)
        pres = fp_groups.builtin_presentation(lat)
        return ({"k": lat.k, "flavor": lat.flavor.value, "bound": bound or 2},
                {"lattice": str(lat), "presentation": pres.to_text(), "verified": ok}, ok,
                [pres.to_text(), "pass" if ok else "FAIL"])
    if sub == "center":
        lat = _lat(args)
        ok = osc.center_box_check(lat, bound or 4)
        return ({"k": lat.k, "flavor": lat.flavor.value, "bound": bound or 4},
                {"lattice": str(lat), "center_matches": ok}, ok, ["pass" if ok else "FAIL"])
    if sub == "commutator":
        k = _lat(args).k
        ok = osc.commutator_box_check(k, bound or 3)
        return ({"k": k, "bound": bound or 3}, {"commutator_matches": ok}, ok,
                ["pass" if ok else "FAIL"])
    if sub in ("index", "normal"):
        if args.k is None or args.sub_flavor is None or args.super_flavor is None:
            raise UsageError(f"lattice {sub} needs --k, --sub and --super")
        lo, hi = LatticeId(args.k, args.sub_flavor), LatticeId(args.k, args.super_flavor)
        try:
            if sub == "index":
                n = osc.covering_index(lo, hi)
                return ({"k": args.k, "sub": lo.flavor.value, "super": hi.flavor.value},
                        {"index": n}, None, [str(n)])
            ok = osc.normality_check(lo, hi, bound or 2)
        except osc.LatticeError as exc:
            raise UsageError(str(exc)) from None
        return ({"k": args.k, "sub": lo.flavor.value, "super": hi.flavor.value,
                 "bound": bound or 2}, {"normal": ok}, ok, ["pass" if ok else "FAIL"])
    if sub == "classify":
        if None in (args.l, args.q, args.r, args.k):
            raise UsageError("lattice classify needs --l --q --r --k")
        inputs = {"l": args.l, "q": _rat(args.q), "r": _rat(args.r), "k": args.k}
        c = osc.classify_product_lattice(args.l, args.q, args.r, args.k)  # LatticeError -> exit 2
        iso = c.iso
        return (inputs, {"lattice": str(c.lattice), "iso": iso.name,
                         "angle_factor": _rat(iso.angle_factor),
                         "plane": [_vec(r) for r in iso.plane], "z_factor": _rat(iso.z_factor),
                         "homomorphism_verified": c.verified},
                c.verified, [c.describe(), "pass" if c.verified else "FAIL"])
    if sub == "exotic":
        rep = osc.exotic_lattice_check(bound or 3)
        ab = fp_groups.abelianization(fp_groups.exotic_presentation())
        res = {"closed": rep.closed, "homomorphism": rep.homomorphism,
               "lands_in_target": rep.lands_in_target, "injective": rep.injective,
               "surjective_on_generators": rep.surjective_on_generators,
               "generators_without_preimage": [g.to_json() for g in rep.missing_generators],
               "abelianization": {"free_rank": ab.free_rank, "torsion": list(ab.torsion)}}
        lines = [f"closed={rep.closed} homomorphism={rep.homomorphism} "
                 f"into Λ_{{2,π}}={rep.lands_in_target} injective={rep.injective}",
                 f"surjective={rep.surjective_on_generators}; H1(L) = {ab}",
                 "pass" if rep.passed else "FAIL"]
        return {"bound": bound or 3}, res, rep.passed, lines
    raise UsageError(f"unknown lattice subcommand {sub!r}")


def cmd_group(args):
    els = args.elements
    need = {"mul": 2, "comm": 2, "inv": 1}[args.op]
    if len(els) != need:
        raise UsageError(f"group {args.op} takes {need} element(s)")
    if args.op == "mul":
        out = osc.mul(*els)
    elif args.op == "comm":
        out = osc.commutator(*els)
    else:
        out = osc.inv(els[0])
    return ({"op": args.op, "elements": [e.to_json() for e in els]},
            {"element": out.to_json()}, None, [json.dumps(out.to_json())])


def cmd_invariants(args):
    if args.sub == "abelianization":
        lat = _lat(args)
        ab = fp_groups.abelianization(fp_groups.builtin_presentation(lat))
        b1 = topology.solvmanifold_betti(lat)[1]
        ok = ab.free_rank == b1
        return ({"k": lat.k, "flavor": lat.flavor.value},
                {"lattice": str(lat), "free_rank": ab.free_rank, "torsion": list(ab.torsion),
                 "b1": b1},
                ok, [f"rank {ab.free_rank}, torsion {list(ab.torsion)}"])
    rep = fp_groups.distinguish_all(args.kmax)
    table = [{"lattice": str(lat), "k": lat.k, "flavor": lat.flavor.value,
              "free_rank": ab.free_rank, "torsion": list(ab.torsion)} for lat, ab in rep.table]
    lines = [f"{row['lattice']:<12} rank {row['free_rank']}, torsion {row['torsion']}"
             for row in table]
    lines.append(f"{len(table)} pairwise distinct: {'pass' if rep.pairwise_distinct else 'FAIL'}")
    rows = [["k", "flavor", "free_rank", "torsion"]] + [
        [r["k"], r["flavor"], r["free_rank"], " ".join(map(str, r["torsion"]))] for r in table]
    return ({"kmax": args.kmax},
            {"table": table, "count": len(table), "pairwise_distinct": rep.pairwise_distinct},
            rep.pairwise_distinct, lines, rows)


def cmd_geometry(args):
    alg = _load_alg(args.alg)
    if args.sub == "symplectic":
        if alg.dim != 4:
            raise UsageError("symplectic test needs a 4-dimensional algebra")
        others = [lie.oscillator()] if alg.name == "r_x_h3" else []
        w = geometry.invariant_symplectic(alg, others)
        if w is None:
            return ({"alg": args.alg}, {"witness": None}, None, ["none"])
        res = {"witness": _form_json(alg, w.form), "closed": w.closed,
               "top_coefficient": _rat(w.top_coefficient), "verified": w.verified,
               "closed_in": w.closed_in}
        lines = [f"witness {alg.format_form(w.form)}",
                 f"dω = 0: {w.closed}; ω∧ω = {w.top_coefficient}·vol"]
        lines += [f"closed in {k}: {v}" for k, v in w.closed_in.items()]
        return {"alg": args.alg}, res, w.verified, lines
    try:
        j = geometry.check_complex(_load_j(args.J))
        if len(j) != alg.dim:
            raise UsageError("J and algebra dimensions differ")
        if args.sub == "nijenhuis":
            n = geometry.nijenhuis(alg, j)
            nonzero = [{"i": a, "j": b, "value": _vec(v)}
                       for a, row in enumerate(n) for b, v in enumerate(row) if any(v)]
            integrable = not nonzero
            return ({"alg": args.alg, "J": args.J or "builtin"},
                    {"integrable": integrable, "nonzero": nonzero}, None,
                    ["integrable" if integrable else f"not integrable ({len(nonzero)} nonzero pairs)"])
        ab = geometry.is_abelian_cs(alg, j)
        return ({"alg": args.alg, "J": args.J or "builtin"}, {"abelian": ab}, None,
                ["true" if ab else "false"])
    except geometry.GeometryError as exc:
        raise UsageError(str(exc)) from None


def cmd_algebra(args):
    alg = _load_alg(args.name)
    bad = lie.validate(alg)
    res: dict[str, Any] = {"dim": alg.dim, "jacobi_violations": len(bad)}
    lines = [f"dim {alg.dim}", f"Jacobi violations: {len(bad)}"]
    if not bad:
        seed = int(os.environ.get(SEED_ENV, "0"))
        coh = lie.cohomology(alg)
        verdict = lie.completely_solvable_witness(alg, seed=seed)
        res.update({
            "unimodular": lie.is_unimodular(alg),
            "betti": list(coh.betti),
            "representatives": [coh.labelled(p) for p in range(alg.dim + 1)],
            "completely_solvable_witness": None if verdict.witness is None else {
                "vector": _vec(verdict.witness), "charpoly": _vec(verdict.charpoly),
                "nonzero_factor": _vec(verdict.nonzero_factor),
                "real_roots": verdict.real_roots, "distinct_roots": verdict.distinct_roots},
            "trials": verdict.trials, "seed": seed,
        })
        lines += [f"unimodular: {res['unimodular']}",
                  "betti: " + " ".join(map(str, coh.betti))]
        lines += [f"H^{p}: {', '.join(r) or '0'}" for p, r in enumerate(res["representatives"])]
        if verdict.witness is None:
            lines.append(f"complete solvability: no witness in {verdict.trials} trials (inconclusive)")
        else:
            lines.append(f"not completely solvable: ad_v for v = ({', '.join(_vec(verdict.witness))}) has "
                         f"{verdict.real_roots} real of {verdict.distinct_roots} distinct roots; "
                         f"nonzero eigenvalues solve {_poly_text(verdict.nonzero_factor)}")
    return {"algebra": args.name}, res, not bad, lines


MODELS = {"kt": topology.kodaira_thurston_model, "quotient": topology.quotient_model}
ASSIGNMENTS = {"kt": topology.KT_ASSIGNMENT, "quotient": topology.QUOTIENT_ASSIGNMENT}


def cmd_model(args):
    try:
        if args.model in MODELS:
            m = MODELS[args.model]()
        else:
            text = Path(args.model).read_text() if Path(args.model).exists() else args.model
            m = topology.parse_cdga(text)
        b = topology.cdga_cohomology(m)
    except (topology.TopologyError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    res: dict[str, Any] = {"betti": b}
    lines = ["betti: " + " ".join(map(str, b))]
    passed = None
    if args.k is not None:
        lat = LatticeId(args.k, args.flavor or Flavor.ZERO)
        assignment = ASSIGNMENTS.get(args.model, {})
        if args.assign:
            assignment = dict(kv.split("=", 1) for kv in args.assign.split(","))
        try:
            rep = topology.quasi_iso_report(m, lat, assignment)
        except topology.TopologyError as exc:
            raise UsageError(str(exc)) from None
        passed = rep.passed
        res["quasi_isomorphism"] = {"lattice": str(lat), "passed": rep.passed,
                                    "target_betti": list(rep.target_betti),
                                    "image_ranks": list(rep.image_ranks)}
        lines.append(f"quasi-isomorphism onto {lat}: {'pass' if rep.passed else 'FAIL'}")
    return {"model": args.model, "k": args.k}, res, passed, lines


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    g = fmt.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="machine-readable report")
    g.add_argument("--csv", action="store_true", help="CSV table (table commands only)")

    p = argparse.ArgumentParser(prog="kodaira-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("betti", parents=[fmt], help="Betti numbers")
    b.add_argument("target", choices=["lie", "solvmanifold"])
    b.add_argument("name", nargs="?", help="builtin algebra or JSON file (for 'lie')")
    b.add_argument("--k", type=positive_int)
    b.add_argument("--flavor", type=parse_flavor)
    b.add_argument("--table", action="store_true", help="all three flavors")
    b.set_defaults(func=cmd_betti)

    lt = sub.add_parser("lattice", parents=[fmt], help="lattice checks")
    lt.add_argument("sub", choices=["verify", "center", "commutator", "index", "normal",
                                    "classify", "exotic"])
    lt.add_argument("--k", type=positive_int)
    lt.add_argument("--flavor", type=parse_flavor)
    lt.add_argument("--sub", "--sub-flavor", dest="sub_flavor", type=parse_flavor)
    lt.add_argument("--super", "--super-flavor", dest="super_flavor", type=parse_flavor)
    lt.add_argument("--bound", type=int)
    lt.add_argument("--l", type=int)
    lt.add_argument("--q", type=parse_rational)
    lt.add_argument("--r", type=parse_rational)
    lt.set_defaults(func=cmd_lattice)

    gr = sub.add_parser("group", parents=[fmt], help="oscillator group arithmetic")
    gr.add_argument("op", choices=["mul", "inv", "comm"])
    gr.add_argument("elements", nargs="+", type=parse_element)
    gr.set_defaults(func=cmd_group)

    iv = sub.add_parser("invariants", parents=[fmt], help="abelianization invariants")
    iv.add_argument("sub", choices=["abelianization", "distinguish"])
    iv.add_argument("--k", type=positive_int)
    iv.add_argument("--flavor", type=parse_flavor)
    iv.add_argument("--kmax", type=int, default=10)
    iv.set_defaults(func=cmd_invariants)

    ge = sub.add_parser("geometry", parents=[fmt], help="complex/symplectic structures")
    ge.add_argument("sub", choices=["nijenhuis", "abelian-cs", "symplectic"])
    ge.add_argument("--alg", required=True)
    ge.add_argument("--J", help="'builtin' or a JSON file with a 4x4 matrix")
    ge.set_defaults(func=cmd_geometry)

    al = sub.add_parser("algebra", parents=[fmt], help="structure of a Lie algebra")
    al.add_argument("name")
    al.set_defaults(func=cmd_algebra)

    mo = sub.add_parser("model", parents=[fmt], help="odd-generator CDGA cohomology")
    mo.add_argument("model", help="'kt', 'quotient', a CDGA text or a file")
    mo.add_argument("--k", type=positive_int, help="check a quasi-isomorphism onto G/Λ_k")
    mo.add_argument("--flavor", type=parse_flavor)
    mo.add_argument("--assign", help="images like t1=τ,w3=α*β*γ")
    mo.set_defaults(func=cmd_model)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        out = args.func(args)
    except (UsageError, osc.LatticeError, fp_groups.PresentationError) as exc:
        print(f"kodaira-lab: error: {exc}", file=sys.stderr)
        return 2
    inputs, results, passed, lines = out[:4]
    rows = out[4] if len(out) > 4 else None
    elapsed = time.perf_counter() - start
    if args.json:
        report = {"command": args.command, "argv": argv, "inputs": inputs,
                  "results": results, "passed": passed, "timing_s": round(elapsed, 6)}
        print(json.dumps(report, ensure_ascii=False, indent=2))
    elif args.csv:
        if rows is None:
            print("kodaira-lab: error: --csv is only available for table outputs",
                  file=sys.stderr)
            return 2
        import csv
        csv.writer(sys.stdout, lineterminator="\n").writerows(rows)
    else:
        print("\n".join(lines))
    return 1 if passed is False else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
