"""Command line front end.

Every subcommand reads one JSON request (``--input FILE`` or ``-`` for
stdin), validates it, calls the library and prints JSON.  Rationals are
written as ``"p/q"`` strings and ∞ as ``"inf"``.  Exit status is 0 for a
positive verdict, 1 for a negative one and 2 for errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Any, Sequence

import jsonschema

from . import grass2, hyperdet, linsection, matrixvar, tropcore
from .tropcore import TropMatrix, format_trop, to_trop
from .polyhedra import verify_certificate
from .valfield import Polynomial, hypersurface_membership

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2

RATIONAL = {"type": ["string", "integer"], "pattern": r"^\s*(-?\d+(/\d+)?|inf)\s*$"}
VECTOR = {"type": "array", "items": RATIONAL}
MATRIX = {"type": "array", "items": VECTOR, "minItems": 1}
POLYNOMIAL = {
    "type": "object",
    "required": ["vars", "terms"],
    "properties": {
        "vars": {"type": "array", "items": {"type": "string"}},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coeff"],
                "properties": {
                    "coeff": {"type": "array", "items": {"type": "array", "items": RATIONAL, "minItems": 2, "maxItems": 2}},
                    "exp": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
                },
            },
        },
    },
}
POINT = {
    "type": "object",
    "properties": {"values": VECTOR, "matrix": MATRIX},
    "anyOf": [{"required": ["values"]}, {"required": ["matrix"]}],
}
REQUEST_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "tropsection request",
    "type": "object",
    "properties": {
        "family": {"enum": ["linear", "grass2", "rank2", "corank1", "hyperdet", "hypersurface"]},
        "m": {"type": "integer", "minimum": 2},
        "forms": MATRIX,
        "equations": MATRIX,
        "point": POINT,
        "polynomial": POLYNOMIAL,
        "polynomials": {"type": "array", "items": POLYNOMIAL},
        "matrix": MATRIX,
        "a": VECTOR,
        "b": VECTOR,
        "seed": {"type": "integer"},
    },
}


class RequestError(Exception):
    pass


def fmt(x) -> str:
    return format_trop(x)


def fmt_vec(v) -> list[str]:
    return [fmt(x) for x in v]


def load_request(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise RequestError(f"cannot read request: {exc}") from exc
    try:
        jsonschema.validate(data, REQUEST_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise RequestError(f"invalid request: {exc.message}") from exc
    return data


def _family(args, req) -> str:
    fam = args.family or req.get("family")
    if fam is None:
        raise RequestError("no family given")
    return fam


def _values(req) -> list:
    pt = req.get("point")
    if pt is None or "values" not in pt:
        raise RequestError("point.values required")
    return [to_trop(v) for v in pt["values"]]


def _matrix(req) -> TropMatrix:
    pt = req.get("point") or {}
    rows = pt.get("matrix", req.get("matrix"))
    if rows is None:
        raise RequestError("point.matrix required")
    return TropMatrix.from_rows(rows)


def _linear_space(req) -> linsection.LinearSpaceParam:
    if "forms" in req:
        return linsection.LinearSpaceParam(tuple(tuple(Fraction(str(x)) for x in r) for r in req["forms"]))
    if "equations" in req:
        return linsection.LinearSpaceParam.from_equations([[Fraction(str(x)) for x in r] for r in req["equations"]])
    raise RequestError("linear family needs forms or equations")


def _grass_point(req) -> grass2.PlueckerPoint:
    vals = _values(req)
    m = req.get("m")
    if m is None:
        m = next((k for k in range(2, 40) if k * (k - 1) // 2 == len(vals)), None)
        if m is None:
            raise RequestError("number of values is not a binomial coefficient C(m, 2)")
    return grass2.PlueckerPoint.from_sequence(m, vals)


# --- section builders per family -------------------------------------------


def build_section(fam: str, req: dict):
    """Return ``(evaluate, decomposition_json)`` for the requested point."""
    if fam == "linear":
        Y = _linear_space(req)
        sp = linsection.build_lin_section(Y, _values(req))
        dec = {
            "infinite": sorted(sp.zero),
            "basis": list(sp.basis),
            "rewrite": {Y.names[i]: {Y.names[j]: fmt(r) for j, r in row.items()} for i, row in sorted(sp.rewrite.items())},
        }
        return (lambda f: linsection.eval_lin_section(sp, f)), dec
    if fam == "grass2":
        xi = _grass_point(req)
        sp = grass2.build_grass_section(xi)
        dec = {
            "support": list(sp.J),
            "tau": fmt_vec(sp.tau),
            "eta": fmt_vec(sp.eta.as_sequence()) if sp.eta else None,
            "tree": [list(e) for e in sp.tree],
        }
        return (lambda f: grass2.eval_grass_section(sp, f)), dec
    if fam == "rank2":
        sp = matrixvar.build_rank2_section(_matrix(req))
        d = sp.decomposition
        dec = {
            "rows": list(d.I),
            "cols": list(d.J),
            "tau": fmt_vec(d.tau),
            "rho": fmt_vec(d.rho),
            "eta": d.eta.to_json(),
            "tree": [list(e) for e in sp.tree],
        }
        return (lambda f: matrixvar.eval_rank2_section(sp, f)), dec
    if fam == "corank1":
        sp = matrixvar.build_corank1_section(_matrix(req))
        dec = {"tau": fmt_vec(sp.tau), "eta": sp.eta.to_json(), "basis": list(sp.inner.basis)}
        return (lambda f: matrixvar.eval_corank1_section(sp, f)), dec
    if fam == "hyperdet":
        ctx = hyperdet.default_context()
        sp = hyperdet.hyperdet_section(ctx, _values(req))
        dec = {"cone": sp.cone_index, "tau": fmt_vec(sp.tau), "eta": fmt_vec(sp.eta)}
        return (lambda f: hyperdet.eval_hyperdet_section(sp, f)), dec
    raise RequestError(f"no section for family {fam!r}")


def membership(fam: str, req: dict) -> tuple[bool, Any]:
    if fam == "linear":
        ok, wit = linsection.trop_membership_linear(_linear_space(req), _values(req))
        return ok, sorted(wit) if wit else None
    if fam == "grass2":
        ok, wit = grass2.membership_trop_gr2(_grass_point(req))
        return ok, list(wit) if wit else None
    if fam == "rank2":
        ok, wit = matrixvar.membership_rank2(_matrix(req))
        return ok, [list(wit[0]), list(wit[1])] if wit else None
    if fam == "corank1":
        xi = _matrix(req)
        return matrixvar.membership_corank1_U(xi), {"in_trop": matrixvar.membership_corank1(xi)}
    if fam == "hyperdet":
        ctx = hyperdet.default_context()
        vals = _values(req)
        return hyperdet.membership_hyperdet(ctx, vals), None
    if fam == "hypersurface":
        if "polynomial" not in req:
            raise RequestError("hypersurface family needs a polynomial")
        f = Polynomial.from_json(req["polynomial"])
        vals = _values(req)
        value, count = f.trop_eval_min(vals)
        return hypersurface_membership(f, vals), {"value": fmt(value), "attaining_terms": count}
    raise RequestError(f"unknown family {fam!r}")


# --- subcommands ------------------------------------------------------------


def cmd_membership(args, req) -> tuple[int, dict]:
    fam = _family(args, req)
    ok, wit = membership(fam, req)
    return (EXIT_OK if ok else EXIT_NEGATIVE), {"family": fam, "member": ok, "witness": wit}


def _polynomials(req) -> list[Polynomial]:
    polys = req.get("polynomials")
    if polys is None:
        raise RequestError("polynomials required")
    return [Polynomial.from_json(p) for p in polys]


def cmd_section_eval(args, req) -> tuple[int, dict]:
    fam = _family(args, req)
    ok, wit = membership(fam, req)
    if not ok:
        return EXIT_NEGATIVE, {"family": fam, "member": False, "witness": wit}
    evaluate, dec = build_section(fam, req)
    out: dict[str, Any] = {"family": fam, "values": [fmt(evaluate(f)) for f in _polynomials(req)]}
    if args.verbose:
        out["decomposition"] = dec
    return EXIT_OK, out


def cmd_decompose(args, req) -> tuple[int, dict]:
    fam = _family(args, req)
    ok, wit = membership(fam, req)
    if not ok:
        return EXIT_NEGATIVE, {"family": fam, "member": False, "witness": wit}
    _, dec = build_section(fam, req)
    return EXIT_OK, {"family": fam, "decomposition": dec}


def cmd_rank(args, req) -> tuple[int, dict]:
    m = _matrix(req)
    out: dict[str, Any] = {"tropical_rank": tropcore.tropical_rank(m)}
    if m.rows == m.cols:
        d = tropcore.trop_det(m)
        out["determinant"] = {"value": fmt(d.value), "attaining_count": d.attaining_count, "singular": d.singular}
    return EXIT_OK, out


def cmd_verify_hyperdet(args, req) -> tuple[int, dict]:
    ctx = hyperdet.default_context()
    orbits = hyperdet.bergman_orbits(ctx)
    report: dict[str, Any] = {
        "context": {
            "delta_terms": len(ctx.delta.terms),
            "kernel_dimension": len(ctx.kernel),
            "image_dimension": ctx.image_dim,
            "cube_matroid_self_dual": hyperdet.is_self_dual(ctx.cube_matroid),
        },
        "fan": hyperdet.orbit_report(ctx, orbits),
    }
    checks = [
        report["context"]["delta_terms"] == 12,
        report["context"]["kernel_dimension"] == 2,
        report["context"]["image_dimension"] == 4,
        report["context"]["cube_matroid_self_dual"],
        len(orbits) == 6,
        sum(o.covering for o in orbits) == 3,
    ]
    if not args.orbits_only:
        ab = hyperdet.verify_absorption(ctx, orbits, samples=args.samples, seed=args.seed)
        report["absorption"] = {
            "samples": ab.samples,
            "hits": ab.hits,
            "failures": [{"orbit": lab, "point": fmt_vec(x)} for lab, x in ab.failures],
        }
        cover = hyperdet.verify_cover_lps(ctx, orbits)
        report["cover"] = {
            "pairs": len(cover.pairs),
            "lps": cover.lp_count,
            "all_infeasible": cover.ok,
            "checks": [
                {
                    "cone": k,
                    "other": r,
                    "equal": chk.equal,
                    "lps": [
                        {
                            "inequality": fmt_vec(g),
                            "feasible": res.feasible,
                            "certificate": res.certificate.to_json() if res.certificate else None,
                            "certificate_valid": bool(res.certificate) and verify_certificate(lp, res.certificate),
                            "witness": fmt_vec(res.witness) if res.witness else None,
                        }
                        for g, lp, res in chk.lps
                    ],
                }
                for k, r, chk in cover.pairs
            ],
        }
        certs_ok = all(
            lp_item["certificate_valid"] for chk in report["cover"]["checks"] for lp_item in chk["lps"]
        )
        report["cover"]["certificates_valid"] = certs_ok
        checks += [ab.ok, cover.ok, certs_ok]
    report["passed"] = all(checks)
    return (EXIT_OK if report["passed"] else EXIT_NEGATIVE), report


def cmd_oracle_compare(args, req) -> tuple[int, dict]:
    """Closed formulas against perturbation limits on random instances."""
    rng = random.Random(args.seed)
    fam = args.family or req.get("family") or "hyperplanes"
    agree = degenerate = 0
    disagreements = []
    for _ in range(args.samples):
        m = rng.randint(2, 5)
        try:
            if fam == "hyperplanes":
                c = tropcore.random_hyperplane_matrix(m, rng)
                tropcore.stable_intersection_hyperplanes(c, check=True, seed=rng.randrange(2**32))
            elif fam == "line":
                xi = grass2.random_line_point(max(m, 3), rng).values
                tropcore.stable_intersection_line_H(xi, max(m, 3), check=True, seed=rng.randrange(2**32))
            else:
                raise RequestError("oracle-compare family must be 'hyperplanes' or 'line'")
            agree += 1
        except tropcore.DegenerateIntersectionError:
            degenerate += 1
        except tropcore.OracleDisagreementError as exc:
            disagreements.append(str(exc))
    out = {"family": fam, "samples": args.samples, "agree": agree, "degenerate": degenerate, "disagreements": disagreements}
    return (EXIT_OK if not disagreements else EXIT_NEGATIVE), out


def cmd_discontinuity_demo(args, req) -> tuple[int, dict]:
    if "a" in req and "b" in req:
        a = [Fraction(str(x)) for x in req["a"]]
        b = [Fraction(str(x)) for x in req["b"]]
    else:
        a, b = matrixvar.random_generic_pair(random.Random(args.seed))
    res = matrixvar.remark43_demo(a, b, seed=args.seed)
    out = {"a": fmt_vec(a), "b": fmt_vec(b), "p": fmt_vec(res.p), "q": fmt_vec(res.q), "distinct": res.distinct}
    return (EXIT_OK if res.distinct else EXIT_NEGATIVE), out


COMMANDS = {
    "membership": cmd_membership,
    "section-eval": cmd_section_eval,
    "decompose": cmd_decompose,
    "rank": cmd_rank,
    "verify-hyperdet": cmd_verify_hyperdet,
    "oracle-compare": cmd_oracle_compare,
    "remark43-demo": cmd_discontinuity_demo,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tropsection", description="Sections of tropicalisation maps, exactly.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--family", help="linear, grass2, rank2, corank1, hyperdet or hypersurface")
        p.add_argument("--input", help="JSON request file, or - for stdin")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=200)
        p.add_argument("--verbose", action="store_true")
        p.add_argument("--output", help="write the JSON result here instead of stdout")
        if name == "verify-hyperdet":
            p.add_argument("--orbits-only", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        req = load_request(args.input)
        if "seed" in req and args.seed == 0:
            args.seed = req["seed"]
        code, out = COMMANDS[args.command](args, req)
    except (RequestError, tropcore.TropicalError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        code, out = EXIT_ERROR, {"error": f"{type(exc).__name__}: {exc}"}
    text = json.dumps(out, indent=2, sort_keys=True)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
