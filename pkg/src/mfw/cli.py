"""Command-line front end: ``mfw <command> ...``.

Every command builds a report (a nested dict of exact values) and prints it
either as indented text or as JSON (``--out structured``).  Exit status is 0
on success, 1 on a mathematical failure and 2 on a usage error.
"""

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .errors import MFWError, NotStabilized, PreconditionError
from .expr import ParseError
from .findim import (
    FinDimAlgebra, check_frobenius, from_presentation, hh0, hochschild_cohomology_dims,
    radical_and_blocks, socle_algebra,
)
from .hom import class_coordinates, contraction_algebra, hom_dimensions, homotopic
from .linalg import rank
from .mf import (
    CONVENTIONS, boundary_bulk, builtin_family, chern_character,
    euler_pairing, frobenius_gram, laufer_generators, load_mf, validate_mf,
)
from .milnor import (
    grothendieck_residue, milnor_algebra, residue_pairing, residue_sign, socle_milnor,
    is_quasihomogeneous,
)
from .ncalg import format_word, parse_ncpoly
from .polyring import RingSpec, format_poly, format_rational, parse_poly
from .series import IntSeries, dim_from_gv, gv_expand, gv_invert, parse_series
from .stdbasis import Budget

LAUFER_WORDS = ["1", "a", "b", "a^2", "b^2", "a*b", "a^2*b", "a*b^2", "a^2*b^2"]
# GV invariants n_j of the built-in flops that are known in closed form
KNOWN_GV = {("laufer", 1): (5, 1)}


class UsageError(Exception):
    pass


# -- value rendering -----------------------------------------------------------

def q(c):
    """Exact scalar for a report: ints stay ints, other rationals become 'p/q'."""
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def qvec(v):
    return [q(c) for c in v]


def milnor_class(vec, ma):
    return format_poly(ma.from_vector(vec))


def render_text(obj, indent=0):
    pad = "  " * indent
    lines = []
    for key in sorted(obj):
        val = obj[key]
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(render_text(val, indent + 1))
        elif isinstance(val, list) and val and all(isinstance(x, dict) for x in val):
            lines.append(f"{pad}{key}:")
            for item in val:
                sub = render_text(item, indent + 2)
                sub[0] = f"{pad}  - " + sub[0].lstrip()
                lines.extend(sub)
        else:
            lines.append(f"{pad}{key}: {_inline(val)}")
    return lines


def _inline(val):
    if isinstance(val, bool):
        return "true" if val else "false"
    if val is None:
        return "none"
    if isinstance(val, list):
        return "[" + ", ".join(_inline(x) for x in val) + "]"
    return str(val)


def emit(report, out):
    if out == "structured":
        return json.dumps(report, sort_keys=True, indent=1)
    return "\n".join(render_text(report))


# -- inputs ------------------------------------------------------------------------

def parse_list(text, conv=str):
    items = [x.strip() for x in text.split(",") if x.strip()]
    try:
        return [conv(x) for x in items]
    except ValueError:
        raise UsageError(f"could not parse list {text!r}")


def ring_from(args):
    try:
        return RingSpec(tuple(parse_list(args.vars)))
    except ValueError as exc:
        raise UsageError(str(exc))


def potential_from(args):
    if not args.potential:
        raise UsageError("--potential is required")
    return parse_poly(args.potential, ring_from(args))


def factorization_from(args):
    if getattr(args, "mf", None):
        return load_mf(args.mf)
    if getattr(args, "family", None):
        return builtin_family(args.family, args.k)
    raise UsageError("give --mf FILE or --family NAME")


def generators_for(E):
    """Named even endomorphisms available for word expressions."""
    if E.name == "laufer(1)":
        a, b = laufer_generators(E)
        return {"a": a, "b": b}
    return {}


def morphism_from_expr(E, gens, text):
    """Linear combination of words in the generators, e.g. ``a^2 - b^3``."""
    names = sorted(gens)
    poly = parse_ncpoly(text, names) if names else _constant_expr(text)
    out = None
    for word, c in sorted(poly.items()):
        m = E.identity()
        for i in word:
            m = m.compose(gens[names[i]])
        term = m.scale(c)
        out = term if out is None else out + term
    return out if out is not None else E.identity().scale(0)


def _constant_expr(text):
    poly = parse_ncpoly(text, ["_"])
    if any(w for w in poly):
        raise UsageError("this factorization has no named generators; only constants are allowed")
    return poly


def algebra_from(args):
    if args.algebra:
        with open(args.algebra) as fh:
            return FinDimAlgebra.from_record(json.load(fh))
    if args.generators and args.relations:
        gens = parse_list(args.generators)
        return from_presentation(gens, args.relations, args.degree_bound)
    raise UsageError("give --algebra FILE or --generators with --relations")


def conventions(extra=None):
    block = dict(CONVENTIONS)
    block["sign_calibration"] = ("fixed by chi(cA1(k)) = k and chi(Laufer(k)) = 6k+3; "
                                 "under it ch(Laufer(k)) = -2(6k+3) y w^k")
    if extra:
        block.update(extra)
    return block


# -- commands ------------------------------------------------------------------------

def cmd_milnor(args):
    W = potential_from(args)
    ma = milnor_algebra(W)
    qh = is_quasihomogeneous(W, ma)
    return {
        "potential": format_poly(W),
        "vars": list(W.ring.variables),
        "mu": ma.mu,
        "mu_local": ma.mu_local,
        "mu_global": ma.mu_global,
        "origin_only": ma.origin_only,
        "pure_powers": list(ma.pure_powers) if ma.pure_powers else None,
        "basis": ma.basis_strings(),
        "hessian_class": milnor_class(ma.hessian_class, ma),
        "socle": milnor_class(socle_milnor(ma), ma),
        "quasihomogeneous": qh.quasihomogeneous,
        "weights": qvec(qh.weights) if qh.weights else None,
        "notes": list(ma.notes),
    }


def cmd_residue(args):
    W = potential_from(args)
    ma = milnor_algebra(W)
    f = parse_poly(args.f, W.ring)
    exps = parse_list(args.exponents, int) if args.exponents else None
    report = {
        "potential": format_poly(W),
        "f": format_poly(f),
        "residue": q(grothendieck_residue(f, ma, exps)),
        "certificate_exponents": list(exps) if exps else list(ma.pure_powers),
        "pairing_sign": residue_sign(W.ring.nvars),
    }
    if args.g:
        g = parse_poly(args.g, W.ring)
        report["g"] = format_poly(g)
        report["pairing"] = q(residue_pairing(f, g, ma))
    return report


def _mf_header(E):
    return {"name": E.name, "rank": E.rank, "potential": format_poly(E.W)}


def cmd_mf(args):
    E = factorization_from(args)
    report = _mf_header(E)
    sub = args.mf_command
    if sub == "validate":
        rep = validate_mf(E)
        report["valid"] = rep.ok
        report["violations"] = [{"product": p, "row": i, "col": j, "residual": r}
                                for p, i, j, r in rep.violations]
        return report, 0 if rep.ok else 1
    ma = milnor_algebra(E.W)
    report["conventions"] = conventions()
    if sub == "chern":
        ch = chern_character(E, ma)
        report["chern_character"] = milnor_class(ch, ma)
        report["coordinates"] = qvec(ch)
        report["basis"] = ma.basis_strings()
    elif sub == "chi":
        F = load_mf(args.other) if args.other else E
        report["chi"] = euler_pairing(E, F, ma)
    elif sub == "tau":
        gens = generators_for(E)
        words = args.words or (LAUFER_WORDS if gens else ["1"])
        report["tau"] = [{"alpha": w, "tau": milnor_class(
            boundary_bulk(E, morphism_from_expr(E, gens, w), ma), ma)} for w in words]
    elif sub == "hom":
        dims = hom_dimensions(E, args.jet)
        report["hom_dims"] = {str(k): v for k, v in sorted(dims.items())}
        report["chi"] = euler_pairing(E, E, ma)
        report["stable"] = len(set(dims.values())) == 1
        if args.homotopic:
            m = morphism_from_expr(E, generators_for(E), args.homotopic)
            res = homotopic(E, m, args.jet)
            report["homotopic"] = {"map": args.homotopic, "verdict": res.verdict,
                                   "jet_order": res.jet_order}
            if res.message:
                report["homotopic"]["message"] = res.message
        report["conventions"]["jet_order"] = args.jet
    elif sub == "acon":
        res = contraction_algebra(E, ma, args.jet)
        report.update(acon_report(res))
        report["conventions"].update({"jet_order": res.jet_order_used,
                                      "stabilized": res.stabilized})
        if args.save:
            with open(args.save, "w") as fh:
                fh.write(res.algebra.dumps())
    return report, 0


def acon_report(res):
    A = res.algebra
    rb = radical_and_blocks(A)
    h = hh0(A)
    return {
        "dim": A.dim,
        "chi": res.chi,
        "dims_by_jet": {str(k): v for k, v in sorted(res.dims.items())},
        "hh0": h.dim,
        "radical_dim": len(rb.radical),
        "socle_dim": len(socle_algebra(A)),
        "blocks": rb.blocks,
        "nilpotency_index": rb.nilpotency_index,
        "grading_weights": list(res.grading.weights) if res.grading else None,
        "representative_degrees": res.rep_degrees,
        "algebra": A.to_record(),
    }


def cmd_algebra(args):
    A = algebra_from(args)
    sub = args.algebra_command
    report = {"dim": A.dim, "labels": list(A.labels)}
    if sub == "present":
        if not hasattr(A, "words"):
            raise UsageError("present needs --generators and --relations")
        gens = parse_list(args.generators)
        report["normal_words"] = [format_word(w, gens) for w in A.words]
        report["rules"] = sorted(
            f"{format_word(l, gens)} -> {_nc_string(r, gens)}" for l, r in A.rules.items())
        report["algebra"] = A.to_record()
        if args.save:
            with open(args.save, "w") as fh:
                fh.write(A.dumps())
    elif sub == "hh0":
        h = hh0(A)
        report["hh0"] = h.dim
        report["representatives"] = h.labels
    elif sub == "radical":
        rb = radical_and_blocks(A)
        report["radical_dim"] = len(rb.radical)
        report["radical"] = [qvec(v) for v in rb.radical]
        report["split"] = rb.split
        report["blocks"] = rb.blocks
        report["nilpotency_index"] = rb.nilpotency_index
    elif sub == "socle":
        soc = socle_algebra(A)
        report["socle_dim"] = len(soc)
        report["socle"] = [qvec(v) for v in soc]
    elif sub == "hhdims":
        report["hh_dims"] = hochschild_cohomology_dims(A, args.max_degree)
    elif sub == "frobenius":
        with open(args.pairing) as fh:
            P = [[Fraction(c) for c in row] for row in json.load(fh)]
        verdict = check_frobenius(A, P)
        report["frobenius"] = verdict.status
        report["witness"] = list(verdict.witness) if verdict.witness else None
        return report, 0 if verdict else 1
    return report, 0


def _nc_string(poly, gens):
    if not poly:
        return "0"
    parts = []
    for w in sorted(poly, key=lambda w: (-len(w), w)):
        c = poly[w]
        word = format_word(w, gens)
        if word == "1":
            parts.append(format_rational(c))
        elif c == 1:
            parts.append(word)
        elif c == -1:
            parts.append("-" + word)
        else:
            parts.append(f"{format_rational(c)}*{word}")
    return " + ".join(parts).replace("+ -", "- ")


def cmd_series(args):
    sub = args.series_command
    if sub == "expand":
        n = parse_list(args.n, int)
        s = gv_expand(n, args.order)
        return {"n": n, "order": s.order, "coefficients": qvec(s.coeffs), "degree": s.degree()}, 0
    if sub == "invert":
        if args.coeffs:
            s = IntSeries(parse_list(args.coeffs, Fraction))
        elif args.series:
            if args.order is None:
                raise UsageError("--series needs --order")
            s = parse_series(args.series, args.order)
        else:
            raise UsageError("give --coeffs or --series")
        n = gv_invert(s)
        return {"order": s.order, "n": list(n)}, 0
    n = parse_list(args.n, int)
    return {"n": n, "dim": dim_from_gv(n)}, 0


def cmd_example(args):
    name = "cA1" if args.family == "ca1" else "laufer"
    E = builtin_family(name, args.k)
    ma = milnor_algebra(E.W)
    ch = chern_character(E, ma)
    report = _mf_header(E)
    report.update({
        "valid": validate_mf(E).ok,
        "mu": ma.mu,
        "milnor_basis": ma.basis_strings(),
        "chern_character": milnor_class(ch, ma),
        "chi": euler_pairing(E, E, ma),
        "quasihomogeneous": is_quasihomogeneous(E.W, ma).quasihomogeneous,
    })
    extra = {}
    if args.all:
        gens = generators_for(E)
        if gens:
            report["tau"] = [{"alpha": w, "tau": milnor_class(
                boundary_bulk(E, morphism_from_expr(E, gens, w), ma), ma)} for w in LAUFER_WORDS]
        res = contraction_algebra(E, ma, args.jet)
        report["contraction_algebra"] = acon_report(res)
        gram = frobenius_gram(E, res.representatives, ma)
        report["frobenius_gram_rank"] = rank(gram)
        report["frobenius"] = check_frobenius(res.algebra, gram).status
        if gens:
            soc = res.representatives[class_index(res, gens)]
            report["sigma_socle_1"] = q(frobenius_gram(E, [soc, E.identity()], ma)[0][1])
        n = (args.k,) if name == "cA1" else KNOWN_GV.get((name, args.k))
        if n:
            s = gv_expand(n)
            report["gv"] = {"n": list(n), "dt": qvec(s.coeffs), "dim_from_gv": dim_from_gv(n),
                            "sum_n": sum(n), "matches_dim": dim_from_gv(n) == res.algebra.dim,
                            "matches_hh0": sum(n) == report["contraction_algebra"]["hh0"]}
        extra = {"jet_order": res.jet_order_used, "stabilized": res.stabilized}
    report["conventions"] = conventions(extra)
    return report, 0


def class_index(res, gens):
    """Index of the representative carrying the class of a^2 b^2."""
    m = gens["a"].power(2).compose(gens["b"].power(2))
    coords = class_coordinates(res, m)
    nz = [i for i, c in enumerate(coords) if c]
    if len(nz) != 1:
        raise NotStabilized("a^2 b^2 is not a single representative")
    return nz[0]


# -- parser ------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="mfw", description="Matrix factorizations, Milnor algebras "
                                "and contraction algebras in exact arithmetic.")
    p.add_argument("--version", action="version", version=f"mfw {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", choices=("text", "structured"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    poly = argparse.ArgumentParser(add_help=False, parents=[common])
    poly.add_argument("--potential", required=True)
    poly.add_argument("--vars", default="x,y,z,w")

    sub.add_parser("milnor", parents=[poly], help="Milnor algebra of a potential")
    r = sub.add_parser("residue", parents=[poly], help="Grothendieck residue of f")
    r.add_argument("--f", required=True)
    r.add_argument("--g")
    r.add_argument("--exponents", help="certificate exponents, comma separated")

    mfp = argparse.ArgumentParser(add_help=False, parents=[common])
    mfp.add_argument("--mf", help="matrix factorization file")
    mfp.add_argument("--family", choices=("cA1", "laufer"))
    mfp.add_argument("--k", type=int, default=1)
    mfp.add_argument("--jet", type=int, default=8)
    m = sub.add_parser("mf", help="matrix factorization invariants")
    msub = m.add_subparsers(dest="mf_command", required=True)
    for name in ("validate", "chern"):
        msub.add_parser(name, parents=[mfp])
    c = msub.add_parser("chi", parents=[mfp])
    c.add_argument("--other", help="second factorization file")
    t = msub.add_parser("tau", parents=[mfp])
    t.add_argument("--words", nargs="+", help="expressions in the generators a, b")
    h = msub.add_parser("hom", parents=[mfp])
    h.add_argument("--homotopic", help="decide whether this expression is null-homotopic")
    a = msub.add_parser("acon", parents=[mfp])
    a.add_argument("--save", help="write the algebra record to this file")

    alp = argparse.ArgumentParser(add_help=False, parents=[common])
    alp.add_argument("--algebra", help="algebra record file")
    alp.add_argument("--generators")
    alp.add_argument("--relations", nargs="+")
    alp.add_argument("--degree-bound", type=int, default=30)
    al = sub.add_parser("algebra", help="finite-dimensional algebra invariants")
    asub = al.add_subparsers(dest="algebra_command", required=True)
    pr = asub.add_parser("present", parents=[alp])
    pr.add_argument("--save")
    for name in ("hh0", "radical", "socle"):
        asub.add_parser(name, parents=[alp])
    hd = asub.add_parser("hhdims", parents=[alp])
    hd.add_argument("--max-degree", type=int, default=4)
    fr = asub.add_parser("frobenius", parents=[alp])
    fr.add_argument("--pairing", required=True, help="JSON matrix of the bilinear form")

    se = sub.add_parser("series", help="GV/DT generating series")
    ssub = se.add_subparsers(dest="series_command", required=True)
    ex = ssub.add_parser("expand", parents=[common])
    ex.add_argument("--n", required=True)
    ex.add_argument("--order", type=int)
    inv = ssub.add_parser("invert", parents=[common])
    inv.add_argument("--coeffs")
    inv.add_argument("--series")
    inv.add_argument("--order", type=int)
    dm = ssub.add_parser("dim", parents=[common])
    dm.add_argument("--n", required=True)

    e = sub.add_parser("example", help="built-in families")
    esub = e.add_subparsers(dest="family", required=True)
    for name in ("ca1", "laufer"):
        x = esub.add_parser(name, parents=[common])
        x.add_argument("--k", type=int, default=1)
        x.add_argument("--all", action="store_true")
        x.add_argument("--jet", type=int, default=8)
    return p


COMMANDS = {
    "milnor": lambda a: (cmd_milnor(a), 0),
    "residue": lambda a: (cmd_residue(a), 0),
    "mf": cmd_mf,
    "algebra": cmd_algebra,
    "series": cmd_series,
    "example": cmd_example,
}


def run(argv=None):
    """Run one command; returns ``(status, text)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), ""
    try:
        Budget.from_env()
        report, status = COMMANDS[args.command](args)
    except (UsageError, ParseError, PreconditionError, OSError, ValueError) as exc:
        msg = exc.caret() if isinstance(exc, ParseError) else ""
        return 2, f"mfw: error: {exc}" + (f"\n{msg}" if msg else "")
    except MFWError as exc:
        return 1, f"mfw: {type(exc).__name__}: {exc}"
    return status, emit(report, args.out)


def main(argv=None):
    status, text = run(argv)
    if text:
        stream = sys.stdout if status == 0 or not text.startswith("mfw:") else sys.stderr
        print(text, file=stream)
    return status


if __name__ == "__main__":
    sys.exit(main())
