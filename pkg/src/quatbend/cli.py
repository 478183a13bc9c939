"""Command line interface: quatbend <subcommand> ..."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import pipeline as pl
from .cocycles import PAIRS, act, invariant_suite, is_cocycle, projective_sign, t_cocycle
from .modp.cert import bad_prime_set, orbit_separation
from .quaternion import (AlgebraError, QuaternionAlgebra, load_order_basis, order_closure_check,
                         pell_search)
from .surface import bend, load_datum, representation_from_datum
from .symplectic.centralizer import b_search
from .symplectic.forms import symplectic_divisors
from .symplectic.model import load_model, rho


def _places(places):
    return pl._places(places)


def cmd_algebra_info(args):
    A = QuaternionAlgebra(Fraction(args.a), Fraction(args.b))
    print("algebra: (%s,%s)" % (A.a, A.b))
    print("ramification: %s" % _places(A.ramification))
    print("division: %s" % ("yes" if A.is_division else "no"))
    print("indefinite: %s" % ("yes" if A.is_indefinite else "no"))
    if args.order:
        basis = load_order_basis(args.order)
        print("order closed under products: %s" % ("yes" if order_closure_check(basis) else "no"))
    if args.pell_height and A.a > 0 and A.a.denominator == 1:
        try:
            found = pell_search(A, args.pell_height)
            print("pell elements (x0 <= %d): %s" % (
                args.pell_height, ", ".join(str(p.gamma) for p in found) or "none"))
        except ValueError as exc:
            print("pell elements: %s" % exc)
    return 0


def cmd_cocycle_verify(args):
    vals = args.params
    if len(vals) % 2:
        print("error: parameters come in (a, b) pairs", file=sys.stderr)
        return 2
    ok_all = True
    for a, b in zip(vals[::2], vals[1::2]):
        a, b = Fraction(a), Fraction(b)
        T = t_cocycle(a, b)
        good = sum(projective_sign(T(s * t), T(s) * act(s, T(t))) is not None for s, t in PAIRS)
        res = invariant_suite(a, b)
        print("(%s,%s): %d/16 cocycle pairs, product identity: %s" % (
            a, b, good, "pass" if res["product identity (T, T)"] else "fail"))
        if args.verbose:
            for name, val in res.items():
                print("  %-44s %s" % (name, "pass" if val else "fail"))
        ok_all &= is_cocycle(T) and all(res.values())
    return 0 if ok_all else 1


def _parse_quaternion(text):
    parts = text.replace(",", " ").split()
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("a quaternion needs four coordinates")
    return tuple(Fraction(x) for x in parts)


def cmd_embed(args):
    model = load_model(args.model)
    U, divs = symplectic_divisors(model.gram)
    print("gram")
    print(pl.format_matrix(model.gram.gram))
    print("divisors %s" % " ".join(map(str, divs)))
    print("unimodular U")
    print(pl.format_matrix(U))
    for q in args.gamma or ():
        g = model.algebra(*q)
        print("rho(%s)" % g)
        print(pl.format_matrix(rho(model, g)))
    if args.datum:
        rep = representation_from_datum(load_datum(args.datum), model)
        text = pl.format_rep(rep)
        _emit(text, args.output)
    return 0


def _emit(text, path):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _bent_rep(args):
    model = load_model(args.model)
    datum = load_datum(args.datum)
    rep = representation_from_datum(datum, model)
    pell = pl.curve_pell(datum, model)
    hits = b_search(model, pell, args.height)
    return model, datum, rep, hits


def cmd_bend(args):
    model, datum, rep, hits = _bent_rep(args)
    print("# %d generic bend elements at height <= %d" % (len(hits), args.height), file=sys.stderr)
    if not hits:
        print("no bend element at height %d" % args.height, file=sys.stderr)
        return pl.STAGES.index("b-search") + 1
    if args.list:
        for i, h in enumerate(hits):
            print("# element %d, height %d, coordinates %s" % (i, h.height, list(h.coords)))
            print(pl.format_matrix(h.matrix))
        return 0
    if args.index >= len(hits):
        print("index %d out of range" % args.index, file=sys.stderr)
        return pl.STAGES.index("b-search") + 1
    bent = bend(rep, datum.curve, hits[args.index].matrix)
    _emit(pl.format_rep(bent), args.output)
    return 0


def cmd_certify(args):
    rep = pl.load_rep(args.rep)
    cert = bad_prime_set(rep.images, rep.form.gram, args.bound, args.model_id or "")
    _emit(cert.to_text(), args.output)
    if args.emit_json:
        js = cert.to_json()
        if args.output:
            Path(str(args.output) + ".json").write_text(js)
        else:
            sys.stdout.write(js)
    return 0 if cert.verdict == "dense-certified" else 1


def cmd_separate(args):
    model, datum, rep, hits = _bent_rep(args)
    if args.index >= len(hits):
        print("no bend element #%d at height %d" % (args.index, args.height), file=sys.stderr)
        return pl.STAGES.index("b-search") + 1
    sep = orbit_separation(rep, datum.curve, hits[args.index].matrix, args.prime, args.aux)
    _emit(sep.to_text(), args.output)
    if args.emit_json:
        if args.output:
            Path(str(args.output) + ".json").write_text(sep.to_json())
        else:
            sys.stdout.write(sep.to_json())
    return 0 if sep.conclusion == "distinct orbits" else 1


def cmd_run(args):
    cfg = pl.load_config(args.config)
    if args.emit_json:
        cfg.emit_json = True
    for key in ("b_height", "bend_index", "sweep_bound", "separation_prime"):
        val = getattr(args, key)
        if val is not None:
            setattr(cfg, key, val)
    result = pl.run_pipeline(cfg, out_dir=args.output_dir)
    sys.stdout.write(result.log)
    return result.exit_code


def build_parser():
    p = argparse.ArgumentParser(prog="quatbend", description=(
        "Integral symplectic representations from quaternion orders, bending, "
        "and mod-p density certificates."))
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("algebra-info", help="ramification and type of (a, b)")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--order", help="order basis file to check for closure")
    s.add_argument("--pell-height", type=int, default=0)
    s.set_defaults(func=cmd_algebra_info)

    s = sub.add_parser("cocycle-verify", help="cocycle invariant suite for (a, b) pairs")
    s.add_argument("params", nargs="+", help="a1 b1 [a2 b2 ...]")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_cocycle_verify)

    s = sub.add_parser("embed", help="Gram matrix, divisors and rho images of a model")
    s.add_argument("--model", required=True)
    s.add_argument("--gamma", type=_parse_quaternion, action="append",
                   help="quaternion 'x0 x1 x2 x3' to send through rho (repeatable)")
    s.add_argument("--datum", help="write the unbent representation of this datum")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_embed)

    for name, func, hlp in (("bend", cmd_bend, "search bend elements and bend a datum"),
                            ("separate", cmd_separate, "orbit separation report")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("--model", required=True)
        s.add_argument("--datum", required=True)
        s.add_argument("--height", type=int, default=1)
        s.add_argument("--index", type=int, default=0)
        s.add_argument("-o", "--output")
        if name == "bend":
            s.add_argument("--list", action="store_true", help="list the bend elements only")
        else:
            s.add_argument("--prime", type=int, default=5)
            s.add_argument("--aux", type=int, nargs="*", default=[])
            s.add_argument("--emit-json", action="store_true")
        s.set_defaults(func=func)

    s = sub.add_parser("certify", help="density certificate for a representation file")
    s.add_argument("--rep", required=True)
    s.add_argument("--bound", type=int, default=50)
    s.add_argument("--model-id", default="")
    s.add_argument("-o", "--output")
    s.add_argument("--emit-json", action="store_true")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("run", help="run the whole pipeline from a config file")
    s.add_argument("config")
    s.add_argument("--output-dir")
    s.add_argument("--emit-json", action="store_true")
    s.add_argument("--b-height", dest="b_height", type=int)
    s.add_argument("--bend-index", dest="bend_index", type=int)
    s.add_argument("--sweep-bound", dest="sweep_bound", type=int)
    s.add_argument("--separation-prime", dest="separation_prime", type=int)
    s.set_defaults(func=cmd_run)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AlgebraError, ValueError, FileNotFoundError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return pl.EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
