"""Command-line interface: ``g2lattice <command> [options]``.

JSON goes to standard output, diagnostics to standard error.  Exit codes:
0 success, 1 negative verdict (or failed identity / stabilizer check),
2 malformed input, 3 the computation could not decide (needs an extension of
the residue field, or precision ran out).
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .building import VertexType, classify_vertex, graded_chain, stabilizes
from .errors import NeedsEtaleExtension, PrecisionExhausted, PreconditionError, ScalarSyntaxError
from .groups import AlgebraMap
from .lattice import Lattice, dual, product_span
from .octonion import OctonionElement, check_identities, norm, random_element, triality_diagram
from .reduction import Refutation, certificate_verify, random_lattice, reduce_lattice
from .scalars import BaseField, parse_scalar

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_UNDECIDED = 0, 1, 2, 3
DEFAULT_SEED = 0


class InputError(Exception):
    pass


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise InputError(f"{path}: {err.strerror}") from err
    except json.JSONDecodeError as err:
        raise InputError(f"{path}: invalid JSON at line {err.lineno} column {err.colno}: {err.msg}") from err


def _load_lattice(path) -> Lattice:
    data = _load_json(path)
    try:
        field = BaseField.from_json(data["field"])
        basis = data["basis"]
        if len(basis) != 8 or any(len(v) != 8 for v in basis):
            raise InputError(f"{path}: a lattice needs 8 basis vectors of 8 coordinates")
        for i, v in enumerate(basis):
            for j, s in enumerate(v):
                try:
                    parse_scalar(s, field)
                except ScalarSyntaxError as err:
                    raise InputError(f"{path}: basis[{i}][{j}] = {s!r}: {err}") from err
        return Lattice.from_json(data)
    except (KeyError, TypeError) as err:
        raise InputError(f"{path}: not a lattice file ({err})") from err
    except (ValueError, PreconditionError) as err:
        raise InputError(f"{path}: {err}") from err


def _load_map(path) -> AlgebraMap:
    data = _load_json(path)
    try:
        return AlgebraMap.from_json(data)
    except ScalarSyntaxError as err:
        raise InputError(f"{path}: {err}") from err
    except (KeyError, TypeError, ValueError) as err:
        raise InputError(f"{path}: not an algebra map file ({err})") from err


def _seed(args) -> int:
    if args.seed is None:
        print(f"using default seed {DEFAULT_SEED}", file=sys.stderr)
        return DEFAULT_SEED
    return args.seed


def _field(args) -> BaseField:
    try:
        return BaseField.parse(args.field)
    except ValueError as err:
        raise InputError(str(err)) from err


def random_isotropic(rng, field: BaseField, degree: int = 1) -> OctonionElement:
    """A random nonzero x with q(x) = 0, obtained by solving q for the e2 coordinate."""
    while True:
        x = random_element(rng, field, degree)
        if not x[0].is_zero():
            c = list(x.coords)
            c[1] = c[1] - norm(x) / x[0]
            return OctonionElement(tuple(c), field)


# -- commands: each returns (payload, exit code) ---------------------------------


def cmd_classify(args):
    L = _load_lattice(args.input)
    cert = classify_vertex(L)
    out = cert.to_json()
    code = EXIT_OK if cert.verdict else EXIT_NEGATIVE
    if args.reduce and (cert.verdict or cert.diagnostics.get("l") == 2):
        res = reduce_lattice(L, args.precision)
        if isinstance(res, Refutation):
            out["refutation"] = res.to_json()
        else:
            ok, why = certificate_verify(res.transformer, L, res.vertex_type)
            out["transformer"] = res.transformer.to_json()
            out["certificate_verified"] = ok
            if why:
                out["certificate_failure"] = why
            out["trace_steps"] = [s["step"] for s in res.trace.steps]
    return out, code


def cmd_reduce(args):
    L = _load_lattice(args.input)
    res = reduce_lattice(L, args.precision)
    if isinstance(res, Refutation):
        return {"refutation": res.to_json()}, EXIT_NEGATIVE
    ok, why = certificate_verify(res.transformer, L, res.vertex_type)
    out = res.to_json()
    out["certificate_verified"] = ok
    return out, EXIT_OK if ok else EXIT_NEGATIVE


def cmd_verify_identities(args):
    report = check_identities(_seed(args), args.samples, args.degree, _field(args), corrupt=args.corrupt)
    return report, EXIT_OK if report["all_passed"] else EXIT_NEGATIVE


def cmd_random_lattice(args):
    L = random_lattice(VertexType.parse(args.type), _seed(args), args.word_length, _field(args))
    return L.to_json(), EXIT_OK


def cmd_dual(args):
    return dual(_load_lattice(args.input)).to_json(), EXIT_OK


def cmd_product(args):
    L = _load_lattice(args.input)
    M = _load_lattice(args.other) if args.other else L
    if M.field != L.field:
        raise InputError("the two lattices live over different fields")
    return product_span(L, M).to_json(), EXIT_OK


def cmd_chain(args):
    L = _load_lattice(args.input)
    T = args.type
    if T is None:
        verdict = classify_vertex(L).verdict
        if verdict is None:
            return {"verdict": "NotVertex"}, EXIT_NEGATIVE
        T = verdict
    return {"type": VertexType.parse(T).name, "chain": graded_chain(L, T).to_json()}, EXIT_OK


def cmd_stabilizes(args):
    L = _load_lattice(args.input)
    g = AlgebraMap.identity(L.field) if args.map is None else _load_map(args.map)
    if g.field != L.field:
        raise InputError("map and lattice live over different fields")
    ok = stabilizes(g, L)
    return {"stabilizes": ok}, EXIT_OK if ok else EXIT_NEGATIVE


def cmd_triality(args):
    field = _field(args)
    if args.x:
        parts = [s.strip() for s in args.x.split(",")]
        if len(parts) != 8:
            raise InputError("--x needs 8 comma-separated coordinates")
        try:
            x = OctonionElement(tuple(parse_scalar(s, field) for s in parts), field)
        except ScalarSyntaxError as err:
            raise InputError(f"--x: {err}") from err
    else:
        x = random_isotropic(random.Random(_seed(args)), field)
    if x.is_zero() or not norm(x).is_zero():
        raise InputError("x must be a nonzero isotropic vector")
    return {"x": x.to_json(), "diagram": triality_diagram(x)}, EXIT_OK


# -- argument parsing -------------------------------------------------------------


def _global_options(parser, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--field", default=d("F5"), help="residue field: Fp (odd prime p) or Q")
    parser.add_argument("--precision", type=int, default=d(32), help="initial jet precision N")
    parser.add_argument("--seed", type=int, default=d(None), help=f"random seed (default {DEFAULT_SEED})")
    parser.add_argument("--json-indent", type=int, default=d(2), help="JSON indentation (-1 for compact)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="g2lattice", description="Lattices and vertex types for G2 over k((t)).")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _global_options(p, suppress=True)
        p.set_defaults(func=func)
        return p

    p = add("classify", cmd_classify, "vertex type of a lattice")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--reduce", action="store_true", help="also compute the certificate g")
    p = add("reduce", cmd_reduce, "standard basis and certificate g with g . L_std = L")
    p.add_argument("--in", dest="input", required=True)
    p = add("verify-identities", cmd_verify_identities, "run the composition-algebra identity suite")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p = add("random-lattice", cmd_random_lattice, "g . L_T for a seeded random automorphism g")
    p.add_argument("--type", required=True, choices=["1", "2", "3"])
    p.add_argument("--word-length", type=int, default=3)
    p = add("dual", cmd_dual, "dual lattice")
    p.add_argument("--in", dest="input", required=True)
    p = add("product", cmd_product, "O-span of all products x * y")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--with", dest="other", help="second lattice (default: the first)")
    p = add("chain", cmd_chain, "graded lattice chain of a vertex lattice")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--type", choices=["1", "2", "3"])
    p = add("stabilizes", cmd_stabilizes, "whether an automorphism g fixes L (and its chain)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--map", help="algebra map file (default: identity)")
    p = add("triality", cmd_triality, "isotropic subspaces attached to an isotropic x")
    p.add_argument("--x", help="8 comma-separated coordinates (default: random)")
    return parser


def dump(payload, indent: int) -> str:
    return json.dumps(payload, indent=None if indent < 0 else indent, ensure_ascii=False)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, code = args.func(args)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except (NeedsEtaleExtension, PrecisionExhausted) as err:
        print(f"undecided: {err}", file=sys.stderr)
        return EXIT_UNDECIDED
    sys.stdout.write(dump(payload, args.json_indent) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
