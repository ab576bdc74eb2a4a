"""Command-line front end.

Two small grammars (manifold descriptors and linear functionals in
Pontryagin numbers / named genera) plus one subcommand per library
operation.  All output is canonical JSON — sorted keys, rationals as
"num/den" strings — or, where tables make sense, CSV.

Exit codes: 0 success, 2 bad input (parse or validation), 3 internal
consistency failure (two computation routes disagreed — a bug).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import as_rational
from .cobordism import (
    CharNumberVector,
    FamilySpec,
    Functional,
    Partition,
    designated_families,
    distinct_cobordism_types,
    elliptic_span,
    family_polynomial,
    genus_as_functional,
    partitions_of,
    pontryagin_numbers,
    span_membership,
    standard_family,
    unbounded_verdict,
    x12,
    y16,
    z20,
)
from .errors import ConsistencyError, FunctionalParseError
from .genera import (
    ahat,
    elliptic_q_coefficients,
    signature,
    twisted_ahat_tangent,
)
from .manifolds import (
    LineBundleSum,
    ManifoldModel,
    build_cp,
    build_hp,
    build_proj_bundle,
    is_spin,
    product,
)

__all__ = ["parse_functional", "parse_manifold", "main", "entrypoint"]


# ---------------------------------------------------------------------------
# serialization


def _rat(x: Fraction) -> str:
    x = as_rational(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _emit_json(payload: object) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _emit_csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())


def _vector_payload(vec: CharNumberVector) -> dict:
    return {I.key(): _rat(v) for I, v in vec.values.items()}


def _functional_payload(f: Functional) -> dict:
    return {
        "coefficients": {I.key(): _rat(c) for I, c in f.coefficients.items()},
        "expression": f.to_expression(),
    }


def _poly_string(coeffs: Sequence[Fraction], var: str = "c") -> str:
    bits = []
    for j in range(len(coeffs) - 1, -1, -1):
        c = coeffs[j]
        if not c:
            continue
        mag = abs(c)
        if j == 0:
            body = _rat(mag)
        else:
            head = "" if mag == 1 else f"{_rat(mag)}*"
            body = f"{head}{var}" + (f"^{j}" if j > 1 else "")
        if not bits:
            bits.append(body if c > 0 else f"-{body}")
        else:
            bits.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(bits) if bits else "0"


# ---------------------------------------------------------------------------
# scanning primitives shared by both grammars


class _Scanner:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def error(self, message: str, position: int | None = None) -> FunctionalParseError:
        return FunctionalParseError(
            f"{message} in {self.text!r}",
            self.pos if position is None else position,
        )

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, literal: str) -> bool:
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str) -> None:
        if not self.eat(literal):
            raise self.error(f"expected {literal!r}")

    def unsigned_int(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error("expected an integer", start)
        return int(self.text[start:self.pos])

    def signed_int(self) -> int:
        sign = -1 if self.eat("-") else 1
        return sign * self.unsigned_int()

    def word(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        return self.text[start:self.pos]


# ---------------------------------------------------------------------------
# functional expressions


_GENUS_EVALUATORS: dict[str, Callable[[ManifoldModel], Fraction]] = {
    "sign": signature,
    "ahat": ahat,
    "ahat_t": twisted_ahat_tangent,
}

_named_cache: dict[tuple, Functional] = {}


def _named_functional(name: str, dim: int, q_index: int | None = None) -> Functional:
    key = (name, dim, q_index)
    if key not in _named_cache:
        if name == "ell":
            order = max(dim // 4, q_index)
            _named_cache[key] = genus_as_functional(
                lambda m: elliptic_q_coefficients(m, order)[q_index], dim
            )
        else:
            _named_cache[key] = genus_as_functional(_GENUS_EVALUATORS[name], dim)
    return _named_cache[key]


def _parse_atom(sc: _Scanner):
    """One atom: ('p', index, exponent) or ('genus', name, q_index)."""
    sc.skip_ws()
    start = sc.pos
    if sc.peek() == "p" and sc.pos + 1 < len(sc.text) and sc.text[sc.pos + 1].isdigit():
        sc.pos += 1
        index = sc.unsigned_int()
        if index < 1:
            raise sc.error("p0 is not a Pontryagin class", start)
        exponent = 1
        mark = sc.pos
        sc.skip_ws()
        if sc.eat("^"):
            sc.skip_ws()
            exponent = sc.unsigned_int()
            if exponent < 1:
                raise sc.error("exponent must be positive", start)
        else:
            sc.pos = mark
        return ("p", index, exponent)
    word = sc.word()
    if word in _GENUS_EVALUATORS:
        return ("genus", word, None)
    if word == "ell":
        sc.skip_ws()
        sc.expect("[")
        sc.skip_ws()
        q_index = sc.unsigned_int()
        sc.skip_ws()
        sc.expect("]")
        return ("genus", "ell", q_index)
    raise sc.error(f"unknown atom {word or sc.peek()!r}", start)


def _parse_term(sc: _Scanner):
    """One term: (coefficient, atoms).  Grammar: [rational '*'] atom ('*' atom)*."""
    sc.skip_ws()
    coeff = Fraction(1)
    if sc.peek().isdigit():
        num = sc.unsigned_int()
        den = 1
        mark = sc.pos
        sc.skip_ws()
        if sc.eat("/"):
            sc.skip_ws()
            den = sc.unsigned_int()
            if den == 0:
                raise sc.error("zero denominator")
        else:
            sc.pos = mark
        coeff = Fraction(num, den)
        sc.skip_ws()
        sc.expect("*")
    atoms = [_parse_atom(sc)]
    while True:
        mark = sc.pos
        sc.skip_ws()
        if sc.eat("*"):
            atoms.append(_parse_atom(sc))
        else:
            sc.pos = mark
            return coeff, atoms


def parse_functional(text: str, dim: int) -> Functional:
    """Parse a linear combination of Pontryagin monomials and named genera.

    Grammar::

        expr     := ['+'|'-'] term (('+'|'-') term)*
        term     := [rational '*'] atom ('*' atom)*
        rational := int ['/' int]
        atom     := 'sign' | 'ahat' | 'ahat_t' | 'ell[' int ']' | pontry
        pontry   := 'p' int ['^' int]

    A named genus must be the only atom of its term; a Pontryagin
    monomial's weight must be dim/4.
    """
    if dim % 4 or dim < 4:
        raise FunctionalParseError(f"functionals need a positive dimension divisible by 4, not {dim}")
    sc = _Scanner(text)
    sc.skip_ws()
    if sc.at_end():
        raise sc.error("empty expression")
    result = Functional(dim, {})
    sign = 1
    if sc.eat("-"):
        sign = -1
    else:
        sc.eat("+")
    while True:
        term_start = sc.pos
        coeff, atoms = _parse_term(sc)
        coeff *= sign
        genus_atoms = [a for a in atoms if a[0] == "genus"]
        if genus_atoms:
            if len(atoms) != 1:
                raise sc.error("a named genus must stand alone in its term", term_start)
            _, name, q_index = genus_atoms[0]
            result = result.plus(_named_functional(name, dim, q_index).scaled(coeff))
        else:
            parts: list[int] = []
            for _, index, exponent in atoms:
                parts.extend([index] * exponent)
            partition = Partition(parts)
            if 4 * partition.weight != dim:
                raise sc.error(
                    f"{partition.key()} has weight {partition.weight}, "
                    f"dim {dim} needs {dim // 4}",
                    term_start,
                )
            result = result.plus(Functional(dim, {partition: coeff}))
        sc.skip_ws()
        if sc.at_end():
            return result
        if sc.eat("+"):
            sign = 1
        elif sc.eat("-"):
            sign = -1
        else:
            raise sc.error("expected '+' or '-'")
        sc.skip_ws()


# ---------------------------------------------------------------------------
# manifold descriptors


def _parse_manifold_expr(sc: _Scanner, warnings: list[str]) -> ManifoldModel:
    sc.skip_ws()
    start = sc.pos
    if sc.eat("prod("):
        first = _parse_manifold_expr(sc, warnings)
        sc.skip_ws()
        sc.expect(",")
        second = _parse_manifold_expr(sc, warnings)
        sc.skip_ws()
        sc.expect(")")
        return product(first, second)
    if sc.eat("cp:"):
        return build_cp(sc.unsigned_int())
    if sc.eat("hp:"):
        return build_hp(sc.unsigned_int())
    if sc.eat("pb:"):
        base = sc.unsigned_int()
        sc.expect(":")
        sc.expect("[")
        degrees = [sc.signed_int()]
        while sc.eat(","):
            degrees.append(sc.signed_int())
        sc.expect("]")
        return build_proj_bundle(LineBundleSum(base, tuple(degrees)))
    if sc.eat("X12xHP:"):
        n = sc.unsigned_int()
        sc.expect(":c=")
        c = sc.signed_int()
        if c % 2:
            warnings.append(f"X12xHP:{n}:c={c} is not spin; even c gives spin members")
        return product(x12(c), build_hp(n))
    for name, builder, even_for_spin in (
        ("X12", x12, True),
        ("Y16", y16, False),
        ("Z20", z20, True),
    ):
        if sc.eat(name + ":c="):
            c = sc.signed_int()
            if even_for_spin and c % 2:
                warnings.append(f"{name}:c={c} is not spin; even c gives spin members")
            return builder(c)
    raise sc.error("expected a manifold descriptor "
                   "(cp:N | hp:N | pb:L:[d,...] | prod(a,b) | X12:c=N | Y16:c=N | Z20:c=N | X12xHP:n:c=N)",
                   start)


def parse_manifold(text: str) -> tuple[ManifoldModel, list[str]]:
    """Parse a manifold descriptor; returns the model plus spin-parity warnings."""
    sc = _Scanner(text)
    warnings: list[str] = []
    m = _parse_manifold_expr(sc, warnings)
    sc.skip_ws()
    if not sc.at_end():
        raise sc.error("trailing input after manifold descriptor")
    return m, warnings


def _load_manifold(args: argparse.Namespace) -> ManifoldModel:
    m, warnings = parse_manifold(args.manifold)
    if not getattr(args, "quiet", False):
        for w in warnings:
            print(f"note: {w}", file=sys.stderr)
    return m


# ---------------------------------------------------------------------------
# subcommands


def _cmd_pontryagin(args: argparse.Namespace) -> int:
    m = _load_manifold(args)
    vec = pontryagin_numbers(m)
    keys = [I.key() for I in partitions_of(vec.dimension // 4)]
    if args.csv:
        _emit_csv(keys, [[_rat(v) for v in vec.as_row()]])
    else:
        _emit_json({
            "dimension": vec.dimension,
            "manifold": m.name,
            "values": _vector_payload(vec),
        })
    return 0


def _cmd_genus(args: argparse.Namespace) -> int:
    m = _load_manifold(args)
    value = _GENUS_EVALUATORS[args.which](m)
    _emit_json({
        "dimension": m.real_dimension,
        "genus": args.which,
        "manifold": m.name,
        "value": _rat(value),
    })
    return 0


def _cmd_elliptic(args: argparse.Namespace) -> int:
    m = _load_manifold(args)
    order = args.q_order if args.q_order is not None else m.real_dimension // 4
    coeffs = elliptic_q_coefficients(m, order)
    if args.csv:
        _emit_csv([f"q^{j}" for j in range(order + 1)], [[_rat(c) for c in coeffs]])
    else:
        _emit_json({
            "coefficients": [_rat(c) for c in coeffs],
            "dimension": m.real_dimension,
            "manifold": m.name,
            "normalization": "coefficients of q^(k/2)*phi, k = dim/4",
            "q_order": order,
        })
    return 0


def _cmd_spin(args: argparse.Namespace) -> int:
    m = _load_manifold(args)
    _emit_json({"manifold": m.name, "spin": is_spin(m)})
    return 0


def _cmd_span(args: argparse.Namespace) -> int:
    order = args.q_order if args.q_order is not None else args.dim // 4
    functionals, rank = elliptic_span(args.dim, order)
    _emit_json({
        "dimension": args.dim,
        "functionals": [_functional_payload(f) for f in functionals],
        "q_order": order,
        "rank": rank,
    })
    return 0


def _cmd_member(args: argparse.Namespace) -> int:
    f = parse_functional(args.functional, args.dim)
    order = args.q_order if args.q_order is not None else args.dim // 4
    span, rank = elliptic_span(args.dim, order)
    inside = span_membership(f, span)
    _emit_json({
        "dimension": args.dim,
        "functional": _functional_payload(f),
        "in_span": inside,
        "q_order": order,
        "span_rank": rank,
        "verdict": "in-span" if inside else "not-in-span",
    })
    return 0


def _parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise FunctionalParseError(f"range must look like a..b, not {text!r}")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise FunctionalParseError(f"range bounds must be integers in {text!r}") from None
    if a > b:
        raise FunctionalParseError(f"empty range {text!r}")
    return a, b


def _cmd_scan(args: argparse.Namespace) -> int:
    fam = standard_family(args.family)
    f = parse_functional(args.functional, fam.dimension)
    a, b = _parse_range(args.range)
    values = [(c, f.evaluate(pontryagin_numbers(fam.build(c)))) for c in range(a, b + 1)]
    poly = family_polynomial(fam, f)
    if args.csv:
        _emit_csv(["c", "value"], [[str(c), _rat(v)] for c, v in values])
    else:
        _emit_json({
            "dimension": fam.dimension,
            "family": fam.name,
            "functional": _functional_payload(f),
            "polynomial": [_rat(c) for c in poly],
            "polynomial_string": _poly_string(poly),
            "substitution": fam.substitution,
            "values": [{"c": c, "value": _rat(v)} for c, v in values],
        })
    return 0


def _cmd_verdict(args: argparse.Namespace) -> int:
    f = parse_functional(args.functional, args.dim)
    families = designated_families(args.dim)
    result = unbounded_verdict(f, families)
    _emit_json({
        "dimension": args.dim,
        "families": {
            fam.name: {
                "polynomial": [_rat(c) for c in result.per_family[fam.name]],
                "polynomial_string": _poly_string(result.per_family[fam.name]),
                "substitution": fam.substitution,
            }
            for fam in families
        },
        "functional": _functional_payload(f),
        "verdict": "unbounded" if result.unbounded else "bounded_on_families",
        "witness": result.witness,
        "witness_polynomial": (
            None if result.polynomial is None else [_rat(c) for c in result.polynomial]
        ),
    })
    return 0


def _cmd_distinct(args: argparse.Namespace) -> int:
    fam = standard_family(args.family)
    a, b = _parse_range(args.range)
    result = distinct_cobordism_types(fam, list(range(a, b + 1)))
    _emit_json({
        "collisions": [list(pair) for pair in result.collisions],
        "dimension": fam.dimension,
        "distinct": result.distinct,
        "family": fam.name,
        "range": [a, b],
        "separators": [
            {"pair": list(pair), "partition": I.key()}
            for pair, I in sorted(result.separators.items())
        ],
        "substitution": fam.substitution,
    })
    return 0


# ---------------------------------------------------------------------------
# parser assembly


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellcob",
        description="Exact characteristic numbers, genera, and rational-cobordism "
                    "linear algebra for projective-bundle manifolds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def manifold_cmd(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--manifold", required=True,
                       help="cp:N | hp:N | pb:L:[d,...] | prod(a,b) | "
                            "X12:c=N | Y16:c=N | Z20:c=N | X12xHP:n:c=N")
        p.add_argument("--quiet", action="store_true",
                       help="suppress informational warnings")
        return p

    p = manifold_cmd("pontryagin", "all Pontryagin numbers of a manifold")
    p.add_argument("--json", action="store_true", help="JSON output (default)")
    p.add_argument("--csv", action="store_true", help="CSV output")
    p.set_defaults(func=_cmd_pontryagin)

    p = manifold_cmd("genus", "evaluate a named genus")
    p.add_argument("--which", required=True, choices=sorted(_GENUS_EVALUATORS))
    p.set_defaults(func=_cmd_genus)

    p = manifold_cmd("elliptic", "q-expansion coefficients of the elliptic genus")
    p.add_argument("--q-order", type=int, default=None,
                   help="highest q power (default dim/4)")
    p.add_argument("--csv", action="store_true", help="CSV output")
    p.set_defaults(func=_cmd_elliptic)

    p = manifold_cmd("spin", "whether the manifold is spin")
    p.set_defaults(func=_cmd_spin)

    p = sub.add_parser("span", help="elliptic-coefficient functionals and their rank")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--q-order", type=int, default=None,
                   help="highest q power (default dim/4)")
    p.set_defaults(func=_cmd_span)

    p = sub.add_parser("member", help="is a functional in the elliptic span?")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("-f", "--f", "--functional", dest="functional", required=True)
    p.add_argument("--q-order", type=int, default=None)
    p.set_defaults(func=_cmd_member)

    p = sub.add_parser("scan", help="evaluate a functional along a family")
    p.add_argument("--family", required=True,
                   help="X12 | Y16 | Z20 | X12xHP:<n>")
    p.add_argument("-f", "--f", "--functional", dest="functional", required=True)
    p.add_argument("--range", required=True, help="parameter range a..b")
    p.add_argument("--csv", action="store_true", help="CSV output")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("verdict", help="bounded or unbounded on the designated families")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("-f", "--f", "--functional", dest="functional", required=True)
    p.set_defaults(func=_cmd_verdict)

    p = sub.add_parser("distinct", help="are family members pairwise non-cobordant?")
    p.add_argument("--family", required=True)
    p.add_argument("--range", required=True, help="parameter range a..b")
    p.set_defaults(func=_cmd_distinct)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 3
    except (FunctionalParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
