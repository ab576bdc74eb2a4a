"""Rational cobordism bookkeeping: Pontryagin-number vectors, genus
functionals, elliptic spans, and polynomial behaviour along families.

Rationally, an oriented cobordism class in dimension 4k is determined by
its Pontryagin numbers, one per partition of k, and products of even
complex projective spaces form a basis.  Everything here is exact
linear algebra over that partition-indexed coordinate system.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Callable, Mapping, Sequence

from .algebra import RationalMatrix, as_rational, interpolate_polynomial
from .errors import ConsistencyError
from .manifolds import (
    LineBundleSum,
    ManifoldModel,
    build_cp,
    build_hp,
    build_proj_bundle,
    pair,
    pontryagin_classes,
    product,
)
from .genera import elliptic_q_coefficients

__all__ = [
    "Partition",
    "partitions_of",
    "CharNumberVector",
    "Functional",
    "pontryagin_numbers",
    "basis_manifolds",
    "genus_as_functional",
    "elliptic_span",
    "span_membership",
    "FamilySpec",
    "family_polynomial",
    "VerdictResult",
    "unbounded_verdict",
    "DistinctnessResult",
    "distinct_cobordism_types",
    "x12",
    "y16",
    "z20",
    "standard_family",
    "designated_families",
]


class Partition(tuple):
    """A partition of an integer: a non-increasing tuple of positive parts."""

    def __new__(cls, parts: Sequence[int]) -> "Partition":
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if any(p < 1 for p in parts):
            raise ValueError("partition parts must be positive")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    def key(self) -> str:
        """Serialized form, e.g. 'p1^3', 'p1*p2', 'p3'."""
        bits = []
        for part in sorted(set(self)):
            mult = self.count(part)
            bits.append(f"p{part}" if mult == 1 else f"p{part}^{mult}")
        return "*".join(bits) if bits else "1"


@lru_cache(maxsize=None)
def partitions_of(k: int) -> tuple[Partition, ...]:
    """All partitions of k in a fixed deterministic order."""
    if k < 0:
        raise ValueError("partitions of a negative integer do not exist")

    def gen(n: int, mx: int) -> list[tuple[int, ...]]:
        if n == 0:
            return [()]
        out = []
        for p in range(min(n, mx), 0, -1):
            for rest in gen(n - p, p):
                out.append((p,) + rest)
        return out

    return tuple(sorted(Partition(p) for p in gen(k, k)))


@dataclass(frozen=True)
class CharNumberVector:
    """All Pontryagin numbers of one manifold, indexed by partitions of dim/4."""

    dimension: int
    values: Mapping[Partition, Fraction]

    def get(self, partition: Partition) -> Fraction:
        return self.values.get(Partition(partition), Fraction(0))

    def as_row(self) -> list[Fraction]:
        return [self.values[I] for I in partitions_of(self.dimension // 4)]


@dataclass(frozen=True)
class Functional:
    """A rational linear combination of Pontryagin numbers in one dimension."""

    dimension: int
    coefficients: Mapping[Partition, Fraction]

    def __post_init__(self) -> None:
        clean = {}
        for partition, c in self.coefficients.items():
            partition = Partition(partition)
            if 4 * partition.weight != self.dimension:
                raise ValueError(
                    f"{partition.key()} has weight {partition.weight}, "
                    f"dimension {self.dimension} needs {self.dimension // 4}"
                )
            c = as_rational(c)
            if c:
                clean[partition] = c
        object.__setattr__(self, "coefficients", clean)

    def evaluate(self, vec: CharNumberVector) -> Fraction:
        if vec.dimension != self.dimension:
            raise ValueError("functional and vector dimensions differ")
        return sum((c * vec.get(I) for I, c in self.coefficients.items()), Fraction(0))

    def as_row(self) -> list[Fraction]:
        return [self.coefficients.get(I, Fraction(0)) for I in partitions_of(self.dimension // 4)]

    def scaled(self, value: Fraction) -> "Functional":
        return Functional(self.dimension, {I: c * value for I, c in self.coefficients.items()})

    def plus(self, other: "Functional") -> "Functional":
        if other.dimension != self.dimension:
            raise ValueError("functional dimensions differ")
        acc = dict(self.coefficients)
        for I, c in other.coefficients.items():
            acc[I] = acc.get(I, Fraction(0)) + c
        return Functional(self.dimension, acc)

    def to_expression(self) -> str:
        """Render in the grammar the command line parses back."""
        if not self.coefficients:
            return "0*p" + str(self.dimension // 4)
        bits = []
        for I in partitions_of(self.dimension // 4):
            if I not in self.coefficients:
                continue
            c = self.coefficients[I]
            mag = abs(c)
            coeff = "" if mag == 1 else f"{mag}*"
            term = f"{coeff}{I.key()}"
            if not bits:
                bits.append(term if c > 0 else f"-{term}")
            else:
                bits.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(bits)


# ---------------------------------------------------------------------------
# Pontryagin numbers and the projective-space basis


def pontryagin_numbers(m: ManifoldModel) -> CharNumberVector:
    dim = m.real_dimension
    if dim % 4:
        raise ValueError(f"{m.name} has dimension {dim}; Pontryagin numbers need a multiple of 4")
    p = pontryagin_classes(m)
    values: dict[Partition, Fraction] = {}
    for I in partitions_of(dim // 4):
        mono = m.ring.one()
        for part in I:
            mono = mono * p[part - 1]
        values[I] = pair(m, mono)
    return CharNumberVector(dim, values)


@lru_cache(maxsize=None)
def _basis_data(dim: int) -> tuple[tuple[ManifoldModel, ...], RationalMatrix]:
    k = dim // 4
    manifolds = []
    for I in partitions_of(k):
        factors = [build_cp(2 * part) for part in I]
        manifolds.append(reduce(product, factors))
    rows = [pontryagin_numbers(b).as_row() for b in manifolds]
    matrix = RationalMatrix(rows)
    if matrix.rank() != len(partitions_of(k)):
        raise ConsistencyError(
            f"projective-space products fail to span rational cobordism in dimension {dim}"
        )
    return tuple(manifolds), matrix


def basis_manifolds(dim: int) -> tuple[ManifoldModel, ...]:
    """Products of even complex projective spaces forming a rational
    cobordism basis in the given dimension; invertibility is checked."""
    if dim % 4 or dim < 4:
        raise ValueError("basis manifolds exist in positive dimensions divisible by 4")
    return _basis_data(dim)[0]


def genus_as_functional(evaluator: Callable[[ManifoldModel], Fraction], dim: int) -> Functional:
    """Express a genus as a linear combination of Pontryagin numbers by
    exact solve against the projective-space basis."""
    manifolds, matrix = _basis_data(dim)
    values = [as_rational(evaluator(b)) for b in manifolds]
    lam = matrix.solve(values)
    if lam is None:
        raise ConsistencyError("genus evaluation is not consistent with any Pontryagin functional")
    coeffs = dict(zip(partitions_of(dim // 4), lam))
    return Functional(dim, coeffs)


# ---------------------------------------------------------------------------
# the elliptic span


def elliptic_span(dim: int, q_order: int) -> tuple[list[Functional], int]:
    """Functionals of the q-coefficients 0..q_order of q^(k/2)*phi and
    the rank of their span."""
    manifolds, matrix = _basis_data(dim)
    series = [elliptic_q_coefficients(b, q_order) for b in manifolds]
    functionals = []
    for j in range(q_order + 1):
        lam = matrix.solve([s[j] for s in series])
        if lam is None:
            raise ConsistencyError("elliptic coefficient is not a Pontryagin functional")
        functionals.append(Functional(dim, dict(zip(partitions_of(dim // 4), lam))))
    rows = [f.as_row() for f in functionals]
    return functionals, RationalMatrix(rows).rank()


def span_membership(f: Functional, span: Sequence[Functional]) -> bool:
    """True when f is a rational linear combination of the span."""
    if not span:
        return not f.coefficients
    if any(g.dimension != f.dimension for g in span):
        raise ValueError("span and functional dimensions differ")
    base = [g.as_row() for g in span]
    r0 = RationalMatrix(base).rank()
    r1 = RationalMatrix(base + [f.as_row()]).rank()
    return r0 == r1


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class FamilySpec:
    """A one-parameter family of manifolds.  The builder already applies
    whatever substitution (e.g. doubling for spin) the family needs, so
    every integer parameter is admissible."""

    name: str
    dimension: int
    builder: Callable[[int], ManifoldModel] = field(compare=False)
    substitution: str = "c -> c"
    max_degree: int = 7

    def build(self, c: int) -> ManifoldModel:
        m = self.builder(c)
        if m.real_dimension != self.dimension:
            raise ConsistencyError(f"family {self.name} built dimension {m.real_dimension}")
        return m


def family_polynomial(fam: FamilySpec, f: Functional) -> list[Fraction]:
    """Coefficients (ascending degree) of the polynomial c -> f(fam(c)).

    Exact interpolation through max_degree+1 samples plus one extra
    verification sample; a mismatch means the family is not polynomial
    of the declared degree and is an internal failure.
    """
    if f.dimension != fam.dimension:
        raise ValueError("functional dimension does not match the family")
    samples = list(range(1, fam.max_degree + 2))
    values = [f.evaluate(pontryagin_numbers(fam.build(c))) for c in samples]
    coeffs = interpolate_polynomial(list(zip(map(Fraction, samples), values)))
    check_at = fam.max_degree + 2
    predicted = sum(
        (coeffs[j] * Fraction(check_at) ** j for j in range(len(coeffs))), Fraction(0)
    )
    actual = f.evaluate(pontryagin_numbers(fam.build(check_at)))
    if predicted != actual:
        raise ConsistencyError(
            f"family {fam.name} is not polynomial of degree <= {fam.max_degree} under {f.coefficients}"
        )
    while len(coeffs) > 1 and not coeffs[-1]:
        coeffs.pop()
    return coeffs


@dataclass(frozen=True)
class VerdictResult:
    unbounded: bool
    witness: str | None
    polynomial: tuple[Fraction, ...] | None
    per_family: Mapping[str, tuple[Fraction, ...]]


def unbounded_verdict(f: Functional, families: Sequence[FamilySpec]) -> VerdictResult:
    """Decide whether f is unbounded on one of the given families: any
    nonzero coefficient in positive degree is a certificate."""
    per_family: dict[str, tuple[Fraction, ...]] = {}
    witness: str | None = None
    witness_poly: tuple[Fraction, ...] | None = None
    for fam in families:
        if fam.dimension != f.dimension:
            raise ValueError(f"family {fam.name} lives in dimension {fam.dimension}, functional in {f.dimension}")
        coeffs = tuple(family_polynomial(fam, f))
        per_family[fam.name] = coeffs
        if witness is None and any(coeffs[1:]):
            witness = fam.name
            witness_poly = coeffs
    return VerdictResult(witness is not None, witness, witness_poly, per_family)


@dataclass(frozen=True)
class DistinctnessResult:
    distinct: bool
    separators: Mapping[tuple[int, int], Partition]
    collisions: tuple[tuple[int, int], ...]


def distinct_cobordism_types(fam: FamilySpec, params: Sequence[int]) -> DistinctnessResult:
    """Pairwise-distinguish family members by their Pontryagin numbers.

    For every pair of parameters the certificate is a partition whose
    Pontryagin numbers differ; a pair with identical full vectors is a
    collision and the family members are rationally cobordant.
    """
    vectors = {c: pontryagin_numbers(fam.build(c)) for c in params}
    separators: dict[tuple[int, int], Partition] = {}
    collisions: list[tuple[int, int]] = []
    ordered = sorted(params)
    for i, c1 in enumerate(ordered):
        for c2 in ordered[i + 1:]:
            sep = next(
                (I for I in partitions_of(fam.dimension // 4)
                 if vectors[c1].get(I) != vectors[c2].get(I)),
                None,
            )
            if sep is None:
                collisions.append((c1, c2))
            else:
                separators[(c1, c2)] = sep
    return DistinctnessResult(not collisions, separators, tuple(collisions))


# ---------------------------------------------------------------------------
# the standard families


def x12(c: int) -> ManifoldModel:
    """The 12-dimensional bundle member: lines in (c)+trivial^3 over CP^3."""
    return build_proj_bundle(LineBundleSum(3, (c, 0, 0, 0)))


def y16(c: int) -> ManifoldModel:
    """The 16-dimensional member: lines in (c,2c,-3c,0) over CP^5; the
    degree vector sums to zero, so every member is spin."""
    return build_proj_bundle(LineBundleSum(5, (c, 2 * c, -3 * c, 0)))


def z20(c: int) -> ManifoldModel:
    """The 20-dimensional bundle member: lines in (c)+trivial^3 over CP^7."""
    return build_proj_bundle(LineBundleSum(7, (c, 0, 0, 0)))


def standard_family(name: str) -> FamilySpec:
    """Families the verdict machinery knows by name.

    X12 and Z20 take the doubled parameter so every member is spin;
    Y16 is spin for every parameter.  X12xHP:<n> is the product of the
    doubled 12-dimensional family with quaternionic projective space.
    """
    if name == "X12":
        return FamilySpec("X12", 12, lambda c: x12(2 * c), "c -> 2c (spin)", 3)
    if name == "Y16":
        return FamilySpec("Y16", 16, y16, "c -> c", 5)
    if name == "Z20":
        return FamilySpec("Z20", 20, lambda c: z20(2 * c), "c -> 2c (spin)", 7)
    if name.startswith("X12xHP:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad quaternionic factor in family name {name!r}") from None
        if n < 1:
            raise ValueError("the quaternionic factor needs positive dimension")
        return FamilySpec(
            f"X12xHP:{n}", 12 + 4 * n,
            lambda c: product(x12(2 * c), build_hp(n)),
            "c -> 2c (spin)", 3,
        )
    raise ValueError(f"unknown family {name!r}")


def designated_families(dim: int) -> list[FamilySpec]:
    """The families the verdict subcommand consults per dimension."""
    table = {12: ["X12"], 16: ["Y16"], 20: ["Z20", "X12xHP:2"]}
    if dim not in table:
        raise ValueError(f"no designated families in dimension {dim}")
    return [standard_family(name) for name in table[dim]]
