"""Multiplicative genera and the twisted Dirac q-expansion.

A genus is encoded by an even power series f(x) = 1 + f_2 x^2 + f_4 x^4
+ ... ; its value on a manifold can be computed two independent ways:

* root pipeline: evaluate the product of f over the stable tangent
  roots and pair the result (only for root-split tangent data);
* universal pipeline: expand the product of f over k formal variables,
  rewrite the symmetric result in elementary symmetric functions of the
  squared variables, substitute Pontryagin classes, and pair.

Both routes are run whenever root data is available and must agree
exactly; a mismatch raises :class:`ConsistencyError`.

The q-expansion of the Dirac operator twisted by the standard exterior/
symmetric power tower is handled the same way.  The fractional leading
exponent q^(-k/2) is never materialized: all functions return the
coefficients of q^(k/2) * phi(M), indexed 0..N, so coefficient 0 is the
A-hat genus and coefficient 1 is minus the A-hat genus twisted by the
complexified tangent bundle.  Trivial stable summands enter through an
explicit rank-correction factor so the character of T_C M keeps rank
equal to dim M.
"""
from __future__ import annotations

import warnings
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Mapping, Sequence

from .algebra import GradedElement, QSeries, as_rational
from .errors import ConsistencyError
from .manifolds import (
    ExplicitPontryagin,
    ManifoldModel,
    StableRoots,
    pair,
    pontryagin_classes,
)

__all__ = [
    "CharacteristicSeries",
    "MultiplicativeSequence",
    "universal_k_polynomials",
    "l_sequence",
    "ahat_sequence",
    "evaluate_genus",
    "signature",
    "ahat",
    "twisted_ahat_tangent",
    "TwistCharacter",
    "twist_character",
    "elliptic_q_coefficients",
]


# ---------------------------------------------------------------------------
# one-variable even series over Q (coefficient index j <-> x^(2j))


def _mul_even(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if not ai:
            continue
        for j in range(order + 1 - i):
            if b[j]:
                out[i + j] += ai * b[j]
    return out


def _inv_even(a: Sequence[Fraction], order: int) -> list[Fraction]:
    if a[0] != 1:
        raise ValueError("series inversion here assumes constant term 1")
    out = [Fraction(1)] + [Fraction(0)] * order
    for n in range(1, order + 1):
        acc = Fraction(0)
        for i in range(1, n + 1):
            if i < len(a) and a[i]:
                acc += a[i] * out[n - i]
        out[n] = -acc
    return out


class CharacteristicSeries:
    """The even power series f(x) defining a genus; coeffs[j] is the
    coefficient of x^(2j), and coeffs[0] must be 1."""

    __slots__ = ("name", "coeffs")

    def __init__(self, name: str, coeffs: Sequence[Fraction]) -> None:
        coeffs = tuple(as_rational(c) for c in coeffs)
        if not coeffs or coeffs[0] != 1:
            raise ValueError("a characteristic series starts with constant term 1")
        self.name = name
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def l_genus(cls, order: int) -> "CharacteristicSeries":
        # x/tanh(x) = cosh(x) / (sinh(x)/x), both even in x
        sinh_over_x = [Fraction(1, factorial(2 * j + 1)) for j in range(order + 1)]
        cosh = [Fraction(1, factorial(2 * j)) for j in range(order + 1)]
        return cls("signature", _mul_even(cosh, _inv_even(sinh_over_x, order), order))

    @classmethod
    def ahat_genus(cls, order: int) -> "CharacteristicSeries":
        # (x/2)/sinh(x/2) = 1 / (sinh(u)/u) at u = x/2
        s = [Fraction(1, 4 ** j * factorial(2 * j + 1)) for j in range(order + 1)]
        return cls("ahat", _inv_even(s, order))

    def evaluate_at(self, x: GradedElement) -> GradedElement:
        """f(x) for a nilpotent degree-2 ring element x."""
        t = x * x
        acc = x.ring.scalar(self.coeffs[0])
        tp = x.ring.one()
        for j in range(1, len(self.coeffs)):
            tp = tp * t
            if tp.is_zero:
                break
            if self.coeffs[j]:
                acc = acc + tp * self.coeffs[j]
        return acc

    def __repr__(self) -> str:
        return f"CharacteristicSeries({self.name}, order={self.order})"


# ---------------------------------------------------------------------------
# symmetric-function reduction: products over formal variables -> p-monomials
#
# Variables below are t_i = x_i^2, so weight j means degree 4j on the
# manifold.  The reduction is generic over the coefficient arithmetic:
# plain Fractions for ordinary genera, scalar QSeries for the q-twist.


def _mvp_mul(p: Mapping[tuple, object], q: Mapping[tuple, object], kmax: int) -> dict:
    out: dict[tuple, object] = {}
    for e1, c1 in p.items():
        d1 = sum(e1)
        for e2, c2 in q.items():
            if d1 + sum(e2) > kmax:
                continue
            mono = tuple(a + b for a, b in zip(e1, e2))
            term = c1 * c2
            cur = out.get(mono)
            out[mono] = term if cur is None else cur + term
    return {e: c for e, c in out.items() if c}


def _expand_symmetric_product(factor: Sequence, nvars: int, kmax: int) -> dict:
    """Expansion of prod_i (sum_j factor[j] t_i^j) truncated at total degree kmax."""
    poly: dict[tuple, object] = {(0,) * nvars: Fraction(1)}
    for i in range(nvars):
        new: dict[tuple, object] = {}
        for exps, c in poly.items():
            room = kmax - sum(exps)
            for j, fj in enumerate(factor):
                if j > room:
                    break
                if not fj:
                    continue
                mono = exps[:i] + (exps[i] + j,) + exps[i + 1:]
                term = c * fj
                cur = new.get(mono)
                new[mono] = term if cur is None else cur + term
        poly = {e: c for e, c in new.items() if c}
    return poly


@lru_cache(maxsize=None)
def _elementary_poly(nvars: int, j: int) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    from itertools import combinations

    terms = []
    for subset in combinations(range(nvars), j):
        exps = [0] * nvars
        for i in subset:
            exps[i] = 1
        terms.append((tuple(exps), Fraction(1)))
    return tuple(terms)


@lru_cache(maxsize=None)
def _elementary_product(nvars: int, partition: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    """Expansion of prod over parts j of e_j, as a monomial table."""
    poly: dict[tuple, Fraction] = {(0,) * nvars: Fraction(1)}
    weight = sum(partition)
    for j in partition:
        poly = _mvp_mul(poly, dict(_elementary_poly(nvars, j)), weight)
    return tuple(sorted(poly.items()))


def _symmetric_to_partitions(poly: Mapping[tuple, object], nvars: int) -> dict[int, dict[tuple[int, ...], object]]:
    """Rewrite a symmetric polynomial in the elementary symmetric basis.

    Returns, per total degree w, the coefficients indexed by the
    partition of w naming the monomial prod p_j (e_j substituted by p_j).
    Classical greedy algorithm on the lex-leading term; feeding it a
    non-symmetric polynomial is an internal error.
    """
    by_weight: dict[int, dict[tuple, object]] = {}
    for exps, c in poly.items():
        by_weight.setdefault(sum(exps), {})[exps] = c
    out: dict[int, dict[tuple[int, ...], object]] = {}
    for w, work in sorted(by_weight.items()):
        res: dict[tuple[int, ...], object] = {}
        work = dict(work)
        while work:
            lam = max(work)
            if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
                raise ConsistencyError("symmetric reduction met a non-symmetric leading term")
            c = work.pop(lam)
            parts: list[int] = []
            padded = tuple(lam) + (0,)
            for j in range(len(lam)):
                parts.extend([j + 1] * (padded[j] - padded[j + 1]))
            partition = tuple(sorted(parts, reverse=True))
            res[partition] = c
            for exps, q in _elementary_product(nvars, partition):
                if exps == lam:
                    continue
                term = c * q
                cur = work.get(exps)
                acc = -term if cur is None else cur - term
                if acc:
                    work[exps] = acc
                else:
                    work.pop(exps, None)
        out[w] = res
    return out


# ---------------------------------------------------------------------------
# universal polynomials in Pontryagin classes


class MultiplicativeSequence:
    """K_0, K_1, ..., K_max for a characteristic series: K_j is a
    polynomial in p_1..p_j stored as partition -> coefficient."""

    __slots__ = ("name", "max_weight", "weights", "source")

    def __init__(
        self,
        name: str,
        max_weight: int,
        weights: Mapping[int, Mapping[tuple[int, ...], Fraction]],
        source: CharacteristicSeries,
    ) -> None:
        self.name = name
        self.max_weight = max_weight
        self.weights = {w: dict(weights.get(w, {})) for w in range(max_weight + 1)}
        self.source = source

    def polynomial(self, weight: int) -> dict[tuple[int, ...], Fraction]:
        if weight > self.max_weight:
            raise ValueError(f"{self.name} sequence only carries weights <= {self.max_weight}")
        return dict(self.weights[weight])

    def evaluate_top(self, p: Sequence[GradedElement], weight: int, ring) -> GradedElement:
        acc = ring.zero()
        for partition, coeff in self.weights[weight].items():
            mono = ring.scalar(coeff)
            for part in partition:
                mono = mono * p[part - 1]
            acc = acc + mono
        return acc

    def __repr__(self) -> str:
        return f"MultiplicativeSequence({self.name}, max_weight={self.max_weight})"


def universal_k_polynomials(
    series: CharacteristicSeries,
    max_weight: int,
    num_vars: int | None = None,
) -> MultiplicativeSequence:
    """Symmetric-function expansion of prod f(x_i) into p-monomials.

    The number of formal variables defaults to max_weight; anything
    >= max_weight gives the same answer (stability), fewer variables
    cannot see all elementary symmetric functions and is rejected.
    """
    if series.order < max_weight:
        raise ValueError(
            f"series {series.name} carries x^2-order {series.order}, need {max_weight}"
        )
    nvars = max_weight if num_vars is None else num_vars
    if nvars < max_weight:
        raise ValueError("need at least as many formal variables as the weight")
    if max_weight == 0 or nvars == 0:
        return MultiplicativeSequence(series.name, max_weight, {0: {(): Fraction(1)}}, series)
    factor = list(series.coeffs[: max_weight + 1])
    poly = _expand_symmetric_product(factor, nvars, max_weight)
    weights = _symmetric_to_partitions(poly, nvars)
    return MultiplicativeSequence(series.name, max_weight, weights, series)


@lru_cache(maxsize=None)
def l_sequence(max_weight: int) -> MultiplicativeSequence:
    return universal_k_polynomials(CharacteristicSeries.l_genus(max_weight + 1), max_weight)


@lru_cache(maxsize=None)
def ahat_sequence(max_weight: int) -> MultiplicativeSequence:
    return universal_k_polynomials(CharacteristicSeries.ahat_genus(max_weight + 1), max_weight)


# ---------------------------------------------------------------------------
# genus evaluation


def evaluate_genus(m: ManifoldModel, seq: MultiplicativeSequence) -> Fraction:
    """Genus of m under seq; 0 (with a warning) when dim is not a multiple of 4.

    When the model carries tangent roots the value is computed through
    both pipelines and they must agree exactly.
    """
    dim = m.real_dimension
    if dim % 4:
        warnings.warn(
            f"{m.name} has dimension {dim}, not divisible by 4; genus is 0 by convention",
            stacklevel=2,
        )
        return Fraction(0)
    k = dim // 4
    if seq.max_weight < k:
        raise ValueError(f"sequence {seq.name} carries weight <= {seq.max_weight}, need {k}")
    p = pontryagin_classes(m)
    value = pair(m, seq.evaluate_top(p, k, m.ring))
    if isinstance(m.tangent, StableRoots):
        total = m.ring.one()
        for x in m.tangent.roots:
            total = total * seq.source.evaluate_at(x)
        direct = pair(m, total)
        if direct != value:
            raise ConsistencyError(
                f"genus pipelines disagree on {m.name}: universal {value}, roots {direct}"
            )
    return value


def signature(m: ManifoldModel) -> Fraction:
    return evaluate_genus(m, l_sequence(m.real_dimension // 4))


def ahat(m: ManifoldModel) -> Fraction:
    return evaluate_genus(m, ahat_sequence(m.real_dimension // 4))


# ---------------------------------------------------------------------------
# the q-twist


class TwistCharacter:
    """Per-root-pair factor of the exterior/symmetric power tower.

    g(x, q) = prod over odd n of (1 - q^n e^x)(1 - q^n e^-x) times the
    inverses of the same expressions over even n, truncated at the given
    q-order.  The result is even in x; x2_coeffs[j] is the scalar
    q-series multiplying x^(2j).  g(0, q) governs the rank correction
    for stable trivial summands.
    """

    __slots__ = ("q_order", "x2_order", "x2_coeffs")

    def __init__(self, q_order: int, x2_order: int, x2_coeffs: Sequence[QSeries]) -> None:
        self.q_order = q_order
        self.x2_order = x2_order
        self.x2_coeffs = tuple(x2_coeffs)

    def scalar_part(self) -> QSeries:
        return self.x2_coeffs[0]

    def __repr__(self) -> str:
        return f"TwistCharacter(q_order={self.q_order}, x2_order={self.x2_order})"


def _bimul(a: list[list[Fraction]], b: list[list[Fraction]], nmax: int, rmax: int) -> list[list[Fraction]]:
    out = [[Fraction(0)] * (rmax + 1) for _ in range(nmax + 1)]
    for n1, row in enumerate(a):
        for r1, c1 in enumerate(row):
            if not c1:
                continue
            for n2 in range(nmax + 1 - n1):
                brow = b[n2]
                for r2 in range(rmax + 1 - r1):
                    c2 = brow[r2]
                    if c2:
                        out[n1 + n2][r1 + r2] += c1 * c2
    return out


@lru_cache(maxsize=None)
def twist_character(q_order: int, x2_order: int) -> TwistCharacter:
    n_max, r_max = q_order, 2 * x2_order
    grid = [[Fraction(0)] * (r_max + 1) for _ in range(n_max + 1)]
    grid[0][0] = Fraction(1)

    def exp_row(rate: int) -> list[Fraction]:
        return [Fraction(rate ** r, factorial(r)) for r in range(r_max + 1)]

    for n in range(1, n_max + 1):
        for sign in (1, -1):
            f = [[Fraction(0)] * (r_max + 1) for _ in range(n_max + 1)]
            if n % 2:
                # 1 - q^n e^(sign x)
                f[0][0] = Fraction(1)
                for r, c in enumerate(exp_row(sign)):
                    f[n][r] -= c
            else:
                # (1 - q^n e^(sign x))^(-1) = sum_j q^(nj) e^(sign j x)
                for j in range(n_max // n + 1):
                    for r, c in enumerate(exp_row(sign * j)):
                        f[n * j][r] += c
            grid = _bimul(grid, f, n_max, r_max)

    for n in range(n_max + 1):
        for r in range(1, r_max + 1, 2):
            if grid[n][r]:
                raise ConsistencyError("twist factor failed to be even in x")
    coeffs = [QSeries([grid[n][2 * j] for n in range(n_max + 1)]) for j in range(x2_order + 1)]
    return TwistCharacter(q_order, x2_order, coeffs)


def _lift_scalar_series(s: QSeries, ring) -> QSeries:
    one = ring.one()
    return QSeries([one * c for c in s.coeffs])


def _elliptic_roots(m: ManifoldModel, order: int) -> list[Fraction]:
    k = m.real_dimension // 4
    x2_order = k + 1
    tw = twist_character(order, x2_order)
    ah = CharacteristicSeries.ahat_genus(x2_order)
    one = m.ring.one()
    roots = m.tangent.roots
    aclass = one
    acc = QSeries([one] + [m.ring.zero()] * order)
    for x in roots:
        t = x * x
        tpowers = [one]
        for _ in range(x2_order):
            tpowers.append(tpowers[-1] * t)
        aclass = aclass * _poly_at(ah.coeffs, tpowers, m)
        g_coeffs = []
        for n in range(order + 1):
            coeff = m.ring.zero()
            for j, tp in enumerate(tpowers):
                scal = tw.x2_coeffs[j].coeffs[n]
                if scal and not tp.is_zero:
                    coeff = coeff + tp * scal
            g_coeffs.append(coeff)
        acc = acc * QSeries(g_coeffs)
    correction = tw.scalar_part() ** (m.real_dimension // 2 - len(roots))
    acc = acc * _lift_scalar_series(correction, m.ring)
    return [pair(m, aclass * acc.coeffs[n]) for n in range(order + 1)]


def _poly_at(coeffs: Sequence[Fraction], tpowers: Sequence[GradedElement], m: ManifoldModel) -> GradedElement:
    acc = m.ring.zero()
    for j, c in enumerate(coeffs):
        if j < len(tpowers) and c and not tpowers[j].is_zero:
            acc = acc + tpowers[j] * c
    return acc


def _elliptic_universal(m: ManifoldModel, order: int) -> list[Fraction]:
    dim = m.real_dimension
    k = dim // 4
    x2_order = k + 1
    tw = twist_character(order, x2_order)
    ah = CharacteristicSeries.ahat_genus(x2_order)
    # F(t, q) = f_ahat(t) * g(t, q), coefficients as scalar q-series
    factor: list[QSeries] = []
    for j in range(k + 1):
        acc = QSeries.constant(Fraction(0), order)
        for i in range(j + 1):
            if ah.coeffs[i]:
                acc = acc + tw.x2_coeffs[j - i] * ah.coeffs[i]
        factor.append(acc)
    poly = _expand_symmetric_product(factor, k, k)
    weights = _symmetric_to_partitions(poly, k)
    top = weights.get(k, {})
    p = pontryagin_classes(m)
    paired = [Fraction(0)] * (order + 1)
    for partition, qcoeff in top.items():
        mono = m.ring.one()
        for part in partition:
            mono = mono * p[part - 1]
        pnum = pair(m, mono)
        if pnum:
            for n in range(order + 1):
                paired[n] += qcoeff.coeffs[n] * pnum
    correction = tw.scalar_part() ** (dim // 2 - k)
    return list((correction * QSeries(paired)).coeffs)


def elliptic_q_coefficients(m: ManifoldModel, order: int | None = None) -> list[Fraction]:
    """Coefficients 0..N of q^(k/2) * phi(M), all exact rationals.

    Coefficient 0 is the A-hat genus; coefficient 1 is minus the A-hat
    genus twisted by the complexified tangent bundle.  For spin models
    every coefficient is an integer.
    """
    dim = m.real_dimension
    if dim % 4:
        raise ValueError(f"{m.name} has dimension {dim}; the expansion needs a multiple of 4")
    if order is None:
        order = dim // 4
    if order < 0:
        raise ValueError("q-order must be nonnegative")
    if isinstance(m.tangent, StableRoots):
        return _elliptic_roots(m, order)
    return _elliptic_universal(m, order)


# ---------------------------------------------------------------------------
# twisted A-hat


def _twisted_universal(m: ManifoldModel) -> Fraction:
    dim = m.real_dimension
    k = dim // 4
    if k == 0:
        return Fraction(dim) * pair(m, m.ring.one())
    ah = CharacteristicSeries.ahat_genus(k + 1)
    aclass = _expand_symmetric_product(list(ah.coeffs[: k + 1]), k, k)
    ch: dict[tuple, Fraction] = {(0,) * k: Fraction(dim)}
    for i in range(k):
        for r in range(1, k + 1):
            mono = tuple(r if idx == i else 0 for idx in range(k))
            ch[mono] = ch.get(mono, Fraction(0)) + Fraction(2, factorial(2 * r))
    product_poly = _mvp_mul(aclass, ch, k)
    top = _symmetric_to_partitions(product_poly, k).get(k, {})
    p = pontryagin_classes(m)
    value = Fraction(0)
    for partition, coeff in top.items():
        mono = m.ring.one()
        for part in partition:
            mono = mono * p[part - 1]
        value += coeff * pair(m, mono)
    return value


def twisted_ahat_tangent(m: ManifoldModel) -> Fraction:
    """A-hat genus twisted by ch of the complexified tangent bundle.

    The character keeps rank(T_C M) = dim M: stable root lists longer
    than dim/2 are compensated by an explicit constant correction.
    """
    dim = m.real_dimension
    if dim % 4:
        raise ValueError(f"{m.name} has dimension {dim}; the twisted genus needs a multiple of 4")
    k = dim // 4
    value = _twisted_universal(m)
    if isinstance(m.tangent, StableRoots):
        x2_order = k + 1
        ah = CharacteristicSeries.ahat_genus(x2_order)
        one = m.ring.one()
        aclass = one
        ch = m.ring.scalar(dim - 2 * len(m.tangent.roots))
        for x in m.tangent.roots:
            t = x * x
            tpowers = [one]
            for _ in range(x2_order):
                tpowers.append(tpowers[-1] * t)
            aclass = aclass * _poly_at(ah.coeffs, tpowers, m)
            term = m.ring.scalar(2)
            for r in range(1, x2_order + 1):
                if not tpowers[r].is_zero:
                    term = term + tpowers[r] * Fraction(2, factorial(2 * r))
            ch = ch + term
        direct = pair(m, aclass * ch)
        if direct != value:
            raise ConsistencyError(
                f"twisted A-hat pipelines disagree on {m.name}: universal {value}, roots {direct}"
            )
    return value
