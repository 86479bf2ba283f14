"""Truncated power series, characteristic genus series, and the χ map.

The series ring here is deliberately small: exact rational coefficients,
total-degree truncation, and just enough arithmetic (product, inverse, log)
to build the classical genus series and verify the generating-function
identities the index formula rests on.  Everything stays in ℚ.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Callable, Mapping, Sequence

from .algebra import AlgebraContext, SPoly, super_bracket
from .cocycle import perfect_matchings
from .poly import PolyQ, Scalar

__all__ = [
    "TruncatedSeries",
    "series",
    "golden_lines",
    "lie_antisymmetrize",
    "chi",
    "proj_quadratic",
    "CurvatureData",
    "rhs_index",
]

MAX_ORDER = 30


def _frac(c: Scalar) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


@dataclass(frozen=True)
class TruncatedSeries:
    """A polynomial truncated at total degree ``order`` over named variables."""

    variables: tuple[str, ...]
    order: int
    coeffs: Mapping[tuple[int, ...], Fraction]

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(variables: Sequence[str], order: int) -> "TruncatedSeries":
        return TruncatedSeries(tuple(variables), order, {})

    @staticmethod
    def const(variables: Sequence[str], order: int, c: Scalar) -> "TruncatedSeries":
        c = _frac(c)
        n = len(variables)
        return TruncatedSeries(
            tuple(variables), order, {(0,) * n: c} if c else {}
        )

    @staticmethod
    def var(variables: Sequence[str], order: int, name: str) -> "TruncatedSeries":
        variables = tuple(variables)
        i = variables.index(name)
        e = tuple(1 if j == i else 0 for j in range(len(variables)))
        return TruncatedSeries(variables, order, {e: Fraction(1)})

    # -- ring structure ---------------------------------------------------
    def _check(self, other: "TruncatedSeries") -> None:
        if self.variables != other.variables or self.order != other.order:
            raise ValueError("series rings differ")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return TruncatedSeries(self.variables, self.order, out)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "TruncatedSeries":
        c = _frac(c)
        if not c:
            return TruncatedSeries.zero(self.variables, self.order)
        return TruncatedSeries(
            self.variables, self.order, {e: c * v for e, v in self.coeffs.items()}
        )

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            for e2, c2 in other.coeffs.items():
                if d1 + sum(e2) > self.order:
                    continue
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return TruncatedSeries(self.variables, self.order, out)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and self.variables == other.variables
            and self.order == other.order
            and dict(self.coeffs) == dict(other.coeffs)
        )

    def __hash__(self) -> int:
        return hash((self.variables, self.order, frozenset(self.coeffs.items())))

    # -- calculus on units / nilpotents ------------------------------------
    def constant_term(self) -> Fraction:
        return self.coeffs.get((0,) * len(self.variables), Fraction(0))

    def inverse(self) -> "TruncatedSeries":
        """1/self for series with invertible constant term."""
        c0 = self.constant_term()
        if not c0:
            raise ZeroDivisionError("series has no constant term")
        one = TruncatedSeries.const(self.variables, self.order, 1)
        t = one - self.scale(Fraction(1) / c0)  # nilpotent mod truncation
        acc, power = one, one
        for _ in range(self.order):
            power = power * t
            if not power:
                break
            acc = acc + power
        return acc.scale(Fraction(1) / c0)

    def log(self) -> "TruncatedSeries":
        """log(self) for series with constant term 1."""
        if self.constant_term() != 1:
            raise ValueError("log needs constant term 1")
        one = TruncatedSeries.const(self.variables, self.order, 1)
        t = self - one
        acc = TruncatedSeries.zero(self.variables, self.order)
        power = one
        for k in range(1, self.order + 1):
            power = power * t
            if not power:
                break
            acc = acc + power.scale(Fraction((-1) ** (k + 1), k))
        return acc

    def exp(self) -> "TruncatedSeries":
        """exp(self) for series with constant term 0."""
        if self.constant_term():
            raise ValueError("exp needs constant term 0")
        one = TruncatedSeries.const(self.variables, self.order, 1)
        acc, power = one, one
        for k in range(1, self.order + 1):
            power = (power * self).scale(Fraction(1, k))
            if not power:
                break
            acc = acc + power
        return acc

    # -- reshaping ---------------------------------------------------------
    def lift(
        self, variables: Sequence[str], order: int, rename: Mapping[str, str] | None = None
    ) -> "TruncatedSeries":
        """Embed into a larger ring, optionally renaming variables."""
        variables = tuple(variables)
        rename = rename or {}
        pos = {}
        for i, v in enumerate(self.variables):
            pos[i] = variables.index(rename.get(v, v))
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.coeffs.items():
            if sum(e) > order:
                continue
            ee = [0] * len(variables)
            for i, k in enumerate(e):
                ee[pos[i]] = k
            out[tuple(ee)] = c
        return TruncatedSeries(variables, order, out)

    def homogeneous(self, degree: int) -> "TruncatedSeries":
        return TruncatedSeries(
            self.variables,
            self.order,
            {e: c for e, c in self.coeffs.items() if sum(e) == degree},
        )

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self.coeffs.get(tuple(exponents), Fraction(0))

    def as_polyq(self) -> PolyQ:
        acc = PolyQ.zero
        for e, c in sorted(self.coeffs.items()):
            term = PolyQ.const(c)
            for name, k in zip(self.variables, e):
                if k:
                    term = term * PolyQ.var(name, k)
            acc = acc + term
        return acc

    def text(self) -> str:
        return self.as_polyq().text()


def golden_lines(ts: TruncatedSeries) -> list[str]:
    """Render as golden-file lines: ``exponent-vector : p/q``, sorted."""
    out = []
    for e in sorted(ts.coeffs):
        c = ts.coeffs[e]
        out.append(f"{','.join(str(k) for k in e)} : {c.numerator}/{c.denominator}")
    return out


# ---------------------------------------------------------------------------
# named characteristic series
# ---------------------------------------------------------------------------


def _univariate(order: int, var: str) -> tuple[str, ...]:
    return (var,)


def _exp_like(order: int, var: str, term: Callable[[int], Fraction]) -> TruncatedSeries:
    coeffs = {}
    for k in range(order + 1):
        c = term(k)
        if c:
            coeffs[(k,)] = c
    return TruncatedSeries((var,), order, coeffs)


def series(name: str, var: str = "t", order: int = 10) -> TruncatedSeries:
    """Named genus/elementary series with exact rational coefficients.

    ``Ahat`` is (t/2)/sinh(t/2), ``Bhat`` is cosh(t/2)·sinh(t)/t, ``Chat``
    is cos(t/2)·sin(t)/t, ``BChat`` their product, and ``L`` is t/tanh(t).
    The elementary names exp/cosh/sinh/cos/sin are the usual expansions.
    """
    if order > MAX_ORDER:
        raise ValueError(f"order {order} exceeds cap {MAX_ORDER}")
    if name == "exp":
        return _exp_like(order, var, lambda k: Fraction(1, factorial(k)))
    if name == "sinh":
        return _exp_like(
            order, var, lambda k: Fraction(1, factorial(k)) if k % 2 else Fraction(0)
        )
    if name == "cosh":
        return _exp_like(
            order, var, lambda k: Fraction(0) if k % 2 else Fraction(1, factorial(k))
        )
    if name == "sin":
        return _exp_like(
            order,
            var,
            lambda k: Fraction((-1) ** (k // 2), factorial(k)) if k % 2 else Fraction(0),
        )
    if name == "cos":
        return _exp_like(
            order,
            var,
            lambda k: Fraction(0) if k % 2 else Fraction((-1) ** (k // 2), factorial(k)),
        )
    if name == "Ahat":
        # (t/2)/sinh(t/2) = 1 / Σ (t/2)^{2k}/(2k+1)!
        s = _exp_like(
            order,
            var,
            lambda k: Fraction(1, 2**k * factorial(k + 1)) if k % 2 == 0 else Fraction(0),
        )
        return s.inverse()
    if name == "Bhat":
        half = _exp_like(
            order, var, lambda k: Fraction(0) if k % 2 else Fraction(1, 2**k * factorial(k))
        )  # cosh(t/2)
        sinc = _exp_like(
            order, var, lambda k: Fraction(0) if k % 2 else Fraction(1, factorial(k + 1))
        )  # sinh(t)/t
        return half * sinc
    if name == "Chat":
        half = _exp_like(
            order,
            var,
            lambda k: Fraction(0)
            if k % 2
            else Fraction((-1) ** (k // 2), 2**k * factorial(k)),
        )  # cos(t/2)
        sinc = _exp_like(
            order,
            var,
            lambda k: Fraction(0)
            if k % 2
            else Fraction((-1) ** (k // 2), factorial(k + 1)),
        )  # sin(t)/t
        return half * sinc
    if name == "BChat":
        return series("Bhat", var, order) * series("Chat", var, order)
    if name == "L":
        # t/tanh(t) = cosh(t) / (sinh(t)/t)
        sinc = _exp_like(
            order, var, lambda k: Fraction(0) if k % 2 else Fraction(1, factorial(k + 1))
        )
        return series("cosh", var, order) * sinc.inverse()
    raise ValueError(f"unknown series {name!r}")


# ---------------------------------------------------------------------------
# Lie antisymmetrization and the χ map
# ---------------------------------------------------------------------------


def lie_antisymmetrize(cochain: Callable[..., object], k: int) -> Callable[..., object]:
    """Alternate a (k+1)-ary evaluator over its last k arguments.

    Degree zero is the identity; elsewhere the sum runs over all
    permutations of the arguments after the zeroth, with signs.
    """
    if k > 4:
        raise ValueError("antisymmetrization bounded at k <= 4")
    if k == 0:
        return cochain

    def alternating(a0, *rest):
        if len(rest) != k:
            raise ValueError(f"expected {k} arguments after the zeroth")
        total = None
        for perm in permutations(range(k)):
            sign = _perm_sign(perm)
            val = cochain(a0, *(rest[i] for i in perm))
            val = val if sign > 0 else _negate(val)
            total = val if total is None else total + val
        return total

    return alternating


def _perm_sign(perm: Sequence[int]) -> int:
    inv = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return -1 if inv % 2 else 1


def _negate(val):
    if isinstance(val, (int, Fraction)):
        return -val
    return val.scale(-1)


def proj_quadratic(ctx: AlgebraContext, x: SPoly) -> SPoly:
    """Project onto the homogeneous-quadratic-plus-constant part."""
    keep = {}
    for key, c in x.terms.items():
        evens, mask, hb = key
        deg = sum(evens) + mask.bit_count()
        if deg == 2 or deg == 0:
            keep[key] = c
    return SPoly(keep)


def chi(
    ctx: AlgebraContext,
    P: Callable[..., PolyQ],
    m: int,
    args: Sequence[SPoly],
) -> PolyQ:
    """Chern–Weil cochain χ(P) evaluated on 2m algebra elements.

    The curvature of the non-Lie projection pr is
    C(v∧w) = [pr v, pr w] − pr([v, w]) (star brackets), and χ(P) pairs the
    arguments into curvature slots over all perfect matchings with the
    matching sign — the quotient of Σ_{2m} by the slot symmetries.
    """
    if len(args) != 2 * m:
        raise ValueError(f"chi of degree {m} needs {2 * m} arguments")
    if m == 0:
        return P()

    def curvature(v: SPoly, w: SPoly) -> SPoly:
        inner = super_bracket(ctx, proj_quadratic(ctx, v), proj_quadratic(ctx, w))
        outer = proj_quadratic(ctx, super_bracket(ctx, v, w))
        return inner + outer.scale(-1)

    total = PolyQ.zero
    for sign, pairs in perfect_matchings(list(range(2 * m))):
        slots = [curvature(args[i], args[j]) for (i, j) in pairs]
        val = P(*slots)
        total = total + (val if sign > 0 else PolyQ.zero - val)
    return total


# ---------------------------------------------------------------------------
# the curvature-series right-hand side
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurvatureData:
    """Formal Cartan curvature symbols for the index right-hand side.

    Each symbol is a cohomological-degree-2 generator: ``sp_roots`` are the
    eigenvalue symbols of the even curvature, ``so_hyp``/``so_def`` those of
    the odd one's hyperbolic and definite blocks, and ``omega`` names the
    central 2-form.
    """

    sp_roots: tuple[str, ...]
    so_hyp: tuple[str, ...]
    so_def: tuple[str, ...]
    omega: str = "Omega"

    def names(self) -> tuple[str, ...]:
        return self.sp_roots + self.so_hyp + self.so_def + (self.omega,)


def rhs_index(ctx: AlgebraContext, n: int, data: CurvatureData) -> PolyQ:
    """(−1)^{n+a+ẑ} ħⁿ [∏Â(rᵢ) ∏B̂(sⱼ) ∏Ĉ(dₖ) exp(−Ω/ħ)] in degree 2n.

    Degree 2n cohomological means total symbol degree n, each symbol having
    degree 2.  The 1/ħ from the exponent cancels against the ħⁿ prefactor:
    a symbol-degree-k monomial carries ħ^{n−k} ≥ ħ⁰, so the result is an
    honest polynomial in the symbols and ħ.
    """
    if len(data.sp_roots) != ctx.n or len(data.so_hyp) != ctx.a:
        raise ValueError("curvature symbols do not match the context type")
    zhat = (ctx.b - ctx.a) // 2
    if len(data.so_def) != zhat:
        raise ValueError("definite-block symbols do not match ẑ")
    names = data.names()
    acc = TruncatedSeries.const(names, n, 1)
    for r in data.sp_roots:
        acc = acc * series("Ahat", "t", n).lift(names, n, {"t": r})
    for s in data.so_hyp:
        acc = acc * series("Bhat", "t", n).lift(names, n, {"t": s})
    for d in data.so_def:
        acc = acc * series("Chat", "t", n).lift(names, n, {"t": d})
    # exp(−Ω/ħ) enters degree-graded: the Ω^k/ħ^k term at symbol degree k.
    om = TruncatedSeries.var(names, n, data.omega)
    expo = TruncatedSeries.const(names, n, 1)
    power = expo
    for k in range(1, n + 1):
        power = (power * om).scale(Fraction(-1, k))
        expo = expo + power
    acc = acc * expo
    sign = -1 if (n + ctx.a + zhat) % 2 else 1
    total = PolyQ.zero
    part = (
        sorted(acc.homogeneous(n).coeffs.items())
        if n
        else [((0,) * len(names), acc.constant_term())]
    )
    for e, c in part:
        if not c:
            continue
        term = PolyQ.const(c * sign)
        ompow = e[-1]
        # each power of Ω came with 1/ħ; what survives of ħⁿ is ħ^{n−Ω-power}
        if n - ompow:
            term = term * PolyQ.var("hbar", n - ompow)
        for name, k in zip(names, e):
            if k:
                term = term * PolyQ.var(name, k)
        total = total + term
    return total
