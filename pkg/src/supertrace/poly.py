"""Exact multivariate polynomials over the rationals.

This is the coefficient workhorse for the whole package: commuting scalar
symbols (formal Cartan parameters, simplex variables, the deformation
parameter when it is convenient to treat it as a plain symbol) with
``fractions.Fraction`` coefficients.  Nothing here knows about parity or
star products; odd variables live in :mod:`supertrace.algebra`.

Monomial keys are tuples ``((name, exponent), ...)`` sorted by name with
all exponents positive, so the zero-degree monomial is the empty tuple.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Scalar = Union[int, Fraction]
Monomial = tuple[tuple[str, int], ...]

__all__ = ["PolyQ", "Monomial", "Scalar"]


def _as_fraction(c: Scalar) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class PolyQ:
    """A polynomial in named commuting variables with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        # Callers hand in already-normalized maps; drop zeros defensively.
        self.terms: dict[Monomial, Fraction] = (
            {m: c for m, c in terms.items() if c} if terms else {}
        )

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> "PolyQ":
        c = _as_fraction(c)
        return cls({(): c} if c else {})

    @classmethod
    def var(cls, name: str, exp: int = 1, coeff: Scalar = 1) -> "PolyQ":
        if exp < 0:
            raise ValueError("negative exponent")
        if exp == 0:
            return cls.const(coeff)
        return cls({((name, exp),): _as_fraction(coeff)})

    zero: "PolyQ"
    one: "PolyQ"

    # ------------------------------------------------------------------
    # ring structure
    # ------------------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PolyQ):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == PolyQ.const(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "PolyQ | Scalar") -> "PolyQ":
        if isinstance(other, (int, Fraction)):
            other = PolyQ.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return PolyQ(out)

    __radd__ = __add__

    def __neg__(self) -> "PolyQ":
        return PolyQ({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "PolyQ | Scalar") -> "PolyQ":
        if isinstance(other, (int, Fraction)):
            other = PolyQ.const(other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "PolyQ":
        return PolyQ.const(other) - self

    def __mul__(self, other: "PolyQ | Scalar") -> "PolyQ":
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return PolyQ()
            return PolyQ({m: cc * c for m, cc in self.terms.items()})
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mul_monomials(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return PolyQ(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "PolyQ":
        if k < 0:
            raise ValueError("negative power")
        out = PolyQ.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # ------------------------------------------------------------------
    # calculus and evaluation
    # ------------------------------------------------------------------
    def substitute(self, name: str, value: "PolyQ | Scalar") -> "PolyQ":
        """Replace a variable by a polynomial (or scalar) exactly."""
        if isinstance(value, (int, Fraction)):
            value = PolyQ.const(value)
        out = PolyQ()
        # Group monomials by their exponent in `name` so each power of the
        # replacement is computed once.
        by_exp: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            e = 0
            rest = []
            for v, k in m:
                if v == name:
                    e = k
                else:
                    rest.append((v, k))
            by_exp.setdefault(e, {})[tuple(rest)] = c
        for e, rest_terms in sorted(by_exp.items()):
            out = out + PolyQ(rest_terms) * (value**e)
        return out

    def antiderivative(self, name: str) -> "PolyQ":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = 0
            rest = []
            for v, k in m:
                if v == name:
                    e = k
                else:
                    rest.append((v, k))
            rest.append((name, e + 1))
            rest.sort()
            out[tuple(rest)] = c / (e + 1)
        return PolyQ(out)

    def integrate(self, name: str, lo: "PolyQ | Scalar", hi: "PolyQ | Scalar") -> "PolyQ":
        """Definite integral in one variable with polynomial bounds."""
        anti = self.antiderivative(name)
        return anti.substitute(name, hi) - anti.substitute(name, lo)

    def coefficient(self, name: str, exp: int) -> "PolyQ":
        """The coefficient of name**exp (a polynomial in the other variables)."""
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = 0
            rest = []
            for v, k in m:
                if v == name:
                    e = k
                else:
                    rest.append((v, k))
            if e == exp:
                out[tuple(rest)] = c
        return PolyQ(out)

    def degree(self, name: str | None = None) -> int:
        """Total degree, or degree in one variable; zero polynomial has degree -1."""
        if not self.terms:
            return -1
        if name is None:
            return max(sum(k for _, k in m) for m in self.terms)
        return max((k for m in self.terms for v, k in m if v == name), default=0)

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def as_fraction(self) -> Fraction:
        """The value of a constant polynomial; error if non-constant."""
        if not self.terms:
            return Fraction(0)
        if set(self.terms) != {()}:
            raise ValueError(f"not a constant polynomial: {self}")
        return self.terms[()]

    def homogeneous_part(self, degree: int, names: Iterable[str] | None = None) -> "PolyQ":
        """Terms whose total degree (in `names`, default all) equals `degree`."""
        names_set = set(names) if names is not None else None
        out = {}
        for m, c in self.terms.items():
            d = sum(k for v, k in m if names_set is None or v in names_set)
            if d == degree:
                out[m] = c
        return PolyQ(out)

    # ------------------------------------------------------------------
    # presentation
    # ------------------------------------------------------------------
    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __repr__(self) -> str:
        return f"PolyQ({self.text()})"

    def text(self) -> str:
        """Canonical text: terms sorted, rationals as p/q."""
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            factors = [
                name if e == 1 else f"{name}^{e}" for name, e in m
            ]
            mono = "*".join(factors)
            if mono:
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{c}*{mono}")
            else:
                parts.append(str(c))
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


def _mul_monomials(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    merged: dict[str, int] = dict(m1)
    for v, k in m2:
        merged[v] = merged.get(v, 0) + k
    return tuple(sorted(merged.items()))


PolyQ.zero = PolyQ()
PolyQ.one = PolyQ.const(1)
