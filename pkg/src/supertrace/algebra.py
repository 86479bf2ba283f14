"""The Weyl-Clifford superalgebra: context, star product, Berezin integral.

An element lives in the polynomial superalgebra on 2n even variables
p₁..pₙ, q₁..qₙ and a+b odd variables θ₁..θ_{a+b}, over exact rational
coefficients that may themselves be polynomials in formal scalar symbols
(Cartan parameters and the like).  The deformation parameter ħ is tracked
as an explicit power on each monomial, so every computation terminates on
polynomial inputs.

The odd variables come in the interleaved order

    ζ₁, η₁, …, ζ_a, η_a, ξ₁, μ₁, …, ξ_ẑ, μ_ẑ [, υ]

with ẑ = ⌊(b−a)/2⌋ and the final υ present exactly when b−a is odd.  The
bilinear form matrix hQ pairs ζᵢ with ηᵢ (entry +1 both ways) and gives
each definite variable self-pairing −1; the Clifford relations it induces
are θᵢ⋆θⱼ + θⱼ⋆θᵢ = ħ·hQ[i][j].

Sign conventions (all verified by the relation test-suite rather than
taken on faith): a two-slot operator acts by
(D₁⊗D₂)(x⊗y) = (−1)^{|D₂||x|} D₁x ⊗ D₂y, and the odd half of the star
bivector carries an overall minus sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .poly import PolyQ, Scalar

__all__ = [
    "AlgebraContext",
    "make_context",
    "SPoly",
    "star",
    "plain_mul",
    "partial",
    "super_bracket",
    "berezin",
    "upsilon",
    "phi_embed",
    "theta",
    "parity",
    "hbar_to_poly",
    "to_text",
    "random_element",
]

Key = tuple[tuple[int, ...], int, int]  # (even exponents, odd mask, hbar power)


# ---------------------------------------------------------------------------
# context
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraContext:
    n: int
    a: int
    b: int

    @property
    def zhat(self) -> int:
        return (self.b - self.a) // 2

    @property
    def odd_dim(self) -> int:
        return self.a + self.b

    @property
    def even_dim(self) -> int:
        return 2 * self.n

    @property
    def odd_names(self) -> tuple[str, ...]:
        names: list[str] = []
        for i in range(1, self.a + 1):
            names += [f"zeta{i}", f"eta{i}"]
        for j in range(1, self.zhat + 1):
            names += [f"xi{j}", f"mu{j}"]
        if (self.b - self.a) % 2:
            names.append("upsilon")
        return tuple(names)

    # positions of the structural odd variables in the interleaved order
    def zeta_pos(self, i: int) -> int:
        self._check(1 <= i <= self.a, "zeta index")
        return 2 * (i - 1)

    def eta_pos(self, i: int) -> int:
        self._check(1 <= i <= self.a, "eta index")
        return 2 * (i - 1) + 1

    def xi_pos(self, j: int) -> int:
        self._check(1 <= j <= self.zhat, "xi index")
        return 2 * self.a + 2 * (j - 1)

    def mu_pos(self, j: int) -> int:
        self._check(1 <= j <= self.zhat, "mu index")
        return 2 * self.a + 2 * (j - 1) + 1

    def upsilon_pos(self) -> int:
        self._check((self.b - self.a) % 2 == 1, "no upsilon variable")
        return self.odd_dim - 1

    @staticmethod
    def _check(ok: bool, what: str) -> None:
        if not ok:
            raise ValueError(f"{what} out of range")

    @property
    def hQ(self) -> tuple[tuple[int, ...], ...]:
        N = self.odd_dim
        m = [[0] * N for _ in range(N)]
        for i in range(1, self.a + 1):
            m[self.zeta_pos(i)][self.eta_pos(i)] = 1
            m[self.eta_pos(i)][self.zeta_pos(i)] = 1
        for k in range(2 * self.a, N):
            m[k][k] = -1
        return tuple(tuple(row) for row in m)

    def hq_entries(self) -> tuple[tuple[int, int, int], ...]:
        """Nonzero (row, col, value) entries of hQ."""
        out = []
        for i, row in enumerate(self.hQ):
            for j, v in enumerate(row):
                if v:
                    out.append((i, j, v))
        return tuple(out)


def make_context(n: int, a: int, b: int) -> AlgebraContext:
    if n < 0 or a < 0 or b < 0:
        raise ValueError("negative dimension")
    if a > b:
        raise ValueError("need a ≤ b; swap the two orthogonal indices first")
    return AlgebraContext(n, a, b)


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


def _coeff(c: "PolyQ | Scalar") -> PolyQ:
    return c if isinstance(c, PolyQ) else PolyQ.const(c)


class SPoly:
    """A super-polynomial: map (even exponents, odd mask, ħ power) → PolyQ."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Key, PolyQ] | None = None):
        self.terms: dict[Key, PolyQ] = (
            {k: c for k, c in terms.items() if c} if terms else {}
        )

    # -- constructors ---------------------------------------------------
    @staticmethod
    def monomial(
        evens: Sequence[int], mask: int = 0, hb: int = 0, coeff: "PolyQ | Scalar" = 1
    ) -> "SPoly":
        c = _coeff(coeff)
        if not c:
            return SPoly()
        return SPoly({(tuple(evens), mask, hb): c})

    @staticmethod
    def const(ctx: AlgebraContext, c: "PolyQ | Scalar") -> "SPoly":
        return SPoly.monomial((0,) * ctx.even_dim, 0, 0, c)

    @staticmethod
    def hbar(ctx: AlgebraContext, k: int = 1, coeff: "PolyQ | Scalar" = 1) -> "SPoly":
        return SPoly.monomial((0,) * ctx.even_dim, 0, k, coeff)

    # -- linear structure -------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset((k, frozenset(c.terms.items())) for k, c in self.terms.items()))

    def __add__(self, other: "SPoly") -> "SPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return SPoly(out)

    def __neg__(self) -> "SPoly":
        return SPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "SPoly") -> "SPoly":
        return self + (-other)

    def scale(self, c: "PolyQ | Scalar") -> "SPoly":
        c = _coeff(c)
        if not c:
            return SPoly()
        return SPoly({k: cc * c for k, cc in self.terms.items()})

    def shift_hbar(self, k: int) -> "SPoly":
        return SPoly({(e, m, h + k): c for (e, m, h), c in self.terms.items()})

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) + m.bit_count() for (e, m, _h) in self.terms)

    def __repr__(self) -> str:  # debugging aid only
        return f"SPoly({len(self.terms)} terms)"


def _mask_mul_sign(m1: int, m2: int) -> int:
    """Sign of θ_{S1}·θ_{S2} → canonical ascending order (disjoint masks)."""
    inv = 0
    m = m2
    while m:
        low = m & -m
        j = low.bit_length() - 1
        inv += (m1 >> (j + 1)).bit_count()
        m ^= low
    return -1 if inv & 1 else 1


def plain_mul(f: SPoly, g: SPoly) -> SPoly:
    """The supercommutative (ħ-free, undeformed) product."""
    out: dict[Key, PolyQ] = {}
    for (e1, m1, h1), c1 in f.terms.items():
        for (e2, m2, h2), c2 in g.terms.items():
            if m1 & m2:
                continue
            key = (tuple(x + y for x, y in zip(e1, e2)), m1 | m2, h1 + h2)
            c = c1 * c2 * _mask_mul_sign(m1, m2)
            s = out.get(key)
            s = c if s is None else s + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return SPoly(out)


# ---------------------------------------------------------------------------
# derivatives
# ---------------------------------------------------------------------------


def _even_deriv_key(e: tuple[int, ...], idx: int) -> tuple[tuple[int, ...], int] | None:
    k = e[idx]
    if not k:
        return None
    return (e[:idx] + (k - 1,) + e[idx + 1 :], k)


def _odd_deriv_key(m: int, pos: int) -> tuple[int, int] | None:
    bit = 1 << pos
    if not (m & bit):
        return None
    sign = -1 if (m & (bit - 1)).bit_count() & 1 else 1
    return (m ^ bit, sign)


def partial(ctx: AlgebraContext, var: str, f: SPoly) -> SPoly:
    """Left partial derivative by a declared even or odd variable."""
    idx = _resolve_var(ctx, var)
    out: dict[Key, PolyQ] = {}
    for (e, m, h), c in f.terms.items():
        if isinstance(idx, int):  # odd position
            d = _odd_deriv_key(m, idx)
            if d is None:
                continue
            key = (e, d[0], h)
            add = c * d[1]
        else:
            kind, i = idx
            pos = i if kind == "p" else ctx.n + i
            d = _even_deriv_key(e, pos)
            if d is None:
                continue
            key = (d[0], m, h)
            add = c * d[1]
        s = out.get(key)
        s = add if s is None else s + add
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return SPoly(out)


def _resolve_var(ctx: AlgebraContext, var: str):
    if var.startswith("p") and var[1:].isdigit():
        i = int(var[1:]) - 1
        if 0 <= i < ctx.n:
            return ("p", i)
    if var.startswith("q") and var[1:].isdigit():
        i = int(var[1:]) - 1
        if 0 <= i < ctx.n:
            return ("q", i)
    if var.startswith("th") and var[2:].isdigit():
        i = int(var[2:]) - 1
        if 0 <= i < ctx.odd_dim:
            return i
    names = {name: i for i, name in enumerate(ctx.odd_names)}
    if var in names:
        return names[var]
    raise ValueError(f"unknown variable {var!r}")


# ---------------------------------------------------------------------------
# star product
# ---------------------------------------------------------------------------

PairKey = tuple[Key, Key]


def _apply_bivector(ctx: AlgebraContext, pairs: dict[PairKey, PolyQ]) -> dict[PairKey, PolyQ]:
    """One application of the Poisson bivector α + g to a two-slot state.

    α = Σ_l (∂p_l ⊗ ∂q_l − ∂q_l ⊗ ∂p_l); the odd half is
    −Σ h^{ml} ∂θ_m ⊗ ∂θ_l applied with the Koszul sign (−1)^{|x|} for the
    second derivative passing the first slot.
    """
    n = ctx.n
    hq = ctx.hq_entries()
    out: dict[PairKey, PolyQ] = {}

    def put(kx: Key, ky: Key, c: PolyQ) -> None:
        key = (kx, ky)
        s = out.get(key)
        s = c if s is None else s + c
        if s:
            out[key] = s
        else:
            out.pop(key, None)

    for ((ex, mx, hx), (ey, my, hy)), c in pairs.items():
        for l in range(n):
            dpx = _even_deriv_key(ex, l)
            dqy = _even_deriv_key(ey, n + l)
            if dpx and dqy:
                put((dpx[0], mx, hx), (dqy[0], my, hy), c * (dpx[1] * dqy[1]))
            dqx = _even_deriv_key(ex, n + l)
            dpy = _even_deriv_key(ey, l)
            if dqx and dpy:
                put((dqx[0], mx, hx), (dpy[0], my, hy), c * (-dqx[1] * dpy[1]))
        if mx:
            x_parity_sign = -1 if mx.bit_count() & 1 else 1
            for m_pos, l_pos, hval in hq:
                dx = _odd_deriv_key(mx, m_pos)
                if dx is None:
                    continue
                dy = _odd_deriv_key(my, l_pos)
                if dy is None:
                    continue
                # overall −1 on the odd bivector, Koszul sign for ∂θ_l
                # crossing the (current) first slot
                sgn = -hval * x_parity_sign * dx[1] * dy[1]
                put((ex, dx[0], hx), (ey, dy[0], hy), c * sgn)
    return out


def star(ctx: AlgebraContext, f: SPoly, g: SPoly) -> SPoly:
    """The deformed product m ∘ exp((ħ/2)(α + g)) on f ⊗ g."""
    pairs: dict[PairKey, PolyQ] = {}
    for kx, cx in f.terms.items():
        for ky, cy in g.terms.items():
            key = (kx, ky)
            c = cx * cy
            s = pairs.get(key)
            s = c if s is None else s + c
            if s:
                pairs[key] = s
    result: dict[Key, PolyQ] = {}
    k = 0
    while pairs:
        scal = Fraction(1, 2**k * factorial(k))
        for ((ex, mx, hx), (ey, my, hy)), c in pairs.items():
            if mx & my:
                continue
            key = (
                tuple(x + y for x, y in zip(ex, ey)),
                mx | my,
                hx + hy + k,
            )
            add = c * (scal * _mask_mul_sign(mx, my))
            s = result.get(key)
            s = add if s is None else s + add
            if s:
                result[key] = s
            else:
                result.pop(key, None)
        pairs = _apply_bivector(ctx, pairs)
        k += 1
    return SPoly(result)


def parity(f: SPoly) -> int | None:
    """0 for even (including zero), 1 for odd, None for mixed."""
    seen: set[int] = {m.bit_count() & 1 for (_e, m, _h) in f.terms}
    if len(seen) > 1:
        return None
    return seen.pop() if seen else 0


def super_bracket(ctx: AlgebraContext, f: SPoly, g: SPoly) -> SPoly:
    """[f,g] = f⋆g − (−1)^{|f||g|} g⋆f for homogeneous f, g."""
    pf, pg = parity(f), parity(g)
    if pf is None or pg is None:
        raise ValueError("super_bracket requires homogeneous-parity arguments")
    gf = star(ctx, g, f)
    if pf & pg:
        return star(ctx, f, g) + gf
    return star(ctx, f, g) - gf


# ---------------------------------------------------------------------------
# Berezin integration and the chain functional
# ---------------------------------------------------------------------------


def berezin(ctx: AlgebraContext, f: SPoly) -> SPoly:
    """Coefficient of the top odd monomial θ₁⋯θ_{a+b} (ascending order)."""
    full = (1 << ctx.odd_dim) - 1
    out: dict[Key, PolyQ] = {}
    for (e, m, h), c in f.terms.items():
        if m == full:
            out[(e, 0, h)] = c
    return SPoly(out)


def set_even_zero(f: SPoly) -> SPoly:
    return SPoly({k: c for k, c in f.terms.items() if not any(k[0])})


def hbar_to_poly(f: SPoly, name: str = "hbar") -> PolyQ:
    """Collapse a purely-scalar SPoly (no variables left) to ℚ[symbols, ħ]."""
    out = PolyQ()
    for (e, m, h), c in f.terms.items():
        if any(e) or m:
            raise ValueError("element still contains algebra variables")
        out = out + (c * PolyQ.var(name, h) if h else c)
    return out


def upsilon(ctx: AlgebraContext, chain: Sequence[SPoly]) -> PolyQ:
    """Star-multiply the slots left to right, set even variables to 0,
    take the Berezin integral; the result is a rational polynomial in ħ
    (times whatever scalar symbols ride in the coefficients)."""
    if not chain:
        raise ValueError("empty chain")
    acc = chain[0]
    for x in chain[1:]:
        acc = star(ctx, acc, x)
    return hbar_to_poly(berezin(ctx, set_even_zero(acc)))


def theta(ctx: AlgebraContext, coeff: "PolyQ | Scalar" = 1) -> SPoly:
    """The orientation element ζ₁η₁⋯ξ₁μ₁⋯(υ): the full ascending product."""
    return SPoly.monomial((0,) * ctx.even_dim, (1 << ctx.odd_dim) - 1, 0, coeff)


# ---------------------------------------------------------------------------
# the quadratic embedding
# ---------------------------------------------------------------------------


def _odd_var(ctx: AlgebraContext, pos: int) -> SPoly:
    return SPoly.monomial((0,) * ctx.even_dim, 1 << pos)


def _even_var(ctx: AlgebraContext, kind: str, i: int) -> SPoly:
    e = [0] * ctx.even_dim
    e[(i - 1) if kind == "p" else ctx.n + i - 1] = 1
    return SPoly.monomial(e)


def phi_embed(ctx: AlgebraContext, kind: str, index: int = 0) -> SPoly:
    """Quadratic realizations of the Cartan generators.

    cartan-sp(i) → qᵢpᵢ; cartan-so-hyperbolic(i) → ηᵢζᵢ;
    cartan-so-definite(j) → −ξⱼμⱼ; center → 1.
    """
    if kind == "center":
        return SPoly.const(ctx, 1)
    if kind == "cartan-sp":
        if not (1 <= index <= ctx.n):
            raise ValueError("sp index out of range")
        return plain_mul(_even_var(ctx, "q", index), _even_var(ctx, "p", index))
    if kind == "cartan-so-hyperbolic":
        return plain_mul(
            _odd_var(ctx, ctx.eta_pos(index)), _odd_var(ctx, ctx.zeta_pos(index))
        )
    if kind == "cartan-so-definite":
        return plain_mul(
            _odd_var(ctx, ctx.xi_pos(index)), _odd_var(ctx, ctx.mu_pos(index))
        ).scale(-1)
    raise ValueError(f"unknown embed kind {kind!r}")


# ---------------------------------------------------------------------------
# serialization and sampling
# ---------------------------------------------------------------------------


def _term_text(ctx: AlgebraContext, key: Key, coeff: PolyQ) -> str:
    e, m, h = key
    factors: list[str] = []
    for i in range(ctx.n):
        if e[i]:
            factors.append(f"p{i+1}" + (f"^{e[i]}" if e[i] > 1 else ""))
    for i in range(ctx.n):
        if e[ctx.n + i]:
            factors.append(f"q{i+1}" + (f"^{e[ctx.n+i]}" if e[ctx.n+i] > 1 else ""))
    mm = m
    while mm:
        low = mm & -mm
        factors.append(f"th{low.bit_length()}")
        mm ^= low
    if h:
        factors.append("hbar" + (f"^{h}" if h > 1 else ""))
    body = "*".join(factors)
    ctext = coeff.text()
    if not body:
        return ctext
    if ctext == "1":
        return body
    if ctext == "-1":
        return f"-{body}"
    if any(op in ctext for op in (" + ", " - ")):
        ctext = f"({ctext})"
    return f"{ctext}*{body}"


def to_text(ctx: AlgebraContext, f: SPoly) -> str:
    """Canonical text form: terms sorted, rationals as p/q, odd part th1*th3."""
    if not f.terms:
        return "0"
    keys = sorted(f.terms, key=lambda k: (sum(k[0]) + k[1].bit_count(), k[2], k[0], k[1]))
    parts = [_term_text(ctx, k, f.terms[k]) for k in keys]
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def random_element(
    ctx: AlgebraContext,
    rng,
    max_degree: int,
    n_terms: int = 3,
    parity_only: int | None = None,
    allow_hbar: bool = False,
) -> SPoly:
    """A random sparse element with coefficients uniform in {−3..3}\\{0}."""
    out = SPoly()
    attempts = 0
    made = 0
    while made < n_terms and attempts < 50 * n_terms:
        attempts += 1
        evens = [0] * ctx.even_dim
        budget = rng.randint(0, max_degree)
        mask = 0
        for pos in range(ctx.odd_dim):
            if budget and rng.random() < 0.4:
                mask |= 1 << pos
                budget -= 1
        if parity_only is not None and mask.bit_count() & 1 != parity_only:
            continue
        for _ in range(budget):
            evens[rng.randrange(ctx.even_dim)] += 1 if ctx.even_dim else 0
        if ctx.even_dim == 0 and budget:
            pass  # degree budget silently truncates in the purely odd case
        c = rng.choice([-3, -2, -1, 1, 2, 3])
        hb = rng.randint(0, 1) if allow_hbar else 0
        out = out + SPoly.monomial(evens, mask, hb, c)
        made += 1
    return out
