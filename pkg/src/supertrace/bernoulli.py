"""Bernoulli numbers, Bernoulli polynomials, and exact ψ-product integration.

The weight function ψ is the 1-periodic sawtooth equal to ``2v + 1`` on
``[-1, 0)``; equivalently ``ψ(v) = 2 B₁(v mod 1)``.  Products of ψ factors
evaluated at differences of cube variables are integrated exactly by
splitting the cube ``[0,1]^k`` into its ``k!`` order regions, on each of
which every factor is an honest linear polynomial.

Closed forms for the cyclic integrals are provided alongside the region
engine so the two can be cross-checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import comb, factorial
from typing import Sequence

from .poly import PolyQ

__all__ = [
    "bernoulli_number",
    "bernoulli_poly",
    "psi_region_poly",
    "vname",
    "PsiProduct",
    "integrate_order_region",
    "integrate_order_region_poly",
    "integrate_psi_cube",
    "I_closed",
    "Itilde_closed",
]

_BERNOULLI_CACHE: dict[int, Fraction] = {0: Fraction(1)}


def bernoulli_number(j: int) -> Fraction:
    """B_j in the convention with B₁ = -1/2."""
    if j < 0:
        raise ValueError("negative index")
    if j not in _BERNOULLI_CACHE:
        hi = max(_BERNOULLI_CACHE)
        for m in range(hi + 1, j + 1):
            # sum_{k=0}^{m} C(m+1, k) B_k = 0
            acc = sum(
                (Fraction(comb(m + 1, k)) * _BERNOULLI_CACHE[k] for k in range(m)),
                Fraction(0),
            )
            _BERNOULLI_CACHE[m] = -acc / (m + 1)
    return _BERNOULLI_CACHE[j]


def bernoulli_poly(m: int, var: str = "v") -> PolyQ:
    """B_m as an exact polynomial in `var`; B_m(0) = B_m."""
    out = PolyQ()
    for k in range(m + 1):
        out = out + PolyQ.var(var, m - k, Fraction(comb(m, k)) * bernoulli_number(k))
    return out


def vname(i: int) -> str:
    return f"v{i}"


def psi_region_poly(i: int, j: int, i_below_j: bool) -> PolyQ:
    """ψ(v_i - v_j) on an open region with the order of v_i, v_j known.

    For v_i < v_j the argument lies in (-1, 0) where ψ(v) = 2v + 1; for
    v_i > v_j it lies in (0, 1) where periodicity gives ψ(v) = 2v - 1.
    """
    lin = PolyQ.var(vname(i), 1, 2) - PolyQ.var(vname(j), 1, 2)
    return lin + (1 if i_below_j else -1)


@dataclass(frozen=True)
class PsiProduct:
    """A product of ψ(v_i - v_j) factors times a polynomial prefactor."""

    factors: tuple[tuple[int, int, int], ...]  # (i, j, power)
    extra: PolyQ = field(default_factory=lambda: PolyQ.one)

    def __post_init__(self) -> None:
        for i, j, _p in self.factors:
            if i == j:
                raise ValueError("psi factor with equal indices")


def integrate_order_region_poly(p: PolyQ, ordering: Sequence[str]) -> PolyQ:
    """Iterated integral of p over {0 ≤ first ≤ … ≤ last ≤ 1}.

    Variables not in `ordering` survive into the result.
    """
    out = p
    for pos, name in enumerate(ordering):
        hi: PolyQ | int = PolyQ.var(ordering[pos + 1]) if pos + 1 < len(ordering) else 1
        out = out.integrate(name, 0, hi)
    return out


def integrate_order_region(p: PolyQ, ordering: Sequence[str]) -> Fraction:
    return integrate_order_region_poly(p, ordering).as_fraction()


def integrate_psi_cube(pp: PsiProduct, k: int) -> Fraction:
    """∫_{[0,1]^k} (∏ ψ(v_i - v_j)^power) · extra, exactly.

    The cube splits into k! open order regions; on each, every ψ factor is
    the linear polynomial determined by the region's ordering.
    """
    for i, j, _p in pp.factors:
        if not (1 <= i <= k and 1 <= j <= k):
            raise ValueError("psi factor index outside 1..k")
    total = Fraction(0)
    for perm in permutations(range(1, k + 1)):
        rank = {idx: pos for pos, idx in enumerate(perm)}
        integrand = pp.extra
        for i, j, power in pp.factors:
            integrand = integrand * psi_region_poly(i, j, rank[i] < rank[j]) ** power
        total += integrate_order_region(integrand, [vname(i) for i in perm])
    return total


def I_closed(j: int) -> Fraction:
    """The cyclic ψ integral over [0,1]^j: -(-2)^j B_j / j!."""
    if j < 1:
        raise ValueError("need j ≥ 1")
    return -Fraction((-2) ** j) * bernoulli_number(j) / factorial(j)


def Itilde_closed(j: int) -> Fraction:
    """The rooted cyclic integral with order-normalized edges: -I_{j+1}.

    A cycle through a fixed root v₀ = 0 and j cube variables, with every
    edge written as ψ(v_lower_index - v_higher_index): relative to the
    cyclically oriented product this flips exactly one factor, so the
    value is minus the (j+1)-cycle integral.
    """
    if j < 1:
        raise ValueError("need j ≥ 1")
    return -I_closed(j + 1)
