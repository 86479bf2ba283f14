"""Supermatrices over a Grassmann coefficient ring and the Berezinian.

Entries are :class:`~supertrace.algebra.SPoly` values multiplied with the
plain (undeformed) supercommutative product; diagonal blocks carry even
entries and off-diagonal blocks odd ones, so all determinants below are
taken over commuting entries.  Inverses exist whenever the scalar body is
invertible; the nilpotent correction is summed by a terminating geometric
series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import SPoly, parity, plain_mul
from .poly import PolyQ

__all__ = ["SuperMatrix", "berezinian"]

Row = tuple[SPoly, ...]
Block = tuple[Row, ...]


def _dims(block: Block) -> tuple[int, int]:
    return (len(block), len(block[0]) if block else 0)


@dataclass(frozen=True)
class SuperMatrix:
    """Block supermatrix [[A, B], [C, D]]; A is even×even, D odd×odd."""

    A: Block
    B: Block
    C: Block
    D: Block

    def __post_init__(self) -> None:
        ne, ne2 = _dims(self.A)
        no, no2 = _dims(self.D)
        if ne != ne2 or no != no2:
            raise ValueError("diagonal blocks must be square")
        if self.B and _dims(self.B) != (ne, no):
            raise ValueError("B block has wrong shape")
        if self.C and _dims(self.C) != (no, ne):
            raise ValueError("C block has wrong shape")
        for block, want in ((self.A, 0), (self.D, 0), (self.B, 1), (self.C, 1)):
            for row in block:
                for x in row:
                    p = parity(x)
                    if p is not None and x and p != want:
                        raise ValueError("block entry with wrong parity")

    @property
    def even_dim(self) -> int:
        return len(self.A)

    @property
    def odd_dim(self) -> int:
        return len(self.D)

    # ------------------------------------------------------------------
    @staticmethod
    def identity(ne: int, no: int, one: SPoly, zero: SPoly) -> "SuperMatrix":
        def eye(k: int) -> Block:
            return tuple(
                tuple(one if i == j else zero for j in range(k)) for i in range(k)
            )

        def zeros(r: int, c: int) -> Block:
            return tuple(tuple(zero for _ in range(c)) for _ in range(r))

        return SuperMatrix(eye(ne), zeros(ne, no), zeros(no, ne), eye(no))

    def full(self) -> tuple[tuple[SPoly, ...], ...]:
        ne, no = self.even_dim, self.odd_dim
        rows = []
        for i in range(ne):
            rows.append(tuple(self.A[i]) + tuple(self.B[i] if self.B else ()))
        for i in range(no):
            rows.append(tuple(self.C[i] if self.C else ()) + tuple(self.D[i]))
        return tuple(rows)

    @staticmethod
    def from_full(rows, ne: int, no: int) -> "SuperMatrix":
        A = tuple(tuple(rows[i][j] for j in range(ne)) for i in range(ne))
        B = tuple(tuple(rows[i][ne + j] for j in range(no)) for i in range(ne))
        C = tuple(tuple(rows[ne + i][j] for j in range(ne)) for i in range(no))
        D = tuple(tuple(rows[ne + i][ne + j] for j in range(no)) for i in range(no))
        return SuperMatrix(A, B, C, D)

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        x, y = self.full(), other.full()
        k = len(x)
        rows = []
        for i in range(k):
            row = []
            for j in range(k):
                acc = SPoly()
                for t in range(k):
                    acc = acc + plain_mul(x[i][t], y[t][j])
                row.append(acc)
            rows.append(tuple(row))
        return SuperMatrix.from_full(tuple(rows), self.even_dim, self.odd_dim)

    def supertranspose(self) -> "SuperMatrix":
        """[[Aᵀ, Cᵀ], [−Bᵀ, Dᵀ]]."""
        ne, no = self.even_dim, self.odd_dim
        At = tuple(tuple(self.A[j][i] for j in range(ne)) for i in range(ne))
        Ct = tuple(tuple(self.C[j][i] for j in range(no)) for i in range(ne))
        Bt = tuple(tuple(-self.B[j][i] for j in range(ne)) for i in range(no))
        Dt = tuple(tuple(self.D[j][i] for j in range(no)) for i in range(no))
        return SuperMatrix(At, Ct, Bt, Dt)


# ---------------------------------------------------------------------------
# determinants and inverses over the even (commuting) part
# ---------------------------------------------------------------------------


def _det(rows: Block) -> SPoly:
    k = len(rows)
    if k == 0:
        raise ValueError("empty determinant has no ambient algebra; handle upstream")
    if k == 1:
        return rows[0][0]
    acc = SPoly()
    for j in range(k):
        entry = rows[0][j]
        if not entry:
            continue
        minor = tuple(r[:j] + r[j + 1 :] for r in rows[1:])
        term = plain_mul(entry, _det(minor))
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


def _scalar_inverse(u: SPoly) -> SPoly:
    """Inverse of an even element with invertible rational body.

    Splits u = c + ν with c the coefficient of the empty monomial; requires
    ν to consist of odd-mask (hence nilpotent) monomials.
    """
    body_key = None
    for (e, m, h), _c in u.terms.items():
        if not any(e) and m == 0 and h == 0:
            body_key = (e, m, h)
    if body_key is None:
        raise ValueError("scalar body is zero; element not invertible")
    c = u.terms[body_key]
    try:
        cf = c.as_fraction()
    except ValueError as exc:
        raise ValueError("scalar body must be a rational constant") from exc
    if not cf:
        raise ValueError("scalar body is zero; element not invertible")
    nu = SPoly({k: v for k, v in u.terms.items() if k != body_key})
    for (e, m, _h), _v in nu.terms.items():
        if m == 0:
            raise ValueError("non-nilpotent remainder; inverse would not terminate")
    inv_c = Fraction(1) / cf
    # u⁻¹ = (1/c) Σ_k (−ν/c)^k, terminating by nilpotency
    out = SPoly.monomial((0,) * len(body_key[0]), 0, 0, inv_c)
    power = out
    while True:
        power = plain_mul(power, nu).scale(-inv_c)
        if not power:
            break
        out = out + power
    return out


def _mat_inverse(rows: Block) -> Block:
    k = len(rows)
    det = _det(rows)
    det_inv = _scalar_inverse(det)
    if k == 1:
        return ((det_inv,),)
    adj = []
    for i in range(k):
        row = []
        for j in range(k):
            minor = tuple(
                r[:i] + r[i + 1 :]
                for ridx, r in enumerate(rows)
                if ridx != j
            )
            cof = _det(minor)
            if (i + j) % 2:
                cof = -cof
            row.append(plain_mul(cof, det_inv))
        adj.append(tuple(row))
    return tuple(adj)


def berezinian(m: SuperMatrix) -> SPoly:
    """Ber(M) = det(A − B D⁻¹ C) · det(D)⁻¹."""
    if m.odd_dim == 0:
        return _det(m.A)
    d_inv = _mat_inverse(m.D)
    ne, no = m.even_dim, m.odd_dim
    if ne == 0:
        return _scalar_inverse(_det(m.D))
    schur = []
    for i in range(ne):
        row = []
        for j in range(ne):
            acc = m.A[i][j]
            for s in range(no):
                for t in range(no):
                    acc = acc - plain_mul(plain_mul(m.B[i][s], d_inv[s][t]), m.C[t][j])
            row.append(acc)
        schur.append(tuple(row))
    return plain_mul(_det(tuple(schur)), _scalar_inverse(_det(m.D)))
