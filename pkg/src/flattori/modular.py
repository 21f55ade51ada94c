"""Finite isospectrality certificates via the theory of modular forms.

The theta series of an even positive definite form in 2k variables is a
modular form whose level is read off the inverse matrix; forms in a fixed
space are pinned down by their first floor(mu0(N) k / 12) + 1 Fourier
coefficients.  Matching determinant, level, and representation numbers up
to that cutoff therefore proves full isospectrality, not just a bounded
check.  Only the numeric consequence is implemented; the certificate
assumes the associated character is real-valued, as the underlying identity
theorem requires.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .exactmat import Matrix, bareiss_det, inverse_det
from .forms import EQUAL, QuadraticForm, is_positive_definite, isospectral_up_to

ISOSPECTRAL = "Isospectral"
NOT_ISOSPECTRAL = "NotIsospectral"
NOT_APPLICABLE = "NotApplicable"


def is_even(q: QuadraticForm) -> bool:
    """Integer entries with an even diagonal."""
    if not q.Q.is_integer():
        return False
    return all(q.Q[i, i] % 2 == 0 for i in range(q.dim))


def even_rescale(q: QuadraticForm):
    """Minimal positive integer c with cQ integral and even on the diagonal."""
    denoms = [x.denominator for row in q.Q.tolists() for x in row]
    c = lcm(*denoms) if len(denoms) > 1 else denoms[0]
    if any((c * q.Q[i, i]) % 2 for i in range(q.dim)):
        c *= 2
    return c, QuadraticForm(c * q.Q)


def level(q: QuadraticForm) -> int:
    """Smallest N making N Q^{-1} an even form; a spectral invariant."""
    if not is_even(q):
        raise ValueError("level is defined for even forms")
    if not is_positive_definite(q):
        raise ValueError("level needs a positive definite form")
    inv, _ = inverse_det(q.Q)
    denoms = [x.denominator for row in inv.tolists() for x in row]
    n0 = lcm(*denoms) if len(denoms) > 1 else denoms[0]
    if any((n0 * inv[i, i]) % 2 for i in range(q.dim)):
        n0 *= 2
    return n0


def mu0(n: int) -> int:
    """N times the product of (1 + 1/p) over primes p dividing N."""
    if n < 1:
        raise ValueError("level must be positive")
    out = Fraction(n)
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            out *= Fraction(p + 1, p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out *= Fraction(m + 1, m)
    assert out.denominator == 1
    return int(out)


def sturm_cutoff(dim: int, n: int) -> int:
    """Number of initial coefficients determining a form of this weight/level."""
    if dim % 2:
        raise ValueError("cutoff needs an even dimension; pad odd forms first")
    k = dim // 2
    return mu0(n) * k // 12 + 1


def pad_to_even_dim(q: QuadraticForm) -> QuadraticForm:
    """Prepend a (2)-block; preserves isospectrality and equivalence of pairs."""
    return QuadraticForm(Matrix.block_diagonal(Matrix([[Fraction(2)]]), q.Q))


@dataclass(frozen=True)
class Certificate:
    """Outcome of the finite isospectrality test.

    A verdict of Isospectral is a complete proof.  The argument leans on
    the identity theorem for real-valued characters; that hypothesis is
    assumed, not verified, and recorded here.
    """

    det_equal: bool
    level: int | None
    cutoff: int | None
    checked_to: Fraction | None
    verdict: str
    detail: str = ""
    assumes_real_character: bool = True

    def to_json(self) -> dict:
        return {
            "det_equal": self.det_equal,
            "level": self.level,
            "cutoff": self.cutoff,
            "checked_to": None if self.checked_to is None else str(self.checked_to),
            "verdict": self.verdict,
            "detail": self.detail,
            "assumes_real_character": self.assumes_real_character,
        }


def certify_isospectral(p: QuadraticForm, q: QuadraticForm) -> Certificate:
    """Decide isospectrality of two rational positive definite forms.

    Both are scaled by their minimal even-rescaling constant; differing
    constants already separate the spectra's arithmetic and yield
    NotApplicable with the reason recorded.  Odd dimensions are padded by a
    (2)-block on both sides.  Then determinant, level, and representation
    numbers up to the cutoff decide the question completely.
    """
    if p.dim != q.dim:
        raise ValueError("forms must have equal dimension")
    if not (is_positive_definite(p) and is_positive_definite(q)):
        raise ValueError("certificate needs positive definite forms")
    cp, pe = even_rescale(p)
    cq, qe = even_rescale(q)
    if cp != cq:
        return Certificate(
            det_equal=False,
            level=None,
            cutoff=None,
            checked_to=None,
            verdict=NOT_APPLICABLE,
            detail=(
                f"even-rescaling constants differ ({cp} vs {cq}); the scaled "
                "value sets live on different grids, so the forms are not "
                "directly comparable by one modular space"
            ),
        )
    if pe.dim % 2:
        pe, qe = pad_to_even_dim(pe), pad_to_even_dim(qe)
    det_equal = bareiss_det(pe.Q) == bareiss_det(qe.Q)
    if not det_equal:
        return Certificate(
            det_equal=False,
            level=None,
            cutoff=None,
            checked_to=None,
            verdict=NOT_ISOSPECTRAL,
            detail="determinants differ",
        )
    np_, nq = level(pe), level(qe)
    if np_ != nq:
        return Certificate(
            det_equal=True,
            level=None,
            cutoff=None,
            checked_to=None,
            verdict=NOT_ISOSPECTRAL,
            detail=f"levels differ ({np_} vs {nq})",
        )
    cutoff = sturm_cutoff(pe.dim, np_)
    res = isospectral_up_to(pe, qe, cutoff)
    if res == EQUAL:
        return Certificate(
            det_equal=True,
            level=np_,
            cutoff=cutoff,
            checked_to=Fraction(cutoff),
            verdict=ISOSPECTRAL,
        )
    return Certificate(
        det_equal=True,
        level=np_,
        cutoff=cutoff,
        checked_to=Fraction(cutoff),
        verdict=NOT_ISOSPECTRAL,
        detail=(
            f"multiplicities differ at value {res.value} "
            f"({res.mult1} vs {res.mult2}) in the rescaled forms"
        ),
    )
