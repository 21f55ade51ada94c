"""Quadratic forms, lattices, representation numbers, theta coefficients.

The central computation is the exact enumeration of integer vectors with
bounded form value.  It drives the representation-number spectra (the
computable finite prefix of the Laplace/length spectrum of a flat torus),
the isospectrality comparisons, and every search in the congruence and
reduction modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterator, Optional

from .exactmat import (
    Matrix,
    SingularMatrixError,
    bareiss_det,
    fraction_from_json,
    inverse_det,
    ldlt,
    matrix_from_json,
    matrix_to_json,
)

IntVec = tuple  # integer coordinate vectors are plain tuples of ints


# ---------------------------------------------------------------------------
# core objects
# ---------------------------------------------------------------------------


class QuadraticForm:
    """Symmetric rational matrix Q acting as q(x) = x^T Q x."""

    __slots__ = ("dim", "Q")

    def __init__(self, q: Matrix):
        if not q.is_symmetric():
            raise ValueError("quadratic form matrix must be symmetric")
        object.__setattr__(self, "dim", q.rows)
        object.__setattr__(self, "Q", q)

    def __setattr__(self, *a):
        raise AttributeError("QuadraticForm is immutable")

    def value(self, x) -> Fraction:
        q = self.Q
        n = self.dim
        acc = Fraction(0)
        for i in range(n):
            xi = x[i]
            if xi:
                row = q.row(i)
                acc += xi * sum(row[j] * x[j] for j in range(n))
        return acc

    def det(self) -> Fraction:
        return bareiss_det(self.Q)

    def dual(self) -> "QuadraticForm":
        inv, _ = inverse_det(self.Q)
        return QuadraticForm(inv)

    def __eq__(self, other):
        return isinstance(other, QuadraticForm) and self.Q == other.Q

    def __hash__(self):
        return hash(self.Q)

    def __repr__(self):
        return f"QuadraticForm({self.Q!r})"

    def to_json(self) -> dict:
        return {"dim": self.dim, "Q": matrix_to_json(self.Q)}

    @staticmethod
    def from_json(obj) -> "QuadraticForm":
        m = matrix_from_json(obj["Q"])
        if m.rows != obj.get("dim", m.rows):
            raise ValueError("dim field disagrees with matrix size")
        return QuadraticForm(m)


class LatticeBasis:
    """Invertible rational matrix A; the lattice is A Z^n."""

    __slots__ = ("dim", "A")

    def __init__(self, a: Matrix):
        if a.rows != a.cols:
            raise ValueError("basis matrix must be square")
        if bareiss_det(a) == 0:
            raise ValueError("basis matrix must be invertible")
        object.__setattr__(self, "dim", a.rows)
        object.__setattr__(self, "A", a)

    def __setattr__(self, *a):
        raise AttributeError("LatticeBasis is immutable")

    def volume(self) -> Fraction:
        return abs(bareiss_det(self.A))

    def vector(self, x) -> tuple:
        return self.A.apply(x)

    def __repr__(self):
        return f"LatticeBasis({self.A!r})"

    def to_json(self) -> dict:
        return {"dim": self.dim, "A": matrix_to_json(self.A)}

    @staticmethod
    def from_json(obj) -> "LatticeBasis":
        m = matrix_from_json(obj["A"])
        if m.rows != obj.get("dim", m.rows):
            raise ValueError("dim field disagrees with matrix size")
        return LatticeBasis(m)


@dataclass(frozen=True)
class RepSpectrum:
    """Ascending (value, multiplicity) pairs of form values up to a cutoff."""

    cutoff: Fraction
    entries: tuple

    def multiplicity(self, t) -> int:
        t = Fraction(t)
        for v, m in self.entries:
            if v == t:
                return m
            if v > t:
                break
        return 0

    def values(self):
        return tuple(v for v, _ in self.entries)

    def to_json(self) -> list:
        return [[str(v), m] for v, m in self.entries]

    @staticmethod
    def from_counts(counts: dict, cutoff) -> "RepSpectrum":
        entries = tuple(sorted((Fraction(v), m) for v, m in counts.items()))
        return RepSpectrum(Fraction(cutoff), entries)


# ---------------------------------------------------------------------------
# enumeration domains
# ---------------------------------------------------------------------------

FULL_INTEGER = "FullInteger"
ZSTAR = "ZStar"
ZSTAR_MINUS_E1LINE = "ZStarMinusE1Line"
ZSTAR_MINUS_E1E2PLANE = "ZStarMinusE1E2Plane"
ZSTAR_MINUS_UNION_PLANES = "ZStarMinusUnionPlanes"

_DOMAIN_TAGS = (
    FULL_INTEGER,
    ZSTAR,
    ZSTAR_MINUS_E1LINE,
    ZSTAR_MINUS_E1E2PLANE,
    ZSTAR_MINUS_UNION_PLANES,
)


def is_zstar(x) -> bool:
    """Primitive vectors whose last non-zero coordinate is positive."""
    g = 0
    last = 0
    for c in x:
        g = gcd(g, c)
        if c:
            last = c
    return g == 1 and last > 0


@dataclass(frozen=True)
class EnumerationDomain:
    """A subset of Z^n to enumerate over: a named tag plus removed points.

    The starred domains restrict to primitive vectors with positive last
    non-zero coordinate; the Minus* variants additionally delete the
    coordinate line/planes that the covering-refinement bookkeeping absorbs.
    """

    tag: str = FULL_INTEGER
    removed: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.tag not in _DOMAIN_TAGS:
            raise ValueError(f"unknown domain tag {self.tag!r}")
        for x in self.removed:
            if not self.base_contains(x):
                raise ValueError(f"removed vector {x} outside domain {self.tag}")

    def base_contains(self, x) -> bool:
        if self.tag == FULL_INTEGER:
            return True
        if not is_zstar(x):
            return False
        if self.tag == ZSTAR:
            return True
        if self.tag == ZSTAR_MINUS_E1LINE:
            return any(x[1:])
        if self.tag == ZSTAR_MINUS_E1E2PLANE:
            return any(x[2:])
        # minus the span of e1,e2 and the span of e1,e3 (three-dim bookkeeping)
        return x[1] != 0 and any(x[2:])

    def contains(self, x) -> bool:
        return self.base_contains(x) and tuple(x) not in self.removed


FULL = EnumerationDomain(FULL_INTEGER)
ZSTAR_DOMAIN = EnumerationDomain(ZSTAR)


# ---------------------------------------------------------------------------
# exact bounded enumeration
# ---------------------------------------------------------------------------


def is_positive_definite(q: QuadraticForm) -> bool:
    """Exact Sylvester test: all leading principal minors positive.

    Via LDL^T: positive definite iff the factorization exists with an
    all-positive diagonal (a zero principal minor already rules out
    definiteness).
    """
    try:
        _, d = ldlt(q.Q)
    except SingularMatrixError:
        return False
    return all(d[i, i] > 0 for i in range(q.dim))


def enumerate_up_to(
    q: QuadraticForm,
    tmax,
    domain: EnumerationDomain = FULL,
) -> Iterator[tuple]:
    """Yield every (x, q(x)) with x in the domain and q(x) <= tmax, exactly.

    Completion of squares gives q(x) = sum_i d_i (x_i + c_i)^2 with exact
    rational d_i > 0 and c_i depending on the later coordinates, so each
    level contributes a finite integer interval.  Coordinates are assigned
    from the last one down, scanning each interval in ascending order; the
    output order is therefore lexicographic in the reversed coordinate
    tuple, matching the sign convention of the starred domains.
    """
    tmax = Fraction(tmax)
    if tmax < 0:
        return
    if not is_positive_definite(q):
        raise ValueError("enumeration requires a positive definite form")
    n = q.dim
    L, D = ldlt(q.Q)
    d = [D[i, i] for i in range(n)]
    # lrows[i][j] = L[i][j] for j < i: assigning x_i shifts the centers below
    lrows = [[L[i, j] for j in range(i)] for i in range(n)]
    zero = Fraction(0)
    starred = domain.tag != FULL_INTEGER

    x = [0] * n
    shift = [zero] * n

    def level_range(i, budget):
        ci = shift[i]
        di = d[i]
        m = math.floor(-ci)
        lo = m
        while True:
            s = lo - 1 + ci
            if di * s * s <= budget:
                lo -= 1
            else:
                break
        hi = m
        while True:
            s = hi + 1 + ci
            if di * s * s <= budget:
                hi += 1
            else:
                break
        if di * (m + ci) ** 2 > budget:
            # minimizer itself is out: the interval may be empty
            lo = m + 1
            while lo <= hi and di * (lo + ci) ** 2 > budget:
                lo += 1
            if lo > hi:
                return None
        return lo, hi

    def rec(i, budget, sign_state):
        # sign_state: 0 undecided (all later coords zero), 1 positive fixed
        rng = level_range(i, budget)
        if rng is None:
            return
        lo, hi = rng
        ci, di = shift[i], d[i]
        for v in range(lo, hi + 1):
            if starred and sign_state == 0 and v < 0:
                continue
            st = sign_state if v == 0 else 1
            x[i] = v
            used = di * (v + ci) ** 2
            rest = budget - used
            if i == 0:
                xt = tuple(x)
                if domain.contains(xt):
                    yield xt, tmax - rest
            elif v:
                lrow = lrows[i]
                for j in range(i):
                    if lrow[j]:
                        shift[j] += v * lrow[j]
                yield from rec(i - 1, rest, st)
                for j in range(i):
                    if lrow[j]:
                        shift[j] -= v * lrow[j]
            else:
                yield from rec(i - 1, rest, st)
        x[i] = 0

    yield from rec(n - 1, tmax, 0 if starred else 1)


def representation_numbers(
    q: QuadraticForm, tmax, domain: EnumerationDomain = FULL
) -> RepSpectrum:
    """Exact multiset of form values <= tmax over the domain."""
    counts: dict = {}
    for _, v in enumerate_up_to(q, tmax, domain):
        counts[v] = counts.get(v, 0) + 1
    return RepSpectrum.from_counts(counts, tmax)


@dataclass(frozen=True)
class FirstMismatch:
    value: Fraction
    mult1: int
    mult2: int


EQUAL = "Equal"


def isospectral_up_to(q1: QuadraticForm, q2: QuadraticForm, tmax):
    """Compare representation numbers of two forms for all t <= tmax.

    Returns the string "Equal" or a FirstMismatch(value, m1, m2) describing
    the smallest disagreeing value.
    """
    r1 = dict(representation_numbers(q1, tmax).entries)
    r2 = dict(representation_numbers(q2, tmax).entries)
    for v in sorted(set(r1) | set(r2)):
        m1, m2 = r1.get(v, 0), r2.get(v, 0)
        if m1 != m2:
            return FirstMismatch(v, m1, m2)
    return EQUAL


# ---------------------------------------------------------------------------
# lattice-level operations
# ---------------------------------------------------------------------------


def gram(basis: LatticeBasis) -> QuadraticForm:
    return QuadraticForm(basis.A.transpose() * basis.A)


def dual_basis(basis: LatticeBasis) -> LatticeBasis:
    inv, _ = inverse_det(basis.A)
    return LatticeBasis(inv.transpose())


def direct_product(b1: LatticeBasis, b2: LatticeBasis) -> LatticeBasis:
    return LatticeBasis(Matrix.block_diagonal(b1.A, b2.A))


def theta_coefficients(basis: LatticeBasis, tmax) -> RepSpectrum:
    """Coefficients of the theta series: multiplicities of squared lengths."""
    return representation_numbers(gram(basis), tmax, FULL)


def convolve_spectra(r1: RepSpectrum, r2: RepSpectrum, tmax) -> RepSpectrum:
    """Value-multiset convolution; the theta coefficients of a product lattice."""
    tmax = Fraction(tmax)
    counts: dict = {}
    for v1, m1 in r1.entries:
        for v2, m2 in r2.entries:
            v = v1 + v2
            if v <= tmax:
                counts[v] = counts.get(v, 0) + m1 * m2
    return RepSpectrum.from_counts(counts, tmax)


def poisson_check(basis: LatticeBasis, t: float, radius) -> tuple:
    """Numerically verify the two-sided summation identity at time t.

    lhs sums exp(-4 pi^2 |l|^2 t) over dual vectors with |l| <= radius; rhs is
    vol/(4 pi t)^(n/2) times the primal sum of exp(-|v|^2 / 4t).  The caller
    chooses radius large enough for the truncation tails to be negligible.
    Floats are quarantined here; nothing downstream consumes them.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    r2 = Fraction(radius) ** 2
    dual = theta_coefficients(dual_basis(basis), r2)
    primal = theta_coefficients(basis, r2)
    lhs = sum(m * math.exp(-4 * math.pi**2 * float(v) * t) for v, m in dual.entries)
    rhs = float(basis.volume()) / (4 * math.pi * t) ** (basis.dim / 2) * sum(
        m * math.exp(-float(v) / (4 * t)) for v, m in primal.entries
    )
    rel_err = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
    return lhs, rhs, rel_err
