"""Integral equivalence of forms, lattice congruence, geometric certificates.

Two lattices are congruent exactly when their Gram forms are integrally
equivalent; the witness search enumerates candidate columns by their exact
form values, so an exhausted search is a proof of non-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactmat import Matrix, bareiss_det
from .forms import (
    FULL,
    LatticeBasis,
    QuadraticForm,
    enumerate_up_to,
    gram,
    is_positive_definite,
)


def lambda_min_lower_bound(q: QuadraticForm) -> Fraction:
    """Positive rational lower bound on the smallest eigenvalue.

    det(Q) divided by the (n-1)-th power of the max absolute row sum; the
    row sum dominates every eigenvalue, so the quotient sits below the
    smallest one.  Exact, at the price of being loose.
    """
    n = q.dim
    u = max(sum(abs(x) for x in q.Q.row(i)) for i in range(n))
    det = bareiss_det(q.Q)
    if det <= 0 or u <= 0:
        raise ValueError("lower bound needs a positive definite form")
    return det / u ** (n - 1)


@dataclass(frozen=True)
class EquivalenceWitness:
    """Unimodular B with B^T Q1 B = Q2, stored as integer rows."""

    B: tuple

    def matrix(self) -> Matrix:
        return Matrix([[Fraction(x) for x in row] for row in self.B])


def _value_candidates(q: QuadraticForm, value: Fraction, norm2_cap: Fraction) -> list:
    out = []
    for x, v in enumerate_up_to(q, value, FULL):
        if v == value and any(x) and sum(c * c for c in x) <= norm2_cap:
            out.append(x)
    return out


def integral_equivalence(q1: QuadraticForm, q2: QuadraticForm):
    """Search for unimodular B with B^T Q1 B = Q2; None proves none exists.

    Column j of a witness must attain the exact value (Q2)_jj under Q1 and
    satisfy the partial inner products against the columns already placed.
    Candidates come from bounded enumeration, so the depth-first search is
    finite and complete.  Columns are processed by increasing target value
    to shrink the branching; the global sign of the first column is fixed,
    which loses no witnesses.
    """
    if q1.dim != q2.dim:
        return None
    if not (is_positive_definite(q1) and is_positive_definite(q2)):
        raise ValueError("integral equivalence needs positive definite forms")
    if bareiss_det(q1.Q) != bareiss_det(q2.Q):
        return None
    n = q1.dim
    lam_lb = lambda_min_lower_bound(q1)
    order = sorted(range(n), key=lambda j: q2.Q[j, j])
    cand_cache: dict = {}
    for j in order:
        v = q2.Q[j, j]
        if v not in cand_cache:
            cand_cache[v] = _value_candidates(q1, v, v / lam_lb)
        if not cand_cache[v]:
            return None

    g1 = q1.Q
    cols: list = [None] * n

    def q1_inner(x, y) -> Fraction:
        return sum(x[i] * sum(g1.row(i)[t] * y[t] for t in range(n)) for i in range(n))

    def place(pos: int):
        if pos == n:
            b = Matrix([[Fraction(cols[j][i]) for j in range(n)] for i in range(n)])
            if abs(bareiss_det(b)) == 1:
                return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
            return None
        j = order[pos]
        for x in cand_cache[q2.Q[j, j]]:
            if pos == 0:
                last = next((c for c in reversed(x) if c), 0)
                if last < 0:
                    continue
            ok = True
            for prev_pos in range(pos):
                i = order[prev_pos]
                if q1_inner(cols[i], x) != q2.Q[i, j]:
                    ok = False
                    break
            if ok:
                cols[j] = x
                found = place(pos + 1)
                if found is not None:
                    return found
                cols[j] = None
        return None

    rows = place(0)
    return EquivalenceWitness(rows) if rows is not None else None


def lattice_congruent(a1: LatticeBasis, a2: LatticeBasis):
    """(congruent?, witness): congruence reduces to Gram-class identity."""
    w = integral_equivalence(gram(a1), gram(a2))
    return w is not None, w


def shortest_vector_profile(basis: LatticeBasis, s) -> tuple:
    """Vectors of squared length s and the multiset of their pairwise dots.

    Orthogonal maps preserve both, so differing profiles certify
    non-congruence.  Squared lengths keep everything rational.
    """
    s = Fraction(s)
    if s <= 0:
        raise ValueError("squared length must be positive")
    g = gram(basis)
    shell = [x for x, v in enumerate_up_to(g, s, FULL) if v == s]
    images = [g.Q.apply(x) for x in shell]
    dots = sorted(
        sum(a * b for a, b in zip(gx, y)) for gx in images for y in shell
    )
    return len(shell), tuple(dots)
