"""Minkowski reduction (n <= 4), the unique sign-normalized reduction of
ternary forms, and the constraint catalog describing its domain.

Ternary forms embed in R^6 with the coordinate order
(q11, q22, q33, q12, q13, q23).  The closed domain of sign-normalized
reduced forms is a pointed polyhedral cone with eleven edges; those edge
forms induce the preorder that the covering-refinement algorithm minimizes
over.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import cones
from .exactmat import Matrix, int_rank
from .forms import FULL, QuadraticForm, LatticeBasis, enumerate_up_to, gram, is_positive_definite, is_zstar

# ---------------------------------------------------------------------------
# form/vector embedding
# ---------------------------------------------------------------------------


def offdiag_pairs(n: int) -> list:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def form_to_vec(q: QuadraticForm) -> tuple:
    """(q11..qnn, q12, q13, ..., q_{n-1,n}) embedding of a symmetric matrix."""
    n = q.dim
    diag = [q.Q[i, i] for i in range(n)]
    off = [q.Q[i, j] for i, j in offdiag_pairs(n)]
    return tuple(diag + off)


def vec_to_form(v) -> QuadraticForm:
    m = len(v)
    n = round((-1 + (1 + 8 * m) ** 0.5) / 2)
    if n * (n + 1) // 2 != m:
        raise ValueError("vector length is not a triangular number")
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = Fraction(v[i])
    for t, (i, j) in enumerate(offdiag_pairs(n)):
        rows[i][j] = rows[j][i] = Fraction(v[n + t])
    return QuadraticForm(Matrix(rows))


def value_functional(x, n: int | None = None) -> tuple:
    """Integer vector F with F . vec(q) = q(x) for every symmetric q."""
    n = len(x) if n is None else n
    diag = [x[i] * x[i] for i in range(n)]
    off = [2 * x[i] * x[j] for i, j in offdiag_pairs(n)]
    return tuple(diag + off)


def vec_value(v, x) -> Fraction:
    """Evaluate an embedded form at an integer vector."""
    return sum(f * c for f, c in zip(value_functional(x), v) if f)


# ---------------------------------------------------------------------------
# Minkowski reduction for n <= 4
# ---------------------------------------------------------------------------


def minkowski_conditions(n: int) -> list:
    """The finite inequality system cutting out the reduced forms, n <= 4.

    Returns (normal, strict) pairs over the embedding coordinates.  Beyond
    the diagonal ordering, each condition says q(x) >= q_kk for a sign
    vector x with entries in {-1, 0, 1}, x_k = 1 and zeros after position k.
    """
    if not 1 <= n <= 4:
        raise ValueError("Minkowski condition list only applies for n <= 4")
    m = n + len(offdiag_pairs(n))
    conds = []
    e11 = tuple(1 if t == 0 else 0 for t in range(m))
    conds.append((e11, True))
    for k in range(n - 1):
        v = [0] * m
        v[k], v[k + 1] = -1, 1
        conds.append((tuple(v), False))
    for k in range(1, n):
        unit = [0] * m
        unit[k] = 1
        for signs in itertools.product((-1, 0, 1), repeat=k):
            if not any(signs):
                continue
            x = list(signs) + [1] + [0] * (n - k - 1)
            normal = tuple(a - b for a, b in zip(value_functional(x, n), unit))
            conds.append((normal, False))
    return conds


def is_minkowski_reduced(q: QuadraticForm) -> bool:
    if q.dim > 4:
        raise ValueError("Minkowski condition list only applies for n <= 4")
    v = form_to_vec(q)
    for normal, strict in minkowski_conditions(q.dim):
        s = sum(a * b for a, b in zip(normal, v))
        if s < 0 or (strict and s == 0):
            return False
    return True


def successive_minima(q: QuadraticForm) -> list:
    """lambda_1..lambda_n: radii at which the rank of enumerated vectors grows."""
    if not is_positive_definite(q):
        raise ValueError("successive minima need a positive definite form")
    n = q.dim
    bound = max(q.Q[i, i] for i in range(n))
    pts = sorted(
        ((v, x) for x, v in enumerate_up_to(q, bound, FULL) if any(x)),
        key=lambda p: (p[0], p[1]),
    )
    minima = []
    chosen: list = []
    for v, x in pts:
        if len(chosen) == n:
            break
        if int_rank(chosen + [list(x)]) > len(chosen):
            chosen.append(list(x))
            minima.append(v)
    if len(minima) != n:
        raise AssertionError("enumeration bound missed a successive minimum")
    return minima


def _canonical_sign(x) -> tuple:
    for c in reversed(x):
        if c:
            return tuple(x) if c > 0 else tuple(-t for t in x)
    return tuple(x)


def greedy_reduce_basis(basis: LatticeBasis) -> LatticeBasis:
    """Basis of the same lattice built from successively shortest vectors.

    Valid for n <= 3: a shortest vector, then a shortest vector linearly
    independent of it, and so on, always completes to a basis in these
    dimensions (for n >= 4 greedy chains can fail to be bases, so this
    raises).  Ties are broken by sign normalization and lexicographic order
    of the coordinate vectors in the input basis.
    """
    n = basis.dim
    if n > 3:
        raise ValueError("greedy reduction is only a basis for n <= 3")
    q = gram(basis)
    bound = max(q.Q[i, i] for i in range(n))
    pts = sorted(
        {(_canonical_sign(x)) for x, v in enumerate_up_to(q, bound, FULL) if any(x)}
    )
    pts.sort(key=lambda x: (q.value(x), x))
    chosen: list = []
    for x in pts:
        if len(chosen) == n:
            break
        if int_rank(chosen + [list(x)]) > len(chosen):
            chosen.append(list(x))
    cols = Matrix([[Fraction(chosen[j][i]) for j in range(n)] for i in range(n)])
    from .exactmat import bareiss_det

    if abs(bareiss_det(cols)) != 1:
        raise AssertionError("greedy chain is not a basis")
    out = LatticeBasis(basis.A * cols)
    assert is_minkowski_reduced(gram(out))
    return out


# ---------------------------------------------------------------------------
# the ternary sign-normalized reduction
# ---------------------------------------------------------------------------


def is_schiemann_reduced(v) -> bool:
    """Facet-normalized reduced ternary forms, embedded as 6 rationals.

    Minkowski reduction plus the sign conditions q12, q13 >= 0 and
    2 q23 > -q22, plus eight implications that select one representative on
    each boundary facet.
    """
    q11, q22, q33, q12, q13, q23 = (Fraction(t) for t in v)
    if q11 <= 0:
        return False
    mink = [
        q22 - q11,
        q33 - q22,
        q11 - 2 * q12,
        q11 + 2 * q12,
        q11 + q22 + 2 * q12 - 2 * q13 - 2 * q23,
        q11 + q22 - 2 * q12 - 2 * q13 + 2 * q23,
        q11 + q22 - 2 * q12 + 2 * q13 - 2 * q23,
        q11 + q22 + 2 * q12 + 2 * q13 + 2 * q23,
        q11 - 2 * q13,
        q11 + 2 * q13,
        q22 - 2 * q23,
        q22 + 2 * q23,
    ]
    if any(t < 0 for t in mink):
        return False
    if q12 < 0 or q13 < 0:
        return False
    if 2 * q23 <= -q22:
        return False
    implications = [
        (q12 == 0, q23 >= 0),
        (q13 == 0, q23 >= 0),
        (q11 == q22, abs(q23) <= q13),
        (q22 == q33, q13 <= q12),
        (q11 + q22 - 2 * q12 - 2 * q13 + 2 * q23 == 0, q11 - 2 * q13 - q12 <= 0),
        (2 * q12 == q11, q13 <= 2 * q23),
        (2 * q13 == q11, q12 <= 2 * q23),
        (2 * q23 == q22, q12 <= 2 * q13),
    ]
    return all(conseq for cond, conseq in implications if cond)


class UniquenessViolation(AssertionError):
    pass


def minkowski_representatives(q: QuadraticForm) -> set:
    """All Minkowski-reduced forms integrally equivalent to q (dim 3).

    The diagonal of a reduced representative equals the successive minima,
    so its columns come from the finite vector sets attaining them; every
    unimodular combination is tried and filtered by the condition list.
    """
    if q.dim != 3:
        raise ValueError("reduction search implemented for dim 3")
    lam = successive_minima(q)
    by_value = {v: [] for v in lam}
    for x, v in enumerate_up_to(q, lam[-1], FULL):
        if v in by_value and any(x):
            by_value[v].append(tuple(x))
    reps = set()
    for b1 in by_value[lam[0]]:
        for b2 in by_value[lam[1]]:
            for b3 in by_value[lam[2]]:
                det = (
                    b1[0] * (b2[1] * b3[2] - b2[2] * b3[1])
                    - b2[0] * (b1[1] * b3[2] - b1[2] * b3[1])
                    + b3[0] * (b1[1] * b2[2] - b1[2] * b2[1])
                )
                if det in (1, -1):
                    b = Matrix([[b1[i], b2[i], b3[i]] for i in range(3)])
                    p = QuadraticForm(b.transpose() * q.Q * b)
                    if is_minkowski_reduced(p):
                        reps.add(form_to_vec(p))
    return reps


def schiemann_reduce(q: QuadraticForm) -> tuple:
    """The unique sign-normalized reduced representative of a ternary form."""
    if not is_positive_definite(q):
        raise ValueError("reduction needs a positive definite form")
    found = [v for v in minkowski_representatives(q) if is_schiemann_reduced(v)]
    if len(found) != 1:
        raise UniquenessViolation(
            f"uniqueness violation: {len(found)} reduced representatives for {q!r}"
        )
    return found[0]


# ---------------------------------------------------------------------------
# constraint catalog for the covering-refinement algorithm
# ---------------------------------------------------------------------------

# closed description of the closure of the reduced domain, 10 inequalities
SR_SYSTEM = (
    (1, 0, 0, 0, 0, 0),
    (-1, 1, 0, 0, 0, 0),
    (0, -1, 1, 0, 0, 0),
    (0, 0, 0, 1, 0, 0),
    (1, 0, 0, -2, 0, 0),
    (0, 0, 0, 0, 1, 0),
    (1, 0, 0, 0, -2, 0),
    (0, 1, 0, 0, 0, 2),
    (0, 1, 0, 0, 0, -2),
    (1, 1, 0, -2, -2, 2),
)

# the eleven edges of that cone, one rank-1 ray, two rank-2, eight rank-3
M_EDGES = (
    (0, 0, 1, 0, 0, 0),
    (0, 2, 2, 0, 0, 1),
    (0, 2, 2, 0, 0, -1),
    (2, 2, 2, 0, 0, 1),
    (2, 2, 2, 0, 0, -1),
    (2, 2, 2, 0, 1, 1),
    (2, 2, 2, 0, 1, -1),
    (2, 2, 2, 1, 0, 1),
    (2, 2, 2, 1, 0, -1),
    (2, 2, 2, 1, 1, 0),
    (2, 2, 2, 1, 1, 1),
)


@dataclass(frozen=True)
class ConstraintCatalog:
    """Closed (A), strict (B) and implication (C) constraints plus the edges.

    A and B describe the pointed cone of sign-normalized candidates; each
    (c, d) in Cpairs encodes "c.f = 0 implies d.f >= 0", the facet conditions
    that trim multiple boundary representatives.
    """

    Aset: tuple
    Bset: tuple
    Cpairs: tuple
    Medges: tuple


def catalog() -> ConstraintCatalog:
    a = (
        (-1, 1, 0, 0, 0, 0),
        (0, -1, 1, 0, 0, 0),
        (1, 0, 0, -2, 0, 0),
        (1, 0, 0, 2, 0, 0),
        (1, 1, 0, 2, -2, -2),
        (1, 1, 0, -2, -2, 2),
        (1, 1, 0, -2, 2, -2),
        (1, 1, 0, 2, 2, 2),
        (1, 0, 0, 0, -2, 0),
        (1, 0, 0, 0, 2, 0),
        (0, 1, 0, 0, 0, -2),
        (0, 0, 0, 1, 0, 0),
        (0, 0, 0, 0, 1, 0),
    )
    b = (
        (1, 0, 0, 0, 0, 0),
        (0, 1, 0, 0, 0, 2),
    )
    c = (
        ((0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 0, 1)),
        ((0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)),
        ((-1, 1, 0, 0, 0, 0), (0, 0, 0, 0, 1, -1)),
        ((-1, 1, 0, 0, 0, 0), (0, 0, 0, 0, 1, 1)),
        ((0, -1, 1, 0, 0, 0), (0, 0, 0, 1, -1, 0)),
        ((1, 1, 0, -2, -2, 2), (-1, 0, 0, 1, 2, 0)),
        ((1, 0, 0, -2, 0, 0), (0, 0, 0, 0, -1, 2)),
        ((1, 0, 0, 0, -2, 0), (0, 0, 0, -1, 0, 2)),
        ((0, 1, 0, 0, 0, -2), (0, 0, 0, -1, 2, 0)),
    )
    return ConstraintCatalog(a, b, c, M_EDGES)


def closed_domain_cone() -> cones.Cone:
    """The closure of the reduced domain as a cone object, edges verified."""
    cone = cones.from_system(SR_SYSTEM)
    if set(cone.edges) != set(M_EDGES):
        raise AssertionError("closure edges disagree with the stored edge list")
    return cone
