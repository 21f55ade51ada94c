"""Exact rational linear algebra: matrices over Fraction, HNF, LDL^T, Bareiss.

Everything in the decision paths of this package runs on exact arithmetic:
Python integers for lattice coordinates and cone data, ``fractions.Fraction``
for matrix entries.  Floating point shows up only in the numerical Poisson
check in :mod:`flattori.forms`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class SingularMatrixError(ValueError):
    pass


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class Matrix:
    """Immutable dense matrix with exact rational entries.

    Entries are stored row-major as Fractions.  Small and direct on purpose:
    the package never handles matrices larger than ~20x20.
    """

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries):
        rows = [list(map(_as_fraction, row)) for row in entries]
        if not rows or not rows[0]:
            raise ValueError("matrix must be non-empty")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "_e", tuple(tuple(r) for r in rows))

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    # -- basic access ------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def row(self, i):
        return self._e[i]

    def column(self, j):
        return tuple(r[j] for r in self._e)

    def tolists(self):
        return [list(r) for r in self._e]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self._e == other._e

    def __hash__(self):
        return hash(self._e)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self._e)
        return f"Matrix([{body}])"

    # -- constructors ------------------------------------------------------

    @staticmethod
    def identity(n: int) -> "Matrix":
        one, zero = Fraction(1), Fraction(0)
        return Matrix([[one if i == j else zero for j in range(n)] for i in range(n)])

    @staticmethod
    def diagonal(diag) -> "Matrix":
        diag = list(diag)
        n = len(diag)
        zero = Fraction(0)
        return Matrix(
            [[_as_fraction(diag[i]) if i == j else zero for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def block_diagonal(a: "Matrix", b: "Matrix") -> "Matrix":
        zero = Fraction(0)
        out = []
        for i in range(a.rows):
            out.append(list(a.row(i)) + [zero] * b.cols)
        for i in range(b.rows):
            out.append([zero] * a.cols + list(b.row(i)))
        return Matrix(out)

    # -- arithmetic --------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch")
            cols = [other.column(j) for j in range(other.cols)]
            return Matrix(
                [
                    [sum(a * b for a, b in zip(r, c)) for c in cols]
                    for r in self._e
                ]
            )
        return Matrix([[x * other for x in r] for r in self._e])

    __rmul__ = __mul__

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return Matrix(
            [[x + y for x, y in zip(r, s)] for r, s in zip(self._e, other._e)]
        )

    def __sub__(self, other):
        return self + (-1) * other

    def transpose(self) -> "Matrix":
        return Matrix([self.column(j) for j in range(self.cols)])

    def apply(self, vec):
        """Matrix-vector product; vec is any sequence of numbers."""
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum(a * _as_fraction(b) for a, b in zip(r, vec)) for r in self._e)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self._e[i][j] == self._e[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def is_integer(self) -> bool:
        return all(x.denominator == 1 for r in self._e for x in r)


# ---------------------------------------------------------------------------
# fraction-free elimination (Bareiss)
# ---------------------------------------------------------------------------


def _integer_rows(m: Matrix):
    """Clear denominators row by row; returns (int rows, row scale product)."""
    from math import lcm

    rows, scale = [], Fraction(1)
    for r in m._e:
        d = lcm(*(x.denominator for x in r)) if len(r) > 1 else r[0].denominator
        rows.append([int(x * d) for x in r])
        scale *= d
    return rows, scale


def bareiss_det(m: Matrix) -> Fraction:
    """Determinant by fraction-free Gaussian elimination.

    Intermediate values stay integral with bounded growth, which matters for
    the 12-dimensional pair-space rank checks.
    """
    if m.rows != m.cols:
        raise ValueError("determinant of non-square matrix")
    a, scale = _integer_rows(m)
    n = m.rows
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], 1) / scale


def rank(m: Matrix) -> int:
    """Exact rank via fraction-free elimination with full pivoting order."""
    a, _ = _integer_rows(m)
    nr, nc = m.rows, m.cols
    r = 0
    prev = 1
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nr):
            for j in range(c + 1, nc):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == nr:
            break
    return r


def int_rank(rows) -> int:
    """Rank of a list of integer vectors (Bareiss, no Matrix/Fraction churn).

    Hot path for the cone engine's adjacency and dimension tests.
    """
    a = [list(r) for r in rows]
    if not a:
        return 0
    nr, nc = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(nc):
        piv = None
        for i in range(r, nr):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        arc = a[r][c]
        for i in range(r + 1, nr):
            aic = a[i][c]
            if aic:
                ai, ar = a[i], a[r]
                for j in range(c + 1, nc):
                    ai[j] = (ai[j] * arc - aic * ar[j]) // prev
                ai[c] = 0
            else:
                ai = a[i]
                for j in range(c + 1, nc):
                    ai[j] = (ai[j] * arc) // prev
        prev = arc
        r += 1
        if r == nr:
            break
    return r


def inverse_det(m: Matrix):
    """Return (m^-1, det(m)); raises SingularMatrixError when det = 0."""
    if m.rows != m.cols:
        raise ValueError("inverse of non-square matrix")
    det = bareiss_det(m)
    if det == 0:
        raise SingularMatrixError("singular")
    n = m.rows
    a = [list(m.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return Matrix([r[n:] for r in a]), det


def ldlt(q: Matrix):
    """Exact LDL^T factorization of a symmetric matrix.

    Returns (L, D) with L unit lower-triangular and D diagonal such that
    L D L^T = q.  All leading principal minors must be nonzero; a zero pivot
    raises SingularMatrixError("singular principal minor").  D's diagonal is
    all positive exactly when q is positive definite, which turns the
    eigenvalue criterion into an exact test.
    """
    if not q.is_symmetric():
        raise ValueError("ldlt requires a symmetric matrix")
    n = q.rows
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    for j in range(n):
        s = q[j, j] - sum(L[j][k] * L[j][k] * d[k] for k in range(j))
        if s == 0:
            raise SingularMatrixError("singular principal minor")
        d[j] = s
        for i in range(j + 1, n):
            t = q[i, j] - sum(L[i][k] * L[j][k] * d[k] for k in range(j))
            L[i][j] = t / d[j]
    return Matrix(L), Matrix.diagonal(d)


# ---------------------------------------------------------------------------
# Hermite normal form (column style)
# ---------------------------------------------------------------------------


def hnf(m) -> list:
    """Column-style Hermite normal form of an integer matrix.

    Input is an n x k integer matrix (list of rows or Matrix) of full row
    rank n with k >= n.  Returns the n x n lower-triangular H with positive
    diagonal and reduced off-diagonal entries (0 <= h_ij < h_ii for j < i)
    such that H and the input are column-equivalent: H Z^n = M Z^k.
    """
    if isinstance(m, Matrix):
        if not m.is_integer():
            raise ValueError("hnf requires integer entries")
        rows = [[int(x) for x in m.row(i)] for i in range(m.rows)]
    else:
        rows = [list(map(int, r)) for r in m]
    n = len(rows)
    k = len(rows[0])
    if k < n:
        raise ValueError("not full rank")
    # columns as working vectors
    cols = [[rows[i][j] for i in range(n)] for j in range(k)]
    h = []
    used = 0
    for i in range(n):
        # clear row i across the remaining columns by gcd column ops
        live = [c for c in cols[used:] if any(c)]
        work = live
        while True:
            nz = [c for c in work if c[i] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda c: abs(c[i]))
            base = nz[0]
            for c in nz[1:]:
                f = c[i] // base[i]
                for t in range(n):
                    c[t] -= f * base[t]
            work = [c for c in work if any(c)]
        nz = [c for c in work if c[i] != 0]
        if not nz:
            raise ValueError("not full rank")
        piv = nz[0]
        if piv[i] < 0:
            for t in range(n):
                piv[t] = -piv[t]
        rest = [c for c in work if c is not piv]
        cols = cols[:used] + [piv] + rest + [[0] * n] * (k - used - 1 - len(rest))
        used += 1
        h.append(piv)
    # reduce entries left of each diagonal
    for i in range(n):
        for j in range(i):
            f = h[j][i] // h[i][i]
            if f:
                for t in range(n):
                    h[j][t] -= f * h[i][t]
    return [[h[j][i] for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# integer vector helpers (shared by cones / minsets / forms)
# ---------------------------------------------------------------------------


def dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def primitive(vec):
    """Scale an integer vector by 1/gcd, keeping orientation; zero stays zero."""
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)


def clear_denominators(vec):
    """Rational vector -> primitive integer vector on the same ray."""
    from math import lcm

    fr = [_as_fraction(x) for x in vec]
    d = 1
    for x in fr:
        d = lcm(d, x.denominator)
    return primitive([int(x * d) for x in fr])


# ---------------------------------------------------------------------------
# JSON helpers: rationals as "p/q" strings, matrices row-major
# ---------------------------------------------------------------------------


def fraction_to_json(x: Fraction) -> str:
    return str(x)


def fraction_from_json(s) -> Fraction:
    if isinstance(s, str):
        return Fraction(s)
    if isinstance(s, int):
        return Fraction(s)
    raise ValueError(f"expected rational string, got {s!r}")


def matrix_to_json(m: Matrix) -> list:
    return [[fraction_to_json(x) for x in row] for row in m._e]


def matrix_from_json(rows) -> Matrix:
    return Matrix([[fraction_from_json(x) for x in row] for row in rows])
