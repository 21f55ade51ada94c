"""Named lattices, forms, and codes used in the classical examples.

The checkerboard and E-series root lattices, the 16-dimensional pair of
Milnor, Kneser's 12-dimensional pair, the 4-dimensional pair found by
Schiemann, the Conway-Sloane parametric family, the 6-dimensional
cubic/non-cubic pair with its binary codes, and the greedy-basis
counterexample family of van der Waerden.  All data exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .codes import LinearCode
from .exactmat import Matrix
from .forms import LatticeBasis, QuadraticForm, direct_product


def _cols_to_basis(cols) -> LatticeBasis:
    n = len(cols[0])
    return LatticeBasis(Matrix([[Fraction(c[i]) for c in cols] for i in range(n)]))


def _unit(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


def dn(n: int) -> LatticeBasis:
    """Checkerboard lattice: integer vectors with even coordinate sum."""
    if n < 2:
        raise ValueError("checkerboard lattice needs n >= 2")
    cols = [tuple(1 if i < 2 else 0 for i in range(n))]
    for j in range(2, n + 1):
        cols.append(tuple(1 if i == j - 2 else -1 if i == j - 1 else 0 for i in range(n)))
    return _cols_to_basis(cols)


def en(n: int) -> LatticeBasis:
    """E-series root lattice for n divisible by 4: checkerboard plus half-ones."""
    if n % 4 or n < 4:
        raise ValueError("E-series lattice needs n divisible by 4")
    cols = [tuple(1 if i < 2 else 0 for i in range(n))]
    for j in range(2, n):
        cols.append(tuple(1 if i == j - 2 else -1 if i == j - 1 else 0 for i in range(n)))
    cols.append(tuple(Fraction(1, 2) for _ in range(n)))
    return _cols_to_basis(cols)


def vdw_basis(n: int) -> LatticeBasis:
    """Bases whose greedy shortest-vector chains fail to generate (n >= 4)."""
    if n < 4:
        raise ValueError("the counterexample family starts at n = 4")
    cols = [_unit(n, i) for i in range(n - 1)]
    cols.append(tuple(Fraction(1, 2) for _ in range(n)))
    return _cols_to_basis(cols)


def milnor_pair() -> tuple:
    """The 16-dimensional isospectral non-congruent pair."""
    e8 = en(8)
    return direct_product(e8, e8), en(16)


def kneser_pair() -> tuple:
    """The 12-dimensional isospectral non-congruent pair."""
    return dn(12), direct_product(en(8), dn(4))


def schiemann4d_pair() -> tuple:
    """The first 4-dimensional pair: not equivalent, same representation numbers."""
    q1 = QuadraticForm(
        Matrix(
            [
                [4, 2, 0, 1],
                [2, 8, 3, 1],
                [0, 3, 10, 5],
                [1, 1, 5, 10],
            ]
        )
    )
    q2 = QuadraticForm(
        Matrix(
            [
                [4, 0, 1, 1],
                [0, 8, 1, -4],
                [1, 1, 8, 2],
                [1, -4, 2, 10],
            ]
        )
    )
    return q1, q2


_T_PLUS = Matrix(
    [
        [3, 1, 1, 1],
        [-1, 3, -1, 1],
        [-1, 1, 3, -1],
        [-1, -1, 1, 3],
    ]
)
_T_MINUS = Matrix(
    [
        [-3, 1, 1, 1],
        [-1, -3, -1, 1],
        [-1, 1, -3, -1],
        [-1, -1, 1, -3],
    ]
)


def conway_sloane(a: int, b: int, c: int, d: int) -> tuple:
    """Gram forms of the parametric 4-dimensional isospectral family.

    The defining bases carry square roots; the Gram forms (1/12) T^t D T
    with D = diag(a,b,c,d) are rational and carry the whole spectrum.
    """
    if min(a, b, c, d) <= 0:
        raise ValueError("parameters must be positive")
    dm = Matrix.diagonal([Fraction(a), Fraction(b), Fraction(c), Fraction(d)])
    grams = []
    for t in (_T_PLUS, _T_MINUS):
        grams.append(QuadraticForm(Fraction(1, 12) * (t.transpose() * dm * t)))
    return tuple(grams)


def prop6dim_pair() -> tuple:
    """Cubic lattice and its non-cubic isospectral companion in dimension 6."""
    lam = Matrix(
        [
            [1, 1, 0, 0, 0, 0],
            [1, -1, 0, 0, 0, 0],
            [0, 0, 1, 1, 0, 0],
            [0, 0, 1, -1, 0, 0],
            [0, 0, 0, 0, 1, 1],
            [0, 0, 0, 0, 1, -1],
        ]
    )
    omega = Matrix(
        [
            [1, 1, 0, 0, 0, 1],
            [0, 0, 0, 0, 1, 1],
            [1, -1, 1, 0, 0, 0],
            [0, 0, 0, 0, 1, -1],
            [0, 0, 1, 0, 1, 0],
            [0, 0, 0, 2, 1, 1],
        ]
    )
    return LatticeBasis(lam), LatticeBasis(omega)


_C1_WORDS = (
    (0, 0, 0, 0, 0, 0),
    (1, 1, 0, 0, 0, 0),
    (0, 0, 1, 1, 0, 0),
    (0, 0, 0, 0, 1, 1),
    (1, 1, 1, 1, 0, 0),
    (1, 1, 0, 0, 1, 1),
    (0, 0, 1, 1, 1, 1),
    (1, 1, 1, 1, 1, 1),
)
_C2_WORDS = (
    (0, 0, 0, 0, 0, 0),
    (1, 0, 1, 0, 0, 0),
    (0, 0, 1, 0, 1, 0),
    (1, 0, 0, 0, 1, 0),
    (0, 1, 0, 1, 1, 1),
    (1, 1, 0, 1, 0, 1),
    (0, 1, 1, 1, 0, 1),
    (1, 1, 1, 1, 1, 1),
)


def prop6dim_codes() -> tuple:
    """The binary codes behind the 6-dimensional pair; rows are the codewords."""
    return (
        LinearCode(2, 6, _C1_WORDS),
        LinearCode(2, 6, _C2_WORDS),
    )


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str
    payload: object

    def to_json(self):
        p = self.payload
        if self.kind in ("LatticeBasis", "QuadraticForm"):
            return {"name": self.name, "kind": self.kind, "payload": p.to_json()}
        return {
            "name": self.name,
            "kind": self.kind,
            "payload": {"first": p[0].to_json(), "second": p[1].to_json()},
        }


_PARAM_RE = re.compile(r"^([a-z0-9_]+)\((.*)\)$")


def get(name: str) -> CatalogEntry:
    """Look up an entry by name, e.g. "dn(3)" or "schiemann4d_pair"."""
    m = _PARAM_RE.match(name.strip())
    if m:
        base, raw = m.group(1), m.group(2)
        args = [int(t) for t in raw.split(",")] if raw.strip() else []
    else:
        base, args = name.strip(), []
    if base == "dn":
        return CatalogEntry(name, "LatticeBasis", dn(*args))
    if base == "en":
        return CatalogEntry(name, "LatticeBasis", en(*args))
    if base == "vdw_basis":
        return CatalogEntry(name, "LatticeBasis", vdw_basis(*args))
    if base == "milnor_pair":
        return CatalogEntry(name, "LatticePair", milnor_pair())
    if base == "kneser_pair":
        return CatalogEntry(name, "LatticePair", kneser_pair())
    if base == "schiemann4d_pair":
        return CatalogEntry(name, "FormPair", schiemann4d_pair())
    if base == "conway_sloane":
        return CatalogEntry(name, "FormPair", conway_sloane(*args))
    if base == "prop6dim_pair":
        return CatalogEntry(name, "LatticePair", prop6dim_pair())
    if base == "prop6dim_codes":
        return CatalogEntry(name, "CodePair", prop6dim_codes())
    raise KeyError(f"unknown catalog entry {name!r}")
