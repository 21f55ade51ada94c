"""Linear q-nary codes and the lattices they generate.

The preimage of a code under coordinatewise reduction mod q is an integer
lattice, and every integer lattice arises this way from its volume-nary
code.  Equal weight distributions of codes force isospectral lattices;
absolute pairings survive arbitrary diagonal scalings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactmat import Matrix, hnf
from .forms import LatticeBasis

CODEWORD_CAP = 1 << 20


@dataclass(frozen=True)
class LinearCode:
    """Subgroup of (Z/qZ)^n spanned by the given generators."""

    q: int
    n: int
    generators: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("modulus must be positive")
        gens = tuple(
            tuple(c % self.q for c in g) for g in self.generators
        )
        if any(len(g) != self.n for g in gens):
            raise ValueError("generator length mismatch")
        object.__setattr__(self, "generators", gens)

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "generators": [list(g) for g in self.generators]}

    @staticmethod
    def from_json(obj) -> "LinearCode":
        return LinearCode(obj["q"], obj["n"], tuple(tuple(g) for g in obj["generators"]))


def codewords(code: LinearCode) -> frozenset:
    """Exhaustive span of the generators as a subgroup of (Z/qZ)^n."""
    q = code.q
    words = {(0,) * code.n}
    frontier = [(0,) * code.n]
    while frontier:
        w = frontier.pop()
        for g in code.generators:
            nxt = tuple((a + b) % q for a, b in zip(w, g))
            if nxt not in words:
                if len(words) >= CODEWORD_CAP:
                    raise ValueError("codeword cap exceeded")
                words.add(nxt)
                frontier.append(nxt)
    return frozenset(words)


def construction_a(code: LinearCode) -> LatticeBasis:
    """Square basis of the preimage lattice {x in Z^n : x mod q in code}.

    Column-reduce the generators alongside q times the identity to a basis.
    """
    n, q = code.n, code.q
    rows = [
        [g[i] for g in code.generators] + [q if j == i else 0 for j in range(n)]
        for i in range(n)
    ]
    h = hnf(rows)
    return LatticeBasis(Matrix([[Fraction(x) for x in row] for row in h]))


def code_of_integer_lattice(basis: LatticeBasis) -> LinearCode:
    """The |det|-nary code whose preimage is the given integer lattice."""
    if not basis.A.is_integer():
        raise ValueError("integer lattice required")
    q = int(abs(basis.volume()))
    gens = tuple(
        tuple(int(basis.A[i, j]) % q for i in range(basis.dim))
        for j in range(basis.dim)
    )
    return LinearCode(q, basis.dim, gens)


def same_weight_distribution(c1: LinearCode, c2: LinearCode) -> bool:
    """Codeword-by-codeword permutation equivalence.

    Formalized as equality of the multisets of sorted coordinate tuples: a
    pairing where each pair differs by a coordinate permutation exists
    exactly when those multisets agree.
    """
    w1, w2 = codewords(c1), codewords(c2)
    if len(w1) != len(w2) or c1.n != c2.n:
        return False
    return sorted(tuple(sorted(w)) for w in w1) == sorted(
        tuple(sorted(w)) for w in w2
    )


def absolute_pairing(c1: LinearCode, c2: LinearCode):
    """Perfect matching of codewords agreeing up to coordinate signs mod q.

    Returns a list of (word1, word2) pairs or None; the search is complete
    (augmenting paths over the compatibility graph).
    """
    w1, w2 = sorted(codewords(c1)), sorted(codewords(c2))
    if len(w1) != len(w2) or c1.n != c2.n:
        return None
    q = c1.q
    if q != c2.q:
        return None

    def compatible(a, b) -> bool:
        return all(x == y or (x + y) % q == 0 for x, y in zip(a, b))

    adj = [[j for j, b in enumerate(w2) if compatible(a, b)] for a in w1]
    match_of_right = [-1] * len(w2)

    def augment(i, seen) -> bool:
        for j in adj[i]:
            if not seen[j]:
                seen[j] = True
                if match_of_right[j] < 0 or augment(match_of_right[j], seen):
                    match_of_right[j] = i
                    return True
        return False

    for i in range(len(w1)):
        if not augment(i, [False] * len(w2)):
            return None
    return [(w1[match_of_right[j]], w2[j]) for j in range(len(w2))]
