"""Exact pointed polyhedral cone engine with incremental edge maintenance.

Cones are stored by their constraint normals (integer vectors; closed or
strict) together with the exact extreme rays (edges) of the closure.  Adding
a halfspace updates the edge set in place of recomputing it: edges violating
the new constraint are cut away and every two-face crossing the hyperplane
contributes one new ray.  Strict constraints participate in the edge
computation as if closed (the edges describe the closure) and separately in
the emptiness test.

All arithmetic is on Python integers; rays are kept primitive (gcd 1) so the
representation is canonical and hashable.
"""

from __future__ import annotations

from math import gcd

from .exactmat import int_rank


def dot(a, b) -> int:
    s = 0
    for x, y in zip(a, b):
        if x:
            s += x * y
    return s


def primitive(vec) -> tuple:
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)


class NotPointedError(ValueError):
    pass


class EmptyConeError(ValueError):
    pass


class Cone:
    """Pointed polyhedral cone: constraint system plus exact closure edges.

    ``cons`` holds all constraint normals in insertion order and
    ``strict_bits`` marks which of them are strict.  ``edges`` are the
    primitive extreme rays of the closure, sorted; ``masks[i]`` is a bitmask
    over constraint indices recording which constraints are tight at
    ``edges[i]``.  The masks make both the adjacency test and redundancy
    pruning cheap.
    """

    __slots__ = ("dim", "cons", "strict_bits", "edges", "masks", "_index")

    def __init__(self, dim, cons, strict_bits, edges, masks):
        self.dim = dim
        self.cons = cons
        self.strict_bits = strict_bits
        self.edges = edges
        self.masks = masks
        self._index = None

    @property
    def index(self) -> dict:
        if self._index is None:
            self._index = {v: i for i, v in enumerate(self.cons)}
        return self._index

    # -- constructors --------------------------------------------------

    @staticmethod
    def from_edges(dim, cons, strict_flags, edges) -> "Cone":
        """Build a cone state from known edges of the given system.

        The caller asserts that ``edges`` are exactly the extreme rays of the
        closure of the system; tightness masks are evaluated here.
        """
        cons = tuple(primitive(c) for c in cons)
        strict_bits = 0
        for i, f in enumerate(strict_flags):
            if f:
                strict_bits |= 1 << i
        edges = tuple(sorted(primitive(e) for e in edges))
        masks = tuple(_eval_mask(cons, e) for e in edges)
        return Cone(dim, cons, strict_bits, edges, masks)

    def replace(self, **kw) -> "Cone":
        args = {
            "dim": self.dim,
            "cons": self.cons,
            "strict_bits": self.strict_bits,
            "edges": self.edges,
            "masks": self.masks,
        }
        args.update(kw)
        return Cone(**args)

    # -- views -----------------------------------------------------------

    @property
    def closed(self) -> tuple:
        return tuple(
            c for i, c in enumerate(self.cons) if not (self.strict_bits >> i) & 1
        )

    @property
    def strict(self) -> tuple:
        return tuple(c for i, c in enumerate(self.cons) if (self.strict_bits >> i) & 1)

    def span_dim(self) -> int:
        return int_rank(self.edges) if self.edges else 0

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "closed": [list(c) for c in self.closed],
            "strict": [list(c) for c in self.strict],
            "edges": [list(e) for e in self.edges],
        }

    def __repr__(self):
        return (
            f"Cone(dim={self.dim}, constraints={len(self.cons)}, "
            f"edges={len(self.edges)})"
        )


def _eval_mask(cons, edge) -> int:
    m = 0
    for i, c in enumerate(cons):
        if dot(c, edge) == 0:
            m |= 1 << i
    return m


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def _simplicial_seed(dim, normals):
    """Full-rank constraint subset and the edges of its simplicial cone."""
    from fractions import Fraction

    from .exactmat import Matrix, clear_denominators, inverse_det

    chosen = []
    for v in normals:
        if len(chosen) == dim:
            break
        if int_rank(chosen + [v]) > len(chosen):
            chosen.append(v)
    if len(chosen) < dim:
        raise NotPointedError("not pointed")
    inv, _ = inverse_det(Matrix([[Fraction(x) for x in row] for row in chosen]))
    edges = [clear_denominators(inv.column(j)) for j in range(dim)]
    return chosen, edges


def from_system(closed, strict=(), seed: Cone | None = None) -> Cone:
    """Cone of a constraint system, built by incremental halfspace addition.

    Without a seed, a full-rank subset of the normals spans a simplicial
    start cone (a rank-deficient system would contain a line and raises
    ``NotPointedError``).  With a seed cone, the system's constraints are
    added to it one by one; the target must lie inside the seed.
    """
    closed = [primitive(c) for c in closed]
    strict = [primitive(c) for c in strict]
    if seed is None:
        if not closed and not strict:
            raise NotPointedError("not pointed")
        dim = len((closed + strict)[0])
        chosen, edges = _simplicial_seed(dim, closed + strict)
        chosen_set = set(chosen)
        flags = [v in set(strict) for v in chosen]
        cone = Cone.from_edges(dim, chosen, flags, edges)
        remaining = [(v, False) for v in closed if v not in chosen_set] + [
            (v, True) for v in strict if v not in chosen_set
        ]
        # a strict normal may coincide with a chosen closed one; re-add to tag it
        remaining += [(v, True) for v in strict if v in chosen_set and not flags[chosen.index(v)]]
    else:
        cone = seed
        remaining = [(v, False) for v in closed] + [(v, True) for v in strict]
    for v, is_strict in remaining:
        cone = add_halfspace(cone, v, is_strict)
    return cone


def add_halfspace(cone: Cone, v, strict: bool = False) -> Cone:
    """Intersect with {x : v.x >= 0} (or > 0), maintaining exact edges.

    Three cases by the signs of v on the current edges: all nonnegative
    leaves the edges unchanged; none positive keeps only the edges on the
    hyperplane; the mixed case keeps the nonnegative edges and adds, for
    each two-face spanned by edges with opposite signs, the primitive ray
    where that face meets the hyperplane.  Adjacency of an opposite-sign
    pair is decided combinatorially: no third edge may be tight on every
    constraint the pair is jointly tight on.
    """
    v = primitive(v)
    idx = cone.index.get(v)
    if idx is not None:
        if strict and not (cone.strict_bits >> idx) & 1:
            return cone.replace(strict_bits=cone.strict_bits | (1 << idx))
        return cone

    edges = cone.edges
    masks = cone.masks
    bit = 1 << len(cone.cons)
    cons = cone.cons + (v,)
    strict_bits = cone.strict_bits | (bit if strict else 0)

    dots = [dot(v, e) for e in edges]
    if all(d >= 0 for d in dots):
        new_edges = edges
        new_masks = tuple(m | bit if d == 0 else m for m, d in zip(masks, dots))
        return Cone(cone.dim, cons, strict_bits, new_edges, new_masks)

    pos = [i for i, d in enumerate(dots) if d > 0]
    zero = [i for i, d in enumerate(dots) if d == 0]
    if not pos:
        new_edges = tuple(edges[i] for i in zero)
        new_masks = tuple(masks[i] | bit for i in zero)
        return Cone(cone.dim, cons, strict_bits, new_edges, new_masks)

    neg = [i for i, d in enumerate(dots) if d < 0]
    kept = {edges[i]: masks[i] for i in pos}
    for i in zero:
        kept[edges[i]] = masks[i] | bit
    n_edges = len(edges)
    for ip in pos:
        mp, dp, ep = masks[ip], dots[ip], edges[ip]
        for im in neg:
            common = mp & masks[im]
            adjacent = True
            for j in range(n_edges):
                if j != ip and j != im and masks[j] & common == common:
                    adjacent = False
                    break
            if not adjacent:
                continue
            dm, em = dots[im], edges[im]
            w = primitive(tuple(dp * b - dm * a for a, b in zip(ep, em)))
            if w not in kept:
                kept[w] = _eval_mask(cons, w)
    new_edges = tuple(sorted(kept))
    new_masks = tuple(kept[e] for e in new_edges)
    return Cone(cone.dim, cons, strict_bits, new_edges, new_masks)


# ---------------------------------------------------------------------------
# queries
# ---------------------------------------------------------------------------


def is_empty(cone: Cone) -> bool:
    """Exact emptiness of Pc(closed, strict).

    With no edges the closure is {0}, which survives only when there are no
    strict constraints.  Otherwise the cone is empty exactly when some
    strict normal vanishes on every edge (the closure then lies inside that
    hyperplane, so nothing satisfies the strict inequality).
    """
    if not cone.edges:
        return cone.strict_bits != 0
    sb = cone.strict_bits
    if not sb:
        return False
    all_tight = cone.masks[0]
    for m in cone.masks[1:]:
        all_tight &= m
        if not all_tight & sb:
            return False
    return bool(all_tight & sb)


def contained_in_hyperplane(cone: Cone, c) -> bool:
    """Whether the cone lies in {x : c.x = 0}; exact via the edges."""
    if is_empty(cone):
        raise EmptyConeError("vacuous containment")
    return all(dot(c, e) == 0 for e in cone.edges)


def contained_in_diagonal(cone: Cone) -> bool:
    """For pair-space cones: every edge (f, g) has f = g componentwise."""
    if cone.dim % 2:
        raise ValueError("diagonal test needs even ambient dimension")
    h = cone.dim // 2
    return all(e[:h] == e[h:] for e in cone.edges)


def adjacent_edge_pairs(cone: Cone) -> list:
    """All pairs of edges spanning a two-face.

    Implements the rank criterion: the common tight constraints of the pair
    must cut out a plane.  (The incremental engine uses the equivalent
    combinatorial test; the two are cross-checked in the test suite.)
    """
    out = []
    edges, masks, cons = cone.edges, cone.masks, cone.cons
    n = len(edges)
    for i in range(n):
        for j in range(i + 1, n):
            common = masks[i] & masks[j]
            normals = [cons[t] for t in range(len(cons)) if (common >> t) & 1]
            if cone.dim - int_rank(normals) == 2:
                out.append((edges[i], edges[j]))
    return out


def prune_constraints(cone: Cone) -> Cone:
    """Drop closed constraints tight on fewer than d-1 edges (d = cone dim).

    Such constraints cannot define a facet, so the point set is unchanged.
    Strict constraints always stay: they carry the emptiness semantics.
    """
    if not cone.edges:
        return cone
    d = cone.span_dim()
    counts = [0] * len(cone.cons)
    for m in cone.masks:
        i = 0
        while m:
            if m & 1:
                counts[i] += 1
            m >>= 1
            i += 1
    keep = [
        i
        for i in range(len(cone.cons))
        if (cone.strict_bits >> i) & 1 or counts[i] >= d - 1
    ]
    if len(keep) == len(cone.cons):
        return cone
    new_cons = tuple(cone.cons[i] for i in keep)
    strict_bits = 0
    for new_i, old_i in enumerate(keep):
        if (cone.strict_bits >> old_i) & 1:
            strict_bits |= 1 << new_i
    new_masks = []
    for m in cone.masks:
        nm = 0
        for new_i, old_i in enumerate(keep):
            if (m >> old_i) & 1:
                nm |= 1 << new_i
        new_masks.append(nm)
    return Cone(cone.dim, new_cons, strict_bits, cone.edges, tuple(new_masks))


def is_pointed_system(cone: Cone) -> bool:
    """A homogeneous system is pointed exactly when its normals span R^dim."""
    return int_rank(cone.cons) == cone.dim


def canonical_key(cone: Cone) -> bytes:
    """Deduplication key: the sorted primitive edge set determines the closure."""
    return repr(cone.edges).encode()


def direct_product(c1: Cone, c2: Cone) -> Cone:
    """Product cone: constraints embed per factor, edges are (k,0) and (0,k')."""
    z1, z2 = (0,) * c1.dim, (0,) * c2.dim
    cons = [c + z2 for c in c1.cons] + [z1 + c for c in c2.cons]
    flags = [bool((c1.strict_bits >> i) & 1) for i in range(len(c1.cons))] + [
        bool((c2.strict_bits >> i) & 1) for i in range(len(c2.cons))
    ]
    edges = [e + z2 for e in c1.edges] + [z1 + e for e in c2.edges]
    return Cone.from_edges(c1.dim + c2.dim, cons, flags, edges)
