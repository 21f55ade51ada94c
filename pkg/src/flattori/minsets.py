"""Minimal vectors of punctured integer domains under the edge-form preorder.

x precedes y when every one of the eleven edge forms of the closed reduced
domain is at least as small at x as at y.  The refinement algorithm needs
the minimal elements of Z^3_* with a coordinate line or plane removed and
finitely many consumed points deleted; a finite ball plus one calibration
point per domain suffices to compute them exactly.
"""

from __future__ import annotations

from functools import lru_cache

from .reduction import M_EDGES

FULL = "Full"
E1_LINE = "E1Line"
E1E2_PLANE = "E1E2Plane"
UNION_PLANES = "UnionPlanes"

LAMBDA_TAGS = (FULL, E1_LINE, E1E2_PLANE, UNION_PLANES)

# nesting order of the absorbed sublattices; FULL means nothing absorbed
_LAMBDA_RANK = {FULL: -1, E1_LINE: 0, E1E2_PLANE: 1, UNION_PLANES: 2}


def lambda_rank(tag: str) -> int:
    return _LAMBDA_RANK[tag]


def in_lambda(tag: str, x) -> bool:
    """Membership of x in the absorbed sublattice of the tag."""
    if tag == FULL:
        return False
    if tag == E1_LINE:
        return x[1] == 0 and x[2] == 0
    if tag == E1E2_PLANE:
        return x[2] == 0
    if tag == UNION_PLANES:
        return x[2] == 0 or x[1] == 0
    raise ValueError(f"unknown lambda tag {tag!r}")


def is_zstar3(x) -> bool:
    from math import gcd

    g = gcd(gcd(x[0], x[1]), x[2])
    last = x[2] or x[1] or x[0]
    return g == 1 and last > 0


def in_domain(tag: str, x) -> bool:
    return is_zstar3(x) and not in_lambda(tag, x)


@lru_cache(maxsize=None)
def profile(x) -> tuple:
    """Values of the eleven edge forms at x; the preorder compares these."""
    x1, x2, x3 = x
    s1, s2, s3 = x1 * x1, x2 * x2, x3 * x3
    p12, p13, p23 = x1 * x2, x1 * x3, x2 * x3
    return tuple(
        m[0] * s1 + m[1] * s2 + m[2] * s3 + 2 * (m[3] * p12 + m[4] * p13 + m[5] * p23)
        for m in M_EDGES
    )


def precedes(x, y) -> bool:
    """Whether every edge form is no larger at x than at y."""
    return all(a <= b for a, b in zip(profile(tuple(x)), profile(tuple(y))))


@lru_cache(maxsize=None)
def _ball_candidates(tag: str, norm2_bound: int) -> tuple:
    """Domain points with |x|^2 < bound, sorted by profile sum then lex."""
    import math

    r = math.isqrt(norm2_bound)
    out = []
    for x1 in range(-r, r + 1):
        for x2 in range(-r, r + 1):
            m = norm2_bound - x1 * x1 - x2 * x2
            if m <= 0:
                continue
            top = math.isqrt(m - 1) if m > 1 else 0
            for x3 in range(-top, top + 1):
                x = (x1, x2, x3)
                if in_domain(tag, x):
                    out.append(x)
    return tuple(sorted(out, key=lambda x: (sum(profile(x)), x)))


def _minimal_of(points) -> frozenset:
    """Pairwise-minimal elements; points must be sorted by profile sum.

    A dominator never has a larger profile sum, and equal sums force equal
    profiles (hence equal points in Z^3_*), so scanning in sum order and
    comparing against the running minimal set is exhaustive.
    """
    mins: list = []
    for x in points:
        px = profile(x)
        if not any(all(a <= b for a, b in zip(profile(m), px)) for m in mins):
            mins.append(x)
    return frozenset(mins)


def _calibration(tag: str, a: int) -> tuple:
    if tag == FULL:
        return ((1, 0, 0),)
    if tag == E1_LINE:
        return ((a, 1, 0),)
    if tag == E1E2_PLANE:
        return ((a, 0, 1),)
    return ((a, 1, 1), (a, -1, 1))


_CACHE: dict = {}


def min_set(tag: str, removed=()) -> frozenset:
    """Minimal set of the tagged domain minus the removed points, exactly.

    Pick the smallest a >= 1 whose calibration points survive the removal;
    every non-dominated point then has |x|^2 < 8(a^2+2), so the minimal set
    of the ball (with removals applied) equals the minimal set of the whole
    infinite domain.
    """
    removed = frozenset(tuple(x) for x in removed)
    key = (tag, removed)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    for x in removed:
        if not in_domain(tag, x):
            raise ValueError(f"removed point {x} outside domain {tag}")
    if tag == FULL:
        if removed:
            raise ValueError("the full-domain base case takes no removals")
        a = 1
    else:
        a = 1
        while any(y in removed for y in _calibration(tag, a)):
            a += 1
    bound = 8 * (a * a + 2)
    pts = [x for x in _ball_candidates(tag, bound) if x not in removed]
    result = _minimal_of(pts)
    if not result:
        raise AssertionError("minimal set of a nonempty domain came out empty")
    _CACHE[key] = result
    return result


def min_set_oracle(tag: str, removed=(), radius: int = 12) -> frozenset:
    """Brute-force minimal set over the ball |x|^2 <= radius^2.

    Independent of the calibration logic in min_set: it only scans the ball
    pairwise.  For radius past the domination bound the result is stable
    under enlargement and equals the exact minimal set.
    """
    removed = frozenset(tuple(x) for x in removed)
    pts = [
        x
        for x in _ball_candidates(tag, radius * radius + 1)
        if x not in removed
    ]
    return _minimal_of(pts)
