"""The covering-refinement proof that ternary forms are spectrally determined.

Pairs (f, g) of reduced positive definite ternary forms live in R^12 (first
six coordinates f, last six g).  Starting from the single cone cut out by
f11 = g11, each iteration refines every cone by the possible next minimal
vectors on both sides, forcing one more shared representation value, until
every surviving cone lies inside the diagonal f = g.  Termination proves
that isospectral pairs are identical, i.e. three-dimensional flat tori are
determined by their spectra.
"""

from __future__ import annotations

import csv
import json
import os
import time
from dataclasses import dataclass, field

from . import cones, minsets
from .cones import Cone, add_halfspace, contained_in_diagonal, contained_in_hyperplane, is_empty, prune_constraints
from .reduction import catalog, value_functional

F_SIDE = "F"
G_SIDE = "G"

_ZERO6 = (0, 0, 0, 0, 0, 0)

E1 = (1, 0, 0)


class InTuneViolation(AssertionError):
    pass


def eval_functional(x, side: str) -> tuple:
    """Linear functional on pair space returning f(x) or g(x)."""
    v = value_functional(x)
    if side == F_SIDE:
        return v + _ZERO6
    if side == G_SIDE:
        return _ZERO6 + v
    raise ValueError(f"side must be F or G, got {side!r}")


def _embed(v6, side: str) -> tuple:
    return tuple(v6) + _ZERO6 if side == F_SIDE else _ZERO6 + tuple(v6)


def _diff(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class InTuneCone:
    """A pair-space cone with its bookkeeping.

    lam names the largest absorbed sublattice (f and g agree on it across
    the whole cone); xs and ys list the forced successive minimal vectors of
    the two sides over the remaining domain, with f(xs[i]) = g(ys[i]) on the
    cone.
    """

    cone: Cone
    lam: str
    xs: tuple
    ys: tuple

    @property
    def k(self) -> int:
        return len(self.xs)

    def key(self):
        return (self.cone.edges, self.lam, self.xs, self.ys)

    def to_json(self) -> dict:
        d = self.cone.to_json()
        d.update(
            {"lambda": self.lam, "xs": [list(x) for x in self.xs], "ys": [list(y) for y in self.ys]}
        )
        return d


# ---------------------------------------------------------------------------
# context: catalog constants, the ambient product cone, MIN queries
# ---------------------------------------------------------------------------

_LAMBDA_FUNCTIONALS = {
    minsets.E1_LINE: ((1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0),),
    minsets.E1E2_PLANE: (
        (0, 1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0),
        (0, 0, 0, 1, 0, 0, 0, 0, 0, -1, 0, 0),
    ),
    minsets.UNION_PLANES: (
        (0, 0, 1, 0, 0, 0, 0, 0, -1, 0, 0, 0),
        (0, 0, 0, 0, 1, 0, 0, 0, 0, 0, -1, 0),
    ),
}

_LAMBDA_ORDER = (minsets.E1_LINE, minsets.E1E2_PLANE, minsets.UNION_PLANES)


class Context:
    """Shared immutable data for a run: constraints, ambient cone, debug flag."""

    def __init__(self, debug: bool = False):
        self.cat = catalog()
        factor = cones.from_system(self.cat.Aset, self.cat.Bset)
        self.factor = factor
        self.ambient = cones.direct_product(factor, factor)
        self.debug = debug
        # implication constraints pre-embedded on both sides
        self.implications = tuple(
            (_embed(c, side), _embed(d, side))
            for side in (F_SIDE, G_SIDE)
            for (c, d) in self.cat.Cpairs
        )

    def min_set(self, lam: str, removed) -> list:
        result = minsets.min_set(lam, removed)
        if self.debug:
            oracle = minsets.min_set_oracle(lam, removed, radius=16)
            if result != oracle:
                raise AssertionError(
                    f"min_set disagrees with oracle on {lam} minus {sorted(removed)}"
                )
        return sorted(result)


def saturate(cone: Cone, ctx: Context) -> Cone:
    """Fixed point of adding facet-condition consequences.

    Whenever the cone lies inside the hyperplane of a condition's trigger on
    one side, that side's consequence is added as a closed constraint.  The
    trigger set only grows, so the loop reaches a fixed point; an empty
    result is legitimate and returned as-is.
    """
    applied = set(cone.cons)
    while True:
        if is_empty(cone):
            return cone
        fired = False
        for trigger, consequence in ctx.implications:
            if consequence in applied:
                continue
            if contained_in_hyperplane(cone, trigger):
                cone = add_halfspace(cone, consequence, False)
                applied.add(consequence)
                fired = True
                if is_empty(cone):
                    return cone
        if not fired:
            return cone


def detect_lambda(cone: Cone) -> str:
    """Largest absorbed sublattice: nested equalities holding on all edges."""
    best = None
    for tag in _LAMBDA_ORDER:
        if all(
            all(cones.dot(fn, e) == 0 for e in cone.edges)
            for fn in _LAMBDA_FUNCTIONALS[tag]
        ):
            best = tag
        else:
            break
    if best is None:
        raise ValueError("not a duet cone: f11 = g11 fails on an edge")
    return best


def initial_covering(ctx: Context) -> InTuneCone:
    """The single starting cone: product domain sliced by f11 = g11."""
    eq = _LAMBDA_FUNCTIONALS[minsets.E1_LINE][0]
    cone = add_halfspace(ctx.ambient, eq, False)
    cone = add_halfspace(cone, tuple(-t for t in eq), False)
    cone = saturate(cone, ctx)
    cone = prune_constraints(cone)
    return InTuneCone(cone=cone, lam=minsets.E1_LINE, xs=(E1,), ys=(E1,))


def s_cone_constraints(ctx: Context, lam: str, seq, new, side: str) -> list:
    """Closed constraints appending `new` to one side's minimal sequence.

    The previous sequence element stays no larger than the new one, and the
    new one is no larger than any member of the minimal set of the remaining
    domain.
    """
    out = []
    fn_new = value_functional(new)
    if seq:
        out.append(_embed(_diff(fn_new, value_functional(seq[-1])), side))
    removed = [z for z in seq if not minsets.in_lambda(lam, z)] + [new]
    for m in ctx.min_set(lam, removed):
        out.append(_embed(_diff(value_functional(m), fn_new), side))
    return out


def _truncate_sequences(lam_new: str, xs, ys):
    """Bookkeeping after the absorbed sublattice grows.

    Keep the longest prefix whose two sides lose equally many entries to the
    enlarged sublattice, then drop the absorbed entries; the survivors, in
    order, are the successive minimal vectors of each side over the smaller
    domain.
    """
    r = 0
    for t in range(len(xs), -1, -1):
        nx = sum(1 for z in xs[:t] if not minsets.in_lambda(lam_new, z))
        ny = sum(1 for z in ys[:t] if not minsets.in_lambda(lam_new, z))
        if nx == ny:
            r = t
            break
    new_xs = tuple(z for z in xs[:r] if not minsets.in_lambda(lam_new, z))
    new_ys = tuple(z for z in ys[:r] if not minsets.in_lambda(lam_new, z))
    return new_xs, new_ys


def _assert_in_tune(ctx: Context, t: InTuneCone):
    """Debug-mode P3 check; raises InTuneViolation with a full dump."""
    edges = t.cone.edges
    for z in t.xs + t.ys:
        if minsets.in_lambda(t.lam, z) and not (t.lam == minsets.E1_LINE and z == E1):
            raise InTuneViolation(f"sequence entry {z} inside lambda: {t.to_json()}")
    for xi, yi in zip(t.xs, t.ys):
        fn = _diff(eval_functional(xi, F_SIDE), eval_functional(yi, G_SIDE))
        if any(cones.dot(fn, e) != 0 for e in edges):
            raise InTuneViolation(
                f"pair value equality f({xi}) = g({yi}) fails: {t.to_json()}"
            )
    for side, seq in ((F_SIDE, t.xs), (G_SIDE, t.ys)):
        seq = [z for z in seq if not minsets.in_lambda(t.lam, z)]
        for a, b in zip(seq, seq[1:]):
            fn = _embed(_diff(value_functional(b), value_functional(a)), side)
            if any(cones.dot(fn, e) < 0 for e in edges):
                raise InTuneViolation(f"chain ordering fails on side {side}: {t.to_json()}")
        if seq:
            for m in ctx.min_set(t.lam, seq):
                fn = _embed(_diff(value_functional(m), value_functional(seq[-1])), side)
                if any(cones.dot(fn, e) < 0 for e in edges):
                    raise InTuneViolation(
                        f"minimality of {seq[-1]} fails on side {side}: {t.to_json()}"
                    )


def refine_cone(ctx: Context, t: InTuneCone) -> tuple:
    """One refinement step: returns (active children, solo children).

    A cone inside the diagonal is a solo and refines to itself.  Otherwise
    every pair of candidate next minimal vectors (x for f, y for g) spawns a
    child with the corresponding ordering constraints and the value equality
    f(x) = g(y); empty children are dropped, the rest re-saturated and their
    bookkeeping updated.
    """
    if contained_in_diagonal(t.cone):
        return [], [t]
    lam = t.lam
    rx = [z for z in t.xs if not minsets.in_lambda(lam, z)]
    ry = [z for z in t.ys if not minsets.in_lambda(lam, z)]
    cand_x = ctx.min_set(lam, rx)
    cand_y = ctx.min_set(lam, ry)
    active, solos = [], []
    for x in cand_x:
        cone_x = t.cone
        for v in s_cone_constraints(ctx, lam, t.xs, x, F_SIDE):
            cone_x = add_halfspace(cone_x, v, False)
        if is_empty(cone_x):
            continue
        fx = eval_functional(x, F_SIDE)
        for y in cand_y:
            cone = cone_x
            for v in s_cone_constraints(ctx, lam, t.ys, y, G_SIDE):
                cone = add_halfspace(cone, v, False)
            eq = _diff(fx, eval_functional(y, G_SIDE))
            cone = add_halfspace(cone, eq, False)
            cone = add_halfspace(cone, tuple(-c for c in eq), False)
            if is_empty(cone):
                continue
            cone = saturate(cone, ctx)
            if is_empty(cone):
                continue
            cone = prune_constraints(cone)
            lam_new = detect_lambda(cone)
            xs, ys = t.xs + (x,), t.ys + (y,)
            if lam_new != lam:
                xs, ys = _truncate_sequences(lam_new, xs, ys)
            child = InTuneCone(cone=cone, lam=lam_new, xs=xs, ys=ys)
            if ctx.debug:
                _assert_in_tune(ctx, child)
            if contained_in_diagonal(cone):
                solos.append(child)
            else:
                active.append(child)
    return active, solos


# ---------------------------------------------------------------------------
# the full run
# ---------------------------------------------------------------------------


@dataclass
class IterationStats:
    iteration: int
    elapsed_ms: int
    active_cones: int
    solo_cones: int


@dataclass
class Report:
    iterations: list = field(default_factory=list)
    terminated: bool = False
    all_solos_diagonal: bool = True
    total_active_cones: int = 0
    total_children: int = 0
    solo_count: int = 0

    @property
    def success(self) -> bool:
        return self.terminated and self.all_solos_diagonal

    def active_counts(self) -> list:
        return [s.active_cones for s in self.iterations]


_WORKER_CTX = None


def _init_worker(debug):
    global _WORKER_CTX
    _WORKER_CTX = Context(debug=debug)


def _refine_batch(batch):
    out = []
    for t in batch:
        out.append(refine_cone(_WORKER_CTX, t))
    return out


def run(
    max_iter: int = 20,
    jobs: int = 1,
    stats_path: str | None = None,
    dump_dir: str | None = None,
    debug: bool = False,
    progress=None,
) -> Report:
    """Iterate refinement to the fixed point, bulk-synchronously.

    Every iteration refines all active cones of the previous one and merges
    the children under a deduplication key (edge set plus bookkeeping), so
    runs with different job counts produce identical per-iteration sets.
    Returns the full iteration log; termination means no active cones
    remain, establishing that every covered pair lies on the diagonal.
    """
    ctx = Context(debug=debug)
    report = Report()
    start = time.monotonic()
    active = [initial_covering(ctx)]
    solo_keys: set = set()
    solo_cones: list = []
    pool = None
    if jobs > 1:
        import multiprocessing as mp

        pool = mp.get_context("fork").Pool(jobs, _init_worker, (debug,))
    try:
        for iteration in range(1, max_iter + 1):
            if pool is not None and len(active) > jobs:
                chunk = max(1, len(active) // (4 * jobs))
                batches = [active[i : i + chunk] for i in range(0, len(active), chunk)]
                results = [r for batch in pool.map(_refine_batch, batches) for r in batch]
            else:
                results = [refine_cone(ctx, t) for t in active]
            merged: dict = {}
            for children, solos in results:
                for child in children:
                    merged.setdefault(child.key(), child)
                for s in solos:
                    k = s.key()
                    if k not in solo_keys:
                        solo_keys.add(k)
                        solo_cones.append(s)
                        if not contained_in_diagonal(s.cone):
                            report.all_solos_diagonal = False
            active = list(merged.values())
            report.total_children += sum(len(c) for c, _ in results)
            report.total_active_cones += len(active)
            elapsed = int((time.monotonic() - start) * 1000)
            report.iterations.append(
                IterationStats(iteration, elapsed, len(active), len(solo_cones))
            )
            if progress is not None:
                progress(report.iterations[-1])
            if dump_dir:
                _dump_iteration(dump_dir, iteration, active, solo_cones)
            if not active:
                report.terminated = True
                break
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    report.solo_count = len(solo_cones)
    if stats_path:
        write_stats(stats_path, report)
    return report


def write_stats(path: str, report: Report):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iteration", "elapsed_ms", "active_cones", "solo_cones"])
        for s in report.iterations:
            w.writerow([s.iteration, s.elapsed_ms, s.active_cones, s.solo_cones])


def _dump_iteration(dump_dir, iteration, active, solos):
    d = os.path.join(dump_dir, f"iter_{iteration:03d}")
    os.makedirs(d, exist_ok=True)
    for i, t in enumerate(active):
        with open(os.path.join(d, f"active_{i:05d}.json"), "w") as fh:
            json.dump(t.to_json(), fh)
    with open(os.path.join(d, "solos.json"), "w") as fh:
        json.dump([t.to_json() for t in solos], fh)


# the paper's published trajectory of active cone counts per iteration
PUBLISHED_ACTIVE_COUNTS = (
    1,
    4,
    42,
    500,
    3311,
    11164,
    31334,
    59970,
    34658,
    4452,
    1284,
    702,
    18,
    0,
)
