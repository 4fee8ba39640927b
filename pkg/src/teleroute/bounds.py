"""Expansion, spectral quantities, and routing-time lower bounds.

Vertex expansion here is

    c(G) = min over nonempty proper X of |boundary(X)| / min(|X|, |V-X|),

an exact rational computed by exhaustive subset enumeration for small
graphs.  From it come two routing-time lower bounds (the isoperimetric
bound ceil(2/c - 1) and the diameter), the diameter-vs-expansion
inequality, per-vertex horizon profiles, and spectral figures of merit
(Laplacian algebraic connectivity, degree ratio).

Enumeration visits one representative per complement pair {X, V-X} and
scores the pair by the smaller of the two boundaries: the minimum can
be attained only on the large side, so enumerating small sides alone
would overestimate c on lopsided graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graphs import (
    ArchGraph,
    bfs_distances,
    diameter,
    vertex_boundary,
)

__all__ = [
    "EXACT_EXPANSION_MAX_N",
    "HorizonProfile",
    "AdvantageBounds",
    "BoundsReport",
    "cut_value",
    "vertex_expansion_exact",
    "vertex_expansion_bounds",
    "family_witness_cut",
    "iso_lower_bound",
    "diam_expansion_rhs",
    "horizon_profile",
    "spectral",
    "advantage_upper_bounds",
    "bounds_report",
]

EXACT_EXPANSION_MAX_N = 24
_BOUNDS_EXACT_MAX_N = 16  # cheap-call cap used by vertex_expansion_bounds


def cut_value(g: ArchGraph, xs) -> Fraction:
    """Score of the complement pair {X, V-X}: the smaller boundary over
    the smaller side.  Equals min over the two sides of
    |boundary| / min(|X|, |V-X|)."""
    xs = set(xs)
    if not xs or len(xs) >= g.n:
        raise ValueError("cut must be a nonempty proper subset")
    comp = set(range(g.n)) - xs
    b1 = len(vertex_boundary(g, xs))
    b2 = len(vertex_boundary(g, comp))
    return Fraction(min(b1, b2), min(len(xs), len(comp)))


def vertex_expansion_exact(g: ArchGraph) -> tuple[Fraction, tuple[int, ...]]:
    """Exact vertex expansion and an argmin cut, by exhaustive search.

    Enumerates one subset per complement pair (all nonempty subsets of
    vertices 0..n-2) in blocks, with the neighbor counting vectorized
    as a bit-matrix product.  Capacity-limited to n <= 24; larger
    graphs get an explicit error pointing at vertex_expansion_bounds.
    """
    n = g.n
    if n < 2:
        raise ValueError("expansion needs at least two vertices")
    if n > EXACT_EXPANSION_MAX_N:
        raise ValueError(
            f"exact expansion is capped at {EXACT_EXPANSION_MAX_N} vertices "
            f"(got {n}); use vertex_expansion_bounds instead")

    adj = np.zeros((n, n), dtype=np.float32)
    for u, v in g.edges:
        adj[u, v] = adj[v, u] = 1.0
    deg = adj.sum(axis=0)

    best = math.inf
    best_mask = None
    total = 1 << (n - 1)
    block = 1 << 18
    bits = np.arange(n, dtype=np.uint32)
    for start in range(1, total, block):
        stop = min(start + block, total)
        masks = np.arange(start, stop, dtype=np.uint32)
        member = ((masks[:, None] >> bits) & 1).astype(np.float32)
        inside = member @ adj                   # neighbors inside S, per vertex
        bnd_s = ((inside > 0) & (member == 0)).sum(axis=1)
        bnd_c = ((inside < deg) & (member == 1)).sum(axis=1)
        size = member.sum(axis=1)
        small = np.minimum(size, n - size)
        ratio = np.minimum(bnd_s, bnd_c) / small
        i = int(np.argmin(ratio))
        if ratio[i] < best:
            best = float(ratio[i])
            best_mask = int(masks[i])

    xs = {v for v in range(n) if best_mask >> v & 1}
    comp = set(range(n)) - xs
    b_s = len(vertex_boundary(g, xs))
    b_c = len(vertex_boundary(g, comp))
    witness = xs if b_s <= b_c else comp
    c = Fraction(min(b_s, b_c), min(len(xs), len(comp)))
    assert abs(float(c) - best) < 1e-9
    return c, tuple(sorted(witness))


def _hyperplane_cut(g: ArchGraph) -> set[int]:
    # half-grid: first coordinate below the median layer
    n = g.param_dict["n"]
    return {v for v in range(g.n) if g.labels[v][0] < n // 2}


def _best_ball_cut(g: ArchGraph) -> set[int]:
    # best Hamming ball around vertex 0, over all radii
    d = g.param_dict["d"]
    dist = bfs_distances(g, 0)
    best, best_cut = None, None
    for r in range(d):
        cut = {v for v in range(g.n) if dist[v] <= r}
        val = cut_value(g, cut)
        if best is None or val < best:
            best, best_cut = val, cut
    return best_cut


def _bit_fixing_cut(g: ArchGraph) -> set[int]:
    # all butterfly rows whose word has bit 0 clear
    return {v for v in range(g.n) if g.labels[v][0] & 1 == 0}


def family_witness_cut(g: ArchGraph) -> set[int] | None:
    """A named witness cut for families with one: grid/path hyperplane,
    hypercube Hamming ball, butterfly bit-fixing rows.  None otherwise."""
    if g.family == "grid":
        return _hyperplane_cut(g)
    if g.family == "path" and g.n >= 2:
        return set(range(g.n // 2))
    if g.family == "hypercube" and g.n >= 2:
        return _best_ball_cut(g)
    if g.family == "butterfly":
        return _bit_fixing_cut(g)
    return None


def vertex_expansion_bounds(g: ArchGraph) -> tuple[Fraction, Fraction]:
    """An interval [lower, upper] certainly containing c(G).

    Generic bounds are [2/N, 1]; a family witness cut sharpens the
    upper end, and for small graphs (n <= 16) the exact search
    collapses the interval to a point.
    """
    n = g.n
    if n < 2:
        raise ValueError("expansion needs at least two vertices")
    if n <= _BOUNDS_EXACT_MAX_N:
        c, _ = vertex_expansion_exact(g)
        return c, c
    lower = Fraction(2, n)
    upper = Fraction(1)
    cut = family_witness_cut(g)
    if cut is not None:
        upper = min(upper, cut_value(g, cut))
    return lower, max(lower, upper)


def iso_lower_bound(c: Fraction) -> int:
    """Isoperimetric routing-time lower bound ceil(2/c - 1)."""
    c = Fraction(c)
    if not 0 < c <= 1:
        raise ValueError("expansion must lie in (0, 1]")
    return math.ceil(Fraction(2) / c - 1)


def diam_expansion_rhs(n: int, c) -> float:
    """Right-hand side of the diameter bound: 2*log2(N/2)/log2(1+c) + 2."""
    if n < 2:
        raise ValueError("need at least two vertices")
    c = float(c)
    if not 0 < c <= 1:
        raise ValueError("expansion must lie in (0, 1]")
    if n == 2:
        return 2.0
    return 2.0 * math.log2(n / 2) / math.log2(1.0 + c) + 2.0


@dataclass(frozen=True)
class HorizonProfile:
    """BFS layer profile of one vertex.

    ``circles[k]`` counts vertices at distance exactly k, ``disks[k]``
    at distance at most k, and ``rho`` is the last radius whose disk
    still covers at most half the graph.
    """

    v: int
    rho: int
    circles: tuple[int, ...]
    disks: tuple[int, ...]


def horizon_profile(g: ArchGraph, v: int, c=None) -> HorizonProfile:
    """Layer sizes and horizon of ``v``; with ``c`` given, checks the
    growth inequality |C(v,k)| >= c*|D(v,k-1)| for k <= rho+1."""
    n = g.n
    if n < 2:
        raise ValueError("horizon needs at least two vertices")
    dist = bfs_distances(g, v)
    ecc = max(dist)
    circles = [0] * (ecc + 1)
    for d in dist:
        circles[d] += 1
    disks = []
    run = 0
    for k in circles:
        run += k
        disks.append(run)
    rho = max(k for k in range(ecc + 1) if disks[k] <= n / 2)
    if c is not None:
        c = Fraction(c)
        for k in range(1, rho + 2):
            if Fraction(circles[k]) < c * disks[k - 1]:
                raise ValueError(
                    f"layer {k} of vertex {v} violates the expansion "
                    f"growth inequality")
    return HorizonProfile(v, rho, tuple(circles), tuple(disks))


def spectral(g: ArchGraph) -> tuple[float, Fraction, float]:
    """(lambda2, degree ratio, figure of merit d*·log2(N)^2/lambda2^2).

    lambda2 is the second-smallest Laplacian eigenvalue, from a dense
    symmetric eigensolver.
    """
    n = g.n
    if n < 2:
        raise ValueError("spectral quantities need at least two vertices")
    lap = np.zeros((n, n))
    for u, v in g.edges:
        lap[u, v] = lap[v, u] = -1.0
        lap[u, u] += 1.0
        lap[v, v] += 1.0
    eig = np.linalg.eigvalsh(lap)
    lam2 = float(eig[1])
    degs = [g.degree(v) for v in range(n)]
    dstar = Fraction(max(degs), min(degs))
    figure = float(dstar) * math.log2(n) ** 2 / lam2 ** 2
    return lam2, dstar, figure


@dataclass(frozen=True)
class AdvantageBounds:
    """Up-to-constant ceilings on the swap-vs-transfer depth ratio."""

    linear: float        # N * c
    sqrt_log: float      # sqrt(N) + log2(N) / c
    minimum: float

    def as_dict(self) -> dict:
        return {"linear": self.linear, "sqrt_log": self.sqrt_log,
                "minimum": self.minimum}


def advantage_upper_bounds(g: ArchGraph, c=None) -> AdvantageBounds:
    """Two ceilings on the achievable routing advantage and their min.

    Uses exact expansion when feasible, otherwise the upper end of
    vertex_expansion_bounds (a larger c weakens neither figure's
    validity as an up-to-constant ceiling).
    """
    n = g.n
    if c is None:
        if n <= EXACT_EXPANSION_MAX_N:
            c, _ = vertex_expansion_exact(g)
        else:
            c = vertex_expansion_bounds(g)[1]
    c = float(c)
    linear = n * c
    sqrt_log = math.sqrt(n) + (math.log2(n) / c if n > 1 else 0.0)
    return AdvantageBounds(linear, sqrt_log, min(linear, sqrt_log))


@dataclass(frozen=True)
class BoundsReport:
    """Everything the bound calculators know about one graph."""

    n: int
    c_lower: Fraction
    c_upper: Fraction
    exact: bool
    witness_cut: tuple[int, ...] | None
    diam: int
    iso_lb: int
    diam_lb: int
    lambda2: float
    degree_ratio: Fraction
    expander_figure: float

    def to_dict(self) -> dict:
        def rat(x: Fraction) -> dict:
            return {"num": x.numerator, "den": x.denominator}

        doc = {
            "n": self.n,
            "exact": self.exact,
            "witness_cut": list(self.witness_cut) if self.witness_cut else None,
            "diam": self.diam,
            "iso_lb": self.iso_lb,
            "diam_lb": self.diam_lb,
            "lambda2": self.lambda2,
            "degree_ratio": rat(self.degree_ratio),
            "expander_figure": self.expander_figure,
        }
        if self.exact:
            doc["c"] = rat(self.c_lower)
        else:
            doc["c"] = {"lower": rat(self.c_lower), "upper": rat(self.c_upper)}
        return doc


def bounds_report(g: ArchGraph) -> BoundsReport:
    """Assemble expansion, lower bounds, and spectral figures for ``g``.

    Expansion is exact up to 24 vertices; beyond that an interval with
    any family witness cut.  iso_lb uses the upper end of the interval,
    which keeps it a valid routing-time lower bound.
    """
    if g.n <= EXACT_EXPANSION_MAX_N:
        c, witness = vertex_expansion_exact(g)
        lo = hi = c
        exact = True
    else:
        lo, hi = vertex_expansion_bounds(g)
        witness = family_witness_cut(g)
        witness = tuple(sorted(witness)) if witness else None
        exact = False
    d = diameter(g)
    lam2, dstar, figure = spectral(g)
    return BoundsReport(
        n=g.n,
        c_lower=lo,
        c_upper=hi,
        exact=exact,
        witness_cut=witness,
        diam=d,
        iso_lb=iso_lower_bound(hi),
        diam_lb=d,
        lambda2=lam2,
        degree_ratio=dstar,
        expander_figure=figure,
    )
