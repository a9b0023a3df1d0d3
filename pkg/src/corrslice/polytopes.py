"""Correlation and transportation polytopes of a graph, and their slices.

The correlation polytope L(G) is the convex hull of the 2^n deterministic
0/1 assignments lifted to vertex+edge coordinates; the transportation body
N(G) relaxes it to per-edge transportation intervals.  Fixing the vertex
marginals ``p`` slices both down to the edge-coordinate space, where their
volume ratio is the quantity of interest.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import geometry as geo
from .geometry import LinearSystem, PointList, UnsupportedSizeError
from .graphs import Graph

COMPAT_MAX_N = 20

COMPATIBLE = "compatible"
INCOMPATIBLE = "incompatible"
NOT_NON_SIGNALING = "not-even-non-signaling"


class InvalidMarginalError(ValueError):
    """A vertex marginal lies outside [0, 1]."""


class UseSymmetryError(ValueError):
    """Scaled slices are defined for 0 < t <= 1/2; map t to 1-t first."""


class DegenerateSliceError(ValueError):
    """Some edge interval of the slice collapses to a point."""


@dataclass(frozen=True)
class MarginalSpec:
    """Fixed vertex marginals p for a graph's slice."""

    graph: Graph
    p: tuple[Fraction, ...]

    def __post_init__(self):
        p = tuple(Fraction(x) for x in self.p)
        if len(p) != self.graph.n:
            raise InvalidMarginalError("marginal vector length != vertex count")
        if any(x < 0 or x > 1 for x in p):
            raise InvalidMarginalError("marginals must lie in [0, 1]")
        object.__setattr__(self, "p", p)

    @classmethod
    def symmetric(cls, graph: Graph, t) -> "MarginalSpec":
        t = Fraction(t)
        return cls(graph, (t,) * graph.n)

    @property
    def is_symmetric(self) -> bool:
        return len(set(self.p)) == 1


@dataclass(frozen=True)
class EdgeAssignment:
    """Joint probabilities q_e = P(both endpoints are 1), one per edge."""

    graph: Graph
    q: tuple[Fraction, ...]

    def __post_init__(self):
        q = tuple(Fraction(x) for x in self.q)
        if len(q) != self.graph.m:
            raise ValueError("edge assignment length != edge count")
        object.__setattr__(self, "q", q)


def coordinate_names(g: Graph) -> tuple[str, ...]:
    return tuple(f"p{i}" for i in range(g.n)) + tuple(
        f"q{i}_{j}" for i, j in g.edges
    )


def edge_names(g: Graph) -> tuple[str, ...]:
    return tuple(f"q{i}_{j}" for i, j in g.edges)


def cor_vertices(g: Graph) -> PointList:
    """The 2^n deterministic assignments lifted to (p, q) coordinates."""
    if g.n > COMPAT_MAX_N:
        raise UnsupportedSizeError(f"2^{g.n} assignments is beyond the supported size")
    pts = []
    for f in product((0, 1), repeat=g.n):
        pts.append(
            tuple(Fraction(x) for x in f)
            + tuple(Fraction(f[i] * f[j]) for i, j in g.edges)
        )
    return PointList(g.n + g.m, tuple(pts))


_COR_HREP_CACHE: dict[Graph, LinearSystem] = {}
_COR_HREP_LOCK = threading.Lock()


def cor_hrep(g: Graph) -> LinearSystem:
    """Irredundant H-representation of the correlation polytope (cached)."""
    cached = _COR_HREP_CACHE.get(g)
    if cached is not None:
        return cached
    if g.n + g.m > 16:
        raise UnsupportedSizeError(
            f"exact facet enumeration in {g.n + g.m} dimensions is unsupported"
        )
    system = geo.vrep_to_hrep(cor_vertices(g), coordinate_names(g))
    if any(c < 0 for _, c in system.rows):
        raise AssertionError("correlation polytope must contain the origin")
    with _COR_HREP_LOCK:
        _COR_HREP_CACHE.setdefault(g, system)
    return system


def tra_hrep(g: Graph) -> LinearSystem:
    """Transportation body: per-edge transportation intervals plus box bounds."""
    names = coordinate_names(g)
    d = g.n + g.m
    zero = (Fraction(0),) * d
    rows = []

    def row(entries: dict[int, Fraction], c) -> None:
        a = list(zero)
        for k, v in entries.items():
            a[k] = Fraction(v)
        rows.append((tuple(a), Fraction(c)))

    for k, (i, j) in enumerate(g.edges):
        e = g.n + k
        row({e: -1}, 0)
        row({e: 1, i: -1}, 0)
        row({e: 1, j: -1}, 0)
        row({i: 1, j: 1, e: -1}, 1)
    for i in range(g.n):
        row({i: 1}, 1)
        row({i: -1}, 0)
    return LinearSystem(names, tuple(rows))


def _substitute_p(system: LinearSystem, g: Graph, p: Sequence[Fraction]) -> LinearSystem:
    """Fix the vertex block to p; result lives on the edge coordinates."""
    rows = []
    for a, c in system.rows:
        const = sum(a[i] * p[i] for i in range(g.n))
        rows.append((a[g.n :], c - const))
    return LinearSystem(edge_names(g), tuple(rows))


def n_slice(g: Graph, spec: MarginalSpec) -> LinearSystem:
    """Transportation slice: a box with per-edge transportation intervals."""
    names = edge_names(g)
    rows = []
    for k, (i, j) in enumerate(g.edges):
        lo = max(Fraction(0), spec.p[i] + spec.p[j] - 1)
        hi = min(spec.p[i], spec.p[j])
        a = [Fraction(0)] * g.m
        a[k] = Fraction(1)
        rows.append((tuple(a), hi))
        rows.append((tuple(-x for x in a), -lo))
    return LinearSystem(names, tuple(rows))


def n_slice_box(g: Graph, spec: MarginalSpec) -> list[tuple[Fraction, Fraction]]:
    out = []
    for i, j in g.edges:
        lo = max(Fraction(0), spec.p[i] + spec.p[j] - 1)
        hi = min(spec.p[i], spec.p[j])
        out.append((lo, hi))
    return out


def l_slice(g: Graph, spec: MarginalSpec) -> LinearSystem:
    """Correlation slice: substitute p into cor_hrep and prune redundancy."""
    return geo.remove_redundant(_substitute_p(cor_hrep(g), g, spec.p))


def scaled_slices(g: Graph, t) -> tuple[LinearSystem, LinearSystem]:
    """Slices at symmetric marginals t after the substitution q = t*x.

    The scaled transportation slice is the unit box, so the volume of the
    scaled correlation slice IS the volume ratio.  Only 0 < t <= 1/2 is
    served directly; larger t maps isometrically to 1-t.
    """
    t = Fraction(t)
    if not 0 < t <= Fraction(1, 2):
        raise UseSymmetryError(
            f"t={t} outside (0, 1/2]; use the bit-flip symmetry to reach 1-t"
        )
    names = edge_names(g)
    box_rows = []
    for k in range(g.m):
        a = [Fraction(0)] * g.m
        a[k] = Fraction(1)
        box_rows.append((tuple(a), Fraction(1)))
        box_rows.append((tuple(-x for x in a), Fraction(0)))
    n_scaled = LinearSystem(names, tuple(box_rows))

    rows = list(box_rows)
    for a, c in cor_hrep(g).rows:
        const = sum(a[i] for i in range(g.n)) * t
        w = a[g.n :]
        if not any(w):
            continue
        rows.append((w, (c - const) / t))
    l_scaled = geo.remove_redundant(LinearSystem(names, tuple(rows)))
    return l_scaled, n_scaled


def compatibility_status(g: Graph, spec: MarginalSpec, q: EdgeAssignment) -> str:
    """Classify an edge assignment: compatible / incompatible / outside N."""
    if g.n > COMPAT_MAX_N:
        raise UnsupportedSizeError(f"compatibility LP unsupported for n > {COMPAT_MAX_N}")
    for (lo, hi), val in zip(n_slice_box(g, spec), q.q):
        if not lo <= val <= hi:
            return NOT_NON_SIGNALING
    # feasibility of: lambda >= 0, sum lambda = 1, sum lambda * u_f = (p, q)
    verts = cor_vertices(g).points
    ncols = len(verts)
    target = tuple(spec.p) + tuple(q.q)
    eqs = [(tuple(Fraction(1) for _ in range(ncols)), Fraction(1))]
    for coord in range(g.n + g.m):
        eqs.append((tuple(v[coord] for v in verts), target[coord]))
    rows = []
    for k in range(ncols):
        a = [Fraction(0)] * ncols
        a[k] = Fraction(-1)
        rows.append((tuple(a), Fraction(0)))
    system = LinearSystem(
        tuple(f"l{k}" for k in range(ncols)), tuple(rows), tuple(eqs)
    )
    res = geo.lp(system, [0] * ncols)
    return COMPATIBLE if res.status == "optimal" else INCOMPATIBLE


def is_compatible(g: Graph, spec: MarginalSpec, q: EdgeAssignment) -> bool:
    """True iff the pairwise marginals extend to a joint distribution."""
    return compatibility_status(g, spec, q) == COMPATIBLE
