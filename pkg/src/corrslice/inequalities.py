"""Named inequality families of correlation polytopes.

Generators for the box (transportation) rows, the odd-cycle family that
describes all facets for series-parallel graphs, the m-negative family for
cycle graphs, and the pairwise-truncated inclusion-exclusion family for
complete graphs, plus the exact activation threshold of a row on symmetric
slices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator

from .geometry import Vec, _integerize
from .graphs import Graph, complete, cycle
from .polytopes import coordinate_names, tra_hrep

BOX = "box"
ODD_CYCLE = "odd_cycle"
M_NEGATIVE = "m_negative"
INCLUSION_EXCLUSION = "inclusion_exclusion"


@dataclass(frozen=True, eq=False)
class TaggedInequality:
    """A row a.(p,q) <= c over a graph's coordinates, with family metadata."""

    names: tuple[str, ...]
    a: Vec
    c: Fraction
    family: str
    meta: dict = field(default_factory=dict)

    def normalized(self) -> tuple[int, ...]:
        return _integerize(tuple(self.a) + (self.c,))

    def __str__(self) -> str:
        return format_row(self.names, self.a, self.c)


def format_row(names, a, c) -> str:
    terms = []
    for coef, name in zip(a, names):
        if coef == 0:
            continue
        mag = abs(coef)
        piece = name if mag == 1 else f"{mag}*{name}"
        terms.append(("- " if coef < 0 else "+ " if terms else "") + piece)
    lhs = " ".join(terms) if terms else "0"
    return f"{lhs} <= {c}"


def box_inequalities(g: Graph) -> list[TaggedInequality]:
    """The transportation rows, tagged as the trivial ``box`` family."""
    system = tra_hrep(g)
    return [
        TaggedInequality(system.names, a, c, BOX, {}) for a, c in system.rows
    ]


# ---------------------------------------------------------------------------
# odd-cycle inequalities


def simple_cycles(g: Graph) -> Iterator[tuple[int, ...]]:
    """All simple cycles as canonical vertex tuples.

    A cycle is reported once: rooted at its smallest vertex, with the two
    possible orientations deduplicated by requiring the second vertex to be
    smaller than the last.
    """
    adj = {v: set(g.neighbors(v)) for v in range(g.n)}
    for start in range(g.n):
        stack = [(start, (start,))]
        while stack:
            v, pths = stack.pop()
            for w in sorted(adj[v]):
                if w == start and len(pths) >= 3 and pths[1] < pths[-1]:
                    yield pths
                elif w > start and w not in pths:
                    stack.append((w, pths + (w,)))


def _cycle_edges(cyc: tuple[int, ...]) -> list[tuple[int, int]]:
    out = []
    for k in range(len(cyc)):
        i, j = cyc[k], cyc[(k + 1) % len(cyc)]
        out.append((min(i, j), max(i, j)))
    return out


def odd_cycle_inequalities(g: Graph) -> list[TaggedInequality]:
    """Every (cycle, odd edge subset) inequality of the graph."""
    names = coordinate_names(g)
    d = g.n + g.m
    out = []
    for cyc in simple_cycles(g):
        edges = _cycle_edges(cyc)
        for m in range(1, len(edges) + 1, 2):
            for subset in combinations(range(len(edges)), m):
                in_m = set(subset)
                a = [Fraction(0)] * d
                for k, e in enumerate(edges):
                    a[g.n + g.edge_index(e)] = Fraction(-1 if k in in_m else 1)
                for pos, v in enumerate(cyc):
                    before = (pos - 1) % len(edges)
                    here = pos
                    m_count = (before in in_m) + (here in in_m)
                    if m_count == 2:
                        a[v] = Fraction(1)  # v in S0
                    elif m_count == 0:
                        a[v] = Fraction(-1)  # v in S2
                out.append(
                    TaggedInequality(
                        names,
                        tuple(a),
                        Fraction(m // 2),
                        ODD_CYCLE,
                        {"cycle": cyc, "M": tuple(edges[k] for k in subset)},
                    )
                )
    return out


# ---------------------------------------------------------------------------
# m-negative inequalities for cycle graphs


def m_negative_inequalities(n: int) -> list[TaggedInequality]:
    """The 2^(n-1) noncontextuality rows of the n-cycle in (p, q) form."""
    if n < 3:
        raise ValueError("m-negative inequalities need a cycle, n >= 3")
    g = cycle(n)
    names = coordinate_names(g)
    ring = [(i, (i + 1) % n) for i in range(n)]  # edge k joins k and k+1 mod n
    out = []
    for m in range(1, n + 1, 2):
        for subset in combinations(range(n), m):
            neg = set(subset)
            gamma = [Fraction(-1 if k in neg else 1) for k in range(n)]
            a = [Fraction(0)] * (g.n + g.m)
            for k, (i, j) in enumerate(ring):
                a[g.n + g.edge_index((i, j))] = 4 * gamma[k]
            for v in range(n):
                left, right = (v - 1) % n, v
                a[v] = -2 * (gamma[left] + gamma[right])
            c = Fraction(n - 2) - sum(gamma)
            out.append(
                TaggedInequality(
                    names,
                    tuple(a),
                    c,
                    M_NEGATIVE,
                    {"m": m, "negative_edges": tuple(ring[k] for k in subset)},
                )
            )
    return out


# ---------------------------------------------------------------------------
# inclusion-exclusion inequalities for complete graphs


def inclusion_exclusion_inequalities(n: int) -> list[TaggedInequality]:
    """Pairwise-truncated Boole inequalities of K_n in (p, q) coordinates.

    For an event set I (some of them complemented, the subset T), the
    pairwise truncation S1 - S2 lower-bounds the union probability, so
    S1 - S2 <= 1 is valid for every (I, T).  The companion lower bound
    P(union) >= 0 is exact only when |I| <= 2 (there the truncation IS the
    union probability); for larger I it fails on deterministic assignments
    and is therefore not generated.
    """
    if n < 2:
        raise ValueError("inclusion-exclusion needs n >= 2")
    g = complete(n)
    names = coordinate_names(g)
    d = g.n + g.m
    seen = set()
    out = []

    def emit(a: list[Fraction], c: Fraction, meta: dict) -> None:
        key = _integerize(tuple(a) + (c,))
        if key in seen:
            return
        seen.add(key)
        out.append(TaggedInequality(names, tuple(a), c, INCLUSION_EXCLUSION, meta))

    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            for bsize in range(0, size + 1):
                for t_set in combinations(subset, bsize):
                    tset = set(t_set)
                    pos = [i for i in subset if i not in tset]
                    b = len(tset)
                    a = [Fraction(0)] * d
                    for i in pos:
                        a[i] = Fraction(1 - b)
                    for j in tset:
                        a[j] = Fraction(b - 2)
                    for i, j in combinations(sorted(subset), 2):
                        sign = -1 if ((i in tset) == (j in tset)) else 1
                        a[g.n + g.edge_index((i, j))] = Fraction(sign)
                    c = Fraction(1 - b + b * (b - 1) // 2)
                    meta = {"I": subset, "T": tuple(sorted(tset)), "bound": "upper"}
                    emit(a, c, meta)
                    if size <= 2:
                        low = [-x for x in a]
                        c_low = Fraction(b - b * (b - 1) // 2)
                        emit(low, c_low, {**meta, "bound": "lower"})
    return out


# ---------------------------------------------------------------------------
# activation thresholds on symmetric slices


def activation_threshold(ineq: TaggedInequality) -> Fraction | None:
    """The symmetric-slice parameter t at which the row starts cutting.

    Rows with zero constant are t-independent in scaled coordinates and
    rows whose box maximum never reaches the constant are never active;
    both return None.  Values above 1/2 are reported unclamped.
    """
    return row_activation_threshold(ineq.names, ineq.a, ineq.c)


def row_activation_threshold(names, a, c) -> Fraction | None:
    if c < 0:
        raise ValueError("activation threshold expects a row with c >= 0")
    if c == 0:
        return None
    nverts = sum(1 for name in names if name.startswith("p"))
    denom = sum(a[:nverts]) + sum(x for x in a[nverts:] if x > 0)
    if denom <= 0:
        return None
    return Fraction(c) / denom
