"""Graphs, the named-graph catalog, graph surgery and exact treewidth.

Vertices are labeled ``0..n-1``; edges are unordered pairs stored sorted
lexicographically.  The edge order is canonical and defines the order of
edge coordinates everywhere downstream, so it must never be shuffled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import combinations, permutations
from typing import Iterable, Mapping

from .geometry import frac, frac_str

Edge = tuple[int, int]

TREEWIDTH_MAX_N = 12
ISOMORPHISM_MAX_N = 8


class InvalidGluingError(ValueError):
    """The identified vertices do not induce identical subgraphs."""


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph in canonical form."""

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        canon = []
        for e in self.edges:
            i, j = e
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge {e} out of range for n={self.n}")
            canon.append((min(i, j), max(i, j)))
        if len(set(canon)) != len(canon):
            raise ValueError("duplicate edges")
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_index(self, e: Edge) -> int:
        e = (min(e), max(e))
        try:
            return self.edges.index(e)
        except ValueError:
            raise KeyError(f"edge {e} not in graph") from None

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(
            j if i == v else i for i, j in self.edges if v in (i, j)
        )

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        return cls(int(data["n"]), tuple(tuple(e) for e in data["edges"]))


# ---------------------------------------------------------------------------
# constructors


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Graph(n, tuple(combinations(range(n), 2)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)) + ((0, n - 1),))


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def complete_bipartite(m: int, n: int) -> Graph:
    if m < 1 or n < 1:
        raise ValueError("complete bipartite graph needs both parts nonempty")
    return Graph(m + n, tuple((i, m + j) for i in range(m) for j in range(n)))


def construct(kind: str, *params: int) -> Graph:
    makers = {
        "complete": complete,
        "cycle": cycle,
        "path": path,
        "complete_bipartite": complete_bipartite,
    }
    if kind not in makers:
        raise ValueError(f"unknown graph kind {kind!r}")
    return makers[kind](*params)


# ---------------------------------------------------------------------------
# surgery


def remove_edge(g: Graph, e: Edge) -> Graph:
    e = (min(e), max(e))
    if e not in g.edges:
        raise KeyError(f"edge {e} not in graph")
    return Graph(g.n, tuple(x for x in g.edges if x != e))


def glue(g1: Graph, g2: Graph, identification: Mapping[int, int]) -> Graph:
    """Merge g2 into g1, identifying some of g2's vertices with g1's.

    The identified vertices must induce identical subgraphs on both sides.
    Unidentified g2 vertices are relabeled onto fresh labels after g1's.
    """
    ident = dict(identification)
    for v, w in ident.items():
        if not (0 <= v < g2.n) or not (0 <= w < g1.n):
            raise InvalidGluingError(f"identification {v}->{w} out of range")
    if len(set(ident.values())) != len(ident):
        raise InvalidGluingError("identification is not injective")
    e1 = set(g1.edges)
    for u, v in combinations(sorted(ident), 2):
        in_g2 = (min(u, v), max(u, v)) in set(g2.edges)
        iu, iv = ident[u], ident[v]
        in_g1 = (min(iu, iv), max(iu, iv)) in e1
        if in_g1 != in_g2:
            raise InvalidGluingError(
                "identified vertices induce different subgraphs"
            )
    relabel = dict(ident)
    nxt = g1.n
    for v in range(g2.n):
        if v not in relabel:
            relabel[v] = nxt
            nxt += 1
    edges = set(g1.edges)
    for i, j in g2.edges:
        a, b = relabel[i], relabel[j]
        edges.add((min(a, b), max(a, b)))
    return Graph(nxt, tuple(sorted(edges)))


# ---------------------------------------------------------------------------
# exact treewidth (dynamic programming over vertex subsets)


def treewidth(g: Graph) -> int:
    """Exact treewidth via the subset DP over elimination orderings."""
    n = g.n
    if n > TREEWIDTH_MAX_N:
        raise ValueError(f"exact treewidth supported only for n <= {TREEWIDTH_MAX_N}")
    adj = [0] * n
    for i, j in g.edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i

    def back_degree(v: int, eliminated: int) -> int:
        # vertices outside `eliminated` reachable from v through eliminated ones
        seen = 1 << v
        stack = [v]
        reach = 0
        while stack:
            u = stack.pop()
            nbrs = adj[u] & ~seen
            reach |= nbrs & ~eliminated
            inner = nbrs & eliminated
            seen |= nbrs
            while inner:
                w = (inner & -inner).bit_length() - 1
                stack.append(w)
                inner &= inner - 1
        return reach.bit_count()

    full = (1 << n) - 1
    dp = [n] * (1 << n)
    dp[0] = 0
    for s in range(1, 1 << n):
        best = n
        rest = s
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            prev = s & ~(1 << v)
            if dp[prev] < best:
                cand = max(dp[prev], back_degree(v, prev))
                if cand < best:
                    best = cand
        dp[s] = best
    return dp[full]


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Brute-force isomorphism test, intended only for catalog validation."""
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if g1.n > ISOMORPHISM_MAX_N:
        raise ValueError(f"isomorphism test supported only for n <= {ISOMORPHISM_MAX_N}")
    if sorted(g1.degree(v) for v in range(g1.n)) != sorted(
        g2.degree(v) for v in range(g2.n)
    ):
        return False
    e2 = set(g2.edges)
    for perm in permutations(range(g1.n)):
        if all(
            (min(perm[i], perm[j]), max(perm[i], perm[j])) in e2
            for i, j in g1.edges
        ):
            return True
    return False


def is_forest(g: Graph) -> bool:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in g.edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


# ---------------------------------------------------------------------------
# named-graph catalog


@dataclass(frozen=True)
class NamedGraph:
    name: str
    graph: Graph
    expected_treewidth: int | None = None
    expected_tau: Fraction | None = None
    expected_rho0: Fraction | None = None
    expected_rho_half: Fraction | None = None
    name_ambiguous: bool = False
    slow: bool = False


_CATALOG: dict[str, NamedGraph] | None = None


def _load_catalog() -> dict[str, NamedGraph]:
    global _CATALOG
    if _CATALOG is None:
        text = resources.files("corrslice").joinpath("data/catalog.json").read_text()
        entries = {}
        for rec in json.loads(text):
            entries[rec["name"]] = NamedGraph(
                name=rec["name"],
                graph=Graph(rec["n"], tuple(tuple(e) for e in rec["edges"])),
                expected_treewidth=rec.get("treewidth"),
                expected_tau=frac(rec["tau"]) if rec.get("tau") else None,
                expected_rho0=frac(rec["rho0"]) if rec.get("rho0") else None,
                expected_rho_half=frac(rec["rho_half"]) if rec.get("rho_half") else None,
                name_ambiguous=rec.get("name_ambiguous", False),
                slow=rec.get("slow", False),
            )
        _CATALOG = entries
    return _CATALOG


def catalog_names() -> tuple[str, ...]:
    return tuple(_load_catalog())


def named(name: str) -> NamedGraph:
    cat = _load_catalog()
    if name not in cat:
        raise KeyError(f"unknown catalog graph {name!r}; known: {', '.join(cat)}")
    return cat[name]


def save_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        json.dump(g.to_json(), fh)


def load_graph(path) -> Graph:
    with open(path) as fh:
        return Graph.from_json(json.load(fh))
