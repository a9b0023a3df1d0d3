"""Exact rational polyhedral kernel.

Conversions between vertex and halfspace representations, redundancy
removal, Fourier-Motzkin projection, an exact simplex LP solver and exact
polytope volume.  Everything runs over arbitrary-precision rationals
(``fractions.Fraction``); no floating point enters any computation here.

The workhorse is an incremental double description method on polyhedral
cones (:func:`_dd_extreme_rays`); both conversion directions reduce to it
via homogenization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd
from typing import Iterable, NamedTuple, Sequence

Vec = tuple[Fraction, ...]
Row = tuple[Vec, Fraction]


class GeometryError(Exception):
    """Base class for errors raised by the polyhedral kernel."""


class UnboundedError(GeometryError):
    """The polyhedron is unbounded where a bounded one was required."""


class InfeasibleError(GeometryError):
    """The inequality system has no solution."""


class UnsupportedSizeError(GeometryError):
    """Instance exceeds the documented size limits of the exact kernel."""


# ---------------------------------------------------------------------------
# rational helpers


def frac(x) -> Fraction:
    """Parse a rational from int, Fraction, "num/den" or exact decimal text."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _vec(values: Iterable) -> Vec:
    return tuple(Fraction(v) for v in values)


def _primitive(v: tuple[int, ...]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g <= 1:
        return v
    return tuple(x // g for x in v)


def _integerize(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector by a positive factor to primitive integers."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    return _primitive(tuple(int(x * den) for x in v))


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class PointList:
    """A finite set of rational points; the convex hull is implied."""

    dim: int
    points: tuple[Vec, ...]

    def __post_init__(self):
        pts = []
        seen = set()
        for p in self.points:
            p = _vec(p)
            if len(p) != self.dim:
                raise ValueError(f"point of length {len(p)} in dim-{self.dim} list")
            if p not in seen:
                seen.add(p)
                pts.append(p)
        object.__setattr__(self, "points", tuple(pts))

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class LinearSystem:
    """Inequalities ``a . y <= c`` plus equalities over named coordinates."""

    names: tuple[str, ...]
    rows: tuple[Row, ...] = ()
    equalities: tuple[Row, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        for attr in ("rows", "equalities"):
            fixed = []
            for a, c in getattr(self, attr):
                a = _vec(a)
                if len(a) != self.dim:
                    raise ValueError(f"row of length {len(a)} in dim-{self.dim} system")
                fixed.append((a, Fraction(c)))
            object.__setattr__(self, attr, tuple(fixed))

    @property
    def dim(self) -> int:
        return len(self.names)

    def contains(self, point: Sequence) -> bool:
        p = _vec(point)
        return all(_dot(a, p) <= c for a, c in self.rows) and all(
            _dot(a, p) == c for a, c in self.equalities
        )

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no coordinate named {name!r}") from None


def normalized_rows(system: LinearSystem) -> frozenset:
    """Rows as primitive-integer tuples, for order/scale-insensitive comparison."""
    out = set()
    for a, c in system.rows:
        out.add(("<=",) + _integerize(tuple(a) + (c,)))
    for a, c in system.equalities:
        v = _integerize(tuple(a) + (c,))
        nz = next((x for x in v if x != 0), 0)
        if nz < 0:
            v = tuple(-x for x in v)
        out.add(("==",) + v)
    return frozenset(out)


# ---------------------------------------------------------------------------
# double description on cones


def _dd_extreme_rays(
    constraints: list[tuple[int, ...]], dim: int
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Lineality basis and extreme rays of the cone {z : m . z >= 0 for all m}.

    Incremental double description with the combinatorial adjacency test;
    constraints are inserted in lexicographic order, which keeps the whole
    computation deterministic.
    """
    cons = sorted({_primitive(m) for m in constraints if any(m)})
    lin: list[tuple[int, ...]] = [
        tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)
    ]
    # each ray is (vector, zeroset bitmask over processed constraint indices)
    rays: list[tuple[tuple[int, ...], int]] = []

    for k, m in enumerate(cons):
        ls = [_dot(m, l) for l in lin]
        hit = next((i for i, s in enumerate(ls) if s != 0), None)
        if hit is not None:
            l0, s0 = lin[hit], ls[hit]
            if s0 < 0:
                l0, s0 = tuple(-x for x in l0), -s0
            lin = [
                _primitive(tuple(s0 * l[j] - s * l0[j] for j in range(dim)))
                for i, (l, s) in enumerate(zip(lin, ls))
                if i != hit
            ]
            adjusted = []
            for r, zs in rays:
                s = _dot(m, r)
                r2 = r if s == 0 else _primitive(
                    tuple(s0 * r[j] - s * l0[j] for j in range(dim))
                )
                adjusted.append((r2, zs | (1 << k)))
            adjusted.append((_primitive(l0), (1 << k) - 1))
            rays = adjusted
            continue

        pos, zero, neg = [], [], []
        for r, zs in rays:
            s = _dot(m, r)
            (pos if s > 0 else neg if s < 0 else zero).append((r, zs, s))
        if not neg:
            rays = [(r, zs) for r, zs, _ in pos] + [
                (r, zs | (1 << k)) for r, zs, _ in zero
            ]
            continue

        new = [(r, zs) for r, zs, _ in pos] + [(r, zs | (1 << k)) for r, zs, _ in zero]
        need = dim - len(lin) - 2
        all_zs = [zs for _, zs, _ in pos + zero + neg]
        for rp, zp, sp in pos:
            for rn, zn, sn in neg:
                w = zp & zn
                if w.bit_count() < need:
                    continue
                if any(zs & w == w and zs not in (zp, zn) for zs in all_zs):
                    continue
                comb = _primitive(tuple(sp * rn[j] - sn * rp[j] for j in range(dim)))
                new.append((comb, w | (1 << k)))
        seen: dict[tuple[int, ...], int] = {}
        for r, zs in new:
            seen[r] = seen.get(r, 0) | zs
        rays = sorted(seen.items())
    return sorted(lin), sorted(r for r, _ in rays)


# ---------------------------------------------------------------------------
# representation conversion


def vrep_to_hrep(points: PointList, names: Sequence[str] | None = None) -> LinearSystem:
    """Irredundant facet system (plus affine-hull equalities) of conv(points)."""
    if len(points) == 0:
        raise ValueError("vrep_to_hrep requires a nonempty point list")
    d = points.dim
    if names is None:
        names = tuple(f"y{i}" for i in range(d))
    cons = [_integerize((Fraction(1),) + p) for p in points.points]
    lin, rays = _dd_extreme_rays(cons, d + 1)
    rows, eqs = [], []
    for y in rays:
        a = tuple(Fraction(-x) for x in y[1:])
        if any(a):
            rows.append((a, Fraction(y[0])))
    for y in lin:
        a = tuple(Fraction(-x) for x in y[1:])
        eqs.append((a, Fraction(y[0])))
    return LinearSystem(tuple(names), tuple(sorted(rows)), tuple(sorted(eqs)))


def hrep_to_vrep(system: LinearSystem) -> PointList:
    """Exact vertex set of a bounded system; empty list when infeasible."""
    d = system.dim
    cons = []
    for a, c in system.rows:
        cons.append(_integerize((c,) + tuple(-x for x in a)))
    for a, c in system.equalities:
        v = _integerize((c,) + tuple(-x for x in a))
        cons.append(v)
        cons.append(tuple(-x for x in v))
    cons.append(tuple([1] + [0] * d))
    lin, rays = _dd_extreme_rays(cons, d + 1)
    verts = [
        tuple(Fraction(x, r[0]) for x in r[1:]) for r in rays if r[0] > 0
    ]
    if not verts:
        return PointList(d, ())
    if lin or any(r[0] == 0 for r in rays):
        raise UnboundedError("system is feasible but unbounded")
    return PointList(d, tuple(sorted(verts)))


# ---------------------------------------------------------------------------
# exact simplex LP


class LpResult(NamedTuple):
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None
    point: Vec | None


def lp(system: LinearSystem, objective: Sequence, sense: str = "max") -> LpResult:
    """Exact rational LP over a LinearSystem, Bland's rule (no cycling)."""
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    obj = _vec(objective)
    if len(obj) != system.dim:
        raise ValueError("objective length does not match system dimension")
    if sense == "min":
        res = lp(system, tuple(-x for x in obj), "max")
        if res.status != "optimal":
            return res
        return LpResult("optimal", -res.value, res.point)

    d = system.dim
    ineqs = list(system.rows)
    eqs = list(system.equalities)
    nslack = len(ineqs)
    ncols = 2 * d + nslack  # u, w (y = u - w), slacks
    tableau: list[list[Fraction]] = []
    for i, (a, c) in enumerate(ineqs + eqs):
        row = [Fraction(0)] * (ncols + 1)
        for j, x in enumerate(a):
            row[j] = x
            row[d + j] = -x
        if i < nslack:
            row[2 * d + i] = Fraction(1)
        row[-1] = c
        if c < 0:
            row = [-x for x in row]
        tableau.append(row)

    m = len(tableau)
    basis = [-1] * m
    art_cols: list[int] = []
    for i in range(m):
        if i < nslack and tableau[i][2 * d + i] == 1:
            basis[i] = 2 * d + i
        else:
            col = ncols + len(art_cols)
            art_cols.append(col)
            for r in range(m):
                tableau[r].insert(-1, Fraction(1) if r == i else Fraction(0))
            basis[i] = col
    width = ncols + len(art_cols)

    def pivot(r: int, c: int) -> None:
        piv = tableau[r][c]
        tableau[r] = [x / piv for x in tableau[r]]
        for i in range(m):
            if i != r and tableau[i][c] != 0:
                f = tableau[i][c]
                tableau[i] = [x - f * y for x, y in zip(tableau[i], tableau[r])]
        basis[r] = c

    def run(costs: list[Fraction]) -> str:
        # maximize costs . columns; Bland's rule on the reduced cost row
        while True:
            red = list(costs)
            off = Fraction(0)
            for i, b in enumerate(basis):
                if costs[b] != 0:
                    f = costs[b]
                    red = [x - f * y for x, y in zip(red, tableau[i][:-1])]
                    off += f * tableau[i][-1]
            enter = next((j for j in range(width) if red[j] > 0), None)
            if enter is None:
                return "optimal"
            leave, best = None, None
            for i in range(m):
                if tableau[i][enter] > 0:
                    ratio = tableau[i][-1] / tableau[i][enter]
                    if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[leave]
                    ):
                        leave, best = i, ratio
            if leave is None:
                return "unbounded"
            pivot(leave, enter)

    if art_cols:
        costs1 = [Fraction(0)] * width
        for c in art_cols:
            costs1[c] = Fraction(-1)
        run(costs1)
        if any(basis[i] in art_cols and tableau[i][-1] != 0 for i in range(m)):
            return LpResult("infeasible", None, None)
        for i in range(m):
            if basis[i] in art_cols:
                col = next(
                    (j for j in range(ncols) if tableau[i][j] != 0), None
                )
                if col is not None:
                    pivot(i, col)
        # rows still carrying a basic artificial are redundant 0 = 0 rows;
        # drop them, then drop the artificial columns so they cannot re-enter
        alive = [i for i in range(m) if basis[i] not in art_cols]
        tableau = [tableau[i][:ncols] + [tableau[i][-1]] for i in alive]
        basis = [basis[i] for i in alive]
        m = len(tableau)
        width = ncols

    costs2 = [Fraction(0)] * width
    for j in range(d):
        costs2[j] = obj[j]
        costs2[d + j] = -obj[j]
    status = run(costs2)
    if status == "unbounded":
        return LpResult("unbounded", None, None)
    xs = [Fraction(0)] * width
    for i, b in enumerate(basis):
        xs[b] = tableau[i][-1]
    point = tuple(xs[j] - xs[d + j] for j in range(d))
    return LpResult("optimal", _dot(obj, point), point)


# ---------------------------------------------------------------------------
# redundancy removal and Fourier-Motzkin elimination


def _dedupe_rows(rows: Iterable[Row]) -> list[Row]:
    seen = set()
    out = []
    for a, c in rows:
        key = _integerize(tuple(a) + (c,))
        if key not in seen:
            seen.add(key)
            out.append((a, c))
    return out


def remove_redundant(system: LinearSystem, method: str = "auto") -> LinearSystem:
    """Minimal subsystem with the identical feasible set.

    For bounded full-dimensional systems a row is irredundant exactly when
    its tight vertex set spans a facet (affine rank dim-1); that criterion
    is used by default because it is far cheaper than one LP per row.  The
    LP characterization (maximizing a row's left side subject to the
    others stays below its constant) remains available via
    ``method="lp"`` and the two are cross-checked in the test suite.
    """
    rows = []
    for a, c in _dedupe_rows(system.rows):
        if not any(a):
            if c < 0:
                raise InfeasibleError("row 0 <= c with negative c")
            continue
        rows.append((a, c))
    cleaned = LinearSystem(system.names, tuple(rows), system.equalities)

    if method == "auto" and not system.equalities:
        try:
            verts = hrep_to_vrep(cleaned).points
        except UnboundedError:
            verts = None
        if verts is not None:
            if not verts:
                raise InfeasibleError("cannot reduce an infeasible system")
            if _affine_rank(verts) == system.dim:
                kept = []
                for a, c in rows:
                    tight = [v for v in verts if _dot(a, v) == c]
                    if tight and _affine_rank(tight) == system.dim - 1:
                        kept.append((a, c))
                return LinearSystem(system.names, tuple(kept), system.equalities)

    probe = lp(cleaned, [0] * system.dim)
    if probe.status == "infeasible":
        raise InfeasibleError("cannot reduce an infeasible system")
    kept = list(rows)
    i = 0
    while i < len(kept):
        a, c = kept[i]
        rest = kept[:i] + kept[i + 1 :]
        res = lp(LinearSystem(system.names, tuple(rest), system.equalities), a)
        if res.status == "optimal" and res.value <= c:
            kept.pop(i)
        else:
            i += 1
    return LinearSystem(system.names, tuple(kept), system.equalities)


def fm_eliminate(system: LinearSystem, name: str) -> LinearSystem:
    """Project the feasible set onto the coordinates other than ``name``."""
    k = system.index(name)
    names = system.names[:k] + system.names[k + 1 :]

    def drop(a: Vec) -> Vec:
        return a[:k] + a[k + 1 :]

    eqs = list(system.equalities)
    rows = list(system.rows)
    pivot_eq = next((e for e in eqs if e[0][k] != 0), None)
    if pivot_eq is not None:
        pa, pc = pivot_eq
        eqs.remove(pivot_eq)

        def subst(row: Row) -> Row:
            a, c = row
            f = a[k] / pa[k]
            return (
                tuple(x - f * y for x, y in zip(a, pa)),
                c - f * pc,
            )

        rows = [subst(r) for r in rows]
        eqs = [subst(e) for e in eqs]
        new_rows = [(drop(a), c) for a, c in rows]
        new_eqs = [(drop(a), c) for a, c in eqs]
    else:
        pos, neg, free = [], [], []
        for a, c in rows:
            (pos if a[k] > 0 else neg if a[k] < 0 else free).append((a, c))
        combined = list(free)
        for ap, cp in pos:
            for an, cn in neg:
                coef_p, coef_n = -an[k], ap[k]
                a = tuple(coef_p * x + coef_n * y for x, y in zip(ap, an))
                combined.append((a, coef_p * cp + coef_n * cn))
        new_rows = [(drop(a), c) for a, c in combined]
        new_eqs = [(drop(a), c) for a, c in eqs]

    new_rows = [r for r in _dedupe_rows(new_rows) if any(r[0]) or r[1] >= 0]
    return remove_redundant(LinearSystem(names, tuple(new_rows), tuple(new_eqs)))


# ---------------------------------------------------------------------------
# exact volume


class VolumeResult(NamedTuple):
    value: Fraction
    full_dim: bool


def _affine_rank(points: Sequence[Vec]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    mat = [list(tuple(x - y for x, y in zip(p, base))) for p in points[1:]]
    rank, rows, cols = 0, len(mat), len(mat[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        for i in range(rows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c] / mat[r][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        r += 1
        rank += 1
        if r == rows:
            break
    return rank


def _int_det(mat: list[list[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    n = len(mat)
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[-1][-1]


def _det(rows: Sequence[Vec]) -> Fraction:
    scale = Fraction(1)
    imat = []
    for row in rows:
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        scale /= den
        imat.append([int(x * den) for x in row])
    return scale * _int_det(imat)


def _triangulate(face: tuple[int, ...], verts: Sequence[Vec], memo: dict) -> list:
    """Pulling triangulation of a face given by vertex indices (sorted)."""
    cached = memo.get(face)
    if cached is not None:
        return cached
    pts = [verts[i] for i in face]
    if len(face) == _affine_rank(pts) + 1:
        memo[face] = [face]
        return [face]
    sub = vrep_to_hrep(PointList(len(pts[0]), tuple(pts)))
    v0 = face[0]
    out = []
    for a, c in sub.rows:
        tight = tuple(i for i in face if _dot(a, verts[i]) == c)
        if v0 in tight:
            continue
        for s in _triangulate(tight, verts, memo):
            out.append((v0,) + s)
    memo[face] = out
    return out


def volume(body: PointList | LinearSystem, anchor: Sequence | None = None) -> VolumeResult:
    """Exact Lebesgue volume; (0, full_dim=False) for lower-dimensional bodies.

    Triangulates the boundary facet by facet (recursive pulling
    triangulation) and sums simplex determinants against an interior
    anchor, by default the vertex barycenter.  Supported comfortably up to
    ~10 dimensions; the largest catalog graphs are expected to take a long
    time.
    """
    if isinstance(body, LinearSystem):
        verts = hrep_to_vrep(body).points
        d = body.dim
    else:
        d = body.dim
        if len(body) == 0:
            return VolumeResult(Fraction(0), False)
        verts = hrep_to_vrep(vrep_to_hrep(body)).points
    if not verts:
        return VolumeResult(Fraction(0), False)
    hull = vrep_to_hrep(PointList(d, verts))
    if hull.equalities:
        return VolumeResult(Fraction(0), False)
    nv = len(verts)
    if anchor is None:
        anchor = tuple(sum(p[j] for p in verts) / nv for j in range(d))
    else:
        anchor = _vec(anchor)
        if not all(_dot(a, anchor) < c for a, c in hull.rows):
            raise ValueError("anchor must be strictly interior")
    memo: dict = {}
    total = Fraction(0)
    for a, c in hull.rows:
        tight = tuple(i for i in range(nv) if _dot(a, verts[i]) == c)
        for s in _triangulate(tight, verts, memo):
            mat = [tuple(x - y for x, y in zip(verts[i], anchor)) for i in s]
            total += abs(_det(mat))
    return VolumeResult(total / factorial(d), True)


# ---------------------------------------------------------------------------
# JSON serialization (rationals as "num/den" strings, row order preserved)


def linear_system_to_json(system: LinearSystem) -> dict:
    return {
        "dim": system.dim,
        "names": list(system.names),
        "rows": [
            {"a": [frac_str(x) for x in a], "c": frac_str(c)} for a, c in system.rows
        ],
        "equalities": [
            {"a": [frac_str(x) for x in a], "c": frac_str(c)}
            for a, c in system.equalities
        ],
    }


def linear_system_from_json(data: dict) -> LinearSystem:
    rows = tuple(
        (tuple(frac(x) for x in r["a"]), frac(r["c"])) for r in data.get("rows", [])
    )
    eqs = tuple(
        (tuple(frac(x) for x in r["a"]), frac(r["c"]))
        for r in data.get("equalities", [])
    )
    return LinearSystem(tuple(data["names"]), rows, eqs)


def point_list_to_json(points: PointList) -> dict:
    return {
        "dim": points.dim,
        "points": [[frac_str(x) for x in p] for p in points.points],
    }


def point_list_from_json(data: dict) -> PointList:
    return PointList(
        data["dim"], tuple(tuple(frac(x) for x in p) for p in data["points"])
    )


def dumps(obj: LinearSystem | PointList, **kw) -> str:
    if isinstance(obj, LinearSystem):
        return json.dumps(linear_system_to_json(obj), **kw)
    return json.dumps(point_list_to_json(obj), **kw)
