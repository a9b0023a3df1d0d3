"""Volume-ratio analysis: curves, fall-off values, Monte Carlo, conjectures.

The fall-off value is computed algebraically from facet activation
thresholds and then cross-validated with exact volume computations: the
ratio must be flat strictly below the threshold and strictly smaller just
above it.  Monte Carlo sampling snaps every sample to an exact dyadic
rational so that membership tests stay exact.
"""

from __future__ import annotations

import hashlib
import threading
from math import gcd
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt

from . import geometry as geo
from .geometry import frac_str
from .graphs import Graph, glue, is_forest, treewidth
from .inequalities import format_row, row_activation_threshold
from .polytopes import (
    DegenerateSliceError,
    MarginalSpec,
    cor_hrep,
    l_slice,
    n_slice_box,
    scaled_slices,
)

HALF = Fraction(1, 2)


class FallOffValidationError(RuntimeError):
    """The threshold-based fall-off disagreed with exact volumes."""


@dataclass(frozen=True)
class RatioReport:
    graph_id: str
    tau: Fraction
    rho0: Fraction
    rho_half: Fraction
    curve: tuple[tuple[Fraction, Fraction | None], ...] = ()
    breakpoints: tuple[tuple[Fraction, tuple[str, ...]], ...] = ()

    def to_json(self) -> dict:
        return {
            "graph": self.graph_id,
            "tau": frac_str(self.tau),
            "rho0": frac_str(self.rho0),
            "rho_half": frac_str(self.rho_half),
            "curve": [
                {"t": frac_str(t), "ratio": None if r is None else frac_str(r)}
                for t, r in self.curve
            ],
            "breakpoints": [
                {"t": frac_str(t), "rows": list(rows)} for t, rows in self.breakpoints
            ],
        }


@dataclass(frozen=True)
class McEstimate:
    hits: int
    samples: int
    estimate: float
    stderr: float
    seed: int

    def to_json(self) -> dict:
        return {
            "hits": self.hits,
            "samples": self.samples,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "seed": self.seed,
        }


# ---------------------------------------------------------------------------
# exact ratios


def ratio_at(g: Graph, spec: MarginalSpec) -> Fraction:
    """vol(L-slice) / vol(N-slice), exact."""
    box = n_slice_box(g, spec)
    if any(lo == hi for lo, hi in box):
        raise DegenerateSliceError(f"slice at p={spec.p} has a collapsed edge interval")
    if spec.is_symmetric:
        t = spec.p[0]
        if t > HALF:
            t = 1 - t
        scaled_l, _ = scaled_slices(g, t)
        vol = geo.volume(scaled_l)
        if not vol.full_dim:
            raise DegenerateSliceError("scaled correlation slice is lower-dimensional")
        return vol.value
    vol_n = Fraction(1)
    for lo, hi in box:
        vol_n *= hi - lo
    vol_l = geo.volume(l_slice(g, spec))
    if not vol_l.full_dim:
        raise DegenerateSliceError("correlation slice is lower-dimensional")
    return vol_l.value / vol_n


_RATIO_CACHE: dict[tuple[Graph, Fraction], Fraction] = {}
_RATIO_LOCK = threading.Lock()


def symmetric_ratio(g: Graph, t) -> Fraction:
    """Exact ratio at symmetric marginals t, memoized per (graph, min(t, 1-t))."""
    t = Fraction(t)
    key = (g, min(t, 1 - t))
    hit = _RATIO_CACHE.get(key)
    if hit is None:
        hit = ratio_at(g, MarginalSpec.symmetric(g, key[1]))
        with _RATIO_LOCK:
            _RATIO_CACHE.setdefault(key, hit)
    return hit


def ratio_curve(
    g: Graph, grid
) -> tuple[tuple[Fraction, Fraction | None], ...]:
    """Exact (t, ratio) pairs over a grid; t and 1-t share one computation."""
    cache: dict[Fraction, Fraction | None] = {}
    out = []
    for raw in grid:
        t = Fraction(raw)
        if not 0 < t < 1:
            raise ValueError(f"grid point {t} outside (0, 1)")
        key = min(t, 1 - t)
        if key not in cache:
            try:
                cache[key] = symmetric_ratio(g, key)
            except DegenerateSliceError:
                cache[key] = None
        out.append((t, cache[key]))
    return tuple(out)


def default_grid(step: int = 60) -> tuple[Fraction, ...]:
    """Multiples of 1/step in (0, 1/2]; symmetry covers the upper half."""
    return tuple(Fraction(k, step) for k in range(1, step // 2 + 1))


# ---------------------------------------------------------------------------
# fall-off


def activation_breakpoints(g: Graph) -> tuple[tuple[Fraction, tuple[str, ...]], ...]:
    """Facet activation thresholds <= 1/2, with the rows that fire there."""
    system = cor_hrep(g)
    mapping: dict[Fraction, list[str]] = {}
    for a, c in system.rows:
        t = row_activation_threshold(system.names, a, c)
        if t is not None and t <= HALF:
            mapping.setdefault(t, []).append(format_row(system.names, a, c))
    return tuple((t, tuple(rows)) for t, rows in sorted(mapping.items()))


def fall_off(g: Graph, validate: bool = True) -> Fraction:
    """Largest t below which the symmetric-slice ratio is constant.

    Computed as the smallest facet activation threshold; with
    ``validate=True`` the value is cross-checked against exact volumes
    (flat at tau/2 vs 3*tau/4, strictly smaller at tau + 1/100).
    """
    points = activation_breakpoints(g)
    tau = points[0][0] if points else HALF
    if validate and tau < HALF:
        flat_a = symmetric_ratio(g, tau / 2)
        flat_b = symmetric_ratio(g, 3 * tau / 4)
        above = min(tau + Fraction(1, 100), (tau + HALF) / 2)
        dropped = symmetric_ratio(g, above)
        if flat_a != flat_b or dropped >= flat_a:
            raise FallOffValidationError(
                f"threshold tau={tau} not confirmed by volumes: "
                f"r({tau/2})={flat_a}, r({3*tau/4})={flat_b}, r({above})={dropped}"
            )
    return tau


def ratio_report(
    g: Graph,
    graph_id: str = "",
    grid=None,
    validate: bool = True,
    include_breakpoints: bool = True,
) -> RatioReport:
    tau = fall_off(g, validate=validate)
    rho0 = symmetric_ratio(g, tau / 2)
    rho_half = symmetric_ratio(g, HALF)
    curve = ratio_curve(g, grid) if grid else ()
    points = activation_breakpoints(g) if include_breakpoints else ()
    return RatioReport(graph_id, tau, rho0, rho_half, curve, points)


# ---------------------------------------------------------------------------
# conjecture and gluing laws


@dataclass(frozen=True)
class ConjectureResult:
    graph_id: str
    treewidth: int
    tau: Fraction
    conjectured_tau: Fraction
    holds: bool

    def to_json(self) -> dict:
        return {
            "graph": self.graph_id,
            "treewidth": self.treewidth,
            "tau": frac_str(self.tau),
            "conjectured_tau": frac_str(self.conjectured_tau),
            "holds": self.holds,
        }


def check_conjecture(g: Graph, graph_id: str = "", validate: bool = True) -> ConjectureResult:
    """Test tau(G) == 1 / (treewidth(G) + 1)."""
    tw = treewidth(g)
    tau = fall_off(g, validate=validate)
    conj = Fraction(1, tw + 1)
    return ConjectureResult(graph_id, tw, tau, conj, tau == conj)


@dataclass(frozen=True)
class GlueReport:
    glued: Graph
    t: Fraction
    ratio_glued: Fraction
    ratio_parts: tuple[Fraction, Fraction]
    product_law_holds: bool
    tau_glued: Fraction
    tau_parts: tuple[Fraction, Fraction]
    tau_law_holds: bool
    tree_invariance_holds: bool | None


def check_glue_laws(
    g1: Graph, g2: Graph, t, v1: int = 0, v2: int = 0, validate: bool = False
) -> GlueReport:
    """Verify the single-vertex gluing laws at symmetric parameter t.

    Checks the exact product law for the volume ratio, the min rule for the
    fall-off, and (when g2 is a forest) invariance of the ratio.
    """
    t = Fraction(t)
    glued = glue(g1, g2, {v2: v1})
    r1 = symmetric_ratio(g1, t)
    r2 = symmetric_ratio(g2, t)
    rg = symmetric_ratio(glued, t)
    tau1, tau2 = fall_off(g1, validate=validate), fall_off(g2, validate=validate)
    taug = fall_off(glued, validate=validate)
    tree_inv = None
    if is_forest(g2):
        tree_inv = rg == r1
    return GlueReport(
        glued=glued,
        t=t,
        ratio_glued=rg,
        ratio_parts=(r1, r2),
        product_law_holds=rg == r1 * r2,
        tau_glued=taug,
        tau_parts=(tau1, tau2),
        tau_law_holds=taug == min(tau1, tau2),
        tree_invariance_holds=tree_inv,
    )


# ---------------------------------------------------------------------------
# Monte Carlo estimation

_U53 = 1 << 53


def _dyadic53(seed: int, index: int, edge: int) -> int:
    payload = f"{seed}:{index}:{edge}".encode()
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], "big") >> 11


def _mc_chunk(args) -> int:
    rows, lo_nums, width_nums, seed, start, stop, nedges = args
    hits = 0
    for idx in range(start, stop):
        q = [
            lo_nums[e] + width_nums[e] * _dyadic53(seed, idx, e)
            for e in range(nedges)
        ]
        ok = True
        for coeffs, bound in rows:
            acc = 0
            for w, qe in zip(coeffs, q):
                if w:
                    acc += w * qe
            if acc > bound:
                ok = False
                break
        if ok:
            hits += 1
    return hits


def monte_carlo_ratio(
    g: Graph, spec: MarginalSpec, samples: int, seed: int, threads: int = 1
) -> McEstimate:
    """Estimate the volume ratio by uniform sampling of the N-slice box.

    Per-edge uniforms are derived counter-style from (seed, sample index,
    edge index) and snapped to dyadics with 53-bit denominators, so results
    are reproducible for a fixed seed under any thread count; membership is
    then an exact integer test against the correlation slice's rows.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    box = n_slice_box(g, spec)
    if any(lo == hi for lo, hi in box):
        raise DegenerateSliceError("sampling box is degenerate")
    den = 1
    for lo, hi in box:
        for x in (lo, hi):
            den = den * x.denominator // gcd(den, x.denominator)
    lo_nums = [int(lo * den) * _U53 for lo, _ in box]
    width_nums = [int((hi - lo) * den) for lo, hi in box]

    slice_rows = l_slice(g, spec)
    rows = []
    for a, c in slice_rows.rows:
        rden = 1
        for x in list(a) + [c]:
            rden = rden * x.denominator // gcd(rden, x.denominator)
        coeffs = tuple(int(x * rden) for x in a)
        bound = int(c * rden) * den * _U53
        rows.append((coeffs, bound))

    nedges = g.m
    if threads <= 1:
        hits = _mc_chunk((rows, lo_nums, width_nums, seed, 0, samples, nedges))
    else:
        bounds = [samples * k // threads for k in range(threads + 1)]
        jobs = [
            (rows, lo_nums, width_nums, seed, bounds[k], bounds[k + 1], nedges)
            for k in range(threads)
            if bounds[k] < bounds[k + 1]
        ]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            hits = sum(pool.map(_mc_chunk, jobs))
    est = hits / samples
    err = sqrt(est * (1 - est) / samples)
    return McEstimate(hits, samples, est, err, seed)
