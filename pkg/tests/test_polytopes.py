"""Unit tests for correlation/transportation polytopes and their slices."""

import random
from fractions import Fraction as F

import pytest

from corrslice import geometry as geo
from corrslice.graphs import complete, complete_bipartite, cycle, named, path
from corrslice.polytopes import (
    COMPATIBLE,
    INCOMPATIBLE,
    NOT_NON_SIGNALING,
    DegenerateSliceError,
    EdgeAssignment,
    MarginalSpec,
    UseSymmetryError,
    compatibility_status,
    cor_hrep,
    cor_vertices,
    coordinate_names,
    is_compatible,
    l_slice,
    n_slice,
    n_slice_box,
    scaled_slices,
    tra_hrep,
)

K3 = complete(3)
K22 = complete_bipartite(2, 2)


def test_cor_vertices_k3_matches_truth_table():
    pts = set(cor_vertices(K3).points)
    assert len(pts) == 8
    # spot-check rows of the lifted truth table: (p0,p1,p2,q01,q02,q12)
    assert tuple(map(F, (1, 1, 0, 1, 0, 0))) in pts
    assert tuple(map(F, (1, 1, 1, 1, 1, 1))) in pts
    assert tuple(map(F, (0, 1, 1, 0, 0, 1))) in pts


def test_cor_vertices_single_edge():
    g = path(2)
    assert set(cor_vertices(g).points) == {
        (F(0), F(0), F(0)),
        (F(0), F(1), F(0)),
        (F(1), F(0), F(0)),
        (F(1), F(1), F(1)),
    }


def test_cor_vertices_k22_count():
    assert len(cor_vertices(K22)) == 16


def test_cor_hrep_k3_has_16_facets():
    assert len(cor_hrep(K3).rows) == 16


def test_cor_hrep_tree_equals_transportation():
    g = path(3)
    assert geo.normalized_rows(cor_hrep(g)) == geo.normalized_rows(
        geo.remove_redundant(tra_hrep(g))
    )


def test_cor_hrep_constants_nonnegative():
    for name in ("K4", "K22", "C5", "house"):
        assert all(c >= 0 for _, c in cor_hrep(named(name).graph).rows)


def test_tra_hrep_row_count():
    sys_ = tra_hrep(K3)
    assert len(sys_.rows) == 4 * 3 + 2 * 3
    single = tra_hrep(path(1) if False else __import__("corrslice").Graph(1, ()))
    assert len(single.rows) == 2  # 0 <= p0 <= 1


def test_cor_subset_of_tra():
    for name in ("K4-e", "K22"):
        g = named(name).graph
        tra = tra_hrep(g)
        assert all(tra.contains(v) for v in cor_vertices(g).points)


def test_n_slice_box_formulas():
    g = path(2)
    spec = MarginalSpec(g, (F(1, 4), F(3, 4)))
    assert n_slice_box(g, spec) == [(F(0), F(1, 4))]
    spec2 = MarginalSpec(g, (F(3, 4), F(3, 4)))
    assert n_slice_box(g, spec2) == [(F(1, 2), F(3, 4))]


def test_n_slice_k3_symmetric_is_box():
    spec = MarginalSpec.symmetric(K3, F(1, 3))
    assert n_slice_box(K3, spec) == [(F(0), F(1, 3))] * 3


def test_l_slice_k3_symmetric_rows():
    # at p=(t,t,t) the slice is cut by sum >= 3t-1 and the three +/- rows
    spec = MarginalSpec.symmetric(K3, F(2, 5))
    sl = l_slice(K3, spec)
    norm = geo.normalized_rows(sl)
    # q01+q02+q12 >= 3t-1 = 1/5  ->  -5q01 -5q02 -5q12 <= -1 after clearing denominators
    assert ("<=", -5, -5, -5, -1) in norm
    assert ("<=", 5, 5, -5, 2) in norm  # q01 + q02 - q12 <= 2/5


def test_l_slice_rejects_bad_marginals():
    with pytest.raises(ValueError):
        MarginalSpec(K3, (F(1, 2), F(1, 2), F(3, 2)))


def test_l_slice_equals_n_slice_on_trees():
    rng = random.Random(3)
    for g in (path(3), path(4)):
        p = tuple(F(rng.randrange(1, 5), 5) for _ in range(g.n))
        spec = MarginalSpec(g, p)
        left = geo.normalized_rows(l_slice(g, spec))
        right = geo.normalized_rows(geo.remove_redundant(n_slice(g, spec)))
        assert left == right


def test_forest_equality_fails_on_cycles():
    spec = MarginalSpec.symmetric(K3, F(1, 2))
    ls, ns = l_slice(K3, spec), n_slice(K3, spec)
    l_verts = geo.hrep_to_vrep(ls).points
    n_verts = geo.hrep_to_vrep(ns).points
    assert all(ns.contains(v) for v in l_verts)  # inclusion
    assert not all(ls.contains(v) for v in n_verts)  # strictness


def test_scaled_slices_k3():
    lt, nt = scaled_slices(K3, F(1, 4))
    assert geo.volume(nt).value == 1
    verts = set(geo.hrep_to_vrep(lt).points)
    e = lambda *xs: tuple(map(F, xs))
    assert verts == {e(0, 0, 0), e(1, 0, 0), e(0, 1, 0), e(0, 0, 1), e(1, 1, 1)}


def test_scaled_slices_scaling_law():
    t = F(2, 5)
    lt, _ = scaled_slices(K3, t)
    spec = MarginalSpec.symmetric(K3, t)
    assert geo.volume(lt).value * t**3 == geo.volume(l_slice(K3, spec)).value


def test_scaled_slices_domain():
    with pytest.raises(UseSymmetryError):
        scaled_slices(K3, F(3, 4))
    with pytest.raises(UseSymmetryError):
        scaled_slices(K3, F(0))


def test_scaled_slice_k22_demicube_at_half():
    lt, _ = scaled_slices(K22, F(1, 2))
    verts = set(geo.hrep_to_vrep(lt).points)
    demicube = {
        tuple(map(F, bits))
        for bits in __import__("itertools").product((0, 1), repeat=4)
        if sum(bits) % 2 == 0
    }
    assert verts == demicube


def test_compatibility_frustrated_triangle():
    spec = MarginalSpec.symmetric(K3, F(1, 2))
    q = EdgeAssignment(K3, (F(0), F(0), F(0)))
    assert compatibility_status(K3, spec, q) == INCOMPATIBLE
    assert not is_compatible(K3, spec, q)


def test_compatibility_independent_point_on_catalog():
    from corrslice.graphs import catalog_names

    for name in catalog_names():
        ng = named(name)
        if ng.graph.m > 8:
            continue
        t = F(1, 3)
        spec = MarginalSpec.symmetric(ng.graph, t)
        q = EdgeAssignment(ng.graph, tuple(t * t for _ in range(ng.graph.m)))
        assert is_compatible(ng.graph, spec, q), name


def test_compatibility_outside_box():
    spec = MarginalSpec.symmetric(K3, F(1, 4))
    q = EdgeAssignment(K3, (F(1, 2), F(0), F(0)))
    assert compatibility_status(K3, spec, q) == NOT_NON_SIGNALING


def test_compatibility_trees_accept_everything():
    rng = random.Random(7)
    g = path(4)
    spec = MarginalSpec(g, (F(1, 3), F(1, 2), F(2, 3), F(1, 4)))
    box = n_slice_box(g, spec)
    for _ in range(25):
        q = EdgeAssignment(
            g,
            tuple(
                lo + (hi - lo) * F(rng.randrange(0, 11), 10) for lo, hi in box
            ),
        )
        assert is_compatible(g, spec, q)


def test_compatibility_agrees_with_slice_membership():
    rng = random.Random(41)
    for gname in ("K3", "K22", "pan"):
        g = named(gname).graph if gname != "K3" else K3
        spec = MarginalSpec.symmetric(g, F(2, 5))
        sl = l_slice(g, spec)
        box = n_slice_box(g, spec)
        for _ in range(40):
            q = tuple(
                lo + (hi - lo) * F(rng.randrange(0, 17), 16) for lo, hi in box
            )
            lp_ok = is_compatible(g, spec, EdgeAssignment(g, q))
            assert lp_ok == sl.contains(q)


def test_bitflip_symmetry_of_slice_volumes():
    for t in (F(1, 5), F(2, 5)):
        lo = geo.volume(l_slice(K3, MarginalSpec.symmetric(K3, t))).value
        hi = geo.volume(l_slice(K3, MarginalSpec.symmetric(K3, 1 - t))).value
        assert lo == hi


def test_degenerate_marginals_flagged():
    spec = MarginalSpec.symmetric(K3, F(0))
    from corrslice.analysis import ratio_at

    with pytest.raises(DegenerateSliceError):
        ratio_at(K3, spec)


def test_coordinate_names_order():
    assert coordinate_names(K3) == ("p0", "p1", "p2", "q0_1", "q0_2", "q1_2")
