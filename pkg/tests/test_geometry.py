"""Unit tests for the exact polyhedral kernel."""

from fractions import Fraction as F
from itertools import permutations, product

import pytest

from corrslice.geometry import (
    InfeasibleError,
    LinearSystem,
    PointList,
    UnboundedError,
    fm_eliminate,
    frac,
    hrep_to_vrep,
    linear_system_from_json,
    linear_system_to_json,
    lp,
    normalized_rows,
    point_list_from_json,
    point_list_to_json,
    remove_redundant,
    volume,
    vrep_to_hrep,
)


def box(d, hi=1):
    rows = []
    for k in range(d):
        a = [F(0)] * d
        a[k] = F(1)
        rows.append((tuple(a), F(hi)))
        rows.append((tuple(-x for x in a), F(0)))
    return LinearSystem(tuple(f"y{i}" for i in range(d)), tuple(rows))


def simplex_points(d):
    pts = [tuple(F(0) for _ in range(d))]
    for k in range(d):
        p = [F(0)] * d
        p[k] = F(1)
        pts.append(tuple(p))
    return PointList(d, tuple(pts))


def cube_points(d):
    return PointList(d, tuple(tuple(F(b) for b in bits) for bits in product((0, 1), repeat=d)))


# ---------------------------------------------------------------------------
# conversions


def test_square_vrep_to_hrep():
    H = vrep_to_hrep(cube_points(2))
    assert len(H.rows) == 4
    assert not H.equalities
    want = {(-1, 0, 0), (0, -1, 0), (1, 0, 1), (0, 1, 1)}
    got = {tuple(int(x) for x in a) + (int(c),) for a, c in H.rows}
    assert got == want


def test_cube3_hrep_to_vrep():
    V = hrep_to_vrep(box(3))
    assert len(V) == 8
    assert set(V.points) == set(cube_points(3).points)


def test_single_point_is_pure_equality_system():
    H = vrep_to_hrep(PointList(2, ((F(1, 3), F(2, 5)),)))
    assert H.rows == ()
    assert len(H.equalities) == 2
    assert all(sum(a[k] * x for k, x in enumerate((F(1, 3), F(2, 5)))) == c
               for a, c in H.equalities)


def test_round_trip_up_to_dim_5():
    import random

    rng = random.Random(11)
    for d in range(2, 6):
        pts = [
            tuple(F(rng.randrange(-4, 5), rng.randrange(1, 4)) for _ in range(d))
            for _ in range(d + 4)
        ]
        pl = PointList(d, tuple(pts))
        H = vrep_to_hrep(pl)
        if H.equalities:
            continue
        V = hrep_to_vrep(H)
        back = hrep_to_vrep(vrep_to_hrep(V))
        assert set(back.points) == set(V.points)
        assert all(H.contains(p) for p in pl.points)


def test_facet_tightness_counts():
    pl = cube_points(3)
    H = vrep_to_hrep(pl)
    for a, c in H.rows:
        tight = [p for p in pl.points if sum(x * y for x, y in zip(a, p)) == c]
        assert len(tight) >= 3  # affine hull of a 2-face needs 3 points


def test_infeasible_hrep_gives_empty_point_list():
    sys_ = LinearSystem(("y",), (((F(1),), F(0)), ((F(-1),), F(-1))))
    assert hrep_to_vrep(sys_).points == ()


def test_unbounded_hrep_raises():
    sys_ = LinearSystem(("y",), (((F(-1),), F(0)),))
    with pytest.raises(UnboundedError):
        hrep_to_vrep(sys_)


# ---------------------------------------------------------------------------
# LP


def test_lp_box_corner():
    res = lp(box(2), (1, 1))
    assert res.status == "optimal"
    assert res.value == 2
    assert res.point == (F(1), F(1))


def test_lp_min_sense():
    res = lp(box(2), (1, 1), "min")
    assert res.status == "optimal" and res.value == 0


def test_lp_infeasible_and_unbounded():
    bad = LinearSystem(("y",), (((F(1),), F(0)), ((F(-1),), F(-1))))
    assert lp(bad, (1,)).status == "infeasible"
    free = LinearSystem(("y",), (((F(-1),), F(0)),))
    assert lp(free, (1,)).status == "unbounded"


def test_lp_with_equalities():
    sys_ = LinearSystem(
        ("x", "y"),
        (((F(-1), F(0)), F(0)), ((F(0), F(-1)), F(0))),
        equalities=(((F(1), F(1)), F(1)),),
    )
    res = lp(sys_, (1, 0))
    assert res.status == "optimal" and res.value == 1
    assert res.point == (F(1), F(0))


def test_lp_matches_vertex_maximum():
    # independent oracle: LP optimum equals the max over enumerated vertices
    import random

    rng = random.Random(5)
    H = vrep_to_hrep(
        PointList(
            3,
            tuple(
                tuple(F(rng.randrange(-3, 4)) for _ in range(3)) for _ in range(9)
            ),
        )
    )
    verts = hrep_to_vrep(H).points
    for _ in range(5):
        obj = tuple(F(rng.randrange(-3, 4)) for _ in range(3))
        res = lp(H, obj)
        assert res.status == "optimal"
        assert res.value == max(sum(o * x for o, x in zip(obj, v)) for v in verts)


# ---------------------------------------------------------------------------
# redundancy and projection


def test_remove_redundant_simple():
    sys_ = LinearSystem(
        ("y",), (((F(1),), F(1)), ((F(1),), F(2)), ((F(-1),), F(0)))
    )
    red = remove_redundant(sys_)
    assert normalized_rows(red) == normalized_rows(
        LinearSystem(("y",), (((F(1),), F(1)), ((F(-1),), F(0))))
    )


def test_remove_redundant_is_fixed_point_of_vrep_output():
    H = vrep_to_hrep(cube_points(3))
    assert normalized_rows(remove_redundant(H)) == normalized_rows(H)


def test_remove_redundant_infeasible_raises():
    sys_ = LinearSystem(("y",), (((F(1),), F(0)), ((F(-1),), F(-1))))
    with pytest.raises(InfeasibleError):
        remove_redundant(sys_)


def test_fm_eliminate_square():
    H = vrep_to_hrep(cube_points(2))
    proj = fm_eliminate(H, "y1")
    assert proj.names == ("y0",)
    assert normalized_rows(proj) == normalized_rows(
        LinearSystem(("y0",), (((F(1),), F(1)), ((F(-1),), F(0))))
    )


def test_fm_matches_vertex_projection():
    # oracle: projecting vertices and hulling gives the same facet set
    import random

    rng = random.Random(23)
    pts = tuple(
        tuple(F(rng.randrange(-2, 3), rng.randrange(1, 3)) for _ in range(4))
        for _ in range(10)
    )
    pl = PointList(4, pts)
    H = vrep_to_hrep(pl)
    if H.equalities:
        pytest.skip("degenerate random hull")
    proj = fm_eliminate(H, "y2")
    shadow = PointList(3, tuple(p[:2] + p[3:] for p in pts))
    expected = vrep_to_hrep(shadow, names=("y0", "y1", "y3"))
    assert normalized_rows(proj) == normalized_rows(expected)


def test_fm_eliminate_uses_equalities():
    sys_ = LinearSystem(
        ("x", "y"),
        (((F(1), F(0)), F(1)), ((F(-1), F(0)), F(0))),
        equalities=(((F(1), F(-1)), F(0)),),
    )
    proj = fm_eliminate(sys_, "y")
    assert proj.names == ("x",)
    V = hrep_to_vrep(proj)
    assert set(V.points) == {(F(0),), (F(1),)}


# ---------------------------------------------------------------------------
# volume


def test_volume_unit_simplex():
    for d in range(1, 6):
        assert volume(simplex_points(d)) == (F(1, __import__("math").factorial(d)), True)


def test_volume_boxes_and_scaling():
    for d in range(1, 5):
        assert volume(cube_points(d)).value == 1
    # diagonal scaling acts as |det| on a box
    pts = [
        (F(0), F(0)),
        (F(3, 2), F(0)),
        (F(0), F(5, 3)),
        (F(3, 2), F(5, 3)),
    ]
    assert volume(PointList(2, tuple(pts))).value == F(3, 2) * F(5, 3)


def test_volume_coordinate_permutation_invariant():
    pts = simplex_points(4).points + ((F(1), F(1), F(1), F(1)),)
    base = volume(PointList(4, pts)).value
    for perm in list(permutations(range(4)))[1:6]:
        shuffled = PointList(4, tuple(tuple(p[i] for i in perm) for p in pts))
        assert volume(shuffled).value == base


def test_volume_anchor_independent():
    pl = cube_points(3)
    center = (F(1, 2), F(1, 2), F(1, 2))
    off = (F(1, 3), F(2, 5), F(1, 7))
    assert volume(pl, anchor=center).value == volume(pl, anchor=off).value == 1


def test_volume_lower_dimensional_flagged():
    flat = PointList(3, ((F(0), F(0), F(0)), (F(1), F(0), F(0)), (F(0), F(1), F(0))))
    res = volume(flat)
    assert res == (F(0), False)


def test_volume_interior_points_ignored():
    pts = cube_points(2).points + ((F(1, 2), F(1, 2)),)
    assert volume(PointList(2, pts)).value == 1


# ---------------------------------------------------------------------------
# serialization


def test_linear_system_json_round_trip():
    H = vrep_to_hrep(cube_points(2))
    data = linear_system_to_json(H)
    assert data["rows"][0]["c"] in {"0", "1"}
    back = linear_system_from_json(data)
    assert back == H


def test_point_list_json_round_trip():
    pl = PointList(2, ((F(1, 3), F(2)), (F(0), F(-5, 7))))
    back = point_list_from_json(point_list_to_json(pl))
    assert back == pl


def test_frac_parses_decimals_exactly():
    assert frac("0.25") == F(1, 4)
    assert frac("1/3") == F(1, 3)
    assert frac(2) == F(2)
