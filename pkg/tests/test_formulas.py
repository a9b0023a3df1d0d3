"""Closed-form formula tests, including oracle equality with exact geometry."""

from fractions import Fraction as F
from math import factorial

import pytest

from corrslice.formulas import (
    DomainError,
    cn_parameters,
    cn_ratio,
    k22_ratio,
    k3_skewed_ratio,
    k3_symmetric_ratio,
)


def test_k3_symmetric_values():
    assert k3_symmetric_ratio(F(1, 5)) == F(1, 2)
    assert k3_symmetric_ratio(F(1, 3)) == F(1, 2)
    assert k3_symmetric_ratio(F(2, 5)) == F(23, 48)
    assert k3_symmetric_ratio(F(1, 2)) == F(1, 3)
    assert k3_symmetric_ratio(F(3, 5)) == F(23, 48)  # mirrored
    assert k3_symmetric_ratio(F(9, 10)) == F(1, 2)


def test_k3_symmetric_domain():
    for t in (F(0), F(1), F(-1, 2), F(3, 2)):
        with pytest.raises(DomainError):
            k3_symmetric_ratio(t)


def test_k3_skewed_values():
    assert k3_skewed_ratio(F(1, 8)) == F(2, 3)
    assert k3_skewed_ratio(F(1, 5)) == F(2, 3) - F(1, 2) ** 3 / 6
    assert k3_skewed_ratio(F(1, 4)) == F(1, 2)
    assert k3_skewed_ratio(F(1, 3)) == F(3, 4)


def test_k3_skewed_breakpoint_continuity():
    # middle and last pieces agree at t = 1/4; first and middle at t = 1/6
    t = F(1, 4)
    middle = F(2, 3) - (3 - F(1) / (2 * t)) ** 3 / 6
    last = 1 - (F(1) / (2 * t) - 1) / 2
    assert middle == last == k3_skewed_ratio(t)
    t = F(1, 6)
    assert F(2, 3) - (3 - F(1) / (2 * t)) ** 3 / 6 == F(2, 3)


def test_k3_skewed_domain():
    for t in (F(0), F(1, 2), F(2, 3)):
        with pytest.raises(DomainError):
            k3_skewed_ratio(t)


def test_k22_values():
    assert k22_ratio(F(1, 4)) == F(5, 6)
    assert k22_ratio(F(2, 5)) == F(79, 96)
    assert k22_ratio(F(1, 2)) == F(2, 3)
    assert k22_ratio(F(3, 5)) == F(79, 96)
    assert k22_ratio(F(1)) == F(5, 6)


def test_k22_breakpoint_continuity():
    t = F(1, 3)
    assert (5 - (3 - F(1) / t) ** 4) / 6 == F(5, 6) == k22_ratio(t)
    t = F(1, 2)
    assert k22_ratio(t) == (5 - 1) / F(6)


def test_cn_reproduces_k3_and_k22():
    for k in range(1, 31):
        t = F(k, 60)
        assert cn_ratio(3, t) == k3_symmetric_ratio(t)
        assert cn_ratio(4, t) == k22_ratio(t)


def test_cn_known_values():
    assert cn_ratio(5, F(1, 2)) == F(13, 15)
    assert cn_ratio(4, F(1, 2)) == F(2, 3)
    assert cn_ratio(6, F(1, 2)) == 1 - F(2**5, factorial(6))


def test_cn_initial_plateau():
    for n in (3, 4, 5, 6):
        base = 1 - F(1, factorial(n - 1))
        for t in (F(1, 10), F(1, 4), F(1, 3)):
            assert cn_ratio(n, t) == base


def test_cn_non_increasing_on_grid():
    for n in (3, 4, 5):
        vals = [cn_ratio(n, F(k, 48)) for k in range(1, 25)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_cn_parameters():
    assert cn_parameters(3) == (F(1, 3), F(1, 2), F(1, 3))
    assert cn_parameters(5) == (F(1, 3), F(23, 24), F(13, 15))
    # ratios approach 1 monotonically in n
    rh = [cn_parameters(n)[2] for n in range(3, 10)]
    r0 = [cn_parameters(n)[1] for n in range(3, 10)]
    assert all(a < b for a, b in zip(rh, rh[1:]))
    assert all(a < b for a, b in zip(r0, r0[1:]))


def test_cn_domain():
    with pytest.raises(DomainError):
        cn_ratio(2, F(1, 4))
    with pytest.raises(DomainError):
        cn_ratio(4, F(3, 5))


# ---------------------------------------------------------------------------
# oracle equality against exact geometry


def test_formulas_match_exact_geometry_on_sample_grid():
    from corrslice.analysis import symmetric_ratio
    from corrslice.graphs import complete, complete_bipartite, cycle

    grid = (F(1, 4), F(3, 8), F(1, 2))
    for t in grid:
        assert symmetric_ratio(complete(3), t) == k3_symmetric_ratio(t)
        assert symmetric_ratio(complete_bipartite(2, 2), t) == k22_ratio(t)
        assert symmetric_ratio(cycle(5), t) == cn_ratio(5, t)


def test_k3_skewed_matches_exact_geometry():
    from corrslice.analysis import ratio_at
    from corrslice.graphs import complete
    from corrslice.polytopes import MarginalSpec

    g = complete(3)
    for t in (F(1, 8), F(1, 5), F(1, 4), F(1, 3)):
        spec = MarginalSpec(g, (t, t, F(1, 2) - t))
        assert ratio_at(g, spec) == k3_skewed_ratio(t)
