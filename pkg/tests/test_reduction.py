import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ricci.emd import MpmctInstance, emd_transport, reduced_instance
from ricci.errors import DomainError
from ricci.graph import LocalBipartite, from_edge_list, local_bipartite
from ricci.reduction import pad_to_equal, padded_emd, padding_parameters, realize_as_graph

from conftest import graph_of, random_graph


def star_edge(leaves_u, leaves_v):
    pairs = [("u", "v")] + [("u", f"a{i}") for i in range(leaves_u)] + [("v", f"b{i}") for i in range(leaves_v)]
    return local_bipartite(from_edge_list(pairs), "u", "v")


def test_integral_multiple_has_no_specials():
    p = pad_to_equal(star_edge(0, 2))
    assert (p.a, p.b) == (2, 0)
    assert p.left_expanded == ("u^1", "u^2", "v^1", "v^2")
    assert p.size == 4


def test_remainder_gives_all_three_rows():
    p = pad_to_equal(star_edge(1, 3))
    assert (p.a, p.b) == (1, 2)
    assert p.left_expanded[-2:] == ("r_1", "r_2")
    assert (p.weight[-2:] == 3).all()
    assert p.gap_bound() == Fraction(6, 5)


def test_equal_degrees_is_identity():
    base = local_bipartite(graph_of("a b\nb c\nc d\nd a"), "a", "b")
    p = pad_to_equal(base)
    assert (p.a, p.b) == (1, 0)
    np.testing.assert_array_equal(p.weight, base.weight)
    assert padded_emd(p) == emd_transport(base).value


def test_copy_rows_repeat_base_rows():
    base = star_edge(1, 5)
    p = pad_to_equal(base)
    for k, origin in enumerate(p.origin):
        if origin >= 0:
            np.testing.assert_array_equal(p.weight[k], base.weight[origin])


def test_all_three_base_pads_to_three():
    base = LocalBipartite("x", "y", ("x", "p"), ("y", "q", "r"), np.full((2, 3), 3))
    assert padded_emd(pad_to_equal(base)) == 3


def test_padding_needs_oriented_edge():
    with pytest.raises(DomainError):
        padding_parameters(4, 2)


def test_gap_bound_and_exactness_on_random_edges():
    rng = random.Random(31)
    checked = 0
    for _ in range(80):
        g = random_graph(18, 0.25, rng)
        for u, v in g.edges():
            base = local_bipartite(g, u, v)
            if base.deg_u == base.deg_v:
                continue
            p = pad_to_equal(base)
            emd = emd_transport(base).value
            pe = padded_emd(p)
            assert emd <= pe <= emd + Fraction(3 * p.b, base.deg_v + 1)
            if p.b == 0:
                assert pe == emd
            checked += 1
    assert checked > 100


def test_gap_below_delta_in_covered_regimes():
    rng = random.Random(32)
    for _ in range(60):
        g = random_graph(20, 0.3, rng)
        for u, v in g.edges():
            base = local_bipartite(g, u, v)
            du, dv = base.deg_u, base.deg_v
            gap = padded_emd(pad_to_equal(base)) - emd_transport(base).value
            for delta in (Fraction(1, 5), Fraction(1, 2), Fraction(1)):
                if du <= delta / 3 * dv or du >= (1 - delta / 3) * dv:
                    assert gap <= delta


def test_realize_single_heavy_is_path():
    g, (u, v) = realize_as_graph(MpmctInstance.from_matrix([[3]]))
    assert g.number_of_edges() == 3
    assert sorted(g.degrees().values()) == [1, 1, 2, 2]


def test_realize_single_light_is_square():
    g, _ = realize_as_graph(MpmctInstance.from_matrix([[1]]))
    assert g.number_of_edges() == 4
    assert set(g.degrees().values()) == {2}


def test_realize_all_two_uses_midpoints():
    h = MpmctInstance.from_matrix([[2, 2], [2, 2]])
    g, (u, v) = realize_as_graph(h)
    assert sum(1 for x in g.nodes if x.startswith("x")) == 4
    back = reduced_instance(g, u, v)
    np.testing.assert_array_equal(back.weight, h.weight)


def test_realize_needs_nonempty():
    with pytest.raises(DomainError):
        realize_as_graph(MpmctInstance.from_matrix([]))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8).flatmap(
    lambda n: st.lists(st.lists(st.integers(1, 3), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_realization_round_trip(rows):
    h = MpmctInstance.from_matrix(rows)
    g, (u, v) = realize_as_graph(h)
    back = reduced_instance(g, u, v)
    assert back.left == h.left and back.right == h.right
    np.testing.assert_array_equal(back.weight, h.weight)
