import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csma_bounds import geometry as g
from csma_bounds.geometry import InterferenceSetCover, RadioEnvironment

from conftest import hex_table_enumeration

S3 = math.sqrt(3) / 2


def env_of(d1, d2):
    return RadioEnvironment(d1=d1, d2=d2)


def axis_points(cover):
    return sorted(x for x, y in cover if abs(y) < 1e-12)


def test_environment_invariants():
    with pytest.raises(ValueError):
        RadioEnvironment(d1=6, d2=6)
    with pytest.raises(ValueError):
        RadioEnvironment(eta=1.5)
    with pytest.raises(ValueError):
        RadioEnvironment(p_t=0)
    with pytest.raises(ValueError):
        RadioEnvironment(sigma=-1)


def test_config1_axis_line():
    assert axis_points(g.build_config1(env_of(6, 18))) == [-18, -12, -6, 6, 12, 18]
    assert axis_points(g.build_config1(env_of(6, 6.5))) == [-6, 6]


def test_config1_matches_table_enumeration():
    cover = g.build_config1(env_of(6, 18))
    assert cover.point_set() == hex_table_enumeration(6, 18)
    # frozen from the enumeration oracle
    assert len(cover) == 36


@pytest.mark.parametrize("d2", [6.5, 11.0, 18.0, 25.3, 36.0])
def test_config1_enumeration_other_ratios(d2):
    assert g.build_config1(env_of(6, d2)).point_set() == hex_table_enumeration(6, d2)


def test_config2_is_coordinate_swap():
    e = env_of(6, 18)
    c1, c2 = g.build_config1(e), g.build_config2(e)
    assert c2.point_set() == {(y, x) for x, y in c1.point_set()}


def test_config2_two_closest_nodes():
    c2 = g.build_config2(env_of(6, 18))
    r = c2.distances_to(1.0)
    a, b = c2.nodes[np.argsort(r)[:2]]
    assert math.hypot(*a) == pytest.approx(6)
    assert math.hypot(*b) == pytest.approx(6)
    assert math.hypot(*(a - b)) == pytest.approx(6)


def test_config2_narrow_annulus_vertical_line():
    c2 = g.build_config2(env_of(6, 6.5))
    on_y_axis = sorted(y for x, y in c2 if abs(x) < 1e-12)
    assert on_y_axis == [-6, 6]


def test_intraflow():
    e = env_of(6, 18)
    intra = g.build_intraflow(e)
    assert sorted(x for x, _ in intra) == [-18, -12, -6, 6, 12, 18]
    assert len(intra) == 2 * (math.floor((18 - 6) / 6) + 1)
    assert sorted(x for x, _ in g.build_intraflow(env_of(6, 11))) == [-6, 6]
    l0 = {p for p in g.build_config1(e).point_set() if p[1] == 0}
    assert intra.point_set() == l0


def test_interflow_class1():
    e = env_of(6, 18)
    intra = g.build_intraflow(e)
    assert g.build_interflow_class1(e, 1).point_set() == intra.point_set()
    c3 = g.build_interflow_class1(e, 3)
    extra = c3.point_set() - intra.point_set()
    assert len(extra) == 12
    assert {round(abs(y), 6) for _, y in extra} == {round(6 * S3, 6)}
    c100 = g.build_interflow_class1(e, 100)
    assert c100.meta["lines"] == 6
    assert c100.point_set() == g.build_config1(e).point_set()


def test_interflow_class2():
    e = env_of(6, 18)
    intra = g.build_intraflow(e)
    assert g.build_interflow_class2(e, 1, d=1.0).point_set() == intra.point_set()
    c2 = g.build_interflow_class2(e, 2, d=1.0)
    extra = sorted(c2.point_set() - intra.point_set())
    want = sorted((3.0, round(s * (6 * S3 + 6 * j), 9)) for j in range(3) for s in (1, -1))
    assert extra == want
    assert c2.meta["lines"] == [3.0]


def test_class2_line_order_tracks_receiver():
    e = env_of(6, 18)
    xs = [x for x, _ in g.ordered_flow_lines(e, 1.0)]
    assert xs[0] == 3.0
    assert xs[1] == -3.0
    # past d = 3 the x = 9 line is nearer than x = -3
    assert [x for x, _ in g.ordered_flow_lines(e, 4.0)][1] == 9.0


@pytest.mark.parametrize("builder", [
    g.build_config1, g.build_config2, g.build_intraflow,
    lambda e: g.build_interflow_class1(e, 4),
    lambda e: g.build_interflow_class2(e, 4, 2.0),
])
def test_constructions_self_validate(builder):
    assert g.validate_cover(builder(env_of(6, 18))) == []


def test_validate_cover_reports_violations():
    e = env_of(6, 18)
    close = InterferenceSetCover("Random", [(6, 0), (9, 0)], e)
    problems = g.validate_cover(close)
    assert len(problems) == 1 and "apart" in problems[0]
    inner = InterferenceSetCover("Random", [(3, 0)], e)
    problems = g.validate_cover(inner)
    assert len(problems) == 1 and "radius" in problems[0]


def test_max_interferer_count():
    e = env_of(6, 18)
    assert g.max_interferer_count(e, override=38) == 38
    assert g.max_interferer_count(e) == len(hex_table_enumeration(6, 18)) == 36
    with pytest.raises(ValueError):
        g.max_interferer_count(e, override=0)


def test_max_interferer_count_narrow_annulus():
    # a hexagonal ring of six nodes at radius d1 fits inside [6, 6.5]
    e = env_of(6, 6.5)
    ring = InterferenceSetCover(
        "Random", [(6 * math.cos(a), 6 * math.sin(a)) for a in np.arange(6) * math.pi / 3], e)
    assert g.validate_cover(ring) == []
    assert g.max_interferer_count(e) == 6


def test_chord_length():
    e = env_of(6, 18)
    assert g.chord_length(0, e) == pytest.approx(12.0)
    assert g.chord_length(3, e) == pytest.approx(math.sqrt(315) - math.sqrt(27))
    assert g.chord_length(3, e) == pytest.approx(12.55209, abs=1e-5)
    assert g.chord_length(6 - 1e-12, e) == pytest.approx(math.sqrt(324 - 36), abs=1e-5)
    with pytest.raises(ValueError):
        g.chord_length(6, e)


def test_cover_json_roundtrip():
    e = env_of(6, 18)
    c = g.build_config1(e)
    data = c.to_dict()
    assert set(data) == {"label", "d1", "d2", "nodes"}
    back = InterferenceSetCover.from_json(c.to_json(), e)
    assert back.label == "Config1"
    np.testing.assert_allclose(back.nodes, c.nodes, rtol=1e-8, atol=1e-8)


def test_cover_is_immutable():
    c = g.build_config1(env_of(6, 18))
    with pytest.raises(ValueError):
        c.nodes[0, 0] = 0.0


ratios = st.floats(min_value=1.05, max_value=10.0, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(ratio=ratios, d1=st.floats(min_value=0.5, max_value=50.0))
def test_property_all_covers_valid(ratio, d1):
    e = env_of(d1, d1 * ratio)
    covers = [g.build_config1(e), g.build_config2(e), g.build_intraflow(e),
              g.build_interflow_class1(e, 3), g.build_interflow_class2(e, 3, d1 / 3)]
    for c in covers:
        assert g.validate_cover(c) == [], c.label


@settings(max_examples=60, deadline=None)
@given(ratio=ratios)
def test_property_swap_and_subset(ratio):
    e = env_of(6, 6 * ratio)
    c1, c2 = g.build_config1(e), g.build_config2(e)
    assert c2.point_set() == {(y, x) for x, y in c1.point_set()}
    assert g.build_intraflow(e).point_set() <= c1.point_set()
    assert g.max_interferer_count(e) >= len(g.build_intraflow(e))


@settings(max_examples=40, deadline=None)
@given(ratio=ratios, d=st.floats(min_value=0.1, max_value=5.9))
def test_property_interflow_monotone_and_saturating(ratio, d):
    e = env_of(6, 6 * ratio)
    k = g._n_rows(e)
    n_lines = len(g.vertical_flow_lines(e))
    sizes1 = [len(g.build_interflow_class1(e, m)) for m in range(1, 2 * k + 4)]
    sizes2 = [len(g.build_interflow_class2(e, m, d)) for m in range(1, n_lines + 4)]
    assert all(a <= b for a, b in zip(sizes1, sizes1[1:]))
    assert all(a <= b for a, b in zip(sizes2, sizes2[1:]))
    assert len(set(sizes1[2 * k:])) == 1
    assert len(set(sizes2[n_lines:])) == 1


@settings(max_examples=200, deadline=None)
@given(ratio=ratios, u=st.floats(0, 1, exclude_max=True), v=st.floats(0, 1, exclude_max=True))
def test_property_chord_monotone(ratio, u, v):
    e = env_of(6, 6 * ratio)
    a, b = sorted((6 * u, 6 * v))
    # g'(0) = 0, so offsets closer than this round to the same float
    if b - a > 1e-4:
        assert g.chord_length(a, e) < g.chord_length(b, e)
