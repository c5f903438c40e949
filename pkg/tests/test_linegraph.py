import pytest

from scenq import (
    Alternative,
    Concept,
    InvalidBand,
    IntersectionMatrix,
    RenderOptions,
    ScenarioMap,
    export_dot,
    generalized_line_graph,
    intersection_matrix,
    load_document,
    parse_scenario,
    q_classes_threshold,
    threshold_line_graph,
)

from oracles import components_of_edges

# Small four-hyperedge example: EA_1 and EA_2 share a 1-face, EA_1/EA_3 and
# EA_2/EA_3 share single vertices, EA_4 is isolated.
SMALL = ScenarioMap(
    "small",
    tuple(Concept(f"PC_{j}") for j in range(1, 7)),
    (
        Alternative(Concept("EA_1"), frozenset({"PC_1", "PC_2", "PC_3"})),
        Alternative(Concept("EA_2"), frozenset({"PC_2", "PC_3"})),
        Alternative(Concept("EA_3"), frozenset({"PC_3", "PC_5", "PC_6"})),
        Alternative(Concept("EA_4"), frozenset({"PC_4"})),
    ),
)


def _matrix(path) -> IntersectionMatrix:
    source = parse_scenario(load_document(str(path)))
    if isinstance(source, IntersectionMatrix):
        return source
    return intersection_matrix(source)


def test_band_family_on_small_example():
    m = intersection_matrix(SMALL)
    band_00 = generalized_line_graph(m, 0, 0)
    band_11 = generalized_line_graph(m, 1, 1)
    band_01 = generalized_line_graph(m, 0, 1)
    assert band_00.edges == {("EA_1", "EA_3"), ("EA_2", "EA_3")}
    assert band_11.edges == {("EA_1", "EA_2")}
    assert band_01.edges == band_00.edges | band_11.edges
    assert band_01.nodes == ("EA_1", "EA_2", "EA_3", "EA_4")


def test_full_band_equals_plain_line_graph():
    m = intersection_matrix(SMALL)
    assert generalized_line_graph(m, 0, m.max_shared_face).edges == {
        ("EA_1", "EA_2"), ("EA_1", "EA_3"), ("EA_2", "EA_3"),
    }
    assert threshold_line_graph(m, 0).edges == generalized_line_graph(
        m, 0, m.max_shared_face
    ).edges


def test_band_beyond_top_is_edgeless():
    m = intersection_matrix(SMALL)
    top = m.max_shared_face
    g = generalized_line_graph(m, top + 1, top + 1)
    assert g.edges == frozenset()
    assert g.nodes == m.ids


def test_invalid_bands():
    m = intersection_matrix(SMALL)
    with pytest.raises(InvalidBand):
        generalized_line_graph(m, 3, 1)
    with pytest.raises(InvalidBand):
        generalized_line_graph(m, -1, 2)
    with pytest.raises(InvalidBand):
        threshold_line_graph(m, -2)


def test_base_separation_at_min_dim_4(base_path):
    g = threshold_line_graph(_matrix(base_path), 4)
    assert g.edges == {("EA_1", "EA_2"), ("EA_3", "EA_4")}


def test_gmo_components_at_min_dim_2(gmo_csv_path):
    g = threshold_line_graph(_matrix(gmo_csv_path), 2)
    assert components_of_edges(g.nodes, g.edges) == {
        frozenset({"EA_1", "EA_2", "EA_3", "EA_4", "EA_5", "EA_6"}),
        frozenset({"EA_7", "EA_8"}),
    }


def test_monotonicity_in_threshold(base_path):
    m = _matrix(base_path)
    for p in range(m.max_shared_face + 1):
        assert threshold_line_graph(m, p + 1).edges <= threshold_line_graph(m, p).edges


def test_components_match_classes(base_path, gmo_csv_path):
    for path in (base_path, gmo_csv_path):
        m = _matrix(path)
        for q in range(m.max_shared_face + 1):
            g = threshold_line_graph(m, q)
            assert components_of_edges(g.nodes, g.edges) == {
                frozenset(group) for group in q_classes_threshold(m, q)
            }


def test_band_additivity(base_path):
    m = _matrix(base_path)
    top = m.max_shared_face
    for a in range(top + 1):
        for b in range(a, top):
            whole = generalized_line_graph(m, a, top).edges
            parts = (
                generalized_line_graph(m, a, b).edges
                | generalized_line_graph(m, b + 1, top).edges
            )
            assert whole == parts


def test_export_dot_minimal_graph():
    m = intersection_matrix(
        ScenarioMap(
            "two",
            (Concept("PC_1"), Concept("PC_2")),
            (
                Alternative(Concept("EA_1"), frozenset({"PC_1", "PC_2"})),
                Alternative(Concept("EA_2"), frozenset({"PC_2"})),
            ),
        )
    )
    text = export_dot(threshold_line_graph(m, 0))
    assert text.count("--") == 1
    assert '"EA_1" -- "EA_2";' in text


def test_export_dot_base_l4(base_path):
    g = threshold_line_graph(_matrix(base_path), 4)
    text = export_dot(g)
    node_lines = [ln for ln in text.splitlines() if ln.strip().startswith('"')
                  and "--" not in ln]
    edge_lines = [ln for ln in text.splitlines() if "--" in ln]
    assert len(node_lines) == 4
    assert len(edge_lines) == 2
    assert "band 4..5" in text


def test_export_dot_is_deterministic(base_path):
    g = threshold_line_graph(_matrix(base_path), 2)
    assert export_dot(g) == export_dot(g)
    named = export_dot(g, RenderOptions(name="irrigation", label="p* = 2"))
    assert named.startswith('graph "irrigation" {')
    assert 'label="p* = 2";' in named


def test_export_dot_node_order_and_edge_order(gmo_csv_path):
    g = threshold_line_graph(_matrix(gmo_csv_path), 2)
    text = export_dot(g)
    lines = text.splitlines()
    nodes = [ln.strip() for ln in lines
             if ln.strip().startswith('"') and "--" not in ln]
    assert nodes == [f'"EA_{i}";' for i in range(1, 9)]
    edges = [ln.strip() for ln in lines if "--" in ln]
    assert edges == sorted(edges)
