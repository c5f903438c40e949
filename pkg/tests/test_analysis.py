import json
from fractions import Fraction

import pytest

from scenq import (
    Alternative,
    Concept,
    LevelOutOfRange,
    NoSharedFaces,
    ScenarioMap,
    VARIANT_EQUALITY,
    VARIANT_THRESHOLD,
    ZeroClassCount,
    build_report,
    compare_reports,
    complexity,
    complexity_from_counts,
    intersection_matrix,
    load_document,
    parse_scenario,
    q_classes_equality,
    q_classes_threshold,
    report_to_dict,
    structure_vector,
)

# Calibrated four-alternative benchmark: expected classes per level.
BASE_THRESHOLD = {
    0: (("EA_1", "EA_2", "EA_3", "EA_4"),),
    1: (("EA_1", "EA_2", "EA_3", "EA_4"),),
    2: (("EA_1", "EA_2", "EA_3", "EA_4"),),
    3: (("EA_1", "EA_2", "EA_3", "EA_4"),),
    4: (("EA_1", "EA_2"), ("EA_3", "EA_4")),
    5: (("EA_1", "EA_2"), ("EA_3",), ("EA_4",)),
}
BASE_EQUALITY = {
    0: (("EA_1",), ("EA_2",), ("EA_3",), ("EA_4",)),
    1: (("EA_1",), ("EA_2",), ("EA_3",), ("EA_4",)),
    2: (("EA_1", "EA_2", "EA_3"), ("EA_4",)),
    3: (("EA_1", "EA_2", "EA_4"), ("EA_3",)),
    4: (("EA_1",), ("EA_2",), ("EA_3", "EA_4")),
    5: (("EA_1", "EA_2"), ("EA_3",), ("EA_4",)),
}
# Eight-alternative GMO variant: expected classes per level.
GMO_THRESHOLD = {
    0: (tuple(f"EA_{i}" for i in range(1, 9)),),
    1: (tuple(f"EA_{i}" for i in range(1, 9)),),
    2: (("EA_1", "EA_2", "EA_3", "EA_4", "EA_5", "EA_6"), ("EA_7", "EA_8")),
    3: (("EA_1", "EA_2", "EA_3", "EA_4"), ("EA_5", "EA_6"), ("EA_7", "EA_8")),
    4: (("EA_1", "EA_2"), ("EA_3", "EA_4"), ("EA_5", "EA_6"), ("EA_7",), ("EA_8",)),
    5: (("EA_1", "EA_2"), ("EA_3",), ("EA_4",), ("EA_5",), ("EA_6",), ("EA_7",),
        ("EA_8",)),
}

# The irrigation hyperedges as elicited (pre-calibration), for the
# set-intersection oracle below.
ELICITED_SETS = {
    "EA_1": {"PC_1", "PC_2", "PC_3", "PC_4", "PC_5", "PC_6", "PC_8", "PC_9"},
    "EA_2": {"PC_4", "PC_5", "PC_6", "PC_7", "PC_8", "PC_9", "PC_10"},
    "EA_3": {"PC_1", "PC_6", "PC_7", "PC_9", "PC_11", "PC_13"},
    "EA_4": {"PC_1", "PC_6", "PC_7", "PC_8", "PC_9", "PC_11", "PC_12"},
}


def _scenario(alt_sets: dict[str, set[str]], n_pc: int = 13) -> ScenarioMap:
    pcs = tuple(Concept(f"PC_{j}") for j in range(1, n_pc + 1))
    alts = tuple(
        Alternative(Concept(a), frozenset(s)) for a, s in alt_sets.items()
    )
    return ScenarioMap("t", pcs, alts)


def _load_matrix(path):
    source = parse_scenario(load_document(str(path)))
    if isinstance(source, ScenarioMap):
        return intersection_matrix(source)
    return source


def test_intersection_entries_match_set_oracle():
    smap = _scenario(ELICITED_SETS)
    m = intersection_matrix(smap)
    ids = list(m.ids)
    for h, ha in enumerate(ids):
        for k, kb in enumerate(ids):
            expected = (
                len(ELICITED_SETS[ha]) - 1
                if h == k
                else len(ELICITED_SETS[ha] & ELICITED_SETS[kb]) - 1
            )
            assert m.dims[h][k] == expected
    assert m.face_dim(ids.index("EA_1"), ids.index("EA_2")) == 4
    assert m.face_dim(ids.index("EA_1"), ids.index("EA_3")) == 2


def test_disjoint_hyperedges_get_sentinel():
    m = intersection_matrix(
        _scenario({"EA_1": {"PC_1", "PC_2"}, "EA_2": {"PC_3", "PC_4"}}, 4)
    )
    assert m.face_dim(0, 1) == -1
    assert m.max_shared_face == -1


def test_base_threshold_classes(base_path):
    m = _load_matrix(base_path)
    for q, expected in BASE_THRESHOLD.items():
        assert q_classes_threshold(m, q) == expected, f"q={q}"


def test_base_equality_classes(base_path):
    m = _load_matrix(base_path)
    for q, expected in BASE_EQUALITY.items():
        assert q_classes_equality(m, q) == expected, f"q={q}"


def test_gmo_threshold_classes(gmo_csv_path):
    m = _load_matrix(gmo_csv_path)
    for q, expected in GMO_THRESHOLD.items():
        assert q_classes_threshold(m, q) == expected, f"q={q}"


def test_level_out_of_range(base_path):
    m = _load_matrix(base_path)
    with pytest.raises(LevelOutOfRange):
        q_classes_threshold(m, 6)
    with pytest.raises(LevelOutOfRange):
        q_classes_threshold(m, -1)


def test_base_structure_vector(base_path):
    m = _load_matrix(base_path)
    assert structure_vector(m).entries == (1, 1, 1, 1, 2, 3)
    assert structure_vector(m, VARIANT_EQUALITY).entries == (4, 4, 2, 2, 3, 3)


def test_gmo_structure_vector_counts_expected_classes(gmo_csv_path):
    m = _load_matrix(gmo_csv_path)
    expected = tuple(len(GMO_THRESHOLD[q]) for q in range(6))
    assert expected == (1, 1, 2, 3, 5, 7)
    assert structure_vector(m).entries == expected


def test_single_shared_vertex_pair():
    m = intersection_matrix(
        _scenario({"EA_1": {"PC_1", "PC_2"}, "EA_2": {"PC_2", "PC_3"}}, 3)
    )
    assert m.max_shared_face == 0
    assert structure_vector(m).entries == (1,)


@pytest.mark.parametrize(
    "counts, expected",
    [
        ((1, 1), Fraction(3)),
        ((1, 2), Fraction(2)),
        ((1, 1, 1, 1, 2, 3), Fraction(29, 2)),
        ((1, 1, 1, 1, 2, 1), Fraction(37, 2)),
    ],
)
def test_aggregate_evaluator(counts, expected):
    oracle = sum(Fraction(q + 1, s) for q, s in enumerate(counts))
    assert complexity_from_counts(counts) == expected == oracle


def test_gmo_complexity_exact(gmo_csv_path):
    vec = structure_vector(_load_matrix(gmo_csv_path))
    oracle = sum(Fraction(q + 1, s) for q, s in enumerate(vec.entries))
    assert oracle == Fraction(323, 42)
    assert complexity_from_counts(vec.entries) == Fraction(323, 42)
    assert abs(complexity_from_counts(vec.entries) - Fraction(769, 100)) < Fraction(1, 100)


def test_zero_class_count_guard():
    with pytest.raises(ZeroClassCount):
        complexity_from_counts((1, 0, 2))


def test_complexity_one_to_one_branch():
    smap = _scenario({"EA_1": {"PC_1"}, "EA_2": {"PC_2"}}, 2)
    score = complexity(smap, None)
    assert score.value == 0
    assert score.all_one_to_one


def test_structure_vector_needs_shared_faces():
    m = intersection_matrix(
        _scenario({"EA_1": {"PC_1", "PC_2"}, "EA_2": {"PC_3", "PC_4"}}, 4)
    )
    with pytest.raises(NoSharedFaces):
        structure_vector(m)


def test_degenerate_report_carries_condition():
    report = build_report(
        _scenario({"EA_1": {"PC_1", "PC_2"}, "EA_2": {"PC_3", "PC_4"}}, 4)
    )
    assert report.condition == "NoSharedFaces"
    assert report.structure_vector is None
    assert report.complexity is None
    body = report_to_dict(report)
    assert body["condition"] == "NoSharedFaces"
    assert [a["dim"] for a in body["alternatives"]] == [1, 1]


def test_one_to_one_report(fixtures_dir):
    report = build_report(parse_scenario(load_document(str(fixtures_dir / "one-to-one.json"))))
    assert report.complexity.all_one_to_one
    assert report.structure_vector is None
    assert report.condition is None
    body = report_to_dict(report)
    assert body["one_to_one"] is True
    assert body["complexity"] == {"exact": "0", "decimal": "0", "one_to_one": True}


def test_report_layout_and_determinism(base_path):
    smap = parse_scenario(load_document(base_path))
    a = report_to_dict(build_report(smap))
    b = report_to_dict(build_report(smap))
    assert json.dumps(a) == json.dumps(b)
    assert a["structure_vector"] == [1, 1, 1, 1, 2, 3]
    assert a["complexity"]["exact"] == "29/2"
    assert a["complexity"]["decimal"] == "14.5"
    assert a["intersection"]["max_shared_face"] == 5
    assert list(a["classes"]) == [VARIANT_THRESHOLD, VARIANT_EQUALITY]


def test_compare_base_to_gmo(base_path, gmo_extended_path):
    a = build_report(parse_scenario(load_document(base_path)))
    b = build_report(parse_scenario(load_document(gmo_extended_path)))
    diff = compare_reports(a, b)
    assert diff.complexity_delta == Fraction(323, 42) - Fraction(29, 2)
    assert diff.complexity_delta == Fraction(-143, 21)
    assert diff.direction == "decreased"
    assert diff.structural_change
    counts_b = [d.classes_b for d in diff.level_deltas]
    assert counts_b == [1, 1, 2, 3, 5, 7]


def test_compare_report_with_itself(base_path):
    report = build_report(parse_scenario(load_document(base_path)))
    diff = compare_reports(report, report)
    assert diff.complexity_delta == 0
    assert diff.merged == () and diff.split == ()
    assert not diff.structural_change


def test_compare_against_extra_disjoint_alternative(base_path):
    base = parse_scenario(load_document(base_path))
    extended = ScenarioMap(
        base.label,
        base.consequences + (Concept("PC_14"), Concept("PC_15")),
        base.alternatives
        + (Alternative(Concept("EA_5"), frozenset({"PC_14", "PC_15"})),),
    )
    report_a = build_report(base)
    report_b = build_report(extended)
    assert report_b.structure_vector.entries == (2, 2, 2, 2, 3, 4)
    oracle = sum(Fraction(q + 1, s) for q, s in enumerate((2, 2, 2, 2, 3, 4)))
    assert report_b.complexity.value == oracle == Fraction(49, 6)
    diff = compare_reports(report_a, report_b)
    assert diff.complexity_delta == Fraction(49, 6) - Fraction(29, 2)
    assert diff.direction == "decreased"


def test_merged_and_split_pairs():
    before = _scenario(
        {"EA_1": {"PC_1", "PC_2"}, "EA_2": {"PC_2", "PC_3"}, "EA_3": {"PC_5"}}, 5
    )
    after = _scenario(
        {"EA_1": {"PC_1", "PC_2"}, "EA_2": {"PC_3", "PC_4"}, "EA_3": {"PC_1"}}, 5
    )
    diff = compare_reports(build_report(before), build_report(after))
    assert (0, (("EA_1", "EA_3"),)) in diff.merged
    assert (0, (("EA_1", "EA_2"),)) in diff.split
