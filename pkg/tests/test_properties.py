import hypothesis.strategies as st
from hypothesis import given, settings

from scenq import (
    Alternative,
    Concept,
    FORMAT_SCENARIO_JSON,
    NoSharedFaces,
    ScenarioDocument,
    ScenarioMap,
    VARIANT_EQUALITY,
    VARIANT_THRESHOLD,
    classify,
    complexity,
    complexity_from_counts,
    generalized_line_graph,
    intersection_matrix,
    is_one_to_one,
    parse_scenario,
    q_classes_equality,
    q_classes_threshold,
    reduce_cognitive_map,
    serialize_scenario,
    structure_vector,
    threshold_line_graph,
    validate_scenario,
)
from scenq.errors import UnreachableAlternative
from scenq.model import CognitiveMap

from oracles import closure_classes, components_of_edges, reachable_by_closure


@st.composite
def scenario_maps(draw, max_alts=7, max_pcs=10):
    n_pc = draw(st.integers(1, max_pcs))
    pcs = [f"PC_{j}" for j in range(1, n_pc + 1)]
    n_alt = draw(st.integers(1, max_alts))
    alternatives = tuple(
        Alternative(
            Concept(f"EA_{i}"),
            draw(st.frozensets(st.sampled_from(pcs), min_size=1)),
        )
        for i in range(1, n_alt + 1)
    )
    return ScenarioMap("h", tuple(Concept(p) for p in pcs), alternatives)


@st.composite
def cognitive_maps(draw, max_concepts=12):
    n = draw(st.integers(2, max_concepts))
    ids = [f"c{i}" for i in range(n)]
    n_alt = draw(st.integers(1, max(1, n // 3)))
    n_cons = draw(st.integers(1, max(1, (n - n_alt) // 2 if n - n_alt else 1)))
    order = draw(st.permutations(ids))
    alts, cons = order[:n_alt], order[n_alt:n_alt + n_cons]
    edges = draw(
        st.lists(
            st.tuples(st.sampled_from(ids), st.sampled_from(ids)), max_size=3 * n
        )
    )
    return CognitiveMap(
        tuple(Concept(i) for i in ids), tuple(edges), tuple(alts), tuple(cons)
    )


@given(scenario_maps())
def test_threshold_partitions_refine_downward(smap):
    m = intersection_matrix(smap)
    for q in range(m.max_shared_face):
        coarse = q_classes_threshold(m, q)
        fine = q_classes_threshold(m, q + 1)
        for group in fine:
            assert any(set(group) <= set(big) for big in coarse)


@given(scenario_maps())
def test_classes_match_transitive_closure_oracle(smap):
    m = intersection_matrix(smap)
    for q in range(m.max_shared_face + 1):
        assert {frozenset(g) for g in q_classes_threshold(m, q)} == closure_classes(
            m, q, exact=False
        )
        assert {frozenset(g) for g in q_classes_equality(m, q)} == closure_classes(
            m, q, exact=True
        )


@given(scenario_maps(), st.randoms(use_true_random=False))
def test_relabeling_preserves_structure(smap, rng):
    pc_ids = list(smap.consequence_ids)
    ea_ids = list(smap.alternative_ids)
    pc_perm = dict(zip(pc_ids, rng.sample(pc_ids, len(pc_ids))))
    ea_perm = dict(zip(ea_ids, rng.sample(ea_ids, len(ea_ids))))
    alternatives = [
        Alternative(
            Concept(ea_perm[a.id]),
            frozenset(pc_perm[c] for c in a.consequence_ids),
        )
        for a in smap.alternatives
    ]
    rng.shuffle(alternatives)
    relabeled = ScenarioMap(smap.label, smap.consequences, tuple(alternatives))

    m, m2 = intersection_matrix(smap), intersection_matrix(relabeled)
    assert is_one_to_one(smap) == is_one_to_one(relabeled)
    if m.max_shared_face < 0:
        assert m2.max_shared_face < 0
        return
    s1, s2 = structure_vector(m), structure_vector(m2)
    assert s1 == s2
    assert complexity_from_counts(s1.entries) == complexity_from_counts(s2.entries)
    for q in range(m.max_shared_face + 1):
        original = {
            frozenset(ea_perm[e] for e in group) for group in q_classes_threshold(m, q)
        }
        relocated = {frozenset(group) for group in q_classes_threshold(m2, q)}
        assert original == relocated


@given(scenario_maps())
def test_s0_counts_shared_vertex_components(smap):
    m = intersection_matrix(smap)
    edges = {
        (m.ids[h], m.ids[k])
        for h in range(m.size)
        for k in range(h + 1, m.size)
        if m.dims[h][k] >= 0
    }
    n_components = len(components_of_edges(m.ids, edges))
    if m.max_shared_face < 0:
        return
    s0 = structure_vector(m).entries[0]
    assert s0 == n_components
    assert (s0 == 1) == (n_components == 1)


@given(scenario_maps())
def test_class_counts_never_decrease_with_level(smap):
    m = intersection_matrix(smap)
    if m.max_shared_face < 0:
        return
    counts = classify(m, VARIANT_THRESHOLD).class_counts()
    assert all(a <= b for a, b in zip(counts, counts[1:]))


@given(scenario_maps())
def test_complexity_positive_unless_one_to_one(smap):
    m = intersection_matrix(smap)
    if is_one_to_one(smap):
        assert complexity(smap, None).value == 0
    elif m.max_shared_face >= 0:
        score = complexity(smap, structure_vector(m))
        assert score.value > 0
    else:
        try:
            structure_vector(m)
            raise AssertionError("expected NoSharedFaces")
        except NoSharedFaces:
            pass


@given(scenario_maps())
def test_line_graph_monotone_and_consistent(smap):
    m = intersection_matrix(smap)
    top = max(m.max_shared_face, 0)
    previous = None
    for p in range(top + 2):
        g = threshold_line_graph(m, p)
        if previous is not None:
            assert g.edges <= previous
        previous = g.edges
    for q in range(m.max_shared_face + 1):
        g = threshold_line_graph(m, q)
        assert components_of_edges(g.nodes, g.edges) == {
            frozenset(group) for group in q_classes_threshold(m, q)
        }


@given(scenario_maps(), st.data())
def test_band_additivity(smap, data):
    m = intersection_matrix(smap)
    top = max(m.max_shared_face, 1)
    a = data.draw(st.integers(0, top - 1))
    b = data.draw(st.integers(a, top - 1))
    c = data.draw(st.integers(b + 1, top))
    whole = generalized_line_graph(m, a, c).edges
    parts = (
        generalized_line_graph(m, a, b).edges
        | generalized_line_graph(m, b + 1, c).edges
    )
    assert whole == parts


@given(scenario_maps())
def test_serialize_parse_round_trip(smap):
    text = serialize_scenario(smap)
    again = parse_scenario(ScenarioDocument(FORMAT_SCENARIO_JSON, text.encode()))
    assert again == smap


@given(scenario_maps())
def test_validate_idempotent(smap):
    assert validate_scenario(validate_scenario(smap)) is smap


@settings(max_examples=60)
@given(cognitive_maps())
def test_reduction_matches_closure(cmap):
    expected = {a: reachable_by_closure(cmap, a) for a in cmap.alternative_ids}
    if any(not targets for targets in expected.values()):
        try:
            reduce_cognitive_map(cmap)
            raise AssertionError("expected UnreachableAlternative")
        except UnreachableAlternative:
            return
    smap = reduce_cognitive_map(cmap)
    assert {a.id: set(a.consequence_ids) for a in smap.alternatives} == expected


@given(cognitive_maps(), st.data())
def test_transitive_shortcut_is_noise(cmap, data):
    try:
        reduced = reduce_cognitive_map(cmap)
    except UnreachableAlternative:
        return
    succ = {c.id: set() for c in cmap.concepts}
    for s, d in cmap.edges:
        succ[s].add(d)
    two_hop = [
        (a, c)
        for a, mids in succ.items()
        for mid in mids
        for c in succ.get(mid, ())
        if c not in succ[a] and c != a
    ]
    if not two_hop:
        return
    extra = data.draw(st.sampled_from(two_hop))
    shortcut = CognitiveMap(
        cmap.concepts,
        cmap.edges + (extra,),
        cmap.alternative_ids,
        cmap.consequence_ids,
    )
    again = reduce_cognitive_map(shortcut)
    assert [set(a.consequence_ids) for a in again.alternatives] == [
        set(a.consequence_ids) for a in reduced.alternatives
    ]
