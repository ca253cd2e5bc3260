"""Melons, dipoles, chains, schemes: the reduction machinery."""

import pytest

from momaps import (
    CANONICAL_SUBSTITUTION,
    ChainVertexType,
    MOGraph,
    cycle_graph,
    degree,
    extract_scheme,
    find_dipoles,
    find_maximal_chains,
    find_melons,
    infinity_cw,
    insert_melon,
    is_melon_free,
    is_melonic,
    melon_free_core,
    remove_melon,
    removal_analysis,
    scheme_degree,
    scheme_from_json_dict,
    scheme_is_planar,
    scheme_to_json_dict,
    substitute_all,
    substitute_chain_vertex,
)
from momaps.canonical import canonical_rooted
from momaps.reduction import chain_elements, scheme_face_counts
from momaps._fastcore import fast_collect


def collect(vmax, **kw):
    views, _ = fast_collect(vmax, **kw)
    return views


def test_cycle_graph_is_melonic():
    assert is_melonic(cycle_graph(rooted=True))
    assert is_melon_free(cycle_graph(rooted=True))


def test_infinity_is_melon_free_not_melonic():
    g = MOGraph(1, infinity_cw().pairing, 0)
    assert is_melon_free(g)
    assert not is_melonic(g)


def test_all_degree_zero_graphs_v6_are_melonic():
    views = collect(6, two_delta_max=0, leaf_two_delta_max=0)
    assert len(views) == 1 + 4 + 22  # V = 2, 4, 6
    for lv in views:
        assert is_melonic(lv.graph())


def test_melon_insert_remove_round_trip():
    views = collect(4, two_delta_max=3, leaf_two_delta_max=3)
    checked = 0
    for lv in views:
        g = lv.graph()
        for d in range(0, 4 * g.num_vertices, 2):
            h = insert_melon(g, d)
            melons = find_melons(h)
            assert melons, "inserted melon not found"
            back = None
            for m in melons:
                cand = remove_melon(h, m)
                if canonical_rooted(cand) == canonical_rooted(g):
                    back = cand
                    break
            assert back is not None
            checked += 1
    assert checked > 100


def test_melon_free_core_unique_and_degree_preserving():
    views = collect(6, two_delta_max=2, leaf_two_delta_max=2)
    for lv in views:
        g = lv.graph()
        core, _removed = melon_free_core(g)
        assert is_melon_free(core)
        if core.num_vertices:
            assert degree(core).two_delta == lv.two_delta
        else:
            assert lv.two_delta == 0


def test_dipole_face_types():
    # Count dipoles over small melon-free graphs; every reported
    # dipole really is a 2-face on two distinct standard vertices.
    views = collect(6, two_delta_max=3, leaf_two_delta_max=3,
                    allow_melons=False)
    n_dip = 0
    for lv in views:
        g = lv.graph()
        for dip in find_dipoles(g):
            assert dip.u != dip.v
            assert dip.type in ("L", "R", "S")
            n_dip += 1
    assert n_dip > 0


def test_extract_scheme_properties_v7():
    views = collect(7, two_delta_max=3, leaf_two_delta_max=3,
                    allow_melons=False)
    for lv in views:
        g = lv.graph()
        s, chains = extract_scheme(g, return_chains=True)
        # Scheme: melon-free, chain-free, same degree.
        assert is_melon_free(s)
        assert not find_maximal_chains(s)
        assert scheme_degree(s).two_delta == lv.two_delta
        # Substituting the removed chains back is the identity.
        if chains:
            # Chain vertex i sits at index num_vertices - len(chains) + i.
            base = s.num_vertices - len(chains)
            spec = {base + i: ch.type_sequence
                    for i, ch in enumerate(chains)}
            back = substitute_all(s, spec)
            assert canonical_rooted(back) == canonical_rooted(g)


def test_canonical_substitutions_realize_types():
    # Substituting the canonical chain of each type into a scheme
    # yields a melon-free graph of the same degree whose re-extracted
    # scheme is the original.
    views = collect(7, two_delta_max=3, leaf_two_delta_max=3,
                    allow_melons=False)
    checked = 0
    for lv in views:
        s = extract_scheme(lv.graph())
        if not getattr(s, "chain_vertices", {}):
            continue
        plain = substitute_all(s)
        assert is_melon_free(plain)
        assert degree(plain).two_delta == lv.two_delta
        s2 = extract_scheme(plain)
        assert canonical_rooted(s2) == canonical_rooted(s)
        checked += 1
        if checked >= 300:
            break
    assert checked


def test_substitution_rejects_wrong_type():
    from momaps.errors import InconsistentSubstitution
    views = collect(7, two_delta_max=1, leaf_two_delta_max=1,
                    allow_melons=False)
    for lv in views:
        s = extract_scheme(lv.graph())
        cvs = getattr(s, "chain_vertices", {})
        for w, t in cvs.items():
            wrong = "SS" if t != ChainVertexType.SE else "LL"
            with pytest.raises(InconsistentSubstitution):
                substitute_chain_vertex(s, w, wrong)
            return


def test_removal_lemma_small():
    views = collect(7, two_delta_max=3, leaf_two_delta_max=3,
                    allow_melons=False)
    n = 0
    for lv in views[:2000]:
        s = extract_scheme(lv.graph())
        for el in list(find_dipoles(s)) + list(chain_elements(s)):
            rep, _reduced = removal_analysis(s, el)
            if rep.separating:
                assert rep.two_delta_drop == 0
            elif el.is_chain_vertex and el.type == ChainVertexType.B:
                assert rep.two_delta_drop == 6
            else:
                assert rep.two_delta_drop in (2, 6)
            n += 1
    assert n > 500


def test_scheme_face_counts_match_plain_tracer():
    views = collect(4, two_delta_max=3, leaf_two_delta_max=3)
    from momaps.graph import trace_faces
    for lv in views:
        g = lv.graph()
        fl, fr, fs = scheme_face_counts(g)
        faces = trace_faces(g)
        assert (fl, fr, fs) == (faces.f_left, faces.f_right,
                                faces.f_straight)


def test_scheme_json_round_trip():
    views = collect(7, two_delta_max=2, leaf_two_delta_max=2,
                    allow_melons=False)
    for lv in views:
        s = extract_scheme(lv.graph())
        if not getattr(s, "chain_vertices", {}):
            continue
        doc = scheme_to_json_dict(s)
        s2 = scheme_from_json_dict(doc)
        assert canonical_rooted(s2) == canonical_rooted(s)
        break
    else:
        pytest.fail("no chain-vertex scheme found")


def test_canonical_substitution_table_complete():
    assert set(CANONICAL_SUBSTITUTION) == set(ChainVertexType)


def test_scheme_is_planar_on_dominants():
    from momaps.enumerate import gen_dominant_schemes
    for s in gen_dominant_schemes(1):
        assert scheme_is_planar(s)
