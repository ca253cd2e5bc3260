"""Enumeration, count tables, scheme catalogs, dominant schemes."""

import itertools
from math import comb

import pytest

from momaps import (
    MOGraph,
    MomapsError,
    SchemeCatalog,
    build_scheme_catalog,
    count_by_degree,
    degree,
    gen_dominant_schemes,
    gen_rooted,
    is_melon_free,
)
from momaps.canonical import canonical_rooted
from momaps.enumerate import is_reduced_scheme, scheme_params_of
from momaps.reduction import find_maximal_chains, scheme_degree

# Known exact totals of rooted connected graphs by vertex count
# (V = 0 is the rooted cycle-graph).
TOTALS = {0: 1, 1: 2, 2: 10, 3: 74, 4: 706}
PLANAR_TOTALS = {0: 1, 1: 2, 2: 9, 3: 54, 4: 378}


@pytest.fixture(scope="module")
def table8():
    return count_by_degree(8)


def test_gen_rooted_counts_and_uniqueness():
    got = list(gen_rooted(3))
    # The V = 0 cycle-graph comes first.
    assert got[0].num_vertices == 0
    by_v = {}
    codes = set()
    for g in got:
        by_v[g.num_vertices] = by_v.get(g.num_vertices, 0) + 1
        code = canonical_rooted(g)
        assert code not in codes
        codes.add(code)
    assert by_v == {v: c for v, c in TOTALS.items() if v <= 3}


def test_gen_rooted_engines_agree():
    fast = {canonical_rooted(g) for g in gen_rooted(3, engine="fast")}
    slow = {canonical_rooted(g) for g in gen_rooted(3, engine="python")}
    assert fast == slow
    mf_fast = {canonical_rooted(g)
               for g in gen_rooted(4, melon_free=True, engine="fast")}
    mf_slow = {canonical_rooted(g)
               for g in gen_rooted(4, melon_free=True, engine="python")}
    assert mf_fast == mf_slow


def _all_pairings(n):
    """Every fixed-point-free even-to-odd pairing on 4n darts."""
    evens = [d for d in range(4 * n) if d % 2 == 0]
    odds = [d for d in range(4 * n) if d % 2 == 1]
    for perm in itertools.permutations(odds):
        pairing = [0] * (4 * n)
        for e, o in zip(evens, perm):
            pairing[e] = o
            pairing[o] = e
        yield tuple(pairing)


def _connected(n, pairing):
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for s in range(4):
            w = pairing[4 * v + s] // 4
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def test_rooted_counts_by_labeled_brute_force():
    # Independent oracle: root every connected labeled pairing at dart
    # 0 and count distinct canonical codes.
    for n in (1, 2, 3):
        codes = set()
        for pairing in _all_pairings(n):
            if not _connected(n, pairing):
                continue
            codes.add(canonical_rooted(MOGraph(n, pairing, 0)))
        assert len(codes) == TOTALS[n]


def test_count_table_totals_and_planarity(table8):
    known_totals = {0: 1, 1: 2, 2: 10, 3: 74, 4: 706, 5: 8162,
                    6: 110410, 7: 1708394, 8: 29752066}
    known_planar = {0: 1, 1: 2, 2: 9, 3: 54, 4: 378, 5: 2916,
                    6: 24057, 7: 208494, 8: 1876446}
    for v, c in known_totals.items():
        assert table8.total(v) == c
    for v, p in known_planar.items():
        assert table8.planar_total(v) == p


def test_count_table_degree_rows(table8):
    # V = 1: the two infinity graphs, doubled degree 1, both planar.
    assert table8.rows[(1, 1)] == (2, 2)
    # Doubled degree has the parity of the vertex count.
    for (v, td) in table8.rows:
        assert (v - td) % 2 == 0
    # Degree-0 counts are the melonic numbers 1, 1, 4, 22, 140.
    for v, c in {0: 1, 2: 1, 4: 4, 6: 22, 8: 140}.items():
        assert table8.count(v, 0) == c


def test_count_table_knots(table8):
    # Knot-components stratify the planar graphs.
    assert table8.knot_count(0, 1) == 1
    for v in range(0, 9):
        assert (sum(c for (w, _), c in table8.knots.items() if w == v)
                == table8.planar_total(v))
    # Planar graphs satisfy f_straight = V/2 + 1 - delta >= 1, so
    # V = 1 planar graphs all have exactly one knot-component.
    assert table8.knot_count(1, 1) == 2


def test_count_table_csv(table8):
    lines = table8.to_csv().strip().split("\n")
    assert lines[0] == "two_n,two_delta,count,planar_count"
    assert lines[1] == "0,0,1,1"
    row = {tuple(map(int, ln.split(",")[:2])): tuple(map(int,
           ln.split(",")[2:])) for ln in lines[1:]}
    assert row[(1, 1)] == (2, 2)


def test_melon_free_counts():
    table = count_by_degree(6, two_delta_max=3, melon_free=True)
    known = {(1, 1): 2, (2, 2): 8, (3, 1): 6, (3, 3): 44,
             (4, 2): 75, (5, 1): 18, (5, 3): 762, (6, 2): 446}
    for key, c in known.items():
        assert table.count(*key) == c


def test_count_engines_agree():
    fast = count_by_degree(4, engine="fast")
    slow = count_by_degree(4, engine="python")
    assert fast.rows == slow.rows
    assert fast.knots == slow.knots


def test_catalog_degree_zero():
    cat = build_scheme_catalog(0)
    assert len(cat) == 1
    assert cat.stabilized
    (s, params), = cat.members.values()
    assert s.num_vertices == 0
    assert params.b == 0 and params.c == 0


def test_catalog_degree_half():
    cat = build_scheme_catalog(1, max_vertices=9)
    assert len(cat) == 18
    assert cat.stabilized
    assert cat.certified_order == 9
    for s, params in cat.members.values():
        assert is_reduced_scheme(s, 1)
        assert scheme_params_of(s) == params
    # Both dominant schemes were found by the direct b-maximal slice.
    for dom in gen_dominant_schemes(1):
        assert dom in cat


def test_catalog_degree_one():
    # The degree-1 catalog keeps growing through V = 10, so a V = 8
    # scan is honestly reported as unstabilized.
    cat = build_scheme_catalog(2, max_vertices=8)
    assert not cat.stabilized
    assert cat.certified_order == 8
    for s, _ in cat.members.values():
        assert is_reduced_scheme(s, 2)
    doms = {canonical_rooted(s) for s in gen_dominant_schemes(2)}
    assert len(doms) == 16
    assert doms <= set(cat.members)


def test_catalog_rejects_wrong_degree():
    cat = SchemeCatalog(two_delta=2)
    dom1 = next(iter(gen_dominant_schemes(1)))
    with pytest.raises(MomapsError):
        cat.add(dom1)


def test_dominant_scheme_counts():
    for td in (1, 2, 3):
        want = comb(2 * (td - 1), td - 1) // td * 2 ** (3 * td - 2)
        codes = {canonical_rooted(s) for s in gen_dominant_schemes(td)}
        assert len(codes) == want


def test_dominant_scheme_structure():
    for td in (1, 2):
        for s in gen_dominant_schemes(td):
            assert is_melon_free(s)
            assert not find_maximal_chains(s)
            assert scheme_degree(s).two_delta == td
            params = scheme_params_of(s)
            # All chain-vertices broken, maximal number of them.
            assert params.b == 2 * td - 1
            assert params.c == params.b
            # The root lies on the loop at the top chain-vertex.
            assert s.root == 0


def test_gen_rooted_rejects_negative():
    from momaps.errors import ValidationError
    with pytest.raises(ValidationError):
        list(gen_rooted(-1))
