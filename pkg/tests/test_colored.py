"""Edge-colored bipartite graphs and their embedding as plain graphs."""

import random

import pytest

from momaps import degree
from momaps.canonical import canonical_rooted
from momaps.colored import (
    FAMILY_COLOR_PAIRS,
    ColoredGraph,
    colored_degree,
    colored_faces,
    colored_melon,
    embed_colored,
    num_colored_components,
    validate_colored,
)
from momaps.errors import InvalidColoring
from momaps.graph import quadruple_edge_graph, require_valid


def random_colored(k, rng):
    perms = []
    for _ in range(4):
        p = list(range(k))
        rng.shuffle(p)
        perms.append(tuple(p))
    return ColoredGraph(k, tuple(perms), 0)


def test_melon_embeds_to_quadruple_edge():
    g = embed_colored(colored_melon(rooted=True))
    require_valid(g)
    ref = quadruple_edge_graph()
    rooted_ref = type(ref)(ref.num_vertices, ref.pairing, 0)
    assert canonical_rooted(g) == canonical_rooted(rooted_ref)
    assert degree(g).two_delta == 0


def test_colored_melon_degree_zero():
    assert colored_degree(colored_melon()) == 0


def test_validate_rejects_non_permutation():
    bad = ColoredGraph(2, (((0, 0)), (0, 1), (0, 1), (0, 1)), 0)
    assert validate_colored(bad)
    with pytest.raises(InvalidColoring):
        embed_colored(bad)


def test_face_correspondence_random():
    rng = random.Random(7)
    for _ in range(60):
        k = rng.randint(1, 5)
        c = random_colored(k, rng)
        if validate_colored(c):
            continue
        g = embed_colored(c)
        require_valid(g)
        faces = colored_faces(c)
        rep = degree(g)
        # Faces of the embedded graph group by strand family according
        # to fixed color pairs.
        fam_counts = []
        for pairs in FAMILY_COLOR_PAIRS:
            fam_counts.append(sum(faces[p] for p in pairs))
        assert sorted(fam_counts) == sorted(
            (rep.f_left, rep.f_right, rep.f_straight))
        # The colored degree is half the embedded doubled degree.
        assert 2 * colored_degree(c) == rep.two_delta
        assert num_colored_components(c) == rep.c
