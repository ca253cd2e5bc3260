"""Regular 4-edge-colored bipartite graphs and their embedding.

A regular colored graph of dimension 3 is a 4-regular bipartite graph
whose edges carry colors 0..3, each vertex being incident to one edge
of each color.  Canonically embedded (colors clockwise around black
vertices, counterclockwise around white ones) and with even colors
oriented black to white, such a graph becomes a 4-regular oriented
map, so colored graphs form a subfamily of the maps handled by
:mod:`momaps.graph`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidColoring
from .graph import MOGraph


@dataclass(frozen=True)
class ColoredGraph:
    """A 4-edge-colored bipartite graph with ``num_pairs`` vertex pairs.

    ``coloring[c][b]`` is the white vertex joined to black vertex
    ``b`` by the color-``c`` edge; each ``coloring[c]`` must be a
    permutation of ``range(num_pairs)``.  ``root_black``, if set,
    marks the color-0 edge at that black vertex as the root.
    """

    num_pairs: int
    coloring: tuple
    root_black: int | None = None

    @property
    def num_vertices(self):
        return 2 * self.num_pairs


def validate_colored(cg):
    """List of problems with ``cg``; empty when well-formed."""
    issues = []
    n = cg.num_pairs
    if n < 0:
        return [f"negative vertex-pair count {n}"]
    if len(cg.coloring) != 4:
        return [f"expected 4 color classes, got {len(cg.coloring)}"]
    for c, perm in enumerate(cg.coloring):
        if sorted(perm) != list(range(n)):
            issues.append(f"color {c} is not a perfect matching of the "
                          "black and white vertices")
    if cg.root_black is not None and not 0 <= cg.root_black < n:
        issues.append(f"root black vertex {cg.root_black} out of range")
    return issues


def require_valid_colored(cg):
    issues = validate_colored(cg)
    if issues:
        raise InvalidColoring("; ".join(issues))


def colored_faces(cg):
    """Face counts by color pair: {(i, j): count} for 0 <= i < j <= 3.

    A face of type (i, j) is a cycle alternating colors i and j; the
    count is the number of cycles of the permutation composing the
    two matchings.
    """
    require_valid_colored(cg)
    n = cg.num_pairs
    counts = {}
    for i in range(4):
        inv_i = [0] * n
        for b, w in enumerate(cg.coloring[i]):
            inv_i[w] = b
        for j in range(i + 1, 4):
            seen = [False] * n
            cycles = 0
            for b0 in range(n):
                if seen[b0]:
                    continue
                cycles += 1
                b = b0
                while not seen[b]:
                    seen[b] = True
                    b = inv_i[cg.coloring[j][b]]
            counts[(i, j)] = cycles
    return counts


def colored_degree(cg):
    """Degree of a colored graph: ``delta = 3k + 3c - F``.

    ``k`` is the number of black vertices, ``c`` the number of
    connected components and ``F`` the total face count; the degree of
    a colored graph is always a non-negative integer.
    """
    require_valid_colored(cg)
    f = sum(colored_faces(cg).values())
    return 3 * cg.num_pairs + 3 * num_colored_components(cg) - f


def num_colored_components(cg):
    n = cg.num_pairs
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # Union blacks that share a white neighbor under any color.
    white_owner = {}
    for c, perm in enumerate(cg.coloring):
        for b, w in enumerate(perm):
            if w in white_owner:
                ra, rb = find(white_owner[w]), find(b)
                parent[ra] = rb
            else:
                white_owner[w] = b
    return len({find(b) for b in range(n)}) if n else 0


def embed_colored(cg):
    """The oriented 4-regular map induced by a colored graph.

    Black vertex ``b`` becomes map vertex ``b`` with color ``c`` on
    slot ``c``; white vertex ``w`` becomes vertex ``k + w`` with color
    ``c`` on slot ``3 - c`` (the counterclockwise canonical order).
    Even colors run black to white, matching the out/in slot parity.
    The root, if any, is the outgoing half of the marked color-0 edge.
    """
    require_valid_colored(cg)
    n = cg.num_pairs
    pairing = [-1] * (8 * n)
    for c, perm in enumerate(cg.coloring):
        for b, w in enumerate(perm):
            x = 4 * b + c
            y = 4 * (n + w) + (3 - c)
            pairing[x] = y
            pairing[y] = x
    root = None
    if cg.root_black is not None:
        root = 4 * cg.root_black  # color 0 is outgoing at a black vertex
    return MOGraph(2 * n, tuple(pairing), root)


#: Face-type pairs of the colored graph contributing to each strand
#: family of the embedded map: left, right, straight.
FAMILY_COLOR_PAIRS = (((1, 2), (0, 3)), ((0, 1), (2, 3)), ((0, 2), (1, 3)))


def colored_melon(rooted=True):
    """The 2-vertex colored graph with all four edges in one pair."""
    return ColoredGraph(1, ((0,), (0,), (0,), (0,)),
                        0 if rooted else None)
