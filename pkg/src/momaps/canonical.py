"""Canonical forms for rooted and unrooted graphs.

A rooted map has no nontrivial automorphism fixing the root dart, so a
breadth-first relabeling from the root is a complete isomorphism
invariant.  Vertices are numbered in discovery order; each vertex keeps
a rotation gauge in {0, 2} (rotating slots by two preserves the
orientation pattern), fixed so that the dart through which the vertex
was first reached gets normalized slot 0 or 1 according to its parity.
For chain-vertices the same gauge freedom swaps the two sides, which
are not ordered data.

Unrooted codes are the minimum of the rooted code over all outgoing
darts (one rooting per edge).
"""

from __future__ import annotations


def rooted_code(pairing, root, vertex_types=None, cycle_components=0,
                root_on_cycle=False):
    """Canonical code of a connected rooted graph given by its pairing.

    ``vertex_types`` optionally tags vertices (e.g. chain-vertex kinds);
    tags become part of the code.  Unreachable vertices are ignored, so
    the caller is responsible for connectedness when it matters.
    """
    num_vertices = len(pairing) // 4
    if root is None:
        if not root_on_cycle or num_vertices:
            raise ValueError("rooted_code needs a root dart")
        return (0, cycle_components, 1)
    newid = [-1] * num_vertices
    rot = [0] * num_vertices
    order = []

    v0 = root >> 2
    newid[v0] = 0
    rot[v0] = root & 3  # root slot is even; normalize it to slot 0
    order.append(v0)
    code = [len(pairing) // 4, cycle_components, 0]
    if vertex_types is not None:
        code.append(vertex_types[v0])
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        base = 4 * v
        r = rot[v]
        for k in range(4):
            p = pairing[base + ((k + r) & 3)]
            w = p >> 2
            t = p & 3
            if newid[w] < 0:
                newid[w] = len(order)
                rot[w] = t & 2
                order.append(w)
                if vertex_types is not None:
                    code.append(-1 - vertex_types[w])
            code.append(4 * newid[w] + ((t - rot[w]) & 3))
    return tuple(code)


def canonical_rooted(g, chain_types=None):
    """Canonical code of a rooted (or root-on-cycle) graph object."""
    types = _types_vector(g, chain_types)
    return rooted_code(g.pairing, g.root, types, g.cycle_components,
                       g.root_on_cycle)


def canonical_unrooted(g, chain_types=None):
    """Minimum rooted code over all edge rootings."""
    if g.num_vertices == 0:
        return (0, g.cycle_components, 1)
    types = _types_vector(g, chain_types)
    return min(rooted_code(g.pairing, d, types, g.cycle_components)
               for d in range(4 * g.num_vertices) if (d & 1) == 0)


def _types_vector(g, chain_types):
    if chain_types is None:
        chain_types = getattr(g, "chain_vertices", None)
    if not chain_types:
        return None
    return [chain_types.get(v, 0) for v in range(g.num_vertices)]
