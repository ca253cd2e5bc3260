"""Melon, dipole, chain and scheme machinery.

This module implements the reduction pipeline:

* melons (triple edges carrying a left, right and straight 2-face) and
  the melon-free core obtained by greedy melon removal;
* dipoles (2-faces on two distinct vertices avoiding the root), their
  two sides, and chains of dipoles linked side to side;
* schemes: graphs in which every maximal proper chain is replaced by a
  typed chain-vertex, together with the reverse substitution;
* face tracing and the degree formula for graphs with chain-vertices,
  ``2 delta = 6c + 3V - 2F + 4U + 6B``;
* removal of dipoles and chain-vertices with the separating /
  non-separating degree bookkeeping.

Chain-vertices are genuine 4-slot vertices whose two sides are the slot
pairs {0, 1} and {2, 3}; rotating the slots by two swaps the sides, so
the sides are not ordered data.  Strand routing at every vertex type is
given by :data:`momaps.generate.ARC_TABLE`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from .errors import (
    InconsistentSubstitution,
    MomapsError,
    NotAMelon,
    ValidationError,
)
from .generate import (
    ARC_TABLE,
    CV_B,
    CV_L,
    CV_R,
    CV_SE,
    CV_SO,
    STD,
    pair_face_type,
    triple_is_melon,
)
from .graph import MOGraph, require_valid, vertex_components


class ChainVertexType(IntEnum):
    """Chain-vertex kinds; values match the generate-module type codes."""

    L = CV_L
    R = CV_R
    SE = CV_SE
    SO = CV_SO
    B = CV_B

    @property
    def label(self):
        return {self.L: "L", self.R: "R", self.SE: "Se", self.SO: "So",
                self.B: "B"}[self]

    @classmethod
    def from_label(cls, label):
        table = {"L": cls.L, "R": cls.R, "Se": cls.SE, "So": cls.SO,
                 "B": cls.B}
        if label not in table:
            raise ValidationError([f"unknown chain-vertex type {label!r}"])
        return table[label]


#: Shortest consistent chain realizing each chain-vertex type.
CANONICAL_SUBSTITUTION = {
    ChainVertexType.L: "LL",
    ChainVertexType.R: "RR",
    ChainVertexType.SE: "SS",
    ChainVertexType.SO: "SSS",
    ChainVertexType.B: "LR",
}


@dataclass(frozen=True)
class SchemeGraph(MOGraph):
    """A graph whose vertices may be typed chain-vertices.

    ``chain_types[v]`` is 0 for a standard vertex or a
    :class:`ChainVertexType` value.  An empty tuple means all-standard.
    """

    chain_types: tuple = ()

    @property
    def chain_vertices(self):
        """Mapping of chain-vertex index to its type."""
        return {v: ChainVertexType(t)
                for v, t in enumerate(self.chain_types) if t}

    def vertex_type(self, v):
        if v < len(self.chain_types):
            return self.chain_types[v]
        return STD

    def with_root(self, root):
        return SchemeGraph(self.num_vertices, self.pairing, root,
                           self.cycle_components, self.root_on_cycle,
                           self.chain_types)


def _types_of(g):
    types = getattr(g, "chain_types", ())
    full = list(types) + [STD] * (g.num_vertices - len(types))
    return full


def as_scheme_graph(g, chain_types=None):
    if chain_types is None:
        chain_types = tuple(_types_of(g))
    return SchemeGraph(g.num_vertices, g.pairing, g.root,
                       g.cycle_components, g.root_on_cycle,
                       tuple(chain_types))


def _root_darts(g):
    if g.root is None:
        return ()
    return (g.root, g.pairing[g.root])


def parallel_edge_groups(g):
    """Map (u, v) with u < v to the list of (slot_u, slot_v) edges."""
    groups = {}
    for d in range(0, g.num_darts):
        p = g.pairing[d]
        if d > p:
            continue
        u, v = d >> 2, p >> 2
        if u == v:
            continue
        if u < v:
            groups.setdefault((u, v), []).append((d & 3, p & 3))
        else:
            groups.setdefault((v, u), []).append((p & 3, d & 3))
    return groups


# ---------------------------------------------------------------------------
# Melons.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Melon:
    """A triple edge forming one left, one right and one straight 2-face.

    ``edges`` are the three (slot_u, slot_v) pairs ordered so that
    (e1, e2) is the left 2-face, (e2, e3) the right one and (e1, e3)
    the straight one.  ``free_u`` / ``free_v`` are the exterior slots.
    """

    u: int
    v: int
    edges: tuple
    free_u: int
    free_v: int


def _order_melon_edges(e1, e2, e3):
    """Order three melon edges as (left-pair, right-pair, straight-pair)."""
    for a, b, c in ((e1, e2, e3), (e1, e3, e2), (e2, e1, e3),
                    (e2, e3, e1), (e3, e1, e2), (e3, e2, e1)):
        if (pair_face_type(a[0], a[1], b[0], b[1]) == "L"
                and pair_face_type(b[0], b[1], c[0], c[1]) == "R"
                and pair_face_type(a[0], a[1], c[0], c[1]) == "S"):
            return (a, b, c)
    raise NotAMelon("edges do not form a melon")


def find_melons(g):
    """All melons of ``g``, in increasing (u, v, slots) order.

    On a rooted graph, triples containing the root edge are skipped:
    the fake root vertex subdivides the root edge, so it cannot be one
    of three parallel edges.  Chain-vertices never carry melons.
    """
    types = _types_of(g)
    rd = set(_root_darts(g))
    melons = []
    for (u, v), edges in sorted(parallel_edge_groups(g).items()):
        if len(edges) < 3:
            continue
        if types[u] != STD or types[v] != STD:
            continue
        usable = [e for e in edges if 4 * u + e[0] not in rd]
        usable.sort()
        n = len(usable)
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    if triple_is_melon(usable[i], usable[j], usable[k]):
                        tri = _order_melon_edges(usable[i], usable[j],
                                                 usable[k])
                        used_u = {e[0] for e in tri}
                        used_v = {e[1] for e in tri}
                        all_u = {e[0] for e in edges}
                        melons.append(Melon(
                            u, v, tri,
                            free_u=({0, 1, 2, 3} - used_u).pop(),
                            free_v=({0, 1, 2, 3} - used_v).pop()))
    return melons


def _splice_out(g, gone, through):
    """Delete the vertices in ``gone`` and reroute edges through them.

    ``through`` is an involution on the darts of the deleted vertices
    describing how each deleted gadget forwards a strand from one of
    its boundary half-edges to another (e.g. the two exterior legs of
    a melon, or the two legs on one side of a dipole).  Every deleted
    dart must either appear in ``through`` or be paired with a deleted
    dart.  Surviving attachment points are welded by following the
    alternation of pairing and ``through``; paths that close without
    meeting a survivor become cycle components.  The root migrates to
    the outgoing end of its welded edge, or onto a new cycle component
    if its edge closes up.
    """
    root = g.root
    cycles = g.cycle_components
    root_on_cycle = g.root_on_cycle
    root_lost = root is not None and (root >> 2) in gone
    welds = []
    touched = set()
    # Strands anchored at survivors: start from each surviving dart
    # whose partner is deleted; alternate through/pairing until a
    # survivor reappears, then weld the two anchors.
    for s in range(g.num_darts):
        if (s >> 2) in gone or (g.pairing[s] >> 2) not in gone:
            continue
        d = g.pairing[s]
        if d in touched:
            continue
        hit = d == root
        while True:
            touched.add(d)
            d = through[d]
            hit = hit or d == root
            touched.add(d)
            d = g.pairing[d]
            if (d >> 2) not in gone:
                break
            hit = hit or d == root
        welds.append((s, d))
        if root_lost and hit:
            root = s if (s & 1) == 0 else d
            root_lost = False
    # Remaining through-darts lie on strands closed inside the deleted
    # set; each such orbit becomes a bare cycle component.
    for start in sorted(through):
        if start in touched:
            continue
        cycles += 1
        hit = False
        d = start
        while d not in touched:
            hit = hit or d == root
            touched.add(d)
            d = through[d]
            hit = hit or d == root
            touched.add(d)
            d = g.pairing[d]
        if root_lost and hit:
            root = None
            root_on_cycle = True
            root_lost = False
    if root_lost:
        raise MomapsError("root edge vanished during splice")
    from .graph import _delete_vertices
    return _delete_vertices(g, gone, welds, root, cycles, root_on_cycle)


def remove_melon(g, melon):
    """Remove a melon, welding its two exterior legs into one edge."""
    require_valid(g)
    du = 4 * melon.u + melon.free_u
    dv = 4 * melon.v + melon.free_v
    out = _splice_out(g, {melon.u, melon.v}, {du: dv, dv: du})
    return _retype(g, out, {melon.u, melon.v}, ())


def _retype(old, new, gone, added_types):
    """Carry chain types through a vertex deletion, if any are present."""
    types = _types_of(old)
    if not any(types) and not any(added_types):
        if isinstance(new, SchemeGraph) or not isinstance(old, SchemeGraph):
            return new
    keep = [types[v] for v in range(old.num_vertices) if v not in gone]
    keep.extend(added_types)
    return SchemeGraph(new.num_vertices, new.pairing, new.root,
                       new.cycle_components, new.root_on_cycle,
                       tuple(keep))


def insert_melon(g, dart):
    """Insert a melon in the middle of the edge carrying ``dart``.

    The inverse of :func:`remove_melon`; inserting at the root edge is
    allowed (the melon lands on the far side of the fake root vertex).
    """
    require_valid(g)
    if any(_types_of(g)):
        raise InconsistentSubstitution(
            "melon insertion is defined on plain graphs")
    q_out = dart if (dart & 1) == 0 else g.pairing[dart]
    q_in = g.pairing[q_out]
    n = g.num_vertices
    u, v = n, n + 1
    pairing = list(g.pairing) + [-1] * 8

    def join(a, b):
        pairing[a] = b
        pairing[b] = a

    # Triple edge: (u0, v3) and (u2, v1) straight-paired, (u1, v2)
    # closing the left and right 2-faces; exterior legs u3 (in), v0
    # (out).
    join(4 * u + 0, 4 * v + 3)
    join(4 * u + 2, 4 * v + 1)
    join(4 * u + 1, 4 * v + 2)
    join(q_out, 4 * u + 3)
    join(4 * v + 0, q_in)
    return MOGraph(n + 2, tuple(pairing), g.root, g.cycle_components,
                   g.root_on_cycle)


def melon_free_core(g):
    """Greedy maximal melon removal; returns (core, removed_count)."""
    count = 0
    while True:
        melons = find_melons(g)
        if not melons:
            return g, count
        g = remove_melon(g, melons[0])
        count += 1


def is_melonic(g):
    """Whether a rooted connected graph reduces to the cycle-graph."""
    core, _ = melon_free_core(g)
    return (core.num_vertices == 0 and core.cycle_components == 1)


def is_melon_free(g):
    """No melon, and no edge adjacent to a chain-vertex.

    An edge is adjacent to a chain-vertex when its two half-edges are
    the two half-edges on one side of that chain-vertex.  The root
    edge is exempt (the fake root vertex subdivides it).
    """
    types = _types_of(g)
    rd = set(_root_darts(g))
    for v, t in enumerate(types):
        if t == STD:
            continue
        for a in (4 * v, 4 * v + 2):
            if g.pairing[a] == a + 1 and a not in rd:
                return False
    return not find_melons(g)


# ---------------------------------------------------------------------------
# Dipoles and chains.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Dipole:
    """A 2-face on two distinct standard vertices, avoiding the root.

    ``sides`` are the two exterior (dart, dart) pairs; each side holds
    one ingoing and one outgoing half-edge, one on each vertex.
    """

    type: str  # 'L', 'R' or 'S'
    u: int
    v: int
    edges: tuple  # two (slot_u, slot_v) pairs
    sides: tuple  # two (dart, dart) pairs

    @property
    def vertices(self):
        return (self.u, self.v)

    @property
    def is_chain_vertex(self):
        return False


@dataclass(frozen=True)
class ChainVertexElement:
    """A chain-vertex viewed as a chain element."""

    type: ChainVertexType
    vertex: int

    @property
    def vertices(self):
        return (self.vertex,)

    @property
    def sides(self):
        w = self.vertex
        return ((4 * w + 0, 4 * w + 1), (4 * w + 2, 4 * w + 3))

    @property
    def is_chain_vertex(self):
        return True


def _dipole_sides(u, v, e1, e2, t):
    """Exterior sides of the dipole with edges ``e1``, ``e2``.

    For an L or R dipole the edges can be written (a, b-1) and
    (a-1, b) modulo 4; the 2-face corners sit at (u, a) and (v, b) and
    the exterior legs group as {a+1, b+2} and {a+2, b+1}.  For an S
    dipole the edges are (s, t), (s+2, t+2) and the straight 2-face
    walk enters at (u, s+2)'s partner side; the exterior legs group as
    {s+1, t+1} and {s+3, t+3}.
    """
    (a1, c1), (a2, c2) = e1, e2
    if t == "S":
        s, tt = a1, c2
        if (a2 - a1) & 3 != 2:
            s, tt = a2, c1
        sides = (((s + 1) & 3, (tt + 1) & 3), ((s + 3) & 3, (tt + 3) & 3))
    else:
        if (a1 - a2) & 3 == 1 and (c2 - c1) & 3 == 1:
            a, b = a1, c2
        else:
            a, b = a2, c1
        sides = (((a + 1) & 3, (b + 2) & 3), ((a + 2) & 3, (b + 1) & 3))
    return tuple(tuple(sorted((4 * u + su, 4 * v + sv)))
                 for su, sv in sides)


def find_dipoles(g):
    """All dipoles of ``g`` in increasing (u, v, slots) order."""
    types = _types_of(g)
    rd = set(_root_darts(g))
    out = []
    for (u, v), edges in sorted(parallel_edge_groups(g).items()):
        if types[u] != STD or types[v] != STD:
            continue
        usable = sorted(e for e in edges if 4 * u + e[0] not in rd)
        for i in range(len(usable)):
            for j in range(i + 1, len(usable)):
                e1, e2 = usable[i], usable[j]
                t = pair_face_type(e1[0], e1[1], e2[0], e2[1])
                if t is None:
                    continue
                out.append(Dipole(t, u, v, (e1, e2),
                                  _dipole_sides(u, v, e1, e2, t)))
    return out


def chain_elements(g):
    """Dipoles plus chain-vertices, the building blocks of chains."""
    elements = list(find_dipoles(g))
    for v, t in enumerate(_types_of(g)):
        if t != STD:
            elements.append(ChainVertexElement(ChainVertexType(t), v))
    return elements


@dataclass(frozen=True)
class Chain:
    """A maximal proper chain: two or more side-linked elements.

    ``elements`` are ordered along the chain; ``outer_sides`` are the
    unlinked side of the first and of the last element.
    """

    elements: tuple
    outer_sides: tuple

    @property
    def vertices(self):
        return tuple(v for el in self.elements for v in el.vertices)

    @property
    def type(self):
        return chain_type_of(self.type_sequence)

    @property
    def type_sequence(self):
        """Element types as a string, chain-vertices in brackets."""
        parts = []
        for el in self.elements:
            if el.is_chain_vertex:
                parts.append(f"[{el.type.label}]")
            else:
                parts.append(el.type)
        return "".join(parts)


def chain_type_of(type_sequence):
    """Chain-vertex type realized by a sequence of element types.

    The sequence uses 'L', 'R', 'S' for dipoles and bracketed labels
    for chain-vertices (as produced by :attr:`Chain.type_sequence`).
    """
    tokens = []
    rest = type_sequence
    while rest:
        if rest[0] == "[":
            end = rest.index("]")
            tokens.append(rest[1:end])
            rest = rest[end + 1:]
        else:
            tokens.append(rest[0])
            rest = rest[1:]
    if len(tokens) < 2:
        raise InconsistentSubstitution(
            f"a proper chain needs at least two elements: {type_sequence!r}")
    kinds = set()
    s_parity = 0
    for tok in tokens:
        if tok in ("L", "R"):
            kinds.add(tok)
        elif tok == "S":
            kinds.add("S")
            s_parity ^= 1
        elif tok == "Se":
            kinds.add("S")
        elif tok == "So":
            kinds.add("S")
            s_parity ^= 1
        elif tok == "B":
            kinds.add("B")
        else:
            raise InconsistentSubstitution(f"unknown element type {tok!r}")
    if len(kinds) > 1 or kinds == {"B"}:
        return ChainVertexType.B
    kind = kinds.pop()
    if kind == "L":
        return ChainVertexType.L
    if kind == "R":
        return ChainVertexType.R
    return ChainVertexType.SO if s_parity else ChainVertexType.SE


def _side_links(g, elements):
    """Map each linked side to (other element index, other side index).

    Two sides are linked when the two half-edges of one are paired
    with the two half-edges of the other and neither edge is the root
    edge.
    """
    rd = set(_root_darts(g))
    owner = {}
    for i, el in enumerate(elements):
        for si, side in enumerate(el.sides):
            owner[frozenset(side)] = (i, si)
    links = {}
    for i, el in enumerate(elements):
        for si, side in enumerate(el.sides):
            x, y = side
            if x in rd or y in rd:
                continue
            px, py = g.pairing[x], g.pairing[y]
            if px in rd or py in rd:
                continue
            other = owner.get(frozenset((px, py)))
            if other is None or other == (i, si):
                continue
            oi, osi = other
            if set(elements[oi].vertices) & set(el.vertices):
                continue
            links[(i, si)] = other
    # Links must be mutual (they are, by construction, but keep only
    # symmetric entries for safety).
    return {k: v for k, v in links.items() if links.get(v) == k}


def find_maximal_chains(g, on_closed_chain=None):
    """All maximal proper chains of ``g``.

    Closed chains (a cycle of side-linked elements, which cannot occur
    in a rooted connected graph because the root edge interrupts every
    cycle of links) are rejected; ``on_closed_chain`` is called with
    the element cycle if provided, otherwise an error is raised.
    """
    elements = chain_elements(g)
    links = _side_links(g, elements)
    degree_of = {}
    for (i, si) in links:
        degree_of[i] = degree_of.get(i, 0) + 1
    chains = []
    visited = set()
    for i, el in enumerate(elements):
        if i in visited or degree_of.get(i, 0) != 1:
            continue
        # Walk from a chain end: exactly one side of i is linked.
        linked = 0 if (i, 0) in links else 1
        path = [i]
        visited.add(i)
        cur, exit_side = i, linked
        while True:
            nxt = links.get((cur, exit_side))
            if nxt is None:
                break
            cur, entered = nxt
            path.append(cur)
            visited.add(cur)
            exit_side = 1 - entered
        chains.append(Chain(
            tuple(elements[k] for k in path),
            (el.sides[1 - linked], elements[path[-1]].sides[exit_side])))
    # Detect closed chains: linked elements never reached from an end.
    for (i, si) in links:
        if i not in visited:
            cycle = [i]
            cur, cur_side = links[(i, si)]
            while cur != i:
                cycle.append(cur)
                cur, cur_side = links[(cur, 1 - cur_side)]
            if on_closed_chain is not None:
                on_closed_chain([elements[k] for k in cycle])
                for k in cycle:
                    visited.add(k)
            else:
                raise MomapsError(
                    "closed chain of elements found; the graph cannot "
                    "be a rooted connected graph")
    # Maximal proper chains must be vertex-disjoint.
    seen = set()
    for ch in chains:
        for v in ch.vertices:
            if v in seen:
                raise MomapsError(
                    "maximal proper chains are not vertex-disjoint")
            seen.add(v)
    return chains


# ---------------------------------------------------------------------------
# Scheme extraction and chain-vertex substitution.
# ---------------------------------------------------------------------------


def extract_scheme(g, return_chains=False):
    """Replace every maximal proper chain of ``g`` by a chain-vertex.

    Returns the scheme as a :class:`SchemeGraph` (and the list of
    replaced :class:`Chain` records if ``return_chains`` is set).  On a
    graph that is already free of proper chains this is the identity
    up to relabeling.
    """
    require_valid(g)
    chains = find_maximal_chains(g)
    types = _types_of(g)
    if not chains:
        scheme = as_scheme_graph(g)
        return (scheme, []) if return_chains else scheme
    gone = set()
    for ch in chains:
        gone.update(ch.vertices)
    keep = [v for v in range(g.num_vertices) if v not in gone]
    newid = {v: i for i, v in enumerate(keep)}
    new_types = [types[v] for v in keep]
    img = {}
    for d in range(g.num_darts):
        if (d >> 2) not in gone:
            img[d] = 4 * newid[d >> 2] + (d & 3)
    for ch in chains:
        w = len(new_types)
        new_types.append(int(ch.type))
        # Side A of the chain-vertex (slots 0 out, 1 in) stands for the
        # outer side of the first element, side B for the last one.
        for side, (slot_out, slot_in) in zip(ch.outer_sides,
                                             ((0, 1), (2, 3))):
            x, y = side
            if x & 1:
                x, y = y, x  # x outgoing, y ingoing
            img[x] = 4 * w + slot_out
            img[y] = 4 * w + slot_in
    pairing = [-1] * (4 * len(new_types))
    for d, nd in img.items():
        p = g.pairing[d]
        if p in img:
            pairing[nd] = img[p]
    if -1 in pairing:
        raise MomapsError("scheme extraction left an unpaired half-edge")
    root = None if g.root is None else img[g.root]
    if root is not None and root & 1:
        raise MomapsError("root half-edge lost its orientation")
    scheme = SchemeGraph(len(new_types), tuple(pairing), root,
                         g.cycle_components, g.root_on_cycle,
                         tuple(new_types))
    return (scheme, chains) if return_chains else scheme


# Dipole gadgets used when substituting a chain-vertex by a chain.
# Each entry: (edges, side_1, side_2) with slots on the local pair of
# vertices (u, v); side_1 plays the role of side A.
_DIPOLE_TEMPLATE = {
    "L": ((( "u", 0, "v", 3), ("u", 3, "v", 0)),
          (("u", 1), ("v", 2)), (("u", 2), ("v", 1))),
    "R": ((( "u", 1, "v", 0), ("u", 0, "v", 1)),
          (("u", 2), ("v", 3)), (("u", 3), ("v", 2))),
    "S": ((( "u", 2, "v", 1), ("u", 0, "v", 3)),
          (("u", 1), ("v", 2)), (("u", 3), ("v", 0))),
}


def substitute_chain_vertex(g, w, chain="canonical"):
    """Replace chain-vertex ``w`` by a consistent chain of dipoles.

    ``chain`` is a string of dipole types ('L', 'R', 'S'), or
    "canonical" for the shortest chain matching the type of ``w``.
    Side A of ``w`` (slots 0 and 1) becomes the outer side of the
    first dipole.
    """
    require_valid(g)
    types = _types_of(g)
    if types[w] == STD:
        raise InconsistentSubstitution(f"vertex {w} is not a chain-vertex")
    wtype = ChainVertexType(types[w])
    if chain == "canonical":
        chain = CANONICAL_SUBSTITUTION[wtype]
    if chain_type_of(chain) != wtype:
        raise InconsistentSubstitution(
            f"chain {chain!r} does not realize a type-{wtype.label} "
            "chain-vertex")
    # Remove w, append 2 * len(chain) standard vertices.
    keep = [v for v in range(g.num_vertices) if v != w]
    newid = {v: i for i, v in enumerate(keep)}
    n = len(keep)
    pairing = [-1] * (4 * n + 8 * len(chain))

    def join(a, b):
        if (a & 1) == (b & 1):
            raise InconsistentSubstitution(
                "substitution would join two same-direction half-edges")
        pairing[a] = b
        pairing[b] = a

    for d in range(g.num_darts):
        p = g.pairing[d]
        if (d >> 2) == w or (p >> 2) == w:
            continue
        pairing[4 * newid[d >> 2] + (d & 3)] = 4 * newid[p >> 2] + (p & 3)

    sides = []
    for k, t in enumerate(chain):
        u = n + 2 * k
        v = u + 1
        edges, s1, s2 = _DIPOLE_TEMPLATE[t]
        for (_, su, __, sv) in edges:
            join(4 * u + su, 4 * v + sv)
        local = {"u": u, "v": v}
        sides.append((tuple(4 * local[vn] + s for vn, s in s1),
                      tuple(4 * local[vn] + s for vn, s in s2)))
    # Link consecutive dipoles: side 2 of dipole k to side 1 of k + 1,
    # outgoing to ingoing.
    for k in range(len(chain) - 1):
        for a in sides[k][1]:
            b = next(d for d in sides[k + 1][0] if (d & 1) != (a & 1))
            join(a, b)
    # Attach the chain ends where the sides of w were attached.
    for (host_out, host_in), outer in (((4 * w, 4 * w + 1), sides[0][0]),
                                       ((4 * w + 2, 4 * w + 3),
                                        sides[-1][1])):
        po, pi = g.pairing[host_out], g.pairing[host_in]
        if po == host_in:
            # Side of w closed on itself: close the outer side too.
            a, b = outer
            join(a, b)
            continue

        def landing(d):
            if (d >> 2) == w:
                # Host partner sits on the other side of w itself.
                other = sides[-1][1] if d >= 4 * w + 2 else sides[0][0]
                return next(x for x in other if (x & 1) == (d & 1))
            return 4 * newid[d >> 2] + (d & 3)

        out_leg = next(d for d in outer if (d & 1) == 0)
        in_leg = next(d for d in outer if d & 1)
        if pairing[landing(po)] == -1:
            join(landing(po), out_leg)
        if pairing[landing(pi)] == -1:
            join(landing(pi), in_leg)
    if -1 in pairing:
        raise InconsistentSubstitution("substitution left unpaired slots")
    root = g.root
    if root is not None:
        if root >> 2 == w:
            # The root edge hung off a side of w; it now hangs off the
            # matching outer leg of the chain.
            outer = sides[0][0] if (root & 3) < 2 else sides[-1][1]
            root = next(d for d in outer if (d & 1) == 0)
        else:
            root = 4 * newid[root >> 2] + (root & 3)
    new_types = [types[v] for v in keep] + [STD] * (2 * len(chain))
    out = SchemeGraph(n + 2 * len(chain), tuple(pairing), root,
                      g.cycle_components, g.root_on_cycle,
                      tuple(new_types))
    require_valid(out)
    return out


def substitute_all(g, chains=None):
    """Substitute every chain-vertex (canonically unless given).

    ``chains`` optionally maps a chain-vertex index of ``g`` to the
    dipole-type string to use.  Returns a plain :class:`MOGraph`.
    """
    while True:
        cvs = [v for v, t in enumerate(_types_of(g)) if t != STD]
        if not cvs:
            return MOGraph(g.num_vertices, g.pairing, g.root,
                           g.cycle_components, g.root_on_cycle)
        w = cvs[0]
        spec = "canonical" if chains is None else chains.get(w, "canonical")
        g = substitute_chain_vertex(g, w, spec)
        if chains is not None:
            # Vertex indices above w shift down by one; new standard
            # vertices land at the end and never collide.
            chains = {(k - 1 if k > w else k): v
                      for k, v in chains.items() if k != w}


# ---------------------------------------------------------------------------
# Faces and degree for graphs with chain-vertices.
# ---------------------------------------------------------------------------


def scheme_face_counts(g):
    """(f_left, f_right, f_straight) using the chain-vertex strand rules.

    Faces of each family are the cycles of the union of two perfect
    matchings on the darts: the pairing matching and the in-vertex arc
    matching from :data:`ARC_TABLE`.  Each face yields exactly two
    such alternating cycles (one per traversal direction), so the
    cycle count is halved.  Cycle components add one face per family.
    """
    types = _types_of(g)
    counts = []
    for fam in (0, 1, 2):
        arc = {}
        for v in range(g.num_vertices):
            for f, sa, sb in ARC_TABLE[types[v]]:
                if f == fam:
                    arc[4 * v + sa] = 4 * v + sb
                    arc[4 * v + sb] = 4 * v + sa
        seen = [False] * g.num_darts
        cycles = 0
        for start in range(g.num_darts):
            if seen[start]:
                continue
            cycles += 1
            d = start
            while not seen[d]:
                seen[d] = True
                d = g.pairing[arc[d]]
        if cycles % 2:
            raise MomapsError("odd alternating-cycle count in face trace")
        counts.append(cycles // 2 + g.cycle_components)
    return tuple(counts)


@dataclass(frozen=True)
class SchemeDegree:
    c: int
    v_std: int
    n_unbroken: int
    n_broken: int
    f_left: int
    f_right: int
    f_straight: int
    two_delta: int

    @property
    def f(self):
        return self.f_left + self.f_right + self.f_straight


def scheme_degree(g):
    """Degree data via ``2 delta = 6c + 3V - 2F + 4U + 6B``."""
    require_valid(g)
    types = _types_of(g)
    fl, fr, fs = scheme_face_counts(g)
    u = sum(1 for t in types if t in (CV_L, CV_R, CV_SE, CV_SO))
    b = sum(1 for t in types if t == CV_B)
    v = sum(1 for t in types if t == STD)
    c = len(vertex_components(g)) + g.cycle_components
    two_delta = 6 * c + 3 * v - 2 * (fl + fr + fs) + 4 * u + 6 * b
    return SchemeDegree(c, v, u, b, fl, fr, fs, two_delta)


# Alias under the operation's descriptive name.
degree_with_chain_vertices = scheme_degree


def scheme_is_planar(g):
    """Whether graphs reducing to this scheme are planar.

    Chain substitution inserts planar pieces into existing faces, so
    the left-right genus is the same for every substitution; the check
    substitutes the shortest chain of each type and reads the genus of
    the resulting plain graph.  Schemes without chain-vertices are
    checked directly.
    """
    from .graph import degree
    return degree(substitute_all(g)).is_planar


def scheme_two_delta_by_substitution(g):
    """Degree of a scheme computed on its fully substituted graph."""
    from .graph import degree
    plain = substitute_all(g)
    return degree(plain).two_delta


# ---------------------------------------------------------------------------
# Removals.
# ---------------------------------------------------------------------------


def remove_element(g, element):
    """Remove a dipole or chain-vertex, welding the legs on each side."""
    require_valid(g)
    through = {}
    for x, y in element.sides:
        through[x] = y
        through[y] = x
    gone = set(element.vertices)
    out = _splice_out(g, gone, through)
    return _retype(g, out, gone, ())


@dataclass(frozen=True)
class RemovalReport:
    separating: bool
    two_delta_before: int
    two_delta_after: int

    @property
    def two_delta_drop(self):
        return self.two_delta_before - self.two_delta_after


def removal_analysis(g, element):
    """Remove ``element`` and report the degree change.

    Separating removals keep the degree; a non-separating broken
    chain-vertex drops the degree by 3; a non-separating dipole or
    unbroken chain-vertex drops it by 1 or 3 (``two_delta_drop`` of
    6, or of 2 or 6).
    """
    before = scheme_degree(g)
    comps_before = len(vertex_components(g)) + g.cycle_components
    reduced = remove_element(g, element)
    after = scheme_degree(reduced)
    comps_after = len(vertex_components(reduced)) + reduced.cycle_components
    return RemovalReport(comps_after > comps_before, before.two_delta,
                         after.two_delta), reduced


# ---------------------------------------------------------------------------
# Scheme JSON.
# ---------------------------------------------------------------------------


def scheme_to_json_dict(g):
    from .graph import to_json_dict
    doc = to_json_dict(g)
    cvs = []
    for v, t in sorted(getattr(g, "chain_vertices", {}).items()):
        cvs.append({
            "type": t.label,
            "sides": [[[v, 0], [v, 1]], [[v, 2], [v, 3]]],
        })
    doc["chain_vertices"] = cvs
    return doc


def scheme_from_json_dict(doc):
    from .graph import from_json_dict
    base = dict(doc)
    cvs = base.pop("chain_vertices", [])
    g = from_json_dict(base)
    types = [STD] * g.num_vertices
    for item in cvs:
        t = ChainVertexType.from_label(item["type"])
        verts = {v for side in item["sides"] for v, _ in side}
        if len(verts) != 1:
            raise ValidationError(
                ["chain-vertex sides must sit on a single vertex"])
        types[verts.pop()] = int(t)
    return as_scheme_graph(g, tuple(types))
