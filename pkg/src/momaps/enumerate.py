"""Exhaustive enumeration, count tables, scheme catalogs, dominants.

The low-level search lives in :mod:`momaps.generate` (reference
implementation) and :mod:`momaps._fastcore` (compiled mirror); this
module exposes the user-facing operations:

* :func:`gen_rooted` — one representative per rooted isomorphism class;
* :func:`count_by_degree` — exact counts stratified by vertex count,
  degree, planarity and knot-components;
* :func:`build_scheme_catalog` — the reduced schemes of one degree,
  collected from exhaustive scans, with stabilization metadata;
* :func:`gen_dominant_schemes` — the dominant schemes of one degree
  built from rooted binary trees.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .canonical import canonical_rooted
from .errors import MomapsError, ValidationError
from .generate import CV_B, Enumerator, STD
from .graph import MOGraph, cycle_graph, degree, trace_faces
from .reduction import (
    ChainVertexType,
    SchemeGraph,
    as_scheme_graph,
    extract_scheme,
    find_dipoles,
    find_maximal_chains,
    is_melon_free,
    scheme_degree,
)
from .series import SchemeParams


def _use_fast(engine):
    if engine == "python":
        return False
    if engine in ("fast", "auto"):
        try:
            from . import _fastcore  # noqa: F401
            return True
        except ImportError:
            if engine == "fast":
                raise
            return False
    raise MomapsError(f"unknown engine {engine!r}")


def gen_rooted(max_vertices, *, two_delta_max=None, melon_free=False,
               engine="auto"):
    """One rooted connected graph per isomorphism class, V ≤ max.

    Yields the rooted cycle-graph first (the V = 0 case), then every
    canonical representative produced by the backtracking search, in
    search order.  ``melon_free`` restricts to graphs without melons.
    """
    if max_vertices < 0:
        raise ValidationError(["max_vertices must be non-negative"])
    yield cycle_graph(rooted=True)
    if max_vertices == 0:
        return
    if _use_fast(engine):
        from ._fastcore import fast_collect
        views, _ = fast_collect(max_vertices, two_delta_max=two_delta_max,
                                leaf_two_delta_max=two_delta_max,
                                allow_melons=not melon_free)
        for lv in views:
            yield lv.graph()
        return
    out = []

    def leaf(lv):
        if two_delta_max is not None and lv.two_delta > two_delta_max:
            return
        out.append(lv.graph())

    enum = Enumerator(max_vertices, two_delta_max=two_delta_max,
                      allow_melons=not melon_free)
    enum.run(leaf)
    yield from out


@dataclass
class CountTable:
    """Exact counts of rooted graphs by vertex count and degree.

    ``rows`` maps ``(two_n, two_delta)`` to ``(count, planar_count)``
    where ``two_n`` is the vertex count and ``two_delta`` the doubled
    degree.  ``knots`` maps ``(two_n, k)`` to the number of planar
    graphs with ``k`` straight faces (knot-components).  The rooted
    cycle-graph (V = 0) is included.
    """

    max_vertices: int
    melon_free: bool = False
    rows: dict = field(default_factory=dict)
    knots: dict = field(default_factory=dict)

    def count(self, two_n, two_delta):
        return self.rows.get((two_n, two_delta), (0, 0))[0]

    def planar_count(self, two_n, two_delta):
        return self.rows.get((two_n, two_delta), (0, 0))[1]

    def total(self, two_n):
        return sum(c for (v, _), (c, _) in self.rows.items() if v == two_n)

    def planar_total(self, two_n):
        return sum(p for (v, _), (_, p) in self.rows.items() if v == two_n)

    def knot_count(self, two_n, k):
        return self.knots.get((two_n, k), 0)

    def to_csv(self):
        lines = ["two_n,two_delta,count,planar_count"]
        for (two_n, two_delta) in sorted(self.rows):
            c, p = self.rows[(two_n, two_delta)]
            lines.append(f"{two_n},{two_delta},{c},{p}")
        return "\n".join(lines) + "\n"


def count_by_degree(max_vertices, *, two_delta_max=None, melon_free=False,
                    engine="auto"):
    """Exact stratified counts over all rooted graphs with V ≤ max."""
    table = CountTable(max_vertices, melon_free)
    # V = 0: the rooted cycle-graph, planar, degree 0, one knot.
    table.rows[(0, 0)] = (1, 1)
    table.knots[(0, 1)] = 1
    if max_vertices == 0:
        return table
    if _use_fast(engine):
        from ._fastcore import fast_count_table
        raw, stats = fast_count_table(
            max_vertices, two_delta_max=two_delta_max,
            allow_melons=not melon_free,
            leaf_two_delta_max=two_delta_max)
        if stats["parity_violations"] or stats["lambda_violations"]:
            raise MomapsError(f"degree identities violated: {stats}")
        for (nv, td, planar, fs), cnt in raw.items():
            c, p = table.rows.get((nv, td), (0, 0))
            table.rows[(nv, td)] = (c + cnt, p + (cnt if planar else 0))
            if planar:
                table.knots[(nv, fs)] = table.knots.get((nv, fs), 0) + cnt
        return table

    def leaf(lv):
        td = lv.two_delta
        if two_delta_max is not None and td > two_delta_max:
            return
        planar = lv.two_g_lr == 0
        c, p = table.rows.get((lv.num_vertices, td), (0, 0))
        table.rows[(lv.num_vertices, td)] = (c + 1, p + (1 if planar else 0))
        if planar:
            key = (lv.num_vertices, lv.f_straight)
            table.knots[key] = table.knots.get(key, 0) + 1

    Enumerator(max_vertices, two_delta_max=two_delta_max,
               allow_melons=not melon_free).run(leaf)
    return table


# ---------------------------------------------------------------------------
# Scheme catalog.
# ---------------------------------------------------------------------------


def scheme_params_of(s):
    """The generating-function exponents of a scheme graph."""
    kinds = {t: 0 for t in ChainVertexType}
    for _, t in getattr(s, "chain_vertices", {}).items():
        kinds[t] += 1
    two_p = s.num_vertices - sum(kinds.values())
    return SchemeParams(two_p,
                        c_l=kinds[ChainVertexType.L],
                        c_r=kinds[ChainVertexType.R],
                        s_e=kinds[ChainVertexType.SE],
                        s_o=kinds[ChainVertexType.SO],
                        b=kinds[ChainVertexType.B])


def is_reduced_scheme(s, two_delta=None):
    """Melon-free, no proper chain, and optionally of a given degree."""
    if not is_melon_free(s):
        return False
    try:
        chains = find_maximal_chains(s)
    except MomapsError:
        return False  # closed chain or overlapping chains
    if chains:
        return False
    if two_delta is not None and scheme_degree(s).two_delta != two_delta:
        return False
    return True


@dataclass
class SchemeCatalog:
    """The reduced schemes of one degree found by exhaustive scans.

    ``members`` maps the canonical rooted code of each scheme to a
    ``(SchemeGraph, SchemeParams)`` pair.  Completeness is empirical:
    ``max_vertices_scanned`` is the size cap of the substitution scan
    and ``last_growth_at`` the largest minimal-substitution size at
    which a new scheme appeared.  The catalog is called stabilized
    when the top size band of the scan found nothing new.
    """

    two_delta: int
    members: dict = field(default_factory=dict)
    max_vertices_scanned: int = 0
    bmax_vertices_scanned: int = 0
    last_growth_at: int = 0

    def params(self):
        return [p for _, p in self.members.values()]

    def schemes(self):
        return [s for s, _ in self.members.values()]

    def __len__(self):
        return len(self.members)

    def __contains__(self, scheme):
        return canonical_rooted(scheme) in self.members

    @property
    def stabilized(self):
        return (self.max_vertices_scanned >= 2
                and self.last_growth_at <= self.max_vertices_scanned - 2)

    @property
    def certified_order(self):
        """Vertex index up to which series coefficients are complete.

        Every scheme whose minimal substitution has at most
        ``max_vertices_scanned`` vertices was necessarily seen by the
        substitution scan, so coefficients up to that index are exact
        even when the catalog as a whole keeps growing.
        """
        return self.max_vertices_scanned

    def add(self, scheme, source_size=None):
        code = canonical_rooted(scheme)
        if code in self.members:
            return False
        params = scheme_params_of(scheme)
        self._assert_bounds(scheme, params)
        self.members[code] = (scheme, params)
        grew_at = (params.min_vertices if source_size is None
                   else source_size)
        self.last_growth_at = max(self.last_growth_at, grew_at)
        return True

    def _assert_bounds(self, scheme, params):
        sd = scheme_degree(scheme)
        if sd.two_delta != self.two_delta:
            raise MomapsError(
                f"scheme of doubled degree {sd.two_delta} offered to the "
                f"degree-{self.two_delta} catalog")
        if self.two_delta == 0:
            # The bounds below are stated for positive degree; the only
            # degree-0 scheme is the rooted cycle-graph.
            return
        n_elements = params.c + len(find_dipoles(scheme))
        # N <= 7*delta - 1 and b <= 4*delta - 1.
        if 2 * n_elements > 7 * self.two_delta - 2:
            raise MomapsError(
                f"scheme violates the dipole+chain-vertex bound: "
                f"{n_elements} > (7*{self.two_delta}/2 - 1)")
        if 2 * params.b > 2 * 2 * self.two_delta - 2:
            raise MomapsError(
                f"scheme violates the broken bound: b={params.b}")


def build_scheme_catalog(two_delta, max_vertices=10, *, engine="auto",
                         bmax_vertices=None):
    """Collect reduced schemes of one degree from exhaustive scans.

    Two complementary exhaustive slices feed the catalog:

    * every melon-free rooted graph with at most ``max_vertices``
      vertices is reduced to its scheme — this finds every scheme
      whose minimal substitution fits in the cap, which certifies the
      counting series up to that order;
    * every scheme made of standard vertices plus the maximal number
      ``2*two_delta - 1`` of broken chain-vertices (and nothing else)
      with at most ``bmax_vertices`` total vertices is enumerated
      directly — dominant schemes live in this slice but have minimal
      substitutions far beyond any feasible cap of the first slice.

    ``bmax_vertices`` defaults to ``5*two_delta - 3``, the size of the
    largest possible dominant scheme of the degree.
    """
    if two_delta < 0:
        raise ValidationError(["two_delta must be non-negative"])
    cat = SchemeCatalog(two_delta)
    cat.max_vertices_scanned = max_vertices
    if two_delta == 0:
        # Degree 0: graphs are melonic; the unique scheme is the
        # rooted cycle-graph (no vertices at all).
        cat.add(as_scheme_graph(cycle_graph(rooted=True)), 0)
        cat.last_growth_at = 0
        return cat

    # Slice 1: substitution scan, in increasing source size so that
    # the growth metadata records the smallest source of each scheme.
    sources = [g for g in gen_rooted(max_vertices, two_delta_max=two_delta,
                                     melon_free=True, engine=engine)
               if g.num_vertices > 0 and degree(g).two_delta == two_delta]
    sources.sort(key=lambda g: g.num_vertices)
    for g in sources:
        cat.add(extract_scheme(g), source_size=g.num_vertices)

    # Slice 2: direct scan of b-maximal all-broken schemes.
    b = 2 * two_delta - 1
    if bmax_vertices is None:
        bmax_vertices = 5 * two_delta - 3
    cat.bmax_vertices_scanned = bmax_vertices
    if bmax_vertices >= b + 1 and _use_fast(engine):
        from ._fastcore import fast_collect
        views, _ = fast_collect(
            bmax_vertices, two_delta_max=two_delta,
            leaf_two_delta_max=two_delta, allow_melons=False,
            vertex_menu=(STD, CV_B), max_cvs=b, max_bcvs=b,
            max_dipoles=0, min_bcvs=b, forbid_cv_links=True)
        for lv in views:
            s = SchemeGraph(lv.num_vertices,
                            tuple(lv.pairing[:4 * lv.num_vertices]), 0,
                            chain_types=tuple(lv.vertex_types))
            if lv.two_delta != two_delta:
                continue
            if is_reduced_scheme(s, two_delta):
                cat.add(s, source_size=0)
    elif bmax_vertices >= b + 1:
        enum = Enumerator(bmax_vertices, two_delta_max=two_delta,
                          allow_melons=False, vertex_menu=(STD, CV_B),
                          max_cvs=b, max_bcvs=b)
        found = []

        def leaf(lv):
            if lv.two_delta != two_delta or lv.n_bcv != b:
                return
            found.append(SchemeGraph(
                lv.num_vertices,
                tuple(lv.pairing[:4 * lv.num_vertices]), 0,
                chain_types=tuple(lv.vertex_types)))

        enum.run(leaf)
        for s in found:
            if is_reduced_scheme(s, two_delta):
                cat.add(s, source_size=0)
    return cat


# ---------------------------------------------------------------------------
# Dominant schemes.
# ---------------------------------------------------------------------------


def _binary_trees(n_inner):
    """All ordered binary trees with ``n_inner`` inner nodes.

    A tree is either None (a leaf) or a pair (left, right).
    """
    if n_inner == 0:
        yield None
        return
    for k in range(n_inner):
        for left in _binary_trees(k):
            for right in _binary_trees(n_inner - 1 - k):
                yield (left, right)


def gen_dominant_schemes(two_delta):
    """All dominant schemes of degree ``two_delta / 2``.

    Built from ordered binary trees with ``two_delta - 1`` inner
    nodes: the root-leaf above the tree carries the rooted
    cycle-graph, the ``two_delta`` leaves carry a cw or ccw infinity
    graph each, every inner node carries the cycle-graph or the
    quadruple-edge graph (the latter in 3 configurations of its free
    edge), and every tree edge carries a separating broken
    chain-vertex spliced into an edge of each endpoint's gadget.
    Yields ``Cat(two_delta - 1) * 2^(3*two_delta - 2)`` schemes.
    """
    if two_delta <= 0:
        raise ValidationError(["two_delta must be positive"])
    for tree in _binary_trees(two_delta - 1):
        leaf_count = two_delta
        for leaf_bits in itertools.product((0, 1), repeat=leaf_count):
            for node_cfg in itertools.product(
                    range(4), repeat=two_delta - 1):
                yield _build_dominant(tree, list(leaf_bits),
                                      list(node_cfg))


class _Builder:
    """Accumulates vertices and pairings for a dominant scheme."""

    def __init__(self):
        self.types = []
        self.joins = []

    def new_vertex(self, tt):
        self.types.append(tt)
        return len(self.types) - 1

    def join(self, a, b):
        self.joins.append((a, b))

    def graph(self, root):
        n = len(self.types)
        pairing = [-1] * (4 * n)
        for a, b in self.joins:
            if pairing[a] != -1 or pairing[b] != -1 or (a & 1) == (b & 1):
                raise MomapsError("bad splice while building a scheme")
            pairing[a] = b
            pairing[b] = a
        if -1 in pairing:
            raise MomapsError("unpaired slot while building a scheme")
        return SchemeGraph(n, tuple(pairing), root,
                           chain_types=tuple(self.types))


def _build_dominant(tree, leaf_bits, node_cfgs):
    """Assemble one dominant scheme.

    Every tree edge becomes a broken chain-vertex ``w``; its side A
    (slots 0 out / 1 in) faces the parent gadget and its side B (slots
    2 out / 3 in) faces the child gadget.  A gadget receives a side by
    splicing it into one of its edges: the edge's outgoing half-edge
    is paired with the side's ingoing slot and the side's outgoing
    slot with the edge's other end.
    """
    bld = _Builder()
    # Root-leaf: the rooted cycle-graph, whose single edge is split by
    # the top chain-vertex's side A.  The loop survives as the edge
    # from slot 0 back to slot 1 of that chain-vertex, carrying the
    # root.
    top = bld.new_vertex(int(ChainVertexType.B))
    bld.join(4 * top + 0, 4 * top + 1)
    _attach_subtree(bld, tree, (4 * top + 2, 4 * top + 3), leaf_bits,
                    node_cfgs)
    return bld.graph(4 * top + 0)


def _attach_subtree(bld, tree, side, leaf_bits, node_cfgs):
    """Splice ``side`` = (out_slot, in_slot) of a chain-vertex into the
    gadget for ``tree`` and recurse on its children."""
    s_out, s_in = side
    if tree is None:
        # Infinity-graph leaf: vertex with loops (0,1) and (2,3) for
        # the cw variant, (0,3) and (1,2) for the ccw variant; the
        # chain-vertex side splits the loop through slots 0 and 1
        # (cw) or 0 and 3 (ccw), leaving the other loop intact.
        ccw = leaf_bits.pop(0)
        v = bld.new_vertex(STD)
        if ccw:
            bld.join(4 * v + 1, 4 * v + 2)
            bld.join(4 * v + 0, s_in)
            bld.join(s_out, 4 * v + 3)
        else:
            bld.join(4 * v + 2, 4 * v + 3)
            bld.join(4 * v + 0, s_in)
            bld.join(s_out, 4 * v + 1)
        return
    cfg = node_cfgs.pop(0)
    left, right = tree
    wl = bld.new_vertex(int(ChainVertexType.B))
    wr = bld.new_vertex(int(ChainVertexType.B))
    l_side_a = (4 * wl + 0, 4 * wl + 1)
    r_side_a = (4 * wr + 0, 4 * wr + 1)
    if cfg == 0:
        # Cycle-graph inner node: the loop is split by three sides in
        # the cyclic order parent -> left -> right.
        bld.join(s_out, l_side_a[1])
        bld.join(l_side_a[0], r_side_a[1])
        bld.join(r_side_a[0], s_in)
    else:
        # Quadruple-edge inner node: vertices u, v joined by slot
        # s <-> 3 - s.  One edge stays free; the other three are
        # split by the parent, left and right sides.  The parent side
        # goes on split edge cfg - 1 (3 configurations: on the free
        # edge's straight partner, or on either edge of the other
        # straight pair); the left and right sides take the remaining
        # two split edges in edge order.  Exactly these three choices
        # make the tree encoding injective: swapping the left and
        # right assignments is undone by swapping the subtrees.
        u = bld.new_vertex(STD)
        v = bld.new_vertex(STD)
        free = (4 * u + 0, 4 * v + 3)
        split = [(4 * u + 2, 4 * v + 1), (4 * v + 0, 4 * u + 3),
                 (4 * v + 2, 4 * u + 1)]
        assigned = [l_side_a, r_side_a]
        assigned.insert(cfg - 1, side)
        for (a_out, b_in), (o_slot, i_slot) in zip(split, assigned):
            bld.join(a_out, i_slot)
            bld.join(o_slot, b_in)
        bld.join(*free)
    _attach_subtree(bld, left, (4 * wl + 2, 4 * wl + 3), leaf_bits,
                    node_cfgs)
    _attach_subtree(bld, right, (4 * wr + 2, 4 * wr + 3), leaf_bits,
                    node_cfgs)
