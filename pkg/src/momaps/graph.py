"""Core data model for multi-orientable 4-regular maps.

A graph is a rotation system: every vertex carries four half-edge slots
in clockwise order.  Slots 0 and 2 are outgoing, slots 1 and 3 incoming,
so each vertex has two ingoing and two outgoing half-edges and opposite
half-edges point the same way.  An edge pairs an outgoing slot with an
incoming slot of (possibly) another vertex.

Darts are encoded as ``4 * vertex + slot``.  The pairing is a
fixed-point-free involution on darts that always matches an even slot
with an odd slot.

Vertex-less loop components ("cycle components") carry no darts and are
stored as a plain counter.  A root is a marked outgoing dart; the fake
degree-2 root vertex sitting in the middle of the root edge is never
materialized, so an ``E = 2V`` pairing describes a rooted graph with
``2V + 1`` logical edges.  A rooted cycle component (the rooted graph
with no 4-valent vertex at all) is flagged with ``root_on_cycle``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    NonHalfIntegerDegree,
    NotALoop,
    NotPlanar,
    ParseError,
    ValidationError,
)

#: A half-edge reference in the public API: ``(vertex, slot)``.
HalfEdgeRef = tuple


def dart_id(vertex, slot):
    """Encode a (vertex, slot) reference as a dart id."""
    return 4 * vertex + slot


def dart_ref(dart):
    """Decode a dart id into a (vertex, slot) reference."""
    return (dart >> 2, dart & 3)


@dataclass(frozen=True)
class MOGraph:
    """An orientable 4-regular map with admissible edge orientations.

    ``pairing[d]`` is the dart paired with dart ``d``.  ``root`` is the
    marked outgoing dart of the root edge, or None.  ``chain_types``
    maps a vertex index to a chain-vertex type for scheme graphs; plain
    graphs leave it empty (see :mod:`momaps.reduction`).
    """

    num_vertices: int
    pairing: tuple
    root: int | None = None
    cycle_components: int = 0
    root_on_cycle: bool = False

    @property
    def num_darts(self):
        return 4 * self.num_vertices

    @property
    def num_edges(self):
        """Edges of the underlying map (the root edge counted once)."""
        return 2 * self.num_vertices

    @property
    def is_rooted(self):
        return self.root is not None or self.root_on_cycle

    def alpha(self, dart):
        return self.pairing[dart]

    def edges(self):
        """All edges as (outgoing dart, incoming dart) pairs."""
        return [(d, self.pairing[d]) for d in range(0, self.num_darts, 2)]

    def out_darts(self):
        return [d for d in range(self.num_darts) if (d & 3) % 2 == 0]

    def with_root(self, root):
        return MOGraph(self.num_vertices, self.pairing, root,
                       self.cycle_components, self.root_on_cycle)

    def __repr__(self):
        bits = [f"V={self.num_vertices}"]
        if self.root is not None:
            bits.append(f"root={dart_ref(self.root)}")
        if self.root_on_cycle:
            bits.append("root=cycle")
        if self.cycle_components:
            bits.append(f"cycles={self.cycle_components}")
        return f"MOGraph({', '.join(bits)})"


def validate(g):
    """Return a list of structural violations (empty when valid)."""
    problems = []
    n = g.num_vertices
    if n < 0:
        problems.append("negative vertex count")
        return problems
    if g.cycle_components < 0:
        problems.append("negative cycle component count")
    if len(g.pairing) != 4 * n:
        problems.append(
            f"pairing has {len(g.pairing)} entries, expected {4 * n}")
        return problems
    for d, p in enumerate(g.pairing):
        if not isinstance(p, int) or not 0 <= p < 4 * n:
            problems.append(f"dart {dart_ref(d)} paired out of range")
            continue
        if p == d:
            problems.append(f"dart {dart_ref(d)} paired with itself")
        elif g.pairing[p] != d:
            problems.append(
                f"pairing is not an involution at {dart_ref(d)}")
        if (d & 1) == (p & 1):
            problems.append(
                f"edge {dart_ref(d)}-{dart_ref(p)} joins two "
                f"{'outgoing' if d % 2 == 0 else 'ingoing'} half-edges")
    if g.root is not None:
        if not 0 <= g.root < 4 * n:
            problems.append("root dart out of range")
        elif g.root & 1:
            problems.append("root dart is not outgoing")
        if g.root_on_cycle:
            problems.append("root marked both on a dart and on a cycle")
    if g.root_on_cycle and g.cycle_components < 1:
        problems.append("root on a cycle component but none present")
    return problems


def require_valid(g):
    problems = validate(g)
    if problems:
        raise ValidationError(problems)


# ---------------------------------------------------------------------------
# Face tracing.
#
# External faces are the orbits of d -> sigma(alpha(d)) where sigma turns
# one notch clockwise at a vertex.  Each orbit keeps a constant dart
# parity: even orbits are the left (counterclockwise) faces, odd orbits
# the right (clockwise) faces.  Straight faces are traced by leaving a
# vertex through the slot opposite the arrival slot; each geometric
# straight face appears either as two mirror-image dart orbits or as a
# single self-reverse orbit of twice the length.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FaceReport:
    """Faces of a graph, one entry per face, as tuples of dart ids.

    Left and right faces are listed by their dart orbit (one dart per
    edge traversal, orbit length == face length).  Straight faces are
    listed by a canonical arrival-dart walk of length == face length.
    Cycle components each contribute one length-0 face to every family,
    represented by an empty tuple.
    """

    left: tuple
    right: tuple
    straight: tuple

    @property
    def f_left(self):
        return len(self.left)

    @property
    def f_right(self):
        return len(self.right)

    @property
    def f_straight(self):
        return len(self.straight)

    @property
    def total(self):
        return len(self.left) + len(self.right) + len(self.straight)


def trace_faces(g):
    """Trace the left, right and straight faces of a valid graph."""
    require_valid(g)
    nd = g.num_darts
    pairing = g.pairing
    left = []
    right = []
    seen = [False] * nd
    for start in range(nd):
        if seen[start]:
            continue
        orbit = []
        d = start
        while not seen[d]:
            seen[d] = True
            orbit.append(d)
            p = pairing[d]
            d = (p & ~3) | ((p + 1) & 3)
        (left if (start & 1) == 0 else right).append(tuple(orbit))

    straight = []
    seen = [False] * nd
    for start in range(nd):
        if seen[start]:
            continue
        orbit = []
        d = start
        while not seen[d]:
            seen[d] = True
            orbit.append(d)
            d = pairing[(d & ~3) | ((d + 2) & 3)]
        # The mirror walk visits the opposite slots; mark it consumed.
        mirror = [(d & ~3) | ((d + 2) & 3) for d in orbit]
        if seen[mirror[0]]:
            # Self-reverse orbit: the walk contains its own mirror and
            # covers the geometric face twice.
            half = len(orbit) // 2
            straight.append(tuple(orbit[:half]))
        else:
            for d in mirror:
                seen[d] = True
            straight.append(tuple(orbit))

    pad = (tuple(),) * g.cycle_components
    return FaceReport(tuple(left) + pad, tuple(right) + pad,
                      tuple(straight) + pad)


# ---------------------------------------------------------------------------
# Connectivity and degree.
# ---------------------------------------------------------------------------


def vertex_components(g):
    """Connected components of 4-valent vertices, as sorted tuples."""
    n = g.num_vertices
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d in range(0, 4 * n):
        a, b = find(d >> 2), find(g.pairing[d] >> 2)
        if a != b:
            parent[a] = b
    groups = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return [tuple(sorted(vs)) for vs in groups.values()]


def is_connected(g):
    comps = len(vertex_components(g)) + g.cycle_components
    return comps == 1


@dataclass(frozen=True)
class ComponentDegree:
    """Degree data of one connected component."""

    vertices: tuple
    v: int
    f_left: int
    f_right: int
    f_straight: int
    two_delta: int
    two_g_lr: int  # doubled genus of the left-right jacket (even)
    two_g_ls: int
    two_g_rs: int
    lam: int  # Lambda = V - 2 F_s + 2

    @property
    def f(self):
        return self.f_left + self.f_right + self.f_straight

    @property
    def delta(self):
        return Fraction(self.two_delta, 2)

    @property
    def genus(self):
        """Integer genus of the left-right jacket (the map genus)."""
        return self.two_g_lr // 2

    @property
    def is_planar(self):
        return self.two_g_lr == 0


@dataclass(frozen=True)
class DegreeReport:
    """Global degree data plus a per-component breakdown."""

    c: int
    v: int
    f: int
    f_left: int
    f_right: int
    f_straight: int
    two_delta: int
    components: tuple
    straight_lengths: tuple  # sorted face lengths, one per straight face

    @property
    def delta(self):
        return Fraction(self.two_delta, 2)

    @property
    def is_planar(self):
        return all(comp.two_g_lr == 0 for comp in self.components)


def _straight_length(walk):
    return len(walk)


def degree(g, faces=None):
    """Compute the degree and jacket genera of a valid graph.

    The degree is driven by ``2 delta = 6c + 3V - 2F`` and is checked,
    per component, against the sum of the three jacket genera obtained
    from the Euler relation ``V - E + F_xy = 2 - 2 g_xy``.
    """
    if faces is None:
        faces = trace_faces(g)
    comps = vertex_components(g)
    # Assign faces to components via any dart they contain.
    comp_of_vertex = {}
    for i, vs in enumerate(comps):
        for v in vs:
            comp_of_vertex[v] = i
    per = [[0, 0, 0] for _ in comps]  # f_left, f_right, f_straight
    for fam, facelist in enumerate((faces.left, faces.right, faces.straight)):
        for face in facelist:
            if face:
                per[comp_of_vertex[face[0] >> 2]][fam] += 1
    out = []
    total_two_delta = 0
    for vs, (fl, fr, fs) in zip(comps, per):
        v = len(vs)
        e = 2 * v
        two_delta = 6 + 3 * v - 2 * (fl + fr + fs)
        two_g_lr = 2 - (v - e + fl + fr)
        two_g_ls = 2 - (v - e + fl + fs)
        two_g_rs = 2 - (v - e + fr + fs)
        if two_g_lr % 2:
            raise NonHalfIntegerDegree(
                f"left-right jacket genus is not an integer on {vs}")
        if two_delta != two_g_lr + two_g_ls + two_g_rs:
            raise NonHalfIntegerDegree(
                f"degree does not match jacket genera on {vs}")
        lam = v - 2 * fs + 2
        out.append(ComponentDegree(vs, v, fl, fr, fs, two_delta,
                                   two_g_lr, two_g_ls, two_g_rs, lam))
        total_two_delta += two_delta
    # Cycle components are planar and degree 0 (V=0, F=3).
    c = len(comps) + g.cycle_components
    fl = faces.f_left
    fr = faces.f_right
    fs = faces.f_straight
    f = fl + fr + fs
    check = 6 * c + 3 * g.num_vertices - 2 * f
    if check != total_two_delta:
        raise NonHalfIntegerDegree("global degree mismatch")
    lengths = tuple(sorted(_straight_length(w) for w in faces.straight))
    return DegreeReport(c, g.num_vertices, f, fl, fr, fs,
                        total_two_delta, tuple(out), lengths)


def knot_profile(g):
    """Return (V, F_s, delta) for a connected planar graph.

    Checks the relation ``F_s = V / 2 + 1 - delta`` that governs the
    number of closed curves in the knot/link projection reading of a
    planar graph.
    """
    rep = degree(g)
    if rep.c != 1:
        raise NotPlanar("knot profile requires a connected graph")
    if not rep.is_planar:
        raise NotPlanar("knot profile requires a planar graph")
    f_s = rep.f_straight
    assert Fraction(f_s) == Fraction(rep.v, 2) + 1 - rep.delta
    return rep.v, f_s, rep.delta


# ---------------------------------------------------------------------------
# Loop removal.
# ---------------------------------------------------------------------------


def find_loops(g):
    """Outgoing darts of self-loop edges, in increasing dart order."""
    return [d for d in range(g.num_darts)
            if (d & 1) == 0 and g.pairing[d] >> 2 == d >> 2]


def remove_loop(g, loop_dart):
    """Remove a self-loop together with its vertex.

    The two non-loop half-edges of the vertex are welded into a single
    edge; if they were paired with each other a new cycle component
    appears.  The loop must not be the root edge.
    """
    require_valid(g)
    p = g.pairing[loop_dart]
    v = loop_dart >> 2
    if p >> 2 != v or p == loop_dart:
        raise NotALoop(f"dart {dart_ref(loop_dart)} is not on a loop")
    if g.root in (loop_dart, p):
        raise NotALoop("cannot remove the root edge")
    slots = {4 * v, 4 * v + 1, 4 * v + 2, 4 * v + 3} - {loop_dart, p}
    x, y = sorted(slots)
    px, py = g.pairing[x], g.pairing[y]
    root = g.root
    cycles = g.cycle_components
    root_on_cycle = g.root_on_cycle
    if px == y:
        # The vertex carried two loops: removal leaves a bare cycle.
        cycles += 1
        if root in (x, y):
            root = None
            root_on_cycle = True
        weld = []
    else:
        if root in (x, y):
            # The root edge loses its endpoint at v; the marked edge
            # survives as the welded edge, rooted at its outgoing end.
            root = px if (px & 1) == 0 else py
        weld = [(px, py)]
    # Drop vertex v, relabel vertices above it.
    return _delete_vertices(g, {v}, weld, root, cycles, root_on_cycle)


def _delete_vertices(g, gone, welds, root, cycles, root_on_cycle):
    """Rebuild a graph with ``gone`` vertices removed and extra welds.

    ``welds`` lists pairs of surviving darts to be joined into new
    edges.  All darts of removed vertices must be accounted for either
    by welds or by edges internal to the removed set.
    """
    keep = [v for v in range(g.num_vertices) if v not in gone]
    newid = {v: i for i, v in enumerate(keep)}

    def remap(d):
        return 4 * newid[d >> 2] + (d & 3)

    pairing = [-1] * (4 * len(keep))
    for d in range(g.num_darts):
        p = g.pairing[d]
        if (d >> 2) in gone or (p >> 2) in gone:
            continue
        pairing[remap(d)] = remap(p)
    for a, b in welds:
        pairing[remap(a)] = remap(b)
        pairing[remap(b)] = remap(a)
    new_root = None if root is None else remap(root)
    return MOGraph(len(keep), tuple(pairing), new_root, cycles,
                   root_on_cycle)


# ---------------------------------------------------------------------------
# JSON serialization.
# ---------------------------------------------------------------------------


def to_json_dict(g):
    edges = []
    done = set()
    for d in range(g.num_darts):
        if d in done:
            continue
        p = g.pairing[d]
        done.add(d)
        done.add(p)
        edges.append([list(dart_ref(d)), list(dart_ref(p))])
    root = None
    if g.root is not None:
        root = list(dart_ref(g.root))
    elif g.root_on_cycle:
        root = "cycle"
    return {
        "vertices": g.num_vertices,
        "pairing": edges,
        "root": root,
        "cycle_components": g.cycle_components,
    }


def from_json_dict(doc):
    if not isinstance(doc, dict):
        raise ParseError("graph document must be a JSON object")
    try:
        n = doc["vertices"]
        raw_edges = doc["pairing"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing graph field: {exc}") from exc
    if not isinstance(n, int) or n < 0:
        raise ParseError("vertex count must be a non-negative integer")
    pairing = [-1] * (4 * n)
    if not isinstance(raw_edges, list):
        raise ParseError("pairing must be a list of half-edge pairs")
    for item in raw_edges:
        try:
            (v1, s1), (v2, s2) = item
        except (TypeError, ValueError) as exc:
            raise ParseError(f"malformed edge entry {item!r}") from exc
        for v, s in ((v1, s1), (v2, s2)):
            if not (isinstance(v, int) and isinstance(s, int)
                    and 0 <= v < n and 0 <= s < 4):
                raise ParseError(f"half-edge ({v},{s}) out of range")
        a, b = dart_id(v1, s1), dart_id(v2, s2)
        if pairing[a] != -1 or pairing[b] != -1 or a == b:
            raise ParseError(f"half-edge reused in edge {item!r}")
        pairing[a], pairing[b] = b, a
    if any(p == -1 for p in pairing):
        raise ParseError("pairing does not cover every half-edge")
    root = doc.get("root")
    root_on_cycle = False
    root_dart = None
    if root == "cycle":
        root_on_cycle = True
    elif root is not None:
        try:
            rv, rs = root
        except (TypeError, ValueError) as exc:
            raise ParseError(f"malformed root {root!r}") from exc
        if not (isinstance(rv, int) and isinstance(rs, int)
                and 0 <= rv < n and 0 <= rs < 4):
            raise ParseError(f"root half-edge ({rv},{rs}) out of range")
        root_dart = dart_id(rv, rs)
    cycles = doc.get("cycle_components", 0)
    if not isinstance(cycles, int) or cycles < 0:
        raise ParseError("cycle_components must be a non-negative integer")
    g = MOGraph(n, tuple(pairing), root_dart, cycles, root_on_cycle)
    problems = validate(g)
    if problems:
        raise ParseError("invalid graph: " + "; ".join(problems))
    return g


def dumps(g, **kw):
    return json.dumps(to_json_dict(g), **kw)


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not JSON: {exc}") from exc
    return from_json_dict(doc)


def load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def dump(g, path, **kw):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(g, **kw))
        fh.write("\n")


# ---------------------------------------------------------------------------
# Named small graphs.
# ---------------------------------------------------------------------------


def cycle_graph(rooted=False):
    """The vertex-less loop: one component, F = 3, degree 0."""
    return MOGraph(0, (), None, 1, rooted)


def infinity_cw():
    """One vertex, two loops pairing slots 0-1 and 2-3; degree 1/2."""
    return MOGraph(1, (1, 0, 3, 2))


def infinity_ccw():
    """One vertex, two loops pairing slots 0-3 and 1-2; degree 1/2."""
    return MOGraph(1, (3, 2, 1, 0))


def quadruple_edge_graph():
    """Two vertices joined by four parallel edges; planar, degree 0."""
    pairing = [0] * 8
    for s in range(4):
        a, b = dart_id(0, s), dart_id(1, 3 - s)
        pairing[a], pairing[b] = b, a
    return MOGraph(2, tuple(pairing))
