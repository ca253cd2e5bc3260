"""Exhaustive generation of rooted graphs by canonical backtracking.

A rooted map has a unique breadth-first canonical labeling (see
:mod:`momaps.canonical`).  The generator builds exactly these labelings:
it repeatedly takes the smallest unpaired dart and tries every
admissible partner — an unpaired dart of opposite parity on an existing
vertex, or slot 0/1 of a freshly numbered vertex.  Every complete
pairing reached this way is the canonical labeling of a distinct rooted
graph, so no isomorphism rejection is ever needed.  The root dart is
always dart 0.

While pairing, the engine tracks the open strand segments of the three
face families (left, right, straight), so every face closure is
detected in O(1).  This yields exact face counts at the leaves and a
sound lower bound on the degree of any completion, used for pruning:

* pairing two existing darts never decreases ``P = 6 + 3V - 2F + 4U +
  6B - 3D`` (with D the number of unpaired darts), since one pairing
  closes at most three faces;
* adding a standard vertex decreases P by exactly 3, an unbroken
  chain-vertex by 2, a broken chain-vertex by 0,

so ``2*delta >= P - 3 * (budget of further vertices)`` for every
completion, and P equals ``2*delta`` once the pairing is complete.

Melons close finitely: once the three 2-gonal faces of a triple edge
exist, no extension can destroy them, so melon-free scans prune the
moment a non-root melon appears.  The same holds for loops, dipoles
(2-gonal faces on a double edge) and edges adjacent to a chain-vertex,
giving monotone prunes for degree-targeted and scheme scans.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import MOGraph, cycle_graph

# Vertex type codes.  0 is a standard vertex; the rest are the
# chain-vertex kinds (see momaps.reduction.ChainVertexType).
STD, CV_L, CV_R, CV_SE, CV_SO, CV_B = range(6)
UNBROKEN_CVS = (CV_L, CV_R, CV_SE, CV_SO)

# Strand families.
LEFT, RIGHT, STRAIGHT = 0, 1, 2

# Strand arcs through one vertex: six (family, slot, slot) connectors.
# Standard vertices route left strands along the corners (1,2), (3,0),
# right strands along (0,1), (2,3), straight strands across (0,2),
# (1,3).  A chain-vertex (sides {0,1} and {2,3}) lets exactly one
# family cross between the sides — the family of its 2-gonal faces,
# with a parity twist for odd straight chains — and bounces the other
# two families back on the side where they entered.  A broken
# chain-vertex bounces all three families.
ARC_TABLE = {
    STD: ((LEFT, 1, 2), (LEFT, 3, 0), (RIGHT, 0, 1), (RIGHT, 2, 3),
          (STRAIGHT, 0, 2), (STRAIGHT, 1, 3)),
    CV_L: ((LEFT, 1, 2), (LEFT, 3, 0), (RIGHT, 0, 1), (RIGHT, 2, 3),
           (STRAIGHT, 0, 1), (STRAIGHT, 2, 3)),
    CV_R: ((LEFT, 0, 1), (LEFT, 2, 3), (RIGHT, 1, 2), (RIGHT, 3, 0),
           (STRAIGHT, 0, 1), (STRAIGHT, 2, 3)),
    CV_SE: ((LEFT, 0, 1), (LEFT, 2, 3), (RIGHT, 0, 1), (RIGHT, 2, 3),
            (STRAIGHT, 1, 2), (STRAIGHT, 3, 0)),
    CV_SO: ((LEFT, 0, 1), (LEFT, 2, 3), (RIGHT, 0, 1), (RIGHT, 2, 3),
            (STRAIGHT, 1, 3), (STRAIGHT, 0, 2)),
    CV_B: ((LEFT, 0, 1), (LEFT, 2, 3), (RIGHT, 0, 1), (RIGHT, 2, 3),
           (STRAIGHT, 0, 1), (STRAIGHT, 2, 3)),
}


def pair_face_type(a1, c1, a2, c2):
    """Type of the 2-gonal face of two parallel edges, if any.

    The edges join slots ``a1, a2`` of one vertex to slots ``c1, c2``
    of another.  Returns 'L', 'R', 'S' or None.
    """
    if (a2 - a1) & 3 == 2 and (c2 - c1) & 3 == 2:
        return "S"
    if (a1 - a2) & 3 == 1 and (c2 - c1) & 3 == 1:
        return "L" if a1 & 1 == 0 else "R"
    if (a2 - a1) & 3 == 1 and (c1 - c2) & 3 == 1:
        return "L" if a2 & 1 == 0 else "R"
    return None


def triple_is_melon(e1, e2, e3):
    """Whether three parallel (slot, slot) edges form a melon."""
    t12 = pair_face_type(e1[0], e1[1], e2[0], e2[1])
    t13 = pair_face_type(e1[0], e1[1], e3[0], e3[1])
    t23 = pair_face_type(e2[0], e2[1], e3[0], e3[1])
    return {t12, t13, t23} == {"L", "R", "S"}


@dataclass
class LeafView:
    """Snapshot handed to leaf callbacks (valid during the call only)."""

    num_vertices: int
    vertex_types: list
    pairing: list
    f_left: int
    f_right: int
    f_straight: int
    loops: int
    n_std: int
    n_ucv: int
    n_bcv: int

    @property
    def two_delta(self):
        f = self.f_left + self.f_right + self.f_straight
        return (6 + 3 * self.n_std - 2 * f + 4 * self.n_ucv
                + 6 * self.n_bcv)

    @property
    def two_g_lr(self):
        """Doubled left-right genus; only meaningful without cvs."""
        return 2 + self.num_vertices - self.f_left - self.f_right

    def graph(self):
        return MOGraph(self.num_vertices,
                       tuple(self.pairing[:4 * self.num_vertices]), 0)


class Enumerator:
    """Backtracking generator of canonical rooted pairings."""

    def __init__(self, max_vertices, *, two_delta_max=None,
                 allow_melons=True, vertex_menu=(STD,), max_cvs=0,
                 max_bcvs=None, max_dipoles_plus_cvs=None,
                 weight_max=None, loop_max=None):
        self.vmax = max_vertices
        self.two_delta_max = two_delta_max
        self.allow_melons = allow_melons
        self.vertex_menu = tuple(vertex_menu)
        self.max_cvs = max_cvs
        self.max_bcvs = max_bcvs
        self.max_n = max_dipoles_plus_cvs
        self.weight_max = weight_max  # cap on 2p + 4c + 2*s_o
        self.loop_max = loop_max
        nd = 4 * max_vertices
        self.pair = [-1] * nd
        self.vtype = [0] * max_vertices
        self.mate = [-1] * (3 * nd)
        self.faces = [0, 0, 0]
        self.nv = 0
        self.unpaired = 0
        self.loops = 0
        self.n_ucv = 0
        self.n_bcv = 0
        self.n_dipoles = 0
        self.weight = 0
        self.parallel = {}  # (u, v) -> list of (slot_u, slot_v)
        self.leaves = 0

    # -- vertex bookkeeping ------------------------------------------

    def _add_vertex(self, tt):
        w = self.nv
        self.nv = w + 1
        self.vtype[w] = tt
        mate = self.mate
        for fam, sa, sb in ARC_TABLE[tt]:
            ea = 3 * (4 * w + sa) + fam
            eb = 3 * (4 * w + sb) + fam
            mate[ea] = eb
            mate[eb] = ea
        self.unpaired += 4
        if tt == STD:
            self.weight += 2
        elif tt == CV_SO:
            self.weight += 6
        else:
            self.weight += 4
        if tt == CV_B:
            self.n_bcv += 1
        elif tt != STD:
            self.n_ucv += 1

    def _remove_vertex(self):
        w = self.nv - 1
        self.nv = w
        tt = self.vtype[w]
        self.unpaired -= 4
        if tt == STD:
            self.weight -= 2
        elif tt == CV_SO:
            self.weight -= 6
        else:
            self.weight -= 4
        if tt == CV_B:
            self.n_bcv -= 1
        elif tt != STD:
            self.n_ucv -= 1

    # -- the search ---------------------------------------------------

    def run(self, on_leaf):
        """Enumerate every canonical pairing; call ``on_leaf(view)``."""
        self.on_leaf = on_leaf
        menu = self._menu_for_vertex0()
        for tt in menu:
            self._add_vertex(tt)
            self._search(0)
            self._remove_vertex()

    def _menu_for_vertex0(self):
        return [tt for tt in self.vertex_menu if self._type_allowed(tt)]

    def _type_allowed(self, tt):
        if tt == STD:
            return (self.weight_max is None
                    or self.weight + 2 <= self.weight_max)
        ncv = self.n_ucv + self.n_bcv
        if self.max_cvs is not None and ncv + 1 > self.max_cvs:
            return False
        if (tt == CV_B and self.max_bcvs is not None
                and self.n_bcv + 1 > self.max_bcvs):
            return False
        if self.max_n is not None and self.n_dipoles + ncv + 1 > self.max_n:
            return False
        if self.weight_max is not None:
            w = 6 if tt == CV_SO else 4
            if self.weight + w > self.weight_max:
                return False
        return True

    def _degree_bound_ok(self):
        two_delta_max = self.two_delta_max
        if two_delta_max is None:
            return True
        f = self.faces
        p = (6 + 3 * (self.nv - self.n_ucv - self.n_bcv)
             - 2 * (f[0] + f[1] + f[2]) + 4 * self.n_ucv + 6 * self.n_bcv
             - 3 * self.unpaired)
        return p - 3 * (self.vmax - self.nv) <= two_delta_max

    def _search(self, cursor):
        pair = self.pair
        nd = 4 * self.nv
        d = cursor
        while d < nd and pair[d] >= 0:
            d += 1
        if d == nd:
            self.leaves += 1
            self.on_leaf(LeafView(
                self.nv, self.vtype, pair, self.faces[0], self.faces[1],
                self.faces[2], self.loops,
                self.nv - self.n_ucv - self.n_bcv, self.n_ucv,
                self.n_bcv))
            return
        parity = (d & 1) ^ 1
        for p in range(d + 1, nd):
            if pair[p] < 0 and (p & 1) == parity:
                self._try(d, p)
        if self.nv < self.vmax:
            entry_slot = 1 - (d & 1)
            for tt in self.vertex_menu:
                if not self._type_allowed(tt):
                    continue
                self._add_vertex(tt)
                self._try(d, 4 * (self.nv - 1) + entry_slot)
                self._remove_vertex()

    def _try(self, d, p):
        """Pair d with p; recurse unless a prune fires; undo."""
        pair = self.pair
        mate = self.mate
        faces = self.faces
        u, su = d >> 2, d & 3
        v, sv = p >> 2, p & 3
        ok = True
        new_dipoles = 0
        plist = None
        if u == v:
            self.loops += 1
            if self.loop_max is not None and self.loops > self.loop_max:
                ok = False
            # An edge with both half-edges on one side of a chain-vertex
            # is forbidden unless it is the (subdivided) root edge.
            if (ok and self.vtype[u] != STD and d != 0
                    and (su >> 1) == (sv >> 1)):
                ok = False
        elif self.vtype[u] == STD and self.vtype[v] == STD:
            key = (u, v)
            plist = self.parallel.get(key)
            if plist is None:
                plist = self.parallel[key] = []
            if ok and plist:
                # The root edge is never part of a melon or a dipole:
                # the fake root vertex subdivides it, so it cannot be
                # one of the parallel edges of either pattern.
                e_new = (su, sv)
                new_is_root = d == 0
                if self.max_n is not None and not new_is_root:
                    for (sa, sb) in plist:
                        if u == 0 and sa == 0:
                            continue
                        if pair_face_type(sa, sb, su, sv) is not None:
                            new_dipoles += 1
                    if (self.n_dipoles + new_dipoles + self.n_ucv
                            + self.n_bcv) > self.max_n:
                        ok = False
                if (ok and not self.allow_melons and len(plist) >= 2
                        and not new_is_root):
                    for i in range(len(plist)):
                        if not ok:
                            break
                        ei = plist[i]
                        if u == 0 and ei[0] == 0:
                            continue
                        for j in range(i + 1, len(plist)):
                            ej = plist[j]
                            if u == 0 and ej[0] == 0:
                                continue
                            if triple_is_melon(ei, ej, e_new):
                                ok = False
                                break
            plist.append((su, sv))
        if ok:
            pair[d] = p
            pair[p] = d
            self.unpaired -= 2
            self.n_dipoles += new_dipoles
            closures = []
            merged = []
            for f in (0, 1, 2):
                ea = 3 * d + f
                eb = 3 * p + f
                ma = mate[ea]
                mb = mate[eb]
                if ma == eb:
                    faces[f] += 1
                    closures.append(f)
                else:
                    mate[ma] = mb
                    mate[mb] = ma
                    merged.append((ma, ea, mb, eb))
            if self._degree_bound_ok():
                self._search(d + 1)
            for ma, ea, mb, eb in merged:
                mate[ma] = ea
                mate[mb] = eb
            for f in closures:
                faces[f] -= 1
            self.n_dipoles -= new_dipoles
            self.unpaired += 2
            pair[d] = -1
            pair[p] = -1
        if plist is not None:
            plist.pop()
            if not plist:
                del self.parallel[(u, v)]
        if u == v:
            self.loops -= 1
