"""Accelerated mirror of the canonical backtracking generator.

This module re-implements the search of :mod:`momaps.generate` as an
iterative, array-based loop compiled with numba.  It produces exactly
the same set of leaves as the pure-Python :class:`momaps.generate.
Enumerator` (the test suite cross-validates the two engines); it exists
only because full-degree sweeps at 8 vertices and melon-free scans at
10 vertices visit tens of millions of search nodes.

Two output modes are supported:

* ``TABLE`` — accumulate a dense count array indexed by (vertices,
  doubled degree, left-right-planarity, straight-face count), and check
  the exact degree identities at every leaf (even doubled left-right
  genus; ``V - 2*F_s + 2 == 2*delta - 2*(2*g_lr)``).
* ``COLLECT`` — write every leaf (vertex types, pairing, face counts,
  loop count) into flat buffers for reconstruction in Python.

The undo logic relies on the same observation as the reference engine:
after pairing darts ``d`` and ``p``, the strand-end cells ``mate[3d+f]``
and ``mate[3p+f]`` are never modified, so the merge of the two open
segments can be reversed without any saved state.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .generate import (ARC_TABLE, LeafView, STD, CV_SO, CV_B)

TABLE = 0
COLLECT = 1

# Result-vector slots.
R_LEAVES = 0
R_EMITTED = 1
R_PARITY_VIOL = 2
R_LAMBDA_VIOL = 3
R_OVERFLOW = 4

# Per-vertex-type strand arcs, as a (6, 6, 3) array of
# (family, slot, slot) rows, family-major for cache friendliness.
_ARCS = np.zeros((6, 6, 3), dtype=np.int64)
for _tt, _rows in ARC_TABLE.items():
    for _i, _row in enumerate(sorted(_rows)):
        _ARCS[_tt, _i] = _row

_VERTEX_WEIGHT = np.array([2, 4, 4, 4, 6, 4], dtype=np.int64)


@njit(cache=True)
def _pair_face_type(a1, c1, a2, c2):
    """0 = none, 1 = L, 2 = R, 3 = S (see generate.pair_face_type)."""
    if (a2 - a1) & 3 == 2 and (c2 - c1) & 3 == 2:
        return 3
    if (a1 - a2) & 3 == 1 and (c2 - c1) & 3 == 1:
        return 1 if a1 & 1 == 0 else 2
    if (a2 - a1) & 3 == 1 and (c1 - c2) & 3 == 1:
        return 1 if a2 & 1 == 0 else 2
    return 0


@njit(cache=True)
def _type_allowed(tt, weight, n_ucv, n_bcv, n_dip, max_cvs, max_bcvs,
                  max_n, weight_max):
    if tt == 0:
        return weight_max < 0 or weight + 2 <= weight_max
    ncv = n_ucv + n_bcv
    if max_cvs >= 0 and ncv + 1 > max_cvs:
        return False
    if tt == 5 and max_bcvs >= 0 and n_bcv + 1 > max_bcvs:
        return False
    if max_n >= 0 and n_dip + ncv + 1 > max_n:
        return False
    if weight_max >= 0:
        w = 6 if tt == 4 else 4
        if weight + w > weight_max:
            return False
    return True


@njit(cache=True)
def _core(vmax, two_delta_max, allow_melons, menu, max_cvs, max_bcvs,
          max_n, weight_max, loop_max, mode, leaf_td_max,
          min_bcvs, no_cv_links, max_dipoles,
          table, meta, out_vt, out_pair, res):
    """Run the full search.  See module docstring for modes."""
    nd_max = 4 * vmax
    big = nd_max + 1          # candidate codes >= big index the menu
    pair = np.full(nd_max, -1, dtype=np.int64)
    vtype = np.zeros(vmax, dtype=np.int64)
    mate = np.full(3 * nd_max, -1, dtype=np.int64)
    faces = np.zeros(3, dtype=np.int64)
    menu_len = len(menu)
    max_leaves = meta.shape[0]

    nv = 0
    unpaired = 0
    loops = 0
    n_ucv = 0
    n_bcv = 0
    n_dip = 0
    weight = 0

    levels = 2 * vmax + 2
    sd = np.zeros(levels, dtype=np.int64)      # cursor dart of the frame
    scand = np.zeros(levels, dtype=np.int64)   # next candidate code
    sp = np.zeros(levels, dtype=np.int64)      # active partner
    snew = np.zeros(levels, dtype=np.int64)    # vertex added for pairing
    sloop = np.zeros(levels, dtype=np.int64)   # loop created
    sdip = np.zeros(levels, dtype=np.int64)    # dipoles created

    for root_mi in range(menu_len):
        tt0 = menu[root_mi]
        if not _type_allowed(tt0, weight, n_ucv, n_bcv, n_dip, max_cvs,
                             max_bcvs, max_n, weight_max):
            continue
        # -- add vertex 0 ------------------------------------------------
        vtype[0] = tt0
        for i in range(6):
            fam = _ARCS[tt0, i, 0]
            ea = 3 * (4 * 0 + _ARCS[tt0, i, 1]) + fam
            eb = 3 * (4 * 0 + _ARCS[tt0, i, 2]) + fam
            mate[ea] = eb
            mate[eb] = ea
        nv = 1
        unpaired = 4
        weight = _VERTEX_WEIGHT[tt0]
        n_ucv = 1 if (tt0 != 0 and tt0 != 5) else 0
        n_bcv = 1 if tt0 == 5 else 0

        level = 0
        sd[0] = 0
        scand[0] = 1
        while level >= 0:
            d = sd[level]
            cand = scand[level]
            parity = (d & 1) ^ 1
            advanced = False
            while True:
                newv = False
                if cand < big:
                    if cand >= 4 * nv:
                        cand = big if nv < vmax else big + menu_len
                        continue
                    p = cand
                    cand += 1
                    if pair[p] >= 0 or (p & 1) != parity:
                        continue
                else:
                    mi = cand - big
                    if mi >= menu_len:
                        break
                    cand += 1
                    tt = menu[mi]
                    if not _type_allowed(tt, weight, n_ucv, n_bcv, n_dip,
                                         max_cvs, max_bcvs, max_n,
                                         weight_max):
                        continue
                    # -- add a vertex -----------------------------------
                    w = nv
                    vtype[w] = tt
                    for i in range(6):
                        fam = _ARCS[tt, i, 0]
                        ea = 3 * (4 * w + _ARCS[tt, i, 1]) + fam
                        eb = 3 * (4 * w + _ARCS[tt, i, 2]) + fam
                        mate[ea] = eb
                        mate[eb] = ea
                    nv += 1
                    unpaired += 4
                    weight += _VERTEX_WEIGHT[tt]
                    if tt == 5:
                        n_bcv += 1
                    elif tt != 0:
                        n_ucv += 1
                    p = 4 * w + (1 - (d & 1))
                    newv = True

                # ---- attempt the pairing (d, p) ------------------------
                u = d >> 2
                su = d & 3
                v = p >> 2
                sv = p & 3
                ok = True
                new_dip = 0
                is_loop = u == v
                if is_loop:
                    if loop_max >= 0 and loops + 1 > loop_max:
                        ok = False
                    if (ok and vtype[u] != 0 and d != 0
                            and (su >> 1) == (sv >> 1)):
                        ok = False
                    if (ok and no_cv_links and vtype[u] != 0 and d != 0
                            and (su >> 1) != (sv >> 1)):
                        # Second cross-side loop on one chain-vertex:
                        # a closed chain, never in a scheme.
                        od = 4 * u + (su ^ 1)
                        op = 4 * u + (sv ^ 1)
                        if od != 0 and op != 0 and pair[od] == op:
                            ok = False
                elif (no_cv_links and vtype[u] != 0 and vtype[v] != 0
                        and d != 0):
                    # Two chain-vertex sides joined by two non-root
                    # edges form a proper chain: never in a scheme.
                    od = 4 * u + (su ^ 1)
                    op = 4 * v + (sv ^ 1)
                    if od != 0 and pair[od] == op:
                        ok = False
                elif vtype[u] == 0 and vtype[v] == 0:
                    # Existing parallel edges between u and v, found by
                    # scanning u's slots; slot 0 of vertex 0 is the root
                    # edge and never takes part in a melon or dipole.
                    npar = 0
                    pa0 = 0
                    pb0 = 0
                    pa1 = 0
                    pb1 = 0
                    pa2 = 0
                    pb2 = 0
                    for a in range(4):
                        q = pair[4 * u + a]
                        if q >= 0 and (q >> 2) == v:
                            if npar == 0:
                                pa0 = a
                                pb0 = q & 3
                            elif npar == 1:
                                pa1 = a
                                pb1 = q & 3
                            else:
                                pa2 = a
                                pb2 = q & 3
                            npar += 1
                    new_is_root = d == 0
                    if ((max_n >= 0 or max_dipoles >= 0) and npar > 0
                            and not new_is_root):
                        for k in range(npar):
                            if k == 0:
                                sa = pa0
                                sb = pb0
                            elif k == 1:
                                sa = pa1
                                sb = pb1
                            else:
                                sa = pa2
                                sb = pb2
                            if u == 0 and sa == 0:
                                continue
                            if _pair_face_type(sa, sb, su, sv) != 0:
                                new_dip += 1
                        if (max_n >= 0
                                and n_dip + new_dip + n_ucv + n_bcv > max_n):
                            ok = False
                        if (max_dipoles >= 0
                                and n_dip + new_dip > max_dipoles):
                            ok = False
                    if (ok and not allow_melons and npar >= 2
                            and not new_is_root):
                        for i in range(npar):
                            if not ok:
                                break
                            if i == 0:
                                ia = pa0
                                ib = pb0
                            elif i == 1:
                                ia = pa1
                                ib = pb1
                            else:
                                ia = pa2
                                ib = pb2
                            if u == 0 and ia == 0:
                                continue
                            for j in range(i + 1, npar):
                                if j == 1:
                                    ja = pa1
                                    jb = pb1
                                else:
                                    ja = pa2
                                    jb = pb2
                                if u == 0 and ja == 0:
                                    continue
                                t12 = _pair_face_type(ia, ib, ja, jb)
                                t13 = _pair_face_type(ia, ib, su, sv)
                                t23 = _pair_face_type(ja, jb, su, sv)
                                if (t12 != 0 and t13 != 0 and t23 != 0
                                        and t12 != t13 and t12 != t23
                                        and t13 != t23):
                                    ok = False
                                    break
                if not ok:
                    if newv:
                        nv -= 1
                        unpaired -= 4
                        weight -= _VERTEX_WEIGHT[vtype[nv]]
                        if vtype[nv] == 5:
                            n_bcv -= 1
                        elif vtype[nv] != 0:
                            n_ucv -= 1
                    continue
                # Apply.
                pair[d] = p
                pair[p] = d
                unpaired -= 2
                n_dip += new_dip
                if is_loop:
                    loops += 1
                for f in range(3):
                    ea = 3 * d + f
                    eb = 3 * p + f
                    ma = mate[ea]
                    if ma == eb:
                        faces[f] += 1
                    else:
                        mb = mate[eb]
                        mate[ma] = mb
                        mate[mb] = ma
                # Degree lower bound for any completion.
                bound_ok = True
                if min_bcvs >= 0 and n_bcv + (vmax - nv) < min_bcvs:
                    bound_ok = False
                if bound_ok and two_delta_max >= 0:
                    pbound = (6 + 3 * (nv - n_ucv - n_bcv)
                              - 2 * (faces[0] + faces[1] + faces[2])
                              + 4 * n_ucv + 6 * n_bcv - 3 * unpaired)
                    # A future broken chain-vertex lowers the bound by
                    # at most 0 (it adds +6 where a standard vertex
                    # adds +3), so vertices still owed to min_bcvs do
                    # not earn the -3 slack.
                    slack = vmax - nv
                    if min_bcvs >= 0 and min_bcvs > n_bcv:
                        slack -= min_bcvs - n_bcv
                    bound_ok = (pbound - 3 * slack <= two_delta_max)
                d2 = -1
                if bound_ok:
                    d2 = d + 1
                    ndc = 4 * nv
                    while d2 < ndc and pair[d2] >= 0:
                        d2 += 1
                    if d2 == ndc:
                        d2 = -2  # leaf
                if d2 == -2:
                    # ---- leaf ------------------------------------------
                    res[R_LEAVES] += 1
                    ftot = faces[0] + faces[1] + faces[2]
                    n_std = nv - n_ucv - n_bcv
                    td = (6 + 3 * n_std - 2 * ftot + 4 * n_ucv
                          + 6 * n_bcv)
                    if ((leaf_td_max < 0 or td <= leaf_td_max)
                            and (min_bcvs < 0 or n_bcv >= min_bcvs)):
                        if mode == TABLE:
                            glr2 = 2 + nv - faces[0] - faces[1]
                            planar = 1 if glr2 == 0 else 0
                            table[nv, td, planar, faces[2]] += 1
                            res[R_EMITTED] += 1
                            if n_ucv == 0 and n_bcv == 0:
                                if glr2 & 1:
                                    res[R_PARITY_VIOL] += 1
                                if nv - 2 * faces[2] + 2 != td - 2 * glr2:
                                    res[R_LAMBDA_VIOL] += 1
                        else:
                            k = res[R_EMITTED]
                            if k >= max_leaves:
                                res[R_OVERFLOW] = 1
                            else:
                                meta[k, 0] = nv
                                meta[k, 1] = faces[0]
                                meta[k, 2] = faces[1]
                                meta[k, 3] = faces[2]
                                meta[k, 4] = loops
                                meta[k, 5] = n_ucv
                                meta[k, 6] = n_bcv
                                for i in range(nv):
                                    out_vt[k, i] = vtype[i]
                                for i in range(4 * nv):
                                    out_pair[k, i] = pair[i]
                                res[R_EMITTED] += 1
                if d2 >= 0:
                    # Push a child frame.
                    scand[level] = cand
                    sp[level] = p
                    snew[level] = 1 if newv else 0
                    sloop[level] = 1 if is_loop else 0
                    sdip[level] = new_dip
                    level += 1
                    sd[level] = d2
                    scand[level] = d2 + 1
                    advanced = True
                    break
                # Leaf or pruned: undo in place, keep scanning.
                for f in range(3):
                    ea = 3 * d + f
                    eb = 3 * p + f
                    ma = mate[ea]
                    if ma == eb:
                        faces[f] -= 1
                    else:
                        mb = mate[eb]
                        mate[ma] = ea
                        mate[mb] = eb
                if is_loop:
                    loops -= 1
                n_dip -= new_dip
                unpaired += 2
                pair[d] = -1
                pair[p] = -1
                if newv:
                    nv -= 1
                    unpaired -= 4
                    weight -= _VERTEX_WEIGHT[vtype[nv]]
                    if vtype[nv] == 5:
                        n_bcv -= 1
                    elif vtype[nv] != 0:
                        n_ucv -= 1
            if advanced:
                continue
            # Frame exhausted: pop and undo the parent's active pairing.
            level -= 1
            if level < 0:
                break
            d = sd[level]
            p = sp[level]
            for f in range(3):
                ea = 3 * d + f
                eb = 3 * p + f
                ma = mate[ea]
                if ma == eb:
                    faces[f] -= 1
                else:
                    mb = mate[eb]
                    mate[ma] = ea
                    mate[mb] = eb
            if sloop[level]:
                loops -= 1
            n_dip -= sdip[level]
            unpaired += 2
            pair[d] = -1
            pair[p] = -1
            if snew[level]:
                nv -= 1
                unpaired -= 4
                weight -= _VERTEX_WEIGHT[vtype[nv]]
                if vtype[nv] == 5:
                    n_bcv -= 1
                elif vtype[nv] != 0:
                    n_ucv -= 1

        # -- remove vertex 0 ----------------------------------------------
        nv = 0
        unpaired = 0
        weight = 0
        n_ucv = 0
        n_bcv = 0


def _flags(max_vertices, two_delta_max, allow_melons, vertex_menu,
           max_cvs, max_bcvs, max_dipoles_plus_cvs, weight_max, loop_max):
    none = lambda x: -1 if x is None else int(x)
    return (int(max_vertices), none(two_delta_max),
            bool(allow_melons), np.asarray(vertex_menu, dtype=np.int64),
            none(max_cvs), none(max_bcvs), none(max_dipoles_plus_cvs),
            none(weight_max), none(loop_max))


def fast_count_table(max_vertices, *, two_delta_max=None,
                     allow_melons=True, leaf_two_delta_max=None):
    """Count standard-vertex leaves by (V, 2*delta, lr-planar, F_s).

    Returns ``(table_dict, stats)`` where ``stats`` has keys ``leaves``,
    ``counted``, ``parity_violations``, ``lambda_violations``.
    """
    args = _flags(max_vertices, two_delta_max, allow_melons, (STD,),
                  0, None, None, None, None)
    vmax = args[0]
    td_hi = 3 * max(vmax, 2) + 7
    table = np.zeros((vmax + 1, td_hi, 2, 2 * vmax + 3), dtype=np.int64)
    meta = np.zeros((1, 7), dtype=np.int64)
    out_vt = np.zeros((1, 1), dtype=np.int64)
    out_pair = np.zeros((1, 1), dtype=np.int64)
    res = np.zeros(5, dtype=np.int64)
    ltd = -1 if leaf_two_delta_max is None else int(leaf_two_delta_max)
    _core(*args, TABLE, ltd, -1, False, -1,
          table, meta, out_vt, out_pair, res)
    out = {}
    for idx in zip(*np.nonzero(table)):
        nv, td, planar, fs = (int(x) for x in idx)
        out[(nv, td, bool(planar), fs)] = int(table[idx])
    stats = {"leaves": int(res[R_LEAVES]), "counted": int(res[R_EMITTED]),
             "parity_violations": int(res[R_PARITY_VIOL]),
             "lambda_violations": int(res[R_LAMBDA_VIOL])}
    return out, stats


def fast_collect(max_vertices, *, two_delta_max=None, allow_melons=True,
                 vertex_menu=(STD,), max_cvs=0, max_bcvs=None,
                 max_dipoles_plus_cvs=None, weight_max=None,
                 loop_max=None, leaf_two_delta_max=None,
                 min_bcvs=None, forbid_cv_links=False, max_dipoles=None,
                 initial_capacity=1 << 15):
    """Collect every leaf as a :class:`momaps.generate.LeafView`.

    ``min_bcvs`` keeps only leaves with at least that many broken
    chain-vertices (with the matching search prune).
    ``forbid_cv_links`` prunes pairings that side-link two
    chain-vertices by non-root double edges — such configurations form
    proper chains, so they never occur in reduced schemes.
    """
    args = _flags(max_vertices, two_delta_max, allow_melons, vertex_menu,
                  max_cvs, max_bcvs, max_dipoles_plus_cvs, weight_max,
                  loop_max)
    vmax = args[0]
    table = np.zeros((1, 1, 1, 1), dtype=np.int64)
    ltd = -1 if leaf_two_delta_max is None else int(leaf_two_delta_max)
    mb = -1 if min_bcvs is None else int(min_bcvs)
    cap = int(initial_capacity)
    while True:
        meta = np.zeros((cap, 7), dtype=np.int64)
        out_vt = np.zeros((cap, vmax), dtype=np.int64)
        out_pair = np.zeros((cap, 4 * vmax), dtype=np.int64)
        res = np.zeros(5, dtype=np.int64)
        _core(*args, COLLECT, ltd, mb, bool(forbid_cv_links),
              -1 if max_dipoles is None else int(max_dipoles),
              table, meta, out_vt, out_pair, res)
        if not res[R_OVERFLOW]:
            break
        cap *= 4
    views = []
    for k in range(int(res[R_EMITTED])):
        nv = int(meta[k, 0])
        views.append(LeafView(
            nv, [int(t) for t in out_vt[k, :nv]],
            [int(x) for x in out_pair[k, :4 * nv]],
            int(meta[k, 1]), int(meta[k, 2]), int(meta[k, 3]),
            int(meta[k, 4]),
            nv - int(meta[k, 5]) - int(meta[k, 6]),
            int(meta[k, 5]), int(meta[k, 6])))
    return views, int(res[R_LEAVES])
