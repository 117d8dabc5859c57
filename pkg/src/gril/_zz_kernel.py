"""Simplex-wise zigzag persistence reduction over GF(2).

Chains are bit-packed into uint64 words, one row per stored column.  Per
chain dimension q the state holds

* alive columns: cycle representatives of the currently-open bars, one per
  bar, with birth step, birth direction (inserted vs deletion-born) and a
  seated pivot (highest set bit);
* boundary columns: an echelon basis of ``im d_{q+1}`` of the current
  complex, each carrying a (q+1)-chain witness with that boundary.

All pivots within a dimension are pairwise distinct across alive and
boundary columns, tracked in a single owner table.  Basis changes among
alive columns are restricted to adding a column into one with a larger
birth key, where the key orders deletion-born bars (younger first) below
insertion-born bars (older first); this is what makes the greedy closure
choices below produce the true interval multiset.

Step rules, writing p for the simplex dimension and t for the step:

* insert, d(sigma) reduces to zero through boundary columns: a p-bar is
  born with representative sigma + accumulated witnesses;
* insert, the reduction consumes alive (p-1)-columns S: the key-maximal
  bar in S closes at t, and sum(S) joins the boundary columns with witness
  sigma + accumulated witnesses;
* delete, some alive p-columns S contain sigma: the key-minimal bar A in S
  closes at t; every other column of S absorbs A's representative (making
  it sigma-free), as do boundary witnesses containing sigma;
* delete, no alive p-column contains sigma: ``im d_p`` shrinks by one:
  boundary columns whose witness contains sigma are combined to free one,
  and a deletion-born (p-1)-bar starts with representative d(sigma).

The module is numba-compatible; the active backend decides whether it is
JIT-compiled (see :mod:`gril.backend`).
"""

from __future__ import annotations

import numpy as np

from .backend import jit

_U1 = np.uint64(1)
_U0 = np.uint64(0)


@jit
def _pivot_row(A, i):
    """Highest set bit of row i, or -1 if the row is zero."""
    for k in range(A.shape[1] - 1, -1, -1):
        w = A[i, k]
        if w != _U0:
            b = 63
            while (w >> np.uint64(b)) & _U1 == _U0:
                b -= 1
            return k * 64 + b
    return -1


@jit
def _get_bit(A, i, bit):
    return (A[i, bit >> 6] >> np.uint64(bit & 63)) & _U1 != _U0


@jit
def _set_bit(A, i, bit):
    A[i, bit >> 6] |= _U1 << np.uint64(bit & 63)


@jit
def _key(birth, fwd):
    # Deletion-born bars sort below insertion-born ones; within each class
    # the absorbable direction is younger-into-older for deletion-born and
    # older-into-younger for insertion-born bars.
    if fwd != 0:
        return birth + 1
    return -birth


@jit
def _place(own, ZA, zb, zf, zp, BC, BW, bp, col, isbnd):
    """Seat a column, cascading pivot collisions.

    On a collision the boundary column or the alive column with the smaller
    birth key keeps the slot; the other absorbs it and keeps cascading.
    Boundary columns are never modified by alive ones.
    """
    cur = col
    bndmode = isbnd
    while True:
        if bndmode:
            piv = _pivot_row(BC, cur)
        else:
            piv = _pivot_row(ZA, cur)
        if piv < 0:
            raise RuntimeError("zigzag invariant violated: column vanished")
        owner = own[piv]
        if owner == -1:
            if bndmode:
                own[piv] = -2 - cur
                bp[cur] = piv
            else:
                own[piv] = cur
                zp[cur] = piv
            return
        if owner >= 0:
            a = owner
            if bndmode:
                # boundary column takes the slot; alive column absorbs it
                own[piv] = -2 - cur
                bp[cur] = piv
                ZA[a, :] ^= BC[cur, :]
                cur = a
                bndmode = False
            else:
                if _key(zb[cur], zf[cur]) < _key(zb[a], zf[a]):
                    own[piv] = cur
                    zp[cur] = piv
                    ZA[a, :] ^= ZA[cur, :]
                    cur = a
                else:
                    ZA[cur, :] ^= ZA[a, :]
        else:
            b = -2 - owner
            if bndmode:
                BC[cur, :] ^= BC[b, :]
                BW[cur, :] ^= BW[b, :]
            else:
                ZA[cur, :] ^= BC[b, :]


@jit
def _remove_alive(own, ZA, zb, zf, zp, n, col):
    """Swap-remove alive column ``col`` (its pivot slot already vacated)."""
    last = n - 1
    if col != last:
        ZA[col, :] = ZA[last, :]
        zb[col] = zb[last]
        zf[col] = zf[last]
        zp[col] = zp[last]
        if own[zp[col]] == last:
            own[zp[col]] = col
    return last


@jit
def _remove_bnd(own, BC, BW, bp, n, col):
    last = n - 1
    if col != last:
        BC[col, :] = BC[last, :]
        BW[col, :] = BW[last, :]
        bp[col] = bp[last]
        if own[bp[col]] == -2 - last:
            own[bp[col]] = -2 - col
    return last


@jit
def _insert_simplex(t, sslot, qdim, bd, wit, brow, S,
                    ownq, ZAq, zbq, zfq, zpq, nAq, BCq, BWq, bpq, nBq,
                    ownp, ZAp, zbp, zfp, zpp, nAp, BCp, BWp, bpp,
                    bar_dim, bar_b, bar_d, nbars):
    """Insert a simplex of dimension qdim+1; bd holds its boundary chain."""
    ns = 0
    while True:
        piv = _pivot_row(bd, 0)
        if piv < 0:
            break
        owner = ownq[piv]
        if owner == -1:
            raise RuntimeError("zigzag invariant violated: unreduced boundary")
        if owner >= 0:
            S[ns] = owner
            ns += 1
            bd[0, :] ^= ZAq[owner, :]
        else:
            b = -2 - owner
            bd[0, :] ^= BCq[b, :]
            wit[0, :] ^= BWq[b, :]
    if ns == 0:
        # creator: a new (qdim+1)-cycle sigma + witnesses
        ZAp[nAp, :] = wit[0, :]
        zbp[nAp] = t
        zfp[nAp] = 1
        _place(ownp, ZAp, zbp, zfp, zpp, BCp, BWp, bpp, nAp, False)
        return nAq, nBq, nAp + 1, nbars
    # destroyer: close the key-maximal bar among S
    brow[0, :] = _U0
    astar = S[0]
    kmax = _key(zbq[astar], zfq[astar])
    for i in range(ns):
        a = S[i]
        brow[0, :] ^= ZAq[a, :]
        k = _key(zbq[a], zfq[a])
        if k > kmax:
            kmax = k
            astar = a
    bar_dim[nbars] = qdim
    bar_b[nbars] = zbq[astar] - 1
    bar_d[nbars] = t - 1
    nbars += 1
    ownq[zpq[astar]] = -1
    nAq = _remove_alive(ownq, ZAq, zbq, zfq, zpq, nAq, astar)
    BCq[nBq, :] = brow[0, :]
    BWq[nBq, :] = wit[0, :]
    _place(ownq, ZAq, zbq, zfq, zpq, BCq, BWq, bpq, nBq, True)
    return nAq, nBq + 1, nAp, nbars


@jit
def _delete_simplex(t, sslot, pdim, bd, S, W,
                    ownp, ZAp, zbp, zfp, zpp, nAp, BCp, BWp, bpp,
                    ownq, ZAq, zbq, zfq, zpq, nAq, BCq, BWq, bpq, nBq,
                    bar_dim, bar_b, bar_d, nbars, has_lower):
    """Delete a simplex of dimension pdim; bd holds its boundary chain."""
    ns = 0
    for a in range(nAp):
        if _get_bit(ZAp, a, sslot):
            S[ns] = a
            ns += 1
    if ns > 0:
        # a pdim-bar dies: close the key-minimal bar among S
        astar = S[0]
        kmin = _key(zbp[astar], zfp[astar])
        for i in range(ns):
            a = S[i]
            k = _key(zbp[a], zfp[a])
            if k < kmin:
                kmin = k
                astar = a
        for i in range(ns):
            a = S[i]
            if a != astar:
                ZAp[a, :] ^= ZAp[astar, :]
        if has_lower:
            for c in range(nBq):
                if _get_bit(BWq, c, sslot):
                    BWq[c, :] ^= ZAp[astar, :]
        bar_dim[nbars] = pdim
        bar_b[nbars] = zbp[astar] - 1
        bar_d[nbars] = t - 1
        nbars += 1
        ownp[zpp[astar]] = -1
        nAp = _remove_alive(ownp, ZAp, zbp, zfp, zpp, nAp, astar)
        moved = nAp  # old index of the column moved into astar's slot
        # vacate all touched slots first, then reseat one by one
        nt = 0
        for i in range(ns):
            a = S[i]
            if a == astar:
                continue
            if a == moved:
                a = astar
            ownp[zpp[a]] = -1
            S[nt] = a
            nt += 1
        for i in range(nt):
            _place(ownp, ZAp, zbp, zfp, zpp, BCp, BWp, bpp, S[i], False)
        return nAp, nAq, nBq, nbars
    # pdim-1 gains a deletion-born bar; shrink the boundary basis below
    if not has_lower:
        raise RuntimeError("zigzag invariant violated: vertex not in any class")
    nw = 0
    for c in range(nBq):
        if _get_bit(BWq, c, sslot):
            W[nw] = c
            nw += 1
    if nw == 0:
        raise RuntimeError("zigzag invariant violated: no witness for deletion")
    c0 = W[0]
    for i in range(1, nw):
        c = W[i]
        BCq[c, :] ^= BCq[c0, :]
        BWq[c, :] ^= BWq[c0, :]
    ownq[bpq[c0]] = -1
    for i in range(1, nw):
        ownq[bpq[W[i]]] = -1
    nBq = _remove_bnd(ownq, BCq, BWq, bpq, nBq, c0)
    movedb = nBq
    for i in range(1, nw):
        if W[i] == movedb:
            W[i] = c0
    for i in range(1, nw):
        _place(ownq, ZAq, zbq, zfq, zpq, BCq, BWq, bpq, W[i], True)
    ZAq[nAq, :] = bd[0, :]
    zbq[nAq] = t
    zfq[nAq] = 0
    _place(ownq, ZAq, zbq, zfq, zpq, BCq, BWq, bpq, nAq, False)
    return nAp, nAq + 1, nBq, nbars


@jit
def zz_run(ops, dims, slots, m0, m1, m2, facets1, facets2):
    """Run the zigzag reduction; returns (bar_dim, bar_birth, bar_death).

    Bars are half-open step intervals [b, d): the class lives in the
    complexes after steps b+1 .. d.  Steps are 1-based internally; ops[i]
    is 1 for insert and 0 for delete of slots[i] in dimension dims[i].
    """
    n = ops.shape[0]
    nw0 = max(1, (m0 + 63) // 64)
    nw1 = max(1, (m1 + 63) // 64)
    nw2 = max(1, (m2 + 63) // 64)
    nw3 = 1

    capA0, capA1, capA2 = max(1, m0), max(1, m1), max(1, m2)
    capB0, capB1, capB2 = max(1, m1), max(1, m2), 1

    ZA0 = np.zeros((capA0, nw0), dtype=np.uint64)
    ZA1 = np.zeros((capA1, nw1), dtype=np.uint64)
    ZA2 = np.zeros((capA2, nw2), dtype=np.uint64)
    zb0 = np.zeros(capA0, dtype=np.int64)
    zb1 = np.zeros(capA1, dtype=np.int64)
    zb2 = np.zeros(capA2, dtype=np.int64)
    zf0 = np.zeros(capA0, dtype=np.uint8)
    zf1 = np.zeros(capA1, dtype=np.uint8)
    zf2 = np.zeros(capA2, dtype=np.uint8)
    zp0 = np.zeros(capA0, dtype=np.int64)
    zp1 = np.zeros(capA1, dtype=np.int64)
    zp2 = np.zeros(capA2, dtype=np.int64)
    BC0 = np.zeros((capB0, nw0), dtype=np.uint64)
    BC1 = np.zeros((capB1, nw1), dtype=np.uint64)
    BC2 = np.zeros((capB2, nw2), dtype=np.uint64)
    BW0 = np.zeros((capB0, nw1), dtype=np.uint64)
    BW1 = np.zeros((capB1, nw2), dtype=np.uint64)
    BW2 = np.zeros((capB2, nw3), dtype=np.uint64)
    bp0 = np.zeros(capB0, dtype=np.int64)
    bp1 = np.zeros(capB1, dtype=np.int64)
    bp2 = np.zeros(capB2, dtype=np.int64)
    own0 = np.full(max(1, m0), -1, dtype=np.int64)
    own1 = np.full(max(1, m1), -1, dtype=np.int64)
    own2 = np.full(max(1, m2), -1, dtype=np.int64)

    nA0 = nA1 = nA2 = 0
    nB0 = nB1 = nB2 = 0

    sc0 = np.zeros((1, nw0), dtype=np.uint64)
    sc1 = np.zeros((1, nw1), dtype=np.uint64)
    wit1 = np.zeros((1, nw1), dtype=np.uint64)
    wit2 = np.zeros((1, nw2), dtype=np.uint64)
    br0 = np.zeros((1, nw0), dtype=np.uint64)
    br1 = np.zeros((1, nw1), dtype=np.uint64)
    Swork = np.zeros(max(capA0, capA1, capA2), dtype=np.int64)
    Wwork = np.zeros(max(capB0, capB1, capB2), dtype=np.int64)

    bar_dim = np.zeros(n + 4, dtype=np.int64)
    bar_b = np.zeros(n + 4, dtype=np.int64)
    bar_d = np.zeros(n + 4, dtype=np.int64)
    nbars = 0

    for i in range(n):
        t = i + 1
        s = slots[i]
        p = dims[i]
        if ops[i] == 1:
            if p == 0:
                ZA0[nA0, :] = _U0
                _set_bit(ZA0, nA0, s)
                zb0[nA0] = t
                zf0[nA0] = 1
                _place(own0, ZA0, zb0, zf0, zp0, BC0, BW0, bp0, nA0, False)
                nA0 += 1
            elif p == 1:
                sc0[0, :] = _U0
                _set_bit(sc0, 0, facets1[s, 0])
                _set_bit(sc0, 0, facets1[s, 1])
                wit1[0, :] = _U0
                _set_bit(wit1, 0, s)
                nA0, nB0, nA1, nbars = _insert_simplex(
                    t, s, 0, sc0, wit1, br0, Swork,
                    own0, ZA0, zb0, zf0, zp0, nA0, BC0, BW0, bp0, nB0,
                    own1, ZA1, zb1, zf1, zp1, nA1, BC1, BW1, bp1,
                    bar_dim, bar_b, bar_d, nbars)
            else:
                sc1[0, :] = _U0
                _set_bit(sc1, 0, facets2[s, 0])
                _set_bit(sc1, 0, facets2[s, 1])
                _set_bit(sc1, 0, facets2[s, 2])
                wit2[0, :] = _U0
                _set_bit(wit2, 0, s)
                nA1, nB1, nA2, nbars = _insert_simplex(
                    t, s, 1, sc1, wit2, br1, Swork,
                    own1, ZA1, zb1, zf1, zp1, nA1, BC1, BW1, bp1, nB1,
                    own2, ZA2, zb2, zf2, zp2, nA2, BC2, BW2, bp2,
                    bar_dim, bar_b, bar_d, nbars)
        else:
            if p == 0:
                sc0[0, :] = _U0
                nA0, _, _, nbars = _delete_simplex(
                    t, s, 0, sc0, Swork, Wwork,
                    own0, ZA0, zb0, zf0, zp0, nA0, BC0, BW0, bp0,
                    own0, ZA0, zb0, zf0, zp0, nA0, BC0, BW0, bp0, nB0,
                    bar_dim, bar_b, bar_d, nbars, False)
            elif p == 1:
                sc0[0, :] = _U0
                _set_bit(sc0, 0, facets1[s, 0])
                _set_bit(sc0, 0, facets1[s, 1])
                nA1, nA0, nB0, nbars = _delete_simplex(
                    t, s, 1, sc0, Swork, Wwork,
                    own1, ZA1, zb1, zf1, zp1, nA1, BC1, BW1, bp1,
                    own0, ZA0, zb0, zf0, zp0, nA0, BC0, BW0, bp0, nB0,
                    bar_dim, bar_b, bar_d, nbars, True)
            else:
                sc1[0, :] = _U0
                _set_bit(sc1, 0, facets2[s, 0])
                _set_bit(sc1, 0, facets2[s, 1])
                _set_bit(sc1, 0, facets2[s, 2])
                nA2, nA1, nB1, nbars = _delete_simplex(
                    t, s, 2, sc1, Swork, Wwork,
                    own2, ZA2, zb2, zf2, zp2, nA2, BC2, BW2, bp2,
                    own1, ZA1, zb1, zf1, zp1, nA1, BC1, BW1, bp1, nB1,
                    bar_dim, bar_b, bar_d, nbars, True)

    for col in range(nA0):
        bar_dim[nbars] = 0
        bar_b[nbars] = zb0[col] - 1
        bar_d[nbars] = n
        nbars += 1
    for col in range(nA1):
        bar_dim[nbars] = 1
        bar_b[nbars] = zb1[col] - 1
        bar_d[nbars] = n
        nbars += 1
    for col in range(nA2):
        bar_dim[nbars] = 2
        bar_b[nbars] = zb2[col] - 1
        bar_d[nbars] = n
        nbars += 1

    return bar_dim[:nbars], bar_b[:nbars], bar_d[:nbars]
