"""Integer-table kernels used by the group and biset layers.

Every kernel has a numba implementation and a vectorised numpy one with the
same signature.  Setting ``BURNSIDE_FUSION_DISABLE_NUMBA=1`` (or running
without numba installed) selects the numpy versions.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("BURNSIDE_FUSION_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")
numba = None
if not _DISABLED:
    try:
        import numba
    except ImportError:  # pragma: no cover
        pass
BACKEND = "numpy" if numba is None else "numba"


# numpy implementations

def _np_mul_table(perms, codes, weights):
    n = perms.shape[0]
    table = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        prod = perms[i][perms]
        table[i] = np.searchsorted(codes, prod @ weights)
    return table


def _np_closure_mask(mul, gens, start):
    mask = np.zeros(mul.shape[0], dtype=np.bool_)
    mask[start] = True
    mask[0] = True
    frontier = np.flatnonzero(mask)
    while frontier.size:
        new = np.unique(mul[np.ix_(frontier, gens)].ravel())
        new = new[~mask[new]]
        mask[new] = True
        frontier = new
    return mask


def _np_transport_mask(conj_g, conj_h, kgens, phi, psi, lmask):
    if kgens.size == 0:
        return np.ones(conj_g.shape[0], dtype=np.bool_)
    targets = conj_g[:, kgens]
    ok = lmask[targets].all(axis=1)
    want = psi[targets]
    have = conj_h[:, phi[kgens]]
    match = (have[None, :, :] == want[:, None, :]).all(axis=2).any(axis=1)
    return ok & match


def _np_lexmin_row(rows):
    idx = np.arange(rows.shape[0])
    for col in range(rows.shape[1]):
        vals = rows[idx, col]
        idx = idx[vals == vals.min()]
        if idx.size == 1:
            break
    return int(idx[0])


def _np_orbit_labels(acts):
    n = acts.shape[1]
    labels = np.arange(n)
    while True:
        old = labels
        for act in acts:
            labels = np.minimum(labels, labels[act])
            inv = np.empty_like(act)
            inv[act] = np.arange(n)
            labels = np.minimum(labels, labels[inv])
        labels = labels[labels]
        if np.array_equal(labels, old):
            return labels


def _np_extend_homs(mul_h, parent, gen_of, chk_x, chk_g, chk_y, cands):
    m = cands.shape[0]
    size = parent.shape[0]
    table = np.zeros((m, size), dtype=np.int32)
    for y in range(1, size):
        table[:, y] = mul_h[table[:, parent[y]], cands[:, gen_of[y]]]
    ok = np.ones(m, dtype=np.bool_)
    for x, g, y in zip(chk_x, chk_g, chk_y):
        ok &= mul_h[table[:, x], cands[:, g]] == table[:, y]
    return table, ok


# numba implementations

if numba is not None:
    njit = numba.njit(cache=True, nogil=True)

    @njit
    def _nb_mul_table(perms, codes, weights):
        n, d = perms.shape
        table = np.empty((n, n), dtype=np.int32)
        for i in range(n):
            for j in range(n):
                c = 0
                for k in range(d):
                    c += perms[i, perms[j, k]] * weights[k]
                lo, hi = 0, n
                while lo < hi:
                    mid = (lo + hi) // 2
                    if codes[mid] < c:
                        lo = mid + 1
                    else:
                        hi = mid
                table[i, j] = lo
        return table

    @njit
    def _nb_closure_mask(mul, gens, start):
        n = mul.shape[0]
        mask = np.zeros(n, dtype=np.bool_)
        queue = np.empty(n, dtype=np.int64)
        head, tail = 0, 0
        mask[0] = True
        queue[tail] = 0
        tail += 1
        for s in start:
            if not mask[s]:
                mask[s] = True
                queue[tail] = s
                tail += 1
        while head < tail:
            x = queue[head]
            head += 1
            for g in gens:
                y = mul[x, g]
                if not mask[y]:
                    mask[y] = True
                    queue[tail] = y
                    tail += 1
        return mask

    @njit
    def _nb_transport_mask(conj_g, conj_h, kgens, phi, psi, lmask):
        ng = conj_g.shape[0]
        nh = conj_h.shape[0]
        r = kgens.shape[0]
        out = np.zeros(ng, dtype=np.bool_)
        want = np.empty(r, dtype=np.int64)
        for x in range(ng):
            good = True
            for i in range(r):
                t = conj_g[x, kgens[i]]
                if not lmask[t]:
                    good = False
                    break
                want[i] = psi[t]
            if not good:
                continue
            for y in range(nh):
                hit = True
                for i in range(r):
                    if conj_h[y, phi[kgens[i]]] != want[i]:
                        hit = False
                        break
                if hit:
                    out[x] = True
                    break
        return out

    @njit
    def _nb_lexmin_row(rows):
        best = 0
        m, c = rows.shape
        for i in range(1, m):
            for j in range(c):
                a = rows[i, j]
                b = rows[best, j]
                if a < b:
                    best = i
                    break
                if a > b:
                    break
        return best

    @njit
    def _nb_find(parent, x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    @njit
    def _nb_orbit_labels(acts):
        n = acts.shape[1]
        parent = np.arange(n)
        for a in range(acts.shape[0]):
            for x in range(n):
                rx = _nb_find(parent, x)
                ry = _nb_find(parent, acts[a, x])
                if rx < ry:
                    parent[ry] = rx
                elif ry < rx:
                    parent[rx] = ry
        labels = np.empty(n, dtype=np.int64)
        for x in range(n):
            labels[x] = _nb_find(parent, x)
        return labels

    @njit
    def _nb_extend_homs(mul_h, parent, gen_of, chk_x, chk_g, chk_y, cands):
        m = cands.shape[0]
        size = parent.shape[0]
        table = np.zeros((m, size), dtype=np.int32)
        ok = np.ones(m, dtype=np.bool_)
        for c in range(m):
            for y in range(1, size):
                table[c, y] = mul_h[table[c, parent[y]], cands[c, gen_of[y]]]
            for i in range(chk_x.shape[0]):
                if mul_h[table[c, chk_x[i]], cands[c, chk_g[i]]] != table[c, chk_y[i]]:
                    ok[c] = False
                    break
        return table, ok


IMPLEMENTATIONS = {
    "numpy": {
        "mul_table": _np_mul_table,
        "closure_mask": _np_closure_mask,
        "transport_mask": _np_transport_mask,
        "lexmin_row": _np_lexmin_row,
        "orbit_labels": _np_orbit_labels,
        "extend_homs": _np_extend_homs,
    }
}
if numba is not None:
    IMPLEMENTATIONS["numba"] = {
        "mul_table": _nb_mul_table,
        "closure_mask": _nb_closure_mask,
        "transport_mask": _nb_transport_mask,
        "lexmin_row": _nb_lexmin_row,
        "orbit_labels": _nb_orbit_labels,
        "extend_homs": _nb_extend_homs,
    }

_active = IMPLEMENTATIONS[BACKEND]
mul_table = _active["mul_table"]
closure_mask = _active["closure_mask"]
transport_mask = _active["transport_mask"]
lexmin_row = _active["lexmin_row"]
orbit_labels = _active["orbit_labels"]
extend_homs = _active["extend_homs"]
