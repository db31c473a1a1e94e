"""Compiled inner loops.

Everything here works on flat numpy arrays so it can run under
``numba.njit``; with numba disabled the same code runs as plain Python.
Bin lists are passed as parallel arrays:
``rlo, rhi`` (float64 range), ``cnt, vsum, vmin, vmax`` (int64).
"""
import numpy as np

from ._accel import jit

DEPTH_EXCEEDED = -1


@jit
def binning_kernel(counts, distinct, max_depth):
    """Recursive rho-binning of a 256-bucket histogram with an explicit stack.

    Returns ``(rlo, rhi, cnt, vsum, vmin, vmax, nbins, deepest, rho_stops)``.
    ``deepest`` is ``DEPTH_EXCEEDED`` when the stack grew past ``max_depth``.
    """
    levels = counts.shape[0]
    rlo = np.empty(levels, np.float64)
    rhi = np.empty(levels, np.float64)
    cnt = np.zeros(levels, np.int64)
    vsum = np.zeros(levels, np.int64)
    vmin = np.zeros(levels, np.int64)
    vmax = np.zeros(levels, np.int64)
    nout = 0
    deepest = 0
    rho_stops = 0

    st_lo = np.empty(2 * levels + 2, np.int64)
    st_hi = np.empty(2 * levels + 2, np.int64)
    st_depth = np.empty(2 * levels + 2, np.int64)
    top = 0
    lo0 = -1
    hi0 = -1
    for v in range(levels):
        if counts[v] > 0:
            if lo0 < 0:
                lo0 = v
            hi0 = v
    if lo0 < 0:
        return rlo, rhi, cnt, vsum, vmin, vmax, 0, 0, 0
    st_lo[0] = lo0
    st_hi[0] = hi0
    st_depth[0] = 1
    top = 1

    b_cnt = np.zeros(levels, np.int64)
    b_sum = np.zeros(levels, np.int64)
    b_min = np.zeros(levels, np.int64)
    b_max = np.zeros(levels, np.int64)

    while top > 0:
        top -= 1
        lo = st_lo[top]
        hi = st_hi[top]
        depth = st_depth[top]
        if depth > max_depth:
            return rlo, rhi, cnt, vsum, vmin, vmax, nout, DEPTH_EXCEEDED, rho_stops
        if depth > deepest:
            deepest = depth

        m = 0
        n = 0
        s = 0
        for v in range(lo, hi + 1):
            c = counts[v]
            if c > 0:
                m += 1
                n += c
                s += c * v
        if m == 1:
            rlo[nout] = lo
            rhi[nout] = lo
            cnt[nout] = n
            vsum[nout] = s
            vmin[nout] = lo
            vmax[nout] = lo
            nout += 1
            continue

        num = hi - lo
        den = (m if distinct else n) - 1
        if num < den:
            # rho < 1: finalize the working set as one bin
            rho_stops += 1
            rlo[nout] = lo
            rhi[nout] = hi + 1
            cnt[nout] = n
            vsum[nout] = s
            vmin[nout] = lo
            vmax[nout] = hi
            nout += 1
            continue

        # floor((hi - lo) / rho) + 1 with rho = num / den
        nb = den + 1
        for i in range(nb):
            b_cnt[i] = 0
            b_sum[i] = 0
        for v in range(lo, hi + 1):
            c = counts[v]
            if c > 0:
                i = ((v - lo) * den) // num
                if b_cnt[i] == 0:
                    b_min[i] = v
                b_max[i] = v
                b_cnt[i] += c
                b_sum[i] += c * v

        has_empty = False
        for i in range(nb):
            if b_cnt[i] == 0:
                has_empty = True
                break

        if not has_empty:
            for i in range(nb):
                rlo[nout] = (lo * den + i * num) / den
                rhi[nout] = (lo * den + (i + 1) * num) / den
                cnt[nout] = b_cnt[i]
                vsum[nout] = b_sum[i]
                vmin[nout] = b_min[i]
                vmax[nout] = b_max[i]
                nout += 1
            continue

        # push runs of non-empty bins, last run first so the first pops next
        i = nb - 1
        while i >= 0:
            if b_cnt[i] == 0:
                i -= 1
                continue
            j = i
            while j > 0 and b_cnt[j - 1] > 0:
                j -= 1
            st_lo[top] = b_min[j]
            st_hi[top] = b_max[i]
            st_depth[top] = depth + 1
            top += 1
            i = j - 1

    return rlo, rhi, cnt, vsum, vmin, vmax, nout, deepest, rho_stops


@jit
def _nearest_neighbor(cnt, vsum, k, i):
    """Index of the neighbor of ``i`` with the closest centroid and its distance.

    Ties go to the larger count, then to the left (lower centroid).
    """
    ci = vsum[i] / cnt[i]
    left = -1
    right = -1
    dl = np.inf
    dr = np.inf
    if i > 0:
        left = i - 1
        dl = abs(ci - vsum[left] / cnt[left])
    if i < k - 1:
        right = i + 1
        dr = abs(vsum[right] / cnt[right] - ci)
    if left < 0:
        return right, dr
    if right < 0:
        return left, dl
    if dl < dr:
        return left, dl
    if dr < dl:
        return right, dr
    if cnt[right] > cnt[left]:
        return right, dr
    return left, dl


@jit
def _absorb(rlo, rhi, cnt, vsum, vmin, vmax, k, src, dst):
    """Fold bin ``src`` into adjacent bin ``dst`` and close the gap; returns new length."""
    cnt[dst] += cnt[src]
    vsum[dst] += vsum[src]
    if src < dst:
        rlo[dst] = rlo[src]
        vmin[dst] = vmin[src]
    else:
        rhi[dst] = rhi[src]
        vmax[dst] = vmax[src]
    for j in range(src, k - 1):
        rlo[j] = rlo[j + 1]
        rhi[j] = rhi[j + 1]
        cnt[j] = cnt[j + 1]
        vsum[j] = vsum[j + 1]
        vmin[j] = vmin[j + 1]
        vmax[j] = vmax[j + 1]
    return k - 1


@jit
def merge_kernel(rlo, rhi, cnt, vsum, vmin, vmax, count_limit, distance_limit):
    """Threshold merge to a fixpoint; arrays are modified in place, returns new length.

    A bin qualifies when ``count < count_limit`` and its nearest neighbor
    centroid is closer than ``distance_limit``. The qualifying bin with the
    smallest count (leftmost on ties) is folded into that neighbor.
    """
    k = cnt.shape[0]
    while k > 1:
        best = -1
        best_dst = -1
        for i in range(k):
            if cnt[i] < count_limit:
                dst, d = _nearest_neighbor(cnt, vsum, k, i)
                if d < distance_limit and (best < 0 or cnt[i] < cnt[best]):
                    best = i
                    best_dst = dst
        if best < 0:
            break
        k = _absorb(rlo, rhi, cnt, vsum, vmin, vmax, k, best, best_dst)
    return k


@jit
def cap_kernel(rlo, rhi, cnt, vsum, vmin, vmax, k, max_colors):
    """Fold the smallest bin into its nearest neighbor until at most ``max_colors`` remain."""
    while k > max_colors and k > 1:
        best = 0
        for i in range(1, k):
            if cnt[i] < cnt[best]:
                best = i
        dst, _ = _nearest_neighbor(cnt, vsum, k, best)
        k = _absorb(rlo, rhi, cnt, vsum, vmin, vmax, k, best, dst)
    return k


@jit
def _find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@jit
def hump_labels(cnt, vmin, vmax, valley_ratio):
    """Label bins by the density hump they belong to.

    Bins whose member values touch (no unoccupied value in between) form
    chains. Within a chain, bins are visited from densest to sparsest; when
    a bin bridges two humps they are fused if its density is at least
    ``valley_ratio`` times the lower of the two peaks, otherwise the bin is a
    valley and the humps stay apart. Returns consecutive ascending labels.
    """
    k = cnt.shape[0]
    labels = np.zeros(k, np.int64)
    if k == 0:
        return labels
    dens = np.empty(k, np.float64)
    for i in range(k):
        dens[i] = cnt[i] / (vmax[i] - vmin[i] + 1)
    order = np.argsort(-dens, kind="mergesort")
    parent = np.arange(k)
    peak = np.zeros(k, np.float64)
    active = np.zeros(k, np.bool_)

    for t in range(k):
        i = order[t]
        active[i] = True
        peak[i] = dens[i]
        left = -1
        right = -1
        if i > 0 and active[i - 1] and vmin[i] - vmax[i - 1] <= 1:
            left = _find(parent, i - 1)
        if i < k - 1 and active[i + 1] and vmin[i + 1] - vmax[i] <= 1:
            right = _find(parent, i + 1)
        if left >= 0 and right >= 0:
            lower = min(peak[left], peak[right])
            if dens[i] >= valley_ratio * lower:
                parent[i] = left
                parent[right] = left
                peak[left] = max(peak[left], peak[right])
            elif dens[i - 1] >= dens[i + 1]:
                parent[i] = left
            else:
                parent[i] = right
        elif left >= 0:
            parent[i] = left
        elif right >= 0:
            parent[i] = right

    label = 0
    prev = _find(parent, 0)
    for i in range(k):
        r = _find(parent, i)
        if r != prev:
            label += 1
            prev = r
        labels[i] = label
    return labels


@jit
def lloyd_kernel(values, weights, centroids, max_iters, tol):
    """Weighted 1-D Lloyd iteration.

    Returns ``(centroids, mass, objective, n_iter)``; ``objective[t]`` is the
    weighted within-cluster sum of squares after iteration ``t``.
    """
    k = centroids.shape[0]
    nv = values.shape[0]
    cent = centroids.copy()
    assign = np.zeros(nv, np.int64)
    mass = np.zeros(k, np.float64)
    objective = np.empty(max_iters, np.float64)
    n_iter = 0
    for it in range(max_iters):
        for j in range(nv):
            best = 0
            bd = abs(values[j] - cent[0])
            for c in range(1, k):
                d = abs(values[j] - cent[c])
                if d < bd or (d == bd and cent[c] < cent[best]):
                    best = c
                    bd = d
            assign[j] = best
        acc = np.zeros(k, np.float64)
        mass[:] = 0.0
        for j in range(nv):
            mass[assign[j]] += weights[j]
            acc[assign[j]] += weights[j] * values[j]
        moved = 0.0
        for c in range(k):
            if mass[c] > 0:
                nc = acc[c] / mass[c]
                moved = max(moved, abs(nc - cent[c]))
                cent[c] = nc
        reseeded = False
        for c in range(k):
            if mass[c] > 0:
                continue
            # move the empty centroid onto the worst-fit value of the heaviest
            # cluster that can spare a member
            members = np.zeros(k, np.int64)
            for j in range(nv):
                members[assign[j]] += 1
            big = -1
            for q in range(k):
                if members[q] > 1 and (big < 0 or mass[q] > mass[big]):
                    big = q
            if big < 0:
                continue
            far = -1
            fd = -1.0
            for j in range(nv):
                if assign[j] == big:
                    d = abs(values[j] - cent[big])
                    if d > fd:
                        far = j
                        fd = d
            cent[c] = values[far]
            assign[far] = c
            mass[big] -= weights[far]
            mass[c] += weights[far]
            reseeded = True
        sse = 0.0
        for j in range(nv):
            d = values[j] - cent[assign[j]]
            sse += weights[j] * d * d
        objective[it] = sse
        n_iter = it + 1
        if moved < tol and not reseeded:
            break
    # final assignment masses for the converged centroids
    mass[:] = 0.0
    for j in range(nv):
        mass[assign[j]] += weights[j]
    return cent, mass, objective[:n_iter], n_iter
