# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels. Mirrors gilbertlab._kernels.pure function-for-function;
the pure module carries the reference semantics and docstrings."""

import numpy as np

cimport cython
from libc.math cimport floor, INFINITY

NAME = "compiled"

_DUMMY_U8 = np.zeros(1, dtype=np.uint8)


cdef inline Py_ssize_t _cell_pos(const long long[::1] ucx, const long long[::1] ucy,
                                 Py_ssize_t nc, long long a, long long b) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = nc, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if ucx[mid] < a or (ucx[mid] == a and ucy[mid] < b):
            lo = mid + 1
        else:
            hi = mid
    if lo < nc and ucx[lo] == a and ucy[lo] == b:
        return lo
    return -1


def build_edges(object xy_obj, double radius):
    xy_arr = np.ascontiguousarray(np.asarray(xy_obj, dtype=np.float64).reshape(-1, 2))
    cdef Py_ssize_t n = xy_arr.shape[0]
    empty = np.empty(0, dtype=np.int64)
    if n < 2 or radius <= 0.0:
        return empty, empty
    cdef const double[:, ::1] xy = xy_arr
    cdef double r2 = radius * radius
    cdef double inv = 1.0 / radius
    cx_arr = np.empty(n, dtype=np.int64)
    cy_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] cx = cx_arr
    cdef long long[::1] cy = cy_arr
    cdef Py_ssize_t i
    for i in range(n):
        cx[i] = <long long>floor(xy[i, 0] * inv)
        cy[i] = <long long>floor(xy[i, 1] * inv)
    order_arr = np.lexsort((cy_arr, cx_arr)).astype(np.int64)
    scx_arr = cx_arr[order_arr]
    scy_arr = cy_arr[order_arr]
    change = np.flatnonzero((scx_arr[1:] != scx_arr[:-1]) | (scy_arr[1:] != scy_arr[:-1])) + 1
    starts_arr = np.concatenate((
        np.zeros(1, dtype=np.int64), change.astype(np.int64),
        np.full(1, n, dtype=np.int64)))
    ucx_arr = scx_arr[starts_arr[:-1]]
    ucy_arr = scy_arr[starts_arr[:-1]]
    cdef const long long[::1] order = order_arr
    cdef const long long[::1] starts = starts_arr
    cdef const long long[::1] ucx = ucx_arr
    cdef const long long[::1] ucy = ucy_arr
    cdef Py_ssize_t nc = ucx_arr.shape[0]
    cdef Py_ssize_t j, q, pos
    cdef long long a, b
    cdef int da, db
    cdef double dx, dy
    cdef long long cnt = 0
    with nogil:
        for i in range(n):
            a = cx[i]
            b = cy[i]
            for da in range(-1, 2):
                for db in range(-1, 2):
                    pos = _cell_pos(ucx, ucy, nc, a + da, b + db)
                    if pos < 0:
                        continue
                    for q in range(starts[pos], starts[pos + 1]):
                        j = <Py_ssize_t>order[q]
                        if j <= i:
                            continue
                        dx = xy[i, 0] - xy[j, 0]
                        dy = xy[i, 1] - xy[j, 1]
                        if dx * dx + dy * dy <= r2:
                            cnt += 1
    ei_arr = np.empty(cnt, dtype=np.int64)
    ej_arr = np.empty(cnt, dtype=np.int64)
    cdef long long[::1] ei = ei_arr
    cdef long long[::1] ej = ej_arr
    cdef long long w = 0
    with nogil:
        for i in range(n):
            a = cx[i]
            b = cy[i]
            for da in range(-1, 2):
                for db in range(-1, 2):
                    pos = _cell_pos(ucx, ucy, nc, a + da, b + db)
                    if pos < 0:
                        continue
                    for q in range(starts[pos], starts[pos + 1]):
                        j = <Py_ssize_t>order[q]
                        if j <= i:
                            continue
                        dx = xy[i, 0] - xy[j, 0]
                        dy = xy[i, 1] - xy[j, 1]
                        if dx * dx + dy * dy <= r2:
                            ei[w] = i
                            ej[w] = j
                            w += 1
    final = np.lexsort((ej_arr, ei_arr))
    return np.ascontiguousarray(ei_arr[final]), np.ascontiguousarray(ej_arr[final])


def bfs_hits(indptr_o, indices_o, adj_edge_o, allowed_o, src_o, tgt_o, edge_open=None):
    indptr_a = np.ascontiguousarray(indptr_o, dtype=np.int64)
    indices_a = np.ascontiguousarray(indices_o, dtype=np.int64)
    adj_edge_a = np.ascontiguousarray(adj_edge_o, dtype=np.int64)
    allowed_a = np.ascontiguousarray(allowed_o, dtype=np.uint8)
    src_a = np.ascontiguousarray(src_o, dtype=np.uint8)
    tgt_a = np.ascontiguousarray(tgt_o, dtype=np.uint8)
    cdef int use_eo = edge_open is not None
    eo_a = np.ascontiguousarray(edge_open, dtype=np.uint8) if use_eo else _DUMMY_U8
    cdef const long long[::1] indptr = indptr_a
    cdef const long long[::1] indices = indices_a
    cdef const long long[::1] adj_edge = adj_edge_a
    cdef const unsigned char[::1] allowed = allowed_a
    cdef const unsigned char[::1] src = src_a
    cdef const unsigned char[::1] tgt = tgt_a
    cdef const unsigned char[::1] eo = eo_a
    cdef Py_ssize_t n = indptr_a.shape[0] - 1
    visited_a = np.zeros(n, dtype=np.uint8)
    queue_a = np.empty(n, dtype=np.int64)
    cdef unsigned char[::1] visited = visited_a
    cdef long long[::1] queue = queue_a
    cdef Py_ssize_t head = 0, size = 0, v, k, u
    cdef int hit = 0
    with nogil:
        for v in range(n):
            if allowed[v] and src[v]:
                if tgt[v]:
                    hit = 1
                    break
                visited[v] = 1
                queue[size] = v
                size += 1
        if not hit:
            while head < size:
                v = <Py_ssize_t>queue[head]
                head += 1
                for k in range(indptr[v], indptr[v + 1]):
                    u = <Py_ssize_t>indices[k]
                    if visited[u] or not allowed[u]:
                        continue
                    if use_eo and not eo[adj_edge[k]]:
                        continue
                    if tgt[u]:
                        hit = 1
                        break
                    visited[u] = 1
                    queue[size] = u
                    size += 1
                if hit:
                    break
    return bool(hit)


def label_active(indptr_o, indices_o, adj_edge_o, v_active_o, e_active=None):
    indptr_a = np.ascontiguousarray(indptr_o, dtype=np.int64)
    indices_a = np.ascontiguousarray(indices_o, dtype=np.int64)
    adj_edge_a = np.ascontiguousarray(adj_edge_o, dtype=np.int64)
    v_active_a = np.ascontiguousarray(v_active_o, dtype=np.uint8)
    cdef int use_ea = e_active is not None
    ea_a = np.ascontiguousarray(e_active, dtype=np.uint8) if use_ea else _DUMMY_U8
    cdef const long long[::1] indptr = indptr_a
    cdef const long long[::1] indices = indices_a
    cdef const long long[::1] adj_edge = adj_edge_a
    cdef const unsigned char[::1] v_active = v_active_a
    cdef const unsigned char[::1] ea = ea_a
    cdef Py_ssize_t n = indptr_a.shape[0] - 1
    labels_a = np.full(n, -1, dtype=np.int64)
    queue_a = np.empty(n, dtype=np.int64)
    cdef long long[::1] labels = labels_a
    cdef long long[::1] queue = queue_a
    cdef Py_ssize_t start, v, k, u, head, size
    cdef long long next_label = 0
    with nogil:
        for start in range(n):
            if not v_active[start] or labels[start] >= 0:
                continue
            labels[start] = next_label
            queue[0] = start
            head = 0
            size = 1
            while head < size:
                v = <Py_ssize_t>queue[head]
                head += 1
                for k in range(indptr[v], indptr[v + 1]):
                    u = <Py_ssize_t>indices[k]
                    if labels[u] >= 0 or not v_active[u]:
                        continue
                    if use_ea and not ea[adj_edge[k]]:
                        continue
                    labels[u] = next_label
                    queue[size] = u
                    size += 1
            next_label += 1
    return labels_a


def eligible_mask(indptr_o, indices_o, xy_o, double r2):
    indptr_a = np.ascontiguousarray(indptr_o, dtype=np.int64)
    indices_a = np.ascontiguousarray(indices_o, dtype=np.int64)
    xy_a = np.ascontiguousarray(np.asarray(xy_o, dtype=np.float64).reshape(-1, 2))
    cdef const long long[::1] indptr = indptr_a
    cdef const long long[::1] indices = indices_a
    cdef const double[:, ::1] xy = xy_a
    cdef Py_ssize_t n = indptr_a.shape[0] - 1
    mask_a = np.zeros(n, dtype=np.uint8)
    nb4_a = np.full((n, 4), -1, dtype=np.int64)
    partner_a = np.zeros(n, dtype=np.int8)
    cdef unsigned char[::1] mask = mask_a
    cdef long long[:, ::1] nb4 = nb4_a
    cdef signed char[::1] partner = partner_a
    cdef Py_ssize_t v, lo, a, b, idx
    cdef long long nb[4]
    cdef int bits[6]
    cdef int total, part
    cdef double dx, dy
    with nogil:
        for v in range(n):
            lo = <Py_ssize_t>indptr[v]
            if indptr[v + 1] - indptr[v] != 4:
                continue
            for a in range(4):
                nb[a] = indices[lo + a]
            idx = 0
            total = 0
            for a in range(4):
                for b in range(a + 1, 4):
                    dx = xy[nb[a], 0] - xy[nb[b], 0]
                    dy = xy[nb[a], 1] - xy[nb[b], 1]
                    bits[idx] = 1 if dx * dx + dy * dy <= r2 else 0
                    total += bits[idx]
                    idx += 1
            if total != 2:
                continue
            if bits[0] and bits[5]:
                part = 1
            elif bits[1] and bits[4]:
                part = 2
            elif bits[2] and bits[3]:
                part = 3
            else:
                continue
            mask[v] = 1
            for a in range(4):
                nb4[v, a] = nb[a]
            partner[v] = <signed char>part
    return mask_a, nb4_a, partner_a


cdef inline long long _find(long long[::1] parent, long long a) noexcept nogil:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


cdef inline void _union(long long[::1] parent, long long a, long long b) noexcept nogil:
    cdef long long ra = _find(parent, a)
    cdef long long rb = _find(parent, b)
    if ra != rb:
        if ra < rb:
            parent[rb] = ra
        else:
            parent[ra] = rb


def site_threshold(indptr_o, indices_o, t_o, order_o, src_o, tgt_o):
    indptr_a = np.ascontiguousarray(indptr_o, dtype=np.int64)
    indices_a = np.ascontiguousarray(indices_o, dtype=np.int64)
    t_a = np.ascontiguousarray(t_o, dtype=np.float64)
    order_a = np.ascontiguousarray(order_o, dtype=np.int64)
    src_a = np.ascontiguousarray(src_o, dtype=np.uint8)
    tgt_a = np.ascontiguousarray(tgt_o, dtype=np.uint8)
    cdef const long long[::1] indptr = indptr_a
    cdef const long long[::1] indices = indices_a
    cdef const double[::1] t = t_a
    cdef const long long[::1] order = order_a
    cdef const unsigned char[::1] src = src_a
    cdef const unsigned char[::1] tgt = tgt_a
    cdef Py_ssize_t n = indptr_a.shape[0] - 1
    parent_a = np.arange(n + 2, dtype=np.int64)
    active_a = np.zeros(n, dtype=np.uint8)
    cdef long long[::1] parent = parent_a
    cdef unsigned char[::1] active = active_a
    cdef long long hub_s = n, hub_t = n + 1
    cdef Py_ssize_t q, k
    cdef long long v, u
    cdef double result = INFINITY
    cdef int done = 0
    with nogil:
        for q in range(order.shape[0]):
            v = order[q]
            active[v] = 1
            for k in range(indptr[v], indptr[v + 1]):
                u = indices[k]
                if active[u]:
                    _union(parent, v, u)
            if src[v]:
                _union(parent, v, hub_s)
            if tgt[v]:
                _union(parent, v, hub_t)
            if _find(parent, hub_s) == _find(parent, hub_t):
                result = t[v]
                done = 1
                break
    return float(result) if done else float("inf")


def bond_threshold(nv, ei_o, ej_o, x_o, order_o, src_o, tgt_o):
    ei_a = np.ascontiguousarray(ei_o, dtype=np.int64)
    ej_a = np.ascontiguousarray(ej_o, dtype=np.int64)
    x_a = np.ascontiguousarray(x_o, dtype=np.float64)
    order_a = np.ascontiguousarray(order_o, dtype=np.int64)
    src_a = np.ascontiguousarray(src_o, dtype=np.uint8)
    tgt_a = np.ascontiguousarray(tgt_o, dtype=np.uint8)
    cdef const long long[::1] ei = ei_a
    cdef const long long[::1] ej = ej_a
    cdef const double[::1] x = x_a
    cdef const long long[::1] order = order_a
    cdef const unsigned char[::1] src = src_a
    cdef const unsigned char[::1] tgt = tgt_a
    cdef Py_ssize_t n = <Py_ssize_t>nv
    parent_a = np.arange(n + 2, dtype=np.int64)
    cdef long long[::1] parent = parent_a
    cdef long long hub_s = n, hub_t = n + 1
    cdef Py_ssize_t v, q
    cdef long long e
    cdef double result = INFINITY
    cdef int done = 0, neg = 0
    with nogil:
        for v in range(n):
            if src[v]:
                _union(parent, v, hub_s)
            if tgt[v]:
                _union(parent, v, hub_t)
        if _find(parent, hub_s) == _find(parent, hub_t):
            neg = 1
        else:
            for q in range(order.shape[0]):
                e = order[q]
                _union(parent, ei[e], ej[e])
                if _find(parent, hub_s) == _find(parent, hub_t):
                    result = x[e]
                    done = 1
                    break
    if neg:
        return float("-inf")
    return float(result) if done else float("inf")


cdef inline void _heap_push(long long[::1] hp, Py_ssize_t* hn, long long val) noexcept nogil:
    cdef Py_ssize_t i = hn[0]
    cdef Py_ssize_t parent
    hp[i] = val
    hn[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if hp[parent] <= hp[i]:
            break
        hp[parent], hp[i] = hp[i], hp[parent]
        i = parent


cdef inline long long _heap_pop(long long[::1] hp, Py_ssize_t* hn) noexcept nogil:
    cdef long long top = hp[0]
    cdef Py_ssize_t i = 0, child
    hn[0] -= 1
    hp[0] = hp[hn[0]]
    while True:
        child = 2 * i + 1
        if child >= hn[0]:
            break
        if child + 1 < hn[0] and hp[child + 1] < hp[child]:
            child += 1
        if hp[i] <= hp[child]:
            break
        hp[i], hp[child] = hp[child], hp[i]
        i = child
    return top


def run_coupling_core(indptr_o, indices_o, adj_edge_o, x_open_o, z_open_o):
    indptr_a = np.ascontiguousarray(indptr_o, dtype=np.int64)
    indices_a = np.ascontiguousarray(indices_o, dtype=np.int64)
    adj_edge_a = np.ascontiguousarray(adj_edge_o, dtype=np.int64)
    x_open_a = np.ascontiguousarray(x_open_o, dtype=np.uint8)
    z_open_a = np.ascontiguousarray(z_open_o, dtype=np.uint8)
    cdef const long long[::1] indptr = indptr_a
    cdef const long long[::1] indices = indices_a
    cdef const long long[::1] adj_edge = adj_edge_a
    cdef const unsigned char[::1] x_open = x_open_a
    cdef const unsigned char[::1] z_open = z_open_a
    cdef Py_ssize_t n = indptr_a.shape[0] - 1
    cdef Py_ssize_t m = x_open_a.shape[0]
    y_a = np.zeros(n, dtype=np.uint8)
    assigned_a = np.zeros(n, dtype=np.uint8)
    prov_kind_a = np.zeros(n, dtype=np.uint8)
    prov_idx_a = np.full(n, -1, dtype=np.int64)
    examined_a = np.zeros(m, dtype=np.uint8)
    step_a = np.full(n, -1, dtype=np.int64)
    heap_a = np.empty(2 * indices_a.shape[0] + n + 4, dtype=np.int64)
    cdef unsigned char[::1] y = y_a
    cdef unsigned char[::1] assigned = assigned_a
    cdef unsigned char[::1] prov_kind = prov_kind_a
    cdef long long[::1] prov_idx = prov_idx_a
    cdef unsigned char[::1] examined = examined_a
    cdef long long[::1] step = step_a
    cdef long long[::1] hp = heap_a
    cdef Py_ssize_t hn = 0
    cdef Py_ssize_t scan = 0, step_i, k, slot
    cdef long long v, u, e
    with nogil:
        for step_i in range(n):
            while hn > 0 and assigned[hp[0]]:
                _heap_pop(hp, &hn)
            if hn > 0:
                v = _heap_pop(hp, &hn)
                slot = -1
                for k in range(indptr[v], indptr[v + 1]):
                    u = indices[k]
                    if assigned[u] and y[u]:
                        slot = k
                        break
                e = adj_edge[slot]
                examined[e] = 1
                y[v] = x_open[e]
                prov_kind[v] = 1
                prov_idx[v] = e
            else:
                while assigned[scan]:
                    scan += 1
                v = scan
                y[v] = z_open[v]
                prov_kind[v] = 0
                prov_idx[v] = v
            assigned[v] = 1
            step[v] = step_i
            if y[v]:
                for k in range(indptr[v], indptr[v + 1]):
                    u = indices[k]
                    if not assigned[u]:
                        _heap_push(hp, &hn, u)
    return y_a, prov_kind_a, prov_idx_a, examined_a, step_a
