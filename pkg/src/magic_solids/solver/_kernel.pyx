# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled search kernel. Same contract as ``_fallback.search``; labels live
in a 64-bit set, so at most 62 vertices."""

cimport cython
from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, calloc, free

from .outcome import SearchOutcome

MAX_VERTICES = 62

cdef extern from *:
    int ctz64 "__builtin_ctzll"(unsigned long long)
    int clz64 "__builtin_clzll"(unsigned long long)


@cython.final
cdef class _Search:
    cdef int V, F, nstab, stop_depth, prune, collect, stopped, assigned
    cdef long long limit, count, canonical, nodes
    cdef int *fsize
    cdef int *fstart
    cdef int *fverts
    cdef int *target
    cdef int *vstart
    cdef int *vfaces
    cdef int *label
    cdef int *fsum
    cdef int *fopen
    cdef int *stab
    cdef int *trail_v
    cdef int *trail_l
    cdef uint64_t unused
    cdef list items

    def __cinit__(self, int V, faces, targets, stabilizer_inverses):
        cdef int i, j, k, f, v
        self.V = V
        self.F = len(faces)
        self.nstab = len(stabilizer_inverses)
        total = sum(len(x) for x in faces)
        self.fsize = <int *> malloc(self.F * sizeof(int))
        self.fstart = <int *> malloc((self.F + 1) * sizeof(int))
        self.fverts = <int *> malloc(max(total, 1) * sizeof(int))
        self.target = <int *> malloc(self.F * sizeof(int))
        self.vstart = <int *> calloc(V + 1, sizeof(int))
        self.vfaces = <int *> malloc(max(total, 1) * sizeof(int))
        self.label = <int *> calloc(V, sizeof(int))
        self.fsum = <int *> calloc(self.F, sizeof(int))
        self.fopen = <int *> malloc(self.F * sizeof(int))
        self.stab = <int *> malloc(max(self.nstab * V, 1) * sizeof(int))
        self.trail_v = <int *> malloc(V * sizeof(int))
        self.trail_l = <int *> malloc(V * sizeof(int))
        if (not self.fsize or not self.fstart or not self.fverts or not self.target or not self.vstart
                or not self.vfaces or not self.label or not self.fsum or not self.fopen or not self.stab
                or not self.trail_v or not self.trail_l):
            raise MemoryError()
        k = 0
        for f in range(self.F):
            self.fstart[f] = k
            self.fsize[f] = len(faces[f])
            self.fopen[f] = self.fsize[f]
            self.target[f] = targets[f]
            for v in faces[f]:
                self.fverts[k] = v
                self.vstart[v + 1] += 1
                k += 1
        self.fstart[self.F] = k
        for v in range(V):
            self.vstart[v + 1] += self.vstart[v]
        fill = [self.vstart[v] for v in range(V)]
        for f in range(self.F):
            for j in range(self.fstart[f], self.fstart[f + 1]):
                v = self.fverts[j]
                self.vfaces[fill[v]] = f
                fill[v] += 1
        for i in range(self.nstab):
            g = stabilizer_inverses[i]
            for j in range(V):
                self.stab[i * V + j] = g[j]
        self.unused = 0
        for i in range(1, V + 1):
            self.unused |= (<uint64_t> 1) << i

    def __dealloc__(self):
        free(self.fsize); free(self.fstart); free(self.fverts); free(self.target)
        free(self.vstart); free(self.vfaces); free(self.label); free(self.fsum)
        free(self.fopen); free(self.stab); free(self.trail_v); free(self.trail_l)

    cdef inline bint free_label(self, int lab) noexcept:
        return 1 <= lab <= self.V and (self.unused >> lab) & 1

    cdef inline bint face_ok(self, int g) noexcept:
        cdef int u = self.fopen[g]
        cdef int need = self.target[g] - self.fsum[g]
        cdef uint64_t b
        cdef int i, acc, top
        if u == 0:
            return need == 0
        if not self.prune:
            return True
        if u == 1:
            return self.free_label(need)
        b = self.unused
        acc = 0
        for i in range(u):
            acc += ctz64(b)
            b &= b - 1
        if acc > need:
            return False
        b = self.unused
        acc = 0
        for i in range(u):
            top = 63 - clz64(b)
            acc += top
            b &= ~((<uint64_t> 1) << top)
        return acc >= need

    cdef inline uint64_t candidate_mask(self, int v) noexcept:
        # labels for v that leave every face of v within reach of its target
        cdef int j, g, u, i, need, small, large, top
        cdef int lo = 1, hi = self.V
        cdef uint64_t b
        for j in range(self.vstart[v], self.vstart[v + 1]):
            g = self.vfaces[j]
            u = self.fopen[g] - 1
            need = self.target[g] - self.fsum[g]
            b = self.unused
            small = 0
            for i in range(u):
                small += ctz64(b)
                b &= b - 1
            b = self.unused
            large = 0
            for i in range(u):
                top = 63 - clz64(b)
                large += top
                b &= ~((<uint64_t> 1) << top)
            if need - large > lo:
                lo = need - large
            if need - small < hi:
                hi = need - small
        if lo > hi:
            return 0
        return (((<uint64_t> 2) << hi) - 1) & ~(((<uint64_t> 1) << lo) - 1)

    cdef inline bint place(self, int v, int lab) noexcept:
        cdef int j, g
        self.label[v] = lab
        self.unused &= ~((<uint64_t> 1) << lab)
        self.trail_v[self.assigned] = v
        self.trail_l[self.assigned] = lab
        self.assigned += 1
        for j in range(self.vstart[v], self.vstart[v + 1]):
            g = self.vfaces[j]
            self.fsum[g] += lab
            self.fopen[g] -= 1
        for j in range(self.vstart[v], self.vstart[v + 1]):
            if not self.face_ok(self.vfaces[j]):
                return False
        return True

    cdef inline void remove(self) noexcept:
        cdef int j, g, v, lab
        self.assigned -= 1
        v = self.trail_v[self.assigned]
        lab = self.trail_l[self.assigned]
        self.label[v] = 0
        self.unused |= (<uint64_t> 1) << lab
        for j in range(self.vstart[v], self.vstart[v + 1]):
            g = self.vfaces[j]
            self.fsum[g] -= lab
            self.fopen[g] += 1

    cdef bint is_canonical(self) noexcept:
        cdef int i, w, a, b
        cdef int *g
        for i in range(self.nstab):
            g = self.stab + i * self.V
            for w in range(self.V):
                a = self.label[w]
                b = self.label[g[w]]
                if a != b:
                    if b < a:
                        return False
                    break
        return True

    cdef int leaf(self) except -1:
        cdef int v
        self.count += 1
        if self.is_canonical():
            self.canonical += 1
            if self.collect:
                self.items.append(tuple([self.label[v] for v in range(self.V)]))
            if self.limit >= 0 and self.canonical >= self.limit:
                self.stopped = 1
        return 0

    cdef int descend(self) except -1:
        cdef int f, best, bu, ba, u, a, v, w, j, lab
        cdef uint64_t b
        if self.assigned == self.stop_depth:
            self.items.append(tuple([(self.trail_v[j], self.trail_l[j]) for j in range(self.assigned)]))
            return 0
        if self.assigned == self.V:
            return self.leaf()
        best = -1
        bu = 1 << 30
        ba = -1
        for f in range(self.F):
            u = self.fopen[f]
            if u:
                a = self.fsize[f] - u
                if u < bu or (u == bu and a > ba):
                    bu = u
                    ba = a
                    best = f
        v = -1
        for j in range(self.fstart[best], self.fstart[best + 1]):
            w = self.fverts[j]
            if self.label[w] == 0 and (v < 0 or w < v):
                v = w
        if bu == 1:
            lab = self.target[best] - self.fsum[best]
            if self.free_label(lab):
                self.nodes += 1
                if self.place(v, lab):
                    self.descend()
                self.remove()
            return 0
        b = self.unused
        if self.prune:
            b &= self.candidate_mask(v)
        while b and not self.stopped:
            lab = ctz64(b)
            b &= b - 1
            self.nodes += 1
            if self.place(v, lab):
                self.descend()
            self.remove()
        return 0

    cdef object run(self, prefix, int prune, int stop_depth, int collect, long long limit):
        cdef int v, lab
        self.prune = prune
        self.stop_depth = stop_depth
        self.collect = collect
        self.limit = limit
        self.items = []
        for v, lab in prefix:
            if not 0 <= v < self.V or self.label[v] or not self.free_label(lab):
                return SearchOutcome(0, 0, self.nodes, [], True)
            if not self.place(v, lab):
                return SearchOutcome(0, 0, self.nodes, [], True)
        self.descend()
        return SearchOutcome(self.count, self.canonical, self.nodes, self.items, not self.stopped)


def search(int num_vertices, faces, targets, prefix=(), prune=True, int stop_depth=-1, collect=False,
           long long limit=-1, stabilizer_inverses=()):
    if num_vertices > MAX_VERTICES:
        raise ValueError(f"compiled kernel supports at most {MAX_VERTICES} vertices")
    cdef _Search s = _Search(num_vertices, [tuple(f) for f in faces], list(targets),
                             [tuple(g) for g in stabilizer_inverses])
    return s.run(list(prefix), 1 if prune else 0, stop_depth, 1 if collect else 0, limit)
