# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled committee scan over a ballot-type histogram.

For each committee W and each candidate set L (size ell), buckets the
approvers of L by their utility under W, greedily fills the quota from the
lowest utilities up, and flags W when some group's filled total falls below
ell * quota.  Everything is exact 64-bit integer arithmetic.
"""

from libc.stdlib cimport free, malloc


cdef class Scanner:
    cdef long long* committees
    cdef long long* set_masks
    cdef int* set_ells
    cdef long long* quotas
    cdef unsigned char* pop
    cdef long long full
    cdef int m, k, n_committees, n_sets, size

    def __cinit__(self, m, k, committees, set_masks, set_ells, quotas, pop):
        cdef Py_ssize_t i
        if not 1 <= k < 32:
            raise ValueError("committee size out of supported range")
        self.m = m
        self.k = k
        self.full = (1 << m) - 1
        self.size = 1 << m
        self.n_committees = len(committees)
        self.n_sets = len(set_masks)
        self.committees = <long long*>malloc(self.n_committees * sizeof(long long))
        self.set_masks = <long long*>malloc(self.n_sets * sizeof(long long))
        self.set_ells = <int*>malloc(self.n_sets * sizeof(int))
        self.quotas = <long long*>malloc((k + 1) * sizeof(long long))
        self.pop = <unsigned char*>malloc(self.size * sizeof(unsigned char))
        if (self.committees == NULL or self.set_masks == NULL or
                self.set_ells == NULL or self.quotas == NULL or self.pop == NULL):
            raise MemoryError()
        for i in range(self.n_committees):
            self.committees[i] = committees[i]
        for i in range(self.n_sets):
            self.set_masks[i] = set_masks[i]
            self.set_ells[i] = set_ells[i]
        for i in range(k + 1):
            self.quotas[i] = quotas[i]
        for i in range(self.size):
            self.pop[i] = pop[i]

    def __dealloc__(self):
        free(self.committees)
        free(self.set_masks)
        free(self.set_ells)
        free(self.quotas)
        free(self.pop)

    cdef bint _violates(self, const long long[::1] counts, long long w) nogil:
        cdef long long bucket[32]
        cdef long long comp, s, ballot, c, approvers, q, need, total, b
        cdef int si, ell, u
        for si in range(self.n_sets):
            ell = self.set_ells[si]
            q = self.quotas[ell]
            comp = self.full & ~self.set_masks[si]
            approvers = 0
            for u in range(self.k + 1):
                bucket[u] = 0
            s = comp
            while True:
                ballot = self.set_masks[si] | s
                c = counts[ballot]
                if c != 0:
                    bucket[self.pop[ballot & w]] += c
                    approvers += c
                if s == 0:
                    break
                s = (s - 1) & comp
            if approvers < q:
                continue
            need = q
            total = 0
            for u in range(self.k + 1):
                b = bucket[u]
                if b >= need:
                    total += need * u
                    need = 0
                    break
                total += b * u
                need -= b
            if total < ell * q:
                return True
        return False

    def scan(self, const long long[::1] counts, bint existence_only):
        if counts.shape[0] != self.size:
            raise ValueError("histogram length must be 2^m")
        cdef long long found = 0
        cdef long long first = -1
        cdef long long w
        cdef int wi
        with nogil:
            for wi in range(self.n_committees):
                w = self.committees[wi]
                if not self._violates(counts, w):
                    found += 1
                    if first < 0:
                        first = w
                        if existence_only:
                            break
        return int(found), int(first)


def make_scanner(m, k, committees, set_masks, set_ells, quotas, pop):
    return Scanner(m, k, committees, set_masks, set_ells, quotas, pop)
