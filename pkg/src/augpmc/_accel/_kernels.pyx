# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled implementations of the hot kernels.

Same contracts as ``_kernels_py``; see that module for documentation.
Reductions are sequential in the same order as the numpy fallback, and all
randomness enters through pre-drawn uniforms, so either backend replays a
given random stream to the same resampled ancestry.
"""

import numpy as np

cimport numpy as cnp

from libc.math cimport exp, log, INFINITY

from ..errors import AllWeightsZeroError

cnp.import_array()

BACKEND = "cython"

# Rescale cluster-score products by 2**512 whenever they drop below
# 2**-512, keeping them in normal double range for any locus count.
cdef double SCALE_LOG = 512.0 * 0.6931471805599453
cdef double SCALE_DOWN = 2.0 ** -512
cdef double SCALE_UP = 2.0 ** 512


def normalize_log_weights(cnp.ndarray[cnp.float64_t, ndim=1] log_weights):
    cdef Py_ssize_t n = log_weights.shape[0]
    cdef Py_ssize_t i
    cdef double m = -INFINITY
    cdef double v, total
    for i in range(n):
        v = log_weights[i]
        if v != v:
            raise ValueError("log-weights contain NaN")
        if v > m:
            m = v
    if m == -INFINITY:
        raise AllWeightsZeroError("all particle weights are zero")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] probs = np.empty(n, dtype=np.float64)
    total = 0.0
    for i in range(n):
        v = exp(log_weights[i] - m)
        probs[i] = v
        total += v
    for i in range(n):
        probs[i] /= total
    return probs, m + log(total / n)


def effective_sample_size(cnp.ndarray[cnp.float64_t, ndim=1] probs):
    cdef Py_ssize_t i
    cdef double s = 0.0
    for i in range(probs.shape[0]):
        s += probs[i] * probs[i]
    return 1.0 / s


cdef Py_ssize_t _search_right(double* cs, Py_ssize_t n, double u) nogil:
    # smallest i with u < cs[i]; mirrors np.searchsorted(cs, u, 'right')
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if cs[mid] <= u:
            lo = mid + 1
        else:
            hi = mid
    if lo >= n:
        lo = n - 1
    return lo


def multinomial_resample(cnp.ndarray[cnp.float64_t, ndim=1] probs,
                         cnp.ndarray[cnp.float64_t, ndim=1] uniforms):
    cdef Py_ssize_t n = probs.shape[0]
    cdef Py_ssize_t k = uniforms.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cs = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(k, dtype=np.int64)
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(n):
        acc += probs[i]
        cs[i] = acc
    for i in range(k):
        out[i] = _search_right(&cs[0], n, uniforms[i])
    return out


def systematic_resample(cnp.ndarray[cnp.float64_t, ndim=1] probs, Py_ssize_t n,
                        double u0):
    cdef Py_ssize_t np_ = probs.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t i, j = 0
    cdef double acc = 0.0
    cdef double cs_j
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cs = np.empty(np_, dtype=np.float64)
    for i in range(np_):
        acc += probs[i]
        cs[i] = acc
    cs_j = cs[0]
    for i in range(n):
        acc = (i + u0) / n
        while cs_j <= acc and j < np_ - 1:
            j += 1
            cs_j = cs[j]
        out[i] = j
    return out


def categorical(cnp.ndarray[cnp.float64_t, ndim=1] probs, double u):
    cdef Py_ssize_t n = probs.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cs = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(n):
        acc += probs[i]
        cs[i] = acc
    return int(_search_right(&cs[0], n, u))


def dpmm_step(cnp.ndarray[cnp.float64_t, ndim=3] counts,
              cnp.ndarray[cnp.float64_t, ndim=2] csize,
              cnp.ndarray[cnp.int32_t, ndim=1] m,
              cnp.ndarray[cnp.int32_t, ndim=1] geno,
              cnp.ndarray[cnp.int64_t, ndim=1] locus_offsets,
              cnp.ndarray[cnp.int64_t, ndim=1] k_sizes,
              double lam, double alpha, Py_ssize_t i, int forced,
              cnp.ndarray[cnp.float64_t, ndim=1] uniforms,
              cnp.ndarray[cnp.int32_t, ndim=1] labels_out,
              cnp.ndarray[cnp.float64_t, ndim=1] logw_out):
    cdef Py_ssize_t n_particles = counts.shape[0]
    cdef Py_ssize_t cmax = counts.shape[1]
    cdef Py_ssize_t n_loci = k_sizes.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] log_q = np.empty(cmax + 1, dtype=np.float64)
    cdef Py_ssize_t p, j, l, off, g1, g2, label, mp
    cdef int scale
    cdef double prod, nj2, ratio, top, tot, acc, target
    for p in range(n_particles):
        mp = m[p]
        for j in range(mp + 1):
            if j < mp:
                prod = csize[p, j] / (i + alpha)
            else:
                prod = alpha / (i + alpha)
            nj2 = 2.0 * csize[p, j] if j < mp else 0.0
            scale = 0
            for l in range(n_loci):
                off = locus_offsets[l]
                ratio = lam / k_sizes[l]
                g1 = geno[2 * l]
                g2 = geno[2 * l + 1]
                prod *= (counts[p, j, off + g1] + ratio) / (nj2 + lam)
                if g1 == g2:
                    prod *= (counts[p, j, off + g2] + 1.0 + ratio) / (nj2 + 1.0 + lam)
                else:
                    prod *= (counts[p, j, off + g2] + ratio) / (nj2 + 1.0 + lam)
                if prod < SCALE_DOWN:
                    prod *= SCALE_UP
                    scale += 1
            log_q[j] = log(prod) - scale * SCALE_LOG
        top = -INFINITY
        for j in range(mp + 1):
            if log_q[j] > top:
                top = log_q[j]
        tot = 0.0
        for j in range(mp + 1):
            tot += exp(log_q[j] - top)
        if forced >= 0:
            label = forced
            logw_out[p] = log_q[forced]
        else:
            target = uniforms[p] * tot
            acc = 0.0
            label = mp
            for j in range(mp + 1):
                acc += exp(log_q[j] - top)
                if target < acc:
                    label = j
                    break
            logw_out[p] = top + log(tot)
        labels_out[p] = <cnp.int32_t> label
        if label == mp:
            m[p] = <cnp.int32_t> (mp + 1)
        csize[p, label] += 1.0
        for l in range(n_loci):
            off = locus_offsets[l]
            counts[p, label, off + geno[2 * l]] += 1.0
            counts[p, label, off + geno[2 * l + 1]] += 1.0
