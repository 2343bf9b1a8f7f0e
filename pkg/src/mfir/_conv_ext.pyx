# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled core: direct spatial-domain complex convolution.

The hot loop of texture extraction. Computes, for every output pixel, the
correlation of the reflect-padded image with the conjugated kernel taps;
done in C because the tap count (e.g. 31x31 per kernel, 24 kernels per
image) makes interpreted loops impractical.
"""

import numpy as np


def correlate_valid(double[:, ::1] padded, double[:, ::1] kre, double[:, ::1] kim,
                    double[:, ::1] out_re, double[:, ::1] out_im):
    """Valid-mode correlation of a padded real image with a complex kernel.

    ``padded`` must be the input image extended by the kernel radius on every
    side; output dimensions are ``padded.shape - kernel.shape + 1``.  The
    kernel is passed as separate real and imaginary tap planes.
    """
    cdef Py_ssize_t H = out_re.shape[0]
    cdef Py_ssize_t W = out_re.shape[1]
    cdef Py_ssize_t KH = kre.shape[0]
    cdef Py_ssize_t KW = kre.shape[1]
    cdef Py_ssize_t y, x, ky, kx
    cdef double sre, sim, p

    with nogil:
        for y in range(H):
            for x in range(W):
                sre = 0.0
                sim = 0.0
                for ky in range(KH):
                    for kx in range(KW):
                        p = padded[y + ky, x + kx]
                        sre += p * kre[ky, kx]
                        sim += p * kim[ky, kx]
                out_re[y, x] = sre
                out_im[y, x] = sim
