# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice kernels; same contract as ``ratetree._pykernels``."""


def forward_step(const double[::1] src, const double[::1] rates, Py_ssize_t i,
                 double p, double q, bint zbdt, double[::1] dst):
    cdef Py_ssize_t j
    cdef double d, dz
    cdef double p_hat = 0.5 * (1.0 - p)
    for j in range(i + 3):
        dst[j] = 0.0
    for j in range(1, i + 2):
        d = src[j] / (1.0 + rates[j])
        if zbdt and j == 1:
            dst[0] += p * d
            dst[1] += p_hat * d
            dst[2] += p_hat * d
        else:
            dst[j] += 0.5 * d
            dst[j + 1] += 0.5 * d
    if zbdt and i >= 1:
        dz = src[0] / (1.0 + rates[0])
        dst[0] += (1.0 - q) * dz
        dst[1] += q * dz
    return dst.base


def backward_induction(double[:, :, ::1] values, const long long[:, ::1] hits,
                       const double[:, ::1] rates, const double[:, :, ::1] exercise,
                       bint american, double p, double q, bint zbdt,
                       unsigned char[:, :, ::1] exercised):
    cdef Py_ssize_t n_steps = values.shape[0] - 1
    cdef Py_ssize_t n_layers = values.shape[1]
    cdef Py_ssize_t i, j, s, lo
    cdef double p_hat = 0.5 * (1.0 - p)
    cdef double cont, ex
    for i in range(n_steps - 1, -1, -1):
        lo = 0 if (zbdt and i >= 1) else 1
        for s in range(n_layers):
            for j in range(lo, i + 2):
                if j == 0:
                    cont = ((1.0 - q) * values[i + 1, s | hits[i + 1, 0], 0]
                            + q * values[i + 1, s | hits[i + 1, 1], 1])
                elif zbdt and j == 1:
                    cont = (p * values[i + 1, s | hits[i + 1, 0], 0]
                            + p_hat * (values[i + 1, s | hits[i + 1, 1], 1]
                                       + values[i + 1, s | hits[i + 1, 2], 2]))
                else:
                    cont = 0.5 * (values[i + 1, s | hits[i + 1, j], j]
                                  + values[i + 1, s | hits[i + 1, j + 1], j + 1])
                cont = cont / (1.0 + rates[i, j])
                if american:
                    ex = exercise[i, s, j]
                    if ex > cont:
                        exercised[i, s, j] = 1
                        cont = ex
                    else:
                        exercised[i, s, j] = 0
                values[i, s, j] = cont
    return values.base
