# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the two-state outcome chain.

Must stay operation-for-operation identical to ``_chain_py`` so the two
backends are interchangeable bit-for-bit (the extension is compiled with
FP contraction disabled for that reason).
"""


def count_plus_labels(double q_pp, double q_pm, double[::1] uniforms, Py_ssize_t burn_in):
    """Walk the outcome chain over pre-drawn uniforms, counting '+' labels."""
    cdef Py_ssize_t n = uniforms.shape[0]
    if burn_in < 0 or burn_in >= n:
        raise ValueError(f"burn_in must be in [0, {n}), got {burn_in}")
    cdef bint plus = True
    cdef long count = 0
    cdef double thr
    cdef Py_ssize_t i
    for i in range(n):
        thr = q_pp if plus else q_pm
        plus = uniforms[i] < thr
        if i >= burn_in and plus:
            count += 1
    return count


def power_iterate(double q_pp, double q_pm, double p0, long n_steps):
    """n_steps applications of p -> q_pp p + q_pm (1 - p)."""
    if n_steps < 0:
        raise ValueError(f"n_steps must be >= 0, got {n_steps}")
    cdef double p = p0
    cdef long i
    for i in range(n_steps):
        p = q_pp * p + q_pm * (1.0 - p)
    return p
