# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_purepy``.

Opcode numbers must match ``_purepy`` / ``field_expr``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, exp, tanh, fabs

cnp.import_array()

cdef enum:
    OP_CONST = 0
    OP_VAR = 1
    OP_ADD = 2
    OP_SUB = 3
    OP_MUL = 4
    OP_DIV = 5
    OP_NEG = 6
    OP_POW = 7
    OP_SIN = 8
    OP_COS = 9
    OP_EXP = 10
    OP_TANH = 11
    OP_BUMP = 12


def wedge_basis(tuple a, tuple b):
    cdef Py_ssize_t la = len(a), lb = len(b), i = 0, j = 0
    cdef long x, y
    cdef long inversions = 0
    if la == 0:
        return 1, b
    if lb == 0:
        return 1, a
    merged = []
    while i < la and j < lb:
        x = a[i]
        y = b[j]
        if x == y:
            return 0, ()
        if x < y:
            merged.append(x)
            i += 1
        else:
            inversions += la - i
            merged.append(y)
            j += 1
    while i < la:
        merged.append(a[i])
        i += 1
    while j < lb:
        merged.append(b[j])
        j += 1
    return (-1 if inversions & 1 else 1), tuple(merged)


def contract_basis(tuple inner, tuple outer):
    cdef Py_ssize_t n = len(outer), m = len(inner)
    cdef long buf[64]
    cdef Py_ssize_t i, k, pos
    cdef long target
    cdef long parity = 0
    if n > 64:
        raise ValueError("degree too large for compiled kernel")
    for i in range(n):
        buf[i] = outer[i]
    for k in range(m):
        target = inner[k]
        pos = -1
        for i in range(n):
            if buf[i] == target:
                pos = i
                break
        if pos < 0:
            return 0, ()
        parity += pos
        for i in range(pos, n - 1):
            buf[i] = buf[i + 1]
        n -= 1
    return (-1 if parity & 1 else 1), tuple([buf[i] for i in range(n)])


cdef inline double _ipow(double x, int k) nogil:
    cdef double acc = 1.0
    cdef bint inv = k < 0
    if inv:
        k = -k
    while k:
        if k & 1:
            acc *= x
        x *= x
        k >>= 1
    return 1.0 / acc if inv else acc


cdef inline double _bump(double s, int order, double[:, ::1] table) nogil:
    cdef double q, val, poly, qp
    cdef Py_ssize_t d
    if fabs(s) >= 1.0:
        return 0.0
    q = 1.0 - s * s
    val = exp(-1.0 / q)
    if order == 0 or val == 0.0:
        return val
    poly = 0.0
    for d in range(table.shape[1] - 1, -1, -1):
        poly = poly * s + table[order, d]
    qp = _ipow(q, 2 * order)
    return val * poly / qp


def eval_program(opcodes, arg0, arg1, consts, outputs, points, bump_table):
    cdef int[::1] ops = np.ascontiguousarray(opcodes, dtype=np.intc)
    cdef int[::1] a0 = np.ascontiguousarray(arg0, dtype=np.intc)
    cdef int[::1] a1 = np.ascontiguousarray(arg1, dtype=np.intc)
    cdef double[::1] cst = np.ascontiguousarray(consts, dtype=np.float64)
    cdef int[::1] outs = np.ascontiguousarray(outputs, dtype=np.intc)
    cdef double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef double[:, ::1] table = np.ascontiguousarray(bump_table, dtype=np.float64)
    cdef Py_ssize_t nins = ops.shape[0], npts = pts.shape[0], nout = outs.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] result = np.empty((nout, npts))
    cdef double[:, ::1] res = result
    cdef double[::1] reg = np.empty(max(nins, 1))
    cdef Py_ssize_t p, k
    cdef int op, bad = -1
    cdef double den
    with nogil:
        for p in range(npts):
            for k in range(nins):
                op = ops[k]
                if op == OP_CONST:
                    reg[k] = cst[k]
                elif op == OP_VAR:
                    reg[k] = pts[p, a0[k]]
                elif op == OP_ADD:
                    reg[k] = reg[a0[k]] + reg[a1[k]]
                elif op == OP_SUB:
                    reg[k] = reg[a0[k]] - reg[a1[k]]
                elif op == OP_MUL:
                    reg[k] = reg[a0[k]] * reg[a1[k]]
                elif op == OP_DIV:
                    den = reg[a1[k]]
                    if den == 0.0:
                        bad = <int>p
                        break
                    reg[k] = reg[a0[k]] / den
                elif op == OP_NEG:
                    reg[k] = -reg[a0[k]]
                elif op == OP_POW:
                    if a1[k] < 0 and reg[a0[k]] == 0.0:
                        bad = <int>p
                        break
                    reg[k] = _ipow(reg[a0[k]], a1[k])
                elif op == OP_SIN:
                    reg[k] = sin(reg[a0[k]])
                elif op == OP_COS:
                    reg[k] = cos(reg[a0[k]])
                elif op == OP_EXP:
                    reg[k] = exp(reg[a0[k]])
                elif op == OP_TANH:
                    reg[k] = tanh(reg[a0[k]])
                elif op == OP_BUMP:
                    reg[k] = _bump(reg[a0[k]], a1[k], table)
            if bad >= 0:
                break
            for k in range(nout):
                res[k, p] = reg[outs[k]]
    if bad >= 0:
        raise ZeroDivisionError(bad)
    return result
