"""Pure-Python implementations of the hot kernels.

These are the reference versions; ``_speedups.pyx`` mirrors them one to one.
Opcode numbering is shared with :mod:`premetric.field_expr`.
"""

import numpy as np

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


def wedge_basis(a, b):
    """Merge two ascending index tuples.

    Returns ``(sign, merged)``; sign is 0 when the tuples share an index.
    """
    if not a:
        return 1, b
    if not b:
        return 1, a
    inversions = 0
    merged = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        x, y = a[i], b[j]
        if x == y:
            return 0, ()
        if x < y:
            merged.append(x)
            i += 1
        else:
            # y jumps over every remaining element of a
            inversions += la - i
            merged.append(y)
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return (-1 if inversions & 1 else 1), tuple(merged)


def contract_basis(inner, outer):
    """Contract basis element ``inner`` into ``outer``, first factor first.

    Each step removes one index and contributes ``(-1)**position`` where the
    position is counted in the tuple as it stands at that step.
    Returns ``(sign, rest)``; sign is 0 when ``inner`` is not a subset.
    """
    rest = list(outer)
    parity = 0
    for k in inner:
        try:
            pos = rest.index(k)
        except ValueError:
            return 0, ()
        parity += pos
        del rest[pos]
    return (-1 if parity & 1 else 1), tuple(rest)


def _bump(s, order, table):
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    q = 1.0 - si * si
    val = np.exp(-1.0 / q)
    if order:
        # exp underflow must win over the pole of the rational factor
        live = val > 0.0
        val[live] *= np.polynomial.polynomial.polyval(si[live], table[order]) / q[live] ** (2 * order)
    out[inside] = val
    return out


def _first_zero(values, current):
    bad = np.flatnonzero(values[:current] == 0.0)
    return int(bad[0]) if bad.size else current


def eval_program(opcodes, arg0, arg1, consts, outputs, points, bump_table):
    """Evaluate a register program at every row of ``points``.

    ``points`` has shape ``(N, n)``; the result has shape ``(len(outputs), N)``.
    Raises ``ZeroDivisionError(point_index)`` on a zero denominator or a zero
    base raised to a negative power.
    """
    points = np.ascontiguousarray(points, dtype=float)
    npts = points.shape[0]
    regs = []
    first_bad = npts
    for k in range(len(opcodes)):
        op = opcodes[k]
        if op == OP_CONST:
            r = np.full(npts, consts[k])
        elif op == OP_VAR:
            r = points[:, arg0[k]]
        elif op == OP_ADD:
            r = regs[arg0[k]] + regs[arg1[k]]
        elif op == OP_SUB:
            r = regs[arg0[k]] - regs[arg1[k]]
        elif op == OP_MUL:
            r = regs[arg0[k]] * regs[arg1[k]]
        elif op == OP_DIV:
            den = regs[arg1[k]]
            first_bad = _first_zero(den, first_bad)
            with np.errstate(divide="ignore", invalid="ignore"):
                r = regs[arg0[k]] / den
        elif op == OP_NEG:
            r = -regs[arg0[k]]
        elif op == OP_POW:
            base = regs[arg0[k]]
            e = int(arg1[k])
            if e < 0:
                first_bad = _first_zero(base, first_bad)
                with np.errstate(divide="ignore", invalid="ignore"):
                    r = 1.0 / base ** (-e)
            else:
                r = base ** e
        elif op == OP_SIN:
            r = np.sin(regs[arg0[k]])
        elif op == OP_COS:
            r = np.cos(regs[arg0[k]])
        elif op == OP_EXP:
            r = np.exp(regs[arg0[k]])
        elif op == OP_TANH:
            r = np.tanh(regs[arg0[k]])
        elif op == OP_BUMP:
            r = _bump(regs[arg0[k]], int(arg1[k]), bump_table)
        else:
            raise ValueError(f"bad opcode {op}")
        regs.append(r)
    if first_bad < npts:
        raise ZeroDivisionError(first_bad)
    out = np.empty((len(outputs), npts))
    for i, k in enumerate(outputs):
        out[i] = regs[k]
    return out
