"""Pure-Python count-table steps; same contract as the compiled ``_kernels``.

Tables are lists of 4-element lists of Python ints, so counts never overflow.
"""

CAPACITY = None
NAME = "python"


def new_table(n):
    t = [[0, 0, 0, 0] for _ in range(n)]
    t[0][0] = 1
    return t


def from_rows(rows):
    return [list(r) for r in rows]


def to_rows(table):
    return [list(r) for r in table]


def h_step(t, bit):
    out = [[0, 0, 0, 0] for _ in t]
    for s, c in enumerate(t):
        if s & bit:
            continue
        s1 = s | bit
        d = t[s1]
        o0, o1 = out[s], out[s1]
        for a in range(4):
            o0[a] += c[a] + d[a]
            o1[a] += c[a]
        o1[0] += d[1]
        o1[1] += d[0]
        o1[2] += d[3]
        o1[3] += d[2]
    return out


def f_step(t, bit, adjoint):
    out = []
    for s, (c0, c1, c2, c3) in enumerate(t):
        if not s & bit:
            out.append([5 * c0, 5 * c1, 5 * c2, 5 * c3])
        elif not adjoint:
            out.append([3 * c0 + 4 * c3, 3 * c1 + 4 * c2, 3 * c2 + 4 * c0, 3 * c3 + 4 * c1])
        else:
            out.append([3 * c0 + 4 * c2, 3 * c1 + 4 * c3, 3 * c2 + 4 * c1, 3 * c3 + 4 * c0])
    return out


def permute_step(t, perm):
    out = [None] * len(t)
    for s, d in enumerate(perm):
        out[d] = list(t[s])
    return out


def measure_step(t, bit, outcome):
    return [list(c) if bool(s & bit) == bool(outcome) else [0, 0, 0, 0] for s, c in enumerate(t)]


def max_entry(t):
    return max(max(c) for c in t)
