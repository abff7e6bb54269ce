"""Pure-Python diagram walkers; the reference the compiled kernels must match."""


def flatten(var, lo, hi, value):
    return (tuple(var), tuple(lo), tuple(hi), tuple(value))


def evaluate(flat, root, a):
    var, lo, hi, value = flat
    m = len(a)
    i = root
    v = var[i]
    while v <= m:
        i = hi[i] if a[v - 1] == "1" else lo[i]
        v = var[i]
    return value[i]


def trace(flat, root, a):
    var, lo, hi, _ = flat
    n = len(a)
    i = root
    while True:
        v = var[i] - 1
        if v == n:
            return i
        if v > n:
            return -1
        i = hi[i] if a[v] == "1" else lo[i]


def evaluate_many(flat, root, inputs):
    return [evaluate(flat, root, a) for a in inputs]
