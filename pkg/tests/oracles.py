"""Independent reference computations used by the tests.

Nothing here calls into the package: loops over entries, a triple-loop
matrix product, and power iteration stand in for the vectorised code.
"""

import math


def entrywise_add(x, y):
    return [[x[i][j] + y[i][j] for j in range(len(x))] for i in range(len(x))]


def naive_matmul(x, y):
    n = len(x)
    out = [[0j] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            total = 0j
            for k in range(n):
                total += x[i][k] * y[k][j]
            out[i][j] = total
    return out


def conj_transpose(x):
    n = len(x)
    return [[x[j][i].conjugate() for j in range(n)] for i in range(n)]


def power_iteration_norm(x, iterations=2000):
    """Operator norm as sqrt of the dominant eigenvalue of x* x."""
    g = naive_matmul(conj_transpose(x), x)
    n = len(g)
    v = [complex(1.0 + 0.1 * k, 0.05 * k) for k in range(n)]
    value = 0.0
    for _ in range(iterations):
        w = [sum(g[i][k] * v[k] for k in range(n)) for i in range(n)]
        size = math.sqrt(sum(abs(c) ** 2 for c in w))
        if size == 0.0:
            return 0.0
        v = [c / size for c in w]
        value = size
    return math.sqrt(value)


def hermitian_2x2_eigenvalues(h):
    """Closed form for [[a, b], [conj(b), d]]."""
    a, d = h[0][0].real, h[1][1].real
    b = h[0][1]
    mean, radius = (a + d) / 2, math.sqrt(((a - d) / 2) ** 2 + abs(b) ** 2)
    return mean - radius, mean + radius


def to_lists(block):
    return [[complex(v) for v in row] for row in block]
