"""Shared oracles for the test suite.

The Hermite oracle here is deliberately naive: it expands the generating
function exp(-t.R.t/2 + t.R.y) as a truncated multivariate Taylor series
and reads off one coefficient. Slow, but independent of the recurrence
implementation under test.
"""

import math

import numpy as np
from scipy.special import eval_hermite


def _poly_mul(a, b, max_deg):
    """Multiply two polynomials stored as {exponent tuple: coeff} dicts,
    discarding terms whose total degree exceeds max_deg."""
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            ec = tuple(x + y for x, y in zip(ea, eb))
            if sum(ec) > max_deg:
                continue
            out[ec] = out.get(ec, 0.0) + ca * cb
    return out


def hermite_taylor(r_mat, y, v):
    """Multidimensional Hermite polynomial via the generating function.

    H_v is v! times the coefficient of t^v in
    exp(-t.R.t/2 + t.R.y), expanded as a Taylor series truncated at
    total degree |v|.
    """
    r_mat = np.asarray(r_mat)
    y = np.asarray(y)
    dim = r_mat.shape[0]
    total = int(sum(v))

    # the exponent u(t) as a degree <= 2 polynomial in t
    w = r_mat @ y
    u = {}
    zero = (0,) * dim
    for i in range(dim):
        e = list(zero)
        e[i] = 1
        u[tuple(e)] = u.get(tuple(e), 0.0) + w[i]
    for i in range(dim):
        for j in range(dim):
            e = list(zero)
            e[i] += 1
            e[j] += 1
            u[tuple(e)] = u.get(tuple(e), 0.0) - 0.5 * r_mat[i, j]

    # exp(u) = sum_k u^k / k!
    g = {zero: 1.0}
    term = {zero: 1.0}
    for k in range(1, total + 1):
        term = _poly_mul(term, u, total)
        for e, c in term.items():
            g[e] = g.get(e, 0.0) + c / math.factorial(k)

    coeff = g.get(tuple(int(n) for n in v), 0.0)
    for n in v:
        coeff *= math.factorial(int(n))
    return coeff


def reference_eigenfunction(n, omega, x):
    """Harmonic oscillator eigenfunction from scipy's Hermite polynomials."""
    x = np.asarray(x, dtype=float)
    norm = (omega / np.pi) ** 0.25 / math.sqrt(2.0 ** n * math.factorial(n))
    return norm * eval_hermite(n, np.sqrt(omega) * x) * np.exp(-0.5 * omega * x * x)
