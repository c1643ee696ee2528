"""Independent quadrature oracle for the test-problem generators.

Each matrix entry is recomputed from the continuous kernel with adaptive
quadrature (scipy.integrate) instead of the closed forms used by the C++
generators. Galerkin entries use the orthonormal box basis 1/sqrt(h) on each
cell; baart integrates exactly in t where the generator uses Simpson's rule,
so it agrees only to about 1e-7. The printed values are frozen in tests/unit/test_problems.cpp.

    python3 tests/oracles/generators.py
"""

import math

import numpy as np
from scipy import integrate

N = 32
ENTRIES = [(0, 0), (3, 7), (12, 12), (20, 5), (31, 30)]
OPTS = dict(epsabs=1e-15, epsrel=1e-13)


def cell(lo, h, i):
    return lo + i * h, lo + (i + 1) * h


def galerkin(kernel, lo, h, i, j, scale=1.0, points=None):
    s0, s1 = cell(lo, h, i)
    t0, t1 = cell(lo, h, j)

    def inner(s):
        val, _ = integrate.quad(lambda t: kernel(s, t), t0, t1,
                                points=points(s) if points else None, **OPTS)
        return val

    val, _ = integrate.quad(inner, s0, s1, limit=200, **OPTS)
    return scale * val


def shaw(i, j):
    h = math.pi / N
    s = -math.pi / 2 + (i + 0.5) * h
    t = -math.pi / 2 + (j + 0.5) * h
    u = math.pi * (math.sin(s) + math.sin(t))
    sinc = 1.0 if u == 0 else math.sin(u) / u
    return h * ((math.cos(s) + math.cos(t)) * sinc) ** 2


def baart(i, j):
    hs = math.pi / (2 * N)
    ht = math.pi / N
    s0, s1 = cell(0.0, hs, i)
    t0, t1 = cell(0.0, ht, j)
    val, _ = integrate.dblquad(lambda s, t: math.exp(s * math.cos(t)), t0, t1, s0, s1,
                               **OPTS)
    return val / math.sqrt(hs * ht)


def deriv2(i, j):
    h = 1.0 / N

    def k(s, t):
        return s * (t - 1.0) if s < t else t * (s - 1.0)

    return galerkin(k, 0.0, h, i, j, scale=1.0 / h, points=lambda s: [s])


def foxgood(i, j):
    h = 1.0 / N
    s = (i + 0.5) * h
    t = (j + 0.5) * h
    return h * math.hypot(s, t)


def gravity(i, j):
    h = 1.0 / N
    d = 0.25
    s = (i + 0.5) * h
    t = (j + 0.5) * h
    return h * d / (d * d + (s - t) ** 2) ** 1.5


def heat(i, j):
    if j > i:
        return 0.0
    h = 1.0 / N
    t = h / 2 + (i - j) * h
    return h / (2 * math.sqrt(math.pi)) * t ** -1.5 * math.exp(-1.0 / (4 * t))


def phillips_kernel(s, t):
    x = s - t
    return 1.0 + math.cos(math.pi * x / 3) if abs(x) < 3 else 0.0


def phillips(i, j):
    h = 12.0 / N
    return galerkin(phillips_kernel, -6.0, h, i, j, scale=1.0 / h,
                    points=lambda s: [p for p in (s - 3.0, s + 3.0)])


def x_true(name):
    if name == "shaw":
        t = -math.pi / 2 + (np.arange(N) + 0.5) * math.pi / N
        return 2 * np.exp(-6 * (t - 0.8) ** 2) + np.exp(-2 * (t + 0.5) ** 2)
    if name == "baart":
        h = math.pi / N
        return np.array([integrate.quad(math.sin, i * h, (i + 1) * h, **OPTS)[0]
                         for i in range(N)]) / math.sqrt(h)
    if name == "deriv2":
        h = 1.0 / N
        return np.array([integrate.quad(lambda t: t, i * h, (i + 1) * h, **OPTS)[0]
                         for i in range(N)]) / math.sqrt(h)
    if name == "foxgood":
        return (np.arange(N) + 0.5) / N
    if name == "gravity":
        t = (np.arange(N) + 0.5) / N
        return np.sin(math.pi * t) + 0.5 * np.sin(2 * math.pi * t)
    if name == "heat":
        x = np.zeros(N)
        for i in range(1, N // 2 + 1):
            ti = i * 20.0 / N
            if ti < 2:
                x[i - 1] = 0.75 * ti ** 2 / 4
            elif ti < 3:
                x[i - 1] = 0.75 + (ti - 2) * (3 - ti)
            else:
                x[i - 1] = 0.75 * math.exp(-(ti - 3) * 2)
        return x
    if name == "phillips":
        h = 12.0 / N
        f = lambda t: 1 + math.cos(math.pi * t / 3) if abs(t) < 3 else 0.0
        return np.array([integrate.quad(f, -6 + i * h, -6 + (i + 1) * h,
                                        points=[-3.0, 3.0], **OPTS)[0]
                         for i in range(N)]) / math.sqrt(h)
    raise KeyError(name)


def main():
    kernels = dict(shaw=shaw, baart=baart, deriv2=deriv2, foxgood=foxgood,
                   gravity=gravity, heat=heat, phillips=phillips)
    for name, fn in kernels.items():
        x = x_true(name)
        a_vals = ", ".join(f"{{{i}, {j}, {fn(i, j)!r}}}" for i, j in ENTRIES)
        x_vals = ", ".join(f"{{{i}, {float(x[i])!r}}}" for i in (0, 9, 17, 31))
        print(f'{{"{name}", {{{a_vals}}}, {{{x_vals}}}}},')


if __name__ == "__main__":
    main()
