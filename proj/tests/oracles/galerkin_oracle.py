"""Direct-summation reference values for the Galerkin drift.

Builds the real divergence-free basis from its definition and evaluates every
field by explicit trigonometric sums at the grid points (no FFT). The printed
numbers are frozen into tests/test_constitutive.cpp.
"""
import itertools

import numpy as np


def canonical_modes(d, n):
    out = []
    for z in itertools.product(range(-n, n + 1), repeat=d):
        nz = [c for c in z if c != 0]
        if nz and nz[0] > 0:
            out.append(np.array(z))
    return out


def frame(z):
    d = len(z)
    drop = int(np.argmax(np.abs(z)))
    zh = z / np.linalg.norm(z)
    vecs = []
    for i in range(d):
        if i == drop:
            continue
        u = np.zeros(d)
        u[i] = 1.0
        for _ in range(2):
            u = u - (u @ zh) * zh
            for w in vecs:
                u = u - (u @ w) * w
        vecs.append(u / np.linalg.norm(u))
    return vecs


def basis(d, n):
    out = []
    for z in canonical_modes(d, n):
        f = frame(z)
        for j in range(1, 2 * d - 1):
            out.append((z, j <= d - 1, f[(j - 1) % (d - 1)]))
    return out


def grid(d, M):
    axes = [np.arange(M) / M] * d
    return np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)


def psi_and_grad(z, is_cos, e, x):
    phase = 2 * np.pi * (x @ z)
    if is_cos:
        val = np.sqrt(2) * np.cos(phase)
        dval = -np.sqrt(2) * np.sin(phase)
    else:
        val = np.sqrt(2) * np.sin(phase)
        dval = np.sqrt(2) * np.cos(phase)
    v = val[:, None] * e[None, :]
    # g[:, i, k] = d_k v_i
    g = (dval[:, None, None] * e[None, :, None]) * (2 * np.pi * z)[None, None, :]
    return v, g


def drift(coords, d, n, p, nu, M):
    x = grid(d, M)
    B = basis(d, n)
    v = np.zeros((len(x), d))
    g = np.zeros((len(x), d, d))
    parts = [psi_and_grad(z, c, e, x) for z, c, e in B]
    for X, (pv, pg) in zip(coords, parts):
        v += X * pv
        g += X * pg
    e = 0.5 * (g + np.transpose(g, (0, 2, 1)))
    e2 = np.sum(e * e, axis=(1, 2))
    fac = 2 * nu * (1 + e2) ** ((p - 2) / 2)
    tau = fac[:, None, None] * e
    conv = np.einsum("xk,xik->xi", v, g)
    b = []
    for pv, pg in parts:
        pe = 0.5 * (pg + np.transpose(pg, (0, 2, 1)))
        # <v, (v.grad) psi> - <tau, e(psi)>
        adv = np.einsum("xk,xik->xi", v, pg)
        b.append(np.mean(np.sum(v * adv, axis=1)) - np.mean(np.sum(tau * pe, axis=(1, 2))))
    diss = np.mean(fac * e2)
    grad_lp = np.mean(np.sum(g * g, axis=(1, 2)) ** (p / 2)) ** (1 / p)
    return np.array(b), diss, grad_lp, conv


def sobolev_pow(coords, d, n, p, alpha, M):
    x = grid(d, M)
    v = np.zeros((len(x), d))
    for X, (z, c, e) in zip(coords, basis(d, n)):
        pv, _ = psi_and_grad(z, c, e, x)
        v += X * (1 + 4 * np.pi**2 * (z @ z)) ** (alpha / 2) * pv
    return np.mean(np.sum(v * v, axis=1) ** (p / 2))


def state(size):
    return np.array([0.3 * np.sin(1.7 * k + 0.4) for k in range(size)])


if __name__ == "__main__":
    for d, n, p in [(2, 2, 3.0), (2, 2, 1.5), (3, 1, 2.5)]:
        size = len(basis(d, n))
        X = state(size)
        b, diss, glp, _ = drift(X, d, n, p, 1.0, 32)
        print(f"d={d} n={n} p={p} size={size}")
        print("  drift[0:6] =", ", ".join(f"{v:.17g}" for v in b[:6]))
        print("  <X,b> =", f"{X @ b:.17g}", " dissipation =", f"{diss:.17g}", " grad_lp =", f"{glp:.17g}")
        print("  ||X||_{p,1}^p =", f"{sobolev_pow(X, d, n, p, 1.0, 32):.17g}")
