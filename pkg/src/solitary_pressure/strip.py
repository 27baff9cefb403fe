"""Conformal map from the strip -D <= beta <= 0 onto one period of the fluid.

Everything here is nondimensional (g = d = 1). With zeta = alpha + i beta,

    z(zeta) = zeta + i (D - 1)
              + sum_n [a_n sin(k_n (zeta + iD)) - b_n cos(k_n (zeta + iD))] / sinh(k_n D)

with k_n = n pi / L. The line beta = -D maps onto the bed y = -1 and beta = 0
onto the free surface, whose elevation is D - 1 + sum_n a_n cos(k_n alpha) + b_n sin(k_n alpha).
The complex velocity is (u - c) - i v = -q / z'(zeta), q being the uniform strip
speed, so the stream function is simply -q * beta.
"""
from __future__ import annotations

import numpy as np

_CHUNK = 2_000_000
_EPS4 = 4 * np.finfo(float).eps


def _cexpm1(w):
    """exp(w) - 1 for complex w, accurate for small |w|."""
    re, im = w.real, w.imag
    s = np.sin(0.5 * im)
    return np.expm1(re) * np.cos(im) - 2.0 * s * s + 1j * np.exp(re) * np.sin(im)


class StripMap:
    def __init__(self, cos_coef, sin_coef, depth, half_length):
        self.a = np.asarray(cos_coef, dtype=float)
        self.b = np.zeros_like(self.a) if sin_coef is None else np.asarray(sin_coef, dtype=float)
        self.D = float(depth)
        self.L = float(half_length)
        self.k = np.pi * np.arange(1, self.a.size + 1) / self.L
        self._w = 1.0 / -np.expm1(-2.0 * self.k * self.D)
        self._e2kD = np.exp(-2.0 * self.k * self.D)
        self._tables = {}
        k = self.k
        # columns: z, z', z'' for the sin-type (S) and cos-type (C) sums
        self._coef_S = np.stack([self.a, self.b * k, -self.a * k**2], axis=1) * self._w[:, None]
        self._coef_C = np.stack([-self.b, self.a * k, self.b * k**2], axis=1) * self._w[:, None]
        self.symmetric = not np.any(self.b)

    @property
    def modes(self):
        return self.a.size

    def evaluate(self, alpha, beta, order=1):
        """Return (z, z', z'') at zeta = alpha + i beta (z'' is None when order < 2)."""
        alpha = np.asarray(alpha, dtype=float)
        beta = np.broadcast_to(np.asarray(beta, dtype=float), alpha.shape)
        shape = alpha.shape
        alpha = alpha.ravel()
        beta = beta.ravel()
        out = np.empty((alpha.size, 3), dtype=complex)
        step = max(1, _CHUNK // max(1, self.modes))
        for lo in range(0, alpha.size, step):
            sl = slice(lo, lo + step)
            out[sl] = self._sums(alpha[sl], beta[sl])
        z = alpha + 1j * (beta + self.D - 1.0) + out[:, 0]
        dz = 1.0 + out[:, 1]
        z = z.reshape(shape)
        dz = dz.reshape(shape)
        if order < 2:
            return z, dz, None
        return z, dz, out[:, 2].reshape(shape)

    def _sums(self, alpha, beta):
        s = beta + self.D
        ka = np.outer(alpha, self.k)
        cos = np.cos(ka)
        sin = np.sin(ka)
        # e^{k(s-D)} and e^{-k(s+D)} = e^{-2kD} / e^{k(s-D)}; both stay <= 1 inside the strip
        up = np.exp(np.outer(s - self.D, self.k))
        dn = self._e2kD / up
        plus = up + dn
        minus = dn - up
        # (P - Q)/i and (P + Q) with P = e^{ik alpha} dn, Q = e^{-ik alpha} up
        re = (sin * plus) @ self._coef_S + (cos * plus) @ self._coef_C
        im = -(cos * minus) @ self._coef_S + (sin * minus) @ self._coef_C
        return re + 1j * im

    def increment(self, alpha, beta, delta):
        """z(zeta + delta) - z(zeta) and z'(zeta + delta) - z'(zeta) without cancellation.

        Each mode is written with the bounded exponentials e^{ik zeta - 2kD} and
        e^{-ik zeta}, so a difference reduces to the base term times expm1(+-ik delta).
        """
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        beta = np.broadcast_to(np.asarray(beta, dtype=float), alpha.shape)
        delta = np.broadcast_to(np.asarray(delta, dtype=complex), alpha.shape)
        k = self.k
        fp = np.exp(1j * np.outer(alpha, k) - np.outer(beta + 2 * self.D, k))
        fm = np.exp(-1j * np.outer(alpha, k) + np.outer(beta, k))
        kd = 1j * np.outer(delta, k)
        ep = fp * _cexpm1(kd)
        em = fm * _cexpm1(-kd)
        w = self._w
        dz = delta + ep @ (w * (-1j * self.a - self.b)) + em @ (w * (1j * self.a - self.b))
        ddz = ep @ (w * k * (self.a - 1j * self.b)) + em @ (w * k * (self.a + 1j * self.b))
        return dz, ddz

    def surface_elevation_at(self, alpha):
        return np.imag(self.evaluate(alpha, 0.0)[0])

    def _line_table(self, beta):
        """Re z along the strip line beta on a fine uniform alpha grid over [-L, L]."""
        table = self._tables.get(beta)
        if table is None:
            M = 16 * max(64, 1 << int(np.ceil(np.log2(self.modes))))
            s = beta + self.D
            # Re of the sums along the line: sum w_n (a_n sin - b_n cos) with w_n the
            # cosh ratio for this depth, written as Re sum w_n (-i a_n - b_n) e^{ik alpha}
            ratio = (np.exp(self.k * (s - self.D)) + self._e2kD / np.exp(self.k * (s - self.D))) * self._w
            spec = np.zeros(M // 2 + 1, dtype=complex)
            spec[1 : self.modes + 1] = ratio * (-1j * self.a - self.b) * (M / 2)
            X = np.fft.irfft(spec, n=M)
            alpha = np.arange(M) * (2 * self.L / M)
            x = alpha + X
            half = M // 2
            table = (np.concatenate([alpha[half:] - 2 * self.L, alpha[: half + 1]]),
                     np.concatenate([x[half:] - 2 * self.L, x[: half + 1]]))
            self._tables[beta] = table
        return table

    def _invert_line(self, x, beta):
        """Solve Re z(alpha + i beta) = x for alpha along a horizontal strip line."""
        x = np.asarray(x, dtype=float)
        a_tab, x_tab = self._line_table(beta)
        alpha = np.interp(x, x_tab, a_tab)
        for _ in range(20):
            z, dz, _ = self.evaluate(alpha, beta)
            step = (z.real - x) / dz.real
            alpha = alpha - step
            if np.all(np.abs(step) <= _EPS4 * (1.0 + np.abs(alpha))):
                break
        return alpha

    def invert_surface(self, x):
        return self._invert_line(x, 0.0)

    def invert_bed(self, x):
        return self._invert_line(x, -self.D)

    def invert(self, x, y, a_s=None, a_b=None, eta=None):
        """Preimage (alpha, beta) of physical points strictly inside the fluid.

        Surface and bed preimages of the same abscissae may be passed in when
        the caller already has them.
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if a_s is None:
            a_s = self.invert_surface(x)
        if a_b is None:
            a_b = self.invert_bed(x)
        if eta is None:
            eta = self.surface_elevation_at(a_s)
        frac = (y + 1.0) / (eta + 1.0)
        zeta = a_b + frac * (a_s - a_b) + 1j * self.D * (frac - 1.0)
        target = x + 1j * y
        for _ in range(60):
            z, dz, _ = self.evaluate(zeta.real, zeta.imag)
            delta = (z - target) / dz
            zeta = zeta - delta
            if np.all(np.abs(delta) <= _EPS4 * (1.0 + np.abs(zeta))):
                break
        return zeta.real, zeta.imag
