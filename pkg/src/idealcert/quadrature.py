"""Fubini-Study quadrature on P^1 and P^2 in the affine chart z0 = 1.

Chart points are written as zeta = tan(t) * e^{i theta} (n = 1) or
zeta = tan(t) * (cos(u) e^{i theta_1}, sin(u) e^{i theta_2}) (n = 2), with
t, u in [0, pi/2].  Angles use the periodic trapezoid rule, t and u use
Gauss-Legendre.  In these coordinates the Fubini-Study volume becomes a
smooth polynomial weight in sin/cos, so convergence is spectral.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import factorial, pi

import numpy as np
from numpy.polynomial.legendre import leggauss

__all__ = ["QuadratureRule", "fs_quadrature", "fs_density"]


def _gauss_quarter(N):
    x, w = leggauss(N)
    return (x + 1) * (pi / 4), w * (pi / 4)


def fs_density(zeta):
    """Fubini-Study volume density n!/(pi^n (1+|zeta|^2)^{n+1}) w.r.t. Lebesgue measure."""
    zeta = np.atleast_2d(zeta)
    n = zeta.shape[-1]
    rho = 1.0 + np.sum(np.abs(zeta) ** 2, axis=-1)
    return factorial(n) / (pi ** n * rho ** (n + 1))


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Tensor-product rule: radial part (moduli of the chart point) x angular torus.

    ``weights`` are Fubini-Study weights (they sum to 1); ``lebesgue_weights``
    integrate against dV on C^n.  Use ``chunks`` to stream the node set
    without materialising it when ``resolution`` is large.
    """

    n: int
    resolution: int
    radial: np.ndarray  # (R, n) moduli |zeta_k|
    radial_weights: np.ndarray  # (R,) FS mass of each radial node
    angles: np.ndarray  # (A,) trapezoid angles

    @property
    def size(self):
        return len(self.radial_weights) * len(self.angles) ** self.n

    def _angular_phases(self):
        th = self.angles
        if self.n == 1:
            return np.exp(1j * th)[:, None]
        t1, t2 = np.meshgrid(th, th, indexing="ij")
        return np.stack([np.exp(1j * t1.ravel()), np.exp(1j * t2.ravel())], axis=1)

    def chunks(self, max_nodes=1 << 18):
        """Yield ``(nodes, weights, lebesgue_weights)`` blocks in a fixed order."""
        phases = self._angular_phases()
        A = len(phases)
        aw = 1.0 / A
        per = max(1, max_nodes // A)
        for start in range(0, len(self.radial_weights), per):
            rad = self.radial[start:start + per]
            rw = self.radial_weights[start:start + per]
            nodes = (rad[:, None, :] * phases[None, :, :]).reshape(-1, self.n)
            w = np.repeat(rw * aw, A)
            yield nodes, w, w / fs_density(nodes)

    @cached_property
    def _full(self):
        parts = list(self.chunks(max_nodes=self.size))
        return parts[0]

    @property
    def nodes(self):
        return self._full[0]

    @property
    def weights(self):
        return self._full[1]

    @property
    def lebesgue_weights(self):
        return self._full[2]

    def integrate(self, func, max_nodes=1 << 18):
        """Sum of ``func(nodes) * weights``, accumulated chunk by chunk."""
        total = 0j
        for nodes, w, _ in self.chunks(max_nodes):
            total += np.sum(func(nodes) * w)
        return total


def fs_quadrature(n, resolution):
    """Fubini-Study quadrature on P^n (n = 1 or 2) at the given resolution."""
    if n not in (1, 2):
        raise ValueError(f"unsupported dimension n = {n}; only 1 and 2 are implemented")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    t, wt = _gauss_quarter(resolution)
    angles = 2 * pi * np.arange(resolution) / resolution
    if n == 1:
        radial = np.tan(t)[:, None]
        rw = 2 * np.sin(t) * np.cos(t) * wt
    else:
        u, wu = _gauss_quarter(resolution)
        T, Uu = np.meshgrid(t, u, indexing="ij")
        WT, WU = np.meshgrid(wt, wu, indexing="ij")
        r = np.tan(T)
        radial = np.stack([(r * np.cos(Uu)).ravel(), (r * np.sin(Uu)).ravel()], axis=1)
        rw = (8 * np.sin(T) ** 3 * np.cos(T) * np.sin(Uu) * np.cos(Uu) * WT * WU).ravel()
    return QuadratureRule(n, resolution, radial, rw, angles)
