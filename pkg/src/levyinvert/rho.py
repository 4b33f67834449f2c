"""Transforms that feed the inversion routes, sampled on symmetric z-grids.

rho_hat(z) averages log phi(z) - log phi(z + lambda) over lambda in [-1, 1]
and subtracts sigma^2/3; it equals the Fourier transform of the reweighted
jump measure 2(1 - sin x / x) U(dx). neg_psi2_grid samples
-(psi''(z) + sigma^2), the Fourier transform of x^2 U(dx). Both grids share
one container type whose construction enforces the structural invariants of
a transform of a nonnegative finite measure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .distlog import UnwrappedLog, log_phi_at, psi2_numeric
from .errors import InvariantViolation

__all__ = ["RhoHatGrid", "rho_hat", "rho_hat_grid", "neg_psi2_grid"]

_HERMITIAN_TOL = 1e-9
_ZERO_TOL = 1e-9
_BOUND_TOL = 1e-9


@lru_cache(maxsize=32)
def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


@dataclass(frozen=True)
class RhoHatGrid:
    """Complex transform values on a symmetric strictly increasing z-grid.

    source records provenance: "rho_hat" for the lambda-averaged transform,
    "neg_psi2" for -(psi'' + sigma^2). quad_nodes and err_est keep the
    per-point quadrature provenance.
    """

    zgrid: np.ndarray
    values: np.ndarray
    quad_nodes: int
    err_est: np.ndarray
    source: str = "rho_hat"

    @property
    def step(self) -> float:
        return float(self.zgrid[1] - self.zgrid[0])

    @property
    def zmax(self) -> float:
        return float(self.zgrid[-1])

    def value_at_zero(self) -> float:
        return float(self.values[len(self.values) // 2].real)

    def pd_violations(self, tol: float = _BOUND_TOL) -> int:
        """Count points breaking |F(z)| <= F(0) + tol."""
        bound = self.value_at_zero() + tol
        return int(np.count_nonzero(np.abs(self.values) > bound))

    def to_csv_text(self) -> str:
        lines = ["z,re,im,err"]
        for z, v, e in zip(self.zgrid, self.values, self.err_est):
            lines.append(f"{float(z)!r},{float(v.real)!r},{float(v.imag)!r},"
                         f"{float(e)!r}")
        return "\n".join(lines) + "\n"

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv_text())


def _check_grid_invariants(zgrid, values, source):
    mid = len(values) // 2
    v0 = values[mid]
    if abs(v0.imag) > _ZERO_TOL:
        raise InvariantViolation(
            f"{source}(0) = {v0} is not real; input is likely not an "
            "infinitely divisible characteristic function", z=0.0)
    if v0.real < -_ZERO_TOL:
        raise InvariantViolation(
            f"{source}(0) = {v0.real:.3e} is negative; input is not an "
            "infinitely divisible characteristic function or sigma^2 is wrong",
            z=0.0)
    herm = np.abs(values[::-1] - np.conj(values))
    k = int(np.argmax(herm))
    if herm[k] > _HERMITIAN_TOL:
        raise InvariantViolation(
            f"Hermitian symmetry broken by {herm[k]:.3e} at z = {zgrid[k]:g}",
            z=float(zgrid[k]))
    mags = np.abs(values)
    k = int(np.argmax(mags))
    if mags[k] > max(v0.real, 0.0) + _BOUND_TOL:
        raise InvariantViolation(
            f"|{source}({zgrid[k]:g})| = {mags[k]:.3e} exceeds the value at 0 "
            f"({v0.real:.3e}); transform cannot come from a nonnegative measure",
            z=float(zgrid[k]))


def _lambda_segments(u: UnwrappedLog, z: float):
    """Split points of [-1, 1] where z + lambda crosses a kink of log phi."""
    cuts = []
    for k in u.kinks:
        lam = k - z
        if -1.0 + 1e-12 < lam < 1.0 - 1e-12:
            cuts.append(lam)
    return [-1.0] + sorted(cuts) + [1.0]


def _lambda_average(u: UnwrappedLog, z: float, nodes: int) -> complex:
    """integral over [-1, 1] of log phi(z) - log phi(z + lambda)."""
    edges = _lambda_segments(u, z)
    x, w = _gauss_legendre(nodes)
    acc = 0.0 + 0.0j
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        lam = half * x + 0.5 * (a + b)
        acc += half * np.sum(w * log_phi_at(u, z + lam))
    return 2.0 * log_phi_at(u, z) - acc


def rho_hat(u: UnwrappedLog, sigma2: float, z: float, nodes: int = 64) -> complex:
    """The transform at one z by Gauss-Legendre quadrature in lambda.

    Uses the branch-continuous log throughout (never a per-point principal
    branch) and splits the lambda interval where z + lambda crosses a
    declared kink of log phi.
    """
    if nodes < 16:
        raise ValueError("need at least 16 quadrature nodes")
    if sigma2 < 0:
        raise ValueError("sigma2 must be nonnegative")
    if abs(z) + 1.0 > u.zmax + 1e-9:
        raise ValueError(f"z = {z:g} needs z+-1 inside the unwrapped range "
                         f"[+-{u.zmax:g}]")
    return _lambda_average(u, float(z), nodes) - sigma2 / 3.0


def _batched_plain(u: UnwrappedLog, zs: np.ndarray, nodes: int) -> np.ndarray:
    """Vectorized lambda average for z whose window [z-1, z+1] has no kink."""
    x, w = _gauss_legendre(nodes)
    lam = zs[:, None] + x[None, :]
    vals = log_phi_at(u, lam.ravel()).reshape(lam.shape)
    return 2.0 * log_phi_at(u, zs) - vals @ w


def rho_hat_grid(u: UnwrappedLog, sigma2: float, zmax: float, step: float,
                 nodes: int = 64) -> RhoHatGrid:
    """Sample rho_hat on the symmetric grid {-zmax, ..., zmax} with spacing step.

    The per-point error estimate is the change when the node count is
    halved. Construction enforces Hermitian symmetry, a real nonnegative
    value at 0, and the positive-definiteness bound |F(z)| <= F(0).
    """
    if step <= 0 or zmax <= 0:
        raise ValueError("zmax and step must be positive")
    if zmax + 1.0 > u.zmax + 1e-9:
        raise ValueError("grid needs zmax + 1 within the unwrapped range")
    m = int(round(zmax / step))
    if abs(m * step - zmax) > 1e-9:
        raise ValueError("zmax must be an integer multiple of step")
    zg = (np.arange(2 * m + 1) - m) * step

    values = np.empty(zg.shape, dtype=complex)
    coarse = np.empty(zg.shape, dtype=complex)
    half = max(nodes // 2, 8)
    if u.kinks:
        lo = min(u.kinks) - 1.0
        hi = max(u.kinks) + 1.0
        plain = (zg <= lo) | (zg >= hi)
    else:
        plain = np.ones(zg.shape, dtype=bool)
    if np.any(plain):
        values[plain] = _batched_plain(u, zg[plain], nodes)
        coarse[plain] = _batched_plain(u, zg[plain], half)
    for i in np.nonzero(~plain)[0]:
        values[i] = _lambda_average(u, float(zg[i]), nodes)
        coarse[i] = _lambda_average(u, float(zg[i]), half)

    values -= sigma2 / 3.0
    coarse -= sigma2 / 3.0
    err = np.abs(values - coarse)
    _check_grid_invariants(zg, values, "rho_hat")
    zg.setflags(write=False)
    values.setflags(write=False)
    err.setflags(write=False)
    return RhoHatGrid(zgrid=zg, values=values, quad_nodes=nodes, err_est=err,
                      source="rho_hat")


def neg_psi2_grid(u: UnwrappedLog, sigma2: float, zmax: float, step: float,
                  fd_step: float = 1e-3) -> RhoHatGrid:
    """Sample -(psi''(z) + sigma^2), the transform of x^2 U(dx).

    Uses the analytic psi'' carried by the unwrap when available, otherwise
    central finite differences on the continuous log. The caller asserts
    that the jump measure has a finite second moment outside |x| <= 1; a
    construction-time invariant violation is the usual symptom when that
    assertion is false.
    """
    if step <= 0 or zmax <= 0:
        raise ValueError("zmax and step must be positive")
    m = int(round(zmax / step))
    if abs(m * step - zmax) > 1e-9:
        raise ValueError("zmax must be an integer multiple of step")
    zg = (np.arange(2 * m + 1) - m) * step
    if u.psi2 is not None:
        values = -(np.asarray(u.psi2(zg), dtype=complex) + sigma2)
        err = np.zeros(zg.shape)
        nodes_used = 0
    else:
        if zmax + 2 * fd_step > u.zmax + 1e-9:
            raise ValueError("finite-difference stencil exceeds the unwrapped "
                             "range; extend the unwrap or shrink zmax")
        est = psi2_numeric(u, zg, fd_step=fd_step)
        values = -(np.asarray(est.value, dtype=complex) + sigma2)
        err = np.asarray(est.err_est, dtype=float)
        nodes_used = 5
    _check_grid_invariants(zg, values, "neg_psi2")
    zg.setflags(write=False)
    values.setflags(write=False)
    err.setflags(write=False)
    return RhoHatGrid(zgrid=zg, values=values, quad_nodes=nodes_used,
                      err_est=err, source="neg_psi2")
