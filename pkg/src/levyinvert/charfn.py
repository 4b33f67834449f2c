"""Characteristic functions of infinitely divisible distributions.

A small catalog (normal, Cauchy, compound Poisson, negative binomial,
hyperbolic cosine, Gamma) plus user-defined distributions built from a
drift/variance/jump-measure triplet. Every entry evaluates phi(z)
vectorized over real z and carries the metadata the inversion pipeline
needs: the Gaussian variance sigma^2, an analytic second derivative of
log phi where a closed form exists, and the z-locations where log phi is
not smooth.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from .errors import CharFnError, QuadratureError

__all__ = [
    "CharFn",
    "TruncationFn",
    "QuadSpec",
    "PointJump",
    "TwoPointJump",
    "UniformJump",
    "DensityMeasure",
    "AtomMeasure",
    "CompoundMeasure",
    "LevyTriplet",
    "catalog_normal",
    "catalog_cauchy",
    "catalog_compound_poisson",
    "catalog_negative_binomial",
    "catalog_hyperbolic_cosine",
    "catalog_gamma",
    "charfn_from_triplet",
    "charfn_from_spec",
    "default_truncation",
    "validate_truncation",
]


def _maybe_scalar(z_in, out):
    """Return a plain complex when the caller passed a scalar."""
    if np.isscalar(z_in) or (isinstance(z_in, np.ndarray) and z_in.ndim == 0):
        return complex(out)
    return out


@dataclass(frozen=True)
class CharFn:
    """An evaluatable characteristic function with inversion metadata.

    evaluate maps real z (scalar or array) to complex phi(z). sigma2 is the
    Gaussian variance of the law. psi2, when set, is the analytic second
    derivative of log phi. log_kinks lists the z where log phi is not
    smooth (quadrature and interpolation split there). x2_integrable
    records whether the jump measure has a finite second moment outside
    the unit interval; None means unknown.
    """

    evaluate: Callable
    sigma2: float
    psi2: Optional[Callable] = None
    label: str = ""
    log_kinks: tuple = ()
    x2_integrable: Optional[bool] = None

    def __post_init__(self):
        if self.sigma2 < 0:
            raise CharFnError("sigma2 must be nonnegative")


# ---------------------------------------------------------------------------
# truncation functions


@dataclass(frozen=True)
class TruncationFn:
    """Compensator weight h(x) with h(x) = 1 + o(x) at 0 and O(1/x) at infinity.

    kinks are the x where h is discontinuous or non-smooth; the cumulant
    quadrature splits there. support_radius, when set, declares h == 0 for
    |x| > support_radius so tail integrals can drop the compensator term.
    """

    evaluate: Callable
    kinks: tuple = ()
    support_radius: Optional[float] = None
    label: str = ""

    @staticmethod
    def indicator(radius: float = 1.0) -> "TruncationFn":
        if radius <= 0:
            raise CharFnError("indicator truncation needs radius > 0")

        def ev(x):
            x = np.asarray(x, dtype=float)
            return np.where(np.abs(x) <= radius, 1.0, 0.0)

        return TruncationFn(ev, kinks=(-radius, radius), support_radius=radius,
                            label=f"indicator({radius:g})")


def default_truncation() -> TruncationFn:
    """h(x) = 1 on |x| <= 1, else 0."""
    return TruncationFn.indicator(1.0)


def validate_truncation(h: TruncationFn, zero_slack: float = 1e-2,
                        tail_bound: float = 50.0) -> None:
    """Sample-point check of the admissibility bounds for h.

    Verifies h(x) -> 1 near 0 (|h(x) - 1| <= zero_slack at |x| = 1e-6) and
    |x h(x)| <= tail_bound at a few large |x|.
    """
    for x in (1e-6, -1e-6):
        val = float(np.asarray(h.evaluate(x)))
        if abs(val - 1.0) > zero_slack:
            raise CharFnError(
                f"truncation function is not 1 + o(x) near 0: h({x}) = {val}")
    for x in (10.0, 100.0, 1000.0, -10.0, -100.0, -1000.0):
        val = float(np.asarray(h.evaluate(x)))
        if abs(x * val) > tail_bound:
            raise CharFnError(
                f"truncation function is not O(1/x) at infinity: x*h = {x * val}")


# ---------------------------------------------------------------------------
# jump-size laws for compound Poisson inputs


@dataclass(frozen=True)
class PointJump:
    """Unit mass at a single jump size x."""

    x: float

    def __post_init__(self):
        if self.x == 0:
            raise CharFnError("jump law must not put mass at 0")

    def theta_hat(self, z):
        z = np.asarray(z, dtype=float)
        return np.exp(1j * z * self.x)

    def atoms(self):
        return ((self.x, 1.0),)

    def density(self):
        return None

    def x_h_moment(self, h: TruncationFn) -> float:
        return self.x * float(np.asarray(h.evaluate(self.x)))

    def x2_moment(self) -> float:
        return self.x ** 2


@dataclass(frozen=True)
class TwoPointJump:
    """Mass w1 at x1 and 1 - w1 at x2."""

    x1: float
    x2: float
    w1: float = 0.5

    def __post_init__(self):
        if self.x1 == 0 or self.x2 == 0:
            raise CharFnError("jump law must not put mass at 0")
        if self.x1 == self.x2:
            raise CharFnError("two-point jump law needs distinct locations")
        if not 0 < self.w1 < 1:
            raise CharFnError("two-point weight must lie in (0, 1)")

    @property
    def w2(self) -> float:
        return 1.0 - self.w1

    def theta_hat(self, z):
        z = np.asarray(z, dtype=float)
        return self.w1 * np.exp(1j * z * self.x1) + self.w2 * np.exp(1j * z * self.x2)

    def atoms(self):
        return ((self.x1, self.w1), (self.x2, self.w2))

    def density(self):
        return None

    def x_h_moment(self, h: TruncationFn) -> float:
        return sum(x * w * float(np.asarray(h.evaluate(x))) for x, w in self.atoms())

    def x2_moment(self) -> float:
        return self.w1 * self.x1 ** 2 + self.w2 * self.x2 ** 2


@dataclass(frozen=True)
class UniformJump:
    """Uniform jump-size law on [a, b]."""

    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise CharFnError("uniform jump law needs a < b")

    def theta_hat(self, z):
        z = np.asarray(z, dtype=float)
        a, b = self.a, self.b
        small = np.abs(z) < 1e-6
        zs = np.where(small, 1.0, z)
        direct = (np.exp(1j * zs * b) - np.exp(1j * zs * a)) / (1j * zs * (b - a))
        # Taylor expansion of the same ratio; avoids 0/0 near z = 0.
        ser = np.zeros_like(z, dtype=complex)
        for n in range(7):
            coef = (b ** (n + 1) - a ** (n + 1)) / ((b - a) * math.factorial(n + 1))
            ser = ser + coef * (1j * z) ** n
        return np.where(small, ser, direct)

    def atoms(self):
        return None

    def density(self):
        a, b = self.a, self.b
        dens = 1.0 / (b - a)

        def u(x):
            x = np.asarray(x, dtype=float)
            return np.where((x >= a) & (x <= b), dens, 0.0)

        return u, ((a, b),)

    def x_h_moment(self, h: TruncationFn) -> float:
        pts = [k for k in h.kinks if self.a < k < self.b]
        val, _ = integrate.quad(
            lambda x: x * float(np.asarray(h.evaluate(x))) / (self.b - self.a),
            self.a, self.b, points=pts or None, limit=200)
        return val

    def x2_moment(self) -> float:
        return (self.b ** 3 - self.a ** 3) / (3.0 * (self.b - self.a))


def _jump_has_atom_at_zero(jump) -> bool:
    atoms = jump.atoms()
    return atoms is not None and any(x == 0 for x, _ in atoms)


# ---------------------------------------------------------------------------
# catalog entries


def catalog_normal(m: float, sigma: float) -> CharFn:
    """Normal law with mean m and standard deviation sigma."""
    if sigma <= 0:
        raise CharFnError("normal catalog entry needs sigma > 0")
    s2 = float(sigma) ** 2

    def ev(z):
        zz = np.asarray(z, dtype=float)
        return _maybe_scalar(z, np.exp(1j * m * zz - 0.5 * s2 * zz * zz))

    def psi2(z):
        zz = np.asarray(z, dtype=float)
        return _maybe_scalar(z, np.full(zz.shape, -s2, dtype=complex))

    return CharFn(ev, sigma2=s2, psi2=psi2, label=f"normal(m={m:g}, sigma={sigma:g})",
                  x2_integrable=True)


def catalog_cauchy(c: float, gamma: float) -> CharFn:
    """Cauchy law: phi(z) = exp(-c|z| + i gamma z).

    log phi has a kink at z = 0, so psi'' does not exist there and is left
    unset. The jump measure c/(pi x^2) has no second moment, so the
    second-moment inversion routes do not apply.
    """
    if c <= 0:
        raise CharFnError("cauchy catalog entry needs c > 0")

    def ev(z):
        zz = np.asarray(z, dtype=float)
        return _maybe_scalar(z, np.exp(-c * np.abs(zz) + 1j * gamma * zz))

    return CharFn(ev, sigma2=0.0, psi2=None, label=f"cauchy(c={c:g}, gamma={gamma:g})",
                  log_kinks=(0.0,), x2_integrable=False)


def catalog_compound_poisson(c: float, jump) -> CharFn:
    """Compound Poisson law with jump intensity c and jump-size law theta.

    phi(z) = exp(c (theta_hat(z) - 1)). The jump law must not put mass
    at 0; supported laws are PointJump, TwoPointJump, and UniformJump.
    """
    if c <= 0:
        raise CharFnError("compound Poisson intensity must be positive")
    if _jump_has_atom_at_zero(jump):
        raise CharFnError("jump law must not put mass at 0")

    def ev(z):
        th = np.asarray(jump.theta_hat(np.asarray(z, dtype=float)))
        return _maybe_scalar(z, np.exp(c * (th - 1.0)))

    return CharFn(ev, sigma2=0.0, psi2=None,
                  label=f"compound_poisson(c={c:g}, {type(jump).__name__})",
                  x2_integrable=True)


def catalog_negative_binomial(c: float, p: float) -> CharFn:
    """Negative binomial law: phi(z) = p^c / (1 - q e^{iz})^c, q = 1 - p.

    phi is 2*pi-periodic. 1 - q e^{iz} keeps strictly positive real part,
    so the principal complex log below is already continuous in z.
    """
    if c <= 0:
        raise CharFnError("negative binomial needs c > 0")
    if not 0 < p < 1:
        raise CharFnError("negative binomial needs p in (0, 1)")
    q = 1.0 - p
    logp = math.log(p)

    def ev(z):
        zz = np.asarray(z, dtype=float)
        val = np.exp(c * (logp - np.log(1.0 - q * np.exp(1j * zz))))
        return _maybe_scalar(z, val)

    def psi2(z):
        zz = np.asarray(z, dtype=float)
        e = np.exp(1j * zz)
        return _maybe_scalar(z, -c * q * e / (1.0 - q * e) ** 2)

    return CharFn(ev, sigma2=0.0, psi2=psi2,
                  label=f"negative_binomial(c={c:g}, p={p:g})", x2_integrable=True)


def catalog_hyperbolic_cosine() -> CharFn:
    """Hyperbolic cosine law: phi(z) = 1/cosh(pi z / 2)."""

    def ev(z):
        zz = np.asarray(z, dtype=float)
        with np.errstate(over="ignore"):
            val = 1.0 / np.cosh(0.5 * math.pi * zz)
        return _maybe_scalar(z, val.astype(complex))

    def psi2(z):
        zz = np.asarray(z, dtype=float)
        with np.errstate(over="ignore"):
            ph = 1.0 / np.cosh(0.5 * math.pi * zz)
        return _maybe_scalar(z, (-(math.pi ** 2) / 4.0 * ph * ph).astype(complex))

    return CharFn(ev, sigma2=0.0, psi2=psi2, label="hyperbolic_cosine",
                  x2_integrable=True)


def catalog_gamma(c: float, alpha: float) -> CharFn:
    """Gamma law with shape c and rate alpha: phi(z) = (1 - i z/alpha)^{-c}.

    1 - i z/alpha has real part 1, so the principal power is continuous.
    """
    if c <= 0 or alpha <= 0:
        raise CharFnError("gamma catalog entry needs c > 0 and alpha > 0")

    def ev(z):
        zz = np.asarray(z, dtype=float)
        return _maybe_scalar(z, (1.0 - 1j * zz / alpha) ** (-c))

    def psi2(z):
        zz = np.asarray(z, dtype=float)
        return _maybe_scalar(z, c / (1j * alpha + zz) ** 2)

    return CharFn(ev, sigma2=0.0, psi2=psi2,
                  label=f"gamma(c={c:g}, alpha={alpha:g})", x2_integrable=True)


# ---------------------------------------------------------------------------
# user-defined distributions via a drift/variance/jump-measure triplet


@dataclass(frozen=True)
class DensityMeasure:
    """Jump measure with density u on a declared list of support intervals.

    Intervals are (a, b) pairs in ascending order; math.inf endpoints are
    allowed. The density must be nonnegative on its support.
    """

    u: Callable
    support: tuple

    def __post_init__(self):
        if not self.support:
            raise CharFnError("density measure needs at least one support interval")
        prev = -math.inf
        for a, b in self.support:
            if not a < b:
                raise CharFnError("support interval needs a < b")
            if a < prev:
                raise CharFnError("support intervals must be ascending and disjoint")
            prev = b


@dataclass(frozen=True)
class AtomMeasure:
    """Purely atomic jump measure: ((location, mass), ...)."""

    atoms: tuple

    def __post_init__(self):
        if not self.atoms:
            raise CharFnError("atom measure needs at least one atom")
        locs = [x for x, _ in self.atoms]
        if len(set(locs)) != len(locs):
            raise CharFnError("atom locations must be distinct")
        for x, m in self.atoms:
            if x == 0:
                raise CharFnError("atoms must not sit at 0")
            if m <= 0:
                raise CharFnError("atom masses must be strictly positive")


@dataclass(frozen=True)
class CompoundMeasure:
    """Jump measure c * theta(dx) for a jump-size law theta."""

    intensity: float
    jump: object

    def __post_init__(self):
        if self.intensity <= 0:
            raise CharFnError("compound measure intensity must be positive")
        if _jump_has_atom_at_zero(self.jump):
            raise CharFnError("jump law must not put mass at 0")


@dataclass(frozen=True)
class QuadSpec:
    """Accuracy settings for the cumulant quadrature."""

    abs_tol: float = 1e-10
    limit: int = 200


def _split_interval(a: float, b: float, cuts: Sequence[float]):
    """Split (a, b) at interior cut points, keeping infinite tails separate."""
    pts = sorted({c for c in cuts if a < c < b})
    edges = [a] + pts + [b]
    return list(zip(edges[:-1], edges[1:]))


def _quad_complex(f, a, b, points=None, epsabs=1e-12, limit=200):
    """Adaptive quadrature of a complex integrand; returns (value, err)."""
    re, re_err = integrate.quad(lambda x: f(x).real, a, b, points=points,
                                epsabs=epsabs, limit=limit)
    im, im_err = integrate.quad(lambda x: f(x).imag, a, b, points=points,
                                epsabs=epsabs, limit=limit)
    return re + 1j * im, re_err + im_err


def _fourier_tail(u, a: float, z: float, epsabs: float, limit: int):
    """integral of u(x) e^{izx} over [a, inf) via Fourier-weighted quadrature."""
    if z == 0.0:
        val, err = integrate.quad(u, a, np.inf, epsabs=epsabs, limit=limit)
        return complex(val), err
    re, re_err = integrate.quad(u, a, np.inf, weight="cos", wvar=z, limit=limit)
    im, im_err = integrate.quad(u, a, np.inf, weight="sin", wvar=z, limit=limit)
    return re + 1j * im, re_err + im_err


def _check_x2_density(measure: DensityMeasure) -> bool:
    """Does the density have a finite second moment outside |x| <= 1?"""
    total = 0.0
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            for a, b in measure.support:
                lo, hi = max(a, 1.0), b
                if lo < hi:
                    val, _ = integrate.quad(lambda x: x * x * measure.u(x), lo, hi,
                                            limit=100)
                    total += val
                lo2, hi2 = a, min(b, -1.0)
                if lo2 < hi2:
                    val, _ = integrate.quad(lambda x: x * x * measure.u(x), lo2, hi2,
                                            limit=100)
                    total += val
    except (integrate.IntegrationWarning, Exception):
        return False
    return bool(np.isfinite(total)) and total < 1e12


@dataclass(frozen=True)
class LevyTriplet:
    """Drift gamma, Gaussian variance sigma2, and a jump-measure spec.

    measure may be None for the zero jump measure (a pure Gaussian law).
    Construction checks the admissibility condition
    integral of min(1, x^2) U(dx) < infinity, numerically for density-type
    measures over their declared support.
    """

    gamma: float
    sigma2: float
    measure: Optional[object] = None

    def __post_init__(self):
        if self.sigma2 < 0:
            raise CharFnError("sigma2 must be nonnegative")
        if isinstance(self.measure, DensityMeasure):
            self._check_admissible(self.measure)

    @staticmethod
    def _check_admissible(measure: DensityMeasure) -> None:
        total = 0.0
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error", integrate.IntegrationWarning)
                for a, b in measure.support:
                    for lo, hi in _split_interval(a, b, (-1.0, 0.0, 1.0)):
                        val, _ = integrate.quad(
                            lambda x: min(1.0, x * x) * measure.u(x), lo, hi,
                            limit=100)
                        total += val
        except (integrate.IntegrationWarning, Exception) as exc:
            raise CharFnError(
                f"jump measure fails min(1, x^2) integrability check: {exc}")
        if not np.isfinite(total) or total > 1e10:
            raise CharFnError(
                "jump measure fails min(1, x^2) integrability check "
                f"(numeric mass {total:g})")


def _density_psi_term(measure: DensityMeasure, h: TruncationFn, z: float,
                      quad: QuadSpec):
    """integral of (e^{izx} - 1 - izx h(x)) u(x) dx for one scalar z."""
    total = 0.0 + 0.0j
    err = 0.0
    cuts = [0.0] + [k for k in h.kinks if np.isfinite(k)]
    # Tails switch to Fourier-weighted quadrature beyond |x| = tail_edge,
    # which is chosen past every cut so the finite part holds all kinks.
    tail_edge = max([1.0, h.support_radius or 1.0] + [abs(k) for k in cuts])

    def finite_part(lo, hi):
        def f(x):
            return ((np.exp(1j * z * x) - 1.0
                     - 1j * z * x * float(np.asarray(h.evaluate(x))))
                    * measure.u(x))
        pts = [c for c in cuts if lo < c < hi]
        return _quad_complex(f, lo, hi, points=pts or None,
                             epsabs=quad.abs_tol, limit=quad.limit)

    def tail_part(sign, start):
        # For |x| >= start (past every kink) the integrand is
        # (e^{izx} - 1 - izx h(x)) u(x); the oscillatory piece uses a
        # Fourier-weighted rule, the rest plain absolutely convergent
        # quadrature. The negative tail is reflected to [start, inf).
        udens = measure.u if sign > 0 else (lambda t: measure.u(-t))
        zz = z if sign > 0 else -z
        four, e1 = _fourier_tail(udens, start, zz, quad.abs_tol, quad.limit)
        mass, e2 = integrate.quad(udens, start, np.inf, epsabs=quad.abs_tol,
                                  limit=quad.limit)
        val = four - mass
        e3 = 0.0
        if h.support_radius is None or h.support_radius > start:
            comp, e3 = integrate.quad(
                lambda t: t * float(np.asarray(h.evaluate(sign * t))) * udens(t),
                start, np.inf, epsabs=quad.abs_tol, limit=quad.limit)
            val -= 1j * z * sign * comp
        return val, e1 + e2 + e3

    for a, b in measure.support:
        lo = max(a, -tail_edge)
        hi = min(b, tail_edge)
        if lo < hi:
            val, e = finite_part(lo, hi)
            total += val
            err += e
        if b == math.inf:
            val, e = tail_part(+1, max(tail_edge, a))
            total += val
            err += e
        if a == -math.inf:
            val, e = tail_part(-1, max(tail_edge, -b))
            total += val
            err += e
    return total, err


def charfn_from_triplet(triplet: LevyTriplet, h: Optional[TruncationFn] = None,
                        quad: QuadSpec = QuadSpec()) -> CharFn:
    """Build phi(z) = exp(psi(z)) from a triplet by cumulant integration.

    Atom and compound measures evaluate in closed form and vectorize over
    z; density measures run one adaptive quadrature per scalar z, split at
    0 and at the truncation-function kinks. Non-convergence raises
    QuadratureError with the achieved error estimate.
    """
    if h is None:
        h = default_truncation()
    validate_truncation(h)
    gamma_, s2 = triplet.gamma, triplet.sigma2
    measure = triplet.measure

    if measure is None:
        def jump_term(zz):
            return np.zeros(np.shape(zz), dtype=complex)

        x2 = True
    elif isinstance(measure, AtomMeasure):
        locs = np.array([x for x, _ in measure.atoms])
        masses = np.array([m for _, m in measure.atoms])
        hvals = np.array([float(np.asarray(h.evaluate(x))) for x in locs])

        def jump_term(zz):
            ph = np.exp(1j * np.multiply.outer(zz, locs))
            return (masses * (ph - 1.0)).sum(axis=-1) \
                - 1j * zz * float((masses * locs * hvals).sum())

        x2 = True
    elif isinstance(measure, CompoundMeasure):
        c = measure.intensity
        comp = measure.jump.x_h_moment(h)

        def jump_term(zz):
            return c * (np.asarray(measure.jump.theta_hat(zz)) - 1.0) \
                - 1j * zz * c * comp

        x2 = np.isfinite(measure.jump.x2_moment())
    elif isinstance(measure, DensityMeasure):
        def jump_term(zz):
            flat = np.atleast_1d(np.asarray(zz, dtype=float))
            out = np.empty(flat.shape, dtype=complex)
            for i, zi in enumerate(flat):
                if zi == 0.0:
                    out[i] = 0.0
                    continue
                val, err = _density_psi_term(measure, h, float(zi), quad)
                if err > 1e4 * quad.abs_tol:
                    raise QuadratureError(
                        f"cumulant quadrature did not converge at z={zi:g}",
                        achieved=err)
                out[i] = val
            return out.reshape(np.shape(zz))

        x2 = _check_x2_density(measure)
    else:
        raise CharFnError(f"unknown measure kind: {type(measure).__name__}")

    def ev(z):
        zz = np.asarray(z, dtype=float)
        psi = 1j * gamma_ * zz - 0.5 * s2 * zz * zz + jump_term(zz)
        return _maybe_scalar(z, np.exp(psi))

    return CharFn(ev, sigma2=s2, psi2=None, label="triplet", x2_integrable=x2)


# ---------------------------------------------------------------------------
# JSON distribution specs


def _need(params: dict, key: str):
    if key not in params:
        raise CharFnError(f"distribution spec missing parameter '{key}'")
    return params[key]


def _jump_from_spec(doc: dict):
    if not isinstance(doc, dict) or "kind" not in doc:
        raise CharFnError("jump law spec must be an object with a 'kind'")
    kind = doc["kind"]
    if kind == "point":
        return PointJump(float(_need(doc, "x")))
    if kind == "two_point":
        return TwoPointJump(float(_need(doc, "x1")), float(_need(doc, "x2")),
                            float(doc.get("w1", 0.5)))
    if kind == "uniform":
        return UniformJump(float(_need(doc, "a")), float(_need(doc, "b")))
    raise CharFnError(f"unknown jump law kind '{kind}'")


def _parse_endpoint(v) -> float:
    if isinstance(v, str):
        if v in ("inf", "+inf", "Infinity"):
            return math.inf
        if v == "-inf":
            return -math.inf
        raise CharFnError(f"bad support endpoint {v!r}")
    return float(v)


def _measure_from_spec(doc: dict):
    if not isinstance(doc, dict) or "kind" not in doc:
        raise CharFnError("measure spec must be an object with a 'kind'")
    kind = doc["kind"]
    if kind == "atoms":
        atoms = tuple((float(x), float(m)) for x, m in _need(doc, "atoms"))
        return AtomMeasure(atoms)
    if kind == "compound":
        return CompoundMeasure(float(_need(doc, "c")),
                               _jump_from_spec(_need(doc, "jump")))
    if kind == "density":
        # Density form coef * |x|^power * exp(-rate |x|) on one side or both.
        if doc.get("form", "power_exp") != "power_exp":
            raise CharFnError("only the 'power_exp' density form is supported")
        coef = float(_need(doc, "coef"))
        power = float(doc.get("power", 0.0))
        rate = float(doc.get("rate", 0.0))
        side = doc.get("side", "positive")
        if coef <= 0:
            raise CharFnError("density coefficient must be positive")

        def u(x):
            ax = abs(float(x))
            if ax == 0.0:
                return 0.0
            return coef * ax ** power * math.exp(-rate * ax)

        if side == "positive":
            support = ((0.0, math.inf),)
        elif side == "negative":
            support = ((-math.inf, 0.0),)
        elif side == "symmetric":
            support = ((-math.inf, 0.0), (0.0, math.inf))
        else:
            raise CharFnError(f"bad density side {side!r}")
        return DensityMeasure(u, support)
    raise CharFnError(f"unknown measure kind '{kind}'")


def charfn_from_spec(doc: dict) -> CharFn:
    """Build a CharFn from a JSON-style distribution document.

    Layout: {"family": <name>, "params": {...}}. Families: normal (m,
    sigma), cauchy (c, gamma), compound_poisson (c, jump), negative_binomial
    (c, p), hyperbolic_cosine (no params), gamma (c, alpha), and triplet
    (gamma, sigma2, measure).
    """
    if not isinstance(doc, dict) or "family" not in doc:
        raise CharFnError("distribution spec must be an object with a 'family'")
    family = doc["family"]
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise CharFnError("'params' must be an object")
    try:
        if family == "normal":
            return catalog_normal(float(_need(params, "m")),
                                  float(_need(params, "sigma")))
        if family == "cauchy":
            return catalog_cauchy(float(_need(params, "c")),
                                  float(_need(params, "gamma")))
        if family == "compound_poisson":
            return catalog_compound_poisson(float(_need(params, "c")),
                                            _jump_from_spec(_need(params, "jump")))
        if family == "negative_binomial":
            return catalog_negative_binomial(float(_need(params, "c")),
                                             float(_need(params, "p")))
        if family == "hyperbolic_cosine":
            return catalog_hyperbolic_cosine()
        if family == "gamma":
            return catalog_gamma(float(_need(params, "c")),
                                 float(_need(params, "alpha")))
        if family == "triplet":
            triplet = LevyTriplet(float(_need(params, "gamma")),
                                  float(_need(params, "sigma2")),
                                  _measure_from_spec(_need(params, "measure")))
            return charfn_from_triplet(triplet)
    except (TypeError, ValueError) as exc:
        raise CharFnError(f"bad parameter in distribution spec: {exc}")
    raise CharFnError(f"unknown distribution family '{family}'")
