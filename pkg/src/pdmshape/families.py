"""Catalog of shape-invariant superpotential / deforming-function families.

Each family packs the closed forms W(x; p) and f(x; p) with analytic
x-derivatives, the one-step parameter map of its shape-invariance chain, the
x-independent chain remainder R(p), a closed-form (unnormalized) ground
state, and the monotone coordinate map u(x) = int dx/f used by the
constant-mass discretization.  All x-callables accept scalars or numpy
arrays.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np
import sympy as sp

from .errors import (
    DomainError,
    InvalidParamsError,
    UnknownFamilyError,
    ValidityWarning,
)

INF = float("inf")

#: sympy coordinate symbol shared by all symbolic builders
X = sp.Symbol("x", real=True)


@dataclass(frozen=True)
class ParamSet:
    """Named real parameters of a family instance.

    ``lam`` is the superpotential strength, ``mu`` an optional second
    superpotential parameter, ``alpha`` the deforming parameter and ``beta``
    an optional second deforming parameter.  Families ignore the fields they
    do not use.
    """

    lam: float
    mu: Optional[float] = None
    alpha: float = 0.0
    beta: Optional[float] = None

    def astuple(self):
        return (self.lam, self.mu, self.alpha, self.beta)


@dataclass(frozen=True)
class DomainSpec:
    """Open interval on which a family's potentials are real and wall-like."""

    lower: float
    upper: float
    lower_kind: str  # "regular" | "singular-wall" | "decay-at-infinity"
    upper_kind: str
    grid_strategy: str  # "mapped" | "truncated"
    bc: str = "dirichlet"


@dataclass(frozen=True)
class FamilyValues:
    W: float
    Wx: float
    f: float
    fx: float
    fxx: float


@dataclass(frozen=True)
class PartnerValues:
    Vminus: float
    Vplus: float


@dataclass(frozen=True)
class EffectiveValues:
    Veff: float
    M: float


@dataclass(frozen=True)
class PotentialFamily:
    """Closed-form bundle for one shape-invariant family."""

    id: str
    label: str
    domain: DomainSpec
    susy_status: str  # "unbroken" | "regime-dependent"
    param_names: tuple
    W: Callable
    Wx: Callable
    f: Callable
    fx: Callable
    fxx: Callable
    step: Callable
    R: Callable
    validity: Callable  # ParamSet -> violation message or None
    log_psi0: Callable  # log of the unnormalized annihilated state
    u_of_x: Callable
    x_of_u: Callable
    u_bounds: Callable  # ParamSet -> (u_lo, u_hi), +-inf allowed
    step_offsets: Callable  # ParamSet -> (dlam, dmu) or None if non-affine
    spectrum_closed_form: Optional[Callable]  # (n, ParamSet) -> level
    ladder_coefficient_documented: Optional[Callable]  # tabulated [B+,R] coeff
    w_sym: Callable  # ParamSet -> sympy expr in X
    f_sym: Callable
    psi0_sym: Callable
    sampling_window: Callable  # ParamSet -> (lo, hi) for residual sampling

    def psi0(self, x, p):
        return np.exp(self.log_psi0(x, p))


# ---------------------------------------------------------------------------
# validity helpers


def _finite(*vals):
    return all(v is None or math.isfinite(v) for v in vals)


def violation(family: PotentialFamily, p: ParamSet) -> Optional[str]:
    """Return the violated constraint message, or None if ``p`` is valid."""
    if not _finite(*p.astuple()):
        return "parameters must be finite"
    return family.validity(p)


def validate_params(family: PotentialFamily, p: ParamSet) -> None:
    msg = violation(family, p)
    if msg is not None:
        raise InvalidParamsError(f"{family.id}: {msg}")


def check_in_domain(family: PotentialFamily, x) -> None:
    lo, hi = family.domain.lower, family.domain.upper
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise DomainError(f"{family.id}: x must be finite")
    if np.any(xa <= lo) or np.any(xa >= hi):
        raise DomainError(
            f"{family.id}: x must lie strictly inside ({lo}, {hi})"
        )


def domain_midpoint(family: PotentialFamily) -> float:
    lo, hi = family.domain.lower, family.domain.upper
    if math.isfinite(lo) and math.isfinite(hi):
        return 0.5 * (lo + hi)
    if math.isfinite(lo):
        return lo + 1.0
    if math.isfinite(hi):
        return hi - 1.0
    return 0.0


def _shrunk(lo, hi, frac=0.04):
    span = hi - lo
    return lo + frac * span, hi - frac * span


# ---------------------------------------------------------------------------
# family builders


def _build_ex1() -> PotentialFamily:
    # W = lam*x, f = 1 + alpha*x^2 on the whole line.  alpha = 0 is the
    # constant-mass oscillator limit and is allowed.
    def W(x, p):
        return p.lam * np.asarray(x, float)

    def Wx(x, p):
        return p.lam * np.ones_like(np.asarray(x, float))

    def f(x, p):
        x = np.asarray(x, float)
        return 1.0 + p.alpha * x * x

    def fx(x, p):
        return 2.0 * p.alpha * np.asarray(x, float)

    def fxx(x, p):
        return 2.0 * p.alpha * np.ones_like(np.asarray(x, float))

    def step(p):
        return replace(p, lam=p.lam + p.alpha)

    def R(p):
        return 2.0 * p.lam + p.alpha

    def validity(p):
        if p.alpha < 0:
            return "alpha must satisfy alpha >= 0"
        return None

    def log_psi0(x, p):
        x = np.asarray(x, float)
        if p.alpha == 0.0:
            return -0.5 * p.lam * x * x
        # log1p keeps precision for alpha*x^2 << 1
        return -(0.5 + p.lam / (2.0 * p.alpha)) * np.log1p(p.alpha * x * x)

    def u_of_x(x, p):
        x = np.asarray(x, float)
        if p.alpha == 0.0:
            return x + 0.0
        ra = math.sqrt(p.alpha)
        return np.arctan(ra * x) / ra

    def x_of_u(u, p):
        u = np.asarray(u, float)
        if p.alpha == 0.0:
            return u + 0.0
        ra = math.sqrt(p.alpha)
        return np.tan(ra * u) / ra

    def u_bounds(p):
        if p.alpha == 0.0:
            return (-INF, INF)
        half = math.pi / (2.0 * math.sqrt(p.alpha))
        return (-half, half)

    def w_sym(p):
        return p.lam * X

    def f_sym(p):
        return 1 + p.alpha * X**2

    def psi0_sym(p):
        if p.alpha == 0.0:
            return sp.exp(-sp.Rational(1, 2) * p.lam * X**2)
        return (1 + p.alpha * X**2) ** (-(0.5 + p.lam / (2.0 * p.alpha)))

    return PotentialFamily(
        id="ex1",
        label="linear superpotential, quadratic mass deformation",
        domain=DomainSpec(-INF, INF, "decay-at-infinity", "decay-at-infinity",
                          "mapped"),
        susy_status="unbroken",
        param_names=("lam", "alpha"),
        W=W, Wx=Wx, f=f, fx=fx, fxx=fxx,
        step=step, R=R, validity=validity, log_psi0=log_psi0,
        u_of_x=u_of_x, x_of_u=x_of_u, u_bounds=u_bounds,
        step_offsets=lambda p: (p.alpha, None),
        spectrum_closed_form=lambda n, p: 2.0 * n * p.lam + n * n * p.alpha,
        ladder_coefficient_documented=lambda p: 2.0 * p.alpha,
        w_sym=w_sym, f_sym=f_sym, psi0_sym=psi0_sym,
        sampling_window=lambda p: (-8.0, 8.0),
    )


def _build_ex2() -> PotentialFamily:
    # W = lam*tan(x) + mu*sec(x), f = 1 + alpha*sin(x) on (-pi/2, pi/2).
    def W(x, p):
        x = np.asarray(x, float)
        return p.lam * np.tan(x) + p.mu / np.cos(x)

    def Wx(x, p):
        x = np.asarray(x, float)
        sec = 1.0 / np.cos(x)
        return p.lam * sec * sec + p.mu * sec * np.tan(x)

    def f(x, p):
        return 1.0 + p.alpha * np.sin(np.asarray(x, float))

    def fx(x, p):
        return p.alpha * np.cos(np.asarray(x, float))

    def fxx(x, p):
        return -p.alpha * np.sin(np.asarray(x, float))

    def step(p):
        return replace(p, lam=p.lam + 1.0, mu=p.mu + p.alpha)

    def R(p):
        return 2.0 * p.lam + 1.0 - p.alpha * (2.0 * p.mu + p.alpha)

    def validity(p):
        if p.mu is None:
            return "mu is required"
        if not (-1.0 < p.alpha < 1.0):
            return "alpha must satisfy -1 < alpha < 1"
        return None

    def _exponents(p):
        c = (p.lam - p.mu) / (2.0 * (1.0 - p.alpha))
        d = (p.lam + p.mu) / (2.0 * (1.0 + p.alpha))
        a = -0.5 - c - d
        return a, c, d

    def log_psi0(x, p):
        x = np.asarray(x, float)
        a, c, d = _exponents(p)
        s = np.sin(x)
        return (a * np.log1p(p.alpha * s) + c * np.log1p(s)
                + d * np.log1p(-s))

    def u_of_x(x, p):
        x = np.asarray(x, float)
        r = math.sqrt(1.0 - p.alpha * p.alpha)
        t = np.tan(0.5 * x)
        return (2.0 / r) * (np.arctan((t + p.alpha) / r)
                            - math.atan(p.alpha / r))

    def x_of_u(u, p):
        u = np.asarray(u, float)
        r = math.sqrt(1.0 - p.alpha * p.alpha)
        phi = 0.5 * r * u + math.atan(p.alpha / r)
        t = r * np.tan(phi) - p.alpha
        return 2.0 * np.arctan(t)

    def u_bounds(p):
        r = math.sqrt(1.0 - p.alpha * p.alpha)
        off = math.atan(p.alpha / r)
        return ((2.0 / r) * (math.atan((-1.0 + p.alpha) / r) - off),
                (2.0 / r) * (math.atan((1.0 + p.alpha) / r) - off))

    def w_sym(p):
        return p.lam * sp.tan(X) + p.mu / sp.cos(X)

    def f_sym(p):
        return 1 + p.alpha * sp.sin(X)

    def psi0_sym(p):
        a, c, d = _exponents(p)
        s = sp.sin(X)
        return (1 + p.alpha * s) ** a * (1 + s) ** c * (1 - s) ** d

    return PotentialFamily(
        id="ex2",
        label="tangent-secant superpotential, sine mass deformation",
        domain=DomainSpec(-math.pi / 2, math.pi / 2, "singular-wall",
                          "singular-wall", "mapped"),
        susy_status="unbroken",
        param_names=("lam", "mu", "alpha"),
        W=W, Wx=Wx, f=f, fx=fx, fxx=fxx,
        step=step, R=R, validity=validity, log_psi0=log_psi0,
        u_of_x=u_of_x, x_of_u=x_of_u, u_bounds=u_bounds,
        step_offsets=lambda p: (1.0, p.alpha),
        spectrum_closed_form=lambda n, p: (n * n * (1.0 - p.alpha ** 2)
                                           + 2.0 * n * (p.lam - p.alpha * p.mu)),
        ladder_coefficient_documented=lambda p: 2.0 * (1.0 - p.alpha ** 2),
        w_sym=w_sym, f_sym=f_sym, psi0_sym=psi0_sym,
        sampling_window=lambda p: _shrunk(-math.pi / 2, math.pi / 2),
    )


def _build_t1r1() -> PotentialFamily:
    # W = lam/x + mu*x, f = alpha*x^2 + 1 on (0, inf).  Supersymmetry is
    # unbroken for lam < 0 and broken for lam > 0, mu > -alpha; both regimes
    # share the same closed forms.
    def W(x, p):
        x = np.asarray(x, float)
        return p.lam / x + p.mu * x

    def Wx(x, p):
        x = np.asarray(x, float)
        return -p.lam / (x * x) + p.mu

    def f(x, p):
        x = np.asarray(x, float)
        return p.alpha * x * x + 1.0

    def fx(x, p):
        return 2.0 * p.alpha * np.asarray(x, float)

    def fxx(x, p):
        return 2.0 * p.alpha * np.ones_like(np.asarray(x, float))

    def step(p):
        return replace(p, lam=p.lam - 1.0, mu=p.mu + p.alpha)

    def R(p):
        return -4.0 * (p.alpha * p.lam - p.mu - p.alpha)

    def validity(p):
        if p.mu is None:
            return "mu is required"
        if p.alpha <= 0:
            return "alpha must satisfy alpha > 0"
        return None

    def log_psi0(x, p):
        x = np.asarray(x, float)
        expo = 0.5 * (p.lam - 1.0) - p.mu / (2.0 * p.alpha)
        return -p.lam * np.log(x) + expo * np.log1p(p.alpha * x * x)

    def u_of_x(x, p):
        x = np.asarray(x, float)
        ra = math.sqrt(p.alpha)
        return np.arctan(ra * x) / ra

    def x_of_u(u, p):
        u = np.asarray(u, float)
        ra = math.sqrt(p.alpha)
        return np.tan(ra * u) / ra

    def u_bounds(p):
        return (0.0, math.pi / (2.0 * math.sqrt(p.alpha)))

    def w_sym(p):
        return p.lam / X + p.mu * X

    def f_sym(p):
        return p.alpha * X**2 + 1

    def psi0_sym(p):
        expo = 0.5 * (p.lam - 1.0) - p.mu / (2.0 * p.alpha)
        return X ** (-p.lam) * (p.alpha * X**2 + 1) ** expo

    return PotentialFamily(
        id="t1r1",
        label="inverse-linear plus linear superpotential, quadratic mass deformation",
        domain=DomainSpec(0.0, INF, "singular-wall", "decay-at-infinity",
                          "mapped"),
        susy_status="regime-dependent",
        param_names=("lam", "mu", "alpha"),
        W=W, Wx=Wx, f=f, fx=fx, fxx=fxx,
        step=step, R=R, validity=validity, log_psi0=log_psi0,
        u_of_x=u_of_x, x_of_u=x_of_u, u_bounds=u_bounds,
        step_offsets=lambda p: (-1.0, p.alpha),
        spectrum_closed_form=None,
        ladder_coefficient_documented=lambda p: 8.0 * p.alpha,
        w_sym=w_sym, f_sym=f_sym, psi0_sym=psi0_sym,
        sampling_window=lambda p: (0.3, 10.0),
    )


def _build_t1r2() -> PotentialFamily:
    # W = lam*tan(x), f = 1 + alpha*sin(x)^2 on (-pi/2, pi/2).
    def W(x, p):
        return p.lam * np.tan(np.asarray(x, float))

    def Wx(x, p):
        sec = 1.0 / np.cos(np.asarray(x, float))
        return p.lam * sec * sec

    def f(x, p):
        s = np.sin(np.asarray(x, float))
        return 1.0 + p.alpha * s * s

    def fx(x, p):
        return p.alpha * np.sin(2.0 * np.asarray(x, float))

    def fxx(x, p):
        return 2.0 * p.alpha * np.cos(2.0 * np.asarray(x, float))

    def step(p):
        return replace(p, lam=p.lam + p.alpha + 1.0)

    def R(p):
        return 2.0 * p.lam + p.alpha + 1.0

    def validity(p):
        if p.lam <= 0:
            return "lambda must satisfy lambda > 0"
        if p.alpha <= -1.0:
            return "alpha must satisfy alpha > -1"
        return None

    def log_psi0(x, p):
        x = np.asarray(x, float)
        q = p.lam / (1.0 + p.alpha)
        s = np.sin(x)
        return (q * np.log(np.cos(x))
                - 0.5 * (1.0 + q) * np.log1p(p.alpha * s * s))

    def u_of_x(x, p):
        x = np.asarray(x, float)
        g = math.sqrt(1.0 + p.alpha)
        return np.arctan(g * np.tan(x)) / g

    def x_of_u(u, p):
        u = np.asarray(u, float)
        g = math.sqrt(1.0 + p.alpha)
        return np.arctan(np.tan(g * u) / g)

    def u_bounds(p):
        g = math.sqrt(1.0 + p.alpha)
        return (-math.pi / (2.0 * g), math.pi / (2.0 * g))

    def w_sym(p):
        return p.lam * sp.tan(X)

    def f_sym(p):
        return 1 + p.alpha * sp.sin(X) ** 2

    def psi0_sym(p):
        q = p.lam / (1.0 + p.alpha)
        return (sp.cos(X) ** q
                * (1 + p.alpha * sp.sin(X) ** 2) ** (-0.5 * (1.0 + q)))

    return PotentialFamily(
        id="t1r2",
        label="tangent superpotential, sine-squared mass deformation",
        domain=DomainSpec(-math.pi / 2, math.pi / 2, "singular-wall",
                          "singular-wall", "mapped"),
        susy_status="unbroken",
        param_names=("lam", "alpha"),
        W=W, Wx=Wx, f=f, fx=fx, fxx=fxx,
        step=step, R=R, validity=validity, log_psi0=log_psi0,
        u_of_x=u_of_x, x_of_u=x_of_u, u_bounds=u_bounds,
        step_offsets=lambda p: (p.alpha + 1.0, None),
        spectrum_closed_form=None,
        ladder_coefficient_documented=lambda p: 2.0 * (1.0 + p.alpha),
        w_sym=w_sym, f_sym=f_sym, psi0_sym=psi0_sym,
        sampling_window=lambda p: _shrunk(-math.pi / 2, math.pi / 2),
    )


def _build_t1r3() -> PotentialFamily:
    # W = lam*cot(x), f = 1 + beta*sin(x)^2 on (0, pi).
    def W(x, p):
        return p.lam / np.tan(np.asarray(x, float))

    def Wx(x, p):
        s = np.sin(np.asarray(x, float))
        return -p.lam / (s * s)

    def f(x, p):
        s = np.sin(np.asarray(x, float))
        return 1.0 + p.beta * s * s

    def fx(x, p):
        return p.beta * np.sin(2.0 * np.asarray(x, float))

    def fxx(x, p):
        return 2.0 * p.beta * np.cos(2.0 * np.asarray(x, float))

    def step(p):
        return replace(p, lam=p.lam - 1.0)

    def R(p):
        return -(1.0 + p.beta) * (2.0 * p.lam - 1.0)

    def validity(p):
        if p.beta is None:
            return "beta is required"
        if p.lam >= 0:
            return "lambda must satisfy lambda < 0"
        if p.beta <= -1.0:
            return "beta must satisfy beta > -1"
        return None

    def log_psi0(x, p):
        x = np.asarray(x, float)
        s = np.sin(x)
        return (-p.lam * np.log(s)
                + 0.5 * (p.lam - 1.0) * np.log1p(p.beta * s * s))

    def u_of_x(x, p):
        x = np.asarray(x, float)
        g = math.sqrt(1.0 + p.beta)
        base = np.arctan(g * np.tan(x))
        return (base + math.pi * (x > math.pi / 2)) / g

    def x_of_u(u, p):
        u = np.asarray(u, float)
        g = math.sqrt(1.0 + p.beta)
        v = g * u
        return np.arctan(np.tan(v) / g) + math.pi * (v > math.pi / 2)

    def u_bounds(p):
        g = math.sqrt(1.0 + p.beta)
        return (0.0, math.pi / g)

    def w_sym(p):
        return p.lam * sp.cot(X)

    def f_sym(p):
        return 1 + p.beta * sp.sin(X) ** 2

    def psi0_sym(p):
        s = sp.sin(X)
        return s ** (-p.lam) * (1 + p.beta * s**2) ** (0.5 * (p.lam - 1.0))

    return PotentialFamily(
        id="t1r3",
        label="cotangent superpotential, sine-squared mass deformation",
        domain=DomainSpec(0.0, math.pi, "singular-wall", "singular-wall",
                          "mapped"),
        susy_status="unbroken",
        param_names=("lam", "beta"),
        W=W, Wx=Wx, f=f, fx=fx, fxx=fxx,
        step=step, R=R, validity=validity, log_psi0=log_psi0,
        u_of_x=u_of_x, x_of_u=x_of_u, u_bounds=u_bounds,
        step_offsets=lambda p: (-1.0, None),
        spectrum_closed_form=None,
        ladder_coefficient_documented=lambda p: 2.0 * (1.0 + p.beta),
        w_sym=w_sym, f_sym=f_sym, psi0_sym=psi0_sym,
        sampling_window=lambda p: _shrunk(0.0, math.pi),
    )


def _build_t1r4() -> PotentialFamily:
    # W = lam*coth(x), f = 1 + alpha*sinh(x)^2 on (0, inf).  The transformed
    # potential tends to the finite constant lam*(lam+alpha) at the far end,
    # so the default grid strategy is a truncated x-grid.
    def W(x, p):
        return p.lam / np.tanh(np.asarray(x, float))

    def Wx(x, p):
        s = np.sinh(np.asarray(x, float))
        return -p.lam / (s * s)

    def f(x, p):
        s = np.sinh(np.asarray(x, float))
        return 1.0 + p.alpha * s * s

    def fx(x, p):
        return p.alpha * np.sinh(2.0 * np.asarray(x, float))

    def fxx(x, p):
        return 2.0 * p.alpha * np.cosh(2.0 * np.asarray(x, float))

    def step(p):
        return replace(p, lam=p.lam - 1.0)

    def R(p):
        return (1.0 - p.alpha) * (2.0 * p.lam - 1.0)

    def validity(p):
        if p.lam >= 0:
            return "lambda must satisfy lambda < 0"
        if p.alpha <= 0:
            return "alpha must satisfy alpha > 0"
        return None

    def log_psi0(x, p):
        x = np.asarray(x, float)
        s = np.sinh(x)
        return (-p.lam * np.log(s)
                + 0.5 * (p.lam - 1.0) * np.log1p(p.alpha * s * s))

    def u_of_x(x, p):
        x = np.asarray(x, float)
        w = np.tanh(x)
        if p.alpha == 1.0:
            return w
        if p.alpha < 1.0:
            g = math.sqrt(1.0 - p.alpha)
            return np.arctanh(g * w) / g
        g = math.sqrt(p.alpha - 1.0)
        return np.arctan(g * w) / g

    def x_of_u(u, p):
        u = np.asarray(u, float)
        if p.alpha == 1.0:
            w = u
        elif p.alpha < 1.0:
            g = math.sqrt(1.0 - p.alpha)
            w = np.tanh(g * u) / g
        else:
            g = math.sqrt(p.alpha - 1.0)
            w = np.tan(g * u) / g
        return np.arctanh(w)

    def u_bounds(p):
        if p.alpha == 1.0:
            return (0.0, 1.0)
        if p.alpha < 1.0:
            g = math.sqrt(1.0 - p.alpha)
            return (0.0, math.atanh(g) / g)
        g = math.sqrt(p.alpha - 1.0)
        return (0.0, math.atan(g) / g)

    def w_sym(p):
        return p.lam * sp.coth(X)

    def f_sym(p):
        return 1 + p.alpha * sp.sinh(X) ** 2

    def psi0_sym(p):
        s = sp.sinh(X)
        return s ** (-p.lam) * (1 + p.alpha * s**2) ** (0.5 * (p.lam - 1.0))

    return PotentialFamily(
        id="t1r4",
        label="hyperbolic-cotangent superpotential, sinh-squared mass deformation",
        domain=DomainSpec(0.0, INF, "singular-wall", "decay-at-infinity",
                          "truncated"),
        susy_status="unbroken",
        param_names=("lam", "alpha"),
        W=W, Wx=Wx, f=f, fx=fx, fxx=fxx,
        step=step, R=R, validity=validity, log_psi0=log_psi0,
        u_of_x=u_of_x, x_of_u=x_of_u, u_bounds=u_bounds,
        step_offsets=lambda p: (-1.0, None),
        spectrum_closed_form=None,
        ladder_coefficient_documented=lambda p: p.alpha - 1.0,
        w_sym=w_sym, f_sym=f_sym, psi0_sym=psi0_sym,
        sampling_window=lambda p: (0.3, 10.0),
    )


def _gen2_mu_step(p: ParamSet) -> float:
    # one-step mu map from matching the x-coefficients of the partner
    # potentials; the constant term then yields R
    return (p.lam * p.mu + 2.0 * p.beta * p.lam + p.alpha * p.beta) / (
        p.lam + p.alpha)


def _build_gen2() -> PotentialFamily:
    # W = lam*x + mu, f = alpha*x^2 + 2*beta*x + 1 on the whole line.  The
    # lam chain is affine (step alpha) but the mu chain is not, so this
    # family is excluded from the fixed-shift parameter lattice.
    def W(x, p):
        return p.lam * np.asarray(x, float) + p.mu

    def Wx(x, p):
        return p.lam * np.ones_like(np.asarray(x, float))

    def f(x, p):
        x = np.asarray(x, float)
        return p.alpha * x * x + 2.0 * p.beta * x + 1.0

    def fx(x, p):
        return 2.0 * p.alpha * np.asarray(x, float) + 2.0 * p.beta

    def fxx(x, p):
        return 2.0 * p.alpha * np.ones_like(np.asarray(x, float))

    def step(p):
        return replace(p, lam=p.lam + p.alpha, mu=_gen2_mu_step(p))

    def R(p):
        q = step(p)
        return p.mu * p.mu - q.mu * q.mu + p.lam + q.lam

    def validity(p):
        if p.mu is None:
            return "mu is required"
        if p.beta is None:
            return "beta is required"
        if p.alpha <= 0:
            return "alpha must satisfy alpha > 0"
        if p.beta * p.beta >= p.alpha:
            return "beta must satisfy beta**2 < alpha"
        if p.lam <= 0:
            return "lambda must satisfy lambda > 0"
        return None

    def _kappa(p):
        s = math.sqrt(p.alpha - p.beta * p.beta)
        return (p.mu - p.lam * p.beta / p.alpha) / s, s

    def log_psi0(x, p):
        x = np.asarray(x, float)
        kap, s = _kappa(p)
        fv = p.alpha * x * x + 2.0 * p.beta * x + 1.0
        return (-(0.5 + p.lam / (2.0 * p.alpha)) * np.log(fv)
                - kap * np.arctan((p.alpha * x + p.beta) / s))

    def u_of_x(x, p):
        x = np.asarray(x, float)
        s = math.sqrt(p.alpha - p.beta * p.beta)
        return (np.arctan((p.alpha * x + p.beta) / s)
                - math.atan(p.beta / s)) / s

    def x_of_u(u, p):
        u = np.asarray(u, float)
        s = math.sqrt(p.alpha - p.beta * p.beta)
        return (s * np.tan(s * u + math.atan(p.beta / s)) - p.beta) / p.alpha

    def u_bounds(p):
        s = math.sqrt(p.alpha - p.beta * p.beta)
        off = math.atan(p.beta / s)
        return ((-math.pi / 2 - off) / s, (math.pi / 2 - off) / s)

    def w_sym(p):
        return p.lam * X + p.mu

    def f_sym(p):
        return p.alpha * X**2 + 2 * p.beta * X + 1

    def psi0_sym(p):
        kap, s = _kappa(p)
        fv = p.alpha * X**2 + 2 * p.beta * X + 1
        return (fv ** (-(0.5 + p.lam / (2.0 * p.alpha)))
                * sp.exp(-kap * sp.atan((p.alpha * X + p.beta) / s)))

    return PotentialFamily(
        id="gen2",
        label="affine superpotential, general positive quadratic mass deformation",
        domain=DomainSpec(-INF, INF, "decay-at-infinity", "decay-at-infinity",
                          "mapped"),
        susy_status="unbroken",
        param_names=("lam", "mu", "alpha", "beta"),
        W=W, Wx=Wx, f=f, fx=fx, fxx=fxx,
        step=step, R=R, validity=validity, log_psi0=log_psi0,
        u_of_x=u_of_x, x_of_u=x_of_u, u_bounds=u_bounds,
        step_offsets=lambda p: None,
        spectrum_closed_form=None,
        ladder_coefficient_documented=None,
        w_sym=w_sym, f_sym=f_sym, psi0_sym=psi0_sym,
        sampling_window=lambda p: (-8.0, 8.0),
    )


_CATALOG = None


def catalog() -> dict:
    """Return the fixed family catalog keyed by family id."""
    global _CATALOG
    if _CATALOG is None:
        fams = [_build_ex1(), _build_ex2(), _build_t1r1(), _build_t1r2(),
                _build_t1r3(), _build_t1r4(), _build_gen2()]
        _CATALOG = {fam.id: fam for fam in fams}
    return _CATALOG


def get_family(fid: str) -> PotentialFamily:
    try:
        return catalog()[fid]
    except KeyError:
        known = ", ".join(catalog())
        raise UnknownFamilyError(
            f"unknown family {fid!r}; known families: {known}") from None


# ---------------------------------------------------------------------------
# elementary operations


def evaluate_family(family: PotentialFamily, p: ParamSet, x) -> FamilyValues:
    """Closed-form W, f and their analytic derivatives at x."""
    validate_params(family, p)
    check_in_domain(family, x)
    return FamilyValues(
        W=family.W(x, p), Wx=family.Wx(x, p),
        f=family.f(x, p), fx=family.fx(x, p), fxx=family.fxx(x, p),
    )


def partner_potentials(family: PotentialFamily, p: ParamSet, x) -> PartnerValues:
    """Pointwise partner pair V_-+ = W^2 -+ f W'."""
    v = evaluate_family(family, p, x)
    fw = v.f * v.Wx
    w2 = v.W * v.W
    return PartnerValues(Vminus=w2 - fw, Vplus=w2 + fw)


def effective_potential(family: PotentialFamily, p: ParamSet, which: str,
                        x) -> EffectiveValues:
    """Effective potential and mass of the divergence-form problem.

    Veff = V_which - f f''/2 - f'^2/4 and M = f^-2; with these the deformed
    Hamiltonian reads -d/dx (1/M) d/dx + Veff.
    """
    v = evaluate_family(family, p, x)
    pv = partner_potentials(family, p, x)
    vw = pv.Vminus if which == "minus" else pv.Vplus
    veff = vw - 0.5 * v.f * v.fxx - 0.25 * v.fx * v.fx
    return EffectiveValues(Veff=veff, M=1.0 / (v.f * v.f))


def step_params(family: PotentialFamily, p: ParamSet) -> ParamSet:
    """One step of the shape-invariance parameter chain.

    Stepping outside the validity region is flagged with a ValidityWarning
    but still returns the stepped values, so truncation logic can observe
    where a chain exits.
    """
    validate_params(family, p)
    q = family.step(p)
    msg = violation(family, q)
    if msg is not None:
        warnings.warn(
            f"{family.id}: step left validity region ({msg})",
            ValidityWarning, stacklevel=2)
    return q


def R_of(family: PotentialFamily, p: ParamSet) -> float:
    """Shape-invariance remainder evaluated at p."""
    validate_params(family, p)
    return float(family.R(p))


def step_offsets(family: PotentialFamily, p: ParamSet):
    """Per-step (dlam, dmu) increments, or None if the map is not affine."""
    return family.step_offsets(p)


def susy_regime(family: PotentialFamily, p: ParamSet) -> str:
    """Classify p as 'unbroken', 'broken' or 'unsupported'."""
    validate_params(family, p)
    if family.id != "t1r1":
        return "unbroken"
    if p.lam < 0:
        return "unbroken"
    if p.lam > 0 and p.mu > -p.alpha:
        return "broken"
    return "unsupported"


def sample_params(family: PotentialFamily, rng) -> ParamSet:
    """Draw a random valid ParamSet (used by verification suites)."""
    fid = family.id
    u = rng.uniform
    if fid == "ex1":
        return ParamSet(lam=u(0.5, 3.0), alpha=u(0.1, 2.0))
    if fid == "ex2":
        return ParamSet(lam=u(1.5, 3.0), mu=u(-1.0, 1.0), alpha=u(-0.8, 0.8))
    if fid == "t1r1":
        alpha = u(0.2, 2.0)
        return ParamSet(lam=u(-3.0, -1.2), mu=alpha + u(0.2, 2.0), alpha=alpha)
    if fid == "t1r2":
        return ParamSet(lam=u(0.5, 3.0), alpha=u(-0.7, 2.0))
    if fid == "t1r3":
        return ParamSet(lam=u(-3.0, -0.7), beta=u(-0.7, 2.0))
    if fid == "t1r4":
        return ParamSet(lam=u(-3.0, -1.2), alpha=u(0.2, 3.0))
    if fid == "gen2":
        alpha = u(0.2, 1.5)
        beta = 0.9 * math.sqrt(alpha) * u(-1.0, 1.0)
        return ParamSet(lam=u(0.5, 2.0), mu=u(-1.0, 1.0), alpha=alpha,
                        beta=beta)
    raise UnknownFamilyError(fid)
