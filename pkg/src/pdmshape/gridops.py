"""Grids, discretized Hamiltonians and ladder-operator application.

Two interchangeable discretizations of the deformed Hamiltonian act as
mutual oracles: the divergence (flux) form -d/dx f^2 d/dx + Veff on a
uniform x-grid, and the unitarily equivalent constant-mass form
-d^2/du^2 + V(x(u)) on a uniform grid in the mapped coordinate
u = int dx/f, acting on phi = f^(1/2) psi.  Dirichlet walls are imposed at
both ends in either mode; grid nodes are strictly interior.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import sympy as sp
from scipy.optimize import brentq

from . import families as fam
from .errors import GridError, RegimeError
from .families import ParamSet, PotentialFamily, X

_trapz = getattr(np, "trapezoid", None) or np.trapz

#: amplitude ratio below which the closed-form ground state is treated as
#: vanished when searching for a truncation wall
TRUNCATION_RATIO = 1e-12
_LOG_TRUNC = math.log(TRUNCATION_RATIO)


@dataclass(frozen=True)
class Grid:
    """Strictly interior nodes of a 1-D Dirichlet problem.

    ``spacing`` is uniform in the working coordinate: x itself for
    "direct-x" grids, u for "mapped-u" grids (whose x-nodes are then
    non-uniform).  ``bounds`` are the wall positions in the working
    coordinate.
    """

    nodes: np.ndarray
    spacing: float
    coordinate: str  # "direct-x" | "mapped-u"
    family_id: str
    params: ParamSet
    bounds: tuple
    u_nodes: Optional[np.ndarray] = None

    @property
    def size(self):
        return len(self.nodes)


@dataclass(frozen=True)
class GridFunction:
    grid: Grid
    values: np.ndarray

    def norm(self) -> float:
        """Plain dx-norm via the trapezoid rule."""
        return math.sqrt(float(_trapz(self.values**2, self.grid.nodes)))

    def normalized(self) -> "GridFunction":
        n = self.norm()
        if not (n > 0 and math.isfinite(n)):
            raise GridError("cannot normalize: norm is zero or non-finite")
        return GridFunction(self.grid, self.values / n)


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix with Dirichlet ends."""

    diag: np.ndarray
    offdiag: np.ndarray
    grid: Grid
    which: str  # "Hminus" | "Hplus"

    def apply(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out


# ---------------------------------------------------------------------------
# grid construction


def _truncation_wall(family, p, x_peak, log_peak, side, lo, hi):
    """Find the point past x_peak where log psi0 drops TRUNCATION_RATIO
    below its maximum.  ``side`` is +1 for the upper end, -1 for the lower.
    """
    target = log_peak + _LOG_TRUNC

    def g(x):
        return float(family.log_psi0(x, p)) - target

    step = 1.0
    x0 = x_peak
    x1 = x_peak + side * step
    for _ in range(80):
        inside = (lo < x1 < hi)
        if inside and g(x1) > 0:
            x0, x1 = x1, x1 + side * step
            step *= 2.0
            if abs(x1) > 1e6:
                raise GridError(
                    f"{family.id}: no truncation wall within 1e6 length units")
            continue
        if not inside:
            x1 = lo if side < 0 else hi
            if not math.isfinite(x1):
                raise GridError(
                    f"{family.id}: no truncation wall within 1e6 length units")
            return x1
        return brentq(g, min(x0, x1), max(x0, x1), xtol=1e-10)
    raise GridError(f"{family.id}: truncation wall search did not converge")


def truncation_window(family: PotentialFamily, p: ParamSet):
    """x-interval whose walls satisfy |psi0| < 1e-12 * max |psi0|.

    Finite domain endpoints are kept as walls; infinite ends are replaced by
    the first point where the closed-form ground state has decayed.
    """
    lo, hi = family.domain.lower, family.domain.upper
    slo = lo if math.isfinite(lo) else min(-8.0, -1.0)
    shi = hi if math.isfinite(hi) else max(8.0, 1.0)
    if math.isfinite(lo):
        slo = lo + 1e-9 * (shi - lo if math.isfinite(hi) else 1.0)
    xs = np.linspace(slo, shi, 4097)[1:-1]
    logs = family.log_psi0(xs, p)
    if not np.all(np.isfinite(logs)):
        raise GridError(f"{family.id}: ground state not evaluable on domain")
    i = int(np.argmax(logs))
    x_peak, log_peak = float(xs[i]), float(logs[i])
    x_lo = lo if math.isfinite(lo) else _truncation_wall(
        family, p, x_peak, log_peak, -1, lo, hi)
    x_hi = hi if math.isfinite(hi) else _truncation_wall(
        family, p, x_peak, log_peak, +1, lo, hi)
    return x_lo, x_hi


def _check_numerics_regime(family, p):
    # inverse-square wall must be repulsive and the far end confining,
    # otherwise the Dirichlet discretization is not meaningful
    if family.id == "t1r1":
        if p.lam * (p.lam + 1.0) <= 0:
            raise RegimeError(
                "t1r1 numerics require lam*(lam+1) > 0 (repulsive wall)")
        if p.mu * (p.mu - p.alpha) <= 0:
            raise RegimeError(
                "t1r1 numerics require mu*(mu-alpha) > 0 (confining far end)")


def build_grid(family: PotentialFamily, p: ParamSet, N: int,
               strategy_override: Optional[str] = None,
               window: Optional[tuple] = None) -> Grid:
    """Build an N-node grid for the family's working coordinate.

    "mapped" places a uniform grid in u = int dx/f between the u-images of
    the domain walls (tightened by the ground-state truncation rule when the
    image is infinite or the decayed window is smaller).  "truncated" places
    a uniform x-grid; infinite ends are cut where the closed-form ground
    state has decayed below 1e-12 of its peak.  ``window`` overrides the
    wall search entirely (working coordinate: x).
    """
    fam.validate_params(family, p)
    if N < 16:
        raise GridError("N must be at least 16")
    strategy = strategy_override or family.domain.grid_strategy
    _check_numerics_regime(family, p)

    if strategy == "truncated":
        if window is not None:
            x_lo, x_hi = window
        else:
            x_lo, x_hi = truncation_window(family, p)
        if not (math.isfinite(x_lo) and math.isfinite(x_hi) and x_lo < x_hi):
            raise GridError(f"invalid truncated window ({x_lo}, {x_hi})")
        h = (x_hi - x_lo) / (N + 1)
        nodes = x_lo + h * np.arange(1, N + 1)
        return Grid(nodes=nodes, spacing=h, coordinate="direct-x",
                    family_id=family.id, params=p, bounds=(x_lo, x_hi))

    if strategy != "mapped":
        raise GridError(f"unknown grid strategy {strategy!r}")

    u_lo, u_hi = family.u_bounds(p)
    if window is not None:
        u_lo = max(u_lo, float(family.u_of_x(window[0], p)))
        u_hi = min(u_hi, float(family.u_of_x(window[1], p)))
    else:
        try:
            x_lo, x_hi = truncation_window(family, p)
            u_lo = max(u_lo, float(family.u_of_x(x_lo, p)))
            u_hi = min(u_hi, float(family.u_of_x(x_hi, p)))
        except GridError:
            if not (math.isfinite(u_lo) and math.isfinite(u_hi)):
                raise
    if not (math.isfinite(u_lo) and math.isfinite(u_hi) and u_lo < u_hi):
        raise GridError(f"invalid mapped window ({u_lo}, {u_hi})")
    h = (u_hi - u_lo) / (N + 1)
    u_nodes = u_lo + h * np.arange(1, N + 1)
    nodes = np.asarray(family.x_of_u(u_nodes, p), dtype=float)
    if not (np.all(np.isfinite(nodes)) and np.all(np.diff(nodes) > 0)):
        raise GridError("mapped nodes are not finite and increasing")
    return Grid(nodes=nodes, spacing=h, coordinate="mapped-u",
                family_id=family.id, params=p, bounds=(u_lo, u_hi),
                u_nodes=u_nodes)


# ---------------------------------------------------------------------------
# Hamiltonian discretization


def discretize_hamiltonian(family: PotentialFamily, p: ParamSet, which: str,
                           grid: Grid) -> TridiagonalOperator:
    """Symmetric tridiagonal discretization of the deformed Hamiltonian.

    direct-x grids get the O(h^2) flux form with g = f^2 evaluated
    analytically at cell midpoints:

        diag_i = (g_{i-1/2} + g_{i+1/2}) / h^2 + Veff(x_i)
        off_i  = -g_{i+1/2} / h^2

    mapped-u grids get the constant-mass form 2/h^2 + V_which(x(u_i)) with
    off-diagonal -1/h^2.
    """
    if which not in ("minus", "plus"):
        raise GridError(f"which must be 'minus' or 'plus', got {which!r}")
    if grid.family_id != family.id or grid.params != p:
        raise GridError("grid was built for a different family or parameters")
    h = grid.spacing
    if grid.coordinate == "direct-x":
        xm = np.concatenate([[grid.nodes[0] - 0.5 * h],
                             grid.nodes + 0.5 * h])
        g = family.f(xm, p) ** 2
        veff = fam.effective_potential(family, p, which, grid.nodes).Veff
        diag = (g[:-1] + g[1:]) / h**2 + veff
        off = -g[1:-1] / h**2
    else:
        v = fam.partner_potentials(family, p, grid.nodes)
        pot = v.Vminus if which == "minus" else v.Vplus
        diag = 2.0 / h**2 + pot
        off = np.full(grid.size - 1, -1.0 / h**2)
    if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(off))):
        raise GridError("potential is non-finite at an interior node")
    return TridiagonalOperator(diag=diag, offdiag=off, grid=grid,
                               which="Hminus" if which == "minus" else "Hplus")


# ---------------------------------------------------------------------------
# ladder application (finite-difference and exact-derivative paths)


def _diff4(v: np.ndarray, h: float) -> np.ndarray:
    """First derivative: 4th-order central stencil, one-sided at the ends."""
    d = np.empty_like(v)
    d[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)
    d[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h)
    d[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / (12 * h)
    d[-2] = (3 * v[-1] + 10 * v[-2] - 18 * v[-3] + 6 * v[-4] - v[-5]) / (12 * h)
    d[-1] = (25 * v[-1] - 48 * v[-2] + 36 * v[-3] - 16 * v[-4] + 3 * v[-5]) / (12 * h)
    return d


def apply_ladder(family: PotentialFamily, p: ParamSet, sign: str,
                 psi: GridFunction) -> GridFunction:
    """Apply a factorization operator to a grid function.

    sign "minus" gives  f psi' + f'/2 psi + W psi   (the annihilator),
    sign "plus"  gives -f psi' - f'/2 psi + W psi.
    The derivative is a 4th-order finite difference, so the grid must be
    uniform in x.
    """
    grid = psi.grid
    if grid.coordinate != "direct-x":
        raise GridError("apply_ladder requires a direct-x (uniform) grid")
    if grid.family_id != family.id:
        raise GridError("grid/family mismatch")
    v = fam.evaluate_family(family, p, grid.nodes)
    dpsi = _diff4(psi.values, grid.spacing)
    core = v.f * dpsi + 0.5 * v.fx * psi.values
    if sign == "minus":
        out = core + v.W * psi.values
    elif sign == "plus":
        out = -core + v.W * psi.values
    else:
        raise GridError(f"sign must be 'minus' or 'plus', got {sign!r}")
    return GridFunction(grid, out)


def apply_ladder_expr(family: PotentialFamily, p: ParamSet, sign: str,
                      expr: sp.Expr) -> sp.Expr:
    """Exact-derivative ladder application on a closed-form state."""
    fam.validate_params(family, p)
    if expr == 0:
        return sp.S.Zero
    f = family.f_sym(p)
    W = family.w_sym(p)
    core = f * sp.diff(expr, X) + sp.diff(f, X) / 2 * expr
    if sign == "minus":
        return core + W * expr
    if sign == "plus":
        return -core + W * expr
    raise GridError(f"sign must be 'minus' or 'plus', got {sign!r}")


def hminus_expr(family: PotentialFamily, p: ParamSet, expr: sp.Expr) -> sp.Expr:
    """Exact slice-wise H_- = A+ A- on a closed-form state."""
    return apply_ladder_expr(family, p, "plus",
                             apply_ladder_expr(family, p, "minus", expr))


@functools.lru_cache(maxsize=512)
def _lambdified(expr: sp.Expr):
    return sp.lambdify(X, expr, modules="numpy")

def eval_expr(expr: sp.Expr, x: np.ndarray) -> np.ndarray:
    """Evaluate a sympy expression on an array, broadcasting constants."""
    out = _lambdified(expr)(x)
    return np.broadcast_to(np.asarray(out, dtype=float), np.shape(x)).copy()


# ---------------------------------------------------------------------------
# self-consistency checks


@dataclass(frozen=True)
class SelfCheckReport:
    adjoint_defect: float
    factorization_defect: float


def _random_bump(grid: Grid, rng) -> np.ndarray:
    lo, hi = grid.nodes[0], grid.nodes[-1]
    span = hi - lo
    c = rng.uniform(lo + span / 3, hi - span / 3)
    sigma = rng.uniform(span / 20, span / 10)
    t = (grid.nodes - c) / sigma
    return (1.0 + rng.uniform(-0.5, 0.5) * t) * np.exp(-0.5 * t * t)


def operator_selfcheck(family: PotentialFamily, p: ParamSet, grid: Grid,
                       n_pairs: int = 4, seed: int = 0) -> SelfCheckReport:
    """Adjointness and factorization residuals on random smooth bumps.

    adjoint_defect: max |<A+ phi, psi> - <phi, A- psi>| / (|phi| |psi|) over
    random compactly supported pairs, with the plain dx inner product.
    factorization_defect: relative residual of A+(A- psi) against the
    discretized H_- applied to the same nodal values.
    """
    if grid.coordinate != "direct-x":
        raise GridError("operator_selfcheck requires a direct-x grid")
    rng = np.random.default_rng(seed)
    xs = grid.nodes
    op = discretize_hamiltonian(family, p, "minus", grid)
    adj = 0.0
    fac = 0.0
    for _ in range(n_pairs):
        phi = GridFunction(grid, _random_bump(grid, rng))
        psi = GridFunction(grid, _random_bump(grid, rng))
        lhs = float(_trapz(apply_ladder(family, p, "plus", phi).values
                           * psi.values, xs))
        rhs = float(_trapz(phi.values
                           * apply_ladder(family, p, "minus", psi).values, xs))
        adj = max(adj, abs(lhs - rhs) / (phi.norm() * psi.norm()))
        ladder = apply_ladder(family, p, "plus",
                              apply_ladder(family, p, "minus", psi)).values
        matvec = op.apply(psi.values)
        denom = math.sqrt(float(_trapz(matvec**2, xs)))
        resid = math.sqrt(float(_trapz((ladder - matvec) ** 2, xs)))
        fac = max(fac, resid / max(denom, 1e-300))
    return SelfCheckReport(adjoint_defect=adj, factorization_defect=fac)
