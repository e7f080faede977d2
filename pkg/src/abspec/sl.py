"""Eigenvalues of the reduced problem -(G f')' + (4 pi^2 nu^2 / G) f = kappa f.

The problem lives on (0, M) where M is the surface area and G is a level-set
weight.  At a pole-type end (G ~ 4 pi * dist) the admissible boundary
condition is the singular Neumann condition ``lim G f' = 0``, which selects
the indicial branch ``f ~ dist^{nu/2}``; regular ends carry ordinary Neumann
or Dirichlet conditions.  The primary route is Prufer shooting
(:mod:`abspec.shooting`); :func:`fd_oracle` provides an independent
self-adjoint finite-difference discretization for cross-validation only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .flux import Flux, reduce_flux
from .shooting import EndCondition, ShootingProblem, SolverError, \
    eigenvalue as _shoot_eigenvalue, eigenfunction as _shoot_eigenfunction, \
    phase_sum
from .weights import FOURPI, FOURPI2, Weight

BC_KINDS = ("singular-neumann", "regular-neumann", "dirichlet")


@dataclass(frozen=True)
class SLProblem:
    """Weight, flux and boundary conditions of one reduced eigenproblem."""

    weight: Weight
    flux: Flux
    left_bc: str = "singular-neumann"
    right_bc: str = "singular-neumann"

    def __post_init__(self):
        for side, bc in (("left", self.left_bc), ("right", self.right_bc)):
            if bc not in BC_KINDS:
                raise ValueError(f"unknown boundary condition {bc!r}")
            kind = self.weight.kind(side)
            if kind == "pole" and bc == "regular-neumann":
                raise ValueError(f"{side} end is a pole; use singular-neumann "
                                 "or dirichlet")
            if kind == "regular" and bc == "singular-neumann":
                raise ValueError(f"{side} end is regular; use regular-neumann "
                                 "or dirichlet")

    @property
    def nu(self) -> float:
        return self.flux.reduced_float


@dataclass
class SLSolution:
    """One eigenpair: eigenvalue, sampled eigenfunction, diagnostics.

    The eigenfunction is normalized to unit maximum; ``zero_count`` equals
    the eigenvalue index, and ``gfprime`` holds G f' on the sample grid.
    """

    kappa: float
    index: int
    a: np.ndarray
    f: np.ndarray
    gfprime: np.ndarray
    zero_count: int
    residual: float
    problem: SLProblem


def _end_condition(problem: SLProblem, side: str) -> EndCondition:
    bc = problem.left_bc if side == "left" else problem.right_bc
    kind = problem.weight.kind(side)
    nu = problem.nu
    if kind == "regular":
        return EndCondition("neumann" if bc == "regular-neumann" else "dirichlet")
    # pole end: singular Neumann and Dirichlet both select the branch
    # f ~ d^{nu/2}(1 + c1 d); the first correction keeps the start error
    # at O(offset^2)
    h1 = problem.weight.h1(side)

    def series_coeff(lam, _h1=h1, _nu=nu):
        return -(_nu / 2.0) * _h1 - lam / (FOURPI * (_nu + 1.0))

    return EndCondition("pole", exponent=nu / 2.0, series_power=1,
                        series_coeff=series_coeff)


def _shooting_problem(problem: SLProblem, offset_rel: float) -> ShootingProblem:
    w = problem.weight
    nu = problem.nu
    c = FOURPI2 * nu * nu
    G = w.G
    return ShootingProblem(
        p=G,
        q=(lambda a: 0.0) if nu == 0.0 else (lambda a, _G=G, _c=c: _c / _G(a)),
        w=lambda a: 1.0,
        x0=0.0, x1=w.M,
        left=_end_condition(problem, "left"),
        right=_end_condition(problem, "right"),
        breakpoints=w.breakpoints,
        offset_rel=offset_rel)


def _is_zero_mode(problem: SLProblem) -> bool:
    return (problem.flux.is_integer
            and problem.left_bc != "dirichlet"
            and problem.right_bc != "dirichlet")


def solve(problem: SLProblem, k: int = 0, offset_rel: float = 1e-8,
          reltol: float = 1e-10, kappa_max: float | None = None,
          npts: int = 801, want_samples: bool = True,
          lam_hint: float | None = None) -> SLSolution:
    """k-th eigenvalue and eigenfunction of the reduced problem.

    Shooting starts on the regular indicial branch at a relative offset
    ``offset_rel`` from each pole end, isolates the eigenvalue by phase
    counting and refines it by bisection to relative tolerance ``reltol``.
    ``kappa_max`` caps the bracketing search (SolverError beyond it).
    """
    if k < 0:
        raise ValueError("eigenvalue index must be >= 0")
    if _is_zero_mode(problem) and k == 0:
        # integer flux: the potential vanishes and the constant function is
        # the ground state, no shooting needed
        a = np.linspace(0.0, problem.weight.M, npts)
        return SLSolution(kappa=0.0, index=0, a=a, f=np.ones_like(a),
                          gfprime=np.zeros_like(a), zero_count=0,
                          residual=0.0, problem=problem)
    prob = _shooting_problem(problem, offset_rel)
    lam = _shoot_eigenvalue(prob, k, lam_hint=lam_hint, lam_cap=kappa_max,
                            reltol=reltol)
    if not want_samples:
        return SLSolution(kappa=lam, index=k, a=np.empty(0), f=np.empty(0),
                          gfprime=np.empty(0), zero_count=k,
                          residual=abs(phase_sum(prob, lam) - (k + 1) * math.pi),
                          problem=problem)
    efun = _shoot_eigenfunction(prob, lam, k_expected=k, npts=npts)
    return SLSolution(kappa=lam, index=k, a=efun.x, f=efun.u,
                      gfprime=efun.pu, zero_count=efun.zero_count,
                      residual=efun.residual, problem=problem)


def default_problem(weight: Weight, flux) -> SLProblem:
    """Natural boundary conditions: singular Neumann at poles, Neumann else."""
    flux = flux if isinstance(flux, Flux) else reduce_flux(flux)
    bc = {"pole": "singular-neumann", "regular": "regular-neumann"}
    return SLProblem(weight=weight, flux=flux,
                     left_bc=bc[weight.left_kind],
                     right_bc=bc[weight.right_kind])


def kappa1(weight: Weight, flux, **kwargs) -> float:
    """First eigenvalue with the natural boundary conditions for the weight."""
    return solve(default_problem(weight, flux), k=0,
                 want_samples=False, **kwargs).kappa


def riccati_profile(solution: SLSolution, margin: float = 0.0):
    """Logarithmic-derivative transform R = G f'/f of a first eigenfunction.

    Returns (a, R) arrays on the interior sample grid.  With a ground state
    (no interior zeros) the division is safe; ``margin`` trims a fraction of
    the interval at each end if desired.
    """
    if solution.zero_count != 0:
        raise ValueError("the transform is defined for first eigenfunctions "
                         f"only (zero_count={solution.zero_count})")
    a, f, gf = solution.a, solution.f, solution.gfprime
    M = solution.problem.weight.M
    lo, hi = margin * M, M - margin * M
    mask = (a > lo) & (a < hi) & (np.abs(f) > 1e-13)
    return a[mask], gf[mask] / f[mask]


def _fd_mesh(weight: Weight, n: int, delta_rel: float):
    """Mesh graded geometrically toward pole ends (spacing ~ distance)."""
    M = weight.M
    half = n // 2
    delta = delta_rel * M

    def side_nodes(kind):
        if kind == "pole":
            return np.geomspace(delta, M / 2.0, half)
        return np.linspace(M / (2.0 * half), M / 2.0, half)

    left = side_nodes(weight.left_kind)
    right = M - side_nodes(weight.right_kind)[::-1]
    if weight.left_kind == "regular":
        left = np.concatenate([[0.0], left])
    if weight.right_kind == "regular":
        right = np.concatenate([right, [M]])
    return np.unique(np.concatenate([left, right]))


def _fd_value(problem: SLProblem, k: int, n: int, delta_rel: float) -> float:
    w = problem.weight
    nu = problem.nu
    x = _fd_mesh(w, n, delta_rel)
    h = np.diff(x)
    mid = 0.5 * (x[:-1] + x[1:])
    Gmid = np.array([w.G(m) for m in mid])
    flux_coef = Gmid / h

    m = len(x)
    diag = np.zeros(m)
    off = -flux_coef
    diag[:-1] += flux_coef
    diag[1:] += flux_coef

    lump = np.zeros(m)
    lump[:-1] += 0.5 * h
    lump[1:] += 0.5 * h

    qv = np.zeros(m)
    if nu != 0.0:
        qv = FOURPI2 * nu * nu / np.array([w.G(xi) for xi in x])
    diag = diag + qv * lump

    # pole ends: close the truncated tip with the flux of the indicial
    # branch, G f'(delta) = G(delta) * (nu / (2 delta)) * f(delta); at such
    # an end dirichlet and singular-neumann select the same branch
    keep = np.ones(m, dtype=bool)
    if w.left_kind == "pole":
        diag[0] += w.G(x[0]) * nu / (2.0 * x[0])
    elif problem.left_bc == "dirichlet":
        keep[0] = False
    if w.right_kind == "pole":
        diag[-1] += w.G(x[-1]) * nu / (2.0 * (w.M - x[-1]))
    elif problem.right_bc == "dirichlet":
        keep[-1] = False

    diag = diag[keep]
    lump = lump[keep]
    if not keep[0]:
        off = off[1:]
    if not keep[-1]:
        off = off[:-1]

    scale = 1.0 / np.sqrt(lump)
    d = diag * scale * scale
    e = off * scale[:-1] * scale[1:]
    vals = eigvalsh_tridiagonal(d, e, select="i", select_range=(k, k),
                                lapack_driver="stebz")
    return float(vals[0])


def fd_oracle(problem: SLProblem, k: int = 0, n: int = 4096,
              delta_rel: float = 1e-6, richardson: bool = True) -> float:
    """Independent finite-difference value of the k-th eigenvalue.

    Assembles the self-adjoint three-point discretization of the quadratic
    form on a mesh graded toward pole ends and returns the k-th Ritz value,
    Richardson-extrapolated over mesh sizes n and 2n.  Used only to
    cross-validate :func:`solve`; neither route feeds the other.
    """
    if _is_zero_mode(problem) and k == 0:
        return 0.0
    coarse = _fd_value(problem, k, n, delta_rel)
    if not richardson:
        return coarse
    fine = _fd_value(problem, k, 2 * n, delta_rel)
    return (4.0 * fine - coarse) / 3.0
