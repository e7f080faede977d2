"""Prufer-phase shooting for singular Sturm-Liouville eigenproblems.

Solves ``-(p u')' + q u = lam w u`` on an interval whose endpoints may be
singular: ``p`` vanishes linearly and ``q`` blows up like ``const / p``, so
that solutions behave like ``d**beta`` in the distance ``d`` to the end.
The phase ``theta`` defined by ``u = rho sin(theta)``,
``p u' = rho cos(theta)`` satisfies

    theta' = cos(theta)^2 / p + (lam w - q) sin(theta)^2,

which stays bounded where ``u`` would over/underflow (e.g. across plateau
regions with a large potential).  Integrating the phase from both endpoints
to an interior matching point, the k-th eigenvalue is the unique ``lam``
with ``theta_left + theta_right = (k + 1) pi``.  The phase sum is strictly
increasing in ``lam``, so the zero is isolated by doubling an upper bound
(oscillation counting) and refined with Brent's method; the index k needs
no separate bookkeeping and the k-th eigenfunction automatically has k
interior zeros.

Singular ends are started on the regular indicial branch
``u = d**beta (1 + c d**s)`` at a small offset from the endpoint; regular
ends start exactly on the boundary condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import odeint
from scipy.optimize import brentq

PI = math.pi

# integration tolerances for the phase ODE; tight enough that eigenvalue
# error is dominated by the bisection tolerance, not the integrator
_RTOL = 1e-11
_ATOL = 1e-13
_MXSTEP = 1_000_000


class SolverError(RuntimeError):
    """Raised when shooting fails to bracket or integrate an eigenvalue."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class EndCondition:
    """Boundary behavior at one endpoint.

    kind "neumann" or "dirichlet" applies at a regular endpoint.  kind
    "pole" marks a singular endpoint where the solution is started on the
    indicial branch ``d**exponent (1 + c d**series_power)`` at a small
    offset; ``series_coeff`` maps lam to the first correction coefficient c
    (may be None when the correction is negligible).
    """

    kind: str
    exponent: float = 0.0
    series_power: int = 0
    series_coeff: Callable[[float], float] | None = None

    def __post_init__(self):
        if self.kind not in ("pole", "neumann", "dirichlet"):
            raise ValueError(f"unknown end condition kind {self.kind!r}")

    @property
    def is_singular(self) -> bool:
        return self.kind == "pole"


@dataclass(frozen=True)
class ShootingProblem:
    """Coefficients and endpoint data for ``-(p u')' + q u = lam w u``.

    ``p``, ``q``, ``w`` are scalar callables on (x0, x1); ``breakpoints``
    lists interior kinks where the integration is restarted to preserve
    order of accuracy.  ``offset_rel`` sets the indicial start offset for
    singular ends as a fraction of the interval length.
    """

    p: Callable[[float], float]
    q: Callable[[float], float]
    w: Callable[[float], float]
    x0: float
    x1: float
    left: EndCondition
    right: EndCondition
    breakpoints: tuple = ()
    offset_rel: float = 1e-8

    @property
    def length(self) -> float:
        return self.x1 - self.x0

    def offset(self, end: EndCondition) -> float:
        return self.offset_rel * self.length if end.is_singular else 0.0


def _start_angle(prob: ShootingProblem, side: str, lam: float) -> float:
    """Initial Prufer angle at the given end for trial eigenvalue lam."""
    end = prob.left if side == "left" else prob.right
    if end.kind == "neumann":
        return 0.5 * PI
    if end.kind == "dirichlet":
        return 0.0
    delta = prob.offset(end)
    x = prob.x0 + delta if side == "left" else prob.x1 - delta
    beta = end.exponent
    u = 1.0
    du = beta / delta
    if end.series_coeff is not None:
        c = end.series_coeff(lam)
        ds = delta ** end.series_power
        u = 1.0 + c * ds
        du = (beta + (beta + end.series_power) * c * ds) / delta
    pu = prob.p(x) * du
    return math.atan2(u, pu)


def _segments(prob: ShootingProblem, a: float, b: float, mirrored: bool):
    """Ordered integration nodes from a to b, split at breakpoints."""
    pts = [a]
    if mirrored:
        inner = sorted((prob.x1 - bp for bp in prob.breakpoints), reverse=False)
    else:
        inner = sorted(prob.breakpoints)
    for t in inner:
        if a < t < b:
            pts.append(t)
    pts.append(b)
    return pts


def _first_step(prob: ShootingProblem, x: float, span: float,
                mirrored: bool) -> float:
    """Conservative initial step for LSODA near a singular end.

    At the indicial start the phase derivative nearly vanishes (the start
    angle sits on the slow manifold), so the automatic initial-step
    heuristic can overshoot the boundary layer; seed it with a fraction of
    the distance to the nearest singular endpoint instead.
    """
    dist = math.inf
    if prob.left.is_singular:
        d = (prob.x1 - x) if mirrored else (x - prob.x0)
        dist = min(dist, abs(d))
    if prob.right.is_singular:
        d = x if mirrored else (prob.x1 - x)
        dist = min(dist, abs(d))
    if not math.isfinite(dist) or dist > 0.01 * prob.length:
        return 0.0  # let the integrator choose
    return min(span / 8.0, max(dist / 4.0, 1e-300))


def _integrate_phase(prob: ShootingProblem, lam: float, side: str,
                     x_stop: float) -> float:
    """Integrate the phase from the given end to x_stop; return theta there.

    The right side is integrated in the mirrored variable
    ``xi = x1 - x`` so both directions march away from their endpoint.
    """
    if side == "left":
        pfun, qfun, wfun = prob.p, prob.q, prob.w
        a = prob.x0 + prob.offset(prob.left)
        b = x_stop
        mirrored = False
    else:
        x1 = prob.x1
        pf, qf, wf = prob.p, prob.q, prob.w
        pfun = lambda xi: pf(x1 - xi)
        qfun = lambda xi: qf(x1 - xi)
        wfun = lambda xi: wf(x1 - xi)
        a = prob.offset(prob.right)
        b = prob.x1 - x_stop
        mirrored = True

    theta = _start_angle(prob, side, lam)
    if b <= a:
        return theta

    def rhs(y, x):
        th = y[0]
        s = math.sin(th)
        c = math.cos(th)
        pv = pfun(x)
        if pv < 1e-300:
            pv = 1e-300
        return [c * c / pv + (lam * wfun(x) - qfun(x)) * s * s]

    if mirrored:
        nodes = [a] + [xi for xi in sorted(prob.x1 - bp for bp in prob.breakpoints)
                       if a < xi < b] + [b]
    else:
        nodes = _segments(prob, a, b, mirrored=False)
    for lo, hi in zip(nodes[:-1], nodes[1:]):
        if hi - lo <= 1e-14 * prob.length:
            continue
        # tcrit stops internal steps at the segment end: the coefficients
        # may be invalid beyond it (endpoint singularity or kink)
        sol, info = odeint(rhs, [theta], [lo, hi], rtol=_RTOL, atol=_ATOL,
                           mxstep=_MXSTEP, full_output=True,
                           tcrit=np.array([hi]),
                           h0=_first_step(prob, lo, hi - lo, mirrored))
        if info["message"] != "Integration successful.":
            raise SolverError(
                f"phase integration failed on [{lo:g}, {hi:g}]",
                {"lam": lam, "side": side, "message": info["message"]})
        theta = float(sol[-1, 0])
    return theta


def _match_point(prob: ShootingProblem) -> float:
    if not prob.right.is_singular:
        return prob.x1
    if not prob.left.is_singular:
        return prob.x0
    return 0.5 * (prob.x0 + prob.x1)


def phase_sum(prob: ShootingProblem, lam: float) -> float:
    """theta_left(m) + theta_right(m) at the matching point m."""
    m = _match_point(prob)
    if m == prob.x1:
        th_l = _integrate_phase(prob, lam, "left", m)
        th_r = _start_angle(prob, "right", lam)
    elif m == prob.x0:
        th_l = _start_angle(prob, "left", lam)
        th_r = _integrate_phase(prob, lam, "right", m)
    else:
        th_l = _integrate_phase(prob, lam, "left", m)
        th_r = _integrate_phase(prob, lam, "right", m)
    return th_l + th_r


def eigenvalue(prob: ShootingProblem, k: int, lam_hint: float | None = None,
               lam_cap: float | None = None, reltol: float = 1e-12) -> float:
    """k-th eigenvalue, isolated by phase counting and refined by Brent.

    Assumes q >= 0 so that all eigenvalues are nonnegative.  ``lam_cap``
    bounds the bracketing search; exceeding it raises SolverError.
    """
    if k < 0:
        raise ValueError("eigenvalue index must be >= 0")
    target = (k + 1) * PI

    def defect(lam):
        return phase_sum(prob, lam) - target

    d0 = defect(0.0)
    if d0 >= 0.0:
        if d0 < 1e-8:
            return 0.0
        raise SolverError("phase exceeds target at lam=0; eigenvalue "
                          "would be negative", {"defect0": d0, "k": k})
    lo, d_lo = 0.0, d0
    hi = lam_hint if (lam_hint is not None and lam_hint > 0) else 1.0
    for _ in range(200):
        if lam_cap is not None and hi > lam_cap:
            raise SolverError(
                f"eigenvalue bracket exceeded cap {lam_cap:g}",
                {"k": k, "last_defect": d_lo, "cap": lam_cap})
        d_hi = defect(hi)
        if d_hi > 0.0:
            break
        lo, d_lo = hi, d_hi
        hi *= 4.0
    else:
        raise SolverError("failed to bracket eigenvalue",
                          {"k": k, "hi": hi, "defect_hi": d_lo})
    lam = brentq(defect, lo, hi, xtol=1e-15 * max(1.0, hi),
                 rtol=max(reltol, 4e-16))
    return float(lam)


@dataclass
class EigenFunction:
    """Sampled eigenfunction with phase data for post-processing.

    ``u`` is normalized to unit sup-norm with the first eigenfunction
    positive; ``pu`` holds ``p u'`` on the same grid (so the logarithmic
    derivative transform ``p u' / u`` needs no numerical differentiation).
    """

    lam: float
    x: np.ndarray
    u: np.ndarray
    pu: np.ndarray
    zero_count: int
    residual: float
    theta_left: float = 0.0
    theta_right: float = 0.0


def _reconstruct_side(prob, lam, side, xs):
    """Integrate (theta, log rho) along xs (ordered away from the end)."""
    if side == "left":
        pfun, qfun, wfun = prob.p, prob.q, prob.w
        grid = xs
    else:
        x1 = prob.x1
        pf, qf, wf = prob.p, prob.q, prob.w
        pfun = lambda xi: pf(x1 - xi)
        qfun = lambda xi: qf(x1 - xi)
        wfun = lambda xi: wf(x1 - xi)
        grid = x1 - xs[::-1]

    def rhs(y, x):
        th = y[0]
        s = math.sin(th)
        c = math.cos(th)
        pv = pfun(x)
        if pv < 1e-300:
            pv = 1e-300
        dth = c * c / pv + (lam * wfun(x) - qfun(x)) * s * s
        dlr = s * c * (1.0 / pv - (lam * wfun(x) - qfun(x)))
        return [dth, dlr]

    theta0 = _start_angle(prob, side, lam)
    thetas = np.empty_like(grid)
    logrho = np.empty_like(grid)
    thetas[0] = theta0
    logrho[0] = 0.0
    y = [theta0, 0.0]
    if side == "left":
        inner = sorted(bp for bp in prob.breakpoints)
    else:
        inner = sorted(prob.x1 - bp for bp in prob.breakpoints)
    i = 0
    while i < len(grid) - 1:
        lo, hi = grid[i], grid[i + 1]
        cut = [t for t in inner if lo < t < hi]
        pts = [lo] + cut + [hi]
        for a, b in zip(pts[:-1], pts[1:]):
            if b - a <= 1e-14 * prob.length:
                continue
            sol = odeint(rhs, y, [a, b], rtol=_RTOL, atol=_ATOL,
                         mxstep=_MXSTEP, tcrit=np.array([b]),
                         h0=_first_step(prob, a, b - a, side == "right"))
            y = [float(sol[-1, 0]), float(sol[-1, 1])]
        thetas[i + 1] = y[0]
        logrho[i + 1] = y[1]
        i += 1
    if side == "right":
        thetas = thetas[::-1]
        logrho = logrho[::-1]
    return thetas, logrho


def _sample_grid(prob, npts):
    """Sampling grid clustered geometrically toward singular ends."""
    dl = prob.offset(prob.left)
    dr = prob.offset(prob.right)
    a, b = prob.x0 + dl, prob.x1 - dr
    base = np.linspace(a, b, npts)
    extra = []
    n_end = max(16, npts // 16)
    if prob.left.is_singular:
        extra.append(prob.x0 + np.geomspace(dl, base[1] - prob.x0, n_end))
    if prob.right.is_singular:
        extra.append(prob.x1 - np.geomspace(dr, prob.x1 - base[-2], n_end))
    pieces = [base] + extra
    m = _match_point(prob)
    pieces.append(np.array([m]))
    grid = np.unique(np.concatenate(pieces))
    return np.clip(grid, a, b)


def eigenfunction(prob: ShootingProblem, lam: float, k_expected: int | None = None,
                  npts: int = 801) -> EigenFunction:
    """Reconstruct the eigenfunction at (converged) lam on a sample grid."""
    m = _match_point(prob)
    xs = _sample_grid(prob, npts)
    left_mask = xs <= m
    right_mask = xs >= m
    xs_l = xs[left_mask]
    xs_r = xs[right_mask]

    u = np.empty_like(xs)
    pu = np.empty_like(xs)
    th_l_m = th_r_m = 0.0

    if len(xs_l) and m > prob.x0:
        th, lr = _reconstruct_side(prob, lam, "left", xs_l)
        amp = np.exp(lr - lr.max())
        u[left_mask] = amp * np.sin(th)
        pu[left_mask] = amp * np.cos(th)
        th_l_m = th[-1]
        scale_l = (amp[-1] * math.sin(th[-1]), amp[-1] * math.cos(th[-1]))
    else:
        th_l_m = _start_angle(prob, "left", lam)
        scale_l = (math.sin(th_l_m), math.cos(th_l_m))
        u[left_mask] = scale_l[0]
        pu[left_mask] = scale_l[1]

    if len(xs_r) and m < prob.x1:
        th, lr = _reconstruct_side(prob, lam, "right", xs_r)
        amp = np.exp(lr - lr.max())
        # mirrored derivative flips sign back in the original variable
        ur = amp * np.sin(th)
        pur = -amp * np.cos(th)
        th_r_m = th[0]
        # match amplitudes at m through the better conditioned component
        ul_m, pul_m = scale_l
        ur_m, pur_m = ur[0], pur[0]
        if abs(ur_m) >= abs(pur_m) and abs(ur_m) > 0:
            scale = ul_m / ur_m
        elif abs(pur_m) > 0:
            scale = pul_m / pur_m
        else:
            scale = 1.0
        u[right_mask] = scale * ur
        pu[right_mask] = scale * pur
    else:
        th_r_m = _start_angle(prob, "right", lam)

    sup = np.max(np.abs(u))
    if sup > 0:
        u = u / sup
        pu = pu / sup
    imax = int(np.argmax(np.abs(u)))
    if u[imax] < 0:
        u = -u
        pu = -pu

    # a node sitting exactly on the matching point would be double counted
    # by per-side floors; the phase-sum total is unambiguous
    zero_count = int(round((th_l_m + th_r_m) / PI)) - 1
    target = (zero_count + 1) * PI if k_expected is None else (k_expected + 1) * PI
    residual = abs(th_l_m + th_r_m - target)
    return EigenFunction(lam=lam, x=xs, u=u, pu=pu, zero_count=zero_count,
                         residual=residual, theta_left=th_l_m,
                         theta_right=th_r_m)
