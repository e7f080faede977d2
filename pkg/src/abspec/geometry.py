"""Surfaces of revolution: profiles, curvature, level-set weights, modes.

A profile describes the metric ``dr^2 + f(r)^2 dtheta^2`` through a curve
``t -> (f(t), ...)`` with arclength density ``w(t) = ds/dt`` (``w == 1``
when the parameter is arclength itself).  Endpoints are either axis poles,
where f -> 0 with |f'| -> 1 and the surface closes smoothly, or boundary
circles of length ``2 pi f``.

For a potential with poles on the axis the Green function is radial, its
level sets are the circles t = const, and the level-set weight is exact:

    G(a) = 4 pi^2 f(t(a))^2,   a(t) = integral of 2 pi f ds,

which is what :func:`green_weight` tabulates.  Separation of variables
reduces the eigenvalue problem on the surface to the radial problems
``-(f v')' + ((n - nu)^2 / f) v = mu f v`` indexed by the angular momentum
n, solved here by the shared Prufer shooting core; minimizing over a window
of n gives the first eigenvalue of the surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator
from scipy.optimize import brentq

from .flux import Flux, reduce_flux
from .shooting import EndCondition, ShootingProblem, \
    eigenvalue as _shoot_eigenvalue
from .weights import FOURPI, Weight

TWOPI = 2.0 * math.pi
MIN_TABLE_SAMPLES = 64


def _one(t):
    return 1.0


@dataclass(frozen=True)
class Profile:
    """Profile curve of a surface of revolution.

    ``f``/``df`` give the radius and its parameter derivative on [0, T],
    ``w`` the arclength density, and ``curvature`` the gaussian curvature
    (one-sided at the interior kinks listed in ``breakpoints``).
    """

    name: str
    T: float
    f: Callable[[float], float]
    df: Callable[[float], float]
    curvature: Callable[[float], float]
    w: Callable[[float], float] = _one
    left_end: str = "pole"
    right_end: str = "pole"
    breakpoints: tuple = ()
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        for end in (self.left_end, self.right_end):
            if end not in ("pole", "boundary"):
                raise ValueError(f"endpoint must be pole or boundary, got {end!r}")
        if self.T <= 0:
            raise ValueError("parameter length must be positive")

    @property
    def closed(self) -> bool:
        return self.left_end == "pole" and self.right_end == "pole"

    def end_kind(self, side: str) -> str:
        return self.left_end if side == "left" else self.right_end

    def scaled(self, c: float) -> "Profile":
        """Homothety: metric scaled by c^2, curvature by 1/c^2, area by c^2."""
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return replace(
            self,
            f=lambda t, _f=self.f: c * _f(t),
            df=lambda t, _df=self.df: c * _df(t),
            w=lambda t, _w=self.w: c * _w(t),
            curvature=lambda t, _K=self.curvature: _K(t) / (c * c),
            name=f"{self.name}*scaled({c:g})",
            params=dict(self.params, scale=c))

    # cumulative-area machinery shared by analyze / green_weight ---------

    def _grid(self, n_uniform: int = 600, n_end: int = 80) -> np.ndarray:
        pts = [np.linspace(0.0, self.T, n_uniform)]
        tiny = 1e-9 * self.T
        step = self.T / n_uniform
        if self.left_end == "pole":
            pts.append(np.geomspace(tiny, step, n_end))
        if self.right_end == "pole":
            pts.append(self.T - np.geomspace(tiny, step, n_end))
        pts.append(np.asarray(self.breakpoints, dtype=float))
        grid = np.unique(np.concatenate(pts))
        return grid[(grid >= 0.0) & (grid <= self.T)]

    def cumulative_area(self, grid: np.ndarray) -> np.ndarray:
        """Integral of 2 pi f w from 0 to each grid node (Gauss per cell)."""
        nodes, wts = np.polynomial.legendre.leggauss(8)
        lo = grid[:-1]
        hi = grid[1:]
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        cells = np.zeros_like(lo)
        for xi, wi in zip(nodes, wts):
            ts = mid + half * xi
            vals = np.array([TWOPI * self.f(t) * self.w(t) for t in ts])
            cells += wi * vals
        cells *= half
        return np.concatenate([[0.0], np.cumsum(cells)])

    def area(self) -> float:
        grid = self._grid()
        return float(self.cumulative_area(grid)[-1])

    def arclength(self) -> float:
        grid = self._grid()
        nodes, wts = np.polynomial.legendre.leggauss(8)
        total = 0.0
        for lo, hi in zip(grid[:-1], grid[1:]):
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            total += half * sum(wi * self.w(mid + half * xi)
                                for xi, wi in zip(nodes, wts))
        return float(total)

    def area_of_radius(self, t: float) -> float:
        grid = self._grid()
        cum = self.cumulative_area(grid)
        return float(np.interp(t, grid, cum))

    def radius_of_area(self, a: float) -> float:
        """Invert the strictly increasing a(t) by bracketed root-finding."""
        grid = self._grid()
        cum = self.cumulative_area(grid)
        if not 0.0 <= a <= cum[-1]:
            raise ValueError(f"area {a:g} outside [0, {cum[-1]:g}]")
        spline = CubicSpline(grid, cum)
        if a == 0.0:
            return 0.0
        if a == cum[-1]:
            return self.T
        return float(brentq(lambda t: spline(t) - a, 0.0, self.T,
                            xtol=1e-14 * self.T, rtol=1e-12))


@dataclass(frozen=True)
class SurfaceReport:
    """Area, curvature supremum and endpoint data of a profile."""

    name: str
    area: float
    curvature_max: float
    length: float
    left_end: str
    right_end: str
    boundary_lengths: dict
    params: dict = field(default_factory=dict)

    def record(self) -> dict:
        rec = {
            "name": self.name,
            "area": self.area,
            "curvature_max": self.curvature_max,
            "length": self.length,
            "left_end": self.left_end,
            "right_end": self.right_end,
        }
        for side, val in self.boundary_lengths.items():
            rec[f"boundary_length_{side}"] = val
        return rec


def analyze(profile: Profile, n_curv: int = 2001) -> SurfaceReport:
    """Area, curvature supremum (over smooth pieces) and boundary lengths."""
    grid = profile._grid()
    fvals = np.array([profile.f(t) for t in grid[1:-1]])
    if profile.left_end == "boundary":
        fvals = np.concatenate([[profile.f(0.0)], fvals])
    if profile.right_end == "boundary":
        fvals = np.concatenate([fvals, [profile.f(profile.T)]])
    if np.any(fvals <= 0.0):
        raise ValueError("profile radius must be positive away from poles")

    segs = [0.0] + sorted(profile.breakpoints) + [profile.T]
    kmax = -math.inf
    inset = 1e-7 * profile.T
    for lo, hi in zip(segs[:-1], segs[1:]):
        ts = np.linspace(lo + inset, hi - inset, n_curv)
        kmax = max(kmax, max(profile.curvature(t) for t in ts))
    blen = {}
    if profile.left_end == "boundary":
        blen["left"] = TWOPI * profile.f(0.0)
    if profile.right_end == "boundary":
        blen["right"] = TWOPI * profile.f(profile.T)
    return SurfaceReport(name=profile.name, area=profile.area(),
                         curvature_max=float(kmax),
                         length=profile.arclength(),
                         left_end=profile.left_end,
                         right_end=profile.right_end,
                         boundary_lengths=blen, params=dict(profile.params))


def green_weight(profile: Profile, poles: str = "both") -> Weight:
    """Exact level-set weight G(a) = 4 pi^2 f(t(a))^2 of the profile.

    ``poles="left"`` places one potential pole at t = 0 of a profile with a
    boundary at the far end; ``poles="both"`` needs a closed profile.  The
    weight is tabulated on a graded grid and interpolated by a cubic spline
    clamped to the exact end slopes ``dG/da = 4 pi f'(r)``.
    """
    if poles not in ("left", "both"):
        raise ValueError("poles must be 'left' or 'both'")
    if profile.left_end != "pole":
        raise ValueError("the potential pole must sit at an axis-pole end, "
                         "not a boundary circle")
    if poles == "both" and profile.right_end != "pole":
        raise ValueError("poles='both' needs a closed profile; the right "
                         "end is a boundary circle")
    if poles == "left" and profile.right_end != "boundary":
        raise ValueError("a single-pole weight needs a boundary at the far "
                         "end (closed surfaces carry two poles)")

    grid = profile._grid(n_uniform=1500, n_end=120)
    cum = profile.cumulative_area(grid)
    M = float(cum[-1])
    gv = np.array([4.0 * math.pi ** 2 * profile.f(t) ** 2 for t in grid])
    # exact pinning at the ends
    gv[0] = 0.0 if profile.left_end == "pole" else gv[0]
    if poles == "both":
        gv[-1] = 0.0
    a, idx = np.unique(cum, return_index=True)
    gva = gv[idx]
    slope = lambda t: FOURPI * profile.df(t) / profile.w(t)
    spline = CubicSpline(a, gva, bc_type=((1, slope(0.0)),
                                          (1, slope(profile.T))))

    def G(x, _s=spline, _M=M):
        if x <= 0.0:
            x = 0.0
        elif x >= _M:
            x = _M
        return float(_s(x))

    eps_t = 1e-8 * profile.T
    left_h1 = -profile.curvature(eps_t) / FOURPI
    right_h1 = None
    if poles == "both":
        right_h1 = -profile.curvature(profile.T - eps_t) / FOURPI
    bks = tuple(float(np.interp(b, grid, cum)) for b in profile.breakpoints)
    return Weight(M=M, G=G, left_kind="pole",
                  right_kind="pole" if poles == "both" else "regular",
                  name=f"green({profile.name})", breakpoints=bks,
                  left_h1=left_h1, right_h1=right_h1,
                  params={"profile": profile.name, "poles": poles})


@dataclass(frozen=True)
class IsoperimetricReport:
    """Pointwise comparison of a weight against the round-model weight."""

    passed: bool
    min_slack: float
    argmin: float
    min_slack_far: float | None
    argmin_far: float | None
    tol: float

    def record(self) -> dict:
        return {
            "passed": self.passed,
            "min_slack": self.min_slack,
            "argmin": self.argmin,
            "min_slack_far": self.min_slack_far,
            "argmin_far": self.argmin_far,
            "tol": self.tol,
        }


def isoperimetric_check(weight: Weight, curvature_bound: float = 1.0,
                        n_grid: int = 4096, tol: float = 1e-8) -> IsoperimetricReport:
    """Check G(a) >= a (4 pi - a) pointwise after rescaling to curvature 1.

    For weights of closed surfaces the reflected comparison
    ``G(a) >= G*(M - a)`` near the far pole is checked as well.  A failure
    is reported, not raised: it signals that the surface violates the
    curvature bound or that the weight is numerically unsound.
    """
    w = weight if curvature_bound == 1.0 else weight.rescaled(curvature_bound)
    M = w.M
    hi = min(M, FOURPI)
    a = np.linspace(0.0, hi, n_grid)[1:-1]
    a = np.unique(np.concatenate([a, np.geomspace(1e-9 * M, hi / 4, 64)]))
    slack = np.array([w.G(x) - x * (FOURPI - x) for x in a])
    i = int(np.argmin(slack))
    min_slack, argmin = float(slack[i]), float(a[i])
    min_far = arg_far = None
    if w.right_kind == "pole" and M > FOURPI:
        b = np.linspace(max(M - FOURPI, 0.0), M, n_grid)[1:-1]
        b = np.unique(np.concatenate([b, M - np.geomspace(1e-9 * M, FOURPI / 4, 64)]))
        slack_far = np.array([w.G(x) - (M - x) * (FOURPI - (M - x)) for x in b])
        j = int(np.argmin(slack_far))
        min_far, arg_far = float(slack_far[j]), float(b[j])
    bad = min_slack < -tol or (min_far is not None and min_far < -tol)
    return IsoperimetricReport(passed=not bad, min_slack=min_slack,
                               argmin=argmin, min_slack_far=min_far,
                               argmin_far=arg_far, tol=tol)


def _radial_problem(profile: Profile, beta: float, left_bc: str,
                    right_bc: str, offset_rel: float) -> ShootingProblem:
    f, w = profile.f, profile.w
    b2 = beta * beta

    def end(side, bc):
        kind = profile.end_kind(side)
        if kind == "pole":
            if bc not in ("neumann", "dirichlet"):
                raise ValueError(f"unknown boundary condition {bc!r}")
            return EndCondition("pole", exponent=beta)
        if bc not in ("neumann", "dirichlet"):
            raise ValueError(f"unknown boundary condition {bc!r}")
        return EndCondition(bc)

    return ShootingProblem(
        p=lambda t: f(t) / w(t),
        q=(lambda t: 0.0) if beta == 0.0 else
          (lambda t: b2 * w(t) / f(t)),
        w=lambda t: f(t) * w(t),
        x0=0.0, x1=profile.T,
        left=end("left", left_bc), right=end("right", right_bc),
        breakpoints=profile.breakpoints, offset_rel=offset_rel)


def radial_mode_eigenvalue(profile: Profile, flux, n: int, k: int = 0,
                           left_bc: str = "neumann", right_bc: str = "neumann",
                           offset_rel: float = 1e-8, reltol: float = 1e-10,
                           lam_hint: float | None = None,
                           lam_cap: float | None = None) -> float:
    """k-th eigenvalue of the angular-momentum-n radial problem.

    Solves ``-v'' - (f'/f) v' + ((n - nu)^2 / f^2) v = mu v`` with the
    singular condition ``lim f v' = 0`` at axis poles and the requested
    conditions at boundary circles.  The minimum over n of the k = 0 values
    is the first eigenvalue of the surface.
    """
    flux = flux if isinstance(flux, Flux) else reduce_flux(flux)
    beta = abs(float(n - flux.reduced_float))
    if beta == 0.0 and k == 0 and "dirichlet" not in (
            left_bc if profile.left_end == "boundary" else "neumann",
            right_bc if profile.right_end == "boundary" else "neumann"):
        return 0.0
    prob = _radial_problem(profile, beta, left_bc, right_bc, offset_rel)
    return _shoot_eigenvalue(prob, k, lam_hint=lam_hint, lam_cap=lam_cap,
                             reltol=reltol)


def surface_mu1(profile: Profile, flux, window: int = 6,
                boundary_bc: str = "neumann", reltol: float = 1e-10):
    """First eigenvalue of the surface by separation of variables.

    Minimizes the k = 0 radial eigenvalue over n in [-window, window + 1];
    if the minimizer lands on the window edge the window doubles (the
    potential term grows quadratically in n, so the true minimizer is
    interior for any reasonable window).

    Returns (mu1, n_min).
    """
    flux = flux if isinstance(flux, Flux) else reduce_flux(flux)
    for _ in range(4):
        ns = range(-window, window + 2)
        best = None
        hint = None
        for n in ns:
            val = radial_mode_eigenvalue(profile, flux, n, 0,
                                         left_bc=boundary_bc,
                                         right_bc=boundary_bc,
                                         reltol=reltol, lam_hint=hint)
            hint = max(val, 1e-3)
            if best is None or val < best[0]:
                best = (val, n)
        if best[1] not in (-window, window + 1):
            return best
        window *= 2
    raise RuntimeError("minimizing angular momentum kept hitting the window "
                       "edge; the profile data is suspect")


def annulus_modulus(profile: Profile) -> float:
    """Conformal modulus M = (1/2) * integral of dr / f over the profile.

    The annulus is conformally the flat cylinder S^1 x [-M, M]; both ends
    must be boundary circles (the integral diverges at a pole).
    """
    if profile.left_end != "boundary" or profile.right_end != "boundary":
        raise ValueError("the conformal modulus is defined for annuli; both "
                         "ends must be boundary circles")
    grid = profile._grid()
    nodes, wts = np.polynomial.legendre.leggauss(8)
    total = 0.0
    for lo, hi in zip(grid[:-1], grid[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        total += half * sum(wi * profile.w(mid + half * xi) / profile.f(mid + half * xi)
                            for xi, wi in zip(nodes, wts))
    return 0.5 * float(total)


# ---------------------------------------------------------------------------
# model profiles


def sphere(curvature: float = 1.0) -> Profile:
    """Round sphere of constant curvature K, f = sin(sqrt(K) r) / sqrt(K)."""
    if curvature <= 0:
        raise ValueError("curvature must be positive")
    s = math.sqrt(curvature)
    return Profile(name="sphere", T=math.pi / s,
                   f=lambda t: math.sin(s * t) / s,
                   df=lambda t: math.cos(s * t),
                   curvature=lambda t: curvature,
                   left_end="pole", right_end="pole",
                   params={"curvature": curvature})


def cap(radius: float, curvature: float = 1.0) -> Profile:
    """Geodesic cap of the given radius on the curvature-K sphere."""
    if curvature <= 0:
        raise ValueError("curvature must be positive")
    s = math.sqrt(curvature)
    if not 0 < radius < math.pi / s:
        raise ValueError(f"cap radius must lie in (0, pi/sqrt(K)), got {radius:g}")
    return Profile(name="cap", T=radius,
                   f=lambda t: math.sin(s * t) / s,
                   df=lambda t: math.cos(s * t),
                   curvature=lambda t: curvature,
                   left_end="pole", right_end="boundary",
                   params={"radius": radius, "curvature": curvature})


def disk(radius: float) -> Profile:
    """Flat disk, f = r (curvature 0)."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    return Profile(name="disk", T=radius,
                   f=lambda t: t, df=lambda t: 1.0,
                   curvature=lambda t: 0.0,
                   left_end="pole", right_end="boundary",
                   params={"radius": radius})


def flat_cylinder(modulus: float, radius: float = 1.0) -> Profile:
    """Flat cylinder of circumference 2 pi radius and height 2 M radius.

    With radius 1 this is S^1 x [-M, M], the extremal annulus for its
    conformal class.
    """
    if modulus <= 0 or radius <= 0:
        raise ValueError("modulus and radius must be positive")
    length = 2.0 * modulus * radius
    return Profile(name="cylinder", T=length,
                   f=lambda t: radius, df=lambda t: 0.0,
                   curvature=lambda t: 0.0,
                   left_end="boundary", right_end="boundary",
                   params={"modulus": modulus, "radius": radius})


def cigar(length: float) -> Profile:
    """Two unit hemispheres glued to a cylinder of the given length.

    Closed surface of area 2 pi (length + 2); the profile is C^1 with the
    curvature jumping between 1 (caps) and 0 (tube) at the junctions.
    """
    if length < 0:
        raise ValueError("cylinder length must be nonnegative")
    T = math.pi + length
    j1, j2 = 0.5 * math.pi, 0.5 * math.pi + length

    def f(t):
        if t <= j1:
            return math.sin(t)
        if t <= j2:
            return 1.0
        return math.sin(T - t)

    def df(t):
        if t <= j1:
            return math.cos(t)
        if t <= j2:
            return 0.0
        return -math.cos(T - t)

    def K(t):
        return 1.0 if (t < j1 or t > j2) else 0.0

    bks = (j1, j2) if length > 0 else ()
    return Profile(name="cigar", T=T, f=f, df=df, curvature=K,
                   left_end="pole", right_end="pole", breakpoints=bks,
                   params={"length": length})


def half_cigar(length: float) -> Profile:
    """One unit hemisphere glued to an open cylinder (boundary far end)."""
    if length <= 0:
        raise ValueError("cylinder length must be positive")
    T = 0.5 * math.pi + length
    j = 0.5 * math.pi

    def f(t):
        return math.sin(t) if t <= j else 1.0

    def df(t):
        return math.cos(t) if t <= j else 0.0

    return Profile(name="halfcigar", T=T, f=f, df=df,
                   curvature=lambda t: 1.0 if t < j else 0.0,
                   left_end="pole", right_end="boundary", breakpoints=(j,),
                   params={"length": length})


def _spheroid_pieces(a: float, c: float):
    def f(t):
        return a * math.sin(t)

    def df(t):
        return a * math.cos(t)

    def w(t):
        ct, st = math.cos(t), math.sin(t)
        return math.sqrt(a * a * ct * ct + c * c * st * st)

    def K(t):
        ct, st = math.cos(t), math.sin(t)
        den = a * a * ct * ct + c * c * st * st
        return c * c / (den * den)

    return f, df, w, K


def spheroid(a: float, c: float) -> Profile:
    """Ellipsoid of revolution with equatorial semi-axis a and polar c.

    Curvature ranges between c^2/a^4 (at the poles) and 1/c^2 (equator).
    """
    if a <= 0 or c <= 0:
        raise ValueError("semi-axes must be positive")
    f, df, w, K = _spheroid_pieces(a, c)
    return Profile(name="spheroid", T=math.pi, f=f, df=df, w=w, curvature=K,
                   left_end="pole", right_end="pole",
                   params={"a": a, "c": c})


def half_spheroid(a: float, c: float) -> Profile:
    """Half of a spheroid, cut at the equator (boundary circle f = a)."""
    if a <= 0 or c <= 0:
        raise ValueError("semi-axes must be positive")
    f, df, w, K = _spheroid_pieces(a, c)
    return Profile(name="halfspheroid", T=0.5 * math.pi, f=f, df=df, w=w,
                   curvature=K, left_end="pole", right_end="boundary",
                   params={"a": a, "c": c})


def perturbed_cap(radius: float, amp: float) -> Profile:
    """Cap with radius profile sin(r) (1 + amp sin^2 r).

    The curvature is (1 - amp (6 - 9 sin^2 r)) / (1 + amp sin^2 r), which
    stays <= 1 for amp > 0 as long as sin^2 r <= 3/4 (radius <= pi/3).
    """
    if radius <= 0:
        raise ValueError("radius must be positive")

    def f(t):
        s = math.sin(t)
        return s * (1.0 + amp * s * s)

    def df(t):
        s, ct = math.sin(t), math.cos(t)
        return ct * (1.0 + 3.0 * amp * s * s)

    def K(t):
        s2 = math.sin(t) ** 2
        return (1.0 - amp * (6.0 - 9.0 * s2)) / (1.0 + amp * s2)

    return Profile(name="pcap", T=radius, f=f, df=df, curvature=K,
                   left_end="pole", right_end="boundary",
                   params={"radius": radius, "amp": amp})


def bump_annulus(length: float = 1.0, amp: float = 1.0) -> Profile:
    """Annulus with radius 1 + amp t (length - t), bulging in the middle."""
    if length <= 0:
        raise ValueError("length must be positive")

    def f(t):
        return 1.0 + amp * t * (length - t)

    def df(t):
        return amp * (length - 2.0 * t)

    def K(t):
        return 2.0 * amp / f(t)

    return Profile(name="bumpannulus", T=length, f=f, df=df, curvature=K,
                   left_end="boundary", right_end="boundary",
                   params={"length": length, "amp": amp})


def table_profile(r: np.ndarray, fvals: np.ndarray, name: str = "table") -> Profile:
    """Profile from sampled (r, f) rows using monotone-cubic interpolation.

    At least 64 samples are required; r must be strictly increasing from 0
    and f positive away from endpoints.  An endpoint with f below 1e-6 of
    the maximum is classified as an axis pole.
    """
    r = np.asarray(r, dtype=float)
    fvals = np.asarray(fvals, dtype=float)
    if len(r) < MIN_TABLE_SAMPLES:
        raise ValueError(f"tabulated profiles need at least {MIN_TABLE_SAMPLES} "
                         f"samples, got {len(r)}")
    if r[0] != 0.0:
        raise ValueError("the radius table must start at r = 0")
    if np.any(np.diff(r) <= 0):
        raise ValueError("r samples must be strictly increasing")
    fmax = float(np.max(fvals))
    if np.any(fvals[1:-1] <= 0.0):
        raise ValueError("f must be positive away from the endpoints")
    pole_tol = 1e-6 * fmax
    left = "pole" if fvals[0] <= pole_tol else "boundary"
    right = "pole" if fvals[-1] <= pole_tol else "boundary"
    interp = PchipInterpolator(r, fvals)
    d1 = interp.derivative(1)
    d2 = interp.derivative(2)

    def K(t):
        ft = float(interp(t))
        if ft <= 0:
            return 0.0
        return float(-d2(t) / ft)

    return Profile(name=name, T=float(r[-1]),
                   f=lambda t: float(interp(t)),
                   df=lambda t: float(d1(t)),
                   curvature=K, left_end=left, right_end=right,
                   params={"samples": len(r)})


# ---------------------------------------------------------------------------
# model spec strings and profile files

_MODELS = {
    "sphere": (sphere, 0),
    "cap": (cap, 1),
    "disk": (disk, 1),
    "cylinder": (flat_cylinder, 1),
    "cigar": (cigar, 1),
    "halfcigar": (half_cigar, 1),
    "spheroid": (spheroid, 2),
    "halfspheroid": (half_spheroid, 2),
    "pcap": (perturbed_cap, 2),
    "bumpannulus": (bump_annulus, 0),
}


def parse_number(text: str) -> float:
    """Parse a float, a fraction p/q, or a multiple of pi like '4pi'."""
    text = text.strip().lower()
    if text.endswith("pi"):
        coeff = text[:-2].strip()
        base = 1.0 if not coeff else parse_number(coeff)
        return base * math.pi
    if "/" in text:
        num, den = text.split("/")
        return float(num) / float(den)
    return float(text)


def profile_from_spec(spec: str) -> Profile:
    """Build a model profile from a spec string like 'cigar:3' or 'cap:1.2,0.5'."""
    spec = spec.strip().replace(" ", ":")
    name, _, argtext = spec.partition(":")
    name = name.lower()
    if name not in _MODELS:
        raise ValueError(f"unknown profile model {name!r}; choose from "
                         f"{sorted(_MODELS)}")
    ctor, min_args = _MODELS[name]
    args = [parse_number(p) for p in argtext.split(",") if p.strip()] \
        if argtext else []
    if len(args) < min_args:
        raise ValueError(f"model {name!r} needs at least {min_args} "
                         f"parameter(s)")
    return ctor(*args)


def load_profile(path_or_buf) -> Profile:
    """Read a profile file: a model header line, or 'table' plus r,f rows."""
    if hasattr(path_or_buf, "read"):
        text = path_or_buf.read()
    else:
        with open(path_or_buf) as fh:
            text = fh.read()
    lines = [ln.strip() for ln in text.splitlines()
             if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ValueError("empty profile file")
    header = lines[0]
    if header.lower().split(":")[0].split()[0] != "table":
        return profile_from_spec(header)
    rows = [ln for ln in lines[1:] if not ln.lower().startswith("r,")]
    data = np.array([[float(v) for v in ln.split(",")] for ln in rows])
    return table_profile(data[:, 0], data[:, 1])
