"""Level-set weights for the reduced 1-D eigenproblem, and model weights.

A ``Weight`` is a positive function G on (0, M) multiplying the derivative
term of the reduced problem ``-(G f')' + (4 pi^2 nu^2 / G) f = kappa f``.
Weights extracted from a surface behave like ``4 pi a`` near an interior
pole of the potential (and like ``4 pi (M - a)`` near a second pole), and
have a positive limit at an end corresponding to a boundary circle.

The extremal comparison weight is ``star``: G*(a) = a (4 pi - a), the weight
of a round cap (or, at M = 4 pi, of the full round sphere with antipodal
poles).  ``star_eps`` builds the plateau truncations of G* used to compare
surfaces whose area exceeds 4 pi against the sphere, and ``eps_max`` finds
how large the plateau level may be while staying below a given weight.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

FOURPI = 4.0 * math.pi
FOURPI2 = 4.0 * math.pi ** 2


@dataclass(frozen=True)
class Weight:
    """Coefficient G of the reduced problem on (0, M).

    ``left_kind``/``right_kind`` are "pole" (G ~ 4 pi * dist, the potential
    pole sits at that end) or "regular" (positive limit, boundary circle).
    ``left_h1``/``right_h1`` are the first-order slopes of
    ``G / (4 pi dist) - 1`` at pole ends, used for the indicial series of
    the shooting solver; None means "estimate numerically".
    """

    M: float
    G: Callable[[float], float]
    left_kind: str = "pole"
    right_kind: str = "regular"
    name: str = ""
    breakpoints: tuple = ()
    left_h1: float | None = None
    right_h1: float | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        for kind in (self.left_kind, self.right_kind):
            if kind not in ("pole", "regular"):
                raise ValueError(f"endpoint kind must be pole or regular, got {kind!r}")
        if self.M <= 0:
            raise ValueError("M must be positive")

    def __call__(self, a):
        return self.G(a)

    def kind(self, side: str) -> str:
        return self.left_kind if side == "left" else self.right_kind

    def h1(self, side: str) -> float:
        """Slope of G/(4 pi d) - 1 in the distance d to the given pole end."""
        stored = self.left_h1 if side == "left" else self.right_h1
        if stored is not None:
            return stored
        d1 = 1e-7 * self.M
        d2 = 2.0 * d1
        if side == "left":
            g1, g2 = self.G(d1), self.G(d2)
        else:
            g1, g2 = self.G(self.M - d1), self.G(self.M - d2)
        h = lambda g, d: g / (FOURPI * d) - 1.0
        return (h(g2, d2) - h(g1, d1)) / (d2 - d1)

    def rescaled(self, kappa: float) -> "Weight":
        """Weight after scaling the metric by ``kappa`` (areas scale by kappa)."""
        if kappa <= 0:
            raise ValueError("scale must be positive")
        base = self.G
        M = self.M
        return replace(
            self, M=kappa * M,
            G=lambda a, _b=base, _k=kappa: _k * _b(a / _k),
            breakpoints=tuple(kappa * b for b in self.breakpoints),
            left_h1=None if self.left_h1 is None else self.left_h1 / kappa,
            right_h1=None if self.right_h1 is None else self.right_h1 / kappa,
            name=self.name + f"*scaled({kappa:g})")

    def restricted(self, M_new: float, right_kind: str = "regular") -> "Weight":
        """Restriction of G to (0, M_new); the left end keeps its kind."""
        if not 0 < M_new <= self.M:
            raise ValueError("restriction length out of range")
        return replace(self, M=M_new, right_kind=right_kind,
                       breakpoints=tuple(b for b in self.breakpoints if b < M_new),
                       right_h1=None,
                       name=self.name + f"|(0,{M_new:g})")

    def sample(self, n: int = 2001) -> tuple[np.ndarray, np.ndarray]:
        """Graded sample of (a, G(a)) suitable for serialization."""
        interior = np.linspace(0.0, self.M, n)[1:-1]
        pieces = [interior]
        d0 = 1e-9 * self.M
        if self.left_kind == "pole":
            pieces.append(np.geomspace(d0, interior[0], 48))
        if self.right_kind == "pole":
            pieces.append(self.M - np.geomspace(d0, self.M - interior[-1], 48))
        a = np.unique(np.concatenate(pieces))
        g = np.array([self.G(x) for x in a])
        return a, g


def star(M: float) -> Weight:
    """Round-cap comparison weight G*(a) = a (4 pi - a) on (0, M), M <= 4 pi.

    The right end is a pole exactly at M = 4 pi (full sphere), otherwise a
    regular boundary end.
    """
    if not 0 < M <= FOURPI * (1.0 + 1e-12):
        raise ValueError(f"star weight needs 0 < M <= 4 pi, got {M:g}")
    closed = abs(M - FOURPI) <= 1e-12 * FOURPI
    M = FOURPI if closed else float(M)
    return Weight(
        M=M,
        G=lambda a: a * (FOURPI - a),
        left_kind="pole",
        right_kind="pole" if closed else "regular",
        name="star",
        left_h1=-1.0 / FOURPI,
        right_h1=-1.0 / FOURPI if closed else None,
        params={"M": M})


def star_eps(M: float, eps: float, closed: bool = True) -> Weight:
    """Plateau truncation of G* for total mass M > 4 pi.

    The weight follows G* up to ``a_eps``, sits at the constant plateau
    ``eps`` across the middle, and (in the closed variant) climbs back along
    the reflection G*(M - a) near the far end.  ``a_eps`` and ``b_eps`` are
    the two solutions of G*(a) = eps, so the construction is continuous.
    """
    if not 0 < eps < FOURPI2:
        raise ValueError(f"eps must lie in (0, (2 pi)^2), got {eps:g}")
    if M <= FOURPI:
        raise ValueError(f"star_eps needs M > 4 pi, got {M:g}")
    root = math.sqrt(FOURPI2 - eps)
    a_eps = 2.0 * math.pi + root
    b_eps = 2.0 * math.pi - root

    if closed:
        hi = M - b_eps

        def G(a, _ae=a_eps, _hi=hi, _M=M, _eps=eps):
            if a <= _ae:
                return a * (FOURPI - a)
            if a < _hi:
                return _eps
            d = _M - a
            return d * (FOURPI - d)

        return Weight(M=M, G=G, left_kind="pole", right_kind="pole",
                      name="star_eps", breakpoints=(a_eps, hi),
                      left_h1=-1.0 / FOURPI, right_h1=-1.0 / FOURPI,
                      params={"M": M, "eps": eps, "a_eps": a_eps,
                              "b_eps": b_eps, "closed": True})

    def G(a, _ae=a_eps, _eps=eps):
        return a * (FOURPI - a) if a <= _ae else _eps

    return Weight(M=M, G=G, left_kind="pole", right_kind="regular",
                  name="star_eps", breakpoints=(a_eps,),
                  left_h1=-1.0 / FOURPI,
                  params={"M": M, "eps": eps, "a_eps": a_eps, "closed": False})


def eps_max(weight: Weight, n_grid: int = 4096, n_scan: int = 120,
            eps_floor: float = 1e-10) -> float:
    """Largest plateau level eps (on a scan grid) with G >= G*_eps pointwise.

    Scans a geometric ladder downward from just below the maximum of G* and
    bisects between the first passing level and the last failing one.
    Returns 0.0 if even the smallest scanned level fails, which signals
    that the weight does not dominate any plateau truncation (the surface
    lies outside the admissible curvature class, or a numerical fault).
    """
    M = weight.M
    if M <= FOURPI:
        raise ValueError("eps_max needs a weight with M > 4 pi")
    closed = weight.right_kind == "pole"
    grid = _dominance_grid(M, n_grid)
    gvals = np.array([weight.G(a) for a in grid])

    def dominates(eps):
        model = star_eps(M, eps, closed=closed)
        mvals = np.array([model.G(a) for a in grid])
        return np.all(gvals >= mvals - 1e-13 * np.maximum(1.0, np.abs(mvals)))

    ladder = np.geomspace(FOURPI2 * (1.0 - 1e-6), eps_floor, n_scan)
    prev_fail = None
    for eps in ladder:
        if dominates(eps):
            if prev_fail is None:
                return float(eps)
            lo, hi = eps, prev_fail
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if dominates(mid):
                    lo = mid
                else:
                    hi = mid
            return float(lo)
        prev_fail = eps
    return 0.0


def _dominance_grid(M, n_grid):
    interior = np.linspace(0.0, M, n_grid)[1:-1]
    ends = np.geomspace(1e-9 * M, M / 4.0, 64)
    return np.unique(np.concatenate([interior, ends, M - ends]))


def bumped(weight: Weight, amplitude: float, lo: float, hi: float) -> Weight:
    """Weight multiplied by 1 + amplitude * bump on (lo, hi).

    The bump is sin^2-shaped, vanishing to first order at lo and hi, so
    pole asymptotics are untouched.  Nonnegative amplitudes produce a
    pointwise dominating weight (used by the monotonicity property suite).
    """
    if not 0 <= lo < hi <= weight.M:
        raise ValueError("bump support must satisfy 0 <= lo < hi <= M")
    base = weight.G
    span = hi - lo

    def G(a, _b=base, _lo=lo, _hi=hi, _s=span, _amp=amplitude):
        g = _b(a)
        if _lo < a < _hi:
            s = math.sin(math.pi * (a - _lo) / _s)
            g = g * (1.0 + _amp * s * s)
        return g

    return Weight(M=weight.M, G=G, left_kind=weight.left_kind,
                  right_kind=weight.right_kind,
                  name=weight.name + f"+bump({amplitude:g})",
                  breakpoints=tuple(sorted(set(weight.breakpoints) | {lo, hi})),
                  left_h1=weight.left_h1, right_h1=weight.right_h1,
                  params=dict(weight.params, bump=(amplitude, lo, hi)))


def save_weight(weight: Weight, path_or_buf, n: int = 2001) -> None:
    """Write a weight as a sampled "a,G" table with a describing header."""
    a, g = weight.sample(n)
    lines = [f"# M={weight.M:.17g} left={weight.left_kind} right={weight.right_kind}",
             "a,G"]
    lines.extend(f"{ai:.17g},{gi:.17g}" for ai, gi in zip(a, g))
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_buf, "write"):
        path_or_buf.write(text)
    else:
        with open(path_or_buf, "w") as fh:
            fh.write(text)


def load_weight(path_or_buf) -> Weight:
    """Read a sampled "a,G" weight table written by :func:`save_weight`."""
    if hasattr(path_or_buf, "read"):
        text = path_or_buf.read()
    else:
        with open(path_or_buf) as fh:
            text = fh.read()
    header = None
    rows = []
    for line in io.StringIO(text):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            header = line[1:].strip()
            continue
        if line.lower().startswith("a,"):
            continue
        a_str, g_str = line.split(",")
        rows.append((float(a_str), float(g_str)))
    if header is None or not rows:
        raise ValueError("weight table needs a '# M=... left=... right=...' "
                         "header and at least one a,G row")
    meta = dict(item.split("=") for item in header.split())
    M = float(meta["M"])
    a = np.array([r[0] for r in rows])
    g = np.array([r[1] for r in rows])
    order = np.argsort(a)
    a, g = a[order], g[order]
    from scipy.interpolate import CubicSpline
    spline = CubicSpline(a, g)
    return Weight(M=M, G=lambda x, _s=spline: float(_s(x)),
                  left_kind=meta.get("left", "pole"),
                  right_kind=meta.get("right", "regular"),
                  name="table")
