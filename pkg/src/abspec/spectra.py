"""Closed-form Aharonov-Bohm spectra for the model geometries.

Three geometries admit exact spectra once the flux is gauge-reduced to
``nu`` in [0, 1/2]:

* the round sphere punctured at two antipodal points, where every
  eigenvalue has the form ``alpha (alpha + 1)`` with ``alpha = |n - nu| + k``;
* the hemisphere with the pole of the potential at its center, whose
  Dirichlet and Neumann spectra are the same alpha-family with parity-split
  multiplicities (their disjoint union reassembles the sphere spectrum);
* the flat cylinder S^1 x [-M, M], with eigenvalues
  ``|n - nu|^2 + k^2 pi^2 / (4 M^2)``.

Eigenvalue comparison and merging is done on exact symbolic representatives
(Fractions) whenever the flux is rational; floats are produced only at
output time.  Irrational fluxes fall back to a relative tolerance of 1e-12
and the resulting spectrum carries a warning flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .flux import Flux, reduce_flux

HALF = Fraction(1, 2)
MERGE_RTOL = 1e-12


@dataclass(frozen=True)
class SpectrumLine:
    """One eigenvalue with multiplicity and its generating indices.

    ``alpha`` is the degree parameter for sphere-family lines (the
    eigenvalue equals ``alpha (alpha + 1)`` times the curvature) and the
    transverse frequency ``|n - nu|`` for cylinder lines (the eigenvalue
    equals ``alpha^2 + k^2 pi^2 / (4 M^2)``).
    """

    value: float
    multiplicity: int
    branch_n: int
    branch_k: int
    alpha: Fraction | float

    def record(self) -> dict:
        return {
            "value": self.value,
            "multiplicity": self.multiplicity,
            "branch_n": self.branch_n,
            "branch_k": self.branch_k,
            "symbolic_alpha": str(self.alpha),
        }


@dataclass(frozen=True)
class Spectrum:
    """Sorted, merged eigenvalue list for one geometry and flux."""

    geometry: str
    flux: Flux
    lines: tuple[SpectrumLine, ...]
    inexact_merge: bool = False
    params: dict = field(default_factory=dict)

    @property
    def values(self) -> list[float]:
        """Eigenvalues repeated according to multiplicity."""
        out = []
        for line in self.lines:
            out.extend([line.value] * line.multiplicity)
        return out

    @property
    def alphas(self) -> list:
        """Symbolic representatives repeated according to multiplicity."""
        out = []
        for line in self.lines:
            out.extend([line.alpha] * line.multiplicity)
        return out

    def records(self) -> list[dict]:
        return [line.record() for line in self.lines]


def _merge_lines(entries, count, inexact):
    """Sort (alpha, value, mult, n, k) entries, merge ties, trim to count.

    Exact entries merge on equal symbolic keys; inexact ones on relative
    value agreement within MERGE_RTOL.
    """
    entries = sorted(entries, key=lambda e: e[1])
    merged = []
    used_tol = False
    for alpha, value, mult, n, k in entries:
        if merged:
            pa, pv, pm, pn, pk = merged[-1]
            same = (alpha == pa) if not inexact else (
                abs(value - pv) <= MERGE_RTOL * max(1.0, abs(pv)))
            if same:
                if alpha != pa:
                    used_tol = True
                merged[-1] = (pa, pv, pm + mult, pn, pk)
                continue
        merged.append((alpha, value, mult, n, k))
    lines = []
    total = 0
    for alpha, value, mult, n, k in merged:
        if total + mult > count:
            mult = count - total
        lines.append(SpectrumLine(value=value, multiplicity=mult,
                                  branch_n=n, branch_k=k, alpha=alpha))
        total += mult
        if total >= count:
            break
    if total < count:
        raise RuntimeError("internal truncation error: not enough lines generated")
    return tuple(lines), used_tol


def _sphere_entries(nu, curvature, n_max):
    """Raw sphere lines for |family index| <= n_max, before merging."""
    entries = []
    if nu == 0:
        for ell in range(n_max + 1):
            alpha = Fraction(ell) if isinstance(nu, Fraction) else float(ell)
            entries.append((alpha, curvature * float(alpha * (alpha + 1)),
                            2 * ell + 1, ell, 0))
        return entries
    for n in range(1, n_max + 1):
        alpha = n - nu
        entries.append((alpha, curvature * float(alpha * (alpha + 1)), n, n, 0))
    for m in range(0, n_max + 1):
        alpha = m + nu
        entries.append((alpha, curvature * float(alpha * (alpha + 1)),
                        m + 1, -m, 0))
    return entries


def sphere_spectrum(flux, curvature: float = 1.0, count: int = 10) -> Spectrum:
    """First ``count`` eigenvalues of the punctured round sphere.

    For reduced flux nu in (0, 1/2) the spectrum is the union of the two
    sequences ``(n - nu)(n - nu + 1)`` (n >= 1, multiplicity n) and
    ``(|n| + nu)(|n| + nu + 1)`` (n <= 0, multiplicity |n| + 1); at
    nu = 1/2 the sequences coincide pairwise and give multiplicity 2n; at
    nu = 0 the ordinary Laplace-Beltrami spectrum l(l+1) with multiplicity
    2l + 1 is recovered.  All values are scaled by ``curvature``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if curvature <= 0:
        raise ValueError("curvature must be positive")
    flux = _as_flux(flux)
    nu = flux.reduced
    if nu == HALF:
        # coinciding families: alpha = n - 1/2 with multiplicity 2n
        entries = []
        n_max = _grow_bound(count)
        for n in range(1, n_max + 1):
            alpha = n - (nu if isinstance(nu, Fraction) else HALF)
            entries.append((alpha, curvature * float(alpha * (alpha + 1)),
                            2 * n, n, 0))
        lines, used_tol = _merge_lines(entries, count, inexact=False)
        return Spectrum("sphere", flux, lines, used_tol,
                        {"curvature": curvature})
    n_max = _grow_bound(count)
    while True:
        entries = _sphere_entries(nu, curvature, n_max)
        # completeness: all alpha below the next ungenerated candidates
        cutoff = float(min(n_max + 1 - nu, n_max + 1 + nu)) if nu != 0 else n_max + 1.0
        safe = [e for e in entries if float(e[0]) < cutoff]
        if sum(e[2] for e in safe) >= count:
            lines, used_tol = _merge_lines(safe, count, inexact=not flux.exact)
            return Spectrum("sphere", flux, lines, used_tol,
                            {"curvature": curvature})
        n_max *= 2


def _hemisphere_entries(nu, bc, n_max):
    entries = []
    if nu == 0:
        start = 1 if bc == "dirichlet" else 0
        for ell in range(start, n_max + 1):
            mult = ell if bc == "dirichlet" else ell + 1
            alpha = Fraction(ell) if isinstance(nu, Fraction) else float(ell)
            entries.append((alpha, float(alpha * (alpha + 1)), mult, ell, 0))
        return entries
    if nu == HALF:
        for n in range(1, n_max + 1):
            if bc == "dirichlet":
                mult = n - 1 if n % 2 else n
            else:
                mult = n + 1 if n % 2 else n
            if mult == 0:
                continue
            alpha = n - (nu if isinstance(nu, Fraction) else HALF)
            entries.append((alpha, float(alpha * (alpha + 1)), mult, n, 0))
        return entries
    for n in range(1, n_max + 1):
        if bc == "dirichlet":
            mult = (n - 1) // 2 if n % 2 else n // 2
        else:
            mult = (n + 1) // 2 if n % 2 else n // 2
        if mult:
            alpha = n - nu
            entries.append((alpha, float(alpha * (alpha + 1)), mult, n, 0))
    for m in range(0, n_max + 1):
        if bc == "dirichlet":
            mult = (m + 1) // 2 if m % 2 else m // 2
        else:
            mult = (m + 1) // 2 if m % 2 else (m + 2) // 2
        if mult:
            alpha = m + nu
            entries.append((alpha, float(alpha * (alpha + 1)), mult, -m, 0))
    return entries


def hemisphere_spectrum(flux, bc: str = "neumann", count: int = 10) -> Spectrum:
    """First ``count`` hemisphere eigenvalues with the pole at the center.

    The eigenvalues are the sphere values; multiplicities follow the
    parity-split tables (odd radial parts restrict to Dirichlet
    eigenfunctions, even ones to Neumann).  Lines whose table multiplicity
    is zero are absent from the spectrum.  Unit curvature.
    """
    if bc not in ("dirichlet", "neumann"):
        raise ValueError(f"bc must be dirichlet or neumann, got {bc!r}")
    if count < 1:
        raise ValueError("count must be >= 1")
    flux = _as_flux(flux)
    nu = flux.reduced
    n_max = _grow_bound(count) + 2
    while True:
        entries = _hemisphere_entries(nu, bc, n_max)
        cutoff = (n_max + 1.0) if nu in (0, HALF) else float(
            min(n_max + 1 - nu, n_max + 1 + nu))
        safe = [e for e in entries if float(e[0]) < cutoff]
        if sum(e[2] for e in safe) >= count:
            lines, used_tol = _merge_lines(safe, count, inexact=not flux.exact)
            return Spectrum(f"hemisphere-{bc}", flux, lines, used_tol, {"bc": bc})
        n_max *= 2


def cylinder_spectrum(flux, modulus: float, count: int = 10) -> Spectrum:
    """First ``count`` eigenvalues of the flat cylinder S^1 x [-M, M].

    The spectrum is ``{ |n - nu|^2 + k^2 pi^2 / (4 M^2) }`` over n in Z and
    k >= 0; the lowest value is ``reduced(nu)^2`` independently of M.  Lines
    merge exactly when both the transverse frequency |n - nu| and the
    longitudinal index k agree (for rational flux and modulus no other
    coincidence is possible).
    """
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    if count < 1:
        raise ValueError("count must be >= 1")
    flux = _as_flux(flux)
    nu = flux.reduced
    M = float(modulus)
    kfac = math.pi ** 2 / (4.0 * M * M)
    n_max, k_max = 2, 2
    while True:
        seen = {}
        for n in range(-n_max, n_max + 1):
            t = abs(n - nu)
            tv = float(t) ** 2
            for k in range(0, k_max + 1):
                key = (t, k)
                if key in seen:
                    seen[key][2] += 1
                else:
                    seen[key] = [t, tv + k * k * kfac, 1, n, k]
        cutoff = min(float(n_max + 1 - nu) ** 2, (k_max + 1) ** 2 * kfac)
        entries = [(t, v, m, n, k) for t, v, m, n, k in seen.values()
                   if v < cutoff]
        if sum(e[2] for e in entries) >= count:
            lines, used_tol = _merge_lines(entries, count,
                                           inexact=not flux.exact)
            return Spectrum("cylinder", flux, lines, used_tol,
                            {"modulus": M})
        n_max *= 2
        k_max *= 2


@dataclass(frozen=True)
class DecompositionReport:
    """Multiset comparison of sphere vs Dirichlet+Neumann hemisphere lines."""

    passed: bool
    count: int
    flux: Flux
    mismatches: tuple
    inexact: bool

    def record(self) -> dict:
        return {
            "passed": self.passed,
            "count": self.count,
            "flux": float(self.flux.reduced),
            "mismatches": [list(m) for m in self.mismatches],
            "inexact": self.inexact,
        }


def sphere_decomposition_check(flux, count: int = 100) -> DecompositionReport:
    """Check that the sphere spectrum splits into the hemisphere spectra.

    Compares the first ``count`` sphere eigenvalues (with multiplicity,
    in symbolic alpha form) against the merged Dirichlet + Neumann
    hemisphere spectra and reports any positional mismatch.
    """
    flux = _as_flux(flux)
    sph = sphere_spectrum(flux, 1.0, count)
    dir_ = hemisphere_spectrum(flux, "dirichlet", count)
    neu = hemisphere_spectrum(flux, "neumann", count)
    combined = {}
    for line in dir_.lines + neu.lines:
        key = line.alpha
        if key in combined:
            combined[key] += line.multiplicity
        else:
            combined[key] = line.multiplicity
    merged = []
    for alpha in sorted(combined, key=float):
        merged.extend([alpha] * combined[alpha])
    merged = merged[:count]
    sphere_alphas = sph.alphas[:count]
    mismatches = []
    for i, (sa, ha) in enumerate(zip(sphere_alphas, merged)):
        if flux.exact:
            same = sa == ha
        else:
            same = abs(float(sa) - float(ha)) <= MERGE_RTOL * max(1.0, float(sa))
        if not same:
            mismatches.append((i, sa, ha))
    if len(merged) < count:
        mismatches.append((len(merged), "missing", "missing"))
    return DecompositionReport(passed=not mismatches, count=count, flux=flux,
                               mismatches=tuple(mismatches),
                               inexact=not flux.exact)


def _as_flux(flux) -> Flux:
    if isinstance(flux, Flux):
        return flux
    return reduce_flux(flux)


def _grow_bound(count: int) -> int:
    # family n carries ~n multiplicity, so n ~ sqrt(2 count) suffices to start
    return max(4, int(math.isqrt(2 * count)) + 2)
