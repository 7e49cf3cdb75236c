"""Finite sections of Toeplitz and Hankel operators with unimodular symbols.

A line symbol u transfers to the circle by plain composition with the
Cayley pullback (multiplication operators conjugate without the H^2
weight), so section entries are Fourier coefficients of the transferred
trace:

    T[j][k] = u_hat(j - k),      H[j][k] = u_hat(-1 - j - k).

Verdicts from section sweeps are desk-scale proxies, never proofs: each
carries its evidence bundle (winding, sigma_min per size, outlier counts,
Hankel decay) and an explicit ``inconclusive`` state.

For symbols built from truncated Clark inner functions the node window
must cover the pullback grid (|t| up to ~2 * resolution / pi), otherwise
the samples near the circle point 1 carry truncation artifacts; see
``required_clark_halfwidth``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ResolutionTooLow, UnwrapFailure
from .hardy import CircleTrace, cayley_nodes
from .inner import _as_inner

_UNIMODULAR_TOL = 1e-8
TAU_INVERTIBLE = 1e-3  # sigma_min floor for the invertibility proxy
TAU_CLUSTER = 0.1  # default clustering band half-width
OUTLIER_GROWTH_RATIO = 1.5  # bounded if counts grow slower than this per step


def required_clark_halfwidth(resolution: int) -> float:
    """Smallest Clark window half-width covering the pullback grid."""
    return float(1.0 / np.tan(np.pi / (2.0 * resolution)))


def symbol_from_inner_pair(theta, clark):
    """u(t) = Theta(t) conj(I(t)) as a vectorized line callable."""
    theta_inner = _as_inner(theta)

    def u(t):
        t = np.asarray(t, dtype=complex)
        return theta_inner(t) * np.conj(clark(t))

    return u


@dataclass(frozen=True)
class Symbol:
    """A unimodular line symbol with its circle trace."""

    trace: CircleTrace
    provenance: dict = field(default_factory=dict, compare=False)

    @property
    def resolution(self) -> int:
        return len(self.trace)

    def coeff(self, k) -> np.ndarray:
        """Fourier coefficients at signed indices k (resolution-limited)."""
        k = np.asarray(k, dtype=int)
        n = self.resolution
        if np.any(np.abs(k) > n // 2 - 1):
            raise ResolutionTooLow(f"index beyond +-{n // 2 - 1}")
        return self.trace.coeffs[k + n // 2]

    def conjugate(self) -> "Symbol":
        return Symbol(
            trace=CircleTrace(samples=np.conj(self.trace.samples)),
            provenance={**self.provenance, "conjugated": True},
        )


def build_symbol(
    u,
    resolution: int = 4096,
    max_resolution: int = 65536,
    unimodular: bool = True,
    provenance: dict | None = None,
) -> Symbol:
    """Sample a line symbol on the pullback grid, doubling resolution until
    the Fourier mass above |k| > N/4 drops below 1e-8 of the total."""
    n = int(resolution)
    while True:
        samples = np.asarray(u(cayley_nodes(n)), dtype=complex)
        trace = CircleTrace(samples=samples)
        mass = trace.tail_mass()
        if mass < 1e-8 or n >= max_resolution:
            break
        n *= 2
    if unimodular:
        dev = float(np.max(np.abs(np.abs(samples) - 1.0)))
        if dev > _UNIMODULAR_TOL:
            raise ValueError(f"symbol modulus deviates from 1 by {dev:.3e}")
    info = dict(provenance or {})
    info["tail_mass"] = mass
    return Symbol(trace=trace, provenance=info)


def _coeff_range(symbol: Symbol, lo: int, hi: int, need: int) -> np.ndarray:
    if symbol.resolution < 4 * need:
        raise ResolutionTooLow(
            f"section size {need} needs circle resolution >= {4 * need}, "
            f"trace has {symbol.resolution}"
        )
    return symbol.coeff(np.arange(lo, hi))


def toeplitz_section(symbol: Symbol, n: int) -> np.ndarray:
    """N x N section T[j][k] = u_hat(j - k)."""
    col = _coeff_range(symbol, 0, n, n)
    row = symbol.coeff(-np.arange(n))
    return scipy.linalg.toeplitz(col, row)


def hankel_section(symbol: Symbol, n: int, offset: int = 0) -> np.ndarray:
    """N x N section H[j][k] = u_hat(-1 - offset - j - k).

    offset > 0 gives the column-shifted block whose norm estimates
    dist(w^offset u, H^infinity); it vanishes with growing offset exactly
    for compact Hankel operators.
    """
    _coeff_range(symbol, 0, 1, n)
    v = symbol.coeff(-1 - offset - np.arange(2 * n - 1))
    return scipy.linalg.hankel(v[:n], v[n - 1 :])


def winding_number(symbol: Symbol) -> tuple[int, float]:
    """Winding of the trace around 0: cyclic unwrapped argument / 2 pi.

    Returns (integer winding, rounding residual).  UnwrapFailure when a
    consecutive jump reaches pi (symbol too rough at this resolution).
    """
    s = symbol.trace.samples
    mod = np.abs(s)
    if np.min(mod) < 0.5:
        raise UnwrapFailure("trace passes near 0; winding undefined")
    ratio = np.roll(s, -1) / s
    jumps = np.angle(ratio)
    if np.max(np.abs(jumps)) >= np.pi * (1.0 - 1e-9):
        raise UnwrapFailure("phase jump >= pi between neighboring samples")
    total = float(np.sum(jumps)) / (2.0 * np.pi)
    w = int(np.round(total))
    return w, abs(total - w)


@dataclass(frozen=True)
class SectionSpectrum:
    """Singular values of section sweeps with clustering metadata."""

    sizes: list[int]
    sigma_min: list[float]
    singular_values: list[np.ndarray]
    winding: int | None
    tau: float
    outlier_counts: list[int]


def section_spectrum(symbol: Symbol, sizes, tau: float = TAU_CLUSTER) -> SectionSpectrum:
    """Singular values of T_N over a size sweep; counts sigma outside
    [1 - tau, 1 + tau] per size."""
    sizes = [int(n) for n in sizes]
    sigmas = []
    for n in sizes:
        sv = scipy.linalg.svdvals(toeplitz_section(symbol, n))
        sigmas.append(sv)
    try:
        w, _ = winding_number(symbol)
        jumps = np.angle(np.roll(symbol.trace.samples, -1) / symbol.trace.samples)
        if np.max(np.abs(jumps)) > 0.95 * np.pi:
            # near-pi jumps mean the trace is unresolved somewhere (cyclic
            # increment sums close to an exact integer regardless), so the
            # computed winding is untrustworthy
            w = None
    except UnwrapFailure:
        w = None
    outliers = [int(np.sum((sv < 1.0 - tau) | (sv > 1.0 + tau))) for sv in sigmas]
    return SectionSpectrum(
        sizes=sizes,
        sigma_min=[float(sv[-1]) for sv in sigmas],
        singular_values=sigmas,
        winding=w,
        tau=tau,
        outlier_counts=outliers,
    )


@dataclass(frozen=True)
class HankelSummary:
    """Hankel section decay data plus the shifted-block compactness proxy.

    Plain-section singular values of symbols with jumps collapse like
    Hilbert-matrix sections (epsilon-rank ~ log N), so raw sigma decay
    cannot witness non-compactness; they are still reported.  The flag
    instead tracks r(K) = ||K x K block at column offset K|| / sigma_0 for
    K = N/8, N/4, N/2 -- a section proxy for dist(w^K u, H^infinity),
    which vanishes with K exactly for compact Hankel operators.  Measured
    log-log slopes: smooth a + b~ symbols ~ -6, matched Clark pairs with a
    decaying perturbation ~ -0.5, sign-type jumps ~ +0.06, non-decaying
    perturbations ~ +0.16; the flag freezes the boundary at -0.35.
    """

    size: int
    sigma0: float
    sigmas: np.ndarray
    decay_exponent: float | None
    tail_offsets: list[int]
    tail_ratios: list[float]
    tail_slope: float | None
    compact_flag: bool


HANKEL_TAIL_SLOPE = -0.35
HANKEL_TAIL_FLOOR = 1e-6  # ratios below this are compact regardless of slope
HANKEL_TAIL_CEIL = 0.3  # ratios above this are non-compact regardless of slope


def hankel_decay(symbol: Symbol, n: int) -> HankelSummary:
    """Summarize Hankel decay at section size n (see HankelSummary)."""
    sv = scipy.linalg.svdvals(hankel_section(symbol, n))
    sigma0 = float(sv[0])
    if sigma0 < 1e-12:
        return HankelSummary(n, sigma0, sv, None, [], [], None, True)
    offsets = [max(4, n // 8), max(8, n // 4), max(16, n // 2)]
    ratios = []
    for off in offsets:
        shifted = scipy.linalg.svdvals(hankel_section(symbol, off, offset=off))
        ratios.append(float(shifted[0] / sigma0))
    slope = float(
        np.polyfit(np.log(offsets), np.log(np.maximum(ratios, 1e-300)), 1)[0]
    )
    if ratios[-1] < HANKEL_TAIL_FLOOR:
        compact = True
    elif ratios[-1] > HANKEL_TAIL_CEIL:
        compact = False
    else:
        compact = slope <= HANKEL_TAIL_SLOPE
    mask = sv > 1e-14 * sigma0
    m = np.arange(1, n + 1)[mask]
    exponent = None
    if np.sum(mask) >= 4:
        fit, _ = np.polyfit(np.log(m), np.log(sv[mask]), 1)
        exponent = float(-fit)
    return HankelSummary(
        size=n,
        sigma0=sigma0,
        sigmas=sv,
        decay_exponent=exponent,
        tail_offsets=offsets,
        tail_ratios=ratios,
        tail_slope=slope,
        compact_flag=compact,
    )


@dataclass(frozen=True)
class Verdict:
    """Outcome of a finite-section detector with its evidence bundle."""

    verdict: str  # "invertible" | "not_invertible" | "yes" | "no" | "inconclusive"
    evidence: dict

    def __bool__(self):
        return self.verdict in ("invertible", "yes")


def invertibility_verdict(symbol: Symbol, sizes, tau_inv: float = TAU_INVERTIBLE) -> Verdict:
    """Finite-section invertibility proxy.

    invertible: winding 0, sigma_min floor above tau_inv across the sweep
    and stabilized (last-two relative change < 20%).  not_invertible:
    nonzero winding or sigma_min trending to 0 (decreasing power-law fit).
    Everything else: inconclusive.
    """
    sizes = [int(n) for n in sizes]
    if len(sizes) < 3 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("need at least 3 strictly increasing sizes")
    spec = section_spectrum(symbol, sizes)
    smin = np.asarray(spec.sigma_min)
    evidence = {
        "sizes": sizes,
        "sigma_min": [float(x) for x in smin],
        "winding": spec.winding,
        "tau_inv": tau_inv,
    }
    rel_change = abs(smin[-1] - smin[-2]) / max(smin[-1], 1e-300)
    evidence["last_two_relative_change"] = float(rel_change)
    stabilized = bool(np.min(smin) > tau_inv and rel_change < 0.2)
    if spec.winding == 0 and stabilized:
        evidence["reason"] = "winding 0 and sigma_min floor stabilized above tau_inv"
        return Verdict("invertible", evidence)
    if spec.winding is not None and spec.winding != 0:
        evidence["reason"] = f"winding {spec.winding} != 0"
        return Verdict("not_invertible", evidence)
    if smin[-1] < 1e-12:
        evidence["reason"] = "sigma_min vanishes at section level"
        return Verdict("not_invertible", evidence)
    if np.all(np.diff(smin) < 0) and rel_change >= 0.2:
        slope = np.polyfit(np.log(sizes), np.log(np.maximum(smin, 1e-300)), 1)[0]
        evidence["powerlaw_slope"] = float(slope)
        if slope <= -0.4:
            evidence["reason"] = "sigma_min fits a decreasing power law"
            return Verdict("not_invertible", evidence)
    if spec.winding is None:
        evidence["reason"] = "winding unresolved at this resolution; no conclusive sigma trend"
    else:
        evidence["reason"] = "no stable floor and no clear decay"
    return Verdict("inconclusive", evidence)


def unitary_plus_compact_verdict(
    symbol: Symbol, sizes, tau: float = TAU_CLUSTER
) -> Verdict:
    """Detector for T_u = unitary + compact at desk scale.

    yes: winding 0, the number of singular values outside [1-tau, 1+tau]
    stays bounded across the sweep (count growth below 1.5x per step), and
    Hankel sections of both u and conj(u) carry the compact decay flag
    (quasicontinuity proxy).  Hard failures give no; mixed evidence gives
    inconclusive.
    """
    sizes = [int(n) for n in sizes]
    if len(sizes) < 3 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("need at least 3 strictly increasing sizes")
    spec = section_spectrum(symbol, sizes, tau=tau)
    h_u = hankel_decay(symbol, sizes[-1])
    h_uc = hankel_decay(symbol.conjugate(), sizes[-1])
    counts = spec.outlier_counts
    growing = any(
        c2 > OUTLIER_GROWTH_RATIO * max(c1, 1) + 1 for c1, c2 in zip(counts, counts[1:])
    )
    evidence = {
        "sizes": sizes,
        "tau": tau,
        "winding": spec.winding,
        "outlier_counts": counts,
        "outliers_growing": bool(growing),
        "hankel_u_compact": h_u.compact_flag,
        "hankel_conj_u_compact": h_uc.compact_flag,
        "hankel_u_tail_ratios": h_u.tail_ratios,
        "hankel_conj_u_tail_ratios": h_uc.tail_ratios,
        "hankel_u_tail_slope": h_u.tail_slope,
        "hankel_conj_u_tail_slope": h_uc.tail_slope,
        "sigma_min": spec.sigma_min,
    }
    if growing:
        evidence["reason"] = "outlier count grows with section size"
        return Verdict("no", evidence)
    if not h_u.compact_flag and not h_uc.compact_flag:
        evidence["reason"] = "both Hankel tail norms fail the compact threshold"
        return Verdict("no", evidence)
    if spec.winding is None:
        evidence["reason"] = "winding unresolved"
        return Verdict("inconclusive", evidence)
    if spec.winding != 0:
        evidence["reason"] = f"winding {spec.winding} != 0"
        return Verdict("no", evidence)
    if h_u.compact_flag and h_uc.compact_flag:
        evidence["reason"] = "winding 0, bounded outliers, compact Hankel flags"
        return Verdict("yes", evidence)
    evidence["reason"] = "one-sided Hankel compactness; evidence mixed"
    return Verdict("inconclusive", evidence)
