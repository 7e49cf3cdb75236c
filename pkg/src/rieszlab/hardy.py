"""Hardy-space machinery on the line and the circle.

The Cayley transform phi(z) = (z - i)/(z + i) maps the upper half-plane
onto the disc.  The unitary identification of the Hardy spaces is

    (M F)(t) = sqrt(2)/(t + i) * F(phi(t)),

so a line function f and its circle trace F satisfy
F(w_j) = (t_j + i)/sqrt(2) * f(t_j) on the pullback nodes t_j.  The circle
grid is offset half a step, theta_j = 2 pi (j + 1/2)/N, so t_j = -cot(theta_j/2)
stays finite; analytic functions come out with nonnegative Fourier modes
under this orientation.

The modified Hilbert transform used throughout is

    b~(x) = (1/pi) p.v. int (1/(x - t) + t/(1 + t^2)) b(t) dt,

computed by the circle conjugate-function multiplier -i sign(k) plus an
additive constant calibrated per call against principal-value quadrature
of the kernel at one anchor point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .errors import GridMismatch, QuadratureNonconvergence

_EVAL_CHUNK = 512  # grid points per block in Fourier-sum evaluation


# ---------------------------------------------------------------------------
# Cayley grid and circle traces
# ---------------------------------------------------------------------------


def circle_angles(n: int) -> np.ndarray:
    """Offset equispaced angles theta_j = 2 pi (j + 1/2)/n."""
    if n < 4 or n & (n - 1):
        raise GridMismatch("circle resolution must be a power of two >= 4")
    return 2.0 * np.pi * (np.arange(n) + 0.5) / n


def cayley_nodes(n: int) -> np.ndarray:
    """Line pullback nodes t_j = -cot(theta_j/2) of the offset circle grid."""
    return -1.0 / np.tan(circle_angles(n) / 2.0)


def angle_of_point(t):
    """Circle angle of a real line point: theta = pi + 2 arctan(t)."""
    return np.pi + 2.0 * np.arctan(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class CircleTrace:
    """Samples of a boundary function on the offset circle grid.

    ``coeffs[i]`` is the Fourier coefficient at signed index ``ks[i]``,
    ks = -N/2 .. N/2 - 1; samples and coeffs stay DFT-consistent.
    """

    samples: np.ndarray

    def __post_init__(self):
        n = len(self.samples)
        if n < 4 or n & (n - 1):
            raise GridMismatch("trace length must be a power of two >= 4")

    def __len__(self):
        return len(self.samples)

    @property
    def ks(self) -> np.ndarray:
        n = len(self.samples)
        return np.arange(-n // 2, n // 2)

    @property
    def coeffs(self) -> np.ndarray:
        n = len(self.samples)
        ks = self.ks
        return np.fft.fft(self.samples)[np.mod(ks, n)] * np.exp(-1j * np.pi * ks / n) / n

    @classmethod
    def from_coeffs(cls, coeffs: np.ndarray) -> "CircleTrace":
        n = len(coeffs)
        ks = np.arange(-n // 2, n // 2)
        spectrum = np.zeros(n, dtype=complex)
        spectrum[np.mod(ks, n)] = np.asarray(coeffs, dtype=complex) * np.exp(
            1j * np.pi * ks / n
        ) * n
        return cls(samples=np.fft.ifft(spectrum))

    def norm(self) -> float:
        """Boundary L2 norm with the d(theta) convention (matches the line)."""
        n = len(self.samples)
        return float(np.sqrt(2.0 * np.pi / n * np.sum(np.abs(self.samples) ** 2)))

    def tail_mass(self) -> float:
        """Fraction of coefficient energy at |k| > N/4 (aliasing indicator)."""
        c = self.coeffs
        total = float(np.sum(np.abs(c) ** 2))
        if total == 0.0:
            return 0.0
        hi = np.abs(self.ks) > len(self.samples) // 4
        return float(np.sum(np.abs(c[hi]) ** 2) / total)


def line_to_circle(line_values, nodes=None) -> CircleTrace:
    """Transfer line samples on the Cayley pullback grid to a circle trace.

    ``line_values`` must be sampled exactly at ``cayley_nodes(n)``; pass the
    nodes to assert the pairing.
    """
    f = np.asarray(line_values, dtype=complex)
    t = cayley_nodes(len(f))
    if nodes is not None:
        nodes = np.asarray(nodes, dtype=float)
        if len(nodes) != len(f) or not np.allclose(nodes, t, rtol=1e-12, atol=1e-12):
            raise GridMismatch("samples are not on the Cayley pullback grid")
    return CircleTrace(samples=(t + 1j) / np.sqrt(2.0) * f)


def circle_to_line(trace: CircleTrace) -> np.ndarray:
    """Inverse transfer: line values at the pullback nodes."""
    t = cayley_nodes(len(trace))
    return np.sqrt(2.0) / (t + 1j) * trace.samples


def riesz_project(trace: CircleTrace) -> CircleTrace:
    """Analytic projection P_+: zero all strictly negative Fourier modes.

    Constants belong to the analytic side.  Idempotent by construction;
    P_- = Id - P_+.
    """
    c = trace.coeffs.copy()
    c[trace.ks < 0] = 0.0
    return CircleTrace.from_coeffs(c)


def conjugate_trace(trace: CircleTrace) -> CircleTrace:
    """Circle conjugate function: multiplier -i sign(k) on the coefficients."""
    c = trace.coeffs * (-1j) * np.sign(trace.ks)
    return CircleTrace.from_coeffs(c)


def evaluate_trace(trace: CircleTrace, t) -> np.ndarray:
    """Evaluate the trace's Fourier series at arbitrary line points."""
    th = np.atleast_1d(angle_of_point(t))
    c = trace.coeffs
    ks = trace.ks
    out = np.empty(th.shape, dtype=complex)
    for start in range(0, len(th), _EVAL_CHUNK):
        blk = th[start : start + _EVAL_CHUNK]
        out[start : start + _EVAL_CHUNK] = np.exp(1j * np.outer(blk, ks)) @ c
    return out


# ---------------------------------------------------------------------------
# Line functions
# ---------------------------------------------------------------------------

DECAY_CLASSES = ("c_dot_r", "l2", "l1_pi")


@dataclass(frozen=True)
class LineFunction:
    """A function on the real line with a declared decay class.

    ``c_dot_r``: continuous with equal finite limits at +-infinity;
    ``l2``: square integrable; ``l1_pi``: int |b|/(1+t^2) finite.
    """

    evaluator: Callable
    decay_class: str = "l1_pi"
    limit_at_infinity: float | None = None

    def __post_init__(self):
        if self.decay_class not in DECAY_CLASSES:
            raise ValueError(f"unknown decay class {self.decay_class!r}")

    def __call__(self, t):
        return self.evaluator(t)


# ---------------------------------------------------------------------------
# Modified Hilbert transform
# ---------------------------------------------------------------------------


def pv_hilbert_value(
    b, x: float, inner_radius: float = 8.0, outer_radius: float = 64.0
) -> float:
    """Principal-value quadrature of the modified Hilbert kernel at one point.

    Combines the singular and correction parts into the single kernel
    (1 + t x)/((x - t)(1 + t^2)), integrable for bounded b.  The Cauchy
    singularity is handled on [x - r, x + r]; the remainder is integrated
    in bounded segments (wide single calls can miss narrow features).
    """
    b_scalar = lambda t: float(np.real(np.atleast_1d(b(t))[0]))
    r, R = inner_radius, outer_radius
    f = lambda t: -b_scalar(t) * (1.0 + t * x) / (1.0 + t * t)
    val, _ = quad(f, x - r, x + r, weight="cauchy", wvar=x, limit=400)
    g = lambda t: b_scalar(t) * (1.0 + t * x) / ((x - t) * (1.0 + t * t))
    for left, right in ((x + r, x + R), (x - R, x - r)):
        edges = np.linspace(left, right, max(2, int(np.ceil((right - left) / 4.0)) + 1))
        for a0, b0 in zip(edges[:-1], edges[1:]):
            val += quad(g, a0, b0, limit=200)[0]
    val += quad(g, x + R, np.inf, limit=200)[0]
    val += quad(g, -np.inf, x - R, limit=200)[0]
    return val / np.pi


def hilbert_transform_trace(b, n: int = 4096, anchor: float = 0.0):
    """Conjugate-function route for b~: returns (trace, constant).

    The trace holds the circle conjugate function of b's pullback; the
    constant aligns it with the principal-value normalization of the
    modified kernel at the anchor.
    """
    t = cayley_nodes(n)
    samples = np.asarray(b(t), dtype=complex)
    if not np.all(np.isfinite(samples)):
        raise QuadratureNonconvergence("b not finite on the pullback grid")
    conj = conjugate_trace(CircleTrace(samples=samples))
    at_anchor = float(np.real(evaluate_trace(conj, anchor)[0]))
    constant = pv_hilbert_value(b, anchor) - at_anchor
    return conj, constant


def hilbert_transform(b, grid, n: int = 4096, anchor: float = 0.0) -> np.ndarray:
    """Modified Hilbert transform of b on a real grid.

    b may be a LineFunction or a plain vectorized callable; it must be
    integrable against 1/(1+t^2).
    """
    trace, constant = hilbert_transform_trace(b, n=n, anchor=anchor)
    return np.real(evaluate_trace(trace, np.asarray(grid, dtype=float))) + constant


def hilbert_transform_evaluator(b, n: int = 4096, anchor: float = 0.0):
    """Callable form of the transform (reuses one trace and constant)."""
    trace, constant = hilbert_transform_trace(b, n=n, anchor=anchor)

    def evaluate(t):
        return np.real(evaluate_trace(trace, np.asarray(t, dtype=float))) + constant

    return evaluate


def synthesize_unimodular(a=None, b=None, c: float = 0.0, n: int = 0, resolution: int = 4096):
    """Unimodular symbol u(t) = phi(t)^n exp(i (c + a(t) + b~(t))).

    a, b are real-valued line functions (None means 0).  The output is a
    vectorized callable with |u| = 1 exactly: the phase is assembled as a
    real number before exponentiation.
    """
    a_fun = a if a is not None else (lambda t: np.zeros_like(np.asarray(t, dtype=float)))
    bt_fun = (
        hilbert_transform_evaluator(b, n=resolution)
        if b is not None
        else (lambda t: np.zeros_like(np.asarray(t, dtype=float)))
    )

    def u(t):
        t = np.asarray(t, dtype=float)
        phase = c + np.real(np.asarray(a_fun(t), dtype=float)) + bt_fun(t)
        out = np.exp(1j * phase)
        if n != 0:
            out = out * ((t - 1j) / (t + 1j)) ** n
        return out

    return u


# ---------------------------------------------------------------------------
# Inner-product quadrature on the line
# ---------------------------------------------------------------------------

_GL10 = np.polynomial.legendre.leggauss(10)
_GL21 = np.polynomial.legendre.leggauss(21)


def _panel_integrate(f, edges, tol_per_len, max_rounds=12):
    """Adaptive Gauss panels over fixed edges; refine where 10- and 21-point
    rules disagree.  All function evaluations are batched per round."""
    panels = np.column_stack([edges[:-1], edges[1:]])
    total = 0.0 + 0.0j
    err = 0.0
    for _ in range(max_rounds):
        a = panels[:, 0][:, None]
        h = (panels[:, 1] - panels[:, 0])[:, None]
        x10 = a + h * (_GL10[0][None, :] + 1.0) / 2.0
        x21 = a + h * (_GL21[0][None, :] + 1.0) / 2.0
        f10 = np.asarray(f(x10.ravel()), dtype=complex).reshape(x10.shape)
        f21 = np.asarray(f(x21.ravel()), dtype=complex).reshape(x21.shape)
        i10 = (f10 @ _GL10[1]) * h[:, 0] / 2.0
        i21 = (f21 @ _GL21[1]) * h[:, 0] / 2.0
        perr = np.abs(i21 - i10)
        ok = perr <= tol_per_len * h[:, 0]
        total += i21[ok].sum()
        err += perr[ok].sum()
        if np.all(ok):
            bad = np.empty((0, 2))
        else:
            bad = panels[~ok]
        if len(bad) == 0:
            return total, err
        mid = 0.5 * (bad[:, 0] + bad[:, 1])
        panels = np.vstack(
            [np.column_stack([bad[:, 0], mid]), np.column_stack([mid, bad[:, 1]])]
        )
    # give up on remaining panels: accept the fine rule, count its spread
    a = panels[:, 0][:, None]
    h = (panels[:, 1] - panels[:, 0])[:, None]
    x21 = a + h * (_GL21[0][None, :] + 1.0) / 2.0
    f21 = np.asarray(f(x21.ravel()), dtype=complex).reshape(x21.shape)
    x10 = a + h * (_GL10[0][None, :] + 1.0) / 2.0
    f10 = np.asarray(f(x10.ravel()), dtype=complex).reshape(x10.shape)
    i21 = (f21 @ _GL21[1]) * h[:, 0] / 2.0
    i10 = (f10 @ _GL10[1]) * h[:, 0] / 2.0
    total += i21.sum()
    err += np.abs(i21 - i10).sum()
    return total, err


def _octave_moments(f, T):
    """Integrals of f and s*f over [T, 2T] u [-2T, -T] plus the mean of
    s^2 f needed for the algebraic-tail estimate beyond 2T."""
    val = 0.0 + 0.0j
    first_moment = 0.0 + 0.0j
    for sgn in (1.0, -1.0):
        lo, hi = sorted((sgn * T, sgn * 2.0 * T))
        edges = np.linspace(lo, hi, 1 + max(8, int(np.ceil((hi - lo) / 0.5))))
        a = edges[:-1][:, None]
        h = np.diff(edges)[:, None]
        x = a + h * (_GL21[0][None, :] + 1.0) / 2.0
        fx = np.asarray(f(x.ravel()), dtype=complex).reshape(x.shape)
        val += ((fx @ _GL21[1]) * h[:, 0] / 2.0).sum()
        first_moment += (((fx * np.abs(x)) @ _GL21[1]) * h[:, 0] / 2.0).sum()
    # if f ~ kappa/s^2 on |s| > T then int_{|s|>2T} f = kappa/T and
    # int over the octave of |s| f = 2 kappa ln 2
    kappa = first_moment / (2.0 * np.log(2.0))
    return val, kappa / T


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error: float
    radius: float


def integrate_line(
    f,
    tol: float = 1e-8,
    initial_radius: float = 64.0,
    max_radius: float = 8192.0,
    strict: bool = False,
) -> QuadratureResult:
    """Integrate a decaying function over the real line.

    Adaptive Gauss panels on [-T, T]; T doubles while the algebraic-tail
    estimate (1/(1+t^2)-majorant scale) remains above tol, and the final
    tail is added by extrapolation.  ``strict`` raises
    QuadratureNonconvergence if the residual estimate stays above tol at
    max_radius.
    """
    T = float(initial_radius)
    edges = np.linspace(-T, T, 1 + max(64, int(np.ceil(2 * T / 2.0))))
    total, err = _panel_integrate(f, edges, tol_per_len=tol / (8.0 * T))
    tail_prev = None
    while True:
        octave, tail = _octave_moments(f, T)
        total += octave
        T *= 2.0
        # consistency of successive tail estimates bounds the residual
        residual = abs(tail) if tail_prev is None else abs(tail - 0.5 * tail_prev)
        if residual < tol or T >= max_radius:
            total += tail
            # the 1/s^3 component shifts the algebraic estimate by O(|tail|/T)
            err += residual + 2.0 * abs(tail) / T
            break
        tail_prev = tail
    if strict and residual > 10.0 * tol:
        raise QuadratureNonconvergence(
            f"tail residual {residual:.3g} above tolerance at radius {T}"
        )
    return QuadratureResult(value=total, error=float(err), radius=T)


def inner_product_quadrature(
    f,
    g,
    tol: float = 1e-8,
    initial_radius: float = 64.0,
    max_radius: float = 8192.0,
    full_output: bool = False,
):
    """<f, g> = int f(t) conj(g(t)) dt by adaptive quadrature with tail
    extrapolation.  Returns the complex value (and the QuadratureResult
    when ``full_output``)."""
    fg = lambda t: np.asarray(f(t), dtype=complex) * np.conj(np.asarray(g(t), dtype=complex))
    res = integrate_line(
        fg, tol=tol, initial_radius=initial_radius, max_radius=max_radius
    )
    return (res.value, res) if full_output else res.value
