"""Meromorphic inner functions on the upper half-plane.

Two constructions are supported:

* explicit Blaschke/exponential data  Theta(z) = B(z) e^{iaz}, with B a
  finite product of half-plane factors (z - z_k)/(z - conj z_k), and
* the Clark construction from node/weight data (lambda_k, nu_k):

      G(z) = sum_k nu_k (1/(lambda_k - z) - lambda_k/(lambda_k^2 + 1)),
      I(z) = (G(z) - i)/(G(z) + i),

  a meromorphic inner function with {I = 1} equal to the node set and
  |I'(lambda_n)| = 2/nu_n.

Finite truncations of both families are genuinely inner, so unimodularity
on the real axis and the reflection identity Theta(z) conj(Theta(conj z)) = 1
hold up to rounding, not up to truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import digamma

from .errors import (
    DivergenceDetected,
    EvaluationRegionError,
    IndexOutOfWindow,
    InvalidStrip,
    PoleHit,
    SeparationViolation,
    UnwrapFailure,
    WeightViolation,
)

_CHUNK = 256  # grid points per block in O(grid * terms) sweeps


@dataclass(frozen=True)
class SeparatedSequence:
    """A finite window of a separated real sequence with Clark weights.

    ``lambdas`` is strictly increasing, ``nus`` positive, ``delta`` the
    minimal gap and ``discrepancy`` the windowed value of
    max_n |sum_{k != n} (1/(lambda_n - lambda_k) + lambda_k/(lambda_k^2+1))|.
    Node labels run over the contiguous integer window
    ``first_index .. first_index + len - 1``.
    """

    lambdas: np.ndarray
    nus: np.ndarray
    delta: float
    discrepancy: float
    first_index: int = 0
    permutation: np.ndarray | None = field(default=None, compare=False)

    def __len__(self):
        return len(self.lambdas)

    @property
    def window(self) -> tuple[int, int]:
        return (self.first_index, self.first_index + len(self.lambdas) - 1)

    @property
    def labels(self) -> np.ndarray:
        return self.first_index + np.arange(len(self.lambdas))

    def position(self, n: int) -> int:
        """Array position of node label ``n``; raises outside the window."""
        lo, hi = self.window
        if not lo <= n <= hi:
            raise IndexOutOfWindow(f"label {n} outside window {lo}..{hi}")
        return n - self.first_index

    def weight_mass(self) -> float:
        """sum nu_k / (1 + lambda_k^2) over the window."""
        return float(np.sum(self.nus / (1.0 + self.lambdas**2)))


def _discrepancy_stat(lambdas: np.ndarray) -> float:
    """max_n |sum_{k != n} (1/(lambda_n-lambda_k) + lambda_k/(lambda_k^2+1))|."""
    n = len(lambdas)
    corr = lambdas / (lambdas**2 + 1.0)
    corr_total = corr.sum()
    worst = 0.0
    for start in range(0, n, _CHUNK):
        block = lambdas[start : start + _CHUNK]
        diff = block[:, None] - lambdas[None, :]
        # mask the k == n entries of this block
        rows = np.arange(len(block))
        with np.errstate(divide="ignore"):
            inv = 1.0 / diff
        inv[rows, start + rows] = 0.0
        sums = inv.sum(axis=1) + (corr_total - corr[start : start + len(block)])
        worst = max(worst, float(np.max(np.abs(sums))))
    return worst


def validate_sequence(lambdas, nus, first_index: int = 0) -> SeparatedSequence:
    """Validate node/weight data and compute separation and discrepancy.

    Unsorted input is sorted (the permutation is recorded on the result).
    Raises SeparationViolation for coincident nodes and WeightViolation for
    nonpositive weights.
    """
    lam = np.asarray(lambdas, dtype=float).ravel()
    nu = np.asarray(nus, dtype=float).ravel()
    if len(lam) != len(nu):
        raise WeightViolation("lambdas and nus must have equal length")
    if len(lam) < 2:
        raise SeparationViolation("need at least two nodes")
    if not np.all(np.isfinite(lam)):
        raise SeparationViolation("nodes must be finite")
    if not np.all(np.isfinite(nu)) or np.any(nu <= 0.0):
        raise WeightViolation("all Clark weights must be positive and finite")

    perm = None
    if np.any(np.diff(lam) <= 0.0):
        perm = np.argsort(lam, kind="stable")
        lam = lam[perm]
        nu = nu[perm]
    gaps = np.diff(lam)
    delta = float(gaps.min())
    if delta <= 0.0:
        raise SeparationViolation(f"coincident nodes (min gap {delta})")
    return SeparatedSequence(
        lambdas=lam,
        nus=nu,
        delta=delta,
        discrepancy=_discrepancy_stat(lam),
        first_index=first_index,
        permutation=perm,
    )


@dataclass(frozen=True)
class TailPolicy:
    """How a truncated Clark series approximates the full sum.

    ``pairing`` sums terms outward from the node nearest the evaluation
    point (stabilizes cancellation between the two window ends).
    ``compensate`` adds the analytically summed tail of a symmetric
    lattice continuation of the window: with half-width c, step d and
    weight w the tail pair sum is

        (w/d) * (psi(1 + (c + z')/d) - psi(1 + (c - z')/d)),

    z' the evaluation point relative to the window center and psi the
    digamma function.  Use it only when the window edges continue a
    (perturbed) lattice; step/weight default to window medians.
    """

    pairing: bool = True
    compensate: bool = False
    lattice_step: float | None = None
    lattice_weight: float | None = None


def _check_weight_increments(seq: SeparatedSequence) -> None:
    """Bounded-increment proxy for sum nu_k/(1+lambda_k^2) < infinity.

    Terms sorted by |lambda_k| must decay toward the window edges: the mean
    term over the outer quarter must stay strictly below the mean over the
    inner quarter (a flat profile is already the divergent boundary case).
    Windows under 16 nodes are accepted as-is.
    """
    n = len(seq)
    if n < 16:
        return
    terms = seq.nus / (1.0 + seq.lambdas**2)
    order = np.argsort(np.abs(seq.lambdas), kind="stable")
    terms = terms[order]
    q = n // 4
    inner_mean = float(terms[:q].mean())
    outer_mean = float(terms[-q:].mean())
    if outer_mean > inner_mean * (1.0 - 1e-9):
        raise DivergenceDetected(
            "weight series increments grow toward the window edges "
            f"(outer mean {outer_mean:.3e} > inner mean {inner_mean:.3e})"
        )


@dataclass(frozen=True)
class InnerFunctionSpec:
    """Serializable description of a meromorphic inner function.

    Explicit origin: exponential type ``exp_type`` plus a finite Blaschke
    zero list in the open upper half-plane.  Clark origin: a validated
    ``SeparatedSequence`` plus a ``TailPolicy``.
    """

    exp_type: float = 0.0
    zeros: tuple[complex, ...] = ()
    origin: str = "explicit"
    clark_seq: SeparatedSequence | None = None
    clark_tail: TailPolicy | None = None

    def __post_init__(self):
        if self.exp_type < 0.0:
            raise ValueError("exponential type must be >= 0")
        for z in self.zeros:
            if not complex(z).imag > 0.0:
                raise ValueError(f"Blaschke zero {z} not in the open upper half-plane")
        if self.origin not in ("explicit", "clark"):
            raise ValueError(f"unknown origin {self.origin!r}")
        if self.origin == "clark" and self.clark_seq is None:
            raise ValueError("clark origin requires a validated sequence")

    @property
    def blaschke_mass(self) -> float:
        """sum Im z_k / (1 + |z_k|^2): monotone in the truncation length."""
        if not self.zeros:
            return 0.0
        z = np.asarray(self.zeros, dtype=complex)
        return float(np.sum(z.imag / (1.0 + np.abs(z) ** 2)))


class BlaschkeExpInner:
    """Evaluator for Theta(z) = B(z) e^{iaz} with a finite zero list.

    Each Blaschke factor (z - z_k)/(z - conj z_k) carries the unimodular
    normalization constant (z_k^2 + 1)/|z_k^2 + 1| when |z_k| > 1 (identity
    otherwise), so partial products of a convergent full product are Cauchy
    and stay unimodular on the axis.
    """

    def __init__(self, exp_type: float = 0.0, zeros=()):
        zeros = tuple(complex(z) for z in zeros)
        self.spec = InnerFunctionSpec(exp_type=float(exp_type), zeros=zeros)
        self._zeros = np.asarray(zeros, dtype=complex)
        if len(zeros) == 0:
            self._norm_const = np.ones(0, dtype=complex)
        else:
            w = self._zeros**2 + 1.0
            with np.errstate(invalid="ignore", divide="ignore"):
                phase = np.where(np.abs(w) > 0, w / np.where(np.abs(w) > 0, np.abs(w), 1.0), 1.0)
            self._norm_const = np.where(np.abs(self._zeros) > 1.0, phase, 1.0)

    @property
    def exp_type(self) -> float:
        return self.spec.exp_type

    @property
    def zeros(self) -> np.ndarray:
        return self._zeros

    def sup_boundary_derivative(self, refine: bool = False) -> float:
        """Estimate of sup_R |Theta'|.

        The cheap bound a + sum 2/Im z_k dominates the true sup (each term
        of the derivative series peaks at Re z_k with value 2/Im z_k).  With
        ``refine`` the boundary series is maximized over local grids around
        each peak instead, giving a tight value from below.
        """
        a = self.spec.exp_type
        if len(self._zeros) == 0:
            return a
        if not refine:
            return float(a + np.sum(2.0 / self._zeros.imag))
        best = 0.0
        for zk in self._zeros:
            width = 3.0 * zk.imag
            local = np.linspace(zk.real - width, zk.real + width, 601)
            best = max(best, float(self.boundary_modulus_derivative(local).max()))
        return best

    def continuation_depth(self) -> float:
        """Depth 0.5 / sup|Theta'| of the certified strip below the axis."""
        sup = self.sup_boundary_derivative()
        return np.inf if sup == 0.0 else 0.5 / sup

    def __call__(self, z):
        """Evaluate Theta at complex z (scalar or array).

        Valid for Im z >= -continuation_depth(); the finite product is its
        own meromorphic continuation there.  Raises PoleHit at a reflected
        zero conj z_k.
        """
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        zf = np.atleast_1d(z)
        depth = self.continuation_depth()
        if np.any(zf.imag < -depth):
            raise EvaluationRegionError(
                f"Im z below continuation depth -{depth:.3g}"
            )
        out = np.exp(1j * self.spec.exp_type * zf)
        for zk, ck in zip(self._zeros, self._norm_const):
            den = zf - np.conj(zk)
            if np.any(den == 0.0):
                raise PoleHit(f"evaluation at reflected zero conj({zk})")
            out = out * (ck * (zf - zk) / den)
        return out[0] if scalar else out

    def boundary_modulus_derivative(self, t):
        """|Theta'(t)| = a + 2 sum Im z_k / |t - z_k|^2 for real t (exact)."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tf = np.atleast_1d(t)
        out = np.full(tf.shape, self.spec.exp_type, dtype=float)
        for zk in self._zeros:
            out += 2.0 * zk.imag / np.abs(tf - zk) ** 2
        return out[0] if scalar else out


class ClarkInner:
    """Evaluator for the Clark inner function of a separated sequence.

    The truncated Herglotz sum G is a genuine finite Herglotz function, so
    I = (G - i)/(G + i) is exactly inner with {I = 1} = window nodes and
    |I'(lambda_n)| = 2/nu_n (a residue identity, exact under truncation).
    """

    def __init__(self, seq: SeparatedSequence, tail: TailPolicy | None = None):
        tail = tail if tail is not None else TailPolicy()
        _check_weight_increments(seq)
        self.seq = seq
        self.tail = tail
        self.spec = InnerFunctionSpec(origin="clark", clark_seq=seq, clark_tail=tail)
        lam = seq.lambdas
        self._center = 0.5 * (lam[0] + lam[-1])
        self._halfwidth = 0.5 * (lam[-1] - lam[0])
        self._step = (
            tail.lattice_step
            if tail.lattice_step is not None
            else float(np.median(np.diff(lam)))
        )
        self._weight = (
            tail.lattice_weight
            if tail.lattice_weight is not None
            else float(np.median(seq.nus))
        )

    def _tail_sum(self, z):
        """Analytic tail of the symmetric lattice continuation (digamma pair)."""
        zp = (z - self._center) / self._step
        c = self._halfwidth / self._step
        return (self._weight / self._step) * (
            digamma(c + zp + 1.0) - digamma(c - zp + 1.0)
        )

    def herglotz(self, z):
        """G(z) = sum nu_k (1/(lambda_k - z) - lambda_k/(lambda_k^2+1)).

        Exact poles produce +-inf entries (consumed by ``__call__``).
        Im G > 0 on the open upper half-plane by construction.
        """
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        zf = np.atleast_1d(z).ravel()
        lam = self.seq.lambdas
        nu = self.seq.nus
        corr = np.sum(nu * lam / (lam**2 + 1.0))
        out = np.empty(zf.shape, dtype=complex)
        for start in range(0, len(zf), _CHUNK):
            blk = zf[start : start + _CHUNK]
            with np.errstate(divide="ignore", invalid="ignore"):
                terms = nu[None, :] / (lam[None, :] - blk[:, None])
            if self.tail.pairing:
                # sum outward from the nearest node, pairing the two ends
                pos = np.searchsorted(lam, blk.real)
                idx = np.arange(len(lam))
                dist = np.abs(idx[None, :] - pos[:, None])
                order = np.argsort(dist, axis=1, kind="stable")[:, ::-1]
                terms = np.take_along_axis(terms, order, axis=1)
            out[start : start + _CHUNK] = terms.sum(axis=1) - corr
        out = out.reshape(np.atleast_1d(z).shape)
        if self.tail.compensate:
            out = out + self._tail_sum(np.atleast_1d(z))
        return out[0] if scalar else out

    def __call__(self, z):
        """Evaluate I = (G - i)/(G + i); exact value 1 at window nodes."""
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        G = np.atleast_1d(self.herglotz(z))
        with np.errstate(invalid="ignore", divide="ignore"):
            out = (G - 1j) / (G + 1j)
        out = np.where(np.isfinite(G), out, 1.0 + 0.0j)
        if np.any(~np.isfinite(out)):
            raise PoleHit("evaluation at a pole of the Clark inner function")
        return out[0] if scalar else out

    def herglotz_derivative(self, t):
        """G'(t) = sum nu_k/(lambda_k - t)^2 for real t (+inf at nodes)."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tf = np.atleast_1d(t).ravel()
        lam = self.seq.lambdas
        nu = self.seq.nus
        out = np.empty(tf.shape, dtype=float)
        for start in range(0, len(tf), _CHUNK):
            blk = tf[start : start + _CHUNK]
            with np.errstate(divide="ignore"):
                out[start : start + _CHUNK] = (
                    nu[None, :] / (lam[None, :] - blk[:, None]) ** 2
                ).sum(axis=1)
        return out[0] if scalar else out.reshape(np.atleast_1d(t).shape)

    def boundary_modulus_derivative(self, t):
        """|I'(t)| = 2 G'(t) / (G(t)^2 + 1) on the axis; 2/nu_n at nodes."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tf = np.atleast_1d(t)
        G = np.real(self.herglotz(tf.astype(complex)))
        dG = self.herglotz_derivative(tf)
        with np.errstate(invalid="ignore", over="ignore"):
            out = 2.0 * dG / (G * G + 1.0)
        hit = ~np.isfinite(G) | ~np.isfinite(dG)
        if np.any(hit):
            pos = np.searchsorted(self.seq.lambdas, tf[hit])
            pos = np.clip(pos, 0, len(self.seq) - 1)
            out[hit] = 2.0 / self.seq.nus[pos]
        return float(out[0]) if scalar else out

    def sup_boundary_derivative(self, refine: bool = False) -> float:
        """max_n 2/nu_n: the node values of |I'| (grid-free estimate)."""
        return float(np.max(2.0 / self.seq.nus))

    def continuation_depth(self) -> float:
        return 0.5 / self.sup_boundary_derivative()

    def herglotz_positivity(self, z) -> bool:
        """Check Im G > 0 at the given upper half-plane points."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if np.any(z.imag <= 0.0):
            raise ValueError("positivity check expects Im z > 0")
        return bool(np.all(self.herglotz(z).imag > 0.0))


def clark_inner(seq: SeparatedSequence, tail: TailPolicy | None = None) -> ClarkInner:
    """Build the Clark inner function evaluator for a validated sequence."""
    return ClarkInner(seq, tail)


def clark_derivative(seq_or_inner, n: int) -> float:
    """|I'(lambda_n)| = 2/nu_n, exact for the truncated Clark function."""
    seq = seq_or_inner.seq if isinstance(seq_or_inner, ClarkInner) else seq_or_inner
    return float(2.0 / seq.nus[seq.position(n)])


def build_inner(spec: InnerFunctionSpec):
    """Instantiate the evaluator described by a spec."""
    if spec.origin == "clark":
        return ClarkInner(spec.clark_seq, spec.clark_tail)
    return BlaschkeExpInner(spec.exp_type, spec.zeros)


def _as_inner(obj):
    if isinstance(obj, InnerFunctionSpec):
        return build_inner(obj)
    return obj


def eval_inner(spec_or_inner, z):
    """Evaluate an inner function (spec or evaluator) at z."""
    return _as_inner(spec_or_inner)(z)


def boundary_derivative(spec_or_inner, t):
    """|Theta'(t)| on the axis, by the exact series of the evaluator."""
    return _as_inner(spec_or_inner).boundary_modulus_derivative(t)


@dataclass(frozen=True)
class BoundaryProfile:
    """Boundary modulus-of-derivative and continuous argument on a grid."""

    grid: np.ndarray
    modulus_derivative: np.ndarray
    argument: np.ndarray
    sup_derivative: float
    min_derivative: float
    ratio: float  # min/max of |Theta'| over the grid
    comparable_flag: bool  # grid proxy for |Theta'(t)| =~ 1 two-sided
    fd_max_deviation: float  # max |dphi/dt - |Theta'|| (finite differences)


_COMPARABLE_RATIO = 0.01  # min/max threshold for the two-sided-bound flag


def boundary_profile(spec_or_inner, grid) -> BoundaryProfile:
    """Unwrap the boundary argument and compare its slope with |Theta'|.

    The caller supplies a grid with h * sup|Theta'| < pi (h * sup < pi/4
    leaves margin); the operation verifies the unwrap and raises
    UnwrapFailure on any consecutive phase jump >= pi.
    """
    inner = _as_inner(spec_or_inner)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 3:
        raise ValueError("grid must be 1-d with at least 3 points")
    values = inner(grid.astype(complex))
    mod = inner.boundary_modulus_derivative(grid)
    steps = np.diff(grid)
    local = np.maximum(mod[1:], mod[:-1])
    if np.any(steps * local >= np.pi):
        raise UnwrapFailure("grid step times |Theta'| reaches pi: unwrap would alias")
    raw = np.angle(values)
    jumps = np.diff(raw)
    wrapped = (jumps + np.pi) % (2.0 * np.pi) - np.pi
    if np.any(np.abs(wrapped) >= np.pi * (1.0 - 1e-9)):
        raise UnwrapFailure("phase jump >= pi between grid neighbors")
    phi = np.concatenate([[raw[0]], raw[0] + np.cumsum(wrapped)])
    fd = np.diff(phi) / steps
    mid = 0.5 * (mod[1:] + mod[:-1])
    fd_dev = float(np.max(np.abs(fd - mid)))
    sup = float(np.max(mod))
    lo = float(np.min(mod))
    ratio = lo / sup if sup > 0 else 0.0
    return BoundaryProfile(
        grid=grid,
        modulus_derivative=mod,
        argument=phi,
        sup_derivative=sup,
        min_derivative=lo,
        ratio=ratio,
        comparable_flag=bool(ratio > _COMPARABLE_RATIO),
        fd_max_deviation=fd_dev,
    )


def min_modulus_strip(spec_or_inner, epsilon: float, grid, n_levels: int = 12) -> float:
    """min |Theta| over the strip 0 <= Im z <= epsilon above a real grid.

    The mean-value bound guarantees min >= 1 - epsilon * sup|Theta'|
    whenever epsilon * sup < 1; InvalidStrip otherwise.  epsilon = 0
    reduces to the (unimodular) boundary values.
    """
    inner = _as_inner(spec_or_inner)
    if epsilon < 0.0:
        raise InvalidStrip("epsilon must be >= 0")
    sup = inner.sup_boundary_derivative(refine=True)
    if epsilon * sup >= 1.0:
        raise InvalidStrip(f"epsilon * sup|Theta'| = {epsilon * sup:.3g} >= 1")
    grid = np.asarray(grid, dtype=float)
    if epsilon == 0.0:
        return float(np.min(np.abs(inner(grid.astype(complex)))))
    heights = np.linspace(0.0, epsilon, max(2, n_levels))
    best = np.inf
    for y in heights:
        best = min(best, float(np.min(np.abs(inner(grid + 1j * y)))))
    return best
