"""Reproducing kernels of model spaces and their Gram matrices.

For a meromorphic inner function U and a real node lambda,

    K_lambda(z) = (i/2pi) (1 - conj(U(lambda)) U(z)) / (z - lambda),
    ||K_lambda||^2 = |U'(lambda)| / (2 pi),

and k_lambda = K_lambda/||K_lambda|| is the normalized kernel.  Gram
matrices of normalized kernels are assembled in closed form through the
reproducing property <K_lambda, K_mu> = K_lambda(mu); the quadrature Gram
serves as the independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfWindow, NodeMismatch, NodeNotUnimodular, NonHermitianInput
from .hardy import inner_product_quadrature
from .inner import ClarkInner, SeparatedSequence, _as_inner

_UNIMODULAR_TOL = 1e-8
_COINCIDENT_TOL = 1e-12


def kernel_eval(theta, lam: float, z):
    """Reproducing kernel K_lambda of K_Theta evaluated at z.

    lam must be a real point with |Theta(lam)| = 1; at z = lam the
    coincident limit |Theta'(lam)|/(2 pi) is returned exactly.
    """
    inner = _as_inner(theta)
    lam = float(lam)
    theta_lam = complex(np.atleast_1d(inner(complex(lam)))[0])
    if abs(abs(theta_lam) - 1.0) > _UNIMODULAR_TOL:
        raise NodeNotUnimodular(f"|Theta({lam})| = {abs(theta_lam):.12f}")
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    zf = np.atleast_1d(z)
    diff = zf - lam
    coincident = np.abs(diff) <= _COINCIDENT_TOL * (1.0 + abs(lam))
    safe = np.where(coincident, 1.0, diff)
    vals = (1j / (2.0 * np.pi)) * (1.0 - np.conj(theta_lam) * inner(zf)) / safe
    if np.any(coincident):
        limit = inner.boundary_modulus_derivative(np.asarray(lam)) / (2.0 * np.pi)
        vals = np.where(coincident, complex(limit), vals)
    return vals[0] if scalar else vals


def kernel_norm(theta, lam: float) -> float:
    """||K_lambda|| = sqrt(|Theta'(lambda)|/(2 pi)) via the exact series."""
    inner = _as_inner(theta)
    return float(np.sqrt(inner.boundary_modulus_derivative(np.asarray(float(lam))) / (2.0 * np.pi)))


@dataclass(frozen=True)
class KernelSystem:
    """A model space K_Theta with a node window and kernel normalizations.

    ``norms[n]`` is ||K_{lambda_n}||; when built against a Clark inner I,
    ``etas[n] = |I'(lambda_n)|^{1/2} |Theta'(lambda_n)|^{-1/2}`` with the
    exact node derivative 2/nu_n on the I side.
    """

    theta: object
    nodes: SeparatedSequence
    norms: np.ndarray
    etas: np.ndarray | None = None

    def __len__(self):
        return len(self.nodes)

    def normalized_kernel(self, n: int):
        """Unit-norm kernel evaluator for node label n."""
        pos = self.nodes.position(n)
        lam = float(self.nodes.lambdas[pos])
        nrm = float(self.norms[pos])
        theta = self.theta

        def k(z):
            return kernel_eval(theta, lam, z) / nrm

        return k


def build_kernel_system(theta, nodes: SeparatedSequence, clark=None) -> KernelSystem:
    """Assemble a KernelSystem; validates inf |Theta'(lambda_n)| > 0.

    ``clark`` (a ClarkInner or its sequence) pairs the system with a Clark
    inner function sharing the node window, filling the eta ratios.
    """
    inner = _as_inner(theta)
    derivs = np.atleast_1d(inner.boundary_modulus_derivative(nodes.lambdas))
    if np.any(derivs <= 0.0):
        raise NodeNotUnimodular("|Theta'| vanishes at a node; kernel norms degenerate")
    norms = np.sqrt(derivs / (2.0 * np.pi))
    etas = None
    if clark is not None:
        seq = clark.seq if isinstance(clark, ClarkInner) else clark
        if len(seq) != len(nodes) or not np.allclose(seq.lambdas, nodes.lambdas):
            raise NodeMismatch("Clark pairing requires the same node window")
        etas = np.sqrt((2.0 / seq.nus) / derivs)
    return KernelSystem(theta=inner, nodes=nodes, norms=norms, etas=etas)


def normalized_kernel(system: KernelSystem, n: int):
    return system.normalized_kernel(n)


@dataclass(frozen=True)
class GramMatrix:
    """Hermitian Gram matrix of normalized kernels over a node window."""

    entries: np.ndarray
    window: tuple[int, int]

    def __len__(self):
        return len(self.entries)

    def check_hermitian(self, tol: float = 1e-12) -> None:
        dev = np.max(np.abs(self.entries - self.entries.conj().T))
        if dev > tol:
            raise NonHermitianInput(f"Hermitian deviation {dev:.3e}")

    def conditioning(self) -> tuple[float, float]:
        """Extremal eigenvalues (lambda_min, lambda_max)."""
        vals = np.linalg.eigvalsh(self.entries)
        return float(vals[0]), float(vals[-1])

    def principal(self, start: int, stop: int | None = None) -> "GramMatrix":
        """Principal submatrix by window positions [start, stop)."""
        stop = len(self.entries) if stop is None else stop
        if not 0 <= start < stop <= len(self.entries):
            raise IndexOutOfWindow(f"positions {start}..{stop} outside 0..{len(self.entries)}")
        lo = self.window[0]
        return GramMatrix(
            entries=self.entries[start:stop, start:stop],
            window=(lo + start, lo + stop - 1),
        )


def gram_closed_form(system: KernelSystem, positions=None) -> GramMatrix:
    """Gram of normalized kernels via the reproducing property.

    entries[m][n] = K_{lambda_n}(lambda_m) / (||K_n|| ||K_m||), Hermitized
    by averaging with the conjugate transpose to absorb asymmetric rounding.
    """
    lam = system.nodes.lambdas
    norms = system.norms
    if positions is not None:
        positions = np.asarray(positions, dtype=int)
        lam = lam[positions]
        norms = norms[positions]
    n = len(lam)
    g = np.empty((n, n), dtype=complex)
    for col in range(n):
        g[:, col] = kernel_eval(system.theta, lam[col], lam.astype(complex))
    g /= norms[None, :]
    g /= norms[:, None]
    g = 0.5 * (g + g.conj().T)
    lo = system.nodes.first_index
    return GramMatrix(entries=g, window=(lo, lo + len(system.nodes) - 1))


def gram_quadrature(system: KernelSystem, positions=None, tol: float = 1e-8,
                    max_radius: float = 4096.0) -> GramMatrix:
    """Independent Gram via pairwise inner-product quadrature (oracle route)."""
    if positions is None:
        positions = np.arange(len(system.nodes))
    labels = [system.nodes.first_index + int(p) for p in positions]
    ks = [system.normalized_kernel(lbl) for lbl in labels]
    n = len(ks)
    g = np.eye(n, dtype=complex)
    for i in range(n):
        for j in range(i + 1, n):
            val = inner_product_quadrature(ks[j], ks[i], tol=tol, max_radius=max_radius)
            g[i, j] = val
            g[j, i] = np.conj(val)
        g[i, i] = inner_product_quadrature(ks[i], ks[i], tol=tol, max_radius=max_radius).real
    lo = system.nodes.first_index
    return GramMatrix(entries=g, window=(lo, lo + n - 1))


def verify_key_identity(clark: ClarkInner, theta, coefficients, z_samples) -> float:
    """Max pointwise residual of the Clark pairing identity.

    For eta_n = |I'(lambda_n)|^{1/2} |Theta'(lambda_n)|^{-1/2},

      (1 - I) sum a_n k_n^Theta
        = sum a_n eta_n k_n^I  -  Theta sum a_n eta_n conj(Theta(lambda_n)) k_n^I,

    both sides evaluated independently at the samples.
    """
    seq = clark.seq
    a = np.asarray(coefficients, dtype=complex)
    if len(a) > len(seq):
        raise IndexOutOfWindow("more coefficients than window nodes")
    z = np.atleast_1d(np.asarray(z_samples, dtype=complex))
    support = np.nonzero(a)[0]
    if len(support) == 0:
        return 0.0
    lam_s = seq.lambdas[support]
    node_vals = np.atleast_1d(clark(lam_s.astype(complex)))
    if np.max(np.abs(node_vals - 1.0)) > 1e-8:
        raise NodeMismatch("I != 1 on the coefficient support nodes")

    theta_inner = _as_inner(theta)
    theta_derivs = np.atleast_1d(theta_inner.boundary_modulus_derivative(lam_s))
    if np.any(theta_derivs <= 0.0):
        raise NodeNotUnimodular("|Theta'| vanishes on the support")
    theta_norms = np.sqrt(theta_derivs / (2.0 * np.pi))
    etas = np.sqrt((2.0 / seq.nus[support]) / theta_derivs)
    theta_at_nodes = np.atleast_1d(theta_inner(lam_s.astype(complex)))

    lhs = np.zeros_like(z)
    sum_i = np.zeros_like(z)
    sum_i_twisted = np.zeros_like(z)
    I_z = clark(z)
    theta_z = theta_inner(z)
    for j, idx in enumerate(support):
        k_theta = kernel_eval(theta_inner, lam_s[j], z) / theta_norms[j]
        k_i = _clark_normalized_kernel(clark, int(idx), z, I_z)
        lhs += a[idx] * k_theta
        sum_i += a[idx] * etas[j] * k_i
        sum_i_twisted += a[idx] * etas[j] * np.conj(theta_at_nodes[j]) * k_i
    lhs = (1.0 - I_z) * lhs
    rhs = sum_i - theta_z * sum_i_twisted
    return float(np.max(np.abs(lhs - rhs)))


def _clark_normalized_kernel(clark: ClarkInner, pos: int, z, I_z=None):
    """k_{lambda_n}^I with the exact normalization |I'(lambda_n)| = 2/nu_n."""
    lam = float(clark.seq.lambdas[pos])
    nu = float(clark.seq.nus[pos])
    I_z = clark(z) if I_z is None else I_z
    z = np.asarray(z, dtype=complex)
    diff = z - lam
    coincident = np.abs(diff) <= _COINCIDENT_TOL * (1.0 + abs(lam))
    safe = np.where(coincident, 1.0, diff)
    norm = np.sqrt(2.0 * np.pi * (2.0 / nu))
    vals = (1j / norm) * (1.0 - I_z) / safe
    if np.any(coincident):
        vals = np.where(coincident, (2.0 / nu) / norm, vals)
    return vals
