"""Desk-scale diagnostics for reproducing-kernel bases of model spaces.

Core numerics: Clark-type meromorphic inner functions, reproducing-kernel
Gram systems, Hilbert transforms on the line, and Toeplitz/Hankel finite
sections, wired into reproducible cross-check scenarios.
"""

__version__ = "0.1.0"
