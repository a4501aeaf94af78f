"""Exact computations of Fujiki constants, Riemann-Roch polynomials and
related invariants of hyperkaehler manifolds and symplectic orbifolds."""

__version__ = "0.1.0"
