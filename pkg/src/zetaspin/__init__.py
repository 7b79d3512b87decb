"""Finite-truncation checks of a spin-chain model for Dirichlet L-functions.

Submodules: chars, lfunc, spinchain, phaseop, toeplitz, padic, cli, acceptance.
"""
__version__ = "0.1.0"
