"""Exact harmonic analysis on the symmetric group S_n, with a statevector
simulator for diffusion + Bayesian-conditioning pipelines over permutations."""

__version__ = "0.1.0"
