"""Fourier analysis of randomized benchmarking over finite groups."""
__version__ = "0.1.0"
