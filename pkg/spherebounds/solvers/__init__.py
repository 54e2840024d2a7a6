"""
Solvers for the Euclidean, sphere and spectral problems.
"""
