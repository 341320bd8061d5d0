"""Exact solvers for the largest minimum color-spanning interval problem."""
