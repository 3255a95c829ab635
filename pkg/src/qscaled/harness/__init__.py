"""Convergence-study harness: configs, studies, bound sweeps, emitters and CLI."""
