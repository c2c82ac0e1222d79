"""Exact jet-level equivalence of map germs."""

from ._germforge import GermforgeError, Workspace, run, solve, verify

__all__ = ["GermforgeError", "Workspace", "run", "solve", "verify"]
