"""Congruence coset complexes, opposite complexes of classical buildings, and
machine-checkable cone functions for non-Abelian coboundary expansion."""

__version__ = "0.1.0"
