"""Exact computation and bound checking for zero-sum invariants of finite Abelian groups."""

from .groups import FiniteAbelianGroup, GroupElement, parse_group

__all__ = ["FiniteAbelianGroup", "GroupElement", "parse_group"]
