"""Finite-index subgroups and coset partitions of free groups."""
from .automaton import SubgroupAutomaton, build_subgroup, from_permutations, whole_group
from .partition import CosetPair, CosetPartition, distance, verify
from .perm import Permutation
from .words import Word, parse

__all__ = [
    "SubgroupAutomaton", "build_subgroup", "from_permutations", "whole_group",
    "CosetPair", "CosetPartition", "distance", "verify",
    "Permutation", "Word", "parse",
]
