"""Shared test helpers: direct subgraph construction and random graphs."""

import random

import pytest

from wikiqe.graph import ConceptSubgraph


def make_subgraph(adjacency: dict[str, list[str]], root: str | None = None) -> ConceptSubgraph:
    """Build a ConceptSubgraph straight from an adjacency mapping.

    Targets missing from the keys become sink nodes. Node order is
    first-seen order, matching what a breadth-first closure would give.
    """
    nodes: list[str] = []
    full: dict[str, list[str]] = {}
    for node, targets in adjacency.items():
        if node not in full:
            full[node] = []
            nodes.append(node)
        full[node] = list(targets)
        for t in targets:
            if t not in full:
                full[t] = []
                nodes.append(t)
    edges = tuple((u, v) for u in nodes for v in full[u])
    return ConceptSubgraph(
        root=root or nodes[0], nodes=tuple(nodes), edges=edges, adjacency=full
    )


def random_adjacency(rng: random.Random, n_nodes: int, edge_prob: float) -> dict[str, list[str]]:
    """Random directed graph without self-loops or duplicate edges."""
    names = [f"n{i:03d}" for i in range(n_nodes)]
    adjacency = {name: [] for name in names}
    for u in names:
        for v in names:
            if u != v and rng.random() < edge_prob:
                adjacency[u].append(v)
    return adjacency


@pytest.fixture
def rng():
    return random.Random(20260809)
