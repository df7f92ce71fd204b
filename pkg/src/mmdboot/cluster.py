"""UPGMA clustering of distance matrices and Newick output."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .biodistance import DistanceMatrix


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class Dendrogram:
    """Agglomerative merge record.

    Leaves are node ids ``0..P-1`` (in label order); merge ``j`` creates node
    ``P + j``.
    """

    labels: tuple[str, ...]
    merges: tuple[Merge, ...]

    @property
    def n_leaves(self) -> int:
        return len(self.labels)

    def height_of(self, node: int) -> float:
        return 0.0 if node < self.n_leaves else self.merges[node - self.n_leaves].height

    def leaves_of(self, node: int) -> frozenset[str]:
        if node < self.n_leaves:
            return frozenset([self.labels[node]])
        m = self.merges[node - self.n_leaves]
        return self.leaves_of(m.left) | self.leaves_of(m.right)

    def clusters(self) -> set[frozenset[str]]:
        P = self.n_leaves
        return {self.leaves_of(P + j) for j in range(len(self.merges))}


def upgma(matrix: DistanceMatrix) -> Dendrogram:
    """Average-linkage agglomeration; merge heights are half the joining distance.

    Ties go to the smallest (row, column) pair in the current cluster order.
    The merged cluster takes the row position of its first member.
    """
    d = np.array(matrix.values, dtype=np.float64)
    P = len(matrix.labels)
    if P < 2:
        raise ValueError("need at least 2 leaves")
    if np.any(d < 0):
        raise ValueError("UPGMA needs non-negative distances")
    active = list(range(P))  # node id per current row
    sizes = [1] * P
    merges = []
    for step in range(P - 1):
        n = len(active)
        best, bi, bj = np.inf, -1, -1
        for i in range(n):
            for j in range(i + 1, n):
                if d[i, j] < best:
                    best, bi, bj = d[i, j], i, j
        si, sj = sizes[bi], sizes[bj]
        merges.append(Merge(active[bi], active[bj], best / 2.0, si + sj))
        merged = (si * d[bi] + sj * d[bj]) / (si + sj)
        d[bi, :] = merged
        d[:, bi] = merged
        d[bi, bi] = 0.0
        d = np.delete(np.delete(d, bj, axis=0), bj, axis=1)
        active[bi] = P + step
        sizes[bi] = si + sj
        del active[bj], sizes[bj]
    return Dendrogram(matrix.labels, tuple(merges))


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def to_newick(tree: Dendrogram) -> str:
    P = tree.n_leaves

    def node(nid: int, parent_height: float) -> str:
        length = _fmt(parent_height - tree.height_of(nid))
        if nid < P:
            return f"{tree.labels[nid]}:{length}"
        m = tree.merges[nid - P]
        return f"({node(m.left, m.height)},{node(m.right, m.height)}):{length}"

    root = tree.merges[-1]
    return f"({node(root.left, root.height)},{node(root.right, root.height)});"


def topology_equal(t1: Dendrogram, t2: Dendrogram) -> bool:
    if set(t1.labels) != set(t2.labels):
        raise ValueError("trees have different leaf sets")
    return t1.clusters() == t2.clusters()


def render_text(tree: Dendrogram) -> str:
    """Indented plain-text tree, root first."""
    P = tree.n_leaves
    lines: list[str] = []

    def walk(nid: int, depth: int):
        pad = "  " * depth
        if nid < P:
            lines.append(f"{pad}{tree.labels[nid]}")
            return
        m = tree.merges[nid - P]
        lines.append(f"{pad}+ height={m.height:.4f} size={m.size}")
        walk(m.left, depth + 1)
        walk(m.right, depth + 1)

    walk(P + len(tree.merges) - 1, 0)
    return "\n".join(lines) + "\n"
