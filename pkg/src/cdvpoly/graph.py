from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``; edges stored as sorted pairs."""

    n: int
    edges: tuple

    @classmethod
    def from_edges(cls, n, edges):
        norm = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop at {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            norm.add((min(i, j), max(i, j)))
        return cls(int(n), tuple(sorted(norm)))

    def adjacency(self):
        A = np.zeros((self.n, self.n))
        for i, j in self.edges:
            A[i, j] = A[j, i] = 1.0
        return A

    def has_edge(self, i, j):
        return (min(i, j), max(i, j)) in self._edge_set

    @property
    def _edge_set(self):
        # frozen dataclass: memoise through object.__setattr__
        try:
            return self.__dict__["_es"]
        except KeyError:
            s = frozenset(self.edges)
            object.__setattr__(self, "_es", s)
            return s

    def neighbors(self, i):
        return sorted({b if a == i else a for a, b in self.edges if i in (a, b)})

    def without_edge(self, i, j):
        e = (min(i, j), max(i, j))
        return Graph(self.n, tuple(x for x in self.edges if x != e))

    def non_edges(self):
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if not self.has_edge(i, j)]

    def to_json(self):
        return {"n": self.n, "edges": [list(e) for e in self.edges]}
