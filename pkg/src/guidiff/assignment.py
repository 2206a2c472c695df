"""Minimum-cost one-to-one assignment with deterministic tie-breaking.

Solves the square assignment problem with the shortest-augmenting-path
method (O(n^3)), then refines the answer so that among all minimum-cost
assignments the lexicographically smallest one (by row index, then column
index) is returned. The refinement walks the zero-reduced-cost graph that
the solver's dual variables expose: every optimal assignment lives inside
that graph, so re-matching within it never changes the total cost.
"""

from __future__ import annotations

import sys

import numpy as np

_REDUCED_COST_TOL = 1e-9


def solve_assignment(cost: np.ndarray) -> list[tuple[int, int]]:
    """Optimal assignment for a square cost matrix.

    Returns (row, col) pairs sorted by row; among equally cheap optima the
    lexicographically smallest pairing wins.
    """
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ValueError(f"cost matrix must be square, got {cost.shape}")
    n = cost.shape[0]
    if n == 0:
        return []
    row_of_col, u, v = _shortest_path_assignment(cost)
    scale = max(1.0, float(np.abs(cost).max()))
    row_of_col = _lexicographic_refine(cost, row_of_col, u, v, _REDUCED_COST_TOL * scale)
    col_of_row = np.empty(n, dtype=int)
    col_of_row[row_of_col] = np.arange(n)
    return [(i, int(col_of_row[i])) for i in range(n)]


def _shortest_path_assignment(cost: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Jonker-Volgenant style solve; returns (row_of_col, u, v).

    u and v are optimal dual potentials: u[i] + v[j] <= cost[i, j]
    everywhere, with equality on assigned cells.
    """
    n = cost.shape[0]
    u = np.zeros(n)  # row potentials
    v = np.zeros(n + 1)  # column potentials; index n is the virtual start column
    p = np.full(n + 1, -1, dtype=int)  # p[j] = row currently assigned to column j
    way = np.zeros(n + 1, dtype=int)

    for i in range(n):
        p[n] = i
        j0 = n
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            cur = cost[i0, :] - u[i0] - v[:n]
            real = minv[:n]
            free = ~used[:n]
            better = free & (cur < real)
            real[better] = cur[better]
            way[:n][better] = j0
            masked = np.where(free, real, np.inf)
            j1 = int(np.argmin(masked))
            delta = masked[j1]
            used_cols = np.flatnonzero(used)
            np.add.at(u, p[used_cols], delta)
            v[used_cols] -= delta
            minv[~used] -= delta
            j0 = j1
            if p[j0] < 0:
                break
        while True:
            j1 = int(way[j0])
            p[j0] = p[j1]
            j0 = j1
            if j0 == n:
                break
    return p[:n].copy(), u, v[:n].copy()


def _lexicographic_refine(
    cost: np.ndarray,
    row_of_col: np.ndarray,
    u: np.ndarray,
    v: np.ndarray,
    tol: float,
) -> np.ndarray:
    """Pick the lexicographically smallest optimal assignment.

    Rows are fixed in ascending order; each takes the smallest column that
    still leaves a perfect matching in the zero-reduced-cost graph for the
    remaining rows.
    """
    n = cost.shape[0]
    reduced = cost - u[:, None] - v[None, :]
    adjacency = [np.flatnonzero(reduced[i] <= tol) for i in range(n)]
    # augmenting chains can be as long as the matrix side
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n + 1000))

    row_of_col = row_of_col.copy()
    col_of_row = np.empty(n, dtype=int)
    col_of_row[row_of_col] = np.arange(n)
    locked = np.zeros(n, dtype=bool)  # indexed by column

    def reassign(row: int, visited: np.ndarray) -> bool:
        for j in adjacency[row]:
            if locked[j] or visited[j]:
                continue
            visited[j] = True
            other = row_of_col[j]
            if other < 0 or reassign(int(other), visited):
                row_of_col[j] = row
                col_of_row[row] = j
                return True
        return False

    for i in range(n):
        current = int(col_of_row[i])
        for j in adjacency[i]:
            j = int(j)
            if locked[j]:
                continue
            if j == current:
                break
            displaced = int(row_of_col[j])
            # Tentatively hand column j to row i and re-seat the displaced row.
            row_of_col[current] = -1
            row_of_col[j] = i
            col_of_row[i] = j
            visited = np.zeros(n, dtype=bool)
            visited[j] = True
            if reassign(displaced, visited):
                break
            row_of_col[j] = displaced
            col_of_row[displaced] = j
            row_of_col[current] = i
            col_of_row[i] = current
        locked[col_of_row[i]] = True
    return row_of_col
