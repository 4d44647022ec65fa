"""Render arrays to image files.

Draws the grid the way the arrays are usually displayed: one cell per
entry, stars as a grey star glyph, integers as numerals, with heavier
rules between column groups.  Intended for small arrays; rendering is
refused above a cell cap because a figure with tens of thousands of text
cells is unreadable anyway.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .hpda import Hpda  # noqa: E402
from .pda import STAR, Pda  # noqa: E402

MAX_RENDER_CELLS = 20000

_STAR_COLOR = "#888888"
_INT_COLOR = "#1a1a1a"
_GRID_COLOR = "#cccccc"
_RULE_COLOR = "#444444"


def _cell_size(n_cols: int, n_rows: int) -> float:
    biggest = max(n_cols, n_rows)
    if biggest <= 30:
        return 0.34
    if biggest <= 60:
        return 0.24
    return 0.16


def _draw_grid(ax, grid, x0: float, fontsize: float, group_width=None):
    n_rows = len(grid)
    n_cols = len(grid[0])
    for j, row in enumerate(grid):
        y = n_rows - 1 - j + 0.5
        for k, cell in enumerate(row):
            if cell is STAR:
                ax.text(x0 + k + 0.5, y, "★", ha="center", va="center",
                        fontsize=fontsize * 0.9, color=_STAR_COLOR)
            else:
                ax.text(x0 + k + 0.5, y, str(cell), ha="center", va="center",
                        fontsize=fontsize, color=_INT_COLOR)
    for k in range(n_cols + 1):
        heavy = group_width and k % group_width == 0
        ax.plot([x0 + k, x0 + k], [0, n_rows],
                color=_RULE_COLOR if heavy else _GRID_COLOR,
                linewidth=1.1 if heavy else 0.5)
    for j in range(n_rows + 1):
        ax.plot([x0, x0 + n_cols], [j, j], color=_GRID_COLOR, linewidth=0.5)
    return x0 + n_cols


def _finish(fig, ax, width_cells: int, height_cells: int, path, title):
    cell = _cell_size(width_cells, height_cells)
    fig.set_size_inches(max(2.0, width_cells * cell + 0.6),
                        max(1.5, height_cells * cell + (0.9 if title else 0.5)))
    ax.set_xlim(-0.3, width_cells + 0.3)
    ax.set_ylim(-0.3, height_cells + 0.3)
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title, fontsize=10)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def render_pda(p: Pda, path, *, title: str = None,
               group_width: int = None) -> None:
    """Write a PNG of the grid; group_width adds heavier rules every
    group_width columns."""
    if p.F * p.K > MAX_RENDER_CELLS:
        raise ValueError(f"array has {p.F * p.K} cells, over the render cap "
                         f"of {MAX_RENDER_CELLS}")
    fig, ax = plt.subplots()
    fontsize = 9 if max(p.F, p.K) <= 30 else 6
    _draw_grid(ax, p.grid, 0.0, fontsize, group_width)
    _finish(fig, ax, p.K, p.F, path, title)


def render_hpda(q: Hpda, path, *, title: str = None) -> None:
    """Write a PNG of the mirror grid followed by the user subarrays,
    separated by gaps."""
    total_cells = q.F * (q.K1 + q.K1 * q.K2)
    if total_cells > MAX_RENDER_CELLS:
        raise ValueError(f"array has {total_cells} cells, over the render "
                         f"cap of {MAX_RENDER_CELLS}")
    gap = 0.6
    fig, ax = plt.subplots()
    fontsize = 9 if max(q.F, q.K1 * q.K2) <= 30 else 6

    # mirror grid: star or blank (null)
    n_rows = q.F
    for j, row in enumerate(q.q0):
        y = n_rows - 1 - j + 0.5
        for k1, cell in enumerate(row):
            if cell:
                ax.text(k1 + 0.5, y, "★", ha="center", va="center",
                        fontsize=fontsize * 0.9, color=_STAR_COLOR)
    for k1 in range(q.K1 + 1):
        ax.plot([k1, k1], [0, n_rows], color=_RULE_COLOR, linewidth=1.1)
    for j in range(n_rows + 1):
        ax.plot([0, q.K1], [j, j], color=_GRID_COLOR, linewidth=0.5)

    x0 = q.K1 + gap
    for grid in q.subs:
        x0 = _draw_grid(ax, grid, x0, fontsize) + gap

    _finish(fig, ax, int(x0 - gap) + 1, q.F, path, title)
