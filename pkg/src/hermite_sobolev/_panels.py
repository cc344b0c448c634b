"""Composite Gauss-Legendre rules on explicit panel edges."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(edges, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of a composite Gauss-Legendre rule.

    Parameters
    ----------
    edges : array_like
        Increasing panel boundaries.
    order : int
        Points per panel.

    Returns
    -------
    nodes, weights : ndarray
        Flattened arrays of length ``order * (len(edges) - 1)``.
    """
    edges = np.asarray(edges, dtype=float)
    x, w = _legendre(order)
    left, right = edges[:-1, None], edges[1:, None]
    half = 0.5 * (right - left)
    nodes = (left + right) / 2 + half * x[None, :]
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def uniform_edges(lo: float, hi: float, width: float) -> np.ndarray:
    """Edges splitting ``[lo, hi]`` into equal panels no wider than ``width``."""
    count = max(1, int(np.ceil((hi - lo) / width)))
    return np.linspace(lo, hi, count + 1)


def refine(edges: np.ndarray) -> np.ndarray:
    """Bisect every panel."""
    mids = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty(2 * len(edges) - 1)
    out[0::2] = edges
    out[1::2] = mids
    return out
