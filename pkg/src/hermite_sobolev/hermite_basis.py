"""Hermite functions, Gauss-Hermite quadrature and Hermite transforms.

The normalized Hermite functions

    h_n(t) = (2^n n! sqrt(pi))^{-1/2} H_n(t) exp(-t^2 / 2)

are evaluated with the three-term recurrence carrying the Gaussian factor.
The recurrence runs on rescaled values with a per-point log scale, so degrees
in the thousands can be evaluated far outside the turning points without
overflow or premature underflow.

Expansions ``f = sum_alpha c_alpha h_alpha`` are held in
:class:`SpectralCoefficients`, a dense coefficient cube truncated to
``|alpha| <= N``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

__all__ = [
    "DimensionError",
    "QuadratureError",
    "ResolutionError",
    "MultiIndex",
    "QuadratureRule",
    "SpectralCoefficients",
    "multi_indices",
    "eval_hermite_1d",
    "hermite_functions",
    "log_abs_hermite",
    "eval_hermite_tensor",
    "build_quadrature",
    "default_rule_size",
    "analyze",
    "synthesize",
    "synthesize_grid",
]

_LOG_PI_QUARTER = 0.25 * math.log(math.pi)
_RESCALE_AT = 1e150
_RESCALE_LOG = 150.0 * math.log(10.0)


class DimensionError(ValueError):
    """Point or index dimension does not match the expansion."""


class QuadratureError(RuntimeError):
    """The Gauss-Hermite eigenproblem failed."""


class ResolutionError(RuntimeError):
    """A discretization is too coarse for the requested expansion order."""


# ---------------------------------------------------------------------------
# multi-indices


@dataclass(frozen=True)
class MultiIndex:
    """Multi-index ``alpha = (alpha_1, ..., alpha_d)`` of nonnegative degrees."""

    degrees: tuple[int, ...]
    order: int = field(init=False, compare=False)

    def __post_init__(self):
        degrees = tuple(int(k) for k in self.degrees)
        if not degrees:
            raise ValueError("a multi-index needs at least one entry")
        if any(k < 0 for k in degrees):
            raise ValueError(f"negative degree in {degrees}")
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "order", sum(degrees))

    @property
    def d(self) -> int:
        return len(self.degrees)

    @classmethod
    def zero(cls, d: int) -> "MultiIndex":
        return cls((0,) * d)

    @classmethod
    def unit(cls, d: int, j: int) -> "MultiIndex":
        """The coordinate vector ``e_j`` (``j`` counted from 1)."""
        if not 1 <= j <= d:
            raise ValueError(f"axis {j} outside 1..{d}")
        return cls(tuple(int(i == j - 1) for i in range(d)))

    def shifted(self, j: int, step: int = 1) -> "MultiIndex":
        """``alpha + step * e_j``; raises if a degree would become negative."""
        deg = list(self.degrees)
        deg[j - 1] += step
        return MultiIndex(tuple(deg))

    def __iter__(self):
        return iter(self.degrees)

    def __len__(self):
        return len(self.degrees)

    def sort_key(self) -> tuple:
        """Graded lexicographic key."""
        return (self.order, self.degrees)


def _as_index(alpha, d: int | None = None) -> tuple[int, ...]:
    if isinstance(alpha, MultiIndex):
        deg = alpha.degrees
    elif np.isscalar(alpha):
        deg = (int(alpha),)
    else:
        deg = tuple(int(k) for k in alpha)
    if d is not None and len(deg) != d:
        raise DimensionError(f"index {deg} has dimension {len(deg)}, expected {d}")
    if any(k < 0 for k in deg):
        raise ValueError(f"negative degree in {deg}")
    return deg


def multi_indices(d: int, max_order: int) -> list[MultiIndex]:
    """All ``alpha`` with ``|alpha| <= max_order`` in graded lexicographic order."""
    out = [
        MultiIndex(t)
        for t in itertools.product(range(max_order + 1), repeat=d)
        if sum(t) <= max_order
    ]
    out.sort(key=MultiIndex.sort_key)
    return out


@lru_cache(maxsize=64)
def _order_cube(d: int, n: int) -> np.ndarray:
    """``|alpha|`` on the cube ``{0..n-1}^d``."""
    grids = np.meshgrid(*([np.arange(n)] * d), indexing="ij")
    out = np.sum(grids, axis=0) if d > 1 else grids[0].copy()
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# one-dimensional Hermite functions


def _recurrence(nmax: int, t: np.ndarray) -> Iterator[tuple[int, np.ndarray, np.ndarray, np.ndarray]]:
    """Yield ``(k, u_{k-1}, u_k, s)`` with ``h_j(t) = u_j * exp(s)``.

    ``u`` are rescaled recurrence values and ``s`` the running log scale,
    shared by the two consecutive degrees. Arrays are reused between steps.
    """
    s = -0.5 * t * t - _LOG_PI_QUARTER
    prev = np.zeros_like(t)
    cur = np.ones_like(t)
    yield 0, prev, cur, s
    if nmax == 0:
        return
    prev, cur = cur, math.sqrt(2.0) * t
    yield 1, prev, cur, s
    for k in range(1, nmax):
        nxt = math.sqrt(2.0 / (k + 1)) * t * cur - math.sqrt(k / (k + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE_AT
        if big.any():
            prev[big] /= _RESCALE_AT
            cur[big] /= _RESCALE_AT
            s[big] += _RESCALE_LOG
        yield k + 1, prev, cur, s


def _unscale(u: np.ndarray, s: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.sign(u) * np.exp(np.log(np.abs(u)) + s)


def hermite_functions(nmax: int, t) -> np.ndarray:
    """Table of ``h_0, ..., h_nmax`` at the points ``t``.

    Returns
    -------
    ndarray
        Shape ``(nmax + 1,) + np.shape(t)``.
    """
    if nmax < 0:
        raise ValueError("nmax must be nonnegative")
    t = np.asarray(t, dtype=float)
    flat = t.ravel().copy()
    out = np.empty((nmax + 1, flat.size))
    for k, _, cur, s in _recurrence(nmax, flat):
        out[k] = _unscale(cur, s)
    return out.reshape((nmax + 1,) + t.shape)


def log_abs_hermite(n: int, t) -> tuple[np.ndarray, np.ndarray]:
    """Sign and natural log of ``|h_n(t)|``; finite wherever ``h_n(t) != 0``."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    t = np.asarray(t, dtype=float)
    flat = t.ravel().copy()
    for k, _, cur, s in _recurrence(n, flat):
        if k == n:
            with np.errstate(divide="ignore"):
                logv = np.log(np.abs(cur)) + s
            return np.sign(cur).reshape(t.shape), logv.reshape(t.shape)
    raise AssertionError("unreachable")


def eval_hermite_1d(n: int, t):
    """Normalized Hermite function ``h_n(t)``.

    Parameters
    ----------
    n : int
        Degree, ``n >= 0``.
    t : float or array_like
        Evaluation points.

    Returns
    -------
    float or ndarray
        Same shape as ``t``.

    Examples
    --------
    >>> round(float(eval_hermite_1d(0, 0.0)), 10)
    0.7511255444
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    t_arr = np.asarray(t, dtype=float)
    flat = t_arr.ravel().copy()
    for k, _, cur, s in _recurrence(n, flat):
        if k == n:
            val = _unscale(cur, s).reshape(t_arr.shape)
            return float(val) if val.ndim == 0 else val
    raise AssertionError("unreachable")


def _points(x, d: int) -> np.ndarray:
    """Coerce evaluation points to shape ``(..., d)``."""
    x = np.asarray(x, dtype=float)
    if d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        return x[..., None]
    if x.ndim == 0 or x.shape[-1] != d:
        raise DimensionError(f"points of shape {x.shape} do not match dimension {d}")
    return x


def eval_hermite_tensor(alpha, x):
    """Tensor Hermite function ``h_alpha(x) = prod_j h_{alpha_j}(x_j)``.

    ``x`` has shape ``(..., d)``; for ``d = 1`` a plain array of points is
    also accepted.
    """
    deg = _as_index(alpha)
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        if len(deg) != 1:
            raise DimensionError(f"scalar point for a {len(deg)}-dimensional index")
        return eval_hermite_1d(deg[0], x)
    if x.shape[-1] != len(deg):
        if len(deg) == 1:
            return eval_hermite_1d(deg[0], x)
        raise DimensionError(f"point dimension {x.shape[-1]} != index dimension {len(deg)}")
    val = np.ones(x.shape[:-1])
    for j, n in enumerate(deg):
        val = val * eval_hermite_1d(n, x[..., j])
    return float(val) if np.ndim(val) == 0 else val


# ---------------------------------------------------------------------------
# Gauss-Hermite quadrature


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Hermite rule with log-scale weights.

    ``log_weights[i] = log(w_i * exp(nodes[i]**2))`` so that
    ``sum(exp(log_weights) * g(nodes))`` approximates ``int g`` for ``g``
    carrying its own Gaussian decay, e.g. products of Hermite functions.
    """

    nodes: np.ndarray
    log_weights: np.ndarray

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def gaussian_weights(self) -> np.ndarray:
        """Classical weights ``w_i`` for integrals against ``exp(-x^2)``."""
        return np.exp(self.log_weights - self.nodes**2)

    def integrate(self, values) -> np.ndarray:
        """``sum_i exp(log_weights[i]) * values[i]`` along the first axis."""
        w = np.exp(self.log_weights)
        return np.tensordot(w, np.asarray(values), axes=(0, 0))


def default_rule_size(max_order: int) -> int:
    return 2 * max_order + 32


@lru_cache(maxsize=16)
def build_quadrature(n: int) -> QuadratureRule:
    """Gauss-Hermite rule with ``n`` nodes (Golub-Welsch plus Newton polish)."""
    if n < 1:
        raise ValueError("quadrature size must be at least 1")
    off = np.sqrt(np.arange(1, n) / 2.0)
    try:
        x = eigh_tridiagonal(np.zeros(n), off, eigvals_only=True)
    except LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise QuadratureError(f"tridiagonal eigensolver failed for size {n}") from exc
    x = np.sort(x)
    x = 0.5 * (x - x[::-1])
    # Newton on h_n using h_n' = sqrt(2n) h_{n-1} - x h_n; only the ratio
    # h_n / h_{n-1} is needed and it is scale free.
    for _ in range(3):
        prev, cur, _s = _last_pair(n, x)
        r = cur / prev
        step = r / (math.sqrt(2.0 * n) - x * r)
        x = x - step
        x = 0.5 * (x - x[::-1])
    if n % 2:
        x[n // 2] = 0.0
    # Christoffel-Darboux at a root of h_n: sum_{k<n} h_k^2 = n h_{n-1}^2.
    prev, _cur, s = _last_pair(n, x)
    log_w = -math.log(n) - 2.0 * (np.log(np.abs(prev)) + s)
    if not np.all(np.diff(x) > 0):
        raise QuadratureError(f"nodes not strictly increasing for size {n}")
    x.setflags(write=False)
    log_w.setflags(write=False)
    return QuadratureRule(nodes=x, log_weights=log_w)


def _last_pair(n: int, x: np.ndarray):
    state = None
    for state in _recurrence(n, x.copy()):
        pass
    _, prev, cur, s = state
    return prev.copy(), cur.copy(), s.copy()


# ---------------------------------------------------------------------------
# coefficient containers


class SpectralCoefficients:
    """Finite Hermite expansion ``sum_{|alpha| <= N} c_alpha h_alpha``.

    Coefficients live in a dense array of shape ``(N + 1,) * d``; entries
    with ``|alpha| > N`` are always zero. Instances are immutable.

    Parameters
    ----------
    values : array_like
        Coefficient cube. A 1-D array is a one-dimensional expansion.
    max_order : int, optional
        Truncation order ``N``; defaults to the cube edge minus one. The cube
        is padded if it is too small.
    """

    __slots__ = ("_values", "_max_order")

    def __init__(self, values, max_order: int | None = None):
        arr = np.asarray(values)
        if arr.ndim == 0:
            arr = arr.reshape(1)
        if not np.issubdtype(arr.dtype, np.number):
            raise TypeError("coefficients must be numeric")
        if len(set(arr.shape)) != 1:
            raise ValueError(f"coefficient array must be a cube, got shape {arr.shape}")
        d = arr.ndim
        if d > 3:
            raise ValueError("dimensions above 3 are not supported")
        dtype = np.complex128 if np.iscomplexobj(arr) else np.float64
        edge = arr.shape[0]
        n = edge - 1 if max_order is None else int(max_order)
        if n < 0:
            raise ValueError("max_order must be nonnegative")
        cube = np.zeros((n + 1,) * d, dtype=dtype)
        m = min(edge, n + 1)
        cube[(slice(0, m),) * d] = arr[(slice(0, m),) * d]
        outside = _order_cube(d, n + 1) > n
        dropped = arr.size - cube[(slice(0, m),) * d].size
        if np.any(cube[outside] != 0) or (dropped and np.any(_beyond(arr, n + 1))):
            raise ValueError(f"nonzero coefficient with |alpha| > {n}")
        cube.setflags(write=False)
        self._values = cube
        self._max_order = n

    @classmethod
    def _trusted(cls, cube: np.ndarray, max_order: int) -> "SpectralCoefficients":
        """Wrap a cube already known to be valid (float64/complex128, zero beyond ``max_order``)."""
        obj = cls.__new__(cls)
        cube = _promote(cube)
        cube.setflags(write=False)
        obj._values = cube
        obj._max_order = max_order
        return obj

    # construction helpers -------------------------------------------------

    @classmethod
    def zeros(cls, d: int, max_order: int = 0, dtype=float) -> "SpectralCoefficients":
        return cls(np.zeros((max_order + 1,) * d, dtype=dtype))

    @classmethod
    def basis(cls, alpha, d: int | None = None) -> "SpectralCoefficients":
        """The expansion of a single ``h_alpha``."""
        deg = _as_index(alpha, d)
        n = sum(deg)
        cube = np.zeros((n + 1,) * len(deg))
        cube[deg] = 1.0
        return cls(cube)

    @classmethod
    def from_entries(cls, d: int, entries: Mapping | Iterable) -> "SpectralCoefficients":
        """Build from ``{alpha: value}`` or an iterable of ``(alpha, value)``."""
        items = list(entries.items() if isinstance(entries, Mapping) else entries)
        idx = [_as_index(a, d) for a, _ in items]
        n = max((sum(t) for t in idx), default=0)
        vals = [v for _, v in items]
        dtype = np.complex128 if any(np.iscomplexobj(v) for v in vals) else np.float64
        cube = np.zeros((n + 1,) * d, dtype=dtype)
        for t, v in zip(idx, vals):
            cube[t] += v
        return cls(cube)

    @classmethod
    def random(cls, d: int, max_order: int, rng: np.random.Generator, decay: float = 0.0,
               ) -> "SpectralCoefficients":
        """Standard normal coefficients times ``(2|alpha| + 1)^(-decay)``."""
        order = _order_cube(d, max_order + 1)
        vals = rng.standard_normal(order.shape) * (2.0 * order + 1.0) ** (-decay)
        vals[order > max_order] = 0.0
        return cls(vals)

    # accessors ---------------------------------------------------------------

    @property
    def d(self) -> int:
        return self._values.ndim

    @property
    def max_order(self) -> int:
        return self._max_order

    @property
    def values(self) -> np.ndarray:
        """Read-only coefficient cube of shape ``(N + 1,) * d``."""
        return self._values

    @property
    def dtype(self):
        return self._values.dtype

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self._values)

    @property
    def degree(self) -> int:
        """Largest ``|alpha|`` with a nonzero coefficient (``-1`` if empty)."""
        nz = self._values != 0
        if not nz.any():
            return -1
        return int(_order_cube(self.d, self._max_order + 1)[nz].max())

    def orders(self) -> np.ndarray:
        """``|alpha|`` for every cell of the coefficient cube."""
        return _order_cube(self.d, self._max_order + 1)

    def eigenvalues(self) -> np.ndarray:
        """``2|alpha| + d`` for every cell of the coefficient cube."""
        return _eigen_cube(self.d, self._max_order + 1)

    def __getitem__(self, alpha):
        deg = _as_index(alpha, self.d)
        if sum(deg) > self._max_order:
            return self._values.dtype.type(0)
        return self._values[deg]

    def entries(self) -> list[tuple[MultiIndex, complex]]:
        """Nonzero ``(alpha, c_alpha)`` pairs in graded lexicographic order."""
        nz = np.argwhere(self._values != 0)
        out = [(MultiIndex(tuple(int(k) for k in row)), self._values[tuple(row)]) for row in nz]
        out.sort(key=lambda item: item[0].sort_key())
        return out

    def __len__(self) -> int:
        return int(np.count_nonzero(self._values))

    def with_max_order(self, n: int) -> "SpectralCoefficients":
        """Pad, or truncate to ``|alpha| <= n`` (the partial sum ``S_n``)."""
        if n == self._max_order:
            return self
        m = min(n, self._max_order) + 1
        cube = np.zeros((n + 1,) * self.d, dtype=self.dtype)
        sub = self._values[(slice(0, m),) * self.d].copy()
        sub[_order_cube(self.d, m) > n] = 0
        cube[(slice(0, m),) * self.d] = sub
        return SpectralCoefficients._trusted(cube, n)

    def map_values(self, fn: Callable[[np.ndarray], np.ndarray]) -> "SpectralCoefficients":
        return SpectralCoefficients(fn(self._values), self._max_order)

    # algebra -------------------------------------------------------------------

    def _aligned(self, other: "SpectralCoefficients"):
        if not isinstance(other, SpectralCoefficients):
            return NotImplemented
        if other.d != self.d:
            raise DimensionError(f"dimensions {self.d} and {other.d} differ")
        n = max(self._max_order, other._max_order)
        return self.with_max_order(n)._values, other.with_max_order(n)._values

    def __add__(self, other):
        pair = self._aligned(other)
        if pair is NotImplemented:
            return pair
        return SpectralCoefficients._trusted(pair[0] + pair[1], max(self._max_order, other._max_order))

    def __sub__(self, other):
        pair = self._aligned(other)
        if pair is NotImplemented:
            return pair
        return SpectralCoefficients._trusted(pair[0] - pair[1], max(self._max_order, other._max_order))

    def __neg__(self):
        return SpectralCoefficients._trusted(-self._values, self._max_order)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return SpectralCoefficients(self._values * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return SpectralCoefficients(self._values / scalar)

    def inner(self, other: "SpectralCoefficients"):
        """Bilinear pairing ``int f g = sum c_alpha b_alpha`` (no conjugation)."""
        a, b = self._aligned(other)
        return np.sum(a * b)

    def norm(self) -> float:
        """Coefficient l2 norm, equal to the L2 norm of the expansion."""
        return float(np.sqrt(np.sum(np.abs(self._values) ** 2)))

    def allclose(self, other: "SpectralCoefficients", atol: float = 1e-12, rtol: float = 0.0) -> bool:
        a, b = self._aligned(other)
        return bool(np.allclose(a, b, atol=atol, rtol=rtol))

    def __eq__(self, other):
        if not isinstance(other, SpectralCoefficients) or other.d != self.d:
            return NotImplemented
        a, b = self._aligned(other)
        return bool(np.array_equal(a, b))

    __hash__ = None

    def __repr__(self):
        return f"SpectralCoefficients(d={self.d}, max_order={self._max_order}, nonzero={len(self)})"

    # serialization -----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "entries": [
                {"alpha": list(a.degrees), "re": float(np.real(v)), "im": float(np.imag(v))}
                for a, v in self.entries()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping) -> "SpectralCoefficients":
        d = int(data["d"])
        items = []
        for e in data["entries"]:
            re, im = float(e.get("re", 0.0)), float(e.get("im", 0.0))
            items.append((tuple(e["alpha"]), complex(re, im) if im != 0.0 else re))
        if not items:
            return cls.zeros(d)
        return cls.from_entries(d, items)

    @classmethod
    def from_json(cls, text: str) -> "SpectralCoefficients":
        return cls.from_dict(json.loads(text))


@lru_cache(maxsize=256)
def _eigen_cube(d: int, n: int) -> np.ndarray:
    lam = 2.0 * _order_cube(d, n) + d
    lam.setflags(write=False)
    return lam


def _promote(arr: np.ndarray) -> np.ndarray:
    return arr.astype(np.complex128 if np.iscomplexobj(arr) else np.float64, copy=False)


def _beyond(arr: np.ndarray, m: int) -> np.ndarray:
    """Entries of ``arr`` outside the leading ``m``-cube."""
    mask = np.ones(arr.shape, dtype=bool)
    mask[(slice(0, m),) * arr.ndim] = False
    return arr[mask]


# ---------------------------------------------------------------------------
# transforms


def _scaled_basis(n: int, rule: QuadratureRule) -> np.ndarray:
    """``Q[k, i] = h_k(x_i) exp(lw_i / 2)``, orthonormal rows for ``k < size``."""
    return hermite_functions(n, rule.nodes) * np.exp(0.5 * rule.log_weights)


def analyze(f: Callable, max_order: int, rule: QuadratureRule | None = None, d: int = 1,
            probe_tol: float = 1e-10) -> SpectralCoefficients:
    """Hermite coefficients ``<f, h_alpha>`` for ``|alpha| <= max_order``.

    Parameters
    ----------
    f : callable
        Called as ``f(x_1, ..., x_d)`` with broadcast coordinate arrays of the
        tensor quadrature grid; must return an array of that shape.
    max_order : int
        Truncation order ``N``.
    rule : QuadratureRule, optional
        One-dimensional rule used on every axis. Defaults to
        ``build_quadrature(2 N + 32)``.
    d : int
        Dimension.
    probe_tol : float
        Tolerance of the discrete orthonormality probe.

    Raises
    ------
    ResolutionError
        If the rule cannot resolve order ``N``: fewer than ``N + 1`` nodes, or
        the discrete Gram matrix of ``h_0..h_N`` deviates from the identity.
    """
    if max_order < 0:
        raise ValueError("max_order must be nonnegative")
    if rule is None:
        rule = build_quadrature(default_rule_size(max_order))
    if rule.size < max_order + 1:
        raise ResolutionError(f"rule of size {rule.size} cannot resolve order {max_order}")
    q = _scaled_basis(max_order, rule)
    gram_err = np.max(np.abs(q @ q.T - np.eye(max_order + 1)))
    if gram_err > probe_tol:
        raise ResolutionError(
            f"orthonormality probe off by {gram_err:.2e} at order {max_order} with {rule.size} nodes"
        )
    coords = np.meshgrid(*([rule.nodes] * d), indexing="ij")
    vals = np.asarray(f(*coords))
    vals = np.broadcast_to(vals, coords[0].shape)
    root_w = np.exp(0.5 * rule.log_weights)
    for axis in range(d):
        shape = [1] * d
        shape[axis] = -1
        vals = vals * root_w.reshape(shape)
    # contract each axis with Q
    for axis in range(d):
        vals = np.moveaxis(np.tensordot(q, vals, axes=(1, axis)), 0, axis)
    vals = np.array(vals)
    vals[_order_cube(d, max_order + 1) > max_order] = 0
    return SpectralCoefficients(vals)


def synthesize(c: SpectralCoefficients, x):
    """Evaluate ``sum c_alpha h_alpha`` at points ``x`` of shape ``(..., d)``.

    For ``d = 1`` any array of scalar points is accepted.
    """
    pts = _points(x, c.d)
    lead = pts.shape[:-1]
    flat = pts.reshape(-1, c.d)
    n = c.max_order
    tables = [hermite_functions(n, flat[:, j]) for j in range(c.d)]
    v = c.values
    if c.d == 1:
        out = v @ tables[0]
    elif c.d == 2:
        out = np.einsum("ab,am,bm->m", v, tables[0], tables[1], optimize=True)
    else:
        out = np.einsum("abc,am,bm,cm->m", v, *tables, optimize=True)
    out = out.reshape(lead)
    return out[()] if out.ndim == 0 else out


def synthesize_grid(c: SpectralCoefficients, *axes) -> np.ndarray:
    """Evaluate the expansion on the tensor grid ``axes[0] x ... x axes[d-1]``.

    With a single axis argument the same axis is used in every direction.
    """
    if len(axes) == 1 and c.d > 1:
        axes = axes * c.d
    if len(axes) != c.d:
        raise DimensionError(f"{len(axes)} axes for a {c.d}-dimensional expansion")
    tables = [hermite_functions(c.max_order, np.asarray(ax, dtype=float)) for ax in axes]
    out = c.values
    for t in tables:
        # contract the leading coefficient axis, append the grid axis at the end
        out = np.tensordot(out, t, axes=(0, 0))
    return out
