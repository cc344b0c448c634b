"""Grid norms: L^p, Hermite-Sobolev W^{k,p}, Hermite potential norms, and
classical Fourier-side operators on uniform grids."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.signal import fftconvolve

from .hermite_basis import ResolutionError, SpectralCoefficients, hermite_functions
from .spectral_operators import LadderWord, apply_multiplier, apply_word, ladder_words, power

__all__ = [
    "GridFunction",
    "SobolevNormReport",
    "BoundaryDecayError",
    "default_grid",
    "lp_norm",
    "grid_lp_norm",
    "sobolev_words",
    "hermite_sobolev_norm",
    "potential_norm",
    "classical_sobolev_apply",
    "hilbert_transform",
]

_DEFAULT_GRID = {1: (15.0, 0.01), 2: (8.0, 0.05)}


class BoundaryDecayError(ValueError):
    """Samples do not vanish at the edge of the grid."""


def default_grid(d: int) -> tuple[float, float]:
    """Default ``(L, h)`` for dimension ``d``."""
    return _DEFAULT_GRID[d]


def _count(L: float, h: float) -> int:
    n = 2.0 * L / h
    if abs(n - round(n)) > 1e-9 * n:
        raise ValueError(f"2L/h must be an integer (L={L}, h={h})")
    return int(round(n)) + 1


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples on the uniform grid ``{-L, -L + h, ..., L}^d``.

    Attributes
    ----------
    d : int
        1 or 2.
    L : float
        Half-width, at least 5.
    h : float
        Spacing; ``2L/h`` must be an integer.
    samples : ndarray
        Shape ``(n,) * d`` with ``n = 2L/h + 1``; stored read-only.
    """

    d: int
    L: float
    h: float
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ValueError("grid functions are 1- or 2-dimensional")
        if self.h <= 0:
            raise ValueError("spacing must be positive")
        if self.L < 5:
            raise ValueError("half-width must be at least 5")
        n = _count(self.L, self.h)
        arr = np.array(self.samples)
        if arr.shape != (n,) * self.d:
            raise ValueError(f"expected samples of shape {(n,) * self.d}, got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.L, self.L, self.samples.shape[0])

    @property
    def shape(self) -> tuple[int, ...]:
        return self.samples.shape

    def with_samples(self, samples) -> "GridFunction":
        return GridFunction(self.d, self.L, self.h, samples)

    @classmethod
    def from_callable(cls, f: Callable, d: int = 1, L: float | None = None,
                      h: float | None = None) -> "GridFunction":
        """Sample ``f(x)`` (``d = 1``) or ``f(x, y)`` (``d = 2``, ij-indexed mesh)."""
        L0, h0 = default_grid(d)
        L, h = L or L0, h or h0
        ax = np.linspace(-L, L, _count(L, h))
        coords = np.meshgrid(*([ax] * d), indexing="ij")
        vals = np.broadcast_to(np.asarray(f(*coords)), coords[0].shape)
        return cls(d, L, h, vals)

    @classmethod
    def from_coefficients(cls, c: SpectralCoefficients, L: float | None = None,
                          h: float | None = None) -> "GridFunction":
        """Synthesize a Hermite expansion on the grid."""
        L0, h0 = default_grid(c.d)
        L, h = L or L0, h or h0
        ax = np.linspace(-L, L, _count(L, h))
        table = hermite_functions(c.max_order, ax)
        return cls(c.d, L, h, _values_on_grid(c.values, table))

    def to_csv(self, fh=None) -> str | None:
        """Write ``x[, y], value`` rows (``value_re, value_im`` if complex).

        Returns the CSV text when ``fh`` is None.
        """
        sink = io.StringIO() if fh is None else fh
        w = csv.writer(sink, lineterminator="\n")
        cplx = np.iscomplexobj(self.samples)
        coords = ["x", "y"][: self.d]
        w.writerow(coords + (["value_re", "value_im"] if cplx else ["value"]))
        ax = self.axis
        for idx in np.ndindex(self.samples.shape):
            v = self.samples[idx]
            pos = ["%.17g" % ax[i] for i in idx]
            vals = ["%.17g" % v.real, "%.17g" % v.imag] if cplx else ["%.17g" % v]
            w.writerow(pos + vals)
        return sink.getvalue() if fh is None else None


def _values_on_grid(values: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Contract a coefficient cube with a Hermite table along every axis."""
    n = values.shape[0]
    t = table[:n]
    out = values
    for _ in range(values.ndim):
        out = np.tensordot(out, t, axes=(0, 0))
    return out


def grid_lp_norm(samples: np.ndarray, h: float, p: float) -> float:
    """Trapezoid ``L^p`` norm of samples on a uniform grid of spacing ``h``."""
    a = np.abs(np.asarray(samples))
    if p == math.inf:
        return float(a.max(initial=0.0))
    if p < 1:
        raise ValueError("p must be at least 1")
    m = a.max(initial=0.0)
    if m == 0:
        return 0.0
    v = (a / m) ** p
    for _ in range(a.ndim):
        v = np.trapezoid(v, dx=h, axis=0)
    return float(m * v ** (1.0 / p))


def lp_norm(g: GridFunction, p: float) -> float:
    """``(int |g|^p)^{1/p}`` by the trapezoid rule; the max norm for ``p = inf``."""
    return grid_lp_norm(g.samples, g.h, p)


@dataclass(frozen=True)
class SobolevNormReport:
    """Per-word contributions to ``||f||_{W^{k,p}}``.

    ``terms`` maps a letter tuple to ``||A_word f||_p``; the empty tuple is
    ``||f||_p``. ``total`` is their sum.
    """

    total: float
    terms: dict

    def __post_init__(self):
        if any(v < 0 for v in self.terms.values()):
            raise ValueError("norm terms must be nonnegative")


def sobolev_words(d: int, k: int) -> list[LadderWord]:
    """Ladder words of length ``1..k``, graded then lexicographic."""
    out: list[LadderWord] = []
    for m in range(1, k + 1):
        out.extend(ladder_words(d, m))
    return out


def _check_resolution(max_order: int, L: float, h: float, tol: float = 1e-6) -> None:
    ax = np.linspace(-L, L, _count(L, h))
    hm = hermite_functions(max_order, ax)[-1]
    err = abs(np.trapezoid(hm * hm, dx=h) - 1.0)
    edge = max(abs(hm[0]), abs(hm[-1]))
    if err > tol or edge > 1e-8:
        raise ResolutionError(
            f"grid L={L}, h={h} cannot resolve order {max_order} "
            f"(L2 defect {err:.1e}, edge value {edge:.1e})"
        )


def hermite_sobolev_norm(c: SpectralCoefficients, k: int, p: float, L: float | None = None,
                         h: float | None = None) -> SobolevNormReport:
    """``||f||_p + sum_{1 <= |w| <= k} ||A_w f||_p`` on a grid.

    Each word is applied exactly in coefficient space and then synthesized.

    Raises
    ------
    ResolutionError
        If the grid cannot represent ``h_{N+k}`` (checked with the discrete
        ``L^2`` norm of that basis function and its edge value).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if c.d not in (1, 2):
        raise ValueError("grid norms support d = 1, 2")
    L0, h0 = default_grid(c.d)
    L, h = L or L0, h or h0
    top = c.max_order + k
    _check_resolution(top, L, h)
    ax = np.linspace(-L, L, _count(L, h))
    table = hermite_functions(top, ax)
    terms = {(): grid_lp_norm(_values_on_grid(c.values, table), h, p)}
    for w in sobolev_words(c.d, k):
        terms[w.letters] = grid_lp_norm(_values_on_grid(apply_word(w, c).values, table), h, p)
    return SobolevNormReport(total=float(sum(terms.values())), terms=terms)


def potential_norm(c: SpectralCoefficients, a: float, p: float, L: float | None = None,
                   h: float | None = None) -> float:
    """``||H^{a/2} f||_p``, the norm of ``f`` in the Hermite potential space of order ``a``."""
    L0, h0 = default_grid(c.d)
    L, h = L or L0, h or h0
    _check_resolution(c.max_order, L, h)
    g = apply_multiplier(power(a / 2.0), c)
    return lp_norm(GridFunction.from_coefficients(g, L, h), p)


def classical_sobolev_apply(g: GridFunction, a: float, pad: int = 4,
                            boundary_tol: float = 1e-12) -> GridFunction:
    """Apply ``(I - Delta)^{a/2}`` to 1-D samples with the FFT.

    The samples are zero-padded to ``pad`` times their length and multiplied
    by ``(1 + 4 pi^2 xi^2)^{a/2}`` on the periodic padded grid.

    Raises
    ------
    BoundaryDecayError
        If ``|g|`` exceeds ``boundary_tol`` at either end of the grid.
    """
    if g.d != 1:
        raise ValueError("classical Sobolev operators are one-dimensional here")
    s = g.samples
    if max(abs(s[0]), abs(s[-1])) > boundary_tol:
        raise BoundaryDecayError("samples do not decay at the grid boundary")
    if a == 0:
        return g
    n = s.size
    m = pad * n
    lead = (m - n) // 2
    buf = np.zeros(m, dtype=np.result_type(s.dtype, np.float64))
    buf[lead:lead + n] = s
    xi = np.fft.fftfreq(m, d=g.h)
    sym = (1.0 + 4.0 * np.pi**2 * xi**2) ** (a / 2.0)
    # shift so the grid origin sits at index 0 before transforming
    origin = lead + n // 2
    fhat = np.fft.fft(np.roll(buf, -origin)) * sym
    out = np.roll(np.fft.ifft(fhat), origin)[lead:lead + n]
    if not np.iscomplexobj(s):
        out = out.real
    return g.with_samples(out)


def _truncated_hilbert(s: np.ndarray, h: float, m: int) -> np.ndarray:
    n = s.size
    k = np.arange(-(n - 1), n)
    kern = np.zeros(k.size)
    keep = np.abs(k) > m
    kern[keep] = 1.0 / k[keep]
    full = fftconvolve(s, kern, mode="full")
    return full[n - 1:2 * n - 1]


def hilbert_transform(g: GridFunction, eps: float) -> GridFunction:
    """Truncated Hilbert transform ``int_{|y| > eps} g(x - y) / y dy`` (no ``1/pi``).

    Uses the grid nodes ``y = kh``, dropping ``|kh| <= eps``; this is the
    midpoint rule for the truncated integral with cutoff ``(m + 1/2) h``,
    ``m = floor(eps / h)``. With ``eps = 0`` the principal value is obtained by
    linear extrapolation in the cutoff from ``m = 2`` and ``m = 4``.

    Raises
    ------
    ValueError
        If ``0 < eps <= h``.
    """
    if g.d != 1:
        raise ValueError("the Hilbert transform is one-dimensional")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    s = g.samples
    if eps > 0:
        if g.h >= eps:
            raise ValueError(f"grid spacing {g.h} too coarse for truncation {eps}")
        m = int(math.floor(eps / g.h + 1e-9))
        return g.with_samples(_truncated_hilbert(s, g.h, m))
    e1, e2 = 2.5 * g.h, 4.5 * g.h
    h1 = _truncated_hilbert(s, g.h, 2)
    h2 = _truncated_hilbert(s, g.h, 4)
    return g.with_samples((e2 * h1 - e1 * h2) / (e2 - e1))
