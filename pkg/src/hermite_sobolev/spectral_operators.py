"""Exact coefficient-space operators: ladders, multipliers, Riesz transforms, propagators.

Everything here acts on :class:`SpectralCoefficients` and is exact up to
floating-point rounding, because the operators are diagonal or shift a single
index in the Hermite basis:

* ``A_j h_alpha = sqrt(2 alpha_j) h_{alpha - e_j}`` (annihilation, ``A_j = d_j + x_j``)
* ``A_{-j} h_alpha = sqrt(2 (alpha_j + 1)) h_{alpha + e_j}`` (creation)
* ``H h_alpha = (2|alpha| + d) h_alpha``
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .hermite_basis import SpectralCoefficients

__all__ = [
    "SymbolError",
    "MultiplierSpec",
    "LadderWord",
    "LadderIdentityFit",
    "power",
    "apply_ladder",
    "apply_word",
    "apply_H",
    "apply_multiplier",
    "riesz",
    "riesz_adjoint",
    "riesz_higher",
    "heat_evolve",
    "schrodinger_evolve",
    "ladder_words",
    "ladder_identity_constants",
]


class SymbolError(ValueError):
    """A multiplier symbol is not finite on an occupied eigenvalue."""


@dataclass(frozen=True)
class MultiplierSpec:
    """Diagonal operator ``h_alpha -> symbol(2|alpha| + d + shift) h_alpha``.

    ``symbol`` must accept a numpy array of eigenvalues.
    """

    symbol: Callable[[np.ndarray], np.ndarray]
    shift: int = 0
    name: str = ""

    def __post_init__(self):
        if self.shift not in (-2, 0, 2):
            raise ValueError(f"shift must be -2, 0 or 2, got {self.shift}")


def power(b: float, shift: int = 0) -> MultiplierSpec:
    """The multiplier ``(H + shift)^b``."""
    b = float(b)
    label = "H" if shift == 0 else f"(H{shift:+d})"
    return MultiplierSpec(lambda lam: np.power(lam, b), shift, f"{label}^{b:g}")


@dataclass(frozen=True)
class LadderWord:
    """Word ``(j_1, ..., j_m)`` standing for ``A_{j_1} A_{j_2} ... A_{j_m}``.

    The rightmost letter acts first.
    """

    letters: tuple[int, ...]

    def __post_init__(self):
        letters = tuple(int(j) for j in self.letters)
        if not letters:
            raise ValueError("a ladder word needs at least one letter")
        if any(j == 0 for j in letters):
            raise ValueError("ladder letters are nonzero signed axes")
        object.__setattr__(self, "letters", letters)

    @property
    def length(self) -> int:
        return len(self.letters)

    def adjoint(self) -> "LadderWord":
        """``(A_{j_1} ... A_{j_m})^* = A_{-j_m} ... A_{-j_1}``."""
        return LadderWord(tuple(-j for j in reversed(self.letters)))

    def check(self, d: int) -> None:
        for j in self.letters:
            if not 1 <= abs(j) <= d:
                raise ValueError(f"letter {j} outside 1 <= |j| <= {d}")

    def __str__(self):
        return "A[" + ",".join(str(j) for j in self.letters) + "]"


def _letters(d: int) -> list[int]:
    return [j for j in range(-d, d + 1) if j != 0]


def ladder_words(d: int, length: int) -> list[LadderWord]:
    """All words of exactly ``length`` letters, lexicographic in the signed axes."""
    import itertools

    return [LadderWord(w) for w in itertools.product(_letters(d), repeat=length)]


def apply_ladder(j: int, c: SpectralCoefficients) -> SpectralCoefficients:
    """Apply ``A_j`` (``j > 0``) or the creation operator ``A_{-j}`` (``j < 0``)."""
    d = c.d
    if not 1 <= abs(j) <= d:
        raise ValueError(f"axis {j} outside 1 <= |j| <= {d}")
    axis = abs(j) - 1
    n = c.max_order
    v = c.values
    shape = [1] * d
    shape[axis] = -1
    if j > 0:
        if n == 0:
            return SpectralCoefficients.zeros(d, 0, dtype=c.dtype)
        scale = np.sqrt(2.0 * np.arange(1, n + 1)).reshape(shape)
        moved = np.take(v, np.arange(1, n + 1), axis=axis) * scale
        sl = tuple(slice(0, n) for _ in range(d))
        return SpectralCoefficients._trusted(np.ascontiguousarray(moved[sl]), n - 1)
    scale = np.sqrt(2.0 * np.arange(1, n + 2)).reshape(shape)
    out = np.zeros((n + 2,) * d, dtype=c.dtype)
    target = [slice(0, n + 1)] * d
    target[axis] = slice(1, n + 2)
    out[tuple(target)] = v * scale
    return SpectralCoefficients._trusted(out, n + 1)


def apply_word(word: LadderWord | Sequence[int], c: SpectralCoefficients) -> SpectralCoefficients:
    """Apply ``A_{j_1} ... A_{j_m}`` (rightmost letter first)."""
    if not isinstance(word, LadderWord):
        word = LadderWord(tuple(word))
    word.check(c.d)
    for j in reversed(word.letters):
        c = apply_ladder(j, c)
    return c


def apply_H(c: SpectralCoefficients) -> SpectralCoefficients:
    """``H f``: multiply ``c_alpha`` by ``2|alpha| + d``."""
    return SpectralCoefficients(c.values * c.eigenvalues(), c.max_order)


def apply_multiplier(m: MultiplierSpec, c: SpectralCoefficients) -> SpectralCoefficients:
    """Diagonal scaling ``c_alpha -> m.symbol(2|alpha| + d + m.shift) c_alpha``.

    The symbol is only evaluated on occupied cells, so a singular symbol is
    fine as long as the expansion avoids its poles.

    Raises
    ------
    SymbolError
        If the symbol is not finite at an occupied eigenvalue.
    """
    lam = c.eigenvalues() + m.shift
    occupied = c.values != 0
    with np.errstate(all="ignore"):
        sym = np.asarray(m.symbol(lam[occupied]))
    if not np.all(np.isfinite(sym)):
        bad = lam[occupied][~np.isfinite(sym)]
        raise SymbolError(f"symbol {m.name or m.symbol!r} not finite at eigenvalue {bad[0]:g}")
    dtype = np.result_type(c.dtype, sym.dtype, np.float64)
    out = np.zeros(c.values.shape, dtype=dtype)
    out[occupied] = c.values[occupied] * sym
    return SpectralCoefficients._trusted(out, c.max_order)


def riesz(j: int, c: SpectralCoefficients) -> SpectralCoefficients:
    """Hermite-Riesz transform ``R_j = A_j H^{-1/2}``."""
    return apply_ladder(j, apply_multiplier(power(-0.5), c))


def riesz_adjoint(j: int, c: SpectralCoefficients) -> SpectralCoefficients:
    """``R_j^* = H^{-1/2} A_{-j}``."""
    return apply_multiplier(power(-0.5), apply_ladder(-j, c))


def riesz_higher(word: LadderWord | Sequence[int], c: SpectralCoefficients) -> SpectralCoefficients:
    """``A_{j_1} ... A_{j_m} H^{-m/2}``."""
    if not isinstance(word, LadderWord):
        word = LadderWord(tuple(word))
    word.check(c.d)
    return apply_word(word, apply_multiplier(power(-word.length / 2.0), c))


def heat_evolve(t: float, c: SpectralCoefficients) -> SpectralCoefficients:
    """``e^{-tH} f``; ``t = 0`` returns ``f`` unchanged."""
    if t < 0:
        raise ValueError("heat evolution needs t >= 0")
    if t == 0:
        return c
    return SpectralCoefficients._trusted(c.values * np.exp(-t * c.eigenvalues()), c.max_order)


def schrodinger_evolve(t: float, c: SpectralCoefficients) -> SpectralCoefficients:
    """``e^{itH} f``, always complex valued."""
    return SpectralCoefficients._trusted(c.values * np.exp(1j * t * c.eigenvalues()), c.max_order)


@dataclass(frozen=True)
class LadderIdentityFit:
    """Polynomial fit of ``sum_w (A_w)^* A_w`` over words of length ``k``.

    The operator is diagonal with eigenvalue ``mu(alpha)``; the fit is

        mu(alpha) = 2^k lam^k + sum_{m=0}^{k-1} c_m lam^m,  lam = 2|alpha| + d.

    Attributes
    ----------
    constants : tuple
        ``(c_1, ..., c_{k-1})``.
    constant_term : float
        ``c_0``.
    residual : float
        Max fit error relative to ``max |mu|`` using ``c_0, ..., c_{k-1}``.
    strict_residual : float
        Same, forcing ``c_0 = 0``.
    """

    k: int
    d: int
    probe_order: int
    constants: tuple[float, ...]
    constant_term: float
    residual: float
    strict_residual: float

    def polynomial(self, lam):
        """Evaluate the fitted polynomial at ``lam``."""
        lam = np.asarray(lam, dtype=float)
        out = 2.0**self.k * lam**self.k + self.constant_term
        for m, cm in enumerate(self.constants, start=1):
            out = out + cm * lam**m
        return out


def _word_gram_eigenvalue(alpha: tuple[int, ...], words: list[LadderWord], d: int) -> float:
    basis = SpectralCoefficients.basis(alpha)
    total = SpectralCoefficients.zeros(d)
    for w in words:
        total = total + apply_word(w.adjoint(), apply_word(w, basis))
    return float(np.real(total[alpha]))


def ladder_identity_constants(k: int, d: int, probe_order: int | None = None,
                              tol: float = 1e-8) -> LadderIdentityFit:
    """Fit the lower-order constants of ``sum_w (A_w)^* A_w = 2^k H^k + ...``.

    Eigenvalues are tabulated with :func:`apply_ladder` on every basis element
    with ``|alpha| <= probe_order`` (default ``k + 6``) and fitted by least
    squares.

    Raises
    ------
    ArithmeticError
        If the residual of the fit with a free constant term exceeds ``tol``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    n = k + 6 if probe_order is None else int(probe_order)
    if n < k:
        raise ValueError("probe order must be at least k")
    from .hermite_basis import multi_indices

    words = ladder_words(d, k)
    alphas = multi_indices(d, n)
    lam = np.array([2.0 * a.order + d for a in alphas])
    mu = np.array([_word_gram_eigenvalue(a.degrees, words, d) for a in alphas])
    target = mu - 2.0**k * lam**k
    scale = np.max(np.abs(mu))

    design = np.vander(lam, k, increasing=True)  # lam^0 .. lam^{k-1}
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    residual = float(np.max(np.abs(design @ coef - target)) / scale)
    if k > 1:
        strict, *_ = np.linalg.lstsq(design[:, 1:], target, rcond=None)
        strict_res = float(np.max(np.abs(design[:, 1:] @ strict - target)) / scale)
    else:
        strict_res = float(np.max(np.abs(target)) / scale)
    if residual > tol:
        raise ArithmeticError(
            f"ladder identity fit residual {residual:.3e} exceeds {tol:g} (k={k}, d={d})"
        )
    return LadderIdentityFit(
        k=k,
        d=d,
        probe_order=n,
        constants=tuple(float(x) for x in coef[1:]),
        constant_term=float(coef[0]),
        residual=residual,
        strict_residual=strict_res,
    )
