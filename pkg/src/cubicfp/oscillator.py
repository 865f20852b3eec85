"""Exactly solvable oracles for validating the resummation machinery.

Three models with factorially divergent weak-coupling expansions and
independently computable exact values:

* the O(M)-symmetric anharmonic oscillator
      H = p^2/2 + x^2/2 + (g/4) (sum_i x_i^2)^2,
  ground-state series from a Bender-Wu-type recursion on the s-wave radial
  problem, exact reference from dense diagonalization;

* the zero-dimensional integral Z(g) = int dx exp(-x^2/2 - g x^4/4),
  normalized to Z(0), with series coefficients in closed form and the exact
  value expressible through a modified Bessel function of order 1/4;

* the anisotropic two-dimensional quartic oscillator with interaction
      V_int = (g/4) [x^4 + 2(1-delta) x^2 y^2 + y^4],
  the quantum-mechanical twin of the two-coupling field theory (it maps onto
  the M=2 interaction written in g = u+v, delta = v/(u+v)); double-expansion
  coefficients E_{kn} from Rayleigh-Schrodinger recursion in the product
  basis, carried out with polynomial-in-delta, exact-rational arithmetic.

All coefficient generators work in exact rational arithmetic; floats appear
only at the resummer boundary.  Generators are pure and memoized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import special

from .series import TruncatedBivariateSeries

OM_KMAX = 30
ZEROD_KMAX = 60
ANISO2D_KMAX = 9


class ConvergenceError(RuntimeError):
    """Basis enlargement did not stabilize the reference value."""


class FitError(RuntimeError):
    """Large-order fit rejected its input window."""


@dataclass(frozen=True)
class OscillatorModel:
    """Tag for one of the validation models.

    kind is 'om_symmetric' (with m components), 'zero_dimensional', or
    'aniso_2d'.  Coupling conventions: interaction (g/4)(sum x_i^2)^2 for
    om_symmetric, integrand exp(-x^2/2 - g x^4/4) for zero_dimensional, and
    V_int = (g/4)[x^4 + 2(1-delta) x^2 y^2 + y^4] for aniso_2d.
    """

    kind: str
    m: int = 1

    def __post_init__(self):
        if self.kind not in ("om_symmetric", "zero_dimensional", "aniso_2d"):
            raise ValueError(f"unknown oscillator kind {self.kind!r}")
        if self.kind == "om_symmetric" and self.m < 1:
            raise ValueError(f"om_symmetric needs m >= 1, got {self.m}")

    @classmethod
    def om(cls, m: int) -> "OscillatorModel":
        return cls("om_symmetric", m)

    @classmethod
    def zero_dimensional(cls) -> "OscillatorModel":
        return cls("zero_dimensional")

    @classmethod
    def aniso_2d(cls) -> "OscillatorModel":
        return cls("aniso_2d", m=2)


# ---------------------------------------------------------------------------
# Series generators (exact rationals)


@lru_cache(maxsize=None)
def om_coefficients(m: int, k_max: int) -> tuple[Fraction, ...]:
    """Ground-state energy coefficients E_k of E(g) = sum_k E_k g^k for the
    O(m) oscillator with interaction (g/4)(sum x_i^2)^2.

    Bender-Wu-type recursion on the zero-angular-momentum radial equation:
    writing psi = exp(-r^2/2) F(r) with F = sum_k g^k F_k and F_k an even
    polynomial sum_j c_{kj} r^(2j) of degree 4k, the coefficients obey

        2j c_{kj} - (j+1)(2j+m-2+2) c_{k,j+1} + c_{k-1,j-2}/4
            = sum_{i=1..k-1} E_i c_{k-i,j},        E_k = -m c_{k1},

    solved top-down in j with c_{k0} = 0 (k >= 1) fixing the normalization.
    Exact rational arithmetic throughout.
    """
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if not 1 <= k_max <= OM_KMAX:
        raise ValueError(f"k_max must lie in 1..{OM_KMAX}, got {k_max}")
    quarter = Fraction(1, 4)
    energies = [Fraction(m, 2)]
    # tables[k][j] = c_{kj}; tables[0] = {0: 1}
    tables: list[dict[int, Fraction]] = [{0: Fraction(1)}]
    for k in range(1, k_max + 1):
        c: dict[int, Fraction] = {}
        prev = tables[k - 1]
        for j in range(2 * k, 0, -1):
            rhs = Fraction(0)
            for i in range(1, k):
                rhs += energies[i] * tables[k - i].get(j, Fraction(0))
            rhs += (j + 1) * (2 * j + m) * c.get(j + 1, Fraction(0))
            rhs -= quarter * prev.get(j - 2, Fraction(0))
            c[j] = rhs / (2 * j)
        tables.append(c)
        energies.append(-m * c[1])
    return tuple(energies)


@lru_cache(maxsize=None)
def zerod_coefficients(k_max: int) -> tuple[Fraction, ...]:
    """Normalized coefficients z_k = (-1)^k (4k-1)!! / (4^k k!) of Z(g)/Z(0).

    Follows from the Gaussian moments <x^(4k)> = (4k-1)!! of the expanded
    quartic weight.
    """
    if not 0 <= k_max <= ZEROD_KMAX:
        raise ValueError(f"k_max must lie in 0..{ZEROD_KMAX}, got {k_max}")
    out = [Fraction(1)]
    double_fact = Fraction(1)
    factorial = Fraction(1)
    for k in range(1, k_max + 1):
        double_fact *= (4 * k - 3) * (4 * k - 1)
        factorial *= k
        sign = -1 if k % 2 else 1
        out.append(sign * double_fact / (Fraction(4) ** k * factorial))
    return tuple(out)


# delta-polynomials as tuples of Fractions, lowest power first

_ZERO_POLY: tuple[Fraction, ...] = ()


def _padd(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    if len(a) < len(b):
        a, b = b, a
    return tuple(a[i] + (b[i] if i < len(b) else 0) for i in range(len(a)))


def _pscale(a: tuple[Fraction, ...], s: Fraction) -> tuple[Fraction, ...]:
    return tuple(s * x for x in a)


def _pmul(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    if not a or not b:
        return _ZERO_POLY
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


@lru_cache(maxsize=None)
def _aniso2d_energy_polys(
    k_max: int, swap_axes: bool
) -> tuple[tuple[Fraction, ...], ...]:
    """Energy orders E_k(delta) as exact delta-polynomials, lowest power first."""
    one = (Fraction(1),)
    quarter = (Fraction(1, 4),)
    half_one_minus_delta = (Fraction(1, 2), Fraction(-1, 2))  # (1-delta)/2

    energies: list[tuple[Fraction, ...]] = [one]
    tables: list[dict[tuple[int, int], tuple[Fraction, ...]]] = [{(0, 0): one}]

    def cget(table, a, b):
        if a < 0 or b < 0:
            return _ZERO_POLY
        key = (b, a) if swap_axes else (a, b)
        return table.get(key, _ZERO_POLY)

    def cput(table, a, b, val):
        key = (b, a) if swap_axes else (a, b)
        table[key] = val

    for k in range(1, k_max + 1):
        c: dict[tuple[int, int], tuple[Fraction, ...]] = {}
        prev = tables[k - 1]
        for d in range(2 * k, 0, -1):
            for a in range(d, -1, -1):
                b = d - a
                rhs = _ZERO_POLY
                for i in range(1, k):
                    rhs = _padd(rhs, _pmul(energies[i], cget(tables[k - i], a, b)))
                rhs = _padd(rhs, _pscale(cget(c, a + 1, b), Fraction((a + 1) * (2 * a + 1))))
                rhs = _padd(rhs, _pscale(cget(c, a, b + 1), Fraction((b + 1) * (2 * b + 1))))
                vf = _padd(
                    _pmul(quarter, _padd(cget(prev, a - 2, b), cget(prev, a, b - 2))),
                    _pmul(half_one_minus_delta, cget(prev, a - 1, b - 1)),
                )
                rhs = _padd(rhs, _pscale(vf, Fraction(-1)))
                cput(c, a, b, _pscale(rhs, Fraction(1, 2 * d)))
        tables.append(c)
        e_k = _pscale(_padd(cget(c, 1, 0), cget(c, 0, 1)), Fraction(-1))
        energies.append(e_k)
    return tuple(energies)


def aniso2d_coefficients(
    k_max: int, n_max: int | None = None, swap_axes: bool = False
) -> dict[tuple[int, int], Fraction]:
    """Double-expansion coefficients E_{kn} of the anisotropic 2-D oscillator
    ground-state energy E(g, delta) = sum_{kn} E_{kn} g^k delta^n.

    Same exp(-(x^2+y^2)/2) * polynomial ansatz as om_coefficients, but in two
    variables: F_k = sum_{ab} c_k[a,b] x^(2a) y^(2b) with c_k[a,b] a
    polynomial in delta.  The quartic interaction couples only finitely many
    monomials per order, so each order is a finite exact-rational solve.

    swap_axes relabels x <-> y throughout; the potential is symmetric under
    the exchange, so the result must be bitwise identical (asserted in the
    test suite, not here).
    """
    if not 1 <= k_max <= ANISO2D_KMAX:
        raise ValueError(f"k_max must lie in 1..{ANISO2D_KMAX}, got {k_max}")
    if n_max is None:
        n_max = k_max
    if not 0 <= n_max <= k_max:
        raise ValueError(f"n_max must lie in 0..k_max={k_max}, got {n_max}")
    energies = _aniso2d_energy_polys(k_max, swap_axes)
    out: dict[tuple[int, int], Fraction] = {}
    for k, poly in enumerate(energies):
        for n, coeff in enumerate(poly):
            if n <= n_max and coeff:
                out[(k, n)] = coeff
    return out


# ---------------------------------------------------------------------------
# TruncatedBivariateSeries adapters (floats enter here, nowhere earlier)


def om_series(m: int, k_max: int) -> TruncatedBivariateSeries:
    coeffs = {(k, 0): float(e) for k, e in enumerate(om_coefficients(m, k_max))}
    return TruncatedBivariateSeries(k_max, coeffs, label=f"om{m}_energy")


def zerod_series(k_max: int) -> TruncatedBivariateSeries:
    coeffs = {(k, 0): float(z) for k, z in enumerate(zerod_coefficients(k_max))}
    return TruncatedBivariateSeries(k_max, coeffs, label="zerod_partition")


def aniso2d_series(k_max: int, n_max: int | None = None) -> TruncatedBivariateSeries:
    table = aniso2d_coefficients(k_max, n_max)
    coeffs = {kn: float(v) for kn, v in table.items()}
    return TruncatedBivariateSeries(k_max, coeffs, label="aniso2d_energy")


# ---------------------------------------------------------------------------
# Exact (non-perturbative) reference values


def _radial_quadratic_matrix(m: int, size: int) -> np.ndarray:
    """Matrix of r^2 in the normalized s-wave oscillator basis (size x size).

    Basis functions are Laguerre functions L_j^(m/2-1)(r^2) exp(-r^2/2) with
    harmonic energies m/2 + 2j; for m=1 this is the even Hermite basis.
    r^2 is tridiagonal: diag 2j + m/2, off-diagonal -sqrt((j+1)(j+m/2)).
    """
    j = np.arange(size, dtype=float)
    mat = np.diag(2.0 * j + 0.5 * m)
    off = -np.sqrt((j[:-1] + 1.0) * (j[:-1] + 0.5 * m))
    mat += np.diag(off, 1) + np.diag(off, -1)
    return mat


def _om_ground_state(m: int, g: float, size: int) -> float:
    r2 = _radial_quadratic_matrix(m, size + 2)
    r4 = (r2 @ r2)[:size, :size]  # exact: r^2 is tridiagonal
    j = np.arange(size, dtype=float)
    h = np.diag(0.5 * m + 2.0 * j) + 0.25 * g * r4
    return float(np.linalg.eigvalsh(h)[0])


def _even_x2_matrix(size: int) -> np.ndarray:
    """x^2 between even 1-D Hermite states |2i>, i = 0..size-1."""
    i = np.arange(size, dtype=float)
    mat = np.diag(2.0 * i + 0.5)
    off = np.sqrt((2.0 * i[:-1] + 1.0) * (2.0 * i[:-1] + 2.0)) / 2.0
    mat += np.diag(off, 1) + np.diag(off, -1)
    return mat


def _aniso2d_ground_state(g: float, delta: float, cut: int) -> float:
    """Dense diagonalization in the even-even product-Hermite basis i+j <= cut."""
    x2 = _even_x2_matrix(cut + 3)
    x4 = (x2 @ x2)[: cut + 1, : cut + 1]
    x2 = x2[: cut + 1, : cut + 1]
    states = [(i, j) for i in range(cut + 1) for j in range(cut + 1 - i)]
    index = {s: idx for idx, s in enumerate(states)}
    dim = len(states)
    h = np.zeros((dim, dim))
    for (i, j), row in index.items():
        h[row, row] += 1.0 + 2.0 * i + 2.0 * j
        for (a, b), col in index.items():
            v = 0.0
            if b == j:
                v += x4[i, a]
            if a == i:
                v += x4[j, b]
            v += 2.0 * (1.0 - delta) * x2[i, a] * x2[j, b]
            h[row, col] += 0.25 * g * v
    return float(np.linalg.eigvalsh(h)[0])


def _stabilized(values_at, start: int, grow: float = 1.5, tol: float = 1e-8,
                cap: int = 4000) -> float:
    """Grow the basis until successive values agree to tol (abs)."""
    size = start
    prev = values_at(size)
    while size < cap:
        size = int(size * grow) + 1
        cur = values_at(size)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    raise ConvergenceError(f"reference value did not stabilize below basis size {cap}")


def exact_reference(model: OscillatorModel, g: float, delta: float = 0.0) -> float:
    """High-accuracy non-perturbative ground-state value of the model.

    Oscillator kinds: dense diagonalization in a truncated (s-wave radial or
    product) Hermite basis, grown adaptively until stable to 1e-8.
    Zero-dimensional: closed form Z(g)/Z(0) through the exponentially scaled
    modified Bessel function of order 1/4.
    """
    if g < 0.0:
        raise ValueError(f"need g >= 0, got g={g}")
    if model.kind == "zero_dimensional":
        if g == 0.0:
            return 1.0
        x = 1.0 / (8.0 * g)
        return 0.5 * math.sqrt(2.0 / g) * special.kve(0.25, x) / math.sqrt(2.0 * math.pi)
    if model.kind == "om_symmetric":
        if g == 0.0:
            return 0.5 * model.m
        return _stabilized(lambda n: _om_ground_state(model.m, g, n), start=40)
    # aniso_2d
    if g == 0.0:
        return 1.0
    return _stabilized(lambda c: _aniso2d_ground_state(g, delta, c), start=16, grow=1.4)


# ---------------------------------------------------------------------------
# Empirical large-order parameter estimation


@dataclass(frozen=True)
class LargeOrderFit:
    """Least-squares estimate of the growth law c_k ~ gamma (-sigma)^k k! k^beta."""

    sigma: float
    beta: float
    residual: float  # rms misfit of log|c_k| - log k! over the window


def estimate_large_order(coeffs, fit_window: tuple[int, int]) -> LargeOrderFit:
    """Fit sigma and beta from generated coefficients on k in [k_lo, k_hi].

    Linear least squares of log|c_k| - log k! against k log sigma + beta log k
    (plus the prefactor intercept).  Requires strictly alternating signs in
    the window; raises FitError otherwise.
    """
    k_lo, k_hi = fit_window
    if k_hi >= len(coeffs):
        raise ValueError(f"window end {k_hi} beyond last coefficient {len(coeffs) - 1}")
    if k_lo < 1 or k_hi - k_lo < 5:
        raise ValueError(f"need k_lo >= 1 and k_hi - k_lo >= 5, got {fit_window}")
    window = list(range(k_lo, k_hi + 1))
    vals = [float(coeffs[k]) for k in window]
    for a, b in zip(vals, vals[1:]):
        if a == 0.0 or b == 0.0 or (a < 0.0) == (b < 0.0):
            raise FitError(
                f"coefficient signs not strictly alternating on k in {fit_window}"
            )
    y = np.array([math.log(abs(v)) - math.lgamma(k + 1) for k, v in zip(window, vals)])
    design = np.column_stack(
        [np.ones(len(window)), np.array(window, dtype=float),
         np.log(np.array(window, dtype=float))]
    )
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    return LargeOrderFit(sigma=float(math.exp(coef[1])), beta=float(coef[2]), residual=rms)
