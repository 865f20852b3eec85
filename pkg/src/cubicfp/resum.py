"""Borel-type reexpansion of factorially divergent series.

A truncated series sum_k Z_{kn} g^k (one delta row at a time) is rewritten
in a basis of confluent-hypergeometric-type integrals, each of which has the
same factorial large-order growth

    Z_{kn} ~ gamma(n) (-sigma)^k k! k^{beta_n},   k -> infinity,

as the series itself, so that successive truncations converge instead of
diverging.  The basis carries a free strong-coupling power alpha which fixes
the g -> infinity behavior g^alpha of the reexpanded function; when unknown
it is selected by the principle of minimal sensitivity (module pms).

The order-N approximation to a full bivariate series is

    Z^(N)(g, delta) = sum_{n=0}^{N} [ sum_{p=n}^{N} a_pn * J_pn(g) ] delta^n,

where J_pn are the basis integrals (basis_integral) and the a_pn follow
from the Z_{kn} by a finite triangular transform (basis_coefficients).
All functions are pure and reentrant; quadrature workspaces are per-call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy import integrate

from .series import TruncatedBivariateSeries


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested relative tolerance."""


class CancellationError(ArithmeticError):
    """A coefficient sum lost more than six digits to cancellation."""


@dataclass(frozen=True)
class LargeOrderBehavior:
    """Large-order growth data: scale sigma and subexponential powers beta_n.

    beta_by_n[n] is the power of k multiplying k! in the growth law of the
    delta^n row.  The basis integrals require b0(n) = beta_n + 3/2 > -1 for
    every row in use.
    """

    sigma: float
    beta_by_n: tuple[float, ...]

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        object.__setattr__(self, "beta_by_n", tuple(float(b) for b in self.beta_by_n))
        for n, b in enumerate(self.beta_by_n):
            if not b + 1.5 > -1.0:
                raise ValueError(f"b0({n}) = beta_{n} + 3/2 = {b + 1.5} must exceed -1")

    @classmethod
    def additive(cls, sigma: float, beta0: float, n_max: int) -> "LargeOrderBehavior":
        """Rows growing with beta_n = beta0 + n, the pattern of both the
        field-theory beta functions and the anisotropic-oscillator energy."""
        return cls(sigma, tuple(beta0 + n for n in range(n_max + 1)))

    @property
    def n_max(self) -> int:
        return len(self.beta_by_n) - 1

    def b0(self, n: int) -> float:
        """Integrand exponent b0(n) = beta_n + 3/2 of the delta^n row."""
        if not 0 <= n <= self.n_max:
            raise ValueError(f"no growth data for row n={n} (have n <= {self.n_max})")
        return self.beta_by_n[n] + 1.5


def field_theory_large_order(n_max: int = 6) -> LargeOrderBehavior:
    """Growth parameters of the five-loop beta functions at M=3, epsilon=1.

    Both beta^u and beta^v share sigma = 1 and b0(n) = 6 + n, i.e.
    beta_n = 9/2 + n.
    """
    return LargeOrderBehavior.additive(1.0, 4.5, n_max)


@dataclass(frozen=True)
class ResumConfig:
    """Parameters of one resummation run.

    alpha        strong-coupling power accommodated by the basis
    order        truncation order N of the reexpansion
    large_order  growth data (must cover rows n = 0..order)
    quad_rel_tol relative tolerance of the basis-integral quadrature
    """

    alpha: float
    order: int
    large_order: LargeOrderBehavior
    quad_rel_tol: float = 1e-10

    def __post_init__(self):
        if self.order < 0:
            raise ValueError(f"order must be >= 0, got {self.order}")
        if not 0.0 < self.quad_rel_tol < 1.0:
            raise ValueError(f"quad_rel_tol must lie in (0, 1), got {self.quad_rel_tol}")
        # growth data is required only for rows actually resummed; rows that
        # vanish identically short-circuit before touching b0(n), so a
        # univariate series may run at high order with single-row data.


def pochhammer(c: float, k: int, require_nonzero: bool = False) -> float:
    """Rising factorial (c)_k = c (c+1) ... (c+k-1); empty product is 1.

    With require_nonzero=True an exact zero factor raises, for callers that
    divide by the result.  Plain product evaluation: exact for the k <= 60
    range used here (log-domain evaluation is only needed far beyond that).
    """
    if k < 0:
        raise ValueError(f"pochhammer order must be >= 0, got {k}")
    out = 1.0
    for j in range(k):
        factor = c + j
        if factor == 0.0 and require_nonzero:
            raise ValueError(f"pochhammer({c}, {k}) hits a zero factor at j={j}")
        out *= factor
    return out


def gen_binomial(a: float, m: int) -> float:
    """Generalized binomial coefficient C(a, m) for real a, integer m >= 0.

    Computed as prod_{j=1..m} (a - m + j)/j, which equals the ordinary
    binomial for integer a >= m and is well defined for all real a.
    """
    if m < 0:
        raise ValueError(f"binomial lower index must be >= 0, got {m}")
    out = 1.0
    for j in range(1, m + 1):
        out *= (a - m + j) / j
    return out


# Guard threshold for alternating-sum cancellation in basis_coefficients.
_CANCELLATION_LIMIT = 1e6


def basis_coefficients(
    series: TruncatedBivariateSeries, n: int, cfg: ResumConfig
) -> list[float]:
    """Coefficients a_pn, p = n..N, of the basis expansion of the delta^n row.

    a_pn = sum_{k=n}^{p} Z_{kn} / (b0+1)_k * (4/sigma)^k * C(p+k-1-2 alpha, p-k)

    The k-sum alternates; if any partial term exceeds the final value by more
    than six orders of magnitude the result is untrustworthy in double
    precision and a CancellationError is raised.
    """
    if not 0 <= n <= cfg.order:
        raise ValueError(f"row n={n} outside 0..{cfg.order}")
    if cfg.order > series.max_order:
        raise ValueError(
            f"resummation order {cfg.order} exceeds series max_order {series.max_order}"
        )
    b0 = cfg.large_order.b0(n)
    four_over_sigma = 4.0 / cfg.large_order.sigma
    # (b0+1)_k and (4/sigma)^k, k = 0..N, shared across p
    poch = [1.0]
    scale = [1.0]
    for k in range(1, cfg.order + 1):
        poch.append(pochhammer(b0 + 1.0, k, require_nonzero=True))
        scale.append(scale[-1] * four_over_sigma)

    out = []
    for p in range(n, cfg.order + 1):
        total = 0.0
        largest = 0.0
        for k in range(n, p + 1):
            z = series.coefficient(k, n)
            if z == 0.0:
                continue
            term = z / poch[k] * scale[k] * gen_binomial(p + k - 1 - 2.0 * cfg.alpha, p - k)
            total += term
            largest = max(largest, abs(term))
        if largest > 0.0 and abs(total) * _CANCELLATION_LIMIT < largest:
            raise CancellationError(
                f"a_{p}{n}: largest term {largest:.3e} exceeds sum {total:.3e} "
                f"by more than {_CANCELLATION_LIMIT:.0e}; extend precision or "
                f"shorten the series"
            )
        out.append(total)
    return out


def _integrand_factory(b0: float, p: int, alpha: float, c: float):
    """Integrand of the rescaled basis integral on u in [0, inf).

    Starting from the w in [0,1) form, the substitution w = t/(1+t) removes
    the boundary layer at w -> 1 (the divergent power of 1-w and the
    super-exponential cutoff both become polynomial/Gaussian factors), and
    the further rescale t = c*u with c = sigma*g/4 keeps the integrand O(1)
    near u = 1 for every g, so adaptive quadrature needs no tuning:

        J_pn(g) = c^p / Gamma(b0+1) *
                  int_0^inf (1+2cu) u^(b0+p) (1+cu)^(b0-p+2 alpha) e^(-u-cu^2) du

    Evaluated in log domain: the Gamma normalization stays folded into the
    constant and no intermediate power can overflow at large b0 or u.
    """
    lgamma_b0 = math.lgamma(b0 + 1.0)
    expo = b0 + p
    pw = b0 - p + 2.0 * alpha

    def f(u: float) -> float:
        if u <= 0.0:
            return 0.0
        damping = u + c * u * u
        if damping > 1e300:
            return 0.0
        log_val = (
            math.log1p(2.0 * c * u)
            + expo * math.log(u)
            + pw * math.log1p(c * u)
            - damping
            - lgamma_b0
        )
        if log_val < -745.0:
            return 0.0
        return math.exp(log_val)

    return f


@lru_cache(maxsize=200_000)
def _basis_integral_cached(
    p: int, b0: float, alpha: float, sigma: float, g: float, rel_tol: float
) -> float:
    c = sigma * g / 4.0
    f = _integrand_factory(b0, p, alpha, c)
    value, abserr, info, *rest = integrate.quad(
        f, 0.0, math.inf, epsabs=0.0, epsrel=rel_tol, limit=300, full_output=1
    )
    if rest:  # a warning message means the subdivision budget was exhausted
        raise QuadratureError(
            f"basis integral p={p}, b0={b0}, alpha={alpha}, g={g}: {rest[0]}"
        )
    if not value > 0.0:
        raise QuadratureError(
            f"basis integral p={p}, b0={b0}, g={g} returned nonpositive {value}"
        )
    return value * c**p


def basis_integral(p: int, n: int, g: float, cfg: ResumConfig) -> float:
    """Basis function J_pn(g): strictly positive for g > 0.

    Equals (4/(sigma g))^(b0+1) int_0^1 dw (1+w) w^(b0+p)
    / [Gamma(b0+1) (1-w)^(2 b0 + 2 alpha + 3)] exp[-4w / ((1-w)^2 sigma g)]
    with b0 = b0(n), evaluated to relative accuracy cfg.quad_rel_tol.
    For g -> 0+ it behaves as (sigma g / 4)^p (b0+1)_p.
    """
    if g <= 0.0:
        raise ValueError(f"basis integrals require g > 0, got g={g}")
    if not 0 <= n <= p:
        raise ValueError(f"need p >= n >= 0, got p={p}, n={n}")
    lo = cfg.large_order
    return _basis_integral_cached(p, lo.b0(n), cfg.alpha, lo.sigma, g, cfg.quad_rel_tol)


def resum_row(
    series: TruncatedBivariateSeries, n: int, g: float, cfg: ResumConfig
) -> float:
    """Resummed delta^n row Z^(N)_n(g) = sum_{p=n}^{N} a_pn J_pn(g).

    Rows that vanish identically (all Z_{kn} = 0 up to the truncation order)
    short-circuit to exactly zero without quadrature.
    """
    if series.row_is_zero(n, cfg.order):
        return 0.0
    apn = basis_coefficients(series, n, cfg)
    total = 0.0
    for offset, p in enumerate(range(n, cfg.order + 1)):
        if apn[offset] == 0.0:
            continue
        total += apn[offset] * basis_integral(p, n, g, cfg)
    return total


def resum_row_partials(
    series: TruncatedBivariateSeries, n: int, g: float, cfg: ResumConfig
) -> list[float]:
    """Successive truncations [Z^(n)_n(g), ..., Z^(N)_n(g)] of one row.

    The a_pn do not depend on the truncation order, so the order-N value is
    a partial sum of the order-N_max terms; sharing the basis integrals makes
    convergence studies (and PMS scans over alpha) cheap.
    """
    apn = basis_coefficients(series, n, cfg)
    partials = []
    total = 0.0
    for offset, p in enumerate(range(n, cfg.order + 1)):
        if apn[offset] != 0.0:
            total += apn[offset] * basis_integral(p, n, g, cfg)
        partials.append(total)
    return partials


def resum_eval(
    series: TruncatedBivariateSeries, g: float, delta: float, cfg: ResumConfig
) -> float:
    """Full order-N approximation Z^(N)(g, delta) = sum_n Z^(N)_n(g) delta^n."""
    total = 0.0
    for n in range(cfg.order + 1):
        row = resum_row(series, n, g, cfg)
        if row != 0.0:
            total += row * delta**n
    return total
