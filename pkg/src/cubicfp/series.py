"""Truncated two-variable perturbation series.

A series here is a double expansion in a combined coupling g and an
anisotropy ratio delta,

    Z(g, delta) = sum_{k=0}^{N_max} sum_{n=0}^{k} c_{kn} g^k delta^n,

stored on the triangular support n <= k <= N_max with absent entries
meaning exactly zero.  The module also carries the built-in five-loop
beta-function coefficient tables of the cubic-anisotropic quartic theory
for M=3 field components at epsilon=1 (three dimensions), which are the
primary input of the fixed-point analysis.

Coefficients of the built-in tables are stored exactly as published
(6 significant figures); no attempt is made to recompute them from
diagrams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping


@dataclass(frozen=True)
class CouplingPoint:
    """A point (g, delta) in the coupling plane, g = u+v, delta = v/(u+v)."""

    g: float
    delta: float

    def __post_init__(self):
        if not (math.isfinite(self.g) and math.isfinite(self.delta)):
            raise ValueError(f"coupling point must be finite, got {self}")


@dataclass(frozen=True)
class TruncatedBivariateSeries:
    """Triangular coefficient table of a truncated double series in (g, delta).

    coeffs maps (k, n) -> c_{kn} with 0 <= n <= k <= max_order; entries not
    present are exactly zero.  Instances are immutable after construction and
    safe to share across threads.
    """

    max_order: int
    coeffs: Mapping[tuple[int, int], float]
    label: str = ""

    def __post_init__(self):
        if self.max_order < 0:
            raise ValueError(f"max_order must be >= 0, got {self.max_order}")
        for (k, n) in self.coeffs:
            if not (0 <= n <= k <= self.max_order):
                raise ValueError(
                    f"coefficient ({k},{n}) outside triangular support "
                    f"0 <= n <= k <= {self.max_order}"
                )
        object.__setattr__(self, "coeffs", dict(self.coeffs))

    def coefficient(self, k: int, n: int) -> float:
        """Return c_{kn}; zero for any (k, n) outside the stored support."""
        if k < 0 or n < 0:
            raise ValueError(f"indices must be nonnegative, got k={k}, n={n}")
        return self.coeffs.get((k, n), 0.0)

    def row(self, n: int) -> list[float]:
        """Coefficients [c_{0n}, ..., c_{N n}] of the delta^n row (zero-padded)."""
        return [self.coefficient(k, n) for k in range(self.max_order + 1)]

    def row_is_zero(self, n: int, order: int | None = None) -> bool:
        """True when every c_{kn} with k <= order vanishes."""
        top = self.max_order if order is None else order
        return all(self.coefficient(k, n) == 0.0 for k in range(top + 1))

    def eval_raw(self, g: float, delta: float) -> float:
        """Direct partial sum sum_{k,n} c_{kn} g^k delta^n (no resummation).

        This is the raw, ultimately divergent series evaluated term by term;
        useful only at very weak coupling and as a cross-check.
        """
        total = 0.0
        for (k, n), c in sorted(self.coeffs.items()):
            total += c * g**k * delta**n
        return total


# Five-loop expansion coefficients beta^u_{kn} and beta^v_{kn} of the
# two-coupling beta functions for M=3, epsilon=1, in the variables
# g = u+v and delta = v/(u+v).  Keys are (k, n) = (g power, delta power).

_BETA_U_COEFFS = {
    (1, 0): -1.0, (2, 0): 3.667, (3, 0): -7.667, (4, 0): 47.651,
    (5, 0): -437.646, (6, 0): 4998.62,
    (1, 1): 1.0, (2, 1): -5.333, (3, 1): 15.667, (4, 1): -121.767,
    (5, 1): 1341.05, (6, 1): -17821.1,
    (2, 2): 1.667, (3, 2): -10.0, (4, 2): 115.885, (5, 2): -1664.86,
    (6, 2): 27191.0,
    (3, 3): 2.0, (4, 3): -50.074, (5, 3): 1064.62, (6, 3): -22916.2,
    (4, 4): 8.305, (5, 4): -350.528, (6, 4): 11183.1,
    (5, 5): 47.368, (6, 5): -2966.14,
    (6, 6): 330.76,
}

_BETA_V_COEFFS = {
    (1, 1): -1.0, (2, 1): 4.0, (3, 1): -10.778, (4, 1): 75.875,
    (5, 1): -776.26, (6, 1): 9707.36,
    (2, 2): -1.0, (3, 2): 6.222, (4, 2): -67.319, (5, 2): 944.05,
    (6, 2): -15030.9,
    (3, 3): -1.111, (4, 3): 30.211, (5, 3): -639.243, (6, 3): 13549.6,
    (4, 4): -6.218, (5, 4): 233.262, (6, 4): -7122.94,
    (5, 5): -33.414, (6, 5): 1973.58,
    (6, 6): -228.19,
}


def load_builtin_beta_tables() -> tuple[TruncatedBivariateSeries, TruncatedBivariateSeries]:
    """Return (beta_u, beta_v) with the built-in five-loop coefficients.

    beta_u has nonzero rows n = 0..6; beta_v carries an overall factor of
    delta, so its n = 0 row is identically zero.  Both are truncated at
    max_order = 6.
    """
    beta_u = TruncatedBivariateSeries(6, _BETA_U_COEFFS, label="beta_u")
    beta_v = TruncatedBivariateSeries(6, _BETA_V_COEFFS, label="beta_v")
    return beta_u, beta_v


# ---------------------------------------------------------------------------
# Plain-text coefficient files: one `k n value` entry per line, `#` comments,
# and a mandatory header line `# max_order=<N>`.


def format_series(s: TruncatedBivariateSeries) -> str:
    """Serialize a series in the text exchange format (lossless round-trip)."""
    lines = [f"# max_order={s.max_order}"]
    if s.label:
        lines.append(f"# label={s.label}")
    for (k, n) in sorted(s.coeffs):
        lines.append(f"{k} {n} {s.coeffs[(k, n)]!r}")
    return "\n".join(lines) + "\n"


def parse_series(text: str, label: str = "") -> TruncatedBivariateSeries:
    """Parse the text exchange format; raises ValueError with line numbers."""
    max_order = None
    coeffs: dict[tuple[int, int], float] = {}
    saw_entry = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("max_order="):
                try:
                    max_order = int(body.split("=", 1)[1])
                except ValueError:
                    raise ValueError(f"line {lineno}: bad max_order header {line!r}")
            elif body.startswith("label=") and not label:
                label = body.split("=", 1)[1]
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'k n value', got {line!r}")
        try:
            k, n, value = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise ValueError(f"line {lineno}: could not parse {line!r}")
        if (k, n) in coeffs:
            raise ValueError(f"line {lineno}: duplicate entry for ({k}, {n})")
        coeffs[(k, n)] = value
        saw_entry = True
    if max_order is None:
        raise ValueError("missing required header line '# max_order=<N>'")
    if not saw_entry:
        raise ValueError("series file contains no coefficient entries")
    return TruncatedBivariateSeries(max_order, coeffs, label=label)


def write_series_file(path: str | Path, s: TruncatedBivariateSeries) -> None:
    Path(path).write_text(format_series(s))


def read_series_file(path: str | Path) -> TruncatedBivariateSeries:
    p = Path(path)
    try:
        return parse_series(p.read_text(), label=p.stem)
    except ValueError as exc:
        raise ValueError(f"{p}: {exc}") from None
