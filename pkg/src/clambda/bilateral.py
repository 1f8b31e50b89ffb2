"""Windowed bilateral module: basis states n in [n_min, n_max] including
negative n, so negative powers of the creator are well defined.

This is an algebraic module, not an inner-product representation: the
annihilator is not the adjoint of the creator here.  Operators are banded;
each band entry is an exact GammaPolynomial in the formal deformation
symbols, so identities that hold identically in gamma are decided exactly.
Numeric matrices (at the rep's gamma values) are materialized on demand.

Margin bookkeeping is mandatory: a column n is *interior* for an operator
iff every intermediate shift of the word stays inside the window, and
residuals are only ever taken over interior columns, so silent edge
truncation can never masquerade as a verified identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import CyclotomicScalar, GammaPolynomial
from .params import AlgebraParams

__all__ = [
    "BilateralRep",
    "WordOperator",
    "WindowError",
    "build_bilateral",
    "monomial",
    "interior_residual",
]


class WindowError(ValueError):
    """Window too small for the requested construction."""


Bands = dict[int, dict[int, GammaPolynomial]]


class WordOperator:
    """Banded operator over the window basis.

    bands[shift][n] is the exact coefficient of |n + shift> in X|n>.
    exc_up/exc_down bound every intermediate shift of the underlying word
    (conservative under composition); net_shift is the total creator minus
    annihilator degree where that is well defined, else None.
    """

    __slots__ = (
        "params", "n_min", "n_max", "bands",
        "exc_up", "exc_down", "net_shift", "numeric_scale", "_matrix",
    )

    def __init__(
        self,
        params: AlgebraParams,
        n_min: int,
        n_max: int,
        bands: Bands,
        exc_up: int,
        exc_down: int,
        net_shift: int | None,
        numeric_scale: complex = 1.0,
    ):
        self.params = params
        self.n_min = n_min
        self.n_max = n_max
        self.bands = {d: dict(col) for d, col in bands.items() if col}
        self.exc_up = exc_up
        self.exc_down = exc_down
        self.net_shift = net_shift
        self.numeric_scale = complex(numeric_scale)
        self._matrix = None

    # -- structure ----------------------------------------------------------

    @property
    def window(self) -> tuple[int, int]:
        return (self.n_min, self.n_max)

    @property
    def dim(self) -> int:
        return self.n_max - self.n_min + 1

    @property
    def margin(self) -> int:
        return max(self.exc_up, -self.exc_down)

    def valid_columns(self) -> range:
        """Source states n whose full excursion stays inside the window."""
        lo = self.n_min - self.exc_down
        hi = self.n_max - self.exc_up
        return range(lo, hi + 1)

    def _same_frame(self, other: "WordOperator") -> None:
        if self.params is not other.params or self.window != other.window:
            raise ValueError("operators live on different representations")

    # -- algebra ------------------------------------------------------------

    def __matmul__(self, other: "WordOperator") -> "WordOperator":
        """Composition: (X @ Y)|n> = X(Y|n>).  Out-of-window intermediates
        are dropped; margins mark the affected columns as non-interior."""
        self._same_frame(other)
        out: Bands = {}
        for d2, col2 in other.bands.items():
            for d1, col1 in self.bands.items():
                target = out.setdefault(d1 + d2, {})
                for n, c2 in col2.items():
                    m = n + d2
                    if m < self.n_min or m > self.n_max:
                        continue
                    c1 = col1.get(m)
                    if c1 is None:
                        continue
                    prod = c1 * c2
                    if n in target:
                        target[n] = target[n] + prod
                    else:
                        target[n] = prod
        shifts = list(other.bands.keys()) or [0]
        exc_up = max(other.exc_up, max(d + self.exc_up for d in shifts))
        exc_down = min(other.exc_down, min(d + self.exc_down for d in shifts))
        net = None
        if self.net_shift is not None and other.net_shift is not None:
            net = self.net_shift + other.net_shift
        return WordOperator(
            self.params, self.n_min, self.n_max, out,
            exc_up, exc_down, net, self.numeric_scale * other.numeric_scale,
        )

    def __add__(self, other: "WordOperator") -> "WordOperator":
        self._same_frame(other)
        if self.numeric_scale != other.numeric_scale:
            raise ValueError("cannot add operators with different numeric scales")
        out: Bands = {d: dict(col) for d, col in self.bands.items()}
        for d, col in other.bands.items():
            target = out.setdefault(d, {})
            for n, c in col.items():
                target[n] = target[n] + c if n in target else c
        net = self.net_shift if self.net_shift == other.net_shift else None
        return WordOperator(
            self.params, self.n_min, self.n_max, out,
            max(self.exc_up, other.exc_up), min(self.exc_down, other.exc_down),
            net, self.numeric_scale,
        )

    def __neg__(self) -> "WordOperator":
        return self.scale_exact(Fraction(-1))

    def __sub__(self, other: "WordOperator") -> "WordOperator":
        return self + (-other)

    def scale_exact(self, factor) -> "WordOperator":
        """Multiply entries by an exact scalar (rational, cyclotomic, or
        gamma polynomial); preserves exact comparability."""
        if isinstance(factor, (int, Fraction, CyclotomicScalar)):
            bands = {d: {n: c * factor for n, c in col.items()} for d, col in self.bands.items()}
        elif isinstance(factor, GammaPolynomial):
            bands = {d: {n: c * factor for n, c in col.items()} for d, col in self.bands.items()}
        else:
            raise TypeError(f"not an exact scalar: {type(factor).__name__}")
        return WordOperator(
            self.params, self.n_min, self.n_max, bands,
            self.exc_up, self.exc_down, self.net_shift, self.numeric_scale,
        )

    def scale_numeric(self, factor: complex) -> "WordOperator":
        """Multiply by an arbitrary complex number; exact bands keep their
        values and the factor rides on numeric_scale, so exact comparisons
        remain meaningful only between equal scales."""
        return WordOperator(
            self.params, self.n_min, self.n_max, self.bands,
            self.exc_up, self.exc_down, self.net_shift,
            self.numeric_scale * complex(factor),
        )

    # -- evaluation ----------------------------------------------------------

    @property
    def matrix(self) -> np.ndarray:
        """Dense numeric matrix at the rep's gamma values (cached)."""
        if self._matrix is None:
            dim = self.dim
            m = np.zeros((dim, dim), dtype=complex)
            gamma = self.params.gamma
            for d, col in self.bands.items():
                for n, c in col.items():
                    row = n + d - self.n_min
                    if 0 <= row < dim:
                        m[row, n - self.n_min] = c.eval(gamma)
            self._matrix = self.numeric_scale * m
        return self._matrix

    def apply_to_state(self, n: int) -> list[tuple[int, complex]]:
        """Numeric action on |n>; n must be an interior column."""
        if n not in self.valid_columns():
            raise WindowError(f"state {n} is not interior for this operator")
        out = []
        for d, col in self.bands.items():
            c = col.get(n)
            if c is not None:
                out.append((n + d, self.numeric_scale * c.eval(self.params.gamma)))
        return sorted(out)

    def exact_equals_on(self, other: "WordOperator", columns) -> bool:
        """Group-ring equality of entries over the given source columns."""
        self._same_frame(other)
        if self.numeric_scale != other.numeric_scale:
            return False
        zero = GammaPolynomial.zero(self.params.lam)
        shifts = set(self.bands) | set(other.bands)
        for d in shifts:
            col_a = self.bands.get(d, {})
            col_b = other.bands.get(d, {})
            for n in columns:
                if col_a.get(n, zero) != col_b.get(n, zero):
                    return False
        return True


def interior_residual(x: WordOperator, y: WordOperator) -> float:
    """Max column norm of (x - y) over the shared interior columns.

    Exactly 0.0 when the exact banded forms agree (group-ring identity);
    otherwise the numeric residual at the rep's gamma values.  Raises
    WindowError when no column is interior for both operators.
    """
    x._same_frame(y)
    cols = [n for n in x.valid_columns() if n in y.valid_columns()]
    if not cols:
        raise WindowError("empty interior: window too small for these words")
    if x.numeric_scale == y.numeric_scale and x.exact_equals_on(y, cols):
        return 0.0
    mx, my = x.matrix, y.matrix
    idx = [n - x.n_min for n in cols]
    diff = mx[:, idx] - my[:, idx]
    return float(np.max(np.linalg.norm(diff, axis=0)))


# --------------------------------------------------------------------------
# Representation builder
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BilateralRep:
    """Elementary operators over a bilateral window basis."""

    params: AlgebraParams
    n_min: int
    n_max: int
    a: WordOperator
    a_dag: WordOperator
    a_dag_inv: WordOperator
    K: WordOperator
    N: WordOperator
    identity: WordOperator
    deformation: WordOperator  # I's partner: sum_r g_r K^r as an exact diagonal

    @property
    def window(self) -> tuple[int, int]:
        return (self.n_min, self.n_max)

    def K_power(self, s: int) -> WordOperator:
        """K^s for any integer s (diagonal of w^{2 n s})."""
        lam = self.params.lam
        col = {
            n: GammaPolynomial.constant(CyclotomicScalar.zeta_power(lam, 2 * n * s))
            for n in range(self.n_min, self.n_max + 1)
        }
        return WordOperator(self.params, self.n_min, self.n_max, {0: col}, 0, 0, 0)

    def shift_power(self, p: int) -> WordOperator:
        """(a+)^p for any integer p, via the two-sided inverse when p < 0."""
        op = self.identity
        step = self.a_dag if p >= 0 else self.a_dag_inv
        for _ in range(abs(p)):
            op = step @ op
        return op


def _structure_poly(lam: int, n: int) -> GammaPolynomial:
    """F(n) with formal gamma: n + sum_{nu < n mod lam} sum_r w^{2 nu r} g_r."""
    poly = GammaPolynomial.rational(lam, n)
    for nu in range(n % lam):
        for r in range(1, lam):
            poly = poly + GammaPolynomial.gamma(lam, r).scale_zeta(2 * nu * r)
    return poly


def build_bilateral(params: AlgebraParams, n_min: int = -32, n_max: int = 32) -> BilateralRep:
    """Construct the bilateral module on states n_min..n_max.

    The structure function extends to negative n by running its defining
    recursion backward, which the closed form n + S_{n mod lam} realizes.
    """
    if not (n_min < 0 < n_max):
        raise WindowError(f"window must straddle zero, got [{n_min}, {n_max}]")
    lam = params.lam
    states = range(n_min, n_max + 1)
    one = GammaPolynomial.one(lam)

    def op(bands, exc_up, exc_down, net):
        return WordOperator(params, n_min, n_max, bands, exc_up, exc_down, net)

    a_dag = op({1: {n: one for n in states if n + 1 <= n_max}}, 1, 0, 1)
    a_dag_inv = op({-1: {n: one for n in states if n - 1 >= n_min}}, 0, -1, -1)
    a = op({-1: {n: _structure_poly(lam, n) for n in states if n - 1 >= n_min}}, 0, -1, -1)
    k = op(
        {0: {n: GammaPolynomial.constant(CyclotomicScalar.zeta_power(lam, 2 * n)) for n in states}},
        0, 0, 0,
    )
    n_diag = op({0: {n: GammaPolynomial.rational(lam, n) for n in states}}, 0, 0, 0)
    ident = op({0: {n: one for n in states}}, 0, 0, 0)
    deform_col = {}
    for n in states:
        poly = GammaPolynomial.zero(lam)
        for r in range(1, lam):
            poly = poly + GammaPolynomial.gamma(lam, r).scale_zeta(2 * n * r)
        deform_col[n] = poly
    deformation = op({0: deform_col}, 0, 0, 0)

    return BilateralRep(
        params=params, n_min=n_min, n_max=n_max,
        a=a, a_dag=a_dag, a_dag_inv=a_dag_inv, K=k, N=n_diag,
        identity=ident, deformation=deformation,
    )


def monomial(rep: BilateralRep, p: int, q: int, s: int) -> WordOperator:
    """(a+)^p a^q K^s with any integer p, q >= 0, any integer s.

    net_shift = p - q; raises WindowError when the word has no interior
    column on this window.
    """
    if q < 0:
        raise ValueError("annihilator power must be nonnegative")
    word = rep.K_power(s) if s else rep.identity
    for _ in range(q):
        word = rep.a @ word
    word = rep.shift_power(p) @ word if p else word
    if not word.valid_columns():
        raise WindowError(f"window too small for monomial p={p}, q={q}, s={s}")
    return word
