"""Exact scalar arithmetic for the C_lambda-extended oscillator engine.

Two layers:

* ``CyclotomicScalar`` -- an element of the group ring Q[Z_{2*lam}], i.e. a
  formal rational combination of powers of the primitive 2*lam-th root of
  unity ``w = exp(i*pi/lam)``.  Equality here is *group-ring* equality: it is
  sufficient (but not necessary) for equality of the complex numbers the
  scalars evaluate to.  Vanishing root-of-unity sums (e.g. 1 + w^lam) are
  nonzero ring elements; deciding those requires the numeric fallback.

* ``GammaPolynomial`` -- a polynomial in the formal deformation symbols
  g1..g(lam-1) with ``CyclotomicScalar`` coefficients.  The conjugation
  constraint on numeric deformation parameters is deliberately *not*
  imposed at this level: identities proved here hold identically in the
  symbols.

Both are immutable; all operations return new objects.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

__all__ = ["CyclotomicScalar", "GammaPolynomial", "zeta_numeric"]

RationalLike = int | Fraction


def zeta_numeric(lam: int, k: int = 1) -> complex:
    """Numeric value of w^k where w = exp(i*pi/lam)."""
    return complex(np.exp(1j * np.pi * (k % (2 * lam)) / lam))


class CyclotomicScalar:
    """Element of Q[Z_{2*lam}]: sum_k c_k w^k with rational c_k, w = e^{i pi/lam}.

    Exponents live in Z_{2*lam}; multiplication is cyclic convolution.
    """

    __slots__ = ("lam", "coeffs")

    def __init__(self, lam: int, coeffs: Iterable[RationalLike]):
        if lam < 2:
            raise ValueError("cyclic order parameter must be >= 2")
        self.lam = lam
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != 2 * lam:
            raise ValueError(f"expected {2 * lam} coefficients, got {len(cs)}")
        self.coeffs = cs

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, lam: int) -> "CyclotomicScalar":
        return cls(lam, (0,) * (2 * lam))

    @classmethod
    def one(cls, lam: int) -> "CyclotomicScalar":
        return cls.rational(lam, 1)

    @classmethod
    def rational(cls, lam: int, value: RationalLike) -> "CyclotomicScalar":
        c = [Fraction(0)] * (2 * lam)
        c[0] = Fraction(value)
        return cls(lam, c)

    @classmethod
    def zeta_power(cls, lam: int, k: int, coeff: RationalLike = 1) -> "CyclotomicScalar":
        """coeff * w^k, exponent reduced mod 2*lam."""
        c = [Fraction(0)] * (2 * lam)
        c[k % (2 * lam)] = Fraction(coeff)
        return cls(lam, c)

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "CyclotomicScalar") -> None:
        if self.lam != other.lam:
            raise ValueError("mixing cyclotomic scalars of different orders")

    def __add__(self, other: "CyclotomicScalar") -> "CyclotomicScalar":
        self._check(other)
        return CyclotomicScalar(self.lam, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CyclotomicScalar") -> "CyclotomicScalar":
        self._check(other)
        return CyclotomicScalar(self.lam, (a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CyclotomicScalar":
        return CyclotomicScalar(self.lam, (-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicScalar(self.lam, (a * other for a in self.coeffs))
        if not isinstance(other, CyclotomicScalar):
            return NotImplemented
        self._check(other)
        n = 2 * self.lam
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b == 0:
                    continue
                out[(i + j) % n] += a * b
        return CyclotomicScalar(self.lam, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def shift(self, k: int) -> "CyclotomicScalar":
        """Multiply by w^k (cheap exponent rotation)."""
        n = 2 * self.lam
        k %= n
        if k == 0:
            return self
        return CyclotomicScalar(self.lam, self.coeffs[n - k:] + self.coeffs[:n - k])

    # -- predicates / evaluation -------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclotomicScalar):
            return NotImplemented
        return self.lam == other.lam and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.lam, self.coeffs))

    def eval(self) -> complex:
        """Ring homomorphism to C at w = exp(i*pi/lam)."""
        total = 0j
        for k, c in enumerate(self.coeffs):
            if c != 0:
                total += float(c) * np.exp(1j * np.pi * k / self.lam)
        return complex(total)

    def __repr__(self) -> str:
        return f"CyclotomicScalar(lam={self.lam}, {self.render()})"

    def render(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append("w" if k == 1 else f"w^{k}")
            else:
                parts.append(f"{c} w" if k == 1 else f"{c} w^{k}")
        if not parts:
            return "0"
        return " + ".join(parts)


class GammaPolynomial:
    """Polynomial in the formal symbols g1..g(lam-1) over CyclotomicScalar.

    Terms map a multi-degree tuple (exponent of each g_r) to its coefficient.
    The zero polynomial has an empty term map (canonical form).
    """

    __slots__ = ("lam", "terms")

    def __init__(self, lam: int, terms: Mapping[tuple[int, ...], CyclotomicScalar] | None = None):
        self.lam = lam
        clean: dict[tuple[int, ...], CyclotomicScalar] = {}
        if terms:
            for deg, coeff in terms.items():
                if len(deg) != lam - 1:
                    raise ValueError(f"multi-degree must have length {lam - 1}")
                if any(e < 0 for e in deg):
                    raise ValueError("negative exponent in gamma monomial")
                if not coeff.is_zero():
                    clean[tuple(deg)] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, lam: int) -> "GammaPolynomial":
        return cls(lam)

    @classmethod
    def one(cls, lam: int) -> "GammaPolynomial":
        return cls.constant(CyclotomicScalar.one(lam))

    @classmethod
    def constant(cls, scalar: CyclotomicScalar) -> "GammaPolynomial":
        lam = scalar.lam
        return cls(lam, {(0,) * (lam - 1): scalar})

    @classmethod
    def rational(cls, lam: int, value: RationalLike) -> "GammaPolynomial":
        return cls.constant(CyclotomicScalar.rational(lam, value))

    @classmethod
    def gamma(cls, lam: int, r: int) -> "GammaPolynomial":
        """The formal symbol g_r, 1 <= r <= lam-1."""
        if not 1 <= r <= lam - 1:
            raise ValueError(f"gamma index {r} outside 1..{lam - 1}")
        deg = [0] * (lam - 1)
        deg[r - 1] = 1
        return cls(lam, {tuple(deg): CyclotomicScalar.one(lam)})

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "GammaPolynomial") -> None:
        if self.lam != other.lam:
            raise ValueError("mixing gamma polynomials of different orders")

    def __add__(self, other: "GammaPolynomial") -> "GammaPolynomial":
        self._check(other)
        out = dict(self.terms)
        for deg, coeff in other.terms.items():
            if deg in out:
                out[deg] = out[deg] + coeff
            else:
                out[deg] = coeff
        return GammaPolynomial(self.lam, out)

    def __sub__(self, other: "GammaPolynomial") -> "GammaPolynomial":
        return self + (-other)

    def __neg__(self) -> "GammaPolynomial":
        return GammaPolynomial(self.lam, {d: -c for d, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return GammaPolynomial.zero(self.lam)
            return GammaPolynomial(self.lam, {d: c * other for d, c in self.terms.items()})
        if isinstance(other, CyclotomicScalar):
            return GammaPolynomial(self.lam, {d: c * other for d, c in self.terms.items()})
        if not isinstance(other, GammaPolynomial):
            return NotImplemented
        self._check(other)
        out: dict[tuple[int, ...], CyclotomicScalar] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                deg = tuple(a + b for a, b in zip(d1, d2))
                prod = c1 * c2
                if deg in out:
                    out[deg] = out[deg] + prod
                else:
                    out[deg] = prod
        return GammaPolynomial(self.lam, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicScalar)):
            return self * other
        return NotImplemented

    def scale_zeta(self, k: int) -> "GammaPolynomial":
        """Multiply by w^k."""
        return GammaPolynomial(self.lam, {d: c.shift(k) for d, c in self.terms.items()})

    # -- predicates / evaluation -------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, GammaPolynomial):
            return NotImplemented
        return self.lam == other.lam and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.lam, frozenset(self.terms.items())))

    def eval(self, gamma: Iterable[complex]) -> complex:
        """Evaluate at numeric gamma values (w fixed at exp(i*pi/lam))."""
        gs = tuple(complex(g) for g in gamma)
        if len(gs) != self.lam - 1:
            raise ValueError(f"expected {self.lam - 1} gamma values")
        total = 0j
        for deg, coeff in self.terms.items():
            mono = coeff.eval()
            for g, e in zip(gs, deg):
                mono *= g ** e
            total += mono
        return total

    def max_abs_eval_coeff(self) -> float:
        """Largest |numeric value| over the coefficients (gamma left formal)."""
        if not self.terms:
            return 0.0
        return max(abs(c.eval()) for c in self.terms.values())

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for deg in sorted(self.terms):
            coeff = self.terms[deg]
            mono = " ".join(
                f"g{r + 1}" if e == 1 else f"g{r + 1}^{e}"
                for r, e in enumerate(deg)
                if e > 0
            )
            cs = coeff.render()
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                cs = f"({cs})" if ("+" in cs or " " in cs) else cs
                parts.append(f"{cs} {mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"GammaPolynomial(lam={self.lam}, {self.render()})"
