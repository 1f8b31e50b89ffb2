"""Algebra parameters and the structure function.

The C_lambda-extended oscillator algebra is parameterized by an integer
lambda >= 2 and complex deformation parameters gamma_1..gamma_{lambda-1}
satisfying conj(gamma_r) = gamma_{lambda-r}.  The equivalent real
parameterization alpha_0..alpha_{lambda-1} is a discrete Fourier transform
of gamma; alpha determines the structure function F(n), the eigenvalue of
the number-like product on Fock state n.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AlgebraParams",
    "ParameterError",
    "alpha_from_gamma",
    "gamma_from_alpha",
    "structure_function",
    "j_coefficients",
    "j_coefficients_gamma_literal",
    "fock_is_unitary",
    "random_admissible_gamma",
]

CONSTRAINT_TOL = 1e-12


class ParameterError(ValueError):
    """Invalid algebra parameter input."""


@dataclass(frozen=True)
class AlgebraParams:
    """lambda and the deformation vector gamma_1..gamma_{lambda-1}.

    Numeric gamma must satisfy conj(gamma_r) = gamma_{lambda-r}; violation
    beyond 1e-12 is rejected at construction.  Instances are immutable.
    """

    lam: int
    gamma: tuple[complex, ...]
    _alpha: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.lam < 2:
            raise ParameterError(f"lambda must be >= 2, got {self.lam}")
        gamma = tuple(complex(g) for g in self.gamma)
        if len(gamma) != self.lam - 1:
            raise ParameterError(
                f"expected {self.lam - 1} gamma values for lambda={self.lam}, got {len(gamma)}"
            )
        for r in range(1, self.lam):
            diff = abs(gamma[r - 1].conjugate() - gamma[self.lam - r - 1])
            if diff > CONSTRAINT_TOL:
                raise ParameterError(
                    f"conjugation constraint violated at r={r}: "
                    f"|conj(gamma_{r}) - gamma_{self.lam - r}| = {diff:.3e}"
                )
        object.__setattr__(self, "gamma", gamma)
        raw = alpha_from_gamma_unchecked(self.lam, gamma)
        worst = max(abs(a.imag) for a in raw)
        if worst > CONSTRAINT_TOL:
            raise ParameterError(f"derived alpha not real: max |Im| = {worst:.3e}")
        alpha = tuple(a.real for a in raw)
        if abs(sum(alpha)) > CONSTRAINT_TOL:
            raise ParameterError(f"derived alpha does not sum to zero: {sum(alpha):.3e}")
        object.__setattr__(self, "_alpha", alpha)

    @property
    def alpha(self) -> tuple[float, ...]:
        return self._alpha

    @property
    def n_gamma(self) -> int:
        return self.lam - 1

    def is_zero_deformation(self) -> bool:
        return all(g == 0 for g in self.gamma)


def _phase(lam: int, k: int) -> complex:
    # exp(2*pi*i*k/lam) with the exponent reduced to keep float args small
    return complex(np.exp(2j * np.pi * (k % lam) / lam))


def alpha_from_gamma_unchecked(lam: int, gamma: tuple[complex, ...]) -> tuple[complex, ...]:
    """Raw transform alpha_mu = sum_r exp(2*pi*i*mu*r/lam) gamma_r; no validation."""
    alpha = []
    for mu in range(lam):
        total = 0j
        for r in range(1, lam):
            total += _phase(lam, mu * r) * gamma[r - 1]
        alpha.append(total)
    return tuple(alpha)


def alpha_from_gamma(params: AlgebraParams) -> tuple[float, ...]:
    """Real shift parameters alpha_0..alpha_{lambda-1} from gamma.

    Raises ParameterError if the result has imaginary parts beyond 1e-12,
    which signals a violated conjugation constraint.
    """
    raw = alpha_from_gamma_unchecked(params.lam, params.gamma)
    worst = max(abs(a.imag) for a in raw)
    if worst > CONSTRAINT_TOL:
        raise ParameterError(f"alpha not real: max |Im| = {worst:.3e}")
    return tuple(a.real for a in raw)


def gamma_from_alpha(lam: int, alpha) -> tuple[complex, ...]:
    """Inverse transform: gamma_r = (1/lam) sum_mu exp(-2*pi*i*mu*r/lam) alpha_mu.

    Requires all alpha real with sum zero (the image of the forward map).
    """
    alpha = tuple(complex(a) for a in alpha)
    if len(alpha) != lam:
        raise ParameterError(f"expected {lam} alpha values, got {len(alpha)}")
    if any(abs(a.imag) > CONSTRAINT_TOL for a in alpha):
        raise ParameterError("alpha must be real")
    total = sum(a.real for a in alpha)
    if abs(total) > CONSTRAINT_TOL:
        raise ParameterError(f"alpha must sum to zero, got {total:.3e}")
    gamma = []
    for r in range(1, lam):
        g = sum(_phase(lam, -mu * r) * alpha[mu].real for mu in range(lam)) / lam
        gamma.append(g)
    return tuple(gamma)


def structure_function(params: AlgebraParams, n: int) -> float:
    """F(n): F(0) = 0 and F(n+1) - F(n) = 1 + alpha_{n mod lam} for all n in Z.

    Negative n follows the same recursion run backward; closed form
    F(n) = n + S_{n mod lam} with S_mu the partial alpha sums.  In
    particular F(k*lam) = k*lam for every integer k.
    """
    alpha = params.alpha
    mu = n % params.lam
    return n + sum(alpha[:mu])


def j_coefficients(params: AlgebraParams) -> tuple[float, ...]:
    """Spectral shifts j_mu: eigenvalue of the oscillator Hamiltonian on
    state n = k*lam + mu equals n + 1/2 + j_mu.

    j_mu = sum_{nu<mu} alpha_nu + alpha_mu/2 (alpha form; cross-checked
    against matrix diagonalization in the Fock backend).
    """
    alpha = params.alpha
    return tuple(sum(alpha[:mu]) + alpha[mu] / 2 for mu in range(params.lam))


def j_coefficients_gamma_literal(params: AlgebraParams) -> tuple[complex, ...]:
    """Alternative j_mu built from gamma in place of alpha, with gamma_0 := 0.

    Reported for comparison only; the alpha form is the one validated
    against diagonalization.  Generally complex and not a valid spectrum
    shift unless it happens to coincide with the alpha form.
    """
    g = (0j,) + params.gamma  # gamma_0 := 0
    out = [0.5 * params.alpha[0] + 0j]
    for mu in range(1, params.lam):
        out.append(sum(g[:mu]) + 0.5 * g[mu])
    return tuple(out)


def fock_is_unitary(params: AlgebraParams, n_levels: int) -> bool:
    """True iff F(n) > 0 for 1 <= n <= n_levels.

    Positivity lets the Fock representation carry the square-root
    normalization with the annihilator the true adjoint of the creator.
    """
    return all(structure_function(params, n) > 0 for n in range(1, n_levels + 1))


def random_admissible_gamma(lam: int, rng: random.Random, scale: float = 0.3) -> tuple[complex, ...]:
    """Draw gamma satisfying the conjugation constraint exactly.

    Free entries are r < lam - r; gamma_{lam-r} is set to the conjugate.
    For even lam the middle entry gamma_{lam/2} is real.
    """
    gamma = [0j] * (lam - 1)
    for r in range(1, lam):
        s = lam - r
        if r < s:
            gamma[r - 1] = complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))
            gamma[s - 1] = gamma[r - 1].conjugate()
        elif r == s:
            gamma[r - 1] = complex(rng.uniform(-scale, scale), 0.0)
    return tuple(gamma)
