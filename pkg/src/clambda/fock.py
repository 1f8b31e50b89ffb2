"""Truncated unilateral Fock-space matrix representation.

Dense D x D complex matrices for (a, a+, N, K, P_mu), the oscillator
Hamiltonian, the closed-form spectrum, and the defining-relation checks.
Identities are asserted only on "interior" basis states: columns whose
image under every operator word in the identity stays inside the window,
so truncation artifacts never count as failures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import AlgebraParams, fock_is_unitary, j_coefficients, structure_function

__all__ = [
    "TruncatedFockRep",
    "build_fock_rep",
    "hamiltonian",
    "spectrum_closed_form",
    "verify_gdoa",
    "GDOA_IDENTITIES",
]


@dataclass(frozen=True)
class TruncatedFockRep:
    """Finite matrix realization on Fock states 0..dim-1.

    With the square-root normalization (unitary_flag True) the annihilator
    is the conjugate transpose of the creator; with module normalization
    a+|n> = |n+1> and a|n> = F(n)|n-1> regardless of the sign of F.
    """

    params: AlgebraParams
    dim: int
    a: np.ndarray
    a_dag: np.ndarray
    N: np.ndarray
    K: np.ndarray
    P: tuple[np.ndarray, ...]
    unitary_flag: bool
    normalization: str  # "sqrt" | "module"


def build_fock_rep(params: AlgebraParams, dim: int, normalization: str = "auto") -> TruncatedFockRep:
    """Build the truncated representation.

    normalization: "auto" picks square-root when F(1..dim-1) > 0, module
    otherwise; "sqrt"/"module" force a choice ("sqrt" requires positivity).
    """
    lam = params.lam
    if dim < 2 * lam:
        raise ValueError(f"dim must be >= 2*lambda = {2 * lam}, got {dim}")
    fvals = np.array([structure_function(params, n) for n in range(dim)])
    positive = fock_is_unitary(params, dim - 1)
    if normalization == "auto":
        normalization = "sqrt" if positive else "module"
    elif normalization == "sqrt" and not positive:
        raise ValueError("square-root normalization needs F(n) > 0 on 1..dim-1")
    elif normalization not in ("sqrt", "module"):
        raise ValueError(f"unknown normalization {normalization!r}")

    a_dag = np.zeros((dim, dim), dtype=complex)
    a = np.zeros((dim, dim), dtype=complex)
    if normalization == "sqrt":
        amp = np.sqrt(fvals[1:])
        a_dag[np.arange(1, dim), np.arange(dim - 1)] = amp
        a[np.arange(dim - 1), np.arange(1, dim)] = amp
    else:
        a_dag[np.arange(1, dim), np.arange(dim - 1)] = 1.0
        a[np.arange(dim - 1), np.arange(1, dim)] = fvals[1:]

    n = np.arange(dim)
    N = np.diag(n.astype(complex))
    K = np.diag(np.exp(2j * np.pi * (n % lam) / lam))
    P = tuple(np.diag((n % lam == mu).astype(complex)) for mu in range(lam))
    return TruncatedFockRep(
        params=params,
        dim=dim,
        a=a,
        a_dag=a_dag,
        N=N,
        K=K,
        P=P,
        unitary_flag=(normalization == "sqrt"),
        normalization=normalization,
    )


def hamiltonian(rep: TruncatedFockRep) -> np.ndarray:
    """H0 = (a+ a + a a+)/2; diagonal in the Fock basis.

    The top diagonal entry is corrupted by truncation (a a+ is cut there);
    callers must exclude state dim-1 from assertions.
    """
    return 0.5 * (rep.a_dag @ rep.a + rep.a @ rep.a_dag)


def spectrum_closed_form(params: AlgebraParams, n_max: int) -> list[tuple[int, float]]:
    """Closed-form energies E_n = n + 1/2 + j_{n mod lam} for n = 0..n_max."""
    j = j_coefficients(params)
    return [(n, n + 0.5 + j[n % params.lam]) for n in range(n_max + 1)]


def diagonalized_spectrum(rep: TruncatedFockRep) -> np.ndarray:
    """Sorted eigenvalues of H0 restricted to states 0..dim-2.

    Independent oracle for the closed form: the top truncation edge is cut
    before diagonalizing.
    """
    h = hamiltonian(rep)[: rep.dim - 1, : rep.dim - 1]
    if rep.unitary_flag:
        return np.linalg.eigvalsh(h)
    vals = np.linalg.eigvals(h)
    return np.sort(vals.real)


def _residual(lhs: np.ndarray, rhs: np.ndarray, margin: int, dim: int) -> float:
    cols = dim - margin
    return float(np.max(np.abs(lhs[:, :cols] - rhs[:, :cols]))) if cols > 0 else float("nan")


# identity id -> margin (max upward excursion of any word in the identity)
GDOA_IDENTITIES = {
    "comm-N-adag": 1,
    "comm-N-K": 0,
    "K-cyclic": 0,
    "comm-a-adag-gammaK": 1,
    "comm-a-adag-alphaP": 1,
    "gammaK-equals-alphaP": 0,
    "twist-adag-K": 1,
    "shift-adag-P": 1,
    "P-orthogonal": 0,
    "P-complete": 0,
}


def deformation_gamma_matrix(rep: TruncatedFockRep) -> np.ndarray:
    """sum_r gamma_r K^r as a dense matrix."""
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    kpow = np.eye(rep.dim, dtype=complex)
    for r in range(1, rep.params.lam):
        kpow = kpow @ rep.K
        out += rep.params.gamma[r - 1] * kpow
    return out


def deformation_alpha_matrix(rep: TruncatedFockRep) -> np.ndarray:
    """sum_mu alpha_mu P_mu as a dense matrix."""
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for mu, p in enumerate(rep.P):
        out += rep.params.alpha[mu] * p
    return out


def verify_gdoa(rep: TruncatedFockRep, tol: float = 1e-12) -> dict[str, float]:
    """Max interior residual for each defining/projection identity.

    Returns a mapping identity id -> residual; the caller decides pass/fail
    against tol (kept in the signature for report plumbing).
    """
    lam = rep.params.lam
    dim = rep.dim
    ident = np.eye(dim, dtype=complex)
    res: dict[str, float] = {}

    comm = rep.N @ rep.a_dag - rep.a_dag @ rep.N
    res["comm-N-adag"] = _residual(comm, rep.a_dag, 1, dim)

    res["comm-N-K"] = _residual(rep.N @ rep.K - rep.K @ rep.N, np.zeros_like(ident), 0, dim)

    res["K-cyclic"] = _residual(np.linalg.matrix_power(rep.K, lam), ident, 0, dim)

    lhs = rep.a @ rep.a_dag - rep.a_dag @ rep.a
    dg = deformation_gamma_matrix(rep)
    da = deformation_alpha_matrix(rep)
    res["comm-a-adag-gammaK"] = _residual(lhs, ident + dg, 1, dim)
    res["comm-a-adag-alphaP"] = _residual(lhs, ident + da, 1, dim)
    res["gammaK-equals-alphaP"] = _residual(dg, da, 0, dim)

    phase = np.exp(-2j * np.pi / lam)
    res["twist-adag-K"] = _residual(rep.a_dag @ rep.K, phase * (rep.K @ rep.a_dag), 1, dim)

    shift = max(
        _residual(rep.a_dag @ rep.P[mu], rep.P[(mu + 1) % lam] @ rep.a_dag, 1, dim)
        for mu in range(lam)
    )
    res["shift-adag-P"] = shift

    ortho = max(
        _residual(rep.P[mu] @ rep.P[nu], rep.P[nu] if mu == nu else np.zeros_like(ident), 0, dim)
        for mu in range(lam)
        for nu in range(lam)
    )
    res["P-orthogonal"] = ortho

    res["P-complete"] = _residual(sum(rep.P), ident, 0, dim)
    return res
