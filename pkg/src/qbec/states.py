"""Bipartite density matrices and entanglement witnesses."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import InvalidDimension, StateValidationError, UnsupportedDimensions
from .linalg import (
    SUPPORT_CUTOFF,
    ComplexMatrix,
    as_matrix,
    dagger,
    eig_hermitian,
    hermiticity_defect,
    max_abs,
    support_basis,
    tensor,
    trace_norm,
)

TOL = 1e-10
INCLUSION_TOL = 1e-9


def _side(side: str) -> str:
    s = str(side).upper()
    if s not in ("A", "B"):
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return s


@dataclass(frozen=True)
class BipartiteState:
    """A matrix on C^dim_a (x) C^dim_b, row index ``i * dim_b + k``.

    Construction only checks the shape, so un-normalised intermediates (for
    example the Choi matrix of a non-trace-preserving map) can be carried
    around; :meth:`validate` enforces the density-matrix invariants.
    """

    rho: ComplexMatrix = field(repr=False)
    dim_a: int
    dim_b: int

    def __post_init__(self):
        rho = as_matrix(self.rho)
        if self.dim_a < 1 or self.dim_b < 1:
            raise InvalidDimension(f"dimensions must be positive, got {self.dim_a}x{self.dim_b}")
        d = self.dim_a * self.dim_b
        if rho.shape != (d, d):
            raise InvalidDimension(
                f"matrix shape {rho.shape} does not match dims {self.dim_a}x{self.dim_b}"
            )
        rho = rho.copy()
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def dims(self):
        return self.dim_a, self.dim_b

    def tensor4(self) -> np.ndarray:
        """View as ``rho[i, k, j, l] = <i k| rho |j l>``."""
        return self.rho.reshape(self.dim_a, self.dim_b, self.dim_a, self.dim_b)

    @property
    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    def validate(self, tol: float = TOL) -> "BipartiteState":
        """Raise :class:`StateValidationError` unless this is a density matrix."""
        scale = max(max_abs(self.rho), 1.0)
        defect = hermiticity_defect(self.rho)
        if defect > tol * scale:
            raise StateValidationError("hermitian", f"||rho - rho^dagger||_max = {defect:.3e}")
        tr = np.trace(self.rho)
        if abs(tr - 1.0) > tol:
            raise StateValidationError("trace", f"trace = {tr.real:.17g} deviates from 1")
        lo = float(eig_hermitian(self.rho)[0][0])
        if lo < -tol:
            raise StateValidationError("psd", f"minimum eigenvalue {lo:.3e} < -{tol:g}")
        return self

    def is_valid(self, tol: float = TOL) -> bool:
        try:
            self.validate(tol)
        except StateValidationError:
            return False
        return True


def pure_state(psi, dim_a: int, dim_b: int) -> BipartiteState:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return BipartiteState(np.outer(psi, psi.conj()), dim_a, dim_b)


def product_state(rho_a, rho_b) -> BipartiteState:
    rho_a, rho_b = as_matrix(rho_a), as_matrix(rho_b)
    return BipartiteState(tensor(rho_a, rho_b), rho_a.shape[0], rho_b.shape[0])


def max_entangled(n: int) -> BipartiteState:
    """Projector onto ``(1/sqrt n) sum_i |i>|i>``."""
    if n < 2:
        raise InvalidDimension(f"maximally entangled state needs n >= 2, got {n}")
    psi = np.eye(n, dtype=complex).ravel() / np.sqrt(n)
    return BipartiteState(np.outer(psi, psi.conj()), n, n)


def reduce(s: BipartiteState, side: str = "A") -> ComplexMatrix:
    """Partial trace keeping ``side``."""
    r = s.tensor4()
    if _side(side) == "A":
        return np.einsum("ikjk->ij", r)
    return np.einsum("ikil->kl", r)


def partial_transpose(s: BipartiteState, side: str = "B") -> ComplexMatrix:
    r = s.tensor4()
    if _side(side) == "A":
        r = r.transpose(2, 1, 0, 3)
    else:
        r = r.transpose(0, 3, 2, 1)
    return r.reshape(s.rho.shape).copy()


def swap(s: BipartiteState) -> BipartiteState:
    """Exchange the two subsystems."""
    r = s.tensor4().transpose(1, 0, 3, 2)
    d = s.dim_a * s.dim_b
    return BipartiteState(r.reshape(d, d), s.dim_b, s.dim_a)


def pt_min_eigenvalue(s: BipartiteState) -> float:
    return float(eig_hermitian(partial_transpose(s))[0][0])


def negativity(s: BipartiteState) -> float:
    """``(||rho^{T_B}||_1 - 1) / 2``, clipped at zero."""
    return max(0.0, 0.5 * (trace_norm(partial_transpose(s)) - 1.0))


def realigned(s: BipartiteState) -> ComplexMatrix:
    """Matrix ``R[(i, j), (k, l)] = rho_{ik, jl}``."""
    m, n = s.dims
    return s.tensor4().transpose(0, 2, 1, 3).reshape(m * m, n * n)


def realignment_value(s: BipartiteState) -> float:
    """Trace norm of the realigned matrix; above 1 certifies entanglement."""
    if s.dim_a != s.dim_b:
        raise UnsupportedDimensions(
            f"realignment is implemented for equal local dimensions only, got {s.dim_a}x{s.dim_b}"
        )
    return trace_norm(realigned(s))


def support_projector(m, cutoff: float = SUPPORT_CUTOFF) -> ComplexMatrix:
    """Orthogonal projector onto the eigenvectors with ``lambda > cutoff * lambda_max``."""
    _, v = support_basis(m, cutoff)
    return v @ dagger(v)


def support_inclusion_holds(
    s: BipartiteState, cutoff: float = SUPPORT_CUTOFF, tol: float = INCLUSION_TOL
) -> bool:
    """Check ``supp rho`` is inside ``supp rho_A (x) supp rho_B``.

    Tested as ``(P_A (x) P_B) rho (P_A (x) P_B) == rho`` entrywise within ``tol``.
    """
    p = tensor(support_projector(reduce(s, "A"), cutoff), support_projector(reduce(s, "B"), cutoff))
    return max_abs(p @ s.rho @ p - s.rho) <= tol


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_state(m: int, n: int, rank: int, seed: int) -> BipartiteState:
    """``G G^dagger / tr(G G^dagger)`` with ``G`` an ``(m n) x rank`` complex Gaussian matrix."""
    if m < 1 or n < 1 or not 1 <= rank <= m * n:
        raise InvalidDimension(f"need 1 <= rank <= m*n, got m={m}, n={n}, rank={rank}")
    g = _ginibre(np.random.default_rng(seed), m * n, rank)
    rho = g @ dagger(g)
    return BipartiteState(rho / np.trace(rho).real, m, n)


def random_separable_state(m: int, n: int, terms: int, seed: int) -> BipartiteState:
    """Convex mixture of ``terms`` random pure product states with Dirichlet weights."""
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    rho = np.zeros((m * n, m * n), dtype=complex)
    for w in weights:
        a = _ginibre(rng, m, 1).ravel()
        b = _ginibre(rng, n, 1).ravel()
        psi = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
        rho += w * np.outer(psi, psi.conj())
    return BipartiteState(rho, m, n)


class Verdict(str, Enum):
    NPT = "NPT"
    PPT_REALIGNMENT_POSITIVE = "PPT_REALIGNMENT_POSITIVE"
    PPT_INCONCLUSIVE = "PPT_INCONCLUSIVE"


@dataclass(frozen=True)
class AnalysisReport:
    trace: float
    min_eigenvalue: float
    reduction_a: ComplexMatrix = field(repr=False)
    reduction_b: ComplexMatrix = field(repr=False)
    pt_min_eigenvalue: float
    negativity: float
    # None when the local dimensions differ
    realignment_value: Optional[float]
    verdict: Verdict


def analyze(s: BipartiteState, tol: float = TOL) -> AnalysisReport:
    """Run every witness on ``s``.

    Separability is never certified: the verdict is NPT, PPT with a
    realignment value above ``1 + tol``, or PPT and inconclusive.
    """
    pt_min = pt_min_eigenvalue(s)
    realign = realignment_value(s) if s.dim_a == s.dim_b else None
    if pt_min < -tol:
        verdict = Verdict.NPT
    elif realign is not None and realign > 1.0 + tol:
        verdict = Verdict.PPT_REALIGNMENT_POSITIVE
    else:
        verdict = Verdict.PPT_INCONCLUSIVE
    return AnalysisReport(
        trace=s.trace,
        min_eigenvalue=float(eig_hermitian(s.rho)[0][0]),
        reduction_a=reduce(s, "A"),
        reduction_b=reduce(s, "B"),
        pt_min_eigenvalue=pt_min,
        negativity=negativity(s),
        realignment_value=realign,
        verdict=verdict,
    )
