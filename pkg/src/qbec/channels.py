"""Completely positive maps in Kraus form and the channel/state correspondence.

Choi convention: ``choi(L) = (I (x) L) P+`` with the normalised projector
``P+ = |phi+><phi+|``, ``|phi+> = m^{-1/2} sum_i |i>|i>``. Hence
``<i k| choi |j l> = <k| L(|i><j|) |l> / m`` and a trace-preserving map has a
trace-one Choi state whose A-reduction is ``I/m``.
"""

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidDimension, NonMaximallyMixedReduction, NotPSD
from .linalg import as_matrix, dagger, eig_hermitian, max_abs, pinv_sqrt
from .states import TOL, BipartiteState, reduce

KRAUS_CUTOFF = 1e-12


@dataclass(frozen=True)
class KrausChannel:
    """``X -> sum_i V_i X V_i^dagger`` with every ``V_i`` of shape ``dim_out x dim_in``.

    The map need not be trace preserving; see :attr:`trace_preserving`.
    """

    kraus: tuple
    dim_in: int
    dim_out: int

    def __post_init__(self):
        ops = []
        for idx, op in enumerate(self.kraus):
            op = as_matrix(op).copy()
            if op.shape != (self.dim_out, self.dim_in):
                raise DimensionMismatch(
                    f"Kraus operator {idx} has shape {op.shape}, "
                    f"expected {(self.dim_out, self.dim_in)}"
                )
            op.setflags(write=False)
            ops.append(op)
        object.__setattr__(self, "kraus", tuple(ops))

    @classmethod
    def from_operators(cls, ops: Sequence) -> "KrausChannel":
        ops = [as_matrix(op) for op in ops]
        if not ops:
            raise DimensionMismatch("at least one Kraus operator is required")
        n, m = ops[0].shape
        return cls(tuple(ops), m, n)

    def __len__(self):
        return len(self.kraus)

    def __call__(self, x):
        return apply(self, x)

    def kraus_sum(self) -> np.ndarray:
        """``sum_i V_i^dagger V_i``."""
        out = np.zeros((self.dim_in, self.dim_in), dtype=complex)
        for op in self.kraus:
            out += dagger(op) @ op
        return out

    @property
    def tp_defect(self) -> float:
        return max_abs(self.kraus_sum() - np.eye(self.dim_in))

    @property
    def trace_preserving(self) -> bool:
        return self.tp_defect <= TOL


@dataclass(frozen=True)
class ChoiState(BipartiteState):
    """The image ``(I (x) L) P+`` of a map ``L``; trace one iff ``L`` is trace preserving."""

    trace_preserving: bool = True


def identity_channel(m: int) -> KrausChannel:
    return KrausChannel((np.eye(m),), m, m)


def scale(ch: KrausChannel, factor: float) -> KrausChannel:
    """The map ``factor * L`` (``factor >= 0``)."""
    root = np.sqrt(factor)
    return KrausChannel(tuple(root * op for op in ch.kraus), ch.dim_in, ch.dim_out)


def apply(ch: KrausChannel, x) -> np.ndarray:
    x = as_matrix(x)
    if x.shape != (ch.dim_in, ch.dim_in):
        raise DimensionMismatch(f"input has shape {x.shape}, channel expects {ch.dim_in}x{ch.dim_in}")
    out = np.zeros((ch.dim_out, ch.dim_out), dtype=complex)
    for op in ch.kraus:
        out += op @ x @ dagger(op)
    return out


def choi(ch: KrausChannel) -> ChoiState:
    m, n = ch.dim_in, ch.dim_out
    rho = np.zeros((m * n, m * n), dtype=complex)
    for op in ch.kraus:
        # (I (x) V)|phi+> has amplitude V[k, i] / sqrt(m) on |i>|k>
        phi = op.T.ravel() / np.sqrt(m)
        rho += np.outer(phi, phi.conj())
    return ChoiState(rho, m, n, trace_preserving=ch.trace_preserving)


def channel_from_choi(
    c: BipartiteState, cutoff: float = KRAUS_CUTOFF, tol: float = TOL
) -> KrausChannel:
    """Kraus operators from the eigenbasis of a Choi matrix.

    Writing ``c = sum_i p_i |psi_i><psi_i|`` with
    ``psi_i = sum_{jk} c^i_{jk} |j>|k>``, each eigenvector with
    ``p_i > cutoff * p_max`` yields ``(V_i)_{kj} = sqrt(m p_i) c^i_{jk}``, so that
    ``choi(channel_from_choi(c)) == c``.

    Emits :class:`NonMaximallyMixedReduction` when the A-reduction of ``c``
    differs from ``I/m``; the returned map is then CP but not trace preserving.
    """
    m, n = c.dim_a, c.dim_b
    w, v = eig_hermitian(c.rho, tol)
    top = float(w[-1])
    if w[0] < -tol * max(top, 1.0):
        raise NotPSD(f"Choi matrix has eigenvalue {w[0]:.3e}")
    ops = []
    for p, psi in zip(w[::-1], v.T[::-1]):
        if p <= cutoff * top:
            break
        ops.append(np.sqrt(m * p) * psi.reshape(m, n).T)
    if not ops:
        ops.append(np.zeros((n, m)))
    red = reduce(c, "A")
    if max_abs(red - np.eye(m) / m) > tol:
        warnings.warn(
            "Choi state reduction is not maximally mixed; the extracted map is not trace preserving",
            NonMaximallyMixedReduction,
            stacklevel=2,
        )
    return KrausChannel(tuple(ops), m, n)


def transpose_map(ch: KrausChannel) -> KrausChannel:
    """Map transpose: every Kraus operator replaced by its plain (unconjugated) transpose."""
    return KrausChannel(tuple(op.T for op in ch.kraus), ch.dim_out, ch.dim_in)


def compose(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """``outer o inner`` with Kraus set ``{W_i V_j}``."""
    if outer.dim_in != inner.dim_out:
        raise DimensionMismatch(
            f"cannot compose: outer expects {outer.dim_in}, inner produces {inner.dim_out}"
        )
    ops = tuple(w @ v for w in outer.kraus for v in inner.kraus)
    return KrausChannel(ops, inner.dim_in, outer.dim_out)


@dataclass(frozen=True)
class Verification:
    cp: bool
    tp: bool
    tp_defect: float
    choi_min_eig: float


def verify(ch: KrausChannel, tol: float = TOL) -> Verification:
    w = eig_hermitian(choi(ch).rho)[0]
    defect = ch.tp_defect
    return Verification(
        cp=bool(w[0] >= -tol * max(float(w[-1]), 1.0)),
        tp=defect <= tol,
        tp_defect=defect,
        choi_min_eig=float(w[0]),
    )


def random_channel(m: int, n: int, n_kraus: int, seed: int) -> KrausChannel:
    """Seeded random trace-preserving channel.

    Gaussian operators ``G_i`` are normalised as ``G_i S^{-1/2}`` with
    ``S = sum_i G_i^dagger G_i``.
    """
    if n_kraus < 1 or n_kraus * n < m:
        raise InvalidDimension(f"{n_kraus} Kraus operators of shape {n}x{m} cannot be trace preserving")
    rng = np.random.default_rng(seed)
    raw = [rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m)) for _ in range(n_kraus)]
    s = sum(dagger(g) @ g for g in raw)
    fix = pinv_sqrt(s)
    return KrausChannel(tuple(g @ fix for g in raw), m, n)
