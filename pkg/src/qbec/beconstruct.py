"""Channels whose Choi state is a given (bound entangled) bipartite state.

The state ``rho`` is first filtered locally to ``sigma`` with a maximally
mixed reduction on the chosen side. The CP map ``theta`` with Choi matrix
``rho`` is then pre-composed with the map transpose of the filter. The result
is trace preserving and its Choi state is exactly ``sigma``. Neither
``theta`` nor the filter is trace preserving on its own.

When the chosen reduction is rank deficient everything lives on its
support: ``FilterResult.basis`` holds an orthonormal basis ``B`` of the
support, the channel input is ``r``-dimensional, and an operator ``X`` on the
full space is carried to the channel's input by :func:`compress_to_support`
(``X -> B^T X conj(B)``).
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .channels import (
    KrausChannel,
    channel_from_choi,
    compose,
    scale,
    transpose_map,
)
from .errors import NonMaximallyMixedReduction, RankZero, RankDeficientReduction
from .linalg import SUPPORT_CUTOFF, ComplexMatrix, dagger, eig_hermitian, support_basis, tensor
from .states import BipartiteState, _side, reduce


@dataclass(frozen=True)
class FilterResult:
    sigma: BipartiteState
    r: int
    reduction: ComplexMatrix
    # r x d matrix F with sigma = (F (x) I) rho (F (x) I)^dagger for side A
    filter: ComplexMatrix
    # d x r isometry onto the support of the reduction (identity when full rank)
    basis: ComplexMatrix


@dataclass(frozen=True)
class Construction:
    side: str
    filtered: FilterResult
    theta: KrausChannel
    filter_map: KrausChannel
    channel: KrausChannel


def filter_to_maximally_mixed(
    rho: BipartiteState, side: str = "A", cutoff: float = SUPPORT_CUTOFF
) -> FilterResult:
    """Local filtering ``rho -> (r rho_A)^{-1/2} (x) I . rho . (r rho_A)^{-1/2} (x) I``.

    ``rho_A`` is inverted on its support only and ``r`` is its rank. In the
    eigenbasis ``rho_A = sum_i p_i |e_i><e_i|`` the filtered entries are
    ``sigma_{ik,jl} = rho_{ik,jl} / (r sqrt(p_i p_j))``, so the reduction on the
    filtered side becomes ``I / r``.
    """
    side = _side(side)
    red = reduce(rho, side)
    w, vecs = support_basis(red, cutoff)
    r = len(w)
    if r == 0:
        raise RankZero(f"reduction on side {side} has no support above cutoff {cutoff:g}")
    d = red.shape[0]
    basis = np.eye(d, dtype=complex) if r == d else vecs
    inv_sqrt = (vecs / np.sqrt(w)) @ dagger(vecs)
    f = dagger(basis) @ inv_sqrt / np.sqrt(r)
    if side == "A":
        k = tensor(f, np.eye(rho.dim_b))
        dims = (r, rho.dim_b)
    else:
        k = tensor(np.eye(rho.dim_a), f)
        dims = (rho.dim_a, r)
    sigma = k @ rho.rho @ dagger(k)
    sigma = 0.5 * (sigma + dagger(sigma))
    return FilterResult(BipartiteState(sigma, *dims), r, red, f, basis)


def compress_to_support(x, basis: ComplexMatrix) -> ComplexMatrix:
    """Carry an operator on the full input space to the support coordinates of the channel."""
    return basis.T @ np.asarray(x, dtype=complex) @ basis.conj()


def _theta(choi_matrix: BipartiteState) -> KrausChannel:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonMaximallyMixedReduction)
        return channel_from_choi(choi_matrix)


def construct(rho: BipartiteState, side: str = "A", cutoff: float = SUPPORT_CUTOFF) -> Construction:
    """Build the channel for ``side`` together with its intermediate maps.

    Side A gives ``theta o filter^T`` where ``theta`` has Choi matrix ``rho``
    (restricted to the support of ``rho_A``). Side B uses the map transpose of
    ``theta`` instead, so the channel runs from B to A. It is rescaled by
    ``r_B / m`` so that its Choi matrix is the swapped ``rho``. The rescaling
    is 1 whenever ``r_B == m``.
    """
    side = _side(side)
    filtered = filter_to_maximally_mixed(rho, side, cutoff)
    r, basis = filtered.r, filtered.basis
    if r < filtered.reduction.shape[0]:
        warnings.warn(
            f"reduction on side {side} has rank {r} < {filtered.reduction.shape[0]}; "
            "the channel acts on its support only",
            RankDeficientReduction,
            stacklevel=2,
        )
    red_c = dagger(basis) @ filtered.reduction @ basis
    w, vecs = eig_hermitian(red_c)
    g = (vecs / np.sqrt(w)) @ dagger(vecs) / np.sqrt(r)
    filter_map = KrausChannel((g,), r, r)

    if side == "A":
        k = tensor(dagger(basis), np.eye(rho.dim_b))
        compressed = BipartiteState(k @ rho.rho @ dagger(k), r, rho.dim_b)
        theta = _theta(compressed)
        channel = compose(theta, transpose_map(filter_map))
    else:
        k = tensor(np.eye(rho.dim_a), dagger(basis))
        compressed = BipartiteState(k @ rho.rho @ dagger(k), rho.dim_a, r)
        theta = _theta(compressed)
        theta_t = scale(transpose_map(theta), r / rho.dim_a)
        channel = compose(theta_t, transpose_map(filter_map))
    return Construction(side, filtered, theta, filter_map, channel)


def be_channel_A(rho: BipartiteState, cutoff: float = SUPPORT_CUTOFF) -> KrausChannel:
    """Trace-preserving channel A -> B whose Choi state is the A-filtered ``rho``."""
    return construct(rho, "A", cutoff).channel


def be_channel_B(rho: BipartiteState, cutoff: float = SUPPORT_CUTOFF) -> KrausChannel:
    """Trace-preserving channel B -> A whose Choi state is the swapped B-filtered ``rho``."""
    return construct(rho, "B", cutoff).channel
