"""Channel-state correspondence and channels built from bound entangled states."""

from .beconstruct import (
    be_channel_A,
    be_channel_B,
    compress_to_support,
    construct,
    filter_to_maximally_mixed,
)
from .channels import (
    ChoiState,
    KrausChannel,
    apply,
    channel_from_choi,
    choi,
    compose,
    identity_channel,
    random_channel,
    transpose_map,
    verify,
)
from .examples import channel_a_closed_form, channel_alpha, rho_a, sigma_alpha
from .linalg import eig_hermitian, pinv_sqrt, tensor, trace_norm
from .states import (
    AnalysisReport,
    BipartiteState,
    Verdict,
    analyze,
    max_entangled,
    negativity,
    partial_transpose,
    random_state,
    realignment_value,
    reduce,
    support_inclusion_holds,
    support_projector,
)

__version__ = "0.1.0"
