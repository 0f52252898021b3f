"""Numerics for non-linear operations on quantum states and why they fail."""

from .channels import (
    ChannelVerdict,
    KrausChannel,
    apply_channel,
    check_channel,
    choi_matrix,
    infer_from_data,
    squaring_circuit,
)
from .cloner import ClonerParams, cloner_fidelity, cloner_params, cloner_states
from .disent import (
    FamilyPoint,
    RegionCell,
    cloner_curve,
    disentangle,
    entanglement_spectrum,
    entropy_defect_pair,
    family_point,
    family_states,
    pe_cloner,
    pe_family,
    region_scan,
)
from .distinguish import (
    Ensemble,
    Povm,
    accessible_info_estimate,
    entropy_defect,
    helstrom_povm,
    mutual_information,
    outcome_distribution,
    prob_error,
)
from .ortho import (
    UnambiguousResult,
    idp_povm,
    iterate_squaring,
    orthogonalization_bound,
    orthogonalize_two_copy,
    triple_product_bound,
)
from .qcore import (
    fidelity,
    hermitian_eig,
    partial_trace,
    tensor_product,
    trace_norm,
    vn_entropy,
)

__version__ = "0.1.0"
