"""Quantum source and channel coding quantities with numerical weak converse checks."""

__version__ = "0.1.0"

from .channels import (
    KrausChannel,
    apply,
    compose,
    dephasing_channel,
    depolarizing_channel,
    extend_with_identity,
    identity_channel,
    random_channel,
    tensor_power,
    typical_subspace_encoder,
    validate,
)
from .errors import (
    ConsistencyError,
    DimensionError,
    DomainError,
    InvalidChannelError,
    NumericError,
    PositivityError,
    ProblemFileError,
    QConverseError,
    SizeLimitError,
    ValidationError,
)
from .linalg import Spectrum, hermitian_eig, kron, partial_trace, spectral_log2_weighted
from .quantities import (
    DIVERGENT,
    average_fidelity,
    binary_entropy,
    coherent_information,
    entanglement_fidelity,
    entropy_exchange,
    fano_bound,
    relative_entropy,
    von_neumann_entropy,
)
from .states import Source, density_of_source, purify, random_density, random_source, reference_state
from .bounds import (
    BoundReport,
    SimplexPoint,
    channel_converse_report,
    maximize_coherent_info,
    maximize_input_entropy,
    source_converse_report,
)
from .suite import SuiteConfig, inequality_suite
