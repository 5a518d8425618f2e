"""Spectral diagnostics for over-smoothing in graph neural network dynamics."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    DomainError,
    GraphFormatError,
    InsufficientDataError,
    NumericalError,
)
from .graph_core import (  # noqa: F401
    Graph,
    GraphStats,
    largest_connected_component,
    load_cora,
    load_edge_list,
    load_tu_dataset,
    make_graph,
    serialize_edge_list,
    stats,
)
from .operators import (  # noqa: F401
    GraphOperator,
    KernelGenerator,
    OperatorKind,
    build,
    commutator,
    custom_operator,
    is_commuting_pair,
    kernel_generator,
)
from .energy import (  # noqa: F401
    MeasureDescriptor,
    axiom1_check,
    axiom2_check,
    constant_signal_energy_closed_form,
    descriptor_for,
    dirichlet_energy,
    measure,
    normalize_conjugation,
)
from .spectral import (  # noqa: F401
    FilterSpec,
    SpectralDecomposition,
    SuperpositionMatrix,
    eigendecompose,
    energy_via_superposition,
    per_frequency_energy,
    spectral_dispersion,
    superposition,
)
from .dynamics import (  # noqa: F401
    DecayFit,
    FirstLayerWeights,
    LayerTrace,
    PerLayerWeights,
    PropagationConfig,
    RegimeThresholds,
    RegimeVerdict,
    classify_regime,
    energy_ratio_trace,
    fit_decay,
    propagate,
    weight_equivalence_check,
)
