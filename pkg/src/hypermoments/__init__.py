"""Spectral-moment representations of higher-order networks.

Splits a hypergraph into uniform layers, expands each layer into the
weighted dyadic graph whose walks mirror fixed-overlap walks on the
hyperedges, and represents the whole network by the spectral moments of
the resulting transition matrices.
"""

from .bounds import (
    BoundReport,
    JointDegreeStats,
    Thm2Calibration,
    TriadStats,
    bound_report,
    calibrate_thm2,
    joint_degree_stats,
    m2_report,
    m3_report,
    triangle_stats,
)
from .errors import (
    FormatError,
    HypermomentsError,
    InvariantViolation,
    ParseError,
    UnsupportedInputError,
)
from .features import (
    FeatureSchema,
    FeatureVector,
    downgrade,
    extract_features,
    extract_features_many,
    write_features,
)
from .hypercore import (
    Hypergraph,
    IngestReport,
    LayerSplit,
    UniformLayer,
    canonical_text,
    hyperdegree,
    parse_benson,
    parse_hyperedges,
    split_layers,
)
from .sampler import SampleResult, SampleSpec, derive_seed, induced_subgraph, rw_sample
from .spectra import (
    MomentVector,
    TransitionSpectrum,
    mc_return,
    moments_eig,
    moments_trace,
)
from .swalk import (
    DegreeLawReport,
    ExpansionMode,
    WeightedGraph,
    expand,
    expand_set_quotient,
    export_edgelist,
    verify_degree_law,
)

__version__ = "0.1.0"
