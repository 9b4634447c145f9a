"""Classification bench over moment-feature CSVs."""

from .data import FeatureTable, SchemaMismatch, load_sources
from .experiment import (
    CvResult,
    ExperimentConfig,
    SweepPoint,
    accuracy_table_csv,
    accuracy_table_markdown,
    fold_assignments,
    make_classifier,
    run_cv,
    sweep_curve_csv,
    sweep_moments,
    sweep_sizes,
)

__version__ = "0.1.0"
