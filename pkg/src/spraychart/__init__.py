"""Spray-chart density estimation and matchup synthesis for batted balls.

The package turns raw pitch-level tracking CSVs into per-matchup landing
densities.  Direct history between a batter and pitcher is blended with
surfaces borrowed from similar pitchers and similar batters, weighted by
how much usable history each path carries, and the blended surface is
priced into expected outcome rates.
"""

from spraychart.density import (
    Bandwidth,
    DensityGrid,
    FieldGrid,
    kde2,
    kde2_weighted,
    mix,
    normal_reference_bandwidth,
    select_bandwidth,
)
from spraychart.ingest import (
    ColumnMap,
    IngestReport,
    IngestResult,
    Outcome,
    PitchRecord,
    ingest_csv,
)
from spraychart.outcomes import (
    ExpectedOutcomes,
    OutcomeField,
    expected_outcomes,
    fit_outcome_field,
)
from spraychart.profiles import (
    BattedBallTable,
    BatterProfile,
    PitcherProfile,
    ProfileSet,
    build_profiles,
    eligible_batters,
    eligible_pitchers,
    records_to_frame,
)
from spraychart.similarity import (
    MetricWeights,
    PoolEntry,
    SimilarityPool,
    build_pool,
    similarity_score,
    slider_to_metric,
)
from spraychart.synthesis import (
    BlendWeights,
    NoMatchupDataError,
    SynthesisResult,
    blend,
    compute_lambda,
    lambda_from_counts,
    synthesize_matchup,
)

__version__ = "0.1.0"

__all__ = [
    "Bandwidth",
    "BattedBallTable",
    "BatterProfile",
    "BlendWeights",
    "ColumnMap",
    "DensityGrid",
    "ExpectedOutcomes",
    "FieldGrid",
    "IngestReport",
    "IngestResult",
    "MetricWeights",
    "NoMatchupDataError",
    "Outcome",
    "OutcomeField",
    "PitchRecord",
    "PitcherProfile",
    "PoolEntry",
    "ProfileSet",
    "SimilarityPool",
    "SynthesisResult",
    "blend",
    "build_pool",
    "build_profiles",
    "compute_lambda",
    "eligible_batters",
    "eligible_pitchers",
    "expected_outcomes",
    "fit_outcome_field",
    "ingest_csv",
    "kde2",
    "kde2_weighted",
    "lambda_from_counts",
    "mix",
    "normal_reference_bandwidth",
    "records_to_frame",
    "select_bandwidth",
    "similarity_score",
    "slider_to_metric",
    "synthesize_matchup",
    "__version__",
]
