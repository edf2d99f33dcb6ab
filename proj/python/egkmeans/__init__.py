"""EG K-MEANS clustering, Lloyd baselines and cluster-quality metrics."""

from ._egk import (  # noqa: F401
    CentroidIndexPolicy,
    ClusteringResult,
    DataError,
    Dataset,
    DegenerateInputError,
    DivisorTrace,
    EgConfig,
    EmptyClusterPolicy,
    Error,
    InitMethod,
    InvariantViolation,
    LloydConfig,
    MetricsReport,
    MetricUndefinedError,
    Parity,
    SortKey,
    Technique,
    UsageError,
    db_index,
    detect_outliers,
    divisor_sequence,
    eg_kmeans,
    empty_cluster_count,
    euclidean_distance,
    evaluate,
    explain,
    integerize,
    kmeanspp_init,
    lloyd,
    load_csv,
    random_init,
    run_experiment,
    select_k,
    sse,
    zscore_normalize,
)

__version__ = "1.0.0"
