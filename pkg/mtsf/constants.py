"""File-format constants and experiment defaults."""

import math

# Edge-list text format: header "n_nodes n_edges", then "u v weight theta"
EDGE_LIST_HEADER_FIELDS = 2
EDGE_RECORD_FIELDS = 4

# Signal format: "node re im"
SIGNAL_RECORD_FIELDS = 3

# Instance format: header "n s p seed", then "i j c"
INSTANCE_HEADER_FIELDS = 4
COMPARISON_RECORD_FIELDS = 3
COMMENT_PREFIX = "#"
GROUND_TRUTH_TAG = "ground_truth"

# Sample dump records
SAMPLE_PREFIX = "sample"
TREE_TAG = "tree"
UNICYCLE_TAG = "unicycle"

# CSV schemas
ESTIMATE_COLUMNS = ("node", "re_estimate", "im_estimate", "variance")
CATALOG_COLUMNS = ("weight", "probability", "roots", "edges", "cycles")
OUTCOME_COLUMNS = (
    "seed", "n", "s", "p", "q", "k", "m", "mode", "tau", "flipped", "wall_time",
)
TIMING_COLUMNS = ("method", "n", "mean_time", "median_time", "std_time")
ERROR_COLUMNS = ("kind", "m", "mean_error", "std_error")
TAU_COLUMNS = ("q", "k", "mode", "mean_tau", "stderr_tau", "seeds")
SCALING_COLUMNS = ("n_edges", "mean_steps", "mean_time")
SCATTER_COLUMNS = ("node", "ground_truth", "recovered_exact", "recovered_estimator")

# Experiment defaults
DEFAULT_S = 0.8
DEFAULT_P = 0.9
DEFAULT_Q = 0.1
DEFAULT_DELTA = 0.25
DEFAULT_M = 5
DEFAULT_K = 10
DEFAULT_SEEDS = 20
DEFAULT_N = 300

# Enumeration guard
ORACLE_MAX_NODES = 8
ORACLE_MAX_EDGES = 14

# Dense factorization is used up to this many nodes
DENSE_LIMIT = 2000

HALF_PI = math.pi / 2
