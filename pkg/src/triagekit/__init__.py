"""triagekit: issue auto-assignment.

Learns from historical issue reports to route new issues to the right team
and sub-team leader: text preprocessing, TF-IDF features, a classifier
suite, flat and chained assignment strategies, an evaluation harness, and
an HTTP serving layer.
"""

__version__ = "0.1.0"

from .corpus import (DEFAULT_TAXONOMY, IssueCorpus, IssueRecord, SyntheticSpec,
                     Taxonomy, generate_synthetic, ingest)
from .textprep import StopwordList, TokenizedDocument, clean, preprocess, rainbow_stopwords
from .lovins import lovins_stem
from .vectorize import (FeatureSpace, LabeledDataset, SparseVector, build_space,
                        info_gain_select, tfidf)
from .learners import ClassifierSpec, Distribution, TrainedModel, predict, train
from .assign import (AssignmentPipeline, AssignmentResult, assign,
                     chained_accuracy, measured_chain_accuracy)
from .evaluate import (ConfusionMatrix, EvaluationReport, SavingsParams,
                       WindowConfig, corrected_t_test, cross_validate,
                       effort_savings, metrics, misassignment_cost,
                       sliding_window_eval)

__all__ = [
    "__version__",
    "DEFAULT_TAXONOMY", "IssueCorpus", "IssueRecord", "SyntheticSpec", "Taxonomy",
    "generate_synthetic", "ingest",
    "StopwordList", "TokenizedDocument", "clean", "preprocess", "rainbow_stopwords",
    "lovins_stem",
    "FeatureSpace", "LabeledDataset", "SparseVector", "build_space",
    "info_gain_select", "tfidf",
    "ClassifierSpec", "Distribution", "TrainedModel", "predict", "train",
    "AssignmentPipeline", "AssignmentResult", "assign", "chained_accuracy",
    "measured_chain_accuracy",
    "ConfusionMatrix", "EvaluationReport", "SavingsParams", "WindowConfig",
    "corrected_t_test", "cross_validate", "effort_savings", "metrics",
    "misassignment_cost", "sliding_window_eval",
]
