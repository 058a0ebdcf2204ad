"""Semantic-aware UAV handover assessment toolkit."""

from .labels import (
    Decision,
    LabelSchema,
    canonical_schema,
    is_valid,
    schema_to_json,
    validate,
)
from .learner import MlpTagClassifier, ScenarioFeaturizer, gradient_check, load_model, save_model
from .messenger import compose, decode, encode, overhead_report
from .oracle import BandThresholds, band_tags, independent_tags, label, main_decision
from .postprocess import Assessment, as_label_vector, decide, from_label_vector
from .scenario import (
    BsMeasurement,
    GenConfig,
    Mission,
    ParamRanges,
    Scenario,
    generate_dataset,
    sample_scenario,
)
from .textcodec import parse, render

__version__ = "0.1.0"

__all__ = [
    "Assessment",
    "BandThresholds",
    "BsMeasurement",
    "Decision",
    "GenConfig",
    "LabelSchema",
    "Mission",
    "MlpTagClassifier",
    "ParamRanges",
    "Scenario",
    "ScenarioFeaturizer",
    "as_label_vector",
    "band_tags",
    "canonical_schema",
    "compose",
    "decide",
    "decode",
    "encode",
    "from_label_vector",
    "generate_dataset",
    "gradient_check",
    "independent_tags",
    "is_valid",
    "label",
    "load_model",
    "main_decision",
    "overhead_report",
    "parse",
    "render",
    "sample_scenario",
    "save_model",
    "schema_to_json",
    "validate",
]
