from noteroute.router.features import FeatureSpec, FeatureVector, featurize, features_matrix
from noteroute.router.model import (
    FormatError,
    RouterModel,
    load_model,
    predict_labels,
    predict_proba,
    save_model,
)
from noteroute.router.train import DataError, HyperParams, TrainReport, train
from noteroute.router.calibrate import calibrate_thresholds
from noteroute.router.backbone import ExternalProbabilityBackbone, NativeBackbone

__all__ = [
    "FeatureSpec",
    "FeatureVector",
    "featurize",
    "features_matrix",
    "RouterModel",
    "FormatError",
    "save_model",
    "load_model",
    "predict_proba",
    "predict_labels",
    "HyperParams",
    "TrainReport",
    "DataError",
    "train",
    "calibrate_thresholds",
    "NativeBackbone",
    "ExternalProbabilityBackbone",
]
