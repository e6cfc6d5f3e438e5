"""Plane-strain finite-strain FEM with analytic, neural-network and
data-driven constitutive back-ends."""

from .data_pipeline import (
    DatasetFile,
    MalformedFile,
    SubsampleTooLarge,
    add_noise,
    generate_source,
    load_model,
    read_dataset,
    save_model,
    subsample,
    write_dataset,
)
from .materials import (
    Ciarlet,
    CiarletParams,
    HartmannNeff,
    HartmannNeffParams,
    Material,
    make_material,
)
from .nn_model import NetworkParams, NNMaterial
from .nn_training import LabeledSamples, TrainingConfig, train
from .problems import COOK_TIP, COOK_TRACTION, PUNCH_LOAD, PUNCH_TIP, problem, tip_point
from .tensors import (
    Invariants,
    NonInvertibleDeformation,
    NonPositiveDefinite,
    PhasePoint,
    SymTensor2,
    green_lagrange,
    invariants_plane_strain,
    right_cauchy_green,
    rotate_pair,
    shifted_invariants,
)

__all__ = [
    "COOK_TIP",
    "COOK_TRACTION",
    "Ciarlet",
    "CiarletParams",
    "DatasetFile",
    "HartmannNeff",
    "HartmannNeffParams",
    "Invariants",
    "LabeledSamples",
    "MalformedFile",
    "Material",
    "NNMaterial",
    "NetworkParams",
    "NonInvertibleDeformation",
    "NonPositiveDefinite",
    "PUNCH_LOAD",
    "PUNCH_TIP",
    "PhasePoint",
    "SubsampleTooLarge",
    "SymTensor2",
    "TrainingConfig",
    "add_noise",
    "generate_source",
    "green_lagrange",
    "invariants_plane_strain",
    "load_model",
    "make_material",
    "problem",
    "read_dataset",
    "right_cauchy_green",
    "rotate_pair",
    "save_model",
    "shifted_invariants",
    "subsample",
    "tip_point",
    "train",
    "write_dataset",
]
