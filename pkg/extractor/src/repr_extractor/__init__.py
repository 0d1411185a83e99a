"""Hidden-state extraction for probing: runs a frozen causal LM over
prefix texts and writes final-token last-layer vectors in the probing
dump format."""

from repr_extractor.extract import ExtractionReport, LoadedModel, extract, load_model
from repr_extractor.job import (
    ExtractionJob,
    Instance,
    InstanceError,
    ModelLoadError,
    TokenizationOverflow,
    load_instances,
)

__all__ = [
    "ExtractionJob",
    "ExtractionReport",
    "Instance",
    "InstanceError",
    "LoadedModel",
    "ModelLoadError",
    "TokenizationOverflow",
    "extract",
    "load_instances",
    "load_model",
]

__version__ = "0.1.0"
