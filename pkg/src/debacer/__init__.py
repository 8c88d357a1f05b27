"""debacer: partition moderated debates into subject-coherent speech
blocks by classifying the moderator's utterances as subject interruptions,
plus the training, evaluation and annotation machinery around it."""

from .corpus import (
    AgendaItem,
    Corpus,
    Minute,
    Speech,
    SpeechBlock,
    load_corpus,
    save_corpus,
    select_agenda,
)
from .partition import PartitionResult, partition_agenda, partition_corpus
from .pipeline import PipelineSpec, TrainedPipeline, fit_pipeline, load_pipeline, save_pipeline
from .synth import SynthConfig, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "AgendaItem",
    "Corpus",
    "Minute",
    "PartitionResult",
    "PipelineSpec",
    "Speech",
    "SpeechBlock",
    "SynthConfig",
    "TrainedPipeline",
    "fit_pipeline",
    "generate_synthetic",
    "load_corpus",
    "load_pipeline",
    "partition_agenda",
    "partition_corpus",
    "save_corpus",
    "save_pipeline",
    "select_agenda",
    "__version__",
]
