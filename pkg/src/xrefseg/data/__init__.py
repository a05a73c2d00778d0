from .samples import ImageSample, mask_background, resize_sample
from .folds import PASCAL_CLASSES, FoldSplit, make_folds
from .index import DatasetIndex, DatasetError, load_dataset, load_pascal_style
from .episodes import Episode, EpisodeRef, SamplingError, sample_episode, sample_episode_refs
from .synthetic import SHAPE_CLASSES, generate_synthetic

__all__ = [
    "ImageSample", "mask_background", "resize_sample",
    "PASCAL_CLASSES", "FoldSplit", "make_folds",
    "DatasetIndex", "DatasetError", "load_dataset", "load_pascal_style",
    "Episode", "EpisodeRef", "SamplingError", "sample_episode", "sample_episode_refs",
    "SHAPE_CLASSES", "generate_synthetic",
]
