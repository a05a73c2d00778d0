from .encoder import CallableEncoder, ConvEncoder
from .cross_reference import CrossReferenceGate
from .decoder import CoOccurrenceHead
from .condition import ConditionModule, foreground_pool, empty_region_count, reset_empty_region_count
from .refinement import ConfidenceCache, MaskRefiner, init_cache
from .network import EpisodeOutputs, FewShotSegNet, PARAM_GROUPS

__all__ = [
    "CallableEncoder", "ConvEncoder",
    "CrossReferenceGate",
    "CoOccurrenceHead",
    "ConditionModule", "foreground_pool", "empty_region_count", "reset_empty_region_count",
    "ConfidenceCache", "MaskRefiner", "init_cache",
    "EpisodeOutputs", "FewShotSegNet", "PARAM_GROUPS",
]
