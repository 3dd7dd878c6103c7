"""Generate and validate code-switched sentences from aligned parse-tree pairs."""
from .config import MLConfig, default_config, load_config
from .core import (AlignedPair, CSSentence, GrammarRule, Lang, LexicalUnit, PairFormatError,
                   TreeNode, check_congruence, extract_rules, parse_pair_file, parse_tree,
                   serialize_pair)
from .ec import generate_ec0, generate_ec1
from .fixtures import load_pair
from .ml import check_well_formed, generate_ml0, generate_ml1, generate_ml2
from .projection import ProjectionResult, attach_congruence, prepare, project

__all__ = [
    "AlignedPair", "CSSentence", "GrammarRule", "Lang", "LexicalUnit", "MLConfig",
    "PairFormatError", "ProjectionResult", "TreeNode", "attach_congruence",
    "check_congruence", "check_well_formed", "default_config", "extract_rules",
    "generate_ec0", "generate_ec1", "generate_ml0", "generate_ml1", "generate_ml2",
    "load_config", "load_pair", "parse_pair_file", "parse_tree", "prepare", "project",
    "serialize_pair",
]
__version__ = "0.1.0"
