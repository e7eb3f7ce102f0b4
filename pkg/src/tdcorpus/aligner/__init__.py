from .align import (
    AlignedPair,
    CorpusAlignment,
    align_corpus,
    align_document,
    align_pass,
    check_cover,
    chunked_align,
    postprocess,
    total_cost,
)
from .dictionary import BilingualDictionary, build_dictionary
from .model import KINDS, AlignmentError, AlignParams, Bead, length_cost

__all__ = [
    "AlignParams", "AlignedPair", "AlignmentError", "Bead", "BilingualDictionary",
    "CorpusAlignment", "KINDS", "align_corpus", "align_document", "align_pass",
    "build_dictionary", "check_cover", "chunked_align", "length_cost", "postprocess",
    "total_cost",
]
