"""
Classify Package.

Circle-bundle models, the five-term exact sequence and the classification
of Pic data and normal-form algebroid descent data on the total space.
"""

from classify.bundle_model import CircleBundleModel
from classify.classifier import (
    AlgebroidClass,
    ConeWitness,
    EquivalenceReport,
    PicClass,
    PicDatum,
    classify_algebroid,
    classify_pic,
    equivalence_classes_agree,
    find_equivalence_witness,
    pic_dual,
    pic_from_local_system,
    pic_tensor,
    twist_class,
)
from classify.sequence import FiveTermSequence, SequenceCheck, five_term_sequence

__all__ = [
    "AlgebroidClass",
    "CircleBundleModel",
    "ConeWitness",
    "EquivalenceReport",
    "FiveTermSequence",
    "PicClass",
    "PicDatum",
    "SequenceCheck",
    "classify_algebroid",
    "classify_pic",
    "equivalence_classes_agree",
    "find_equivalence_witness",
    "five_term_sequence",
    "pic_dual",
    "pic_from_local_system",
    "pic_tensor",
    "twist_class",
]
