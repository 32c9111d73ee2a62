"""Encoders between concrete machine models and presheaf automata."""

from .fsa import (
    LabeledDigraphAutomaton,
    accepted_words_oracle,
    auto_to_fsa,
    fsa_to_auto,
    word_path,
    word_track,
)
from .precubical import precubical_from_cells
from .vass import (
    Vass,
    VassConfig,
    presheaf_runs,
    presheaf_to_vass,
    vass_run_oracle,
    vass_to_presheaf,
)
from .counter import (
    counter_auto_to_vass,
    quotient_counter_example,
    vass_to_counter_auto,
)
from .petri import (
    Blocked,
    HdacTranslation,
    PetriNet,
    firing_sequences,
    interleaving_paths,
    petri_fire_oracle,
    petri_to_hdac,
)

__all__ = [
    "LabeledDigraphAutomaton",
    "accepted_words_oracle",
    "auto_to_fsa",
    "fsa_to_auto",
    "word_path",
    "word_track",
    "precubical_from_cells",
    "Vass",
    "VassConfig",
    "presheaf_runs",
    "presheaf_to_vass",
    "vass_run_oracle",
    "vass_to_presheaf",
    "counter_auto_to_vass",
    "quotient_counter_example",
    "vass_to_counter_auto",
    "Blocked",
    "HdacTranslation",
    "PetriNet",
    "firing_sequences",
    "interleaving_paths",
    "petri_fire_oracle",
    "petri_to_hdac",
]
