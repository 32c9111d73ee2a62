"""Presheaf automata over directed categories.

Index categories are built as finite validated fragments; automata are
element tables with contravariant actions; executions are paths whose
spanned track objects form languages with rational operations; open maps
give simulation-style comparisons; and standard automata, precubical
sets, VASSes, counter machines and Petri nets all encode into the same
framework.
"""

from .dcat import (
    DCatFragment,
    MorId,
    ObjId,
    Window,
    build_G,
    build_labeled_precube,
    build_precube,
    build_V,
    product_with_counter,
    validate_fragment,
)
from .presheaf import (
    Element,
    Presentation,
    PresheafAutomaton,
    act_path,
    co_act,
    coproduct,
    materialize,
    presentation_of_elements,
    representable,
    validate_automaton,
)
from .path import (
    Path,
    PathMorphism,
    concat_paths,
    constant_path,
    enumerate_fragment_paths,
    enumerate_paths,
    path_equivalent,
    path_morphisms,
    paths_of_shape,
    refines,
    validate_path,
)
from .track import (
    TrackObject,
    canonical_certificate,
    concat_tracks,
    elementary_track,
    identity_track,
    iso_tracks,
    track_of,
)
from .morphsearch import SearchOptions, accepts, find_morphisms, is_morphism, subsumes
from .lang import (
    Language,
    RationalExpr,
    concat,
    down_closure,
    eval_rational,
    fragment_universe,
    identity_language,
    is_down_closed,
    lang_of,
    language_equal,
    localize,
    plus,
    src_tgt,
    star,
    union,
)
from .openmap import (
    PresheafMap,
    check_lang_preservation,
    is_future_open,
    is_past_open,
)
from .report import ValidationReport

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
