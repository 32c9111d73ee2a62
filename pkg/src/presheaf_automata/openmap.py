"""Open maps of presheaf automata and the language-preservation check.

A map is future open when every formorphism lifting problem has a filler:
whenever an element upstream of a formorphism action matches the image of
a source element, the source provides a matching preimage.  Future open
maps with the right mark hypotheses preserve languages; the past-open
variant is checked as the mirrored statement and labelled as a
conjectured mirror in reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import NotInWindow
from .lang import lang_of, language_equal
from .presheaf import Element, PresheafAutomaton, co_act
from .report import ValidationReport


@dataclass(eq=False)
class PresheafMap:
    source: PresheafAutomaton
    target: PresheafAutomaton
    assign: Mapping[Element, Element]

    def __call__(self, e: Element) -> Element:
        return self.assign[e]

    def validate(self) -> ValidationReport:
        report = ValidationReport()
        targets = set(self.target.elements)
        for e in self.source.elements:
            image = self.assign.get(e)
            if image is None:
                report.add("unassigned", str(e))
            elif image not in targets:
                report.add("dangling", str(e), str(image))
            elif image.base != e.base:
                report.add("base", str(e), str(image))
        for (gen, x), y in self.source.act.items():
            fx = self.assign.get(x)
            if fx is None:
                continue
            img = self.target.act.get((gen, fx))
            if img is None or img != self.assign.get(y):
                report.add("naturality", str(gen), str(x))
        return report


@dataclass
class OpennessResult:
    open: bool
    direction: str
    counterexample: tuple | None = None
    window: dict = field(default_factory=dict)

    def __bool__(self):
        return self.open


def _check_open(f: PresheafMap, morphisms) -> OpennessResult:
    source, target = f.source, f.target
    direction = "future"
    for phi in morphisms:
        if phi.is_identity:
            continue
        for y in source.elements_over(phi.src):
            fy = f(y)
            for x in target.elements_over(phi.tgt):
                try:
                    if target.act_morphism(phi, x) != fy:
                        continue
                except NotInWindow:
                    continue
                lifted = False
                for bar in co_act(source, phi, y):
                    if f(bar) == x:
                        lifted = True
                        break
                if not lifted:
                    return OpennessResult(
                        False,
                        direction,
                        counterexample=(phi, y, x),
                        window=source.frag.window.describe(),
                    )
    return OpennessResult(True, direction, window=source.frag.window.describe())


def is_future_open(f: PresheafMap) -> OpennessResult:
    """Check the filler property over every formorphism in the window."""
    frag = f.source.frag
    morphisms = sorted(frag.for_morphisms, key=lambda m: m.key)
    return _check_open(f, morphisms)


def is_past_open(f: PresheafMap) -> OpennessResult:
    frag = f.source.frag
    morphisms = sorted(frag.back_morphisms, key=lambda m: m.key)
    result = _check_open(f, morphisms)
    result.direction = "past"
    return result


@dataclass
class LangPreservationReport:
    hypotheses_hold: bool
    future_open: bool
    starts_covered: bool
    accepts_reflected: bool
    languages_equal: bool | None
    missing_in_source: list[bytes] = field(default_factory=list)
    missing_in_target: list[bytes] = field(default_factory=list)
    note: str = ""


def check_lang_preservation(f: PresheafMap, maxlen: int) -> LangPreservationReport:
    """Verify the open-map hypotheses and compare bounded languages.

    Hypotheses: f future open, every start of the target is hit by a start
    of the source, and the source accepts exactly the preimages of target
    accepts.  When they hold, any language discrepancy at the budget is a
    bug-level failure and is reported with the offending certificates.
    """
    future = is_future_open(f).open
    image_starts = {f(y) for y in f.source.start}
    starts_covered = f.target.start <= image_starts
    preimage_accepts = {
        y for y in f.source.elements if f(y) in f.target.accept
    }
    accepts_reflected = frozenset(preimage_accepts) == f.source.accept
    hypotheses = future and starts_covered and accepts_reflected
    if not hypotheses:
        return LangPreservationReport(
            hypotheses_hold=False,
            future_open=future,
            starts_covered=starts_covered,
            accepts_reflected=accepts_reflected,
            languages_equal=None,
            note="hypotheses failed; no language claim",
        )
    lang_source = lang_of(f.source, maxlen)
    lang_target = lang_of(f.target, maxlen)
    equal = language_equal(lang_source, lang_target)
    return LangPreservationReport(
        hypotheses_hold=True,
        future_open=True,
        starts_covered=True,
        accepts_reflected=True,
        languages_equal=equal,
        missing_in_source=sorted(set(lang_target.tracks) - set(lang_source.tracks)),
        missing_in_target=sorted(set(lang_source.tracks) - set(lang_target.tracks)),
        note="" if equal else "BUG: hypotheses hold but languages differ",
    )
