"""Presheaf automata as finite element tables with contravariant actions.

An automaton stores elements fibred over the objects of a fragment, the
action of each generating morphism as a table, and start/accept marks.
Actions of composite morphisms are derived through the fragment's
generator decomposition.  Over counter-style fragments the element window
may clip some actions near the boundary; clipped entries are recorded and
raise NotInWindow when used.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .dcat import DCatFragment, MorId, ObjId, identity, same_fragment, skey
from .errors import NotComposable, NotInWindow, WindowOverflow
from .report import ValidationReport


@dataclass(frozen=True)
class Element:
    """An element of the presheaf, fibred over ``base``."""

    name: str
    base: ObjId

    @property
    def key(self):
        return (self.base.key, self.name)

    def __str__(self):
        return f"{self.name}@{self.base}"


@dataclass(eq=False)
class PresheafAutomaton:
    """A presheaf on a fragment with start and accept elements.

    ``act`` maps (generator, element over the generator's target) to the
    element over its source.  ``clipped`` lists pairs whose action would
    leave the element window; they are legal only for truncated fragments.
    """

    frag: DCatFragment
    elements: tuple[Element, ...]
    act: Mapping[tuple[MorId, Element], Element]
    start: frozenset[Element] = frozenset()
    accept: frozenset[Element] = frozenset()
    clipped: frozenset[tuple[MorId, Element]] = frozenset()

    def __post_init__(self):
        self.elements = tuple(sorted(self.elements, key=lambda e: e.key))
        self._by_base: dict[ObjId, list[Element]] = {}
        for e in self.elements:
            self._by_base.setdefault(e.base, []).append(e)
        self._co_act: dict[tuple[MorId, Element], list[Element]] = {}

    def elements_over(self, base: ObjId) -> list[Element]:
        return list(self._by_base.get(base, []))

    def act_gen(self, gen: MorId, x: Element) -> Element:
        if (gen, x) in self.clipped:
            raise NotInWindow(f"action of {gen} on {x} is clipped")
        try:
            return self.act[(gen, x)]
        except KeyError:
            raise NotComposable(f"no action of {gen} on {x}") from None

    def act_morphism(self, mor: MorId, x: Element) -> Element:
        """Action of an arbitrary in-window morphism via its decomposition."""
        if x.base != mor.tgt:
            raise NotComposable(f"{x} is not over {mor.tgt}")
        word = self.frag.decomposition[mor]
        for gen in reversed(word):
            x = self.act_gen(gen, x)
        return x

    def is_defined(self, mor: MorId, x: Element) -> bool:
        try:
            self.act_morphism(mor, x)
            return True
        except NotInWindow:
            return False

    def with_marks(self, start: Iterable[Element], accept: Iterable[Element]) -> "PresheafAutomaton":
        return PresheafAutomaton(
            frag=self.frag,
            elements=self.elements,
            act=self.act,
            start=frozenset(start),
            accept=frozenset(accept),
            clipped=self.clipped,
        )

    def element(self, name: str) -> Element:
        for e in self.elements:
            if e.name == name:
                return e
        raise KeyError(name)


# -- operations ------------------------------------------------------------


def validate_automaton(auto: PresheafAutomaton) -> ValidationReport:
    """Check fibration totality and functoriality against the fragment.

    Functoriality is tested on every composable generator pair whose
    composite stays in the window; for cube fragments this is exactly the
    cubical-identities check.
    """
    report = ValidationReport()
    frag = auto.frag
    objects = set(frag.objects)
    elems = set(auto.elements)

    for e in auto.elements:
        if e.base not in objects:
            report.add("base-out-of-window", str(e))

    for mark, label in ((auto.start, "start"), (auto.accept, "accept")):
        for e in mark:
            if e not in elems:
                report.add(f"{label}-not-element", str(e))

    for gen in frag.generators:
        for x in auto.elements_over(gen.tgt):
            if (gen, x) in auto.clipped:
                continue
            y = auto.act.get((gen, x))
            if y is None:
                report.add("action-missing", str(gen), str(x))
            elif y.base != gen.src:
                report.add("action-base", str(gen), str(x), str(y))

    for (gen, x), y in auto.act.items():
        if gen not in set(frag.generators):
            report.add("action-nongenerator", str(gen))
        if x not in elems or y not in elems:
            report.add("action-dangling", str(gen), str(x))

    # pairwise functoriality: act(g∘h) computed by decomposition must agree
    # with acting h after g
    for g in frag.generators:
        for h in frag.generators:
            if h.tgt != g.src:
                continue
            try:
                comp = frag.compose(g, h)
            except NotInWindow:
                continue
            for x in auto.elements_over(g.tgt):
                try:
                    via_pair = auto.act_gen(h, auto.act_gen(g, x))
                    via_comp = auto.act_morphism(comp, x)
                except NotInWindow:
                    continue
                except NotComposable:
                    continue
                if via_pair != via_comp:
                    report.add("functoriality", str(g), str(h), str(x))
    return report


def act_path(auto: PresheafAutomaton, word: Iterable[MorId], x: Element) -> Element:
    """Iterated action: applies the first morphism of the word first.

    Equals the action of the composite word[0]∘word[1]∘...; independence of
    the chosen factorisation is guaranteed for validated automata.
    """
    for mor in word:
        x = auto.act_morphism(mor, x)
    return x


def co_act(auto: PresheafAutomaton, mor: MorId, y: Element) -> list[Element]:
    """All elements x over tgt(mor) with act(mor, x) = y, in element order."""
    if y.base != mor.src:
        raise NotComposable(f"{y} is not over {mor.src}")
    key = (mor, y)
    cached = auto._co_act.get(key)
    if cached is not None:
        return list(cached)
    found = []
    for x in auto.elements_over(mor.tgt):
        try:
            if auto.act_morphism(mor, x) == y:
                found.append(x)
        except NotInWindow:
            continue
    auto._co_act[key] = found
    return list(found)


def representable(frag: DCatFragment, obj: ObjId) -> PresheafAutomaton:
    """The representable presheaf of ``obj``: morphisms into it, acting by
    precomposition.  Carries no marks."""
    if not frag.has_object(obj):
        raise WindowOverflow(f"{obj} is not in the window of {frag.name}")
    elements = {}
    for src in frag.objects:
        for psi in frag.hom(src, obj):
            elements[psi] = Element(str(psi), src)
    act = {}
    clipped = set()
    for gen in frag.generators:
        for psi, x in elements.items():
            if psi.src != gen.tgt:
                continue
            try:
                act[(gen, x)] = elements[frag.compose(psi, gen)]
            except NotInWindow:
                clipped.add((gen, x))
    return PresheafAutomaton(
        frag=frag,
        elements=tuple(elements.values()),
        act=act,
        clipped=frozenset(clipped),
    )


def coproduct(autos: list[PresheafAutomaton], frag: DCatFragment | None = None) -> PresheafAutomaton:
    """Disjoint union; element names are prefixed with their summand index."""
    if not autos and frag is None:
        raise ValueError("empty coproduct needs an explicit fragment")
    frag = frag if frag is not None else autos[0].frag
    elements = []
    act = {}
    clipped = set()
    start, accept = set(), set()
    renamed: list[dict[Element, Element]] = []
    for i, auto in enumerate(autos):
        if not same_fragment(auto.frag, frag):
            raise ValueError("coproduct needs a common fragment")
        table = {e: Element(f"{i}:{e.name}", e.base) for e in auto.elements}
        renamed.append(table)
        elements.extend(table.values())
        for (gen, x), y in auto.act.items():
            act[(gen, table[x])] = table[y]
        for gen, x in auto.clipped:
            clipped.add((gen, table[x]))
        start.update(table[e] for e in auto.start)
        accept.update(table[e] for e in auto.accept)
    return PresheafAutomaton(
        frag=frag,
        elements=tuple(elements),
        act=act,
        start=frozenset(start),
        accept=frozenset(accept),
        clipped=frozenset(clipped),
    )


# -- presentations and generated presheaves ---------------------------------


@dataclass(frozen=True)
class ShapeMorphism:
    name: str
    src: str
    tgt: str


@dataclass(eq=False)
class Presentation:
    """A functor from a finite shape category into a fragment.

    ``relations`` are pairs of parallel morphism-name words (innermost
    first); they are only consulted by validation, since colimit classes
    are already generated by the morphisms alone.
    """

    objects: tuple[str, ...]
    morphisms: tuple[ShapeMorphism, ...]
    g_ob: Mapping[str, ObjId]
    g_mor: Mapping[str, MorId]
    relations: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...] = ()

    def validate(self, frag: DCatFragment) -> ValidationReport:
        report = ValidationReport()
        for o in self.objects:
            if o not in self.g_ob:
                report.add("missing-object-image", o)
            elif not frag.has_object(self.g_ob[o]):
                report.add("object-image-out-of-window", o)
        by_name = {m.name: m for m in self.morphisms}
        for m in self.morphisms:
            img = self.g_mor.get(m.name)
            if img is None:
                report.add("missing-morphism-image", m.name)
                continue
            if img.src != self.g_ob.get(m.src) or img.tgt != self.g_ob.get(m.tgt):
                report.add("morphism-image-endpoints", m.name)
        for left, right in self.relations:
            if not left and not right:
                continue
            try:
                lsrc = self.g_ob[by_name[left[0]].src] if left else None
                rsrc = self.g_ob[by_name[right[0]].src] if right else None
                at = lsrc if lsrc is not None else rsrc
                lw = frag.compose_word([self.g_mor[n] for n in left], at)
                rw = frag.compose_word([self.g_mor[n] for n in right], at)
                if lw != rw:
                    report.add("relation-broken", left, right)
            except (KeyError, NotComposable, NotInWindow):
                report.add("relation-unreadable", left, right)
        return report


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def materialize(
    pres: Presentation,
    frag: DCatFragment,
    keep_boundary_classes: bool = False,
) -> PresheafAutomaton:
    """Objectwise colimit of representables along a presentation.

    For each window object W the elements are union-find classes of pairs
    (shape object e, morphism W -> G(e)); each shape morphism eps: e' -> e
    glues a pair at e' to its postcomposition with G(eps) at e.  Classes
    touching an identification that overflows the window are truncation
    artifacts and are dropped unless ``keep_boundary_classes`` is set.
    """
    check = pres.validate(frag)
    if not check.ok:
        raise WindowOverflow(f"invalid presentation: {check}")

    uf = _UnionFind()
    for e in pres.objects:
        target = pres.g_ob[e]
        for w in frag.objects:
            for psi in frag.hom(w, target):
                uf.add((e, psi))

    dirty_roots: set = set()
    pending_dirty: list = []
    for sm in pres.morphisms:
        g_eps = pres.g_mor[sm.name]
        src_img = pres.g_ob[sm.src]
        for w in frag.objects:
            for psi in frag.hom(w, src_img):
                try:
                    glued = frag.compose(g_eps, psi)
                except NotInWindow:
                    pending_dirty.append((sm.src, psi))
                    continue
                uf.union((sm.src, psi), (sm.tgt, glued))
    for node in pending_dirty:
        dirty_roots.add(uf.find(node))

    classes = uf.classes()
    kept: dict = {}
    dropped = 0
    for root, members in classes.items():
        if uf.find(root) in dirty_roots and not keep_boundary_classes:
            dropped += 1
            continue
        rep = min(members, key=lambda p: (skey(p[0]), p[1].key))
        kept[uf.find(root)] = rep

    def class_element(node) -> Element | None:
        root = uf.find(node)
        rep = kept.get(root)
        if rep is None:
            return None
        e, psi = rep
        return Element(f"{e}|{tag_of(psi)}", psi.src)

    def tag_of(psi: MorId) -> str:
        return str(psi)

    elements: dict[Element, tuple] = {}
    for root, rep in kept.items():
        el = class_element(rep)
        elements[el] = rep

    act: dict[tuple[MorId, Element], Element] = {}
    clipped: set[tuple[MorId, Element]] = set()
    for el, (e, psi) in elements.items():
        for gen in frag.generators:
            if gen.tgt != psi.src:
                continue
            try:
                pre = frag.compose(psi, gen)
            except NotInWindow:
                clipped.add((gen, el))
                continue
            image = class_element((e, pre))
            if image is None:
                clipped.add((gen, el))
            else:
                act[(gen, el)] = image

    auto = PresheafAutomaton(
        frag=frag,
        elements=tuple(elements),
        act=act,
        clipped=frozenset(clipped),
    )
    auto.colimit_class = lambda e, psi: class_element((e, psi))
    auto.dropped_boundary_classes = dropped
    return auto


def presentation_of_elements(auto: PresheafAutomaton) -> Presentation:
    """The category-of-elements presentation: shape objects are the
    elements, one shape morphism per generator action entry, G the
    projection.  Materializing it recovers the automaton up to iso."""
    objects = tuple(e.name for e in auto.elements)
    morphisms = []
    g_mor = {}
    for (gen, x), y in sorted(
        auto.act.items(), key=lambda kv: (kv[0][0].key, kv[0][1].key)
    ):
        name = f"{gen}|{x.name}"
        morphisms.append(ShapeMorphism(name, y.name, x.name))
        g_mor[name] = gen
    return Presentation(
        objects=objects,
        morphisms=tuple(morphisms),
        g_ob={e.name: e.base for e in auto.elements},
        g_mor=g_mor,
    )
