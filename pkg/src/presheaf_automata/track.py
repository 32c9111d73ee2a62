"""Track objects: colimits of representables along paths.

A track object is a simple automaton (one start, one accept) spanned by a
fragment path; it plays the role of a word.  Concatenation glues two
tracks over their shared endpoint object by a pushout.  Isomorphism is
decided by search, and a canonical certificate supports deduplication:
isomorphic tracks always receive equal certificates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dcat import DCatFragment, MorId, ObjId, identity, obj_str, same_fragment, skey
from .errors import EndpointMismatch, NotInWindow, PolarityMismatch
from .morphsearch import SearchOptions, find_morphisms
from .path import BOTH, DOWN, UP, Path, constant_path
from .presheaf import (
    Element,
    Presentation,
    PresheafAutomaton,
    ShapeMorphism,
    materialize,
    representable,
)


@dataclass(eq=False)
class TrackObject:
    """A simple automaton with its endpoint objects and canonical section."""

    auto: PresheafAutomaton
    src_obj: ObjId
    tgt_obj: ObjId
    section: tuple[Element, ...] = ()

    def __post_init__(self):
        if len(self.auto.start) != 1 or len(self.auto.accept) != 1:
            raise ValueError("track objects are simple: one start, one accept")

    @property
    def bottom(self) -> Element:
        return next(iter(self.auto.start))

    @property
    def top(self) -> Element:
        return next(iter(self.auto.accept))

    def cell_counts(self) -> dict[ObjId, int]:
        counts: dict[ObjId, int] = {}
        for e in self.auto.elements:
            counts[e.base] = counts.get(e.base, 0) + 1
        return counts

    def signature(self) -> tuple:
        return tuple(sorted((o.key, n) for o, n in self.cell_counts().items()))


def _linear_presentation(path: Path) -> Presentation:
    objects = tuple(f"p{k}" for k in range(len(path) + 1))
    morphisms: list[ShapeMorphism] = []
    g_mor: dict[str, MorId] = {}
    for k, kind in enumerate(path.shape):
        if kind in (UP, BOTH):
            name = f"s{k}"
            morphisms.append(ShapeMorphism(name, f"p{k}", f"p{k + 1}"))
            g_mor[name] = path.steps[k]
        if kind == DOWN:
            name = f"t{k}"
            morphisms.append(ShapeMorphism(name, f"p{k + 1}", f"p{k}"))
            g_mor[name] = path.steps[k]
    return Presentation(
        objects=objects,
        morphisms=tuple(morphisms),
        g_ob={f"p{k}": path.nodes[k] for k in range(len(path) + 1)},
        g_mor=g_mor,
    )


def track_of(path: Path, frag: DCatFragment) -> TrackObject:
    """The track object spanned by a fragment path.

    Materializes the linear presentation of the path; the basepoints are
    the colimit classes of the identities at the endpoints, and the
    canonical section lists the classes of the identities at every
    position.
    """
    pres = _linear_presentation(path)
    colim = materialize(pres, frag)
    section = tuple(
        colim.colimit_class(f"p{k}", identity(path.nodes[k]))
        for k in range(len(path) + 1)
    )
    if any(s is None for s in section):
        raise NotInWindow("path endpoints fall outside the window")
    auto = colim.with_marks([section[0]], [section[-1]])
    auto.colimit_class = colim.colimit_class
    return TrackObject(
        auto=auto,
        src_obj=path.nodes[0],
        tgt_obj=path.nodes[-1],
        section=section,
    )


def identity_track(frag: DCatFragment, obj: ObjId) -> TrackObject:
    """The track of the constant path: the representable, bipointed at id."""
    return track_of(constant_path(obj), frag)


def elementary_track(frag: DCatFragment, mor: MorId, direction: str) -> TrackObject:
    """The track of a single step along ``mor``.

    ``direction`` is "up" for a formorphism or "down" for a backmorphism;
    using a morphism against its polarity raises PolarityMismatch.
    """
    if direction == "up":
        if not frag.is_for(mor):
            raise PolarityMismatch(f"{mor} is not a formorphism")
        return track_of(Path(UP, (mor.src, mor.tgt), (mor,)), frag)
    if direction == "down":
        if not frag.is_back(mor):
            raise PolarityMismatch(f"{mor} is not a backmorphism")
        return track_of(Path(DOWN, (mor.tgt, mor.src), (mor,)), frag)
    raise ValueError("direction must be 'up' or 'down'")


class _Union:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        r = x
        while self.parent[r] != r:
            r = self.parent[r]
        while self.parent[x] != r:
            self.parent[x], x = r, self.parent[x]
        return r

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def concat_tracks(left: TrackObject, right: TrackObject) -> TrackObject:
    """Concatenation: glue the accept of ``left`` to the start of ``right``.

    The pushout identifies, for every morphism psi into the shared
    endpoint object, the action of psi on the two basepoints.
    """
    if left.tgt_obj != right.src_obj:
        raise EndpointMismatch(f"{left.tgt_obj} != {right.src_obj}")
    mid = left.tgt_obj
    frag = left.auto.frag
    if not same_fragment(frag, right.auto.frag):
        raise ValueError("concatenation needs a common fragment")

    uf = _Union()
    for e in left.auto.elements:
        uf.add(("L", e))
    for e in right.auto.elements:
        uf.add(("R", e))
    for w in frag.objects:
        for psi in frag.hom(w, mid):
            try:
                a = left.auto.act_morphism(psi, left.top)
                b = right.auto.act_morphism(psi, right.bottom)
            except NotInWindow:
                continue
            uf.union(("L", a), ("R", b))

    reps: dict = {}
    for e in left.auto.elements:
        root = uf.find(("L", e))
        reps.setdefault(root, []).append(("L", e))
    for e in right.auto.elements:
        root = uf.find(("R", e))
        reps.setdefault(root, []).append(("R", e))

    def to_element(node) -> Element:
        root = uf.find(node)
        side, e = min(reps[root], key=lambda se: (se[0], se[1].key))
        return Element(f"{side}.{e.name}", e.base)

    elements = {}
    for root, members in reps.items():
        el = to_element(members[0])
        elements[el] = members

    act: dict[tuple[MorId, Element], Element] = {}
    clipped: set[tuple[MorId, Element]] = set()
    sides = {"L": left.auto, "R": right.auto}
    for el, members in elements.items():
        side, e = min(members, key=lambda se: (se[0], se[1].key))
        auto = sides[side]
        for gen in frag.generators:
            if gen.tgt != e.base:
                continue
            image = auto.act.get((gen, e))
            if image is None:
                clipped.add((gen, el))
            else:
                act[(gen, el)] = to_element((side, image))

    merged = PresheafAutomaton(
        frag=frag,
        elements=tuple(elements),
        act=act,
        start=frozenset([to_element(("L", left.bottom))]),
        accept=frozenset([to_element(("R", right.top))]),
        clipped=frozenset(clipped),
    )
    glued = TrackObject(merged, left.src_obj, right.tgt_obj)
    glued.left_inclusion = {e: to_element(("L", e)) for e in left.auto.elements}
    glued.right_inclusion = {e: to_element(("R", e)) for e in right.auto.elements}
    return glued


def iso_tracks(left: TrackObject, right: TrackObject) -> bool:
    """Mark- and base-preserving bijective homomorphism with natural inverse."""
    if left.src_obj != right.src_obj or left.tgt_obj != right.tgt_obj:
        return False
    if left.signature() != right.signature():
        return False
    return bool(
        find_morphisms(
            left.auto,
            right.auto,
            SearchOptions(preserve_marks=True, bijective=True, injective=True, limit=1),
        )
    )


# -- canonical certificates ---------------------------------------------------


def _partition(colors) -> list[list[int]]:
    groups: dict = {}
    for x, c in colors.items():
        groups.setdefault(c, []).append(x)
    return sorted(sorted(v) for v in groups.values())


def _refine(colors, fwd, bwd):
    while True:
        palette = sorted(set(colors.values()), key=skey)
        index = {c: i for i, c in enumerate(palette)}
        new = {
            x: (
                index[colors[x]],
                tuple(sorted((g, index[colors[y]]) for g, y in fwd[x])),
                tuple(sorted((g, index[colors[y]]) for g, y in bwd[x])),
            )
            for x in colors
        }
        if _partition(new) == _partition(colors):
            return new
        colors = new


def canonical_certificate(track: TrackObject) -> bytes:
    """A byte string equal across isomorphic tracks.

    Computed by colour refinement over (base, marks, action fingerprints)
    followed by a backtracking search for the lexicographically minimal
    labelling; collisions between non-isomorphic tracks are ruled out on
    the fixtures by re-checking certificate-equal pairs with iso search.
    """
    cached = getattr(track, "_certificate", None)
    if cached is not None:
        return cached
    auto = track.auto
    elems = list(auto.elements)
    n = len(elems)
    fwd: dict[int, list] = {i: [] for i in range(n)}
    bwd: dict[int, list] = {i: [] for i in range(n)}
    pos = {e: i for i, e in enumerate(elems)}
    for (gen, x), y in auto.act.items():
        fwd[pos[x]].append((gen.key, pos[y]))
        bwd[pos[y]].append((gen.key, pos[x]))
    start = {pos[e] for e in auto.start}
    accept = {pos[e] for e in auto.accept}

    colors = {
        i: (skey((obj_str(elems[i].base), i in start, i in accept)),)
        for i in range(n)
    }
    colors = _refine(colors, fwd, bwd)

    best: list[bytes] = []

    def encode(order: list[int]) -> bytes:
        position = {x: i for i, x in enumerate(order)}
        lines = []
        for i, x in enumerate(order):
            lines.append(("e", i, obj_str(elems[x].base), x in start, x in accept))
        edges = []
        for x in order:
            for g, y in fwd[x]:
                edges.append(("a", g, position[x], position[y]))
        lines.extend(sorted(edges))
        return repr(lines).encode()

    def cells_of(colors) -> list[list[int]]:
        groups: dict = {}
        for x, c in colors.items():
            groups.setdefault(c, []).append(x)
        return [sorted(groups[c]) for c in sorted(groups, key=skey)]

    def search(colors):
        cells = cells_of(colors)
        split = next((cell for cell in cells if len(cell) > 1), None)
        if split is None:
            order = [cell[0] for cell in cells]
            enc = encode(order)
            if not best or enc < best[0]:
                best[:] = [enc]
            return
        for x in split:
            tweaked = dict(colors)
            tweaked[x] = (-1, colors[x])
            search(_refine(tweaked, fwd, bwd))

    if n == 0:
        return b"empty"
    search(colors)
    track._certificate = best[0]
    return best[0]
