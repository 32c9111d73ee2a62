"""Finite fragments of directed categories (d-categories).

A d-category is a small category with wide subcategories of formorphisms
and backmorphisms; invertible morphisms swap polarity under inversion.
Everything here is finite and explicit: objects, morphisms, a composition
table, polarity flags and a truncation window.  Infinite index categories
(all cube dimensions, integer edge vectors, counter values) only ever
appear as bounded fragments with an explicit window.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    AlphabetContainsEmptySymbol,
    NotComposable,
    NotInWindow,
)
from .report import ValidationReport

EMPTY = ""  # payload of the empty-word / single-vertex object


def skey(value):
    """Total sort key over the payload universe (ints, strs, tuples)."""
    if isinstance(value, bool):
        return (0, int(value))
    if isinstance(value, int):
        return (0, value)
    if isinstance(value, str):
        return (1, value)
    if isinstance(value, tuple):
        return (2, tuple(skey(v) for v in value))
    raise TypeError(f"unsortable payload {value!r}")


@dataclass(frozen=True)
class ObjId:
    """An object of a fragment, identified by a structured payload."""

    payload: object

    @property
    def key(self):
        return skey(self.payload)

    def __str__(self):
        return obj_str(self.payload)

    def __repr__(self):
        return f"ObjId({self.payload!r})"


@dataclass(frozen=True)
class MorId:
    """A morphism, identified by source, target and a structured tag."""

    src: ObjId
    tgt: ObjId
    tag: tuple

    @property
    def key(self):
        return (skey(self.tag), self.src.key, self.tgt.key)

    @property
    def is_identity(self) -> bool:
        return self.tag == ("id",)

    def __str__(self):
        return f"{tag_str(self.tag)}:{self.src}->{self.tgt}"

    def __repr__(self):
        return f"MorId({self!s})"


def obj_str(payload) -> str:
    if payload == EMPTY:
        return "_"
    if isinstance(payload, tuple):
        return "(" + ",".join(obj_str(p) for p in payload) + ")"
    return str(payload)


def tag_str(tag: tuple) -> str:
    head = tag[0]
    if head == "id":
        return "id"
    if head in ("sigma", "tau"):
        return f"{head}[{tag[1]}]"
    if head == "d":
        slots = ",".join(f"{pos}^{eps}" for pos, eps in tag[1])
        return f"d[{slots}]"
    if head == "ct":
        return f"{tag_str(tag[1])}+w{list(tag[2])}"
    if head in ("v_sigma", "v_tau", "v_shift"):
        return head[2:]
    return repr(tag)


def identity(obj: ObjId) -> MorId:
    return MorId(obj, obj, ("id",))


def same_fragment(left: "DCatFragment", right: "DCatFragment") -> bool:
    """Structural interchangeability of two fragments."""
    return left is right or (
        left.objects == right.objects
        and left.morphisms == right.morphisms
        and left.for_morphisms == right.for_morphisms
        and left.back_morphisms == right.back_morphisms
        and left.generators == right.generators
    )


@dataclass(frozen=True)
class Window:
    """Truncation descriptor for a fragment.

    ``objects_complete`` is True when the fragment contains every object of
    the underlying category (needed for Kleene star).  ``omitted`` records
    morphisms or identifications dropped at the boundary.
    """

    kind: str
    bounds: tuple = ()
    objects_complete: bool = True
    morphisms_complete: bool = True
    omitted: tuple = ()

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "bounds": list(self.bounds),
            "objects_complete": self.objects_complete,
            "morphisms_complete": self.morphisms_complete,
            "omitted": [str(o) for o in self.omitted],
        }


@dataclass(eq=False)
class DCatFragment:
    """A finite, validated fragment of a d-category.

    Immutable after construction; safe to share between threads.  The
    composition table is total on in-window composable pairs.  Composites
    that would leave the window are simply absent and raise NotInWindow.
    """

    name: str
    objects: tuple[ObjId, ...]
    morphisms: tuple[MorId, ...]
    composition: Mapping[tuple[MorId, MorId], MorId]
    for_morphisms: frozenset[MorId]
    back_morphisms: frozenset[MorId]
    window: Window
    generators: tuple[MorId, ...] = ()
    decomposition: Mapping[MorId, tuple[MorId, ...]] = field(default_factory=dict)

    def __post_init__(self):
        self.objects = tuple(sorted(self.objects, key=lambda o: o.key))
        self.morphisms = tuple(sorted(self.morphisms, key=lambda m: m.key))
        if not self.generators:
            self.generators = tuple(
                m for m in self.morphisms if not m.is_identity
            )
        if not self.decomposition:
            self.decomposition = {}
        decomp = dict(self.decomposition)
        for m in self.morphisms:
            if m not in decomp:
                decomp[m] = () if m.is_identity else (m,)
        self.decomposition = decomp
        self._hom_index: dict[tuple[ObjId, ObjId], list[MorId]] = {}
        for m in self.morphisms:
            self._hom_index.setdefault((m.src, m.tgt), []).append(m)
        for ms in self._hom_index.values():
            ms.sort(key=lambda m: m.key)
        self._for_by_src: dict[ObjId, list[MorId]] = {}
        for m in sorted(self.for_morphisms, key=lambda m: m.key):
            self._for_by_src.setdefault(m.src, []).append(m)
        self._back_by_tgt: dict[ObjId, list[MorId]] = {}
        for m in sorted(self.back_morphisms, key=lambda m: m.key):
            self._back_by_tgt.setdefault(m.tgt, []).append(m)
        self._inverses: dict[MorId, MorId] | None = None

    # -- basic queries ---------------------------------------------------

    def identity(self, obj: ObjId) -> MorId:
        return identity(obj)

    def has_object(self, obj: ObjId) -> bool:
        return obj in set(self.objects)

    def hom(self, src: ObjId, tgt: ObjId) -> list[MorId]:
        """All morphisms src -> tgt, deterministically ordered by tag."""
        return list(self._hom_index.get((src, tgt), []))

    def is_for(self, m: MorId) -> bool:
        return m in self.for_morphisms

    def is_back(self, m: MorId) -> bool:
        return m in self.back_morphisms

    def for_from(self, obj: ObjId) -> list[MorId]:
        return list(self._for_by_src.get(obj, []))

    def back_into(self, obj: ObjId) -> list[MorId]:
        return list(self._back_by_tgt.get(obj, []))

    def compose(self, g: MorId, f: MorId) -> MorId:
        """The composite g∘f (f first).  Raises on mismatch or overflow."""
        if f.tgt != g.src:
            raise NotComposable(f"cannot compose {g} after {f}")
        try:
            return self.composition[(g, f)]
        except KeyError:
            raise NotInWindow(
                f"composite {g}∘{f} leaves the window of {self.name}"
            ) from None

    def compose_word(self, word: Iterable[MorId], at: ObjId) -> MorId:
        """Compose a word applied innermost-first starting at ``at``."""
        acc = identity(at)
        for m in word:
            acc = self.compose(m, acc)
        return acc

    def inverses(self) -> dict[MorId, MorId]:
        """Two-sided inverses present in the fragment."""
        if self._inverses is None:
            inv = {}
            for (g, f), gf in self.composition.items():
                if gf.is_identity and g.src == f.tgt and g.tgt == f.src:
                    fg = self.composition.get((f, g))
                    if fg is not None and fg.is_identity:
                        inv[f] = g
            self._inverses = inv
        return dict(self._inverses)

    def mor_by_str(self, text: str) -> MorId:
        for m in self.morphisms:
            if str(m) == text:
                return m
        raise KeyError(text)


# -- validation ----------------------------------------------------------


def validate_fragment(frag: DCatFragment) -> ValidationReport:
    """Check the d-category axioms; every violation is reported with a witness."""
    report = ValidationReport()
    objects = set(frag.objects)
    morphisms = set(frag.morphisms)

    for m in frag.morphisms:
        if m.src not in objects or m.tgt not in objects:
            report.add("endpoint-missing", str(m))

    ids = {identity(o) for o in frag.objects}
    for i in ids:
        if i not in morphisms:
            report.add("identity-missing", str(i.src))

    for (g, f), gf in frag.composition.items():
        if f.tgt != g.src:
            report.add("table-noncomposable", str(g), str(f))
        if gf.src != f.src or gf.tgt != g.tgt:
            report.add("table-endpoints", str(g), str(f), str(gf))
        if gf not in morphisms:
            report.add("table-escapes", str(g), str(f), str(gf))

    for m in frag.morphisms:
        i_tgt, i_src = identity(m.tgt), identity(m.src)
        if frag.composition.get((i_tgt, m)) != m:
            report.add("unit-left", str(m))
        if frag.composition.get((m, i_src)) != m:
            report.add("unit-right", str(m))

    # associativity on every triple with both bracketings defined
    by_src: dict[ObjId, list[MorId]] = {}
    for m in frag.morphisms:
        by_src.setdefault(m.src, []).append(m)
    for f in frag.morphisms:
        for g in by_src.get(f.tgt, []):
            gf = frag.composition.get((g, f))
            for h in by_src.get(g.tgt, []):
                hg = frag.composition.get((h, g))
                left = frag.composition.get((h, gf)) if gf is not None else None
                right = frag.composition.get((hg, f)) if hg is not None else None
                if left is not None and right is not None and left != right:
                    report.add("associativity", str(h), str(g), str(f))

    for side, wide in (("for", frag.for_morphisms), ("back", frag.back_morphisms)):
        for i in ids:
            if i not in wide:
                report.add(f"polarity-identity-{side}", str(i.src))
        for (g, f), gf in frag.composition.items():
            if g in wide and f in wide and gf not in wide:
                report.add(f"polarity-closure-{side}", str(g), str(f))

    for f, g in frag.inverses().items():
        if frag.is_for(f) != frag.is_back(g):
            report.add("polarity-inverse", str(f), str(g))

    return report


# -- builder: standard-automata index category ----------------------------


def build_G(alphabet: Iterable[str]) -> DCatFragment:
    """The index d-category for standard automata over ``alphabet``.

    One vertex object plus one object per letter; each letter gets a
    source-marking formorphism and a target-marking backmorphism out of
    the vertex object.
    """
    letters = sorted(set(alphabet))
    if EMPTY in letters:
        raise AlphabetContainsEmptySymbol(
            "the empty symbol is reserved for the vertex object"
        )
    empty = ObjId(EMPTY)
    objects = [empty] + [ObjId(a) for a in letters]
    sigmas = {a: MorId(empty, ObjId(a), ("sigma", a)) for a in letters}
    taus = {a: MorId(empty, ObjId(a), ("tau", a)) for a in letters}
    morphisms = [identity(o) for o in objects]
    morphisms += list(sigmas.values()) + list(taus.values())

    table: dict[tuple[MorId, MorId], MorId] = {}
    for m in morphisms:
        table[(identity(m.tgt), m)] = m
        table[(m, identity(m.src))] = m

    return DCatFragment(
        name=f"G({','.join(letters)})",
        objects=tuple(objects),
        morphisms=tuple(morphisms),
        composition=table,
        for_morphisms=frozenset([identity(o) for o in objects] + list(sigmas.values())),
        back_morphisms=frozenset([identity(o) for o in objects] + list(taus.values())),
        window=Window(kind="G", bounds=(len(letters),)),
        generators=tuple(
            sorted(list(sigmas.values()) + list(taus.values()), key=lambda m: m.key)
        ),
    )


# -- builder: precubical category -----------------------------------------

# A morphism [m] -> [n] is a set of filled slots ((pos, eps), ...) with
# positions in 1..n; the unfilled slots carry the m source coordinates in
# order.  Composition fills the outer free slots with the inner ones, which
# bakes the cubical relations into a unique normal form.


def _cube_compose_slots(n: int, outer, inner) -> tuple:
    filled = dict(outer)
    free = [u for u in range(1, n + 1) if u not in filled]
    for j, eps in inner:
        filled[free[j - 1]] = eps
    return tuple(sorted(filled.items()))


def _cube_slot_sets(n: int, k: int):
    """All ways of filling k of n slots with 0/1 values, sorted."""
    for positions in itertools.combinations(range(1, n + 1), k):
        for values in itertools.product((0, 1), repeat=k):
            yield tuple(zip(positions, values))


def build_precube(dmax: int) -> DCatFragment:
    """The precubical category truncated at dimension ``dmax``.

    Formorphisms are the all-0 face composites, backmorphisms the all-1
    ones; mixed composites carry no polarity.
    """
    if dmax < 0:
        raise ValueError("dmax must be >= 0")
    objects = [ObjId(n) for n in range(dmax + 1)]
    morphisms: list[MorId] = [identity(o) for o in objects]
    for n in range(dmax + 1):
        for m in range(n):
            for slots in _cube_slot_sets(n, n - m):
                morphisms.append(MorId(ObjId(m), ObjId(n), ("d", slots)))

    table: dict[tuple[MorId, MorId], MorId] = {}
    by_ends = {(mo.src, mo.tgt, mo.tag): mo for mo in morphisms}
    for g in morphisms:
        for f in morphisms:
            if f.tgt != g.src:
                continue
            if g.is_identity:
                table[(g, f)] = f
            elif f.is_identity:
                table[(g, f)] = g
            else:
                slots = _cube_compose_slots(g.tgt.payload, g.tag[1], f.tag[1])
                table[(g, f)] = by_ends[(f.src, g.tgt, ("d", slots))]

    for_set, back_set = set(), set()
    for m in morphisms:
        if m.is_identity:
            for_set.add(m)
            back_set.add(m)
        else:
            values = {eps for _, eps in m.tag[1]}
            if values == {0}:
                for_set.add(m)
            if values == {1}:
                back_set.add(m)

    generators = tuple(
        m for m in morphisms if not m.is_identity and len(m.tag[1]) == 1
    )

    decomposition: dict[MorId, tuple[MorId, ...]] = {}
    for m in morphisms:
        if m.is_identity:
            decomposition[m] = ()
        else:
            slots = m.tag[1]
            word, level = [], m.src.payload
            for pos, eps in slots:
                word.append(MorId(ObjId(level), ObjId(level + 1), ("d", ((pos, eps),))))
                level += 1
            decomposition[m] = tuple(word)

    return DCatFragment(
        name=f"precube<= {dmax}",
        objects=tuple(objects),
        morphisms=tuple(morphisms),
        composition=table,
        for_morphisms=frozenset(for_set),
        back_morphisms=frozenset(back_set),
        window=Window(kind="precube", bounds=(dmax,), objects_complete=False),
        generators=generators,
        decomposition=decomposition,
    )


# -- builder: labelled precube skeleton ------------------------------------


def _delete_positions(word: tuple, positions: Iterable[int]) -> tuple:
    drop = set(positions)
    return tuple(c for i, c in enumerate(word, start=1) if i not in drop)


def build_labeled_precube(alphabet: Iterable[str], dmax: int) -> DCatFragment:
    """Skeleton of the labelled precube category, truncated at word length.

    Objects are label words of length <= dmax; morphisms delete letters at
    chosen positions with a 0/1 value each, composing like cube faces.
    """
    if dmax < 0:
        raise ValueError("dmax must be >= 0")
    letters = sorted(set(alphabet))
    if EMPTY in letters:
        raise AlphabetContainsEmptySymbol("letters must be nonempty symbols")
    words = [()]
    for n in range(1, dmax + 1):
        words.extend(itertools.product(letters, repeat=n))
    objects = [ObjId(w) for w in words]

    morphisms: list[MorId] = [identity(o) for o in objects]
    for w in words:
        n = len(w)
        for k in range(1, n + 1):
            for slots in _cube_slot_sets(n, k):
                src = _delete_positions(w, (p for p, _ in slots))
                morphisms.append(MorId(ObjId(src), ObjId(w), ("d", slots)))

    by_ends = {(mo.src, mo.tgt, mo.tag): mo for mo in morphisms}
    table: dict[tuple[MorId, MorId], MorId] = {}
    for g in morphisms:
        for f in morphisms:
            if f.tgt != g.src:
                continue
            if g.is_identity:
                table[(g, f)] = f
            elif f.is_identity:
                table[(g, f)] = g
            else:
                n = len(g.tgt.payload)
                slots = _cube_compose_slots(n, g.tag[1], f.tag[1])
                table[(g, f)] = by_ends[(f.src, g.tgt, ("d", slots))]

    for_set, back_set = set(), set()
    for m in morphisms:
        if m.is_identity:
            for_set.add(m)
            back_set.add(m)
        else:
            values = {eps for _, eps in m.tag[1]}
            if values == {0}:
                for_set.add(m)
            if values == {1}:
                back_set.add(m)

    generators = tuple(
        m for m in morphisms if not m.is_identity and len(m.tag[1]) == 1
    )
    decomposition: dict[MorId, tuple[MorId, ...]] = {}
    for m in morphisms:
        if m.is_identity:
            decomposition[m] = ()
            continue
        slots = m.tag[1]
        word: list[MorId] = []
        src = m.src.payload
        for idx, (pos, eps) in enumerate(slots):
            # target of this step: delete the still-pending larger slots from m.tgt
            pending = tuple(p for p, _ in slots[idx + 1:])
            mid = _delete_positions(m.tgt.payload, pending)
            word.append(MorId(ObjId(src), ObjId(mid), ("d", ((pos, eps),))))
            src = mid
        decomposition[m] = tuple(word)

    return DCatFragment(
        name=f"cube({','.join(letters)})<= {dmax}",
        objects=tuple(objects),
        morphisms=tuple(morphisms),
        composition=table,
        for_morphisms=frozenset(for_set),
        back_morphisms=frozenset(back_set),
        window=Window(kind="labeled_precube", bounds=(dmax,), objects_complete=False),
        generators=generators,
        decomposition=decomposition,
    )


# -- builder: product with a counter monoid --------------------------------


def _vec_add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _vec_le(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _vectors_upto(bound: tuple):
    return itertools.product(*(range(b + 1) for b in bound))


def product_with_counter(frag: DCatFragment, r: int, bound: tuple) -> DCatFragment:
    """Product of a fragment with the free commutative counter monoid.

    The monoid contributes no objects; a morphism is a pair (base, w) with
    w a vector of naturals below ``bound``.  Composition adds counters and
    leaves the window when the sum exceeds the bound.  Only zero-counter
    pairs inherit the base polarity: the monoid's only for/backmorphism is
    its identity.
    """
    bound = tuple(bound)
    if len(bound) != r:
        raise ValueError("bound must have one entry per counter")
    zero = (0,) * r

    def pair(m: MorId, w: tuple) -> MorId:
        if m.is_identity and w == zero:
            return identity(m.src)
        return MorId(m.src, m.tgt, ("ct", m.tag, w))

    def unpair(m: MorId) -> tuple[MorId, tuple]:
        if m.is_identity:
            return identity(m.src), zero
        return MorId(m.src, m.tgt, m.tag[1]), m.tag[2]

    morphisms = [
        pair(m, w) for m in frag.morphisms for w in _vectors_upto(bound)
    ]
    table: dict[tuple[MorId, MorId], MorId] = {}
    omitted = 0
    for g in morphisms:
        for f in morphisms:
            if f.tgt != g.src:
                continue
            g_base, g_w = unpair(g)
            f_base, f_w = unpair(f)
            base = frag.composition.get((g_base, f_base))
            if base is None:
                continue
            w = _vec_add(g_w, f_w)
            if _vec_le(w, bound):
                table[(g, f)] = pair(base, w)
            else:
                omitted += 1

    for_set = frozenset(pair(m, zero) for m in frag.for_morphisms)
    back_set = frozenset(pair(m, zero) for m in frag.back_morphisms)

    unit_vectors = [tuple(1 if i == j else 0 for i in range(r)) for j in range(r)]
    generators = [pair(g, zero) for g in frag.generators]
    shift_gens = {}
    for o in frag.objects:
        for e in unit_vectors:
            g = pair(identity(o), e)
            shift_gens[(o, e)] = g
            generators.append(g)

    decomposition: dict[MorId, tuple[MorId, ...]] = {}
    for m in morphisms:
        base, w = unpair(m)
        word = [pair(b, zero) for b in frag.decomposition[base]]
        for j, c in enumerate(w):
            word.extend([shift_gens[(m.tgt, unit_vectors[j])]] * c)
        decomposition[m] = tuple(word)

    window = Window(
        kind=f"{frag.window.kind}*counter",
        bounds=frag.window.bounds + bound,
        objects_complete=frag.window.objects_complete,
        morphisms_complete=False,
        omitted=(f"{omitted} counter composites over bound",) if omitted else (),
    )
    return DCatFragment(
        name=f"{frag.name} x N^{r}<={list(bound)}",
        objects=frag.objects,
        morphisms=tuple(morphisms),
        composition=table,
        for_morphisms=for_set,
        back_morphisms=back_set,
        window=window,
        generators=tuple(sorted(generators, key=lambda m: m.key)),
        decomposition=decomposition,
    )


# -- builder: VASS index category ------------------------------------------


def _pos_part(u: tuple) -> tuple:
    return tuple(x if x > 0 else 0 for x in u)


def _neg_part(u: tuple) -> tuple:
    return tuple(-x if x < 0 else 0 for x in u)


def build_V(r: int, counter_bound: tuple, vec_universe: Iterable[tuple]) -> DCatFragment:
    """Index d-category for r-dimensional vector addition systems.

    Objects pair a vertex-or-vector base with a natural counter; between
    any two counters there is a unique connecting arrow, so hom sets mirror
    the underlying vertex/edge category.  A formorphism enters an edge
    object from the counter raised by the vector's negative part, a
    backmorphism from the counter raised by its positive part.
    """
    counter_bound = tuple(counter_bound)
    if len(counter_bound) != r:
        raise ValueError("counter_bound must have one entry per dimension")
    universe = sorted({tuple(u) for u in vec_universe}, key=skey)
    for u in universe:
        if len(u) != r:
            raise ValueError(f"vector {u} has wrong dimension")

    counters = list(_vectors_upto(counter_bound))
    objects = [ObjId((EMPTY, v)) for v in counters]
    objects += [ObjId((u, v)) for u in universe for v in counters]

    morphisms: list[MorId] = []
    for o in objects:
        morphisms.append(identity(o))
    for v in counters:
        for w in counters:
            if v != w:
                morphisms.append(
                    MorId(ObjId((EMPTY, w)), ObjId((EMPTY, v)), ("v_shift",))
                )
    for u in universe:
        for v in counters:
            tgt = ObjId((u, v))
            for w in counters:
                if v != w:
                    morphisms.append(MorId(ObjId((u, w)), tgt, ("v_shift",)))
                morphisms.append(MorId(ObjId((EMPTY, w)), tgt, ("v_sigma",)))
                morphisms.append(MorId(ObjId((EMPTY, w)), tgt, ("v_tau",)))

    by_ends: dict[tuple[ObjId, ObjId, tuple], MorId] = {
        (m.src, m.tgt, m.tag): m for m in morphisms
    }

    def lookup(src: ObjId, tgt: ObjId, head: str) -> MorId:
        if head in ("v_shift", "id"):
            tag = ("id",) if src == tgt else ("v_shift",)
        else:
            tag = (head,)
        return by_ends[(src, tgt, tag)]

    table: dict[tuple[MorId, MorId], MorId] = {}
    for g in morphisms:
        for f in morphisms:
            if f.tgt != g.src:
                continue
            heads = {g.tag[0], f.tag[0]} - {"id", "v_shift"}
            head = heads.pop() if heads else "v_shift"
            table[(g, f)] = lookup(f.src, g.tgt, head)

    for_set = {identity(o) for o in objects}
    back_set = {identity(o) for o in objects}
    omitted: list[str] = []
    for u in universe:
        for v in counters:
            tgt = ObjId((u, v))
            lo = _vec_add(_neg_part(u), v)
            hi = _vec_add(_pos_part(u), v)
            if _vec_le(lo, counter_bound):
                for_set.add(by_ends[(ObjId((EMPTY, lo)), tgt, ("v_sigma",))])
            else:
                omitted.append(f"for into {tgt} needs counter {lo}")
            if _vec_le(hi, counter_bound):
                back_set.add(by_ends[(ObjId((EMPTY, hi)), tgt, ("v_tau",))])
            else:
                omitted.append(f"back into {tgt} needs counter {hi}")

    return DCatFragment(
        name=f"V_{r}<={list(counter_bound)}",
        objects=tuple(objects),
        morphisms=tuple(morphisms),
        composition=table,
        for_morphisms=frozenset(for_set),
        back_morphisms=frozenset(back_set),
        window=Window(
            kind="V",
            bounds=counter_bound,
            objects_complete=False,
            morphisms_complete=not omitted,
            omitted=tuple(omitted),
        ),
    )
