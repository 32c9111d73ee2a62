"""Paths in fragments and automata, refinement and bounded equivalence.

A path is a node sequence joined by steps: an upstep travels along a
formorphism into a higher cell, a downstep along a backmorphism out of
one, and an I step along an invertible morphism counts as both.  Paths in
an automaton live in its category of elements (nodes are elements); paths
in a fragment have objects as nodes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .dcat import DCatFragment, MorId, ObjId, identity
from .errors import EndpointMismatch, NotComposable, NotInWindow
from .presheaf import Element, PresheafAutomaton, co_act
from .report import ValidationReport

UP, DOWN, BOTH = "S", "T", "I"


def _fragment(ctx) -> DCatFragment:
    return ctx.frag if isinstance(ctx, PresheafAutomaton) else ctx


def _base(node) -> ObjId:
    return node.base if isinstance(node, Element) else node


def _node_key(node):
    return node.key if isinstance(node, Element) else node.key


@dataclass(frozen=True)
class Path:
    """A step sequence; ``len(nodes) == len(shape) + 1``.

    The step at an I component is stored as its forward (formorphism)
    half; the backward half is its inverse.
    """

    shape: str
    nodes: tuple
    steps: tuple[MorId, ...]

    def __post_init__(self):
        if len(self.nodes) != len(self.shape) + 1 or len(self.steps) != len(self.shape):
            raise ValueError("shape, nodes and steps lengths disagree")

    @property
    def src(self):
        return self.nodes[0]

    @property
    def tgt(self):
        return self.nodes[-1]

    def __len__(self):
        return len(self.shape)

    def project(self) -> "Path":
        """Forget the elements, keeping the underlying fragment path."""
        return Path(self.shape, tuple(_base(n) for n in self.nodes), self.steps)

    def state(self):
        return (
            self.shape,
            tuple(str(n) for n in self.nodes),
            tuple(str(s) for s in self.steps),
        )

    def __str__(self):
        out = [str(self.nodes[0])]
        for kind, step, node in zip(self.shape, self.steps, self.nodes[1:]):
            arrow = {UP: "--", DOWN: "~~", BOTH: "=="}[kind]
            out.append(f" {arrow}{step}{arrow}> {node}")
        return "".join(out)


def constant_path(node) -> Path:
    return Path("", (node,), ())


def up_step(node_from, mor: MorId, node_to) -> Path:
    return Path(UP, (node_from, node_to), (mor,))


def down_step(node_from, mor: MorId, node_to) -> Path:
    return Path(DOWN, (node_from, node_to), (mor,))


def validate_path(ctx, path: Path) -> ValidationReport:
    """Check each step's polarity, endpoints, and (for automata) action."""
    report = ValidationReport()
    frag = _fragment(ctx)
    in_auto = isinstance(ctx, PresheafAutomaton)
    inverses = frag.inverses()
    for k, kind in enumerate(path.shape):
        lo, hi, mor = path.nodes[k], path.nodes[k + 1], path.steps[k]
        if kind in (UP, BOTH):
            if not frag.is_for(mor):
                report.add("not-formorphism", k, str(mor))
            if mor.src != _base(lo) or mor.tgt != _base(hi):
                report.add("up-endpoints", k, str(mor))
            elif in_auto:
                try:
                    if ctx.act_morphism(mor, hi) != lo:
                        report.add("up-action", k, str(mor))
                except NotInWindow:
                    report.add("up-window", k, str(mor))
        if kind == DOWN:
            if not frag.is_back(mor):
                report.add("not-backmorphism", k, str(mor))
            if mor.src != _base(hi) or mor.tgt != _base(lo):
                report.add("down-endpoints", k, str(mor))
            elif in_auto:
                try:
                    if ctx.act_morphism(mor, lo) != hi:
                        report.add("down-action", k, str(mor))
                except NotInWindow:
                    report.add("down-window", k, str(mor))
        if kind == BOTH:
            inv = inverses.get(mor)
            if inv is None:
                report.add("not-invertible", k, str(mor))
            elif not frag.is_back(inv):
                report.add("inverse-not-backmorphism", k, str(mor))
    return report


def concat_paths(left: Path, right: Path) -> Path:
    if left.tgt != right.src:
        raise EndpointMismatch(f"{left.tgt} != {right.src}")
    return Path(
        left.shape + right.shape,
        left.nodes + right.nodes[1:],
        left.steps + right.steps,
    )


def steps_of(path: Path) -> list[Path]:
    """The path as a list of one-step paths (empty for constants)."""
    return [
        Path(path.shape[k], (path.nodes[k], path.nodes[k + 1]), (path.steps[k],))
        for k in range(len(path))
    ]


# -- enumeration -------------------------------------------------------------


def _expand_auto(auto: PresheafAutomaton, node: Element, skip_identities: bool):
    """Next steps out of a node: upsteps first, then downsteps, hom order."""
    frag = auto.frag
    out = []
    for mor in frag.for_from(node.base):
        if skip_identities and mor.is_identity:
            continue
        for target in co_act(auto, mor, node):
            out.append((UP, mor, target))
    for mor in frag.back_into(node.base):
        if skip_identities and mor.is_identity:
            continue
        try:
            out.append((DOWN, mor, auto.act_morphism(mor, node)))
        except NotInWindow:
            continue
    return out


def _expand_frag(frag: DCatFragment, obj: ObjId, skip_identities: bool):
    out = []
    for mor in frag.for_from(obj):
        if skip_identities and mor.is_identity:
            continue
        out.append((UP, mor, mor.tgt))
    for mor in frag.back_into(obj):
        if skip_identities and mor.is_identity:
            continue
        out.append((DOWN, mor, mor.src))
    return out


def enumerate_paths(
    auto: PresheafAutomaton,
    sources: Iterable[Element],
    maxlen: int,
    accepting_only: bool = False,
    skip_identities: bool = False,
) -> list[Path]:
    """All valid paths with at most ``maxlen`` steps starting in ``sources``.

    With ``accepting_only`` the sources are intersected with the start
    marks and only paths ending in an accept element are returned.
    Deterministic depth-first order: upsteps before downsteps, morphisms
    in hom order.
    """
    sources = sorted(set(sources), key=lambda e: e.key)
    if accepting_only:
        sources = [e for e in sources if e in auto.start]
    results: list[Path] = []

    def emit(path: Path):
        if not accepting_only or path.tgt in auto.accept:
            results.append(path)

    def walk(path: Path):
        emit(path)
        if len(path) >= maxlen:
            return
        for kind, mor, target in _expand_auto(auto, path.tgt, skip_identities):
            step = Path(kind, (path.tgt, target), (mor,))
            walk(concat_paths(path, step))

    for source in sources:
        walk(constant_path(source))
    return results


def enumerate_fragment_paths(
    frag: DCatFragment,
    sources: Iterable[ObjId] | None = None,
    maxlen: int = 0,
    skip_identities: bool = True,
) -> list[Path]:
    """All fragment paths with at most ``maxlen`` steps from ``sources``."""
    objs = sorted(set(sources), key=lambda o: o.key) if sources else list(frag.objects)
    results: list[Path] = []

    def walk(path: Path):
        results.append(path)
        if len(path) >= maxlen:
            return
        for kind, mor, target in _expand_frag(frag, path.tgt, skip_identities):
            walk(concat_paths(path, Path(kind, (path.tgt, target), (mor,))))

    for obj in objs:
        walk(constant_path(obj))
    return results


def paths_of_shape(auto: PresheafAutomaton, shape_path: Path) -> list[Path]:
    """All paths on the automaton projecting to the given fragment path."""
    frag = auto.frag
    results: list[Path] = []

    def walk(k: int, nodes: tuple):
        if k == len(shape_path):
            results.append(Path(shape_path.shape, nodes, shape_path.steps))
            return
        kind, mor = shape_path.shape[k], shape_path.steps[k]
        current = nodes[-1]
        if kind in (UP, BOTH):
            for nxt in co_act(auto, mor, current):
                walk(k + 1, nodes + (nxt,))
        else:
            try:
                walk(k + 1, nodes + (auto.act_morphism(mor, current),))
            except NotInWindow:
                return

    for start in auto.elements_over(_base(shape_path.src)):
        walk(0, (start,))
    return results


# -- refinement ---------------------------------------------------------------


@dataclass(frozen=True)
class PathMorphism:
    """A basepoints-preserving functor between path domains, as an object map."""

    object_map: tuple[int, ...]


def _hom_composite(frag: DCatFragment, path: Path, p: int, q: int) -> MorId | None:
    """Image under the path of the unique hom p -> q of its thin domain.

    Returns None when the domain hom does not exist (a step would be
    traversed against its arrow without being invertible) or when the
    composite leaves the window.
    """
    if p == q:
        return identity(_base(path.nodes[p]))
    try:
        if p < q:
            word = []
            for l in range(p, q):
                if path.shape[l] not in (UP, BOTH):
                    return None
                word.append(path.steps[l])
            return frag.compose_word(word, _base(path.nodes[p]))
        inverses = frag.inverses()
        word = []
        for l in range(p - 1, q - 1, -1):
            kind = path.shape[l]
            if kind == DOWN:
                word.append(path.steps[l])
            elif kind == BOTH:
                inv = inverses.get(path.steps[l])
                if inv is None:
                    return None
                word.append(inv)
            else:
                return None
        return frag.compose_word(word, _base(path.nodes[p]))
    except (NotComposable, NotInWindow):
        return None


def path_morphisms(source: Path, target: Path, ctx) -> list[PathMorphism]:
    """All basepoints-preserving functors F with source = target∘F.

    Enumerates object maps over the thin codomain chain and checks hom
    existence plus image equality on each generating step.
    """
    frag = _fragment(ctx)
    n, m = len(source), len(target)
    candidates: list[list[int]] = []
    for k in range(n + 1):
        if k == 0:
            allowed = [0] if source.nodes[0] == target.nodes[0] else []
        elif k == n:
            allowed = [m] if source.nodes[n] == target.nodes[m] else []
        else:
            allowed = [j for j in range(m + 1) if target.nodes[j] == source.nodes[k]]
        if not allowed:
            return []
        candidates.append(allowed)

    inverses = frag.inverses()
    found: list[PathMorphism] = []

    def ok_step(k: int, a: int, b: int) -> bool:
        kind, mor = source.shape[k], source.steps[k]
        if kind in (UP, BOTH):
            if _hom_composite(frag, target, a, b) != mor:
                return False
        if kind == DOWN:
            if _hom_composite(frag, target, b, a) != mor:
                return False
        if kind == BOTH:
            inv = inverses.get(mor)
            if inv is None or _hom_composite(frag, target, b, a) != inv:
                return False
        return True

    def assign(k: int, chosen: list[int]):
        if k == n + 1:
            found.append(PathMorphism(tuple(chosen)))
            return
        for j in candidates[k]:
            if k == 0 or ok_step(k - 1, chosen[-1], j):
                assign(k + 1, chosen + [j])

    assign(0, [])
    return found


def refines(sparser: Path, denser: Path, ctx) -> bool:
    """Whether ``sparser`` maps into ``denser`` in the path category."""
    return bool(path_morphisms(sparser, denser, ctx))


# -- bounded equivalence -------------------------------------------------------


def _merge_moves(frag: DCatFragment, path: Path):
    for k in range(len(path) - 1):
        a, b = path.shape[k], path.shape[k + 1]
        try:
            if a in (UP, BOTH) and b in (UP, BOTH):
                comp = frag.compose(path.steps[k + 1], path.steps[k])
                yield _replace(path, k, 2, UP, (comp,), ())
            if a in (DOWN, BOTH) and b in (DOWN, BOTH):
                down_k = _down_half(frag, path, k)
                down_k1 = _down_half(frag, path, k + 1)
                if down_k is not None and down_k1 is not None:
                    comp = frag.compose(down_k, down_k1)
                    yield _replace(path, k, 2, DOWN, (comp,), ())
        except (NotComposable, NotInWindow):
            continue


def _down_half(frag: DCatFragment, path: Path, k: int) -> MorId | None:
    if path.shape[k] == DOWN:
        return path.steps[k]
    return frag.inverses().get(path.steps[k])


def _replace(path: Path, k: int, count: int, shape: str, steps: tuple, mid_nodes: tuple) -> Path:
    return Path(
        path.shape[:k] + shape + path.shape[k + count:],
        path.nodes[: k + 1] + mid_nodes + path.nodes[k + count:],
        path.steps[:k] + steps + path.steps[k + count:],
    )


def _factorizations(frag: DCatFragment):
    table: dict[MorId, list[tuple[MorId, MorId]]] = {}
    for (g, f), gf in frag.composition.items():
        if not g.is_identity and not f.is_identity:
            table.setdefault(gf, []).append((g, f))
    return table


def _split_moves(ctx, frag: DCatFragment, path: Path, factor_table):
    in_auto = isinstance(ctx, PresheafAutomaton)
    for k in range(len(path)):
        kind, mor = path.shape[k], path.steps[k]
        lo, hi = path.nodes[k], path.nodes[k + 1]
        for outer, inner in factor_table.get(mor, ()):
            if kind in (UP, BOTH) and frag.is_for(outer) and frag.is_for(inner):
                if in_auto:
                    try:
                        mid = ctx.act_morphism(outer, hi)
                    except NotInWindow:
                        continue
                else:
                    mid = inner.tgt
                yield _replace(path, k, 1, UP + UP, (inner, outer), (mid,))
            if kind == DOWN and frag.is_back(outer) and frag.is_back(inner):
                # downstep morphism runs hi_base -> lo_base; outer∘inner
                # splits it into lo ~~outer~~> mid ~~inner~~> hi
                if in_auto:
                    try:
                        mid = ctx.act_morphism(outer, lo)
                    except NotInWindow:
                        continue
                else:
                    mid = outer.src
                yield _replace(path, k, 1, DOWN + DOWN, (outer, inner), (mid,))


def _identity_moves(path: Path):
    for p in range(len(path) + 1):
        node = path.nodes[p]
        ident = identity(_base(node))
        for shape in (UP, DOWN):
            yield Path(
                path.shape[:p] + shape + path.shape[p:],
                path.nodes[: p + 1] + (node,) + path.nodes[p + 1:],
                path.steps[:p] + (ident,) + path.steps[p:],
            )
    for k in range(len(path)):
        if path.steps[k].is_identity:
            # endpoints of an identity step coincide; drop one node with it
            yield Path(
                path.shape[:k] + path.shape[k + 1:],
                path.nodes[: k + 1] + path.nodes[k + 2:],
                path.steps[:k] + path.steps[k + 1:],
            )


def _flip_moves(frag: DCatFragment, path: Path):
    inverses = frag.inverses()
    for k in range(len(path)):
        kind, mor = path.shape[k], path.steps[k]
        inv = inverses.get(mor)
        if inv is None:
            continue
        if kind == UP:
            if frag.is_back(inv):
                yield _replace(path, k, 1, DOWN, (inv,), ())
            yield _replace(path, k, 1, BOTH, (mor,), ())
        elif kind == DOWN:
            if frag.is_for(inv):
                yield _replace(path, k, 1, UP, (inv,), ())
                yield _replace(path, k, 1, BOTH, (inv,), ())
        else:
            yield _replace(path, k, 1, UP, (mor,), ())
            if frag.is_back(inv):
                yield _replace(path, k, 1, DOWN, (inv,), ())


YES, NO, UNKNOWN = "YES", "NO", "UNKNOWN"


def path_equivalent(
    left: Path,
    right: Path,
    ctx,
    budget: int = 64,
    max_states: int = 50000,
) -> str:
    """Bounded semi-decision of path equivalence.

    YES when a zigzag of elementary moves (merge or split same-direction
    steps, insert or delete identities, flip invertible steps, in any
    context) connects the paths within ``budget`` applications.  NO when
    the endpoints differ or the spanned track objects are not isomorphic,
    which soundly refutes equivalence.  UNKNOWN otherwise.
    """
    if left.src != right.src or left.tgt != right.tgt:
        return NO
    if left == right:
        return YES

    from .track import canonical_certificate, track_of

    frag = _fragment(ctx)
    try:
        cert_l = canonical_certificate(track_of(left.project(), frag))
        cert_r = canonical_certificate(track_of(right.project(), frag))
        if cert_l != cert_r:
            return NO
    except NotInWindow:
        pass

    max_len = max(len(left), len(right)) + 4
    factor_table = _factorizations(frag)
    goal = right.state()
    seen = {left.state()}
    frontier = deque([(left, 0)])
    while frontier:
        path, depth = frontier.popleft()
        if depth >= budget:
            continue
        moves = []
        moves.extend(_merge_moves(frag, path))
        if len(path) < max_len:
            moves.extend(_split_moves(ctx, frag, path, factor_table))
            moves.extend(_identity_moves(path))
        else:
            moves.extend(m for m in _identity_moves(path) if len(m) < len(path))
        moves.extend(_flip_moves(frag, path))
        for nxt in moves:
            state = nxt.state()
            if state == goal:
                return YES
            if state not in seen and len(seen) < max_states:
                seen.add(state)
                frontier.append((nxt, depth + 1))
    return UNKNOWN
