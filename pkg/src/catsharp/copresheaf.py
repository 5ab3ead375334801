"""Copresheaves on finite categories presented as comonoids."""
from __future__ import annotations

from typing import Callable, Iterable, Iterator

from .comonoid import Comonoid, FinCategory, Functor
from .fincore import DEFAULT_BUDGET, ISO_BUDGET, FinFn, FinSet, InputError, Label, Report, natural_maps, quotient


class Copresheaf:
    """X_C for each object C and, for f out of C, the action X_C -> X_{cod f}.

    `action[C][f]` is a dict from X_C to X_{cod f}.
    """

    def __init__(self, base: Comonoid, at: dict, action: dict, name: str = ""):
        self.base = base
        self.at = {c: tuple(at[c]) for c in base.objects}
        self.action = action
        self.name = name

    def act(self, c: Label, x: Label, f: Label) -> Label:
        return self.action[c][f][x]

    def elements(self) -> list[tuple]:
        return [(c, x) for c in self.base.objects for x in self.at[c]]

    def size(self) -> int:
        return sum(len(v) for v in self.at.values())

    def sizes(self) -> dict:
        return {c: len(self.at[c]) for c in self.base.objects}

    def __repr__(self) -> str:
        return f"<Copresheaf {self.name} {self.sizes()}>"


def copresheaf_from_functions(base: Comonoid, at: dict, act: Callable[[Label, Label, Label], Label],
                              name: str = "") -> Copresheaf:
    action = {c: {f: {x: act(c, x, f) for x in at[c]} for f in base.out(c)} for c in base.objects}
    return Copresheaf(base, at, action, name)


def check_copresheaf(x: Copresheaf) -> Report:
    rep = Report(f"copresheaf {x.name}".strip())
    c = x.base
    for obj in c.objects:
        if len(set(x.at[obj])) != len(x.at[obj]):
            rep.fail(f"duplicate elements over {obj!r}")
        for f in c.out(obj):
            table = x.action.get(obj, {}).get(f)
            target = set(x.at[c.cod(obj, f)])
            if table is None or set(table) != set(x.at[obj]):
                rep.fail(f"action of {f!r} at {obj!r} is not total")
                continue
            for e, img in table.items():
                if img not in target:
                    rep.fail(f"{e!r}·{f!r} = {img!r} is not an element over {c.cod(obj, f)!r}")
    if not rep.ok:
        return rep
    for obj in c.objects:
        ident = c.identity(obj)
        for e in x.at[obj]:
            rep.checked += 1
            if x.act(obj, e, ident) != e:
                rep.fail(f"identity at {obj!r} moves {e!r}")
            for f in c.out(obj):
                b = c.cod(obj, f)
                e2 = x.act(obj, e, f)
                for g in c.out(b):
                    rep.checked += 1
                    if x.act(b, e2, g) != x.act(obj, e, c.compose(obj, f, g)):
                        rep.fail(f"functoriality fails at {e!r} over {obj!r} for {f!r} then {g!r}")
    return rep


def representable(c: Comonoid, obj: Label) -> Copresheaf:
    """Morphisms out of obj, sorted by codomain, acted on by postcomposition."""
    if obj not in set(c.objects):
        raise InputError(f"unknown object {obj!r}")
    at = {d: [f for f in c.out(obj) if c.cod(obj, f) == d] for d in c.objects}
    return copresheaf_from_functions(c, at, lambda d, f, g: c.compose(obj, f, g), f"y^{obj}")


def terminal(c: Comonoid) -> Copresheaf:
    return copresheaf_from_functions(c, {d: ("*",) for d in c.objects}, lambda d, x, f: "*", "1")


def empty(c: Comonoid) -> Copresheaf:
    return copresheaf_from_functions(c, {d: () for d in c.objects}, lambda d, x, f: x, "0")


def product(x: Copresheaf, y: Copresheaf) -> Copresheaf:
    if x.base is not y.base and not x.base.same_as(y.base):
        raise InputError("product of copresheaves over different bases")
    at = {c: [(a, b) for a in x.at[c] for b in y.at[c]] for c in x.base.objects}
    return copresheaf_from_functions(x.base, at, lambda c, e, f: (x.act(c, e[0], f), y.act(c, e[1], f)),
                                     f"{x.name}×{y.name}")


def coproduct(x: Copresheaf, y: Copresheaf) -> Copresheaf:
    at = {c: [(0, a) for a in x.at[c]] + [(1, b) for b in y.at[c]] for c in x.base.objects}
    return copresheaf_from_functions(
        x.base, at, lambda c, e, f: (e[0], (x if e[0] == 0 else y).act(c, e[1], f)), f"{x.name}+{y.name}")


def _search_morphisms(x: Copresheaf, y: Copresheaf, injective: bool, generators: dict | None,
                      budget: int | None) -> Iterator[dict]:
    c = x.base
    gens = generators or {obj: c.out(obj) for obj in c.objects}

    def arrows(el):
        obj, e = el
        return [(f, (c.cod(obj, f), x.act(obj, e, f))) for f in gens[obj]]

    def candidates(el):
        return [(el[0], v) for v in y.at[el[0]]]

    def act(el, f):
        obj, v = el
        return (c.cod(obj, f), y.act(obj, v, f))

    for h in natural_maps(x.elements(), arrows, candidates, act, injective=injective, budget=budget):
        out = {obj: {} for obj in c.objects}
        for (obj, e), (_, v) in h.items():
            out[obj][e] = v
        yield out


def enumerate_copresheaf_morphisms(x: Copresheaf, y: Copresheaf, generators: dict | None = None,
                                   budget: int | None = DEFAULT_BUDGET) -> list[dict]:
    """All natural families {C: {x: y}} in a deterministic order.

    Naturality is imposed along `generators` (morphisms per object) when given, else along all morphisms.
    """
    return list(_search_morphisms(x, y, False, generators, budget))


def check_copresheaf_morphism(x: Copresheaf, y: Copresheaf, h: dict) -> Report:
    rep = Report("copresheaf morphism")
    c = x.base
    for obj in c.objects:
        for e in x.at[obj]:
            v = h.get(obj, {}).get(e)
            if v not in set(y.at[obj]):
                rep.fail(f"{e!r} over {obj!r} has no image")
                continue
            for f in c.out(obj):
                rep.checked += 1
                b = c.cod(obj, f)
                if h[b][x.act(obj, e, f)] != y.act(obj, v, f):
                    rep.fail(f"naturality fails at {e!r} along {f!r}")
    return rep


def find_copresheaf_iso(x: Copresheaf, y: Copresheaf, budget: int | None = ISO_BUDGET) -> dict | None:
    if x.sizes() != y.sizes():
        return None
    for h in _search_morphisms(x, y, True, None, budget):
        return h
    return None


def elements_category(x: Copresheaf) -> tuple[FinCategory, Functor | None]:
    """Objects (C, x); the morphism ((C, x), f) goes to (cod f, x·f).  Also returns the projection
    to the base category when the base comonoid is available as a category."""
    from .comonoid import to_category
    c = x.base
    objects = x.elements()
    out, cod, ident, comp = {}, {}, {}, {}
    for obj, e in objects:
        el = (obj, e)
        out[el] = [(el, f) for f in c.out(obj)]
        ident[el] = (el, c.identity(obj))
        for f in c.out(obj):
            b = c.cod(obj, f)
            target = (b, x.act(obj, e, f))
            cod[(el, f)] = target
            for g in c.out(b):
                comp[((el, f), (target, g))] = (el, c.compose(obj, f, g))
    k = FinCategory(objects, out, cod, ident, comp, f"el({x.name})")
    base = to_category(c)
    tag = _category_tagger(c, base)
    proj = Functor(k, base, {el: el[0] for el in objects}, {m: tag(m[0][0], m[1]) for m in k.morphisms})
    return k, proj


def _category_tagger(c: Comonoid, k: FinCategory) -> Callable[[Label, Label], Label]:
    if set(k.morphisms) == {f for obj in c.objects for f in c.out(obj)}:
        return lambda obj, f: f
    return lambda obj, f: (obj, f)


def colimit_over_elements(x: Copresheaf, assign: Callable[[tuple], Iterable[Label]],
                          transport: Callable[[tuple, Label], dict]) -> tuple[FinSet, FinFn]:
    """Colimit of a functor el(X)^op -> Set.

    `assign((C, x))` is a finite set; `transport((C, x), f)` maps assign((cod f, x·f)) into assign((C, x)).
    The result is Σ assign modulo v ~ transport(v), with the projection from Σ assign.
    """
    c = x.base
    total = [(el, v) for el in x.elements() for v in assign(el)]
    pairs = []
    for el in x.elements():
        obj, e = el
        for f in c.out(obj):
            el2 = (c.cod(obj, f), x.act(obj, e, f))
            t = transport(el, f)
            for v in assign(el2):
                pairs.append(((el2, v), (el, t[v])))
    return quotient(FinSet(total), pairs)


def restrict(x: Copresheaf, base: Comonoid, on_objects: Callable[[Label], Label],
             on_morphisms: Callable[[Label, Label], Label]) -> Copresheaf:
    """X ∘ F for a functor F from `base`; on_morphisms(C, f) is F(f) out of F(C)."""
    at = {obj: x.at[on_objects(obj)] for obj in base.objects}
    return copresheaf_from_functions(base, at, lambda obj, e, f: x.act(on_objects(obj), e, on_morphisms(obj, f)),
                                     f"{x.name}∘F")
