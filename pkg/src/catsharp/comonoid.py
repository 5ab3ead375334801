"""Polynomial comonoids and the finite categories they encode.

A comonoid c has objects c(1); the directions c[C] are the morphisms out of C.
The position part of the comultiplication records codomains, its direction part
records composition, and the counit picks identities.
"""
from __future__ import annotations

from typing import Callable, Iterable

from .fincore import (ISO_BUDGET, InputError, Label, PartialDict, Report, ResourceError, TruncationError,
                      guard)
from .poly import (STAR, Y, Composite, Poly, PolyMorphism, Polynomial, Sum, Tensor, associator, compose_maps,
                   duoidal_comparison, duoidal_sum, first_difference, left_unitor_inv, right_unitor_inv, sum_maps,
                   tensor_left_unitor, tensor_maps, whisker_left, whisker_right)


class FinCategory:
    """A finite category stored as morphisms out of each object.

    `comp[(f, g)]` is the composite "f then g", defined when g leaves cod(f).
    A category built from a truncated construction may leave some composites
    undefined; `partial` marks that case.
    """

    def __init__(self, objects: Iterable[Label], out: dict, cod: dict, identity: dict, comp: dict,
                 name: str = "", partial: bool = False):
        self.objects = tuple(objects)
        self.out = {c: tuple(out[c]) for c in self.objects}
        self.cod = dict(cod)
        self.identity = dict(identity)
        self.comp = dict(comp)
        self.name = name
        self.partial = partial
        self.dom = {}
        for c in self.objects:
            for f in self.out[c]:
                if f in self.dom:
                    raise InputError(f"morphism label {f!r} leaves two objects")
                self.dom[f] = c
        self.morphisms = tuple(f for c in self.objects for f in self.out[c])

    def hom(self, a: Label, b: Label) -> tuple:
        return tuple(f for f in self.out[a] if self.cod[f] == b)

    def into(self, b: Label) -> tuple:
        return tuple(f for f in self.morphisms if self.cod[f] == b)

    def then(self, f: Label, g: Label) -> Label:
        try:
            return self.comp[(f, g)]
        except KeyError:
            if self.cod[f] != self.dom[g]:
                raise InputError(f"{f!r} and {g!r} are not composable") from None
            raise TruncationError(f"composite of {f!r} and {g!r} is outside the truncation") from None

    def composable_pairs(self) -> Iterable[tuple]:
        for f in self.morphisms:
            for g in self.out[self.cod[f]]:
                yield f, g

    def is_iso(self, f: Label) -> bool:
        a, b = self.dom[f], self.cod[f]
        return any(self.comp.get((f, g)) == self.identity[a] and self.comp.get((g, f)) == self.identity[b]
                   for g in self.hom(b, a))

    def hom_counts(self) -> dict:
        return {(a, b): len(self.hom(a, b)) for a in self.objects for b in self.objects}

    def __eq__(self, other) -> bool:
        return (isinstance(other, FinCategory) and self.objects == other.objects and self.out == other.out
                and self.cod == other.cod and self.identity == other.identity and self.comp == other.comp)

    __hash__ = None

    def __repr__(self) -> str:
        return f"<FinCategory {self.name or ''} {len(self.objects)} objects, {len(self.morphisms)} morphisms>"


def check_category(k: FinCategory) -> Report:
    rep = Report(f"category {k.name}".strip())
    for c in k.objects:
        i = k.identity.get(c)
        if i not in k.out[c] or k.cod.get(i) != c:
            rep.fail(f"identity of {c!r} is not an endomorphism of {c!r}")
    for f in k.morphisms:
        if k.cod.get(f) not in k.out:
            rep.fail(f"codomain of {f!r} is not an object")
    if not rep.ok:
        return rep
    for f, g in k.composable_pairs():
        h = k.comp.get((f, g))
        if h is None:
            if k.partial:
                rep.skipped.append((f, g))
                continue
            rep.fail(f"composite of {f!r} then {g!r} missing")
            continue
        rep.checked += 1
        if k.dom.get(h) != k.dom[f] or k.cod.get(h) != k.cod[g]:
            rep.fail(f"composite {f!r};{g!r} = {h!r} has wrong ends")
    for f in k.morphisms:
        a, b = k.dom[f], k.cod[f]
        if k.comp.get((k.identity[a], f)) != f:
            rep.fail(f"left identity law fails at {f!r}")
        if k.comp.get((f, k.identity[b])) != f:
            rep.fail(f"right identity law fails at {f!r}")
    if not rep.ok:
        return rep
    # labels can be deeply nested tuples, so the triple loop runs on integer indices
    mors = k.morphisms
    index = {f: n for n, f in enumerate(mors)}
    comp = {(index[f], index[g]): index[h] for (f, g), h in k.comp.items()}
    after = [[index[g] for g in k.out[k.cod[f]]] for f in mors]
    for f in range(len(mors)):
        for g in after[f]:
            fg = comp.get((f, g))
            for h in after[g]:
                gh = comp.get((g, h))
                if fg is None or gh is None:
                    rep.skipped.append((mors[f], mors[g], mors[h]))
                    continue
                left, right = comp.get((fg, h)), comp.get((f, gh))
                if left is None or right is None:
                    if left != right:
                        rep.fail(f"associativity definedness differs at {mors[f]!r},{mors[g]!r},{mors[h]!r}")
                    else:
                        rep.skipped.append((mors[f], mors[g], mors[h]))
                    continue
                rep.checked += 1
                if left != right:
                    rep.fail(f"associativity fails at {mors[f]!r},{mors[g]!r},{mors[h]!r}: "
                             f"{mors[left]!r} != {mors[right]!r}")
    return rep


def category_from_homs(objects: Iterable[Label], morphisms: Iterable[tuple[Label, Label, Label]],
                       identity: dict, comp: dict, name: str = "") -> FinCategory:
    """Build from a list of (label, dom, cod)."""
    objects = tuple(objects)
    out = {c: [] for c in objects}
    cod = {}
    for f, a, b in morphisms:
        if a not in out or b not in out:
            raise InputError(f"morphism {f!r} has an unknown end")
        out[a].append(f)
        cod[f] = b
    return FinCategory(objects, out, cod, identity, comp, name)


def preorder_category(objects: Iterable[Label], leq: Callable[[Label, Label], bool],
                      label: Callable[[Label, Label], Label], name: str = "") -> FinCategory:
    objects = tuple(objects)
    mors = [(label(a, b), a, b) for a in objects for b in objects if leq(a, b)]
    ident = {a: label(a, a) for a in objects}
    comp = {}
    for (f, a, b) in mors:
        for (g, b2, c) in mors:
            if b2 == b:
                comp[(f, g)] = label(a, c)
    return category_from_homs(objects, mors, ident, comp, name)


def monoid_category(elements: Iterable[Label], mult: Callable[[Label, Label], Label], unit: Label,
                    name: str = "", obj: Label = STAR) -> FinCategory:
    """One-object category; `mult(f, g)` is "f then g"."""
    elements = tuple(elements)
    comp = {(f, g): mult(f, g) for f in elements for g in elements}
    return FinCategory((obj,), {obj: elements}, {f: obj for f in elements}, {obj: unit}, comp, name)


class Comonoid:
    """A polynomial with counit c -> y and comultiplication c -> c ◁ c."""

    def __init__(self, carrier: Polynomial, counit: PolyMorphism, comult: PolyMorphism, name: str = ""):
        self.carrier = carrier
        self.counit = counit
        self.comult = comult
        self.name = name
        self._cod: dict = {}

    @property
    def objects(self) -> tuple:
        return self.carrier.positions()

    def out(self, c: Label) -> tuple:
        return self.carrier.directions(c)

    def cod(self, c: Label, f: Label) -> Label:
        try:
            table = self._cod[c]
        except KeyError:
            _, js = self.comult.pos(c)
            table = self._cod[c] = dict(zip(self.out(c), js))
        return table[f]

    def identity(self, c: Label) -> Label:
        return self.counit.back(c, STAR)

    def compose(self, c: Label, f: Label, g: Label) -> Label:
        """f out of c, then g out of cod f."""
        try:
            return self.comult.back(c, (f, g))
        except KeyError:
            raise TruncationError(f"composite of {f!r} and {g!r} at {c!r} undefined") from None

    def morphism_count(self) -> int:
        return self.carrier.total_directions()

    def same_as(self, other: Comonoid) -> bool:
        if self is other:
            return True
        if not self.carrier.same_as(other.carrier):
            return False
        for c in self.objects:
            if self.identity(c) != other.identity(c):
                return False
            for f in self.out(c):
                if self.cod(c, f) != other.cod(c, f):
                    return False
                for g in self.out(self.cod(c, f)):
                    if self.compose(c, f, g) != other.compose(c, f, g):
                        return False
        return True

    def __eq__(self, other) -> bool:
        return isinstance(other, Comonoid) and self.same_as(other)

    __hash__ = None

    def __repr__(self) -> str:
        return f"<Comonoid {self.name or ''} {self.carrier.describe()}>"


def comonoid_from_tables(objects: Iterable[Label], out: dict, cod: Callable[[Label, Label], Label],
                         identity: Callable[[Label], Label], compose: Callable[[Label, Label, Label], Label],
                         name: str = "") -> Comonoid:
    """Assemble counit and comultiplication from category data (morphisms addressed per object)."""
    objects = tuple(objects)
    carrier = Poly({c: tuple(out[c]) for c in objects})
    cc = Composite(carrier, carrier)
    counit = PolyMorphism(carrier, Y, lambda c: STAR, lambda c: {STAR: identity(c)}, "ε")

    def comult_pos(c):
        return (c, tuple(cod(c, f) for f in carrier.directions(c)))

    def comult_dirs(c):
        table = PartialDict()
        for f in carrier.directions(c):
            for g in carrier.directions(cod(c, f)):
                try:
                    table[(f, g)] = compose(c, f, g)
                except TruncationError:
                    pass
        return table

    comult = PolyMorphism(carrier, cc, comult_pos, comult_dirs, "δ")
    return Comonoid(carrier, counit, comult, name)


def compare(rep: Report, law: str, f: PolyMorphism, g: PolyMorphism, positions=None) -> None:
    """Record whether two parallel maps agree, position by position."""
    for i in (f.src.positions() if positions is None else positions):
        try:
            diff = first_difference(f, g, [i])
        except TruncationError:
            rep.skipped.append((law, i))
            continue
        rep.checked += 1
        if diff is not None:
            rep.fail(f"{law} fails at position {diff[0]!r}, direction {diff[1]!r}: {diff[2]!r} != {diff[3]!r}")


def check_comonoid(c: Comonoid) -> Report:
    rep = Report(f"comonoid {c.name}".strip())
    for problem in c.counit.check() + c.comult.check():
        rep.fail(f"ill-formed structure map: {problem}")
    if not rep.ok:
        return rep
    p = c.carrier
    compare(rep, "left counit", c.comult.then(whisker_right(c.counit, p)), left_unitor_inv(p))
    compare(rep, "right counit", c.comult.then(whisker_left(p, c.counit)), right_unitor_inv(p))
    lhs = c.comult.then(whisker_right(c.comult, p)).then(associator(p, p, p))
    rhs = c.comult.then(whisker_left(p, c.comult))
    compare(rep, "coassociativity", lhs, rhs)
    return rep


def from_category(k: FinCategory, name: str = "") -> Comonoid:
    rep = check_category(k)
    if not rep.ok:
        raise InputError(f"not a category: {rep.violations[0]}")
    return comonoid_from_tables(k.objects, k.out, lambda c, f: k.cod[f], lambda c: k.identity[c],
                                lambda c, f, g: k.then(f, g), name or k.name)


def to_category(c: Comonoid, name: str = "") -> FinCategory:
    """Morphisms keep their direction labels when these are globally distinct, else become (C, f)."""
    labels = [f for obj in c.objects for f in c.out(obj)]
    if len(set(labels)) == len(labels):
        tag = lambda obj, f: f
    else:
        tag = lambda obj, f: (obj, f)
    out, cod, ident, comp = {}, {}, {}, {}
    partial = False
    for obj in c.objects:
        out[obj] = [tag(obj, f) for f in c.out(obj)]
        ident[obj] = tag(obj, c.identity(obj))
        for f in c.out(obj):
            b = c.cod(obj, f)
            cod[tag(obj, f)] = b
            for g in c.out(b):
                try:
                    comp[(tag(obj, f), tag(b, g))] = tag(obj, c.compose(obj, f, g))
                except TruncationError:
                    partial = True
    return FinCategory(c.objects, out, cod, ident, comp, name or c.name, partial)


# -- cofunctors ---------------------------------------------------------------

class Cofunctor:
    def __init__(self, src: Comonoid, dst: Comonoid, underlying: PolyMorphism):
        self.src, self.dst, self.underlying = src, dst, underlying

    @classmethod
    def from_tables(cls, src: Comonoid, dst: Comonoid, on_objects: dict, lift: dict) -> Cofunctor:
        """lift[C][g] is the morphism out of C lifting g out of on_objects[C]."""
        m = PolyMorphism.from_tables(src.carrier, dst.carrier, on_objects, lift)
        return cls(src, dst, m)


def check_cofunctor(phi: Cofunctor) -> Report:
    """Counit and comultiplication squares as equalities of polynomial maps."""
    rep = Report("cofunctor")
    m = phi.underlying
    for problem in m.check():
        rep.fail(f"ill-formed: {problem}")
    if not rep.ok:
        return rep
    compare(rep, "counit", m.then(phi.dst.counit), phi.src.counit)
    lhs = m.then(phi.dst.comult)
    rhs = phi.src.comult.then(compose_maps(m, m))
    compare(rep, "comultiplication", lhs, rhs)
    return rep


def check_cofunctor_pointwise(phi: Cofunctor) -> Report:
    """Identities, codomains and composites preserved, checked element by element."""
    rep = Report("cofunctor (pointwise)")
    c, d, m = phi.src, phi.dst, phi.underlying
    for obj in c.objects:
        image = m.pos(obj)
        if image not in set(d.objects):
            rep.fail(f"object {obj!r} sent to non-object {image!r}")
            continue
        lift = m.dirs(obj)
        if lift.get(d.identity(image)) != c.identity(obj):
            rep.fail(f"identity at {obj!r} not preserved")
        for g in d.out(image):
            f = lift.get(g)
            if f not in set(c.out(obj)):
                rep.fail(f"lift of {g!r} at {obj!r} is not a morphism out of {obj!r}")
                continue
            rep.checked += 1
            target = c.cod(obj, f)
            if m.pos(target) != d.cod(image, g):
                rep.fail(f"codomain of lift of {g!r} at {obj!r} not preserved")
                continue
            for h in d.out(d.cod(image, g)):
                if m.dirs(obj).get(d.compose(image, g, h)) != c.compose(obj, f, m.dirs(target).get(h)):
                    rep.fail(f"composite {g!r};{h!r} at {obj!r} not preserved")
    return rep


def identity_cofunctor(c: Comonoid) -> Cofunctor:
    from .poly import identity
    return Cofunctor(c, c, identity(c.carrier))


# -- basic comonoids ----------------------------------------------------------

def discrete(objects: Iterable[Label], name: str = "") -> Comonoid:
    """Ay with its unique comonoid structure; the identity of a is labelled ('id', a)."""
    objects = tuple(objects)
    return comonoid_from_tables(objects, {a: (("id", a),) for a in objects}, lambda a, f: a,
                                lambda a: ("id", a), lambda a, f, g: ("id", a), name)


def zero_comonoid() -> Comonoid:
    return discrete((), "0")


def unit_comonoid() -> Comonoid:
    """The comonoid y: one object, one morphism."""
    return Comonoid(Y, PolyMorphism(Y, Y, lambda c: STAR, lambda c: {STAR: STAR}, "ε"),
                    PolyMorphism(Y, Composite(Y, Y), lambda c: (STAR, (STAR,)),
                                 lambda c: {(STAR, STAR): STAR}, "δ"), "y")


def is_discrete(c: Comonoid) -> bool:
    return all(len(c.out(obj)) == 1 for obj in c.objects)


def tensor_comonoid(c: Comonoid, d: Comonoid) -> Comonoid:
    """Comonoid on c ⊗ d: counit via y ⊗ y ≅ y, comultiplication via the duoidal interchange."""
    carrier = Tensor(c.carrier, d.carrier)
    counit = tensor_maps(c.counit, d.counit).then(tensor_left_unitor(Y))
    comult = tensor_maps(c.comult, d.comult).then(duoidal_comparison(c.carrier, c.carrier, d.carrier, d.carrier))
    return Comonoid(carrier, counit, comult, f"{c.name}⊗{d.name}")


def coproduct_comonoid(c: Comonoid, d: Comonoid) -> Comonoid:
    carrier = Sum(c.carrier, d.carrier)
    fold = PolyMorphism(Sum(Y, Y), Y, lambda pos: STAR, lambda pos: {STAR: STAR}, "fold")
    counit = sum_maps(c.counit, d.counit).then(fold)
    comult = sum_maps(c.comult, d.comult).then(duoidal_sum(c.carrier, c.carrier, d.carrier, d.carrier))
    return Comonoid(carrier, counit, comult, f"{c.name}+{d.name}")


def product_category(k: FinCategory, l: FinCategory) -> FinCategory:
    objects = [(a, b) for a in k.objects for b in l.objects]
    out = {(a, b): [(f, g) for f in k.out[a] for g in l.out[b]] for a, b in objects}
    cod = {(f, g): (k.cod[f], l.cod[g]) for f in k.morphisms for g in l.morphisms}
    ident = {(a, b): (k.identity[a], l.identity[b]) for a, b in objects}
    comp = {}
    for f1, f2 in k.composable_pairs():
        for g1, g2 in l.composable_pairs():
            comp[((f1, g1), (f2, g2))] = (k.comp[(f1, f2)], l.comp[(g1, g2)])
    return FinCategory(objects, out, cod, ident, comp, f"{k.name}×{l.name}")


def coproduct_category(k: FinCategory, l: FinCategory) -> FinCategory:
    objects = [(0, a) for a in k.objects] + [(1, b) for b in l.objects]
    out = {(0, a): [(0, f) for f in k.out[a]] for a in k.objects}
    out.update({(1, b): [(1, g) for g in l.out[b]] for b in l.objects})
    cod = {(0, f): (0, k.cod[f]) for f in k.morphisms}
    cod.update({(1, g): (1, l.cod[g]) for g in l.morphisms})
    ident = {(0, a): (0, k.identity[a]) for a in k.objects}
    ident.update({(1, b): (1, l.identity[b]) for b in l.objects})
    comp = {((0, f), (0, g)): (0, h) for (f, g), h in k.comp.items()}
    comp.update({((1, f), (1, g)): (1, h) for (f, g), h in l.comp.items()})
    return FinCategory(objects, out, cod, ident, comp, f"{k.name}+{l.name}")


def opposite_category(k: FinCategory) -> FinCategory:
    out = {b: [f for f in k.morphisms if k.cod[f] == b] for b in k.objects}
    cod = {f: k.dom[f] for f in k.morphisms}
    comp = {}
    for (f, g), h in k.comp.items():
        comp[(g, f)] = h
    return FinCategory(k.objects, out, cod, k.identity, comp, f"{k.name}^op", k.partial)


def opposite_direct(c: Comonoid) -> Comonoid:
    return from_category(opposite_category(to_category(c)), f"{c.name}^op")


# -- functors and isomorphisms of categories ---------------------------------

class Functor:
    def __init__(self, src: FinCategory, dst: FinCategory, on_objects: dict, on_morphisms: dict):
        self.src, self.dst = src, dst
        self.on_objects, self.on_morphisms = dict(on_objects), dict(on_morphisms)


def check_functor(F: Functor) -> Report:
    rep = Report("functor")
    k, l = F.src, F.dst
    for f in k.morphisms:
        g = F.on_morphisms.get(f)
        if g not in l.dom:
            rep.fail(f"{f!r} has no image morphism")
            continue
        if l.dom[g] != F.on_objects.get(k.dom[f]) or l.cod[g] != F.on_objects.get(k.cod[f]):
            rep.fail(f"image of {f!r} has wrong ends")
    if not rep.ok:
        return rep
    for a in k.objects:
        if F.on_morphisms[k.identity[a]] != l.identity[F.on_objects[a]]:
            rep.fail(f"identity of {a!r} not preserved")
    for (f, g), h in k.comp.items():
        rep.checked += 1
        image = l.comp.get((F.on_morphisms[f], F.on_morphisms[g]))
        if image is None and l.partial:
            rep.skipped.append((f, g))
            continue
        if image != F.on_morphisms[h]:
            rep.fail(f"composite {f!r};{g!r} not preserved")
    return rep


def check_isomorphism(F: Functor) -> Report:
    """Functor that is bijective on objects and morphisms, with composites defined in matching places."""
    rep = check_functor(F)
    k, l = F.src, F.dst
    if sorted(map(repr, F.on_objects.values())) != sorted(map(repr, l.objects)) or len(set(F.on_objects.values())) != len(l.objects):
        rep.fail("not bijective on objects")
    images = [F.on_morphisms.get(f) for f in k.morphisms]
    if len(set(images)) != len(images) or set(images) != set(l.morphisms):
        rep.fail("not bijective on morphisms")
    if not rep.ok:
        return rep
    inv = {g: f for f, g in F.on_morphisms.items()}
    for (g1, g2), g3 in l.comp.items():
        if (inv[g1], inv[g2]) not in k.comp:
            rep.fail(f"composite {g1!r};{g2!r} defined only in the target")
    return rep


def _morphism_signature(k: FinCategory, f: Label) -> tuple:
    a, b = k.dom[f], k.cod[f]
    idem = k.comp.get((f, f)) == f if a == b else None
    post = sorted(repr(len([g for g in k.out[b] if k.comp.get((f, g)) is not None])) for _ in [0])
    return (f == k.identity[a], idem, k.is_iso(f), tuple(post))


def _object_signature(k: FinCategory, a: Label) -> tuple:
    return (len(k.out[a]), len(k.into(a)), len(k.hom(a, a)))


def find_category_iso(k: FinCategory, l: FinCategory, budget: int = ISO_BUDGET) -> Functor | None:
    """Backtracking search for an isomorphism of categories, pruned by object and morphism invariants."""
    if len(k.objects) != len(l.objects) or len(k.morphisms) != len(l.morphisms):
        return None
    if k == l:
        return Functor(k, l, {a: a for a in k.objects}, {f: f for f in k.morphisms})
    osig_l = {b: _object_signature(l, b) for b in l.objects}
    msig_l = {g: _morphism_signature(l, g) for g in l.morphisms}
    msig_k = {f: _morphism_signature(k, f) for f in k.morphisms}
    nodes = [0]

    def object_maps(i: int, obj: dict, used: set):
        if i == len(k.objects):
            yield dict(obj)
            return
        a = k.objects[i]
        sig = _object_signature(k, a)
        for b in l.objects:
            if b in used or osig_l[b] != sig:
                continue
            nodes[0] += 1
            guard(nodes[0], budget, "category isomorphism search nodes")
            ok = all(len(k.hom(a, a2)) == len(l.hom(b, obj[a2])) and len(k.hom(a2, a)) == len(l.hom(obj[a2], b))
                     for a2 in obj)
            if ok and len(k.hom(a, a)) == len(l.hom(b, b)):
                obj[a] = b
                used.add(b)
                yield from object_maps(i + 1, obj, used)
                del obj[a]
                used.discard(b)

    def extend(mor: dict, used: set, f: Label, g: Label, obj: dict) -> bool:
        stack = [(f, g)]
        while stack:
            f1, g1 = stack.pop()
            if f1 in mor:
                if mor[f1] != g1:
                    return False
                continue
            if g1 in used or msig_k[f1] != msig_l[g1]:
                return False
            if l.dom[g1] != obj[k.dom[f1]] or l.cod[g1] != obj[k.cod[f1]]:
                return False
            mor[f1] = g1
            used.add(g1)
            for f2 in list(mor):
                for x, y in ((f1, f2), (f2, f1)):
                    h = k.comp.get((x, y))
                    if h is not None:
                        image = l.comp.get((mor[x], mor[y]))
                        if image is None:
                            return False
                        stack.append((h, image))
                    elif k.cod[x] == k.dom[y] and l.comp.get((mor[x], mor[y])) is not None:
                        return False
        return True

    def morphism_maps(obj: dict, mor: dict, used: set):
        pending = [f for f in k.morphisms if f not in mor]
        if not pending:
            yield dict(mor)
            return
        f = pending[0]
        for g in l.hom(obj[k.dom[f]], obj[k.cod[f]]):
            if g in used:
                continue
            nodes[0] += 1
            guard(nodes[0], budget, "category isomorphism search nodes")
            mor2, used2 = dict(mor), set(used)
            if extend(mor2, used2, f, g, obj):
                yield from morphism_maps(obj, mor2, used2)

    try:
        for obj in object_maps(0, {}, set()):
            mor, used = {}, set()
            ok = True
            for a in k.objects:
                ok = ok and extend(mor, used, k.identity[a], l.identity[obj[a]], obj)
            if not ok:
                continue
            for mor_full in morphism_maps(obj, mor, used):
                F = Functor(k, l, obj, mor_full)
                if check_isomorphism(F).ok:
                    return F
    except ResourceError:
        raise
    return None
