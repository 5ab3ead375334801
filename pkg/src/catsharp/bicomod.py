"""Bicomodules between polynomial comonoids and their calculus.

A (c, d)-bicomodule p has a left coaction p -> c ◁ p and a right coaction
p -> p ◁ d.  Elementwise, each position I lies over an object base(I) of c and
is moved by morphisms k out of it to act(I, k), with directions pulled back by
transport(I, k); each direction a of I is typed by an object dtype(I, a) of d
and moved by g out of that object to ract(I, a, g).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .comonoid import Comonoid, compare, discrete, is_discrete
from .copresheaf import Copresheaf, copresheaf_from_functions
from .fincore import (DEFAULT_BUDGET, ISO_BUDGET, FinFn, FinSet, InputError, Label, Memo, Report, UnionFind, guard,
                      natural_maps)
from .poly import (Composite, Poly, PolyMorphism, Polynomial, associator, associator_inv,
                   left_unitor_inv, right_unitor_inv, whisker_left, whisker_right)


class Bicomodule:
    def __init__(self, left: Comonoid, right: Comonoid, carrier: Polynomial, lcoaction: PolyMorphism,
                 rcoaction: PolyMorphism, name: str = ""):
        self.left, self.right, self.carrier = left, right, carrier
        self.lcoaction, self.rcoaction = lcoaction, rcoaction
        self.name = name
        self._transport: dict = {}

    # -- elementwise views --------------------------------------------------
    def positions(self) -> tuple:
        return self.carrier.positions()

    def directions(self, i: Label) -> tuple:
        return self.carrier.directions(i)

    def base(self, i: Label) -> Label:
        return self.lcoaction.pos(i)[0]

    def over(self, obj: Label) -> list:
        return [i for i in self.positions() if self.base(i) == obj]

    def act(self, i: Label, k: Label) -> Label:
        c, js = self.lcoaction.pos(i)
        return js[self.left.carrier.dir_index(c)[k]]

    def transport(self, i: Label, k: Label) -> dict:
        """Directions of act(i, k) sent back to directions of i."""
        key = (i, k)
        try:
            return self._transport[key]
        except KeyError:
            back = self.lcoaction.dirs(i)
            t = self._transport[key] = {a: back[(k, a)] for a in self.directions(self.act(i, k))}
            return t

    def dtype(self, i: Label, a: Label) -> Label:
        return self.rcoaction.pos(i)[1][self.carrier.dir_index(i)[a]]

    def ract(self, i: Label, a: Label, g: Label) -> Label:
        return self.rcoaction.dirs(i)[(a, g)]

    def direction_copresheaf(self, i: Label) -> Copresheaf:
        """p[I] as a copresheaf on the right base."""
        d = self.right
        at = {obj: [a for a in self.directions(i) if self.dtype(i, a) == obj] for obj in d.objects}
        return copresheaf_from_functions(d, at, lambda obj, a, g: self.ract(i, a, g), f"{self.name}[{i!r}]")

    def __repr__(self) -> str:
        return f"<Bicomodule {self.name} ({self.left.name},{self.right.name}) {self.carrier.describe()}>"


def from_actions(left: Comonoid, right: Comonoid, carrier: Polynomial,
                 base: Callable[[Label], Label], act: Callable[[Label, Label], Label],
                 transport: Callable[[Label, Label], dict], dtype: Callable[[Label, Label], Label],
                 ract: Callable[[Label, Label, Label], Label], name: str = "") -> Bicomodule:
    """Assemble both coactions from the elementwise description."""
    def lpos(i):
        c = base(i)
        return (c, tuple(act(i, k) for k in left.out(c)))

    def ldirs(i):
        c = base(i)
        out = {}
        for k in left.out(c):
            for a2, a in transport(i, k).items():
                out[(k, a2)] = a
        return out

    def rpos(i):
        return (i, tuple(dtype(i, a) for a in carrier.directions(i)))

    def rdirs(i):
        out = {}
        for a in carrier.directions(i):
            for g in right.out(dtype(i, a)):
                out[(a, g)] = ract(i, a, g)
        return out

    lam = PolyMorphism(carrier, Composite(left.carrier, carrier), lpos, ldirs, "λ")
    rho = PolyMorphism(carrier, Composite(carrier, right.carrier), rpos, rdirs, "ρ")
    return Bicomodule(left, right, carrier, lam, rho, name)


def check_bicomodule(b: Bicomodule) -> Report:
    """Both comodule laws on each side and the compatibility of the two coactions."""
    rep = Report(f"bicomodule {b.name}".strip())
    c, d, p = b.left.carrier, b.right.carrier, b.carrier
    for problem in b.lcoaction.check() + b.rcoaction.check():
        rep.fail(f"ill-formed coaction: {problem}")
    if not rep.ok:
        return rep
    lam, rho = b.lcoaction, b.rcoaction
    compare(rep, "left counit", lam.then(whisker_right(b.left.counit, p)), left_unitor_inv(p))
    compare(rep, "left coassociativity", lam.then(whisker_left(c, lam)),
            lam.then(whisker_right(b.left.comult, p)).then(associator(c, c, p)))
    compare(rep, "right counit", rho.then(whisker_left(p, b.right.counit)), right_unitor_inv(p))
    compare(rep, "right coassociativity", rho.then(whisker_right(rho, d)).then(associator(p, d, d)),
            rho.then(whisker_left(p, b.right.comult)))
    compare(rep, "compatibility", lam.then(whisker_left(c, rho)),
            rho.then(whisker_right(lam, d)).then(associator(c, p, d)))
    return rep


def identity_bicomodule(c: Comonoid) -> Bicomodule:
    return Bicomodule(c, c, c.carrier, c.comult, c.comult, f"id_{c.name}")


# -- morphisms ---------------------------------------------------------------

class BicomoduleMorphism:
    def __init__(self, src: Bicomodule, dst: Bicomodule, underlying: PolyMorphism):
        self.src, self.dst, self.underlying = src, dst, underlying

    def pos(self, i: Label) -> Label:
        return self.underlying.pos(i)

    def dirs(self, i: Label) -> dict:
        return self.underlying.dirs(i)

    def then(self, other: BicomoduleMorphism) -> BicomoduleMorphism:
        return BicomoduleMorphism(self.src, other.dst, self.underlying.then(other.underlying))

    def __eq__(self, other) -> bool:
        return isinstance(other, BicomoduleMorphism) and self.underlying == other.underlying

    __hash__ = None


def bicomodule_morphism(src: Bicomodule, dst: Bicomodule, on_pos: Callable, on_dirs: Callable,
                        name: str = "") -> BicomoduleMorphism:
    return BicomoduleMorphism(src, dst, PolyMorphism(src.carrier, dst.carrier, on_pos, on_dirs, name))


def identity_morphism(b: Bicomodule) -> BicomoduleMorphism:
    return bicomodule_morphism(b, b, lambda i: i, lambda i: {a: a for a in b.directions(i)}, "id")


def check_bicomodule_morphism(m: BicomoduleMorphism) -> Report:
    rep = Report("bicomodule morphism")
    g = m.underlying
    for problem in g.check():
        rep.fail(f"ill-formed: {problem}")
    if not rep.ok:
        return rep
    s, t = m.src, m.dst
    compare(rep, "left square", g.then(t.lcoaction), s.lcoaction.then(whisker_left(s.left.carrier, g)))
    compare(rep, "right square", g.then(t.rcoaction), s.rcoaction.then(whisker_right(g, s.right.carrier)))
    return rep


def _position_signature(b: Bicomodule, i: Label) -> tuple:
    types = sorted(repr(b.dtype(i, a)) for a in b.directions(i))
    return (b.base(i), len(b.directions(i)), tuple(types))


def _bicomodule_maps(p: Bicomodule, q: Bicomodule, injective: bool, budget: int | None) -> Iterator[BicomoduleMorphism]:
    """All bicomodule morphisms p -> q, or only isomorphisms when `injective`."""
    c = p.left
    q_by_base: dict = {}
    for j in q.positions():
        q_by_base.setdefault(q.base(j), []).append(j)
    if injective:
        sig = {j: _position_signature(q, j) for j in q.positions()}

    def pos_candidates(i):
        pool = q_by_base.get(p.base(i), [])
        if injective:
            s = _position_signature(p, i)
            return [j for j in pool if sig[j] == s]
        return pool

    def pos_arrows(i):
        return [(k, p.act(i, k)) for k in c.out(p.base(i))]

    for sigma in natural_maps(p.positions(), pos_arrows, pos_candidates, lambda j, k: q.act(j, k),
                              injective=injective, budget=budget):
        if injective and len(sigma) != len(q.positions()):
            continue
        # directions: elements (i, b) with b a direction of sigma(i), sent to (i, a) with a a direction of i
        elements = [(i, bq) for i in p.positions() for bq in q.directions(sigma[i])]
        incoming: dict = {}
        for i in p.positions():
            for k in c.out(p.base(i)):
                j = p.act(i, k)
                for b2, b1 in q.transport(sigma[i], k).items():
                    incoming.setdefault((j, b2), []).append((("L", i, k), (i, b1)))

        def arrows(el, sigma=sigma, incoming=incoming):
            i, bq = el
            out = [(("R", g), (i, q.ract(sigma[i], bq, g))) for g in p.right.out(q.dtype(sigma[i], bq))]
            return out + incoming.get(el, [])

        def candidates(el, sigma=sigma):
            i, bq = el
            t = q.dtype(sigma[i], bq)
            return [(i, a) for a in p.directions(i) if p.dtype(i, a) == t]

        def act(image, label):
            j, a = image
            if label[0] == "R":
                return (j, p.ract(j, a, label[1]))
            _, i, k = label
            return (i, p.transport(i, k)[a])

        for beta in natural_maps(elements, arrows, candidates, act, injective=injective, budget=budget):
            pos = dict(sigma)
            dirs = {i: {} for i in p.positions()}
            for (i, bq), (_, a) in beta.items():
                dirs[i][bq] = a
            yield BicomoduleMorphism(p, q, PolyMorphism.from_tables(p.carrier, q.carrier, pos, dirs))


def enumerate_bicomodule_morphisms(p: Bicomodule, q: Bicomodule, budget: int | None = DEFAULT_BUDGET) -> list:
    return list(_bicomodule_maps(p, q, False, budget))


def find_bicomodule_iso(p: Bicomodule, q: Bicomodule, budget: int | None = ISO_BUDGET) -> BicomoduleMorphism | None:
    if len(p.positions()) != len(q.positions()) or p.carrier.arities() != q.carrier.arities():
        return None
    for m in _bicomodule_maps(p, q, True, budget):
        return m
    return None


def same_bicomodule(p: Bicomodule, q: Bicomodule) -> bool:
    """Identical labels and identical action tables."""
    if set(p.positions()) != set(q.positions()):
        return False
    for i in p.positions():
        if p.base(i) != q.base(i) or set(p.directions(i)) != set(q.directions(i)):
            return False
        for k in p.left.out(p.base(i)):
            if p.act(i, k) != q.act(i, k) or p.transport(i, k) != q.transport(i, k):
                return False
        for a in p.directions(i):
            if p.dtype(i, a) != q.dtype(i, a):
                return False
            for g in p.right.out(p.dtype(i, a)):
                if p.ract(i, a, g) != q.ract(i, a, g):
                    return False
    return True


def isomorphic(p: Bicomodule, q: Bicomodule, budget: int | None = ISO_BUDGET) -> bool:
    return same_bicomodule(p, q) or find_bicomodule_iso(p, q, budget) is not None


# -- composition -------------------------------------------------------------

class ComposedCarrier(Polynomial):
    """Carrier of p ◁_d q.

    Positions are (I, f) with f a d-natural assignment of q-positions to the
    directions of I, stored as a tuple aligned with p[I].  Directions are
    classes of pairs (a, b), b a direction of f(a), under (a·g, b) ~ (a, transport(b));
    each class is named by its first pair in enumeration order.
    """

    def __init__(self, p: Bicomodule, q: Bicomodule, budget: int | None = DEFAULT_BUDGET,
                 prune: Callable[[dict], bool] | None = None):
        super().__init__()
        self.p, self.q, self.budget, self.prune = p, q, budget, prune
        self._class = Memo()
        self._fmaps = Memo()
        self._index: dict | None = None

    @property
    def _by_base(self) -> dict:
        # built on first enumeration; maps between composites only push positions forward
        if self._index is None:
            self._index = {}
            for j in self.q.positions():
                self._index.setdefault(self.q.base(j), []).append(j)
        return self._index

    def assignments(self, i: Label) -> Iterator[dict]:
        p, q = self.p, self.q
        dirs = p.directions(i)
        return natural_maps(
            dirs,
            lambda a: [(g, p.ract(i, a, g)) for g in p.right.out(p.dtype(i, a))],
            lambda a: self._by_base.get(p.dtype(i, a), []),
            lambda j, g: q.act(j, g),
            prune=self.prune,
            budget=self.budget,
        )

    def _positions(self):
        for i in self.p.positions():
            dirs = self.p.directions(i)
            for f in self.assignments(i):
                yield (i, tuple(f[a] for a in dirs))

    def has_position(self, pos: Label) -> bool:
        """Membership by the naturality conditions, without enumerating."""
        p, q = self.p, self.q
        if not (isinstance(pos, tuple) and len(pos) == 2 and isinstance(pos[1], tuple)):
            return False
        i, js = pos
        if not p.carrier.has_position(i) or len(js) != len(p.directions(i)):
            return False
        f = self.fmap(pos)
        for a, j in f.items():
            if not q.carrier.has_position(j) or q.base(j) != p.dtype(i, a):
                return False
            for g in p.right.out(p.dtype(i, a)):
                if q.act(j, g) != f[p.ract(i, a, g)]:
                    return False
        return self.prune is None or self.prune(f)

    def fmap(self, pos: Label) -> dict:
        return self._fmaps.get(pos, self._fmap)

    def _fmap(self, pos: Label) -> dict:
        i, js = pos
        return dict(zip(self.p.directions(i), js))

    def _classes(self, pos: Label) -> dict:
        return self._class.get(pos, self._compute_classes)

    def _compute_classes(self, pos: Label) -> dict:
        p, q = self.p, self.q
        i, _ = pos
        f = self.fmap(pos)
        pairs = [(a, b) for a in p.directions(i) for b in q.directions(f[a])]
        uf = UnionFind(pairs)
        for a in p.directions(i):
            j = f[a]
            for g in p.right.out(p.dtype(i, a)):
                a2 = p.ract(i, a, g)
                for b2, b in q.transport(j, g).items():
                    uf.union((a2, b2), (a, b))
        return {x: uf.find(x) for x in pairs}

    def _directions(self, pos):
        table = self._classes(pos)
        return tuple(x for x in table if table[x] == x)

    def class_of(self, pos: Label, a: Label, b: Label) -> Label:
        return self._classes(pos)[(a, b)]


def compose_bicomodules(p: Bicomodule, q: Bicomodule, budget: int | None = DEFAULT_BUDGET,
                        prune: Callable[[dict], bool] | None = None) -> Bicomodule:
    """p ◁_d q computed elementwise: natural assignments and a quotient of directions.

    `prune`, if given, sees partial assignments and discards those returning False;
    truncated monads use it to keep only in-bounds positions.
    """
    if p.right is not q.left and not p.right.same_as(q.left):
        raise InputError("bicomodules do not share a middle base")
    carrier = ComposedCarrier(p, q, budget, prune)

    def base(pos):
        return p.base(pos[0])

    def act(pos, k):
        i, js = pos
        i2 = p.act(i, k)
        t = p.transport(i, k)
        f = carrier.fmap(pos)
        return (i2, tuple(f[t[a2]] for a2 in p.directions(i2)))

    def transport(pos, k):
        i, _ = pos
        t = p.transport(i, k)
        return {(a2, b): carrier.class_of(pos, t[a2], b) for (a2, b) in carrier.directions(act(pos, k))}

    def dtype(pos, cls):
        a, b = cls
        return q.dtype(carrier.fmap(pos)[a], b)

    def ract(pos, cls, h):
        a, b = cls
        return carrier.class_of(pos, a, q.ract(carrier.fmap(pos)[a], b, h))

    return from_actions(p.left, q.right, carrier, base, act, transport, dtype, ract, f"{p.name}◁{q.name}")


def compose_oracle(p: Bicomodule, q: Bicomodule, budget: int | None = DEFAULT_BUDGET) -> Bicomodule:
    """p ◁_d q as the equalizer of p ◁ q ⇉ p ◁ d ◁ q, computed with polynomial maps only."""
    if p.right is not q.left and not p.right.same_as(q.left):
        raise InputError("bicomodules do not share a middle base")
    d = p.right.carrier
    pq = Composite(p.carrier, q.carrier, budget)
    guard(pq.count_positions(), budget, "positions of the polynomial composite")
    m1 = whisker_right(p.rcoaction, q.carrier).then(associator(p.carrier, d, q.carrier))
    m2 = whisker_left(p.carrier, q.lcoaction)
    table, classes = {}, {}
    for x in pq.positions():
        if m1.pos(x) != m2.pos(x):
            continue
        dirs = pq.directions(x)
        uf = UnionFind(dirs)
        d1, d2 = m1.dirs(x), m2.dirs(x)
        for z in d1:
            uf.union(d1[z], d2[z])
        proj = {u: uf.find(u) for u in dirs}
        classes[x] = proj
        table[x] = tuple(u for u in dirs if proj[u] == u)
    carrier = Poly(table)
    left = whisker_right(p.lcoaction, q.carrier).then(associator(p.left.carrier, p.carrier, q.carrier))
    right = whisker_left(p.carrier, q.rcoaction).then(associator_inv(p.carrier, q.carrier, q.right.carrier))

    def base(x):
        return left.pos(x)[0]

    def act(x, k):
        c, inner = left.pos(x)
        y = inner[p.left.carrier.dir_index(c)[k]]
        if y not in classes:
            raise InputError(f"left coaction leaves the equalizer at {x!r}")
        return y

    def transport(x, k):
        back = left.dirs(x)
        y = act(x, k)
        out = {}
        for u, rep in classes[y].items():
            image = classes[x][back[(k, u)]]
            if out.setdefault(rep, image) != image:
                raise InputError(f"left coaction not well defined on classes at {x!r}")
        return out

    def dtype(x, cls):
        _, types = right.pos(x)
        index = pq.dir_index(x)
        values = {types[index[u]] for u, r in classes[x].items() if r == cls}
        if len(values) != 1:
            raise InputError(f"direction class {cls!r} at {x!r} has mixed types")
        return values.pop()

    def ract(x, cls, h):
        back = right.dirs(x)
        images = {classes[x][back[(u, h)]] for u, r in classes[x].items() if r == cls}
        if len(images) != 1:
            raise InputError(f"right coaction not well defined on class {cls!r} at {x!r}")
        return images.pop()

    return from_actions(p.left, q.right, carrier, base, act, transport, dtype, ract, f"{p.name}◁{q.name}")


def whisker_bicomodule_right(m: BicomoduleMorphism, q: Bicomodule, src: Bicomodule | None = None,
                             dst: Bicomodule | None = None) -> BicomoduleMorphism:
    """m ◁_d q : p ◁_d q -> p' ◁_d q."""
    src = src or compose_bicomodules(m.src, q)
    dst = dst or compose_bicomodules(m.dst, q)
    sc, tc = src.carrier, dst.carrier

    def on_pos(pos):
        i, _ = pos
        f = sc.fmap(pos)
        back = m.dirs(i)
        return (m.pos(i), tuple(f[back[a2]] for a2 in m.dst.directions(m.pos(i))))

    def on_dirs(pos):
        i, _ = pos
        back = m.dirs(i)
        return {(a2, b): sc.class_of(pos, back[a2], b) for (a2, b) in tc.directions(on_pos(pos))}

    return bicomodule_morphism(src, dst, on_pos, on_dirs, "◁q")


def whisker_bicomodule_left(p: Bicomodule, m: BicomoduleMorphism, src: Bicomodule | None = None,
                            dst: Bicomodule | None = None) -> BicomoduleMorphism:
    """p ◁_d m : p ◁_d q -> p ◁_d q'."""
    src = src or compose_bicomodules(p, m.src)
    dst = dst or compose_bicomodules(p, m.dst)
    sc, tc = src.carrier, dst.carrier

    def on_pos(pos):
        i, js = pos
        return (i, tuple(m.pos(j) for j in js))

    def on_dirs(pos):
        f = sc.fmap(pos)
        return {(a, b2): sc.class_of(pos, a, m.dirs(f[a])[b2]) for (a, b2) in tc.directions(on_pos(pos))}

    return bicomodule_morphism(src, dst, on_pos, on_dirs, "p◁")


def horizontal(m: BicomoduleMorphism, n: BicomoduleMorphism) -> BicomoduleMorphism:
    """m ◁_d n."""
    return whisker_bicomodule_right(m, n.src).then(whisker_bicomodule_left(m.dst, n))


def bicomodule_associator(p: Bicomodule, q: Bicomodule, r: Bicomodule, src: Bicomodule | None = None,
                          dst: Bicomodule | None = None) -> BicomoduleMorphism:
    """(p ◁ q) ◁ r -> p ◁ (q ◁ r)."""
    pq = compose_bicomodules(p, q) if src is None else src.carrier.p
    src = src or compose_bicomodules(pq, r)
    qr = compose_bicomodules(q, r) if dst is None else dst.carrier.q
    dst = dst or compose_bicomodules(p, qr)
    sc, tc = src.carrier, dst.carrier
    pqc = pq.carrier

    def on_pos(pos):
        inner, _ = pos
        i, js = inner
        g = sc.fmap(pos)
        entries = []
        for a, j in zip(p.directions(i), js):
            entries.append((j, tuple(g[pqc.class_of(inner, a, b)] for b in q.directions(j))))
        return (i, tuple(entries))

    def on_dirs(pos):
        inner, _ = pos
        target = on_pos(pos)
        out = {}
        for (a, qr_cls) in tc.directions(target):
            b, z = qr_cls
            out[(a, qr_cls)] = sc.class_of(pos, pqc.class_of(inner, a, b), z)
        return out

    return bicomodule_morphism(src, dst, on_pos, on_dirs, "assoc")


def bicomodule_associator_inv(p: Bicomodule, q: Bicomodule, r: Bicomodule, src: Bicomodule | None = None,
                              dst: Bicomodule | None = None) -> BicomoduleMorphism:
    """p ◁ (q ◁ r) -> (p ◁ q) ◁ r."""
    qr = compose_bicomodules(q, r) if src is None else src.carrier.q
    src = src or compose_bicomodules(p, qr)
    pq = compose_bicomodules(p, q) if dst is None else dst.carrier.p
    dst = dst or compose_bicomodules(pq, r)
    sc, tc = src.carrier, dst.carrier
    pqc, qrc = pq.carrier, qr.carrier

    def on_pos(pos):
        i, entries = pos
        inner = (i, tuple(j for j, _ in entries))
        table = {}
        for a, e in zip(p.directions(i), entries):
            g = qrc.fmap(e)
            for b in q.directions(e[0]):
                table[pqc.class_of(inner, a, b)] = g[b]
        return (inner, tuple(table[u] for u in pqc.directions(inner)))

    def on_dirs(pos):
        i, entries = pos
        f = sc.fmap(pos)
        out = {}
        for (u, z) in tc.directions(on_pos(pos)):
            a, b = u
            out[(u, z)] = sc.class_of(pos, a, qrc.class_of(f[a], b, z))
        return out

    return bicomodule_morphism(src, dst, on_pos, on_dirs, "assoc⁻¹")


def left_unitor_bicomodule(p: Bicomodule, src: Bicomodule | None = None) -> BicomoduleMorphism:
    """c ◁_c p -> p."""
    c = p.left
    src = src or compose_bicomodules(identity_bicomodule(c), p)
    sc = src.carrier

    def on_pos(pos):
        obj, _ = pos
        return sc.fmap(pos)[c.identity(obj)]

    def on_dirs(pos):
        obj, _ = pos
        return {a: sc.class_of(pos, c.identity(obj), a) for a in p.directions(on_pos(pos))}

    return bicomodule_morphism(src, p, on_pos, on_dirs, "λ-unitor")


def left_unitor_bicomodule_inv(p: Bicomodule, dst: Bicomodule | None = None) -> BicomoduleMorphism:
    """p -> c ◁_c p."""
    c = p.left
    dst = dst or compose_bicomodules(identity_bicomodule(c), p)

    def on_pos(i):
        obj = p.base(i)
        return (obj, tuple(p.act(i, k) for k in c.out(obj)))

    def on_dirs(i):
        return {(k, a2): p.transport(i, k)[a2] for (k, a2) in dst.carrier.directions(on_pos(i))}

    return bicomodule_morphism(p, dst, on_pos, on_dirs, "λ-unitor⁻¹")


def right_unitor_bicomodule(p: Bicomodule, src: Bicomodule | None = None) -> BicomoduleMorphism:
    """p ◁_d d -> p."""
    d = p.right
    src = src or compose_bicomodules(p, identity_bicomodule(d))
    sc = src.carrier

    def on_dirs(pos):
        i, _ = pos
        return {a: sc.class_of(pos, a, d.identity(p.dtype(i, a))) for a in p.directions(i)}

    return bicomodule_morphism(src, p, lambda pos: pos[0], on_dirs, "ρ-unitor")


def right_unitor_bicomodule_inv(p: Bicomodule, dst: Bicomodule | None = None) -> BicomoduleMorphism:
    """p -> p ◁_d d."""
    dst = dst or compose_bicomodules(p, identity_bicomodule(p.right))

    def on_pos(i):
        return (i, tuple(p.dtype(i, a) for a in p.directions(i)))

    def on_dirs(i):
        return {(a, g): p.ract(i, a, g) for (a, g) in dst.carrier.directions(on_pos(i))}

    return bicomodule_morphism(p, dst, on_pos, on_dirs, "ρ-unitor⁻¹")


def sum_bicomodules(p: Bicomodule, q: Bicomodule) -> Bicomodule:
    """p + q over the same bases; positions tagged 0 and 1."""
    parts = (p, q)
    carrier = Poly({(t, i): parts[t].directions(i) for t in (0, 1) for i in parts[t].positions()})
    return from_actions(p.left, p.right, carrier, lambda pos: parts[pos[0]].base(pos[1]),
                        lambda pos, k: (pos[0], parts[pos[0]].act(pos[1], k)),
                        lambda pos, k: parts[pos[0]].transport(pos[1], k),
                        lambda pos, a: parts[pos[0]].dtype(pos[1], a),
                        lambda pos, a, g: parts[pos[0]].ract(pos[1], a, g), f"{p.name}+{q.name}")


def restrict_positions(p: Bicomodule, keep: Callable[[Label], bool], name: str = "") -> Bicomodule:
    """The sub-bicomodule on positions satisfying `keep`, which must be closed under the left action."""
    kept = [i for i in p.positions() if keep(i)]
    for i in kept:
        for k in p.left.out(p.base(i)):
            if not keep(p.act(i, k)):
                raise InputError(f"restriction not closed under the left action at {i!r}")
    carrier = Poly({i: p.directions(i) for i in kept})
    return Bicomodule(p.left, p.right, carrier,
                      PolyMorphism(carrier, Composite(p.left.carrier, carrier), p.lcoaction.pos, p.lcoaction.dirs),
                      PolyMorphism(carrier, Composite(carrier, p.right.carrier), p.rcoaction.pos, p.rcoaction.dirs),
                      name or p.name)


def external_product(c: Comonoid, d: Comonoid) -> Bicomodule:
    """The (c⊗d, c+d)-bicomodule Σ_{(C,D)} y^{c[C] + d[D]}; it sends (X, Y) to X ⊠ Y."""
    from .comonoid import coproduct_comonoid, tensor_comonoid
    left, right = tensor_comonoid(c, d), coproduct_comonoid(c, d)
    carrier = Poly({(a, b): tuple((0, f) for f in c.out(a)) + tuple((1, g) for g in d.out(b))
                    for a in c.objects for b in d.objects})
    parts = (c, d)

    def transport(pos, k):
        (a, b), (f, g) = pos, k
        return {(0, f2): (0, c.compose(a, f, f2)) for f2 in c.out(c.cod(a, f))} | \
            {(1, g2): (1, d.compose(b, g, g2)) for g2 in d.out(d.cod(b, g))}

    def dtype(pos, u):
        tag, f = u
        return (tag, parts[tag].cod(pos[tag], f))

    def ract(pos, u, h):
        tag, f = u
        return (tag, parts[tag].compose(pos[tag], f, h))

    return from_actions(left, right, carrier, lambda pos: pos,
                        lambda pos, k: (c.cod(pos[0], k[0]), d.cod(pos[1], k[1])), transport, dtype, ract,
                        f"{c.name}⊠{d.name}")


def pair_copresheaf(x: Copresheaf, y: Copresheaf) -> Copresheaf:
    """(X, Y) as a single copresheaf on c + d."""
    from .comonoid import coproduct_comonoid
    base = coproduct_comonoid(x.base, y.base)
    parts = (x, y)
    at = {(t, obj): parts[t].at[obj] for t in (0, 1) for obj in parts[t].base.objects}
    return copresheaf_from_functions(base, at, lambda obj, e, f: parts[obj[0]].act(obj[1], e, f),
                                     f"({x.name},{y.name})")


def external_product_copresheaf(x: Copresheaf, y: Copresheaf) -> Copresheaf:
    """(X ⊠ Y)_{(C,D)} = X_C × Y_D, built directly on c ⊗ d."""
    from .comonoid import tensor_comonoid
    base = tensor_comonoid(x.base, y.base)
    at = {(a, b): [(e, v) for e in x.at[a] for v in y.at[b]] for a, b in base.objects}
    return copresheaf_from_functions(
        base, at, lambda obj, el, k: (x.act(obj[0], el[0], k[0]), y.act(obj[1], el[1], k[1])),
        f"{x.name}⊠{y.name}")


def is_isomorphism(m: BicomoduleMorphism) -> bool:
    from .poly import is_cartesian, is_vertical
    return is_vertical(m.underlying) and is_cartesian(m.underlying)


# -- copresheaves as bicomodules -----------------------------------------------

def zero_comonoid() -> Comonoid:
    return discrete((), "0")


def copresheaf_to_bicomodule(x: Copresheaf, right: Comonoid | None = None) -> Bicomodule:
    """X as a (c, 0)-bicomodule: positions (C, x), no directions."""
    c = x.base
    right = right or zero_comonoid()
    carrier = Poly({(obj, e): () for obj, e in x.elements()})
    return from_actions(c, right, carrier, lambda pos: pos[0],
                        lambda pos, k: (c.cod(pos[0], k), x.act(pos[0], pos[1], k)),
                        lambda pos, k: {}, lambda pos, a: None, lambda pos, a, g: None, x.name)


def bicomodule_to_copresheaf(b: Bicomodule) -> Copresheaf:
    """Positions of a bicomodule with its left action, forgetting directions."""
    c = b.left
    at = {obj: b.over(obj) for obj in c.objects}
    return copresheaf_from_functions(c, at, lambda obj, i, k: b.act(i, k), b.name)


def evaluate_prafunctor(p: Bicomodule, x: Copresheaf, budget: int | None = DEFAULT_BUDGET) -> Copresheaf:
    """F(X)_C = Σ_{I over C} Hom(p[I], X); elements are (I, values of the map in p[I] order)."""
    homs = {i: _natural_into(p, i, x, budget) for i in p.positions()}
    at = {obj: [(i, alpha) for i in p.over(obj) for alpha in homs[i]] for obj in p.left.objects}

    def act(obj, el, k):
        i, alpha = el
        i2 = p.act(i, k)
        t = p.transport(i, k)
        values = dict(zip(p.directions(i), alpha))
        return (i2, tuple(values[t[a2]] for a2 in p.directions(i2)))

    return copresheaf_from_functions(p.left, at, act, f"{p.name}({x.name})")


def _natural_into(p: Bicomodule, i: Label, x: Copresheaf, budget: int | None) -> list[tuple]:
    """Natural maps p[I] -> X as tuples aligned with p[I]."""
    d = p.right
    dirs = p.directions(i)
    elements = list(dirs)

    def arrows(a):
        return [(g, p.ract(i, a, g)) for g in d.out(p.dtype(i, a))]

    def candidates(a):
        return [(p.dtype(i, a), v) for v in x.at[p.dtype(i, a)]]

    def act(el, g):
        obj, v = el
        return (d.cod(obj, g), x.act(obj, v, g))

    out = []
    for h in natural_maps(elements, arrows, candidates, act, budget=budget):
        out.append(tuple(h[a][1] for a in dirs))
    return out


# -- coclosure ---------------------------------------------------------------

def coclosure(p: Bicomodule, q: Bicomodule, budget: int | None = DEFAULT_BUDGET) -> Bicomodule:
    """⟨p|q⟩ for p: (c,e) and q: (d,e); a (c,d)-bicomodule.

    Positions are those of p.  Directions at I are pairs (J, α), α: q[J] -> p[I]
    a map of e-copresheaves stored as a tuple aligned with q[J]; (J, α) is typed
    by base_q(J).
    """
    if p.right is not q.right and not p.right.same_as(q.right):
        raise InputError("coclosure needs a common right base")
    c, d = p.left, q.left
    cache: dict = {}

    def dirs_at(i):
        try:
            return cache[i]
        except KeyError:
            pass
        px = p.direction_copresheaf(i)
        out = []
        for j in q.positions():
            for alpha in _natural_into(q, j, px, budget):
                out.append((j, alpha))
        cache[i] = tuple(out)
        return cache[i]

    carrier = _LazyPoly(p.positions, dirs_at)

    def transport(i, k):
        t = p.transport(i, k)
        return {(j, alpha): (j, tuple(t[a] for a in alpha)) for (j, alpha) in dirs_at(p.act(i, k))}

    def ract(i, u, g):
        j, alpha = u
        j2 = q.act(j, g)
        t = q.transport(j, g)
        values = dict(zip(q.directions(j), alpha))
        return (j2, tuple(values[t[b2]] for b2 in q.directions(j2)))

    return from_actions(c, d, carrier, p.base, p.act, transport, lambda i, u: q.base(u[0]), ract,
                        f"⟨{p.name}|{q.name}⟩")


class _LazyPoly(Polynomial):
    def __init__(self, positions: Callable[[], Iterable], directions: Callable[[Label], tuple]):
        super().__init__()
        self._pos_fn, self._dir_fn = positions, directions

    def _positions(self):
        return self._pos_fn()

    def _directions(self, pos):
        return self._dir_fn(pos)


def coclosure_unit(p: Bicomodule, q: Bicomodule, closed: Bicomodule | None = None,
                   composite: Bicomodule | None = None) -> BicomoduleMorphism:
    """p -> ⟨p|q⟩ ◁_d q: I goes to (I, u ↦ J for u = (J, α)), and the class of (u, b) goes back to α(b)."""
    closed = closed or coclosure(p, q)
    composite = composite or compose_bicomodules(closed, q)

    def on_pos(i):
        return (i, tuple(u[0] for u in closed.directions(i)))

    def on_dirs(i):
        out = {}
        for (u, b) in composite.carrier.directions(on_pos(i)):
            j, alpha = u
            out[(u, b)] = dict(zip(q.directions(j), alpha))[b]
        return out

    return bicomodule_morphism(p, composite, on_pos, on_dirs, "unit")


def transpose_to(gamma: BicomoduleMorphism, unit: BicomoduleMorphism, target: Bicomodule | None = None
                 ) -> BicomoduleMorphism:
    """γ: ⟨p|q⟩ -> r  gives  p -> r ◁_d q, namely the unit followed by γ ◁ q."""
    q = unit.dst.carrier.q
    target = target or compose_bicomodules(gamma.dst, q)
    return unit.then(whisker_bicomodule_right(gamma, q, unit.dst, target))


def transpose_from(beta: BicomoduleMorphism, closed: Bicomodule, q: Bicomodule, r: Bicomodule) -> BicomoduleMorphism:
    """β: p -> r ◁_d q  gives  ⟨p|q⟩ -> r with I ↦ R and v ↦ (f(v), b ↦ β♯[(v, b)])."""
    rq = beta.dst.carrier

    def on_pos(i):
        return beta.pos(i)[0]

    def on_dirs(i):
        pos = beta.pos(i)
        _, js = pos
        back = beta.dirs(i)
        out = {}
        for v, j in zip(r.directions(pos[0]), js):
            out[v] = (j, tuple(back[rq.class_of(pos, v, b)] for b in q.directions(j)))
        return out

    return bicomodule_morphism(closed, r, on_pos, on_dirs, "transpose")


def coclosure_universal_check(p: Bicomodule, q: Bicomodule, r: Bicomodule,
                              budget: int | None = DEFAULT_BUDGET) -> Report:
    """Hom(⟨p|q⟩, r) ≅ Hom(p, r ◁_d q): enumerate both sides and check both round trips."""
    rep = Report("coclosure transposition")
    closed = coclosure(p, q, budget)
    unit = coclosure_unit(p, q, closed)
    rq = compose_bicomodules(r, q, budget)
    left_side = enumerate_bicomodule_morphisms(closed, r, budget)
    right_side = enumerate_bicomodule_morphisms(p, rq, budget)
    if len(left_side) != len(right_side):
        rep.fail(f"hom-set sizes differ: {len(left_side)} vs {len(right_side)}")
    right_keys = {m.underlying.key() for m in right_side}
    left_keys = {m.underlying.key() for m in left_side}
    for gamma in left_side:
        rep.checked += 1
        beta = transpose_to(gamma, unit, rq)
        if beta.underlying.key() not in right_keys:
            rep.fail("transpose of a morphism out of the coclosure is not a morphism")
            continue
        back = transpose_from(beta, closed, q, r)
        if back.underlying != gamma.underlying:
            rep.fail("round trip on Hom(⟨p|q⟩, r) is not the identity")
    for beta in right_side:
        rep.checked += 1
        gamma = transpose_from(beta, closed, q, r)
        if gamma.underlying.key() not in left_keys:
            rep.fail("transpose of a morphism into r ◁ q is not a morphism")
            continue
        if transpose_to(gamma, unit, rq).underlying != beta.underlying:
            rep.fail("round trip on Hom(p, r ◁ q) is not the identity")
    return rep


def tensor_over(p: Bicomodule, q: Bicomodule) -> Bicomodule:
    """p ⊗_{c,d} q: pairs of positions over a common object, fibre products of directions."""
    if not (p.left.same_as(q.left) and p.right.same_as(q.right)):
        raise InputError("tensor over needs equal bases")
    table = {}
    for i in p.positions():
        for j in q.over(p.base(i)):
            table[(i, j)] = tuple((a, b) for a in p.directions(i) for b in q.directions(j)
                                  if p.dtype(i, a) == q.dtype(j, b))
    carrier = Poly(table)

    def transport(pos, k):
        i, j = pos
        tp, tq = p.transport(i, k), q.transport(j, k)
        return {(a, b): (tp[a], tq[b]) for (a, b) in carrier.directions((p.act(i, k), q.act(j, k)))}

    return from_actions(p.left, p.right, carrier, lambda pos: p.base(pos[0]),
                        lambda pos, k: (p.act(pos[0], k), q.act(pos[1], k)), transport,
                        lambda pos, u: p.dtype(pos[0], u[0]),
                        lambda pos, u, g: (p.ract(pos[0], u[0], g), q.ract(pos[1], u[1], g)),
                        f"{p.name}⊗{q.name}")


def tensor_unit(c: Comonoid, d: Comonoid) -> Bicomodule:
    """c(1) y^{d(1)}: one position per object of c, one direction per object of d."""
    carrier = Poly({obj: tuple(d.objects) for obj in c.objects})
    return from_actions(c, d, carrier, lambda obj: obj, lambda obj, k: c.cod(obj, k),
                        lambda obj, k: {e: e for e in d.objects}, lambda obj, e: e,
                        lambda obj, e, g: d.cod(e, g), "unit")


# -- spans over discrete bases -------------------------------------------------

@dataclass(frozen=True)
class SpanDiagram:
    """B ← mid → top → A."""

    A: FinSet
    B: FinSet
    mid: FinSet
    top: FinSet
    toB: FinFn
    toTop: FinFn
    toA: FinFn

    def is_right_adjoint_form(self) -> bool:
        return self.toA.is_bijective()

    def is_left_adjoint_form(self) -> bool:
        return self.toTop.is_bijective()


def _discrete_objects(c: Comonoid) -> tuple:
    if not is_discrete(c):
        raise InputError(f"base {c.name!r} is not discrete")
    return c.objects


def to_span(p: Bicomodule) -> SpanDiagram:
    a_objs, b_objs = _discrete_objects(p.left), _discrete_objects(p.right)
    labels = [a for i in p.positions() for a in p.directions(i)]
    unique = len(set(labels)) == len(labels)
    tag = (lambda i, a: a) if unique else (lambda i, a: (i, a))
    mid = FinSet(tag(i, a) for i in p.positions() for a in p.directions(i))
    top = FinSet(p.positions())
    A, B = FinSet(a_objs), FinSet(b_objs)
    to_b = {tag(i, a): p.dtype(i, a) for i in p.positions() for a in p.directions(i)}
    to_top = {tag(i, a): i for i in p.positions() for a in p.directions(i)}
    to_a = {i: p.base(i) for i in p.positions()}
    return SpanDiagram(A, B, mid, top, FinFn(mid, B, to_b), FinFn(mid, top, to_top), FinFn(top, A, to_a))


def span_to_bicomodule(s: SpanDiagram, name: str = "") -> Bicomodule:
    left, right = discrete(s.A.elements, "A"), discrete(s.B.elements, "B")
    fibres = {t: [] for t in s.top}
    for m in s.mid:
        fibres[s.toTop(m)].append(m)
    carrier = Poly({t: tuple(fibres[t]) for t in s.top})
    return from_actions(left, right, carrier, s.toA, lambda t, k: t,
                        lambda t, k: {m: m for m in fibres[t]}, lambda t, m: s.toB(m),
                        lambda t, m, g: m, name)


def category_span(c: Comonoid) -> SpanDiagram:
    """c(1) ←cod c_*(1) →dom c(1) →id c(1)."""
    objs = FinSet(c.objects)
    labels = [f for obj in c.objects for f in c.out(obj)]
    unique = len(set(labels)) == len(labels)
    tag = (lambda obj, f: f) if unique else (lambda obj, f: (obj, f))
    mid = FinSet(tag(obj, f) for obj in c.objects for f in c.out(obj))
    to_b = {tag(obj, f): c.cod(obj, f) for obj in c.objects for f in c.out(obj)}
    to_top = {tag(obj, f): obj for obj in c.objects for f in c.out(obj)}
    return SpanDiagram(objs, objs, mid, objs, FinFn(mid, objs, to_b), FinFn(mid, objs, to_top), FinFn.identity(objs))


def dagger(s: SpanDiagram) -> SpanDiagram:
    """Swap adjoint forms: B ←g M →h T ≅ A becomes T ←h M = M →g B, and conversely."""
    if s.is_right_adjoint_form():
        # re-express toB/toTop through the bijection top ≅ A
        h = s.toTop.then(s.toA)
        return SpanDiagram(s.B, s.A, s.mid, s.mid, h, FinFn.identity(s.mid), s.toB)
    if s.is_left_adjoint_form():
        inv = {v: k for k, v in s.toTop.map.items()}
        g = FinFn(s.top, s.B, {t: s.toB(inv[t]) for t in s.top})
        return SpanDiagram(s.B, s.A, s.top, s.B, s.toA, g, FinFn.identity(s.B))
    raise InputError("span is in neither adjoint form")


def vee(p: Bicomodule, budget: int | None = DEFAULT_BUDGET) -> Bicomodule:
    """p∨ = Σ_a Hom(p_a, By) y^{p_a(1)}.

    A (y, By)-morphism p_a -> By picks one direction at each position of p_a,
    so positions are (a, σ) with σ listing a chosen direction per position over a;
    the direction I of (a, σ) is typed by the type of σ(I).
    """
    a_objs = _discrete_objects(p.left)
    _discrete_objects(p.right)
    table, choice = {}, {}
    for a in a_objs:
        over = p.over(a)
        count = 1
        for i in over:
            count *= len(p.directions(i))
        guard(count, budget, f"dual positions over {a!r}")
        for sigma in itertools.product(*(p.directions(i) for i in over)):
            table[(a, sigma)] = tuple(over)
            choice[(a, sigma)] = dict(zip(over, sigma))
    carrier = Poly(table)
    left, right = p.left, p.right
    return from_actions(left, right, carrier, lambda pos: pos[0], lambda pos, k: pos,
                        lambda pos, k: {i: i for i in table[pos]},
                        lambda pos, i: p.dtype(i, choice[pos][i]), lambda pos, i, g: i, f"{p.name}∨")


def opposite_via_spans(c: Comonoid, budget: int | None = DEFAULT_BUDGET) -> tuple[Bicomodule, Report]:
    """(c†)∨ and (c∨)†, each compared with the span of the directly built opposite."""
    from .comonoid import opposite_direct
    rep = Report(f"opposite of {c.name} via spans")
    s = category_span(c)
    dagger_then_vee = vee(span_to_bicomodule(dagger(s), "c†"), budget)
    vee_then_dagger = span_to_bicomodule(dagger(to_span(vee(span_to_bicomodule(s, "c"), budget))), "c∨†")
    oracle = span_to_bicomodule(category_span(opposite_direct(c)), "c^op")
    for name, b in (("(c†)∨", dagger_then_vee), ("(c∨)†", vee_then_dagger)):
        rep.checked += 1
        if not isomorphic(b, oracle, budget):
            rep.fail(f"{name} is not isomorphic to the span of the opposite category")
    return dagger_then_vee, rep
