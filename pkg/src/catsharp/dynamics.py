"""Effects handlers, polynomial coalgebras, and the truncated cofree comonoid.

A (c, d)-handler is a polynomial s with φ: s ◁ d -> c ◁ s.  The cofree comonoid on p is
represented by its tower of truncations p^(i) with the maps φ_{i,j}: p^(i+j) -> p^(i) ◁ p^(j).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from .bicomod import Bicomodule, copresheaf_to_bicomodule, find_bicomodule_iso
from .comonoid import Comonoid, compare, zero_comonoid
from .copresheaf import Copresheaf
from .fincore import DEFAULT_BUDGET, InputError, Label, Report, guard
from .poly import (STAR, Y, Composite, Poly, PolyMorphism, Polynomial, Product, associator, associator_inv,
                   compose_maps, first_difference, identity, left_unitor, left_unitor_inv, linear, pairing,
                   prod_maps, projection, right_unitor, right_unitor_inv, whisker_left, whisker_right)

ROOT = (0, STAR)


# -- handlers ------------------------------------------------------------------

@dataclass
class ElementaryHandler:
    """φ: s ◁ q -> p ◁ s, with no laws."""

    p: Polynomial
    q: Polynomial
    s: Polynomial
    phi: PolyMorphism
    name: str = ""


@dataclass
class ComonoidHandler:
    """φ: s ◁ d -> c ◁ s compatible with counits and comultiplications."""

    c: Comonoid
    d: Comonoid
    s: Polynomial
    phi: PolyMorphism
    name: str = ""

    @property
    def elementary(self) -> ElementaryHandler:
        return ElementaryHandler(self.c.carrier, self.d.carrier, self.s, self.phi, self.name)


def check_handler(h: ComonoidHandler, positions=None) -> Report:
    rep = Report(f"handler {h.name}".strip())
    c, d, s, phi = h.c, h.d, h.s, h.phi
    problems = phi.check(positions)
    for problem in problems:
        rep.fail(f"ill-formed φ: {problem}")
    if problems:
        return rep
    cc, dc = c.carrier, d.carrier
    lhs = phi.then(whisker_right(c.counit, s)).then(left_unitor(s))
    rhs = whisker_left(s, d.counit).then(right_unitor(s))
    compare(rep, "counit", lhs, rhs, positions)
    lhs = phi.then(whisker_right(c.comult, s)).then(associator(cc, cc, s))
    rhs = (whisker_left(s, d.comult).then(associator_inv(s, dc, dc)).then(whisker_right(phi, dc))
           .then(associator(cc, s, dc)).then(whisker_left(cc, phi)))
    compare(rep, "comultiplication", lhs, rhs, positions)
    return rep


def identity_handler(c: Comonoid) -> ComonoidHandler:
    """(y, y ◁ c ≅ c ≅ c ◁ y)."""
    phi = left_unitor(c.carrier).then(right_unitor_inv(c.carrier))
    return ComonoidHandler(c, c, Y, phi, f"id_{c.name}")


def _compose_structure(phi: PolyMorphism, psi: PolyMorphism, p: Polynomial, q: Polynomial, r: Polynomial,
                       s: Polynomial, t: Polynomial) -> PolyMorphism:
    """(s ◁ t) ◁ r -> s ◁ (t ◁ r) -> s ◁ (q ◁ t) -> (s ◁ q) ◁ t -> (p ◁ s) ◁ t -> p ◁ (s ◁ t)."""
    return (associator(s, t, r).then(whisker_left(s, psi)).then(associator_inv(s, q, t))
            .then(whisker_right(phi, t)).then(associator(p, s, t)))


def compose_handlers(h: ComonoidHandler, k: ComonoidHandler) -> ComonoidHandler:
    if h.d is not k.c and not h.d.same_as(k.c):
        raise InputError("handlers do not share a middle comonoid")
    phi = _compose_structure(h.phi, k.phi, h.c.carrier, h.d.carrier, k.d.carrier, h.s, k.s)
    return ComonoidHandler(h.c, k.d, Composite(h.s, k.s), phi, f"{h.name};{k.name}")


def compose_elementary(h: ElementaryHandler, k: ElementaryHandler) -> ElementaryHandler:
    phi = _compose_structure(h.phi, k.phi, h.p, h.q, k.q, h.s, k.s)
    return ElementaryHandler(h.p, k.q, Composite(h.s, k.s), phi, f"{h.name};{k.name}")


def is_handler_square(f: PolyMorphism, h: ComonoidHandler | ElementaryHandler,
                      k: ComonoidHandler | ElementaryHandler, positions=None) -> bool:
    """f: s -> s' commutes with the structure maps: φ' ∘ (f ◁ q) = (p ◁ f) ∘ φ."""
    q = h.d.carrier if isinstance(h, ComonoidHandler) else h.q
    p = h.c.carrier if isinstance(h, ComonoidHandler) else h.p
    lhs = whisker_right(f, q).then(k.phi)
    rhs = h.phi.then(whisker_left(p, f))
    return first_difference(lhs, rhs, positions) is None


def handler_to_bicomodule(h: ComonoidHandler) -> Bicomodule:
    """Carrier s ◁ d; right coaction s ◁ δ, left coaction (φ ◁ d) ∘ (s ◁ δ)."""
    c, d, s = h.c, h.d, h.s
    carrier = Composite(s, d.carrier)
    split = whisker_left(s, d.comult).then(associator_inv(s, d.carrier, d.carrier))
    right = PolyMorphism(carrier, Composite(carrier, d.carrier), split.pos, split.dirs, "ρ")
    left_map = split.then(whisker_right(h.phi, d.carrier)).then(associator(c.carrier, s, d.carrier))
    left = PolyMorphism(carrier, Composite(c.carrier, carrier), left_map.pos, left_map.dirs, "λ")
    return Bicomodule(c, d, carrier, left, right, f"B({h.name})")


def copresheaf_handler(x: Copresheaf) -> ComonoidHandler:
    """A (c, 0)-handler c ◁ S <- S ◁ 0 with S the elements of X."""
    c = x.base
    s = Poly({el: () for el in x.elements()})
    zero = zero_comonoid()
    src = Composite(s, zero.carrier)

    def on_pos(pos):
        (obj, e), _ = pos
        return (obj, tuple((c.cod(obj, f), x.act(obj, e, f)) for f in c.out(obj)))

    phi = PolyMorphism(src, Composite(c.carrier, s), on_pos, lambda pos: {}, "φ")
    return ComonoidHandler(c, zero, s, phi, x.name)


def copresheaf_handler_bicomodule_iso(x: Copresheaf):
    """Iso between B(copresheaf_handler(X)) and X as a (c, 0)-bicomodule, or None."""
    return find_bicomodule_iso(handler_to_bicomodule(copresheaf_handler(x)), copresheaf_to_bicomodule(x))


def distinguish(h: ComonoidHandler, k: ComonoidHandler):
    """Faithfulness witness: where the left coactions of B(h) and B(k) first differ."""
    bh, bk = handler_to_bicomodule(h), handler_to_bicomodule(k)
    return first_difference(bh.lcoaction, bk.lcoaction)


# -- the cofree tower --------------------------------------------------------------

class CofreeTower:
    """p^(0) = y, p^(1+i) = y × (p ◁ p^(i)), with projections π^(i): p^(1+i) -> p^(i).

    A position of p^(i) is a p-tree of depth i; directions are its nodes at depth ≤ i,
    the root being (0, *) and (1, (a, n)) the node n below the child a.
    """

    def __init__(self, p: Polynomial, depth: int, budget: int | None = DEFAULT_BUDGET):
        if depth < 0:
            raise InputError("depth must be non-negative")
        self.p, self.depth, self.budget = p, depth, budget
        self.levels: list[Polynomial] = [Y]
        for _ in range(depth):
            self.levels.append(Product(Y, Composite(p, self.levels[-1], budget)))
        self.projections: list[PolyMorphism] = []
        for i in range(depth):
            if i == 0:
                pi = projection(Y, self.levels[1].q, 0)
            else:
                pi = prod_maps(identity(Y), whisker_left(p, self.projections[i - 1]))
            self.projections.append(PolyMorphism(self.levels[i + 1], self.levels[i], pi.pos, pi.dirs, f"π{i}"))
        self._phi: dict = {}

    def level(self, i: int) -> Polynomial:
        if not 0 <= i <= self.depth:
            raise InputError(f"level {i} outside the tower of depth {self.depth}")
        return self.levels[i]

    def counit(self, i: int) -> PolyMorphism:
        """ε^(i): p^(i) -> y, the root."""
        lv = self.level(i)
        if i == 0:
            return identity(Y)
        return PolyMorphism(lv, Y, lambda pos: STAR, lambda pos: {STAR: ROOT}, "ε")

    def truncate(self, i: int, j: int) -> PolyMorphism:
        """p^(i) -> p^(j) for j ≤ i, composing projections."""
        f = identity(self.level(i))
        for k in range(i - 1, j - 1, -1):
            f = f.then(self.projections[k])
        return f

    def phi(self, i1: int, i2: int) -> PolyMorphism:
        """φ_{i1,i2}: p^(i1+i2) -> p^(i1) ◁ p^(i2) by the inductive recipe."""
        if i1 + i2 > self.depth:
            raise InputError(f"φ_{i1},{i2} needs depth {i1 + i2} > {self.depth}")
        key = (i1, i2)
        if key in self._phi:
            return self._phi[key]
        if i1 == 0:
            f = left_unitor_inv(self.level(i2))
        elif i2 == 0:
            f = right_unitor_inv(self.level(i1))
        else:
            a, b = i1 - 1, i2 - 1
            step = prod_maps(identity(Y), whisker_left(self.p, self.phi(a, 1 + b)))
            f = step.then(self._special(a, b))
        f = PolyMorphism(self.level(i1 + i2), Composite(self.level(i1), self.level(i2)), f.pos, f.dirs,
                         f"φ{i1},{i2}")
        self._phi[key] = f
        return f

    def _special(self, i1: int, i2: int) -> PolyMorphism:
        """y × (p ◁ (p^(i1) ◁ p^(1+i2))) -> (y × (p ◁ p^(i1))) ◁ p^(1+i2).

        The root direction is sent the root subtree, obtained by collapsing each p^(i1)-tree to
        its root and projecting along π^(i2); the other directions keep their subtrees.
        """
        p = self.p
        top_level, sub_level = self.level(1 + i1), self.level(1 + i2)
        low = self.level(i1)
        root = STAR if i1 == 0 else ROOT
        pi = self.projections[i2]

        def parts(pos):
            _, (i, ks) = pos
            return i, ks

        def root_subtree(pos):
            i, ks = parts(pos)
            below = []
            for t, bs in ks:
                b = bs[low.dir_index(t)[root]]
                below.append(pi.pos(b))
            return (STAR, (i, tuple(below)))

        def on_pos(pos):
            i, ks = parts(pos)
            top = (STAR, (i, tuple(t for t, _ in ks)))
            assigned = []
            for u in top_level.directions(top):
                if u == ROOT:
                    assigned.append(root_subtree(pos))
                else:
                    _, (a, t) = u
                    t_pos, bs = ks[p.dir_index(i)[a]]
                    assigned.append(bs[low.dir_index(t_pos)[t]])
            return (top, tuple(assigned))

        def on_dirs(pos):
            i, ks = parts(pos)
            target = on_pos(pos)
            out = {}
            for u, b_pos in zip(top_level.directions(target[0]), target[1]):
                if u == ROOT:
                    for w in sub_level.directions(b_pos):
                        if w == ROOT:
                            out[(u, w)] = ROOT
                        else:
                            _, (a, w2) = w
                            t_pos, bs = ks[p.dir_index(i)[a]]
                            b = bs[low.dir_index(t_pos)[root]]
                            out[(u, w)] = (1, (a, (root, pi.dirs(b)[w2])))
                else:
                    _, (a, t) = u
                    for w in sub_level.directions(b_pos):
                        out[(u, w)] = (1, (a, (t, w)))
            return out

        return PolyMorphism(Product(Y, Composite(p, Composite(low, sub_level))),
                            Composite(top_level, sub_level), on_pos, on_dirs, "special")

    def root_subtree_map(self, i1: int, i2: int) -> PolyMorphism:
        """p^(1+i1+1+i2) -> p^(1+i2): the tree assigned to the root direction by φ_{1+i1,1+i2}."""
        f = self.phi(1 + i1, 1 + i2)
        top_level = self.level(1 + i1)

        def on_pos(pos):
            top, assigned = f.pos(pos)
            return assigned[top_level.dir_index(top)[ROOT]]

        def on_dirs(pos):
            back = f.dirs(pos)
            return {w: back[(ROOT, w)] for w in self.level(1 + i2).directions(on_pos(pos))}

        return PolyMorphism(self.level(2 + i1 + i2), self.level(1 + i2), on_pos, on_dirs, "φ-root")

    # explicit trees, used as an independent description of φ
    def paths(self, i: int, pos: Label) -> list[tuple]:
        """Nodes of a depth-i tree as paths of p-directions, in direction order."""
        return [self.node_path(i, n) for n in self.level(i).directions(pos)]

    def node_path(self, i: int, node: Label) -> tuple:
        if i == 0 or node == ROOT:
            return ()
        _, (a, rest) = node
        return (a,) + self.node_path(i - 1, rest)

    def node_label(self, i: int, path: tuple) -> Label:
        if i == 0:
            if path:
                raise InputError("path longer than the tree")
            return STAR
        if not path:
            return ROOT
        return (1, (path[0], self.node_label(i - 1, path[1:])))

    def subtree(self, i: int, pos: Label, path: tuple, j: int) -> Label:
        """The subtree of a depth-i tree at `path`, cut to depth j."""
        if not path:
            return self._cut(i, pos, j)
        _, (node, kids) = pos
        return self.subtree(i - 1, kids[self.p.dir_index(node)[path[0]]], path[1:], j)

    def _cut(self, i: int, pos: Label, j: int) -> Label:
        if j == 0:
            return STAR
        _, (node, kids) = pos
        return (STAR, (node, tuple(self._cut(i - 1, k, j - 1) for k in kids)))

    def phi_oracle(self, i1: int, i2: int) -> PolyMorphism:
        """φ_{i1,i2} as: the top i1 levels, and at each of their nodes the subtree of depth i2;
        the node v·w goes back to the concatenated path."""
        n = i1 + i2

        def on_pos(pos):
            top = self.subtree(n, pos, (), i1)
            return (top, tuple(self.subtree(n, pos, path, i2) for path in self.paths(i1, top)))

        def on_dirs(pos):
            top, subs = on_pos(pos)
            out = {}
            for v, sub in zip(self.level(i1).directions(top), subs):
                pv = self.node_path(i1, v)
                for w in self.level(i2).directions(sub):
                    out[(v, w)] = self.node_label(n, pv + self.node_path(i2, w))
            return out

        return PolyMorphism(self.level(n), Composite(self.level(i1), self.level(i2)), on_pos, on_dirs, "φ-trees")

    def positions(self, i: int) -> tuple:
        lv = self.level(i)
        guard(len(lv.positions()), self.budget, "tree positions")
        return lv.positions()


def cofree_tower(p: Polynomial, depth: int, budget: int | None = DEFAULT_BUDGET) -> CofreeTower:
    return CofreeTower(p, depth, budget)


def check_tower(t: CofreeTower, total: int | None = None) -> Report:
    """φ against the tree description, counit laws, and coassociativity for index triples with
    i1 + i2 + i3 ≤ total; also the square of root subtrees."""
    total = t.depth if total is None else total
    rep = Report(f"cofree tower of depth {t.depth}")
    for n in range(total + 1):
        positions = t.positions(n)
        for i1 in range(n + 1):
            i2 = n - i1
            compare(rep, f"φ{i1},{i2} vs trees", t.phi(i1, i2), t.phi_oracle(i1, i2), positions)
            lhs = t.phi(i1, i2).then(whisker_right(t.counit(i1), t.level(i2))).then(left_unitor(t.level(i2)))
            compare(rep, f"left counit at {i1},{i2}", lhs, t.truncate(n, i2), positions)
            rhs = t.phi(i1, i2).then(whisker_left(t.level(i1), t.counit(i2))).then(right_unitor(t.level(i1)))
            compare(rep, f"right counit at {i1},{i2}", rhs, t.truncate(n, i1), positions)
        for i1, i2 in itertools.product(range(n + 1), repeat=2):
            i3 = n - i1 - i2
            if i3 < 0:
                continue
            a, b, c = t.level(i1), t.level(i2), t.level(i3)
            lhs = t.phi(i1 + i2, i3).then(whisker_right(t.phi(i1, i2), c)).then(associator(a, b, c))
            rhs = t.phi(i1, i2 + i3).then(whisker_left(a, t.phi(i2, i3)))
            compare(rep, f"coassociativity at {i1},{i2},{i3}", lhs, rhs, positions)
    for i1, i2, i3 in itertools.product(range(total + 1), repeat=3):
        n = 1 + i1 + 1 + i2 + 1 + i3
        if n > t.depth or i1 + i2 + i3 > total:
            continue
        lhs = t.root_subtree_map(i1, i2 + 1 + i3).then(t.root_subtree_map(i2, i3))
        compare(rep, f"root subtree square at {i1},{i2},{i3}", lhs, t.root_subtree_map(i1 + 1 + i2, i3),
                t.positions(n))
    return rep


def direction_counts(t: CofreeTower) -> list[list[int]]:
    return [sorted(len(t.level(i).directions(x)) for x in t.positions(i)) for i in range(t.depth + 1)]


# -- the unit of the cofree adjunction ----------------------------------------------

def eta_tower(c: Comonoid, depth: int) -> tuple[CofreeTower, list[PolyMorphism]]:
    """η^(0) = ε and η^(1+i) = (y × (c ◁ η^(i))) ∘ (ε, δ): c -> c^(i)."""
    t = CofreeTower(c.carrier, depth)
    etas = [c.counit]
    for i in range(depth):
        eps_delta = pairing(c.counit, c.comult)
        step = prod_maps(identity(Y), whisker_left(c.carrier, etas[i]))
        eta = eps_delta.then(step)
        etas.append(PolyMorphism(c.carrier, t.level(i + 1), eta.pos, eta.dirs, f"η{i + 1}"))
    return t, etas


def check_eta_tower(c: Comonoid, depth: int) -> Report:
    t, etas = eta_tower(c, depth)
    rep = Report(f"η tower of {c.name}".strip())
    for problem in etas[-1].check():
        rep.fail(f"ill-formed η: {problem}")
    for i in range(depth):
        compare(rep, f"π{i} ∘ η{i + 1} = η{i}", etas[i + 1].then(t.projections[i]), etas[i])
    if depth >= 1:
        back = etas[1].then(projection(Y, t.level(1).q, 1)).then(right_unitor(c.carrier))
        compare(rep, "triangle", back, identity(c.carrier))
    for i1 in range(depth + 1):
        for i2 in range(depth + 1 - i1):
            lhs = etas[i1 + i2].then(t.phi(i1, i2))
            rhs = c.comult.then(compose_maps(etas[i1], etas[i2]))
            compare(rep, f"η respects comultiplication at {i1},{i2}", lhs, rhs)
    return rep


# -- lifting elementary handlers to the cofree tower -----------------------------------

@dataclass
class _Source:
    """The right-hand interface seen level by level: a comonoid (constant) or the cofree tower on q."""

    level: Callable[[int], Polynomial]
    counit: Callable[[int], PolyMorphism]      # D_i -> y
    split: Callable[[int], PolyMorphism]       # D_{1+i} -> D_1 ◁ D_i
    first: Callable[[PolyMorphism], PolyMorphism]   # s ◁ D_1 -> p ◁ s from the elementary φ


def _comonoid_source(d: Comonoid, phi: PolyMorphism) -> _Source:
    return _Source(lambda i: d.carrier, lambda i: d.counit, lambda i: d.comult, lambda s: phi)


def _tower_source(tq: CofreeTower, phi: PolyMorphism, s: Polynomial) -> _Source:
    q = tq.p
    to_q = projection(Y, tq.level(1).q, 1).then(right_unitor(q))
    return _Source(tq.level, tq.counit, lambda i: tq.phi(1, i), lambda s_: whisker_left(s, to_q).then(phi))


def _lift(p: Polynomial, s: Polynomial, src: _Source, depth: int) -> tuple[CofreeTower, list[PolyMorphism]]:
    tp = CofreeTower(p, depth)
    first = src.first(s)
    levels = []
    for i in range(depth + 1):
        d_i = src.level(i)
        if i == 0:
            f = whisker_left(s, src.counit(0)).then(right_unitor(s)).then(left_unitor_inv(s))
        else:
            d1, d_prev = src.level(1), src.level(i - 1)
            rest = (whisker_left(s, src.split(i - 1)).then(associator_inv(s, d1, d_prev))
                    .then(whisker_right(first, d_prev)).then(associator(p, s, d_prev))
                    .then(whisker_left(p, levels[i - 1])))
            here = whisker_left(s, src.counit(i)).then(right_unitor(s))
            f = pairing(rest, here).then(_regroup(p, tp.level(i - 1), tp.level(i), s))
        levels.append(PolyMorphism(Composite(s, d_i), Composite(tp.level(i), s), f.pos, f.dirs, f"Φ{i}"))
    return tp, levels


def _regroup(p: Polynomial, low: Polynomial, level: Polynomial, s: Polynomial) -> PolyMorphism:
    """(p ◁ (p^(i) ◁ s)) × s  ≅  (y × (p ◁ p^(i))) ◁ s."""
    src = Product(Composite(p, Composite(low, s)), s)
    dst = Composite(level, s)

    def on_pos(pos):
        (i, ks), sigma = pos
        top = (STAR, (i, tuple(t for t, _ in ks)))
        assigned = []
        for u in level.directions(top):
            if u == ROOT:
                assigned.append(sigma)
            else:
                _, (a, t) = u
                t_pos, ss = ks[p.dir_index(i)[a]]
                assigned.append(ss[low.dir_index(t_pos)[t]])
        return (top, tuple(assigned))

    def on_dirs(pos):
        target = on_pos(pos)
        out = {}
        for u, x in zip(level.directions(target[0]), target[1]):
            for z in s.directions(x):
                if u == ROOT:
                    out[(u, z)] = (1, z)
                else:
                    _, (a, t) = u
                    out[(u, z)] = (0, (a, (t, z)))
        return out

    return PolyMorphism(src, dst, on_pos, on_dirs, "regroup")


def lift_handler(h: ElementaryHandler, d: Comonoid, depth: int) -> tuple[CofreeTower, list[PolyMorphism]]:
    """Φ^(i): s ◁ d -> p^(i) ◁ s from an elementary (p, d)-handler."""
    if not h.q.same_as(d.carrier):
        raise InputError("handler interface is not the carrier of the comonoid")
    return _lift(h.p, h.s, _comonoid_source(d, h.phi), depth)


def lift_to_cofree(h: ElementaryHandler, depth: int) -> tuple[CofreeTower, CofreeTower, list[PolyMorphism]]:
    """Φ^(i): s ◁ q^(i) -> p^(i) ◁ s, the truncations of the induced (p̃, q̃)-handler."""
    tq = CofreeTower(h.q, depth)
    tp, levels = _lift(h.p, h.s, _tower_source(tq, h.phi, h.s), depth)
    return tp, tq, levels


def underlying(tp: CofreeTower, lifted: list[PolyMorphism], s: Polynomial) -> PolyMorphism:
    """Project Φ^(1) along p^(1) -> p to an elementary handler."""
    to_p = projection(Y, tp.level(1).q, 1).then(right_unitor(tp.p))
    return lifted[1].then(whisker_right(to_p, s))


def _check_lift_equations(rep: Report, tp: CofreeTower, lifted: list[PolyMorphism], s: Polynomial,
                          level, counit, split) -> None:
    depth = len(lifted) - 1
    for i in range(depth + 1):
        lhs = lifted[i].then(whisker_right(tp.counit(i), s)).then(left_unitor(s))
        rhs = whisker_left(s, counit(i)).then(right_unitor(s))
        compare(rep, f"counit at level {i}", lhs, rhs)
    for i1 in range(depth + 1):
        for i2 in range(depth + 1 - i1):
            a, b = tp.level(i1), tp.level(i2)
            d1, d2 = level(i1), level(i2)
            lhs = lifted[i1 + i2].then(whisker_right(tp.phi(i1, i2), s)).then(associator(a, b, s))
            first = PolyMorphism(Composite(s, d1), Composite(a, s), lifted[i1].pos, lifted[i1].dirs)
            rhs = (whisker_left(s, split(i1, i2)).then(associator_inv(s, d1, d2)).then(whisker_right(first, d2))
                   .then(associator(a, s, d2)).then(whisker_left(a, lifted[i2])))
            compare(rep, f"comultiplication at {i1},{i2}", lhs, rhs)


def check_lift(h: ElementaryHandler, d: Comonoid, depth: int) -> Report:
    """Round trip to φ, and the counit and comultiplication equations at each level."""
    rep = Report(f"lift of {h.name}".strip())
    tp, lifted = lift_handler(h, d, depth)
    if depth >= 1:
        back = underlying(tp, lifted, h.s)
        compare(rep, "underlying handler", back, h.phi)
        again = lift_handler(ElementaryHandler(h.p, h.q, h.s, back), d, depth)[1]
        for i in range(depth + 1):
            compare(rep, f"round trip at level {i}", again[i], lifted[i])
    _check_lift_equations(rep, tp, lifted, h.s, lambda i: d.carrier, lambda i: d.counit,
                          lambda i1, i2: d.comult)
    return rep


def check_lift_to_cofree(h: ElementaryHandler, depth: int) -> Report:
    """The truncations of the induced handler between cofree comonoids satisfy the handler equations."""
    rep = Report(f"cofree lift of {h.name}".strip())
    tp, tq, lifted = lift_to_cofree(h, depth)
    if depth >= 1:
        to_q = projection(Y, tq.level(1).q, 1).then(right_unitor(h.q))
        lhs = underlying(tp, lifted, h.s)
        rhs = whisker_left(h.s, to_q).then(h.phi)
        compare(rep, "underlying handler", lhs, rhs)
    _check_lift_equations(rep, tp, lifted, h.s, tq.level, tq.counit, tq.phi)
    return rep


# -- coalgebras and linear handlers ----------------------------------------------

@dataclass
class Coalgebra:
    """S -> [q, p] ◁ S: at each state a lens q -> p and, for each J and b ∈ p[lens(J)], a next state.

    step[s] = (on_pos {J: I}, on_dirs {J: {b: a}}, next {(J, b): s'}).
    """

    p: Polynomial
    q: Polynomial
    states: tuple
    step: dict
    name: str = ""


def check_coalgebra(m: Coalgebra) -> Report:
    rep = Report(f"coalgebra {m.name}".strip())
    states = set(m.states)
    for s in m.states:
        if s not in m.step:
            rep.fail(f"no step at state {s!r}")
            continue
        on_pos, on_dirs, nxt = m.step[s]
        for j in m.q.positions():
            rep.checked += 1
            i = on_pos.get(j)
            if not m.p.has_position(i):
                rep.fail(f"state {s!r} sends {j!r} to non-position {i!r}")
                continue
            for b in m.p.directions(i):
                if on_dirs.get(j, {}).get(b) not in set(m.q.directions(j)):
                    rep.fail(f"state {s!r}: direction {b!r} over {j!r} has no image")
                if nxt.get((j, b)) not in states:
                    rep.fail(f"state {s!r}: continuation at {(j, b)!r} leaves the state set")
    return rep


def coalgebra_to_handler(m: Coalgebra) -> ElementaryHandler:
    """(s, J) ↦ (lens_s(J), b ↦ next_s(J, b)); the direction (b, *) goes back to (*, lens♯(b))."""
    s = linear(m.states)
    src, dst = Composite(s, m.q), Composite(m.p, s)

    def on_pos(pos):
        state, (j,) = pos
        on_pos_, _, nxt = m.step[state]
        i = on_pos_[j]
        return (i, tuple(nxt[(j, b)] for b in m.p.directions(i)))

    def on_dirs(pos):
        state, (j,) = pos
        _, on_dirs_, _ = m.step[state]
        i = on_pos(pos)[0]
        return {(b, STAR): (STAR, on_dirs_[j][b]) for b in m.p.directions(i)}

    return ElementaryHandler(m.p, m.q, s, PolyMorphism(src, dst, on_pos, on_dirs, "φ"), m.name)


def handler_to_coalgebra(h: ElementaryHandler) -> Coalgebra:
    s = h.s
    if any(s.directions(x) != (STAR,) for x in s.positions()):
        raise InputError("handler carrier is not linear")
    step = {}
    for state in s.positions():
        on_pos, on_dirs, nxt = {}, {}, {}
        for j in h.q.positions():
            i, nexts = h.phi.pos((state, (j,)))
            back = h.phi.dirs((state, (j,)))
            on_pos[j] = i
            on_dirs[j] = {b: back[(b, STAR)][1] for b in h.p.directions(i)}
            for b, t in zip(h.p.directions(i), nexts):
                nxt[(j, b)] = t
        step[state] = (on_pos, on_dirs, nxt)
    return Coalgebra(h.p, h.q, s.positions(), step, h.name)


def same_coalgebra(m: Coalgebra, n: Coalgebra) -> bool:
    return tuple(m.states) == tuple(n.states) and all(m.step[s] == n.step[s] for s in m.states)


def compose_coalgebras(m: Coalgebra, n: Coalgebra) -> Coalgebra:
    """Wire n: [r, q] into m: [q, p]; states are pairs."""
    if not m.q.same_as(n.p):
        raise InputError("coalgebras do not share an interface")
    states = tuple((s, t) for s in m.states for t in n.states)
    step = {}
    for s, t in states:
        mpos, mdirs, mnext = m.step[s]
        npos, ndirs, nnext = n.step[t]
        on_pos, on_dirs, nxt = {}, {}, {}
        for k in n.q.positions():
            j = npos[k]
            i = mpos[j]
            on_pos[k] = i
            on_dirs[k] = {}
            for b in m.p.directions(i):
                a = mdirs[j][b]
                on_dirs[k][b] = ndirs[k][a]
                nxt[(k, b)] = (mnext[(j, b)], nnext[(k, a)])
        step[(s, t)] = (on_pos, on_dirs, nxt)
    return Coalgebra(m.p, n.q, states, step, f"{m.name};{n.name}")


def pair_states(m: Coalgebra, n: Coalgebra) -> PolyMorphism:
    """Sy ◁ Ty -> (S × T)y relabelling carriers of composed linear handlers."""
    src = Composite(linear(m.states), linear(n.states))
    dst = linear(tuple((s, t) for s in m.states for t in n.states))
    return PolyMorphism(src, dst, lambda pos: (pos[0], pos[1][0]), lambda pos: {STAR: (STAR, STAR)}, "pair")


def random_coalgebra(p: Polynomial, q: Polynomial, n_states: int, rng: random.Random, name: str = "") -> Coalgebra:
    states = tuple(range(n_states))
    step = {}
    for s in states:
        on_pos, on_dirs, nxt = {}, {}, {}
        for j in q.positions():
            i = rng.choice(p.positions())
            on_pos[j] = i
            on_dirs[j] = {b: rng.choice(q.directions(j)) for b in p.directions(i)}
            for b in p.directions(i):
                nxt[(j, b)] = rng.choice(states)
        step[s] = (on_pos, on_dirs, nxt)
    return Coalgebra(p, q, states, step, name)


def toggle_machine() -> Coalgebra:
    """p = q = 2y: output the current state; flip when the input is 1."""
    two = Poly({0: (STAR,), 1: (STAR,)})
    step = {}
    for s in (0, 1):
        step[s] = ({0: s, 1: s}, {0: {STAR: STAR}, 1: {STAR: STAR}}, {(0, STAR): s, (1, STAR): 1 - s})
    return Coalgebra(two, two, (0, 1), step, "toggle")


# -- behavior trees ---------------------------------------------------------------------

@dataclass(frozen=True)
class Node:
    state: Label
    position: Label
    children: tuple = field(default=())   # (direction of p, Node) pairs


def run_behavior_tree(m: Coalgebra, s0: Label, depth: int, inputs: Label, budget: int | None = DEFAULT_BUDGET
                      ) -> Node | Label:
    """Run the machine from s0 against a q-tree of the given depth (a position of q^(depth)).

    Each node records the state and the p-position emitted; the child along b continues in
    the next state against the q-subtree at the direction the lens picks.  Depth 0 is the
    bare state.
    """
    count = [0]

    def go(state, tree, n):
        count[0] += 1
        guard(count[0], budget, "behavior tree nodes")
        if n == 0:
            return state
        _, (j, subtrees) = tree
        on_pos, on_dirs, nxt = m.step[state]
        i = on_pos[j]
        kids = []
        for b in m.p.directions(i):
            a = on_dirs[j][b]
            kids.append((b, go(nxt[(j, b)], subtrees[m.q.dir_index(j)[a]], n - 1)))
        return Node(state, i, tuple(kids))

    if s0 not in set(m.states):
        raise InputError(f"unknown state {s0!r}")
    return go(s0, inputs, depth)


def tree_to_element(tp: CofreeTower, depth: int, tree) -> Label:
    """A behavior tree as a position of p^(depth) ◁ Sy: the p-tree and the states at its nodes."""
    def shape(t, n):
        if n == 0:
            return STAR
        return (STAR, (t.position, tuple(shape(c, n - 1) for _, c in t.children)))

    def state_at(t, path):
        if not path:
            return t if not isinstance(t, Node) else t.state
        kids = dict(t.children)
        return state_at(kids[path[0]], path[1:])

    pos = shape(tree, depth)
    return (pos, tuple(state_at(tree, path) for path in tp.paths(depth, pos)))


def render_tree(tree, indent: int = 0) -> str:
    pad = "  " * indent
    if not isinstance(tree, Node):
        return f"{pad}state {tree!r}"
    lines = [f"{pad}state {tree.state!r} emits {tree.position!r}"]
    for b, child in tree.children:
        lines.append(f"{pad}  along {b!r}:")
        lines.append(render_tree(child, indent + 2))
    return "\n".join(lines)


def tree_to_json(tree):
    if not isinstance(tree, Node):
        return {"state": tree}
    return {"state": tree.state, "position": tree.position,
            "children": [{"direction": b, "tree": tree_to_json(c)} for b, c in tree.children]}
