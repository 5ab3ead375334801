"""Polynomials in a copresheaf topos E = a-Set and their embedding into (a,a)-bicomodules.

Only untyped polynomials P_* -> P are handled.  The dense generator is the Yoneda embedding,
so maps from the representable at A into P are elements of P_A.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .bicomod import (Bicomodule, BicomoduleMorphism, bicomodule_morphism, check_bicomodule,
                      check_bicomodule_morphism, compose_bicomodules, enumerate_bicomodule_morphisms,
                      find_bicomodule_iso, from_actions, identity_bicomodule, tensor_over, tensor_unit)
from .comonoid import Comonoid
from .copresheaf import (Copresheaf, check_copresheaf, check_copresheaf_morphism, copresheaf_from_functions,
                         enumerate_copresheaf_morphisms)
from .fincore import DEFAULT_BUDGET, ISO_BUDGET, InputError, Label, Report, guard, natural_maps
from .poly import Composite, Poly, find_iso


@dataclass
class CopresheafPolynomial:
    """A natural map proj: P_* -> P of copresheaves on `base`; proj[A][w] ∈ P_A."""

    base: Comonoid
    total: Copresheaf
    parts: Copresheaf
    proj: dict
    name: str = ""

    def fibre(self, obj: Label, x: Label) -> list:
        return [w for w in self.parts.at[obj] if self.proj[obj][w] == x]


def check_copresheaf_polynomial(p: CopresheafPolynomial) -> Report:
    rep = Report(f"copresheaf polynomial {p.name}".strip())
    if not (p.total.base.same_as(p.base) and p.parts.base.same_as(p.base)):
        rep.fail("copresheaves live over different bases")
        return rep
    rep.absorb(check_copresheaf(p.total), "P: ")
    rep.absorb(check_copresheaf(p.parts), "P*: ")
    if rep.ok:
        rep.absorb(check_copresheaf_morphism(p.parts, p.total, p.proj), "proj: ")
    return rep


def identity_polynomial(a: Comonoid) -> CopresheafPolynomial:
    """1 = 1: the unit for composition."""
    one = copresheaf_from_functions(a, {obj: ["*"] for obj in a.objects}, lambda obj, x, f: "*", "1")
    return CopresheafPolynomial(a, one, one, {obj: {"*": "*"} for obj in a.objects}, "id")


def from_polynomial(a: Comonoid, p: Poly) -> CopresheafPolynomial:
    """A polynomial over the terminal category: P = positions, P_* = all directions."""
    if len(a.objects) != 1 or len(a.out(a.objects[0])) != 1:
        raise InputError("ordinary polynomials live over the terminal category")
    obj = a.objects[0]
    total = copresheaf_from_functions(a, {obj: list(p.positions())}, lambda o, x, f: x, "P")
    parts_at = [(i, d) for i in p.positions() for d in p.directions(i)]
    parts = copresheaf_from_functions(a, {obj: parts_at}, lambda o, x, f: x, "P*")
    return CopresheafPolynomial(a, total, parts, {obj: {w: w[0] for w in parts_at}}, p.describe())


# -- the embedding -------------------------------------------------------------

def pulled_back_parts(p: CopresheafPolynomial, obj: Label, x: Label) -> Copresheaf:
    """x*P_* for x: y(A) -> P: at B, pairs (u: A -> B, w ∈ (P_*)_B) with proj(w) = x·u."""
    a = p.base
    at = {b: [] for b in a.objects}
    for u in a.out(obj):
        b = a.cod(obj, u)
        xu = p.total.act(obj, x, u)
        at[b].extend((u, w) for w in p.fibre(b, xu))

    def act(b, el, g):
        u, w = el
        return (a.compose(obj, u, g), p.parts.act(b, w, g))

    return copresheaf_from_functions(a, at, act, f"{x!r}*P*")


def embed(p: CopresheafPolynomial, name: str | None = None) -> Bicomodule:
    """Positions (A, x) with x ∈ P_A; directions at (A, x) are the elements of x*P_*."""
    a = p.base
    table = {}
    for obj in a.objects:
        for x in p.total.at[obj]:
            pulled = pulled_back_parts(p, obj, x)
            table[(obj, x)] = tuple(el for b in a.objects for el in pulled.at[b])
    carrier = Poly(table)

    def act(pos, f):
        obj, x = pos
        return (a.cod(obj, f), p.total.act(obj, x, f))

    def transport(pos, f):
        obj, _ = pos
        return {(u, w): (a.compose(obj, f, u), w) for u, w in carrier.directions(act(pos, f))}

    def dtype(pos, d):
        return a.cod(pos[0], d[0])

    def ract(pos, d, g):
        obj, _ = pos
        u, w = d
        return (a.compose(obj, u, g), p.parts.act(a.cod(obj, u), w, g))

    return from_actions(a, a, carrier, lambda pos: pos[0], act, transport, dtype, ract,
                        name if name is not None else f"embed({p.name})")


# -- composition in E ----------------------------------------------------------------

def compose_in_E(p: CopresheafPolynomial, q: CopresheafPolynomial,
                 budget: int | None = DEFAULT_BUDGET) -> CopresheafPolynomial:
    """p ◁ q: at A, pairs (x ∈ P_A, σ: x*P_* -> Q natural); the parts over (x, σ) at A are
    (w, v) with w ∈ (P_*)_A over x and v ∈ (Q_*)_A over σ(id_A, w)."""
    a = p.base
    if not a.same_as(q.base):
        raise InputError("polynomials over different bases")
    sections = {}
    total_at = {obj: [] for obj in a.objects}
    for obj in a.objects:
        for x in p.total.at[obj]:
            pulled = pulled_back_parts(p, obj, x)
            for sigma in enumerate_copresheaf_morphisms(pulled, q.total, budget=budget):
                key = _freeze(sigma)
                sections[(obj, x, key)] = sigma
                total_at[obj].append((x, key))
            guard(len(total_at[obj]), budget, "positions of a composite in E")

    def act_total(obj, r, f):
        x, key = r
        sigma = sections[(obj, x, key)]
        b = a.cod(obj, f)
        x2 = p.total.act(obj, x, f)
        moved = {c: {} for c in a.objects}
        for u2 in a.out(b):
            c = a.cod(b, u2)
            for w in p.fibre(c, p.total.act(b, x2, u2)):
                moved[c][(u2, w)] = sigma[c][(a.compose(obj, f, u2), w)]
        return (x2, _freeze(moved))

    total = copresheaf_from_functions(a, total_at, act_total, "P◁Q")
    parts_at = {obj: [] for obj in a.objects}
    proj = {obj: {} for obj in a.objects}
    for obj in a.objects:
        ident = a.identity(obj)
        for r in total_at[obj]:
            x, key = r
            sigma = sections[(obj, x, key)]
            for w in p.fibre(obj, x):
                for v in q.fibre(obj, sigma[obj][(ident, w)]):
                    parts_at[obj].append((r, w, v))
                    proj[obj][(r, w, v)] = r

    def act_parts(obj, el, f):
        r, w, v = el
        return (act_total(obj, r, f), p.parts.act(obj, w, f), q.parts.act(obj, v, f))

    parts = copresheaf_from_functions(a, parts_at, act_parts, "(P◁Q)*")
    return CopresheafPolynomial(a, total, parts, proj, f"{p.name}◁{q.name}")


def _freeze(sigma: dict) -> tuple:
    return tuple((obj, tuple(sorted(m.items(), key=repr))) for obj, m in sorted(sigma.items(), key=repr))


def check_composition_preserved(p: CopresheafPolynomial, q: CopresheafPolynomial,
                                budget: int | None = ISO_BUDGET) -> Report:
    """embed(p ◁ q) ≅ embed(p) ◁_a embed(q)."""
    rep = Report(f"embedding preserves {p.name}◁{q.name}")
    composite = compose_in_E(p, q)
    rep.absorb(check_copresheaf_polynomial(composite), "composite: ")
    lhs = embed(composite)
    rhs = compose_bicomodules(embed(p), embed(q))
    rep.checked += 1
    if find_bicomodule_iso(lhs, rhs, budget) is None:
        rep.fail(f"no isomorphism between embed({p.name}◁{q.name}) and the composite of embeddings")
    return rep


def check_identity_preserved(a: Comonoid) -> Report:
    rep = Report("embedding preserves the identity")
    e = embed(identity_polynomial(a))
    rep.absorb(check_bicomodule(e))
    rep.checked += 1
    if find_bicomodule_iso(e, identity_bicomodule(a)) is None:
        rep.fail("embed(1 = 1) is not the identity bicomodule")
    return rep


def set_composite_matches(p: Poly, q: Poly) -> bool:
    """Over the terminal category, compose_in_E agrees with ordinary composition."""
    from .samples import corpus_comonoids
    a = corpus_comonoids()["terminal"]
    composite = embed(compose_in_E(from_polynomial(a, p), from_polynomial(a, q))).carrier
    return find_iso(Poly(composite.table()), Composite(p, q).materialize()) is not None


# -- morphisms and full faithfulness ----------------------------------------------

@dataclass
class EMorphism:
    """f: P -> Q and f♯: f*Q_* -> P_* over P; sharp[A][(x, v)] ∈ (P_*)_A."""

    src: CopresheafPolynomial
    dst: CopresheafPolynomial
    on_total: dict
    sharp: dict


def _pullback_of_parts(p: CopresheafPolynomial, q: CopresheafPolynomial, f: dict) -> Copresheaf:
    a = p.base
    at = {obj: [(x, v) for x in p.total.at[obj] for v in q.fibre(obj, f[obj][x])] for obj in a.objects}
    return copresheaf_from_functions(
        a, at, lambda obj, el, g: (p.total.act(obj, el[0], g), q.parts.act(obj, el[1], g)), "f*Q*")


def enumerate_E_morphisms(p: CopresheafPolynomial, q: CopresheafPolynomial,
                          budget: int | None = DEFAULT_BUDGET) -> list[EMorphism]:
    a = p.base
    out = []
    for f in enumerate_copresheaf_morphisms(p.total, q.total, budget=budget):
        pulled = _pullback_of_parts(p, q, f)

        def arrows(el, pulled=pulled):
            obj, e = el
            return [(g, (a.cod(obj, g), pulled.act(obj, e, g))) for g in a.out(obj)]

        def candidates(el):
            obj, (x, _) = el
            return [(obj, w) for w in p.fibre(obj, x)]

        def act(image, g):
            obj, w = image
            return (a.cod(obj, g), p.parts.act(obj, w, g))

        for h in natural_maps(pulled.elements(), arrows, candidates, act, budget=budget):
            sharp = {obj: {} for obj in a.objects}
            for (obj, e), (_, w) in h.items():
                sharp[obj][e] = w
            out.append(EMorphism(p, q, f, sharp))
            guard(len(out), budget, "morphisms in E")
    return out


def embed_morphism(m: EMorphism, src: Bicomodule | None = None, dst: Bicomodule | None = None
                   ) -> BicomoduleMorphism:
    """(A, x) ↦ (A, f x); the direction (u, v) over (A, f x) goes back to (u, f♯(x·u, v))."""
    p, a = m.src, m.src.base
    src = src or embed(m.src)
    dst = dst or embed(m.dst)

    def on_pos(pos):
        obj, x = pos
        return (obj, m.on_total[obj][x])

    def on_dirs(pos):
        obj, x = pos
        out = {}
        for u, v in dst.directions(on_pos(pos)):
            b = a.cod(obj, u)
            out[(u, v)] = (u, m.sharp[b][(p.total.act(obj, x, u), v)])
        return out

    return bicomodule_morphism(src, dst, on_pos, on_dirs, "embed")


def full_faithfulness_probe(p: CopresheafPolynomial, q: CopresheafPolynomial,
                            budget: int | None = DEFAULT_BUDGET) -> Report:
    """|Hom_E(p, q)| = |Hom(embed p, embed q)|, and embedding morphisms is injective with
    every image a bicomodule morphism."""
    rep = Report(f"full faithfulness on {p.name} -> {q.name}")
    ep, eq = embed(p), embed(q)
    e_maps = enumerate_E_morphisms(p, q, budget)
    b_maps = enumerate_bicomodule_morphisms(ep, eq, budget)
    rep.checked += 1
    if len(e_maps) != len(b_maps):
        rep.fail(f"|Hom_E| = {len(e_maps)} but |Hom_bicomod| = {len(b_maps)}")
    images = set()
    for m in e_maps:
        bm = embed_morphism(m, ep, eq)
        rep.absorb(check_bicomodule_morphism(bm), "image: ")
        images.add(bm.underlying.key())
    targets = {bm.underlying.key() for bm in b_maps}
    rep.checked += 1
    if images != targets:
        rep.fail(f"embedding hits {len(images & targets)} of {len(targets)} bicomodule morphisms")
    return rep


# -- monoidal comparison ----------------------------------------------------------------

def product_polynomial(p: CopresheafPolynomial, q: CopresheafPolynomial) -> CopresheafPolynomial:
    """P_* × Q_* -> P × Q, the Dirichlet-style product in E."""
    a = p.base
    total = copresheaf_from_functions(
        a, {obj: [(x, y) for x in p.total.at[obj] for y in q.total.at[obj]] for obj in a.objects},
        lambda obj, e, g: (p.total.act(obj, e[0], g), q.total.act(obj, e[1], g)), "P×Q")
    parts = copresheaf_from_functions(
        a, {obj: [(w, v) for w in p.parts.at[obj] for v in q.parts.at[obj]] for obj in a.objects},
        lambda obj, e, g: (p.parts.act(obj, e[0], g), q.parts.act(obj, e[1], g)), "P*×Q*")
    proj = {obj: {(w, v): (p.proj[obj][w], q.proj[obj][v]) for (w, v) in parts.at[obj]} for obj in a.objects}
    return CopresheafPolynomial(a, total, parts, proj, f"{p.name}⊗{q.name}")


def lax_tensor_comparison(p: CopresheafPolynomial, q: CopresheafPolynomial) -> BicomoduleMorphism:
    """embed p ⊗_{a,a} embed q -> embed(p ⊗ q): ((A, x), (A, y)) ↦ (A, (x, y)); the direction
    (u, (w, v)) goes back to the pair ((u, w), (u, v)) of the fibre product."""
    src = tensor_over(embed(p), embed(q))
    dst = embed(product_polynomial(p, q))

    def on_pos(pos):
        (obj, x), (_, y) = pos
        return (obj, (x, y))

    def on_dirs(pos):
        return {(u, (w, v)): ((u, w), (u, v)) for u, (w, v) in dst.directions(on_pos(pos))}

    return bicomodule_morphism(src, dst, on_pos, on_dirs, "lax ⊗")


def unit_comparison(a: Comonoid) -> BicomoduleMorphism:
    """a(1) y^{a(1)} -> embed(1 = 1): A ↦ (A, *), and (u, *) goes back to cod u."""
    src = tensor_unit(a, a)
    dst = embed(identity_polynomial(a))
    return bicomodule_morphism(src, dst, lambda obj: (obj, "*"),
                               lambda obj: {(u, w): a.cod(obj, u) for u, w in dst.directions((obj, "*"))},
                               "unit")


def direction_injective(m: BicomoduleMorphism) -> bool:
    return all(len(set(m.dirs(i).values())) == len(m.dirs(i)) for i in m.src.positions())


def direction_surjective(m: BicomoduleMorphism) -> bool:
    return all(set(m.dirs(i).values()) == set(m.src.directions(i)) for i in m.src.positions())


def check_lax_comparison(p: CopresheafPolynomial, q: CopresheafPolynomial) -> Report:
    rep = Report(f"lax ⊗ comparison for {p.name}, {q.name}")
    m = lax_tensor_comparison(p, q)
    rep.absorb(check_bicomodule(m.src), "source: ")
    rep.absorb(check_bicomodule(m.dst), "target: ")
    rep.absorb(check_bicomodule_morphism(m))
    rep.checked += 1
    if not direction_injective(m):
        rep.fail("comparison is not injective on directions")
    u = unit_comparison(p.base)
    rep.absorb(check_bicomodule_morphism(u), "unit: ")
    return rep


# -- random instances -------------------------------------------------------------------

def random_copresheaf_polynomial(a: Comonoid, rng: random.Random, max_size: int = 2,
                                 name: str | None = None) -> CopresheafPolynomial:
    from .samples import random_copresheaf, random_over
    total = random_copresheaf(a, rng, max_size, name="P")
    parts, proj = random_over(total, rng, max_size)
    return CopresheafPolynomial(a, total, parts, proj, name or f"r{rng.randrange(10**4)}")
