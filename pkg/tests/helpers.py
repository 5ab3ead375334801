"""Shared test utilities: brute-force category builders and structure mutations."""
from __future__ import annotations

import itertools
import random
from math import comb

from catsharp.bicomod import (Bicomodule, category_span, copresheaf_to_bicomodule, identity_bicomodule,
                              span_to_bicomodule)
from catsharp.comonoid import Cofunctor, Comonoid, FinCategory, check_cofunctor
from catsharp.copresheaf import Copresheaf, terminal
from catsharp.dynamics import ComonoidHandler
from catsharp.poly import Y, PolyMorphism, enumerate_morphisms, left_unitor, right_unitor_inv
from catsharp.samples import random_copresheaf
from catsharp.theory import delta_f, elements_bicomodule, enumerate_functors


def product_by_pairs(k: FinCategory, l: FinCategory) -> FinCategory:
    """Product category built from all pairs, composites computed componentwise."""
    objects = list(itertools.product(k.objects, l.objects))
    out, cod, comp = {}, {}, {}
    for a, b in objects:
        out[(a, b)] = [("pair", f, g) for f in k.out[a] for g in l.out[b]]
        for _, f, g in out[(a, b)]:
            cod[("pair", f, g)] = (k.cod[f], l.cod[g])
    for (_, f, g) in [m for ms in out.values() for m in ms]:
        for (_, f2, g2) in out[(k.cod[f], l.cod[g])]:
            comp[(("pair", f, g), ("pair", f2, g2))] = ("pair", k.then(f, f2), l.then(g, g2))
    ident = {(a, b): ("pair", k.identity[a], l.identity[b]) for a, b in objects}
    return FinCategory(objects, out, cod, ident, comp, "pairs")


def disjoint_union(k: FinCategory, l: FinCategory) -> FinCategory:
    objects = [("L", a) for a in k.objects] + [("R", b) for b in l.objects]
    out, cod, comp, ident = {}, {}, {}, {}
    for tag, cat in (("L", k), ("R", l)):
        for a in cat.objects:
            out[(tag, a)] = [(tag, f) for f in cat.out[a]]
            ident[(tag, a)] = (tag, cat.identity[a])
        for f in cat.morphisms:
            cod[(tag, f)] = (tag, cat.cod[f])
        for (f, g), h in cat.comp.items():
            comp[((tag, f), (tag, g))] = (tag, h)
    return FinCategory(objects, out, cod, ident, comp, "union")


def with_comult(c: Comonoid, obj, f, g, value) -> Comonoid:
    """A copy of c whose comultiplication sends the direction (f, g) at obj to value."""
    base = c.comult

    def dirs(i):
        d = dict(base.dirs(i))
        if i == obj:
            d[(f, g)] = value
        return d

    return Comonoid(c.carrier, c.counit, PolyMorphism(c.carrier, base.dst, base.pos, dirs), c.name + "*")


def first_nontrivial_pair(c: Comonoid):
    """An object with a composable pair (f, g) and some other morphism with the same domain."""
    for obj in c.objects:
        for f in c.out(obj):
            for g in c.out(c.cod(obj, f)):
                h = c.compose(obj, f, g)
                others = [x for x in c.out(obj) if x != h]
                if others:
                    return obj, f, g, others[0]
    return None


def rebased(x: Copresheaf, base) -> Copresheaf:
    """The same copresheaf over an equal base object."""
    return Copresheaf(base, x.at, x.action, x.name)


def brute_morphisms(x: Copresheaf, y: Copresheaf) -> list[dict]:
    """All object-indexed families of functions, filtered by naturality on every morphism."""
    c = x.base
    objs = c.objects
    choices = [list(itertools.product(y.at[o], repeat=len(x.at[o]))) for o in objs]
    out = []
    for pick in itertools.product(*choices):
        h = {o: dict(zip(x.at[o], images)) for o, images in zip(objs, pick)}
        if all(h[c.cod(o, f)][x.act(o, e, f)] == y.act(o, h[o][e], f)
               for o in objs for e in x.at[o] for f in c.out(o)):
            out.append(h)
    return out


def coclosure_instances(seed: int, count: int = 10) -> list:
    """Seeded (p, q, r) with p: (c,e), q: (d,e), r: (c,d), keeping those where Hom(⟨p|q⟩, r) is nonempty."""
    import random

    from catsharp.bicomod import (Bicomodule, coclosure, copresheaf_to_bicomodule, enumerate_bicomodule_morphisms,
                                  identity_bicomodule, sum_bicomodules, tensor_unit)
    from catsharp.samples import corpus_comonoids, random_copresheaf, random_span

    cats = corpus_comonoids()
    rng = random.Random(seed)

    def rebase(b, left, right, name):
        return Bicomodule(left, right, b.carrier, b.lcoaction, b.rcoaction, name)

    def make(kind):
        if kind == "spans":
            a, b, e = rng.randint(1, 2), rng.randint(1, 2), rng.randint(1, 2)
            p = random_span(a, e, rng, name="p")
            q0 = random_span(b, e, rng)
            q = rebase(q0, q0.left, p.right, "q")
            r = rebase(random_span(a, b, rng), p.left, q.left, "r")
            return p, q, r
        c = cats[rng.choice(["walking_arrow", "Z2", "g", "discrete2"])]
        ident = identity_bicomodule(c)
        if kind == "identities":
            return ident, ident, sum_bicomodules(ident, ident)
        x = copresheaf_to_bicomodule(random_copresheaf(c, rng, 2))
        y = copresheaf_to_bicomodule(random_copresheaf(c, rng, 2), x.right)
        r = tensor_unit(c, c) if kind == "copresheaves" else sum_bicomodules(ident, tensor_unit(c, c))
        return x, y, r

    kinds = ["spans", "copresheaves", "identities", "copresheaves-sum"]
    out, seen, tries = [], 0, 0
    while len(out) < count and tries < 400:
        tries += 1
        p, q, r = make(kinds[seen % len(kinds)])
        seen += 1
        if enumerate_bicomodule_morphisms(coclosure(p, q), r):
            out.append((p, q, r))
    return out


def corpus_pairs(comonoids):
    """Composable pairs drawn from the corpus: identities, copresheaves, category spans, elements."""
    out = []
    for name, c in comonoids.items():
        ident = identity_bicomodule(c)
        x = copresheaf_to_bicomodule(terminal(c))
        span = span_to_bicomodule(category_span(c), "span")
        el = elements_bicomodule(c)
        out += [(ident, ident), (ident, x), (span, span), (el, x), (el, ident)]
    return out


def triples(comonoids):
    rng = random.Random(9)
    out = []
    for name in ["walking_arrow", "Z2", "g", "chain2"]:
        c = comonoids[name]
        ident = identity_bicomodule(c)
        span = span_to_bicomodule(category_span(c), "span")
        x = copresheaf_to_bicomodule(random_copresheaf(c, rng, 2))
        el = elements_bicomodule(c)
        out += [(ident, ident, x), (span, span, span), (el, ident, x), (ident, ident, ident)]
    for pair in [("walking_arrow", "chain2"), ("Z2", "Z2")]:
        f = rng.choice(enumerate_functors(comonoids[pair[0]], comonoids[pair[1]]))
        d = delta_f(f)
        y = copresheaf_to_bicomodule(random_copresheaf(d.right, rng, 2))
        out.append((d, identity_bicomodule(d.right), y))
    return out


def evaluation_by_counting(p: Bicomodule, x: Copresheaf) -> dict:
    """|F(X)_C| = Σ_{I over C} |Hom(p[I], X)|, with homs found by exhaustive filtering."""
    return {obj: sum(len(brute_morphisms(p.direction_copresheaf(i), x)) for i in p.over(obj))
            for obj in p.left.objects}


def monotone_count(a: int, b: int) -> int:
    """Order-preserving [a] -> [b] by stars and bars."""
    return comb(a + b + 1, a + 1)


def cofunctors(d, c):
    return [m for m in enumerate_morphisms(d.carrier, c.carrier) if check_cofunctor(Cofunctor(d, c, m)).ok]


def cofunctor_handler(c, d, m, name="F"):
    """A cofunctor d -> c read as a (c, d)-handler with carrier y."""
    phi = left_unitor(d.carrier).then(m).then(right_unitor_inv(c.carrier))
    return ComonoidHandler(c, d, Y, phi, name)
