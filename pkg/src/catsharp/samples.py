"""Seeded random micro-instances for property suites."""
from __future__ import annotations

import random

from .bicomod import Bicomodule, copresheaf_to_bicomodule, identity_bicomodule, span_to_bicomodule, SpanDiagram
from .comonoid import Comonoid, from_category
from .copresheaf import (Copresheaf, check_copresheaf, copresheaf_from_functions, coproduct,
                         enumerate_copresheaf_morphisms, representable)
from .corpus import categories
from .fincore import FinFn, FinSet


def corpus_comonoids() -> dict[str, Comonoid]:
    return {name: from_category(k, name) for name, k in categories().items()}


def random_copresheaf(c: Comonoid, rng: random.Random, max_size: int = 2, tries: int = 40,
                      name: str = "X") -> Copresheaf:
    """Random sets and actions, kept if functorial; otherwise a sum of representables."""
    for _ in range(tries):
        at = {obj: list(range(rng.randint(0, max_size))) for obj in c.objects}
        action = {}
        ok = True
        for obj in c.objects:
            action[obj] = {}
            for f in c.out(obj):
                target = at[c.cod(obj, f)]
                if f == c.identity(obj):
                    action[obj][f] = {x: x for x in at[obj]}
                elif at[obj] and not target:
                    ok = False
                    break
                else:
                    action[obj][f] = {x: rng.choice(target) for x in at[obj]}
            if not ok:
                break
        if ok:
            x = Copresheaf(c, at, action, name)
            if check_copresheaf(x).ok:
                return x
    x = representable(c, rng.choice(c.objects))
    for _ in range(rng.randint(0, 1)):
        x = coproduct(x, representable(c, rng.choice(c.objects)))
    return relabel(x, name)


def relabel(x: Copresheaf, name: str = "") -> Copresheaf:
    """Replace element labels by consecutive integers per object."""
    index = {obj: {e: n for n, e in enumerate(x.at[obj])} for obj in x.base.objects}
    at = {obj: list(range(len(x.at[obj]))) for obj in x.base.objects}
    back = {obj: dict(enumerate(x.at[obj])) for obj in x.base.objects}
    return copresheaf_from_functions(
        x.base, at, lambda obj, n, f: index[x.base.cod(obj, f)][x.act(obj, back[obj][n], f)], name or x.name)


def random_over(x: Copresheaf, rng: random.Random, max_size: int = 2, tries: int = 20):
    """A random copresheaf with a natural map to x, as (parts, proj)."""
    for _ in range(tries):
        parts = random_copresheaf(x.base, rng, max_size, name="P*")
        maps = enumerate_copresheaf_morphisms(parts, x)
        if maps:
            return parts, rng.choice(maps)
    parts = copresheaf_from_functions(x.base, {obj: [] for obj in x.base.objects}, lambda *a: None, "P*")
    return parts, {obj: {} for obj in x.base.objects}


def random_span(a: int, b: int, rng: random.Random, max_top: int = 3, max_fibre: int = 2,
                name: str = "") -> Bicomodule:
    """A random prafunctor between discrete categories on a and b objects."""
    A = FinSet(f"a{i}" for i in range(a))
    B = FinSet(f"b{i}" for i in range(b))
    tops = [f"t{i}" for i in range(rng.randint(0, max_top))] if a else []
    mids, to_b, to_top = [], {}, {}
    for t in tops:
        for k in range(rng.randint(0, max_fibre) if b else 0):
            m = f"{t}.{k}"
            mids.append(m)
            to_b[m] = rng.choice(B.elements)
            to_top[m] = t
    top, mid = FinSet(tops), FinSet(mids)
    to_a = {t: rng.choice(A.elements) for t in tops}
    s = SpanDiagram(A, B, mid, top, FinFn(mid, B, to_b), FinFn(mid, top, to_top), FinFn(top, A, to_a))
    return span_to_bicomodule(s, name)


def composable_pairs(seed: int, count: int = 25) -> list[tuple[Bicomodule, Bicomodule]]:
    """Seeded (c,d) and (d,e) bicomodule pairs of several flavours, none with an empty side."""
    from .polye import embed, random_copresheaf_polynomial
    from .theory import delta_f, elements_bicomodule, enumerate_functors

    rng = random.Random(seed)
    cats = corpus_comonoids()
    functor_pairs = [("walking_arrow", "chain2"), ("discrete2", "walking_arrow"), ("chain2", "walking_arrow"),
                     ("Z2", "Z2"), ("terminal", "g"), ("walking_arrow", "g")]
    functors = {pair: enumerate_functors(cats[pair[0]], cats[pair[1]]) for pair in functor_pairs}

    def delta(pair):
        return delta_f(rng.choice(functors[pair]))

    def make(kind):
        if kind == "spans":
            a, b, c = rng.randint(1, 2), rng.randint(1, 3), rng.randint(1, 2)
            p = random_span(a, b, rng, name="p")
            q = random_span(b, c, rng, name="q")
            # share the middle base object so composition sees equal comonoids
            return p, Bicomodule(p.right, q.right, q.carrier, q.lcoaction, q.rcoaction, q.name)
        if kind == "embed":
            base = cats[rng.choice(["walking_arrow", "g", "Z2", "chain2"])]
            return (embed(random_copresheaf_polynomial(base, rng, 3, "p")),
                    embed(random_copresheaf_polynomial(base, rng, 3, "q")))
        if kind == "delta-delta":
            first, second = rng.choice([(("walking_arrow", "chain2"), ("chain2", "walking_arrow")),
                                        (("discrete2", "walking_arrow"), ("walking_arrow", "chain2")),
                                        (("Z2", "Z2"), ("Z2", "Z2")), (("terminal", "g"), None)])
            p = delta(first)
            q = delta(second) if second else identity_bicomodule(p.right)
            return p, Bicomodule(p.right, q.right, q.carrier, q.lcoaction, q.rcoaction, q.name)
        if kind == "delta-copresheaf":
            p = delta(rng.choice(functor_pairs))
            return p, copresheaf_to_bicomodule(random_copresheaf(p.right, rng, 3))
        if kind == "identity-embed":
            c = cats[rng.choice(["walking_arrow", "Z2", "g", "chain2"])]
            return identity_bicomodule(c), embed(random_copresheaf_polynomial(c, rng, 3, "q"))
        c = cats[rng.choice(["walking_arrow", "Z2", "chain2", "discrete2"])]
        return elements_bicomodule(c), copresheaf_to_bicomodule(random_copresheaf(c, rng, 3))

    kinds = ["spans", "embed", "delta-delta", "delta-copresheaf", "identity-embed", "elements"]
    out: list[tuple[Bicomodule, Bicomodule]] = []
    while len(out) < count:
        p, q = make(kinds[len(out) % len(kinds)])
        if p.positions() and q.positions() and p.carrier.total_directions():
            out.append((p, q))
    return out
