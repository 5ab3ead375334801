from __future__ import annotations

import random

import pytest

from catsharp.comonoid import FinCategory, check_functor, find_category_iso
from catsharp.copresheaf import (Copresheaf, check_copresheaf, check_copresheaf_morphism, colimit_over_elements,
                                 coproduct, elements_category, empty, enumerate_copresheaf_morphisms,
                                 find_copresheaf_iso, product, representable, terminal)
from catsharp.samples import random_copresheaf
from catsharp.theory import vec

from helpers import brute_morphisms


def coslice(k: FinCategory, a) -> FinCategory:
    """a/k: objects the morphisms out of a, morphisms u -> u;g."""
    objects = list(k.out[a])
    out = {u: [(u, g) for g in k.out[k.cod[u]]] for u in objects}
    cod = {(u, g): k.then(u, g) for u in objects for g in k.out[k.cod[u]]}
    ident = {u: (u, k.identity[k.cod[u]]) for u in objects}
    comp = {((u, g), (k.then(u, g), h)): (u, k.then(g, h)) for (u, g) in cod for h in k.out[k.cod[g]]}
    return FinCategory(objects, out, cod, ident, comp, "coslice")


def test_terminal_and_representables_are_copresheaves(comonoids):
    for name, c in comonoids.items():
        assert check_copresheaf(terminal(c)).ok
        for obj in c.objects:
            assert check_copresheaf(representable(c, obj)).ok


def test_representable_examples(comonoids):
    disc = comonoids["discrete3"]
    x = representable(disc, "1")
    assert x.sizes() == {"0": 0, "1": 1, "2": 0}
    x = representable(comonoids["walking_arrow"], "0")
    assert x.sizes() == {"0": 1, "1": 1}
    x = representable(comonoids["g"], "v")
    assert x.sizes() == {"e": 0, "v": 1}


def corrupted(x: Copresheaf, obj, f, e, value) -> Copresheaf:
    action = {o: {g: dict(m) for g, m in x.action[o].items()} for o in x.action}
    action[obj][f][e] = value
    return Copresheaf(x.base, x.at, action, "bad")


def test_corrupted_action_fails(comonoids):
    z3 = comonoids["Z3"]
    x = representable(z3, "*")
    e0, e1 = x.at["*"][:2]
    assert check_copresheaf(x).ok
    assert not check_copresheaf(corrupted(x, "*", "1", e0, e0)).ok
    assert not check_copresheaf(corrupted(x, "*", z3.identity("*"), e0, e1)).ok
    arrow = comonoids["walking_arrow"]
    y = representable(arrow, "0")
    assert not check_copresheaf(corrupted(y, "0", "0->1", y.at["0"][0], "nowhere")).ok


@pytest.mark.parametrize("name", ["walking_arrow", "Z2", "g", "chain2", "discrete2", "Z3"])
def test_hom_enumeration_matches_brute_force(comonoids, name):
    c = comonoids[name]
    rng = random.Random(hash(name) % 1000)
    for _ in range(4):
        x = random_copresheaf(c, rng, 2)
        y = random_copresheaf(c, rng, 2)
        fast = enumerate_copresheaf_morphisms(x, y)
        slow = brute_morphisms(x, y)
        norm = lambda h: tuple(sorted((o, tuple(sorted(h[o].items(), key=repr))) for o in h))
        assert sorted(map(norm, fast)) == sorted(map(norm, slow))
        assert all(check_copresheaf_morphism(x, y, h).ok for h in fast)


def test_hom_examples(comonoids):
    for name, c in comonoids.items():
        rng = random.Random(1)
        x = random_copresheaf(c, rng, 2)
        assert len(enumerate_copresheaf_morphisms(x, terminal(c))) == 1
        assert len(enumerate_copresheaf_morphisms(empty(c), x)) == 1


def test_yoneda_counts(comonoids):
    for name, c in comonoids.items():
        rng = random.Random(7)
        for x in (terminal(c), random_copresheaf(c, rng, 2), random_copresheaf(c, rng, 3)):
            for obj in c.objects:
                assert len(enumerate_copresheaf_morphisms(representable(c, obj), x)) == len(x.at[obj]), name


def test_products(comonoids):
    for name in ["walking_arrow", "g", "Z2"]:
        c = comonoids[name]
        x = random_copresheaf(c, random.Random(3), 3)
        assert find_copresheaf_iso(product(x, terminal(c)), x) is not None
        assert check_copresheaf(product(x, x)).ok
    disc = comonoids["discrete2"]
    p = product(representable(disc, "0"), representable(disc, "0"))
    assert p.sizes() == {"0": 1, "1": 0}
    g = comonoids["g"]
    v1 = vec(1, g)
    sq = product(v1, v1)
    assert sq.sizes() == {"e": 1, "v": 4}
    s = coproduct(v1, v1)
    assert s.sizes() == {"e": 2, "v": 4}


def test_elements_category_of_terminal_is_base(corpus, comonoids):
    for name, c in comonoids.items():
        k, proj = elements_category(terminal(c))
        assert find_category_iso(k, corpus[name]) is not None, name
        assert check_functor(proj).ok


def test_elements_of_representable_is_coslice(corpus, comonoids):
    for name in ["walking_arrow", "chain2", "g", "Z2", "commuting_square"]:
        c, k = comonoids[name], corpus[name]
        for obj in c.objects:
            el, proj = elements_category(representable(c, obj))
            assert find_category_iso(el, coslice(k, obj)) is not None, (name, obj)
            assert check_functor(proj).ok


def test_elements_of_empty_is_empty(comonoids):
    k, _ = elements_category(empty(comonoids["g"]))
    assert k.objects == () and k.morphisms == ()


def test_colimit_single_element(comonoids):
    c = comonoids["terminal"]
    classes, _ = colimit_over_elements(terminal(c), lambda el: ["a", "b"], lambda el, f: {"a": "a", "b": "b"})
    assert len(classes) == 2


def test_colimit_of_constant_over_connected_is_one_copy(comonoids):
    for name in ["walking_arrow", "chain2", "g", "Z2"]:
        c = comonoids[name]
        classes, _ = colimit_over_elements(terminal(c), lambda el: ["*"], lambda el, f: {"*": "*"})
        assert len(classes) == 1, name


def test_colimit_over_discrete_is_disjoint_union(comonoids):
    c = comonoids["discrete3"]
    x = coproduct(terminal(c), representable(c, "0"))
    classes, _ = colimit_over_elements(x, lambda el: [1, 2], lambda el, f: {1: 1, 2: 2})
    assert len(classes) == 2 * x.size()


def test_colimit_of_representables_reproduces_values(comonoids):
    """X_D ≅ colim over elements (C, x) of Hom(C, D), the co-Yoneda presentation."""
    rng = random.Random(11)
    for name in ["walking_arrow", "chain2", "g", "Z2", "commuting_square"]:
        c = comonoids[name]
        x = random_copresheaf(c, rng, 3)
        for d in c.objects:
            def assign(el, d=d):
                return [f for f in c.out(el[0]) if c.cod(el[0], f) == d]

            def transport(el, f, d=d):
                obj = el[0]
                b = c.cod(obj, f)
                return {g: c.compose(obj, f, g) for g in c.out(b) if c.cod(b, g) == d}

            classes, _ = colimit_over_elements(x, assign, transport)
            assert len(classes) == len(x.at[d]), (name, d)
