from __future__ import annotations

import itertools
import random

import pytest

from catsharp.bicomod import (bicomodule_morphism, check_bicomodule, compose_bicomodules,
                              copresheaf_to_bicomodule, evaluate_prafunctor, identity_bicomodule, isomorphic)
from catsharp.comonoid import (check_isomorphism, find_category_iso, opposite_direct, to_category)
from catsharp.copresheaf import Copresheaf, copresheaf_from_functions, find_copresheaf_iso, representable, terminal
from catsharp.corpus import chain, terminal as terminal_category
from catsharp.fincore import InputError
from catsharp.comonoid import from_category
from catsharp.samples import random_copresheaf
from catsharp.theory import (ComonoidFunctor, LeftModule, category_graph, chains, check_left_comodule,
                             check_left_module, check_monad, comodule_to_copresheaf, compare_nerve_with_chains,
                             compose_functors, copresheaf_to_comodule, delta_f, elements_bicomodule, elements_graph,
                             enumerate_functors, free_module, graph_base, identity_functor, identity_monad,
                             lawvere_list, list_monad, monotone_maps, nerve, path_algebra, path_monad,
                             simplex_category, theta, theta_to_simplex, vec)

from helpers import monotone_count, rebased


def paths(graph: Copresheaf, max_len: int) -> list:
    """Vertex-anchored edge sequences of length ≤ max_len, by extending one edge at a time."""
    src = lambda e: graph.act("e", e, "s")
    tgt = lambda e: graph.act("e", e, "t")
    out = [(v, ()) for v in graph.at["v"]]
    frontier = list(out)
    for _ in range(max_len):
        frontier = [(v, es + (e,)) for v, es in frontier for e in graph.at["e"]
                    if src(e) == (tgt(es[-1]) if es else v)]
        out += frontier
    return out


def cycle_graph(n: int) -> Copresheaf:
    g = graph_base()
    at = {"v": list(range(n)), "e": [("a", i) for i in range(n)]}
    return copresheaf_from_functions(g, at, lambda obj, x, f: x if f.startswith("id") else
                                     (x[1] if f == "s" else (x[1] + 1) % n))


def test_graph_base_and_vec():
    g = graph_base()
    assert len(g.objects) == 2 and g.morphism_count() == 4
    assert vec(0).sizes() == {"e": 0, "v": 1}
    assert vec(2).sizes() == {"e": 2, "v": 3}
    x = vec(2)
    assert [x.act("e", e, "s") for e in x.at["e"]] == [("v", 0), ("v", 1)]


def test_path_monad_guards():
    with pytest.raises(InputError):
        path_monad(0)


def test_identity_monad_laws(comonoids):
    for name in ["walking_arrow", "Z2", "g", "chain2"]:
        assert check_monad(identity_monad(comonoids[name])).ok


def test_path_monad_laws_at_four():
    rep = check_monad(path_monad(4))
    assert rep.ok, rep.violations[:3]
    assert rep.checked > 0 and rep.coverage == 1.0


def test_list_monad_laws_at_four():
    rep = check_monad(list_monad(4))
    assert rep.ok and rep.checked > 0


def test_path_monad_is_free_category():
    m = path_monad(3)
    fx = evaluate_prafunctor(m.carrier, vec(1))
    assert fx.sizes() == {"v": 2, "e": 3}
    cyc = cycle_graph(2)
    fx = evaluate_prafunctor(m.carrier, cyc)
    assert len(fx.at["e"]) == 8 == len(paths(cyc, 3))
    for n, graph in [(2, vec(2)), (3, cycle_graph(3)), (2, cycle_graph(1))]:
        fx = evaluate_prafunctor(path_monad(n).carrier, graph)
        assert len(fx.at["e"]) == len(paths(graph, n))
        assert len(fx.at["v"]) == len(graph.at["v"])


def test_theta_of_identity_monad_is_opposite(comonoids):
    for name in ["walking_arrow", "Z2", "g", "chain2", "commuting_square"]:
        c = comonoids[name]
        th = theta(identity_monad(c))
        assert th.report.ok, name
        assert find_category_iso(th.category, to_category(opposite_direct(c))) is not None, name


def test_monotone_maps_enumeration():
    for a, b in itertools.product(range(4), repeat=2):
        assert len(monotone_maps(a, b)) == monotone_count(a, b)
    assert len(monotone_maps(1, 1)) == 3 and len(monotone_maps(1, 2)) == 6


def test_theta_path_is_simplex_category(theta_path4):
    th = theta_path4
    assert th.report.ok, th.report.violations[:3]
    k = th.category
    dim = {o: 0 if o == "v" else o[1] for o in k.objects}
    assert sorted(dim.values()) == [0, 0, 1, 2, 3, 4]
    for a, b in itertools.product(k.objects, repeat=2):
        assert len(k.hom(a, b)) == monotone_count(dim[a], dim[b]), (a, b)
    assert len(k.hom(("e", 1), ("e", 1))) == 3
    assert len(k.hom(("e", 1), ("e", 2))) == 6
    iso = theta_to_simplex(th, 4)
    assert check_isomorphism(iso).ok
    # the duplicated [0] is isomorphic to [0]
    f = k.hom("v", ("e", 0))
    assert len(f) == 1 and k.is_iso(f[0])


def test_theta_path_three_matches_kleisli():
    th = theta(path_monad(3))
    assert th.report.ok
    assert find_category_iso(th.category, simplex_category(3)) is not None


def test_lawvere_list_small():
    m, th = lawvere_list(2)
    assert th.report.ok
    k = th.category
    words = lambda gens: sum(gens ** n for n in range(3))
    for n, g in itertools.product(k.objects, repeat=2):
        assert len(k.hom(n, g)) == words(g) ** n
    assert len(k.hom(1, 1)) == 3 and len(k.hom(2, 1)) == 9
    # the unit operation of arity one is the identity
    assert k.identity[1] in k.hom(1, 1)


def test_lawvere_list_three_routes_agree():
    m, th = lawvere_list(3)
    assert th.report.ok, th.report.violations[:3]
    k = th.category
    for n, g in itertools.product(k.objects, repeat=2):
        assert len(k.hom(n, g)) == sum(g ** w for w in range(4)) ** n


def test_free_and_category_modules(comonoids, corpus):
    m = path_monad(3)
    x = copresheaf_to_bicomodule(vec(1, m.base))
    assert check_left_module(free_module(m, x)).ok
    for name in ["walking_arrow", "Z2", "chain2", "g"]:
        assert check_left_module(path_algebra(m, corpus[name])).ok, name


def test_corrupted_action_fails(corpus):
    m = path_monad(3)
    good = path_algebra(m, corpus["walking_arrow"])
    act = good.action

    def on_pos(pos):
        i, js = pos
        if i != "v" and i[1] == 0:
            return ("e", "0->1")     # identities sent to the non-identity arrow
        return act.pos(pos)

    bad = LeftModule(m, good.carrier, bicomodule_morphism(act.src, act.dst, on_pos, lambda pos: {}), "bad")
    assert not check_left_module(bad).ok


def test_nerve_of_walking_arrow(theta_path3, corpus):
    k = corpus["walking_arrow"]
    nv = nerve(theta_path3, path_algebra(theta_path3.monad, k))
    sizes = {0 if o == "v" else o[1]: len(nv.copresheaf.at[o]) for o in nv.copresheaf.base.objects if o != "v"}
    assert sizes == {0: 2, 1: 3, 2: 4, 3: 5}
    assert [len(chains(k, n)) for n in range(4)] == [2, 3, 4, 5]


def test_nerves_match_chains(theta_path3, corpus):
    for name, k in corpus.items():
        nv = nerve(theta_path3, path_algebra(theta_path3.monad, k))
        rep = compare_nerve_with_chains(nv, k, 3)
        assert rep.ok and rep.checked > 0, name


def test_nerve_of_terminal_algebra(theta_path3):
    nv = nerve(theta_path3, path_algebra(theta_path3.monad, terminal_category()))
    assert all(len(v) == 1 for v in nv.copresheaf.at.values())


def test_nerve_comodule_laws_and_transport(theta_path3, corpus):
    th = theta_path3
    for name in ["walking_arrow", "Z2"]:
        nv = nerve(th, path_algebra(th.monad, corpus[name]))
        assert check_left_comodule(nv.comodule).ok, name
        x = comodule_to_copresheaf(nv.comodule, th.comonoid)
        back = copresheaf_to_comodule(x, th.comonad, th.counit, th.comult, nv.comodule.carrier)
        assert back.coaction.underlying == nv.comodule.coaction.underlying
        again = comodule_to_copresheaf(back, th.comonoid)
        assert again.at == x.at and again.action == x.action


def transported(x: Copresheaf, th):
    """A k-copresheaf as a (d, 0)-bicomodule, d acting through the lifts given by the counit k -> d."""
    k, counit, d = th.comonoid, th.counit, th.comonad.left
    tag = {(i, e): (counit.pos(i), (i, e)) for i in k.objects for e in x.at[i]}
    at = {obj: [(i, e) for i in k.objects if counit.pos(i) == obj for e in x.at[i]] for obj in d.objects}

    def act(obj, el, g):
        i, e = el
        u = counit.dirs(i)[g]
        return (k.cod(i, u), x.act(i, e, u))

    carrier = copresheaf_to_bicomodule(copresheaf_from_functions(d, at, act))
    tagged = Copresheaf(k, {i: [tag[(i, e)] for e in x.at[i]] for i in k.objects},
                        {i: {u: {tag[(i, e)]: tag[(k.cod(i, u), x.act(i, e, u))] for e in x.at[i]}
                             for u in k.out(i)} for i in k.objects})
    return tagged, carrier


def test_transport_of_representables(theta_path3):
    th = theta_path3
    for i in th.comonoid.objects:
        tagged, carrier = transported(representable(th.comonoid, i), th)
        cm = copresheaf_to_comodule(tagged, th.comonad, th.counit, th.comult, carrier)
        assert check_left_comodule(cm).ok, i
        back = comodule_to_copresheaf(cm, th.comonoid)
        assert back.at == tagged.at and back.action == tagged.action


def test_comodule_transport_identity_comonad(comonoids):
    # with k the identity bicomodule, a copresheaf round trips unchanged
    from catsharp.bicomod import identity_morphism, left_unitor_bicomodule_inv
    c = comonoids["walking_arrow"]
    k = identity_bicomodule(c)
    x = random_copresheaf(c, random.Random(5), 3)
    tagged = Copresheaf(c, {o: [(o, e) for e in x.at[o]] for o in c.objects},
                        {o: {f: {(o, e): (c.cod(o, f), x.act(o, e, f)) for e in x.at[o]} for f in c.out(o)}
                         for o in c.objects})
    carrier = copresheaf_to_bicomodule(x)
    counit = identity_morphism(k)
    comult = left_unitor_bicomodule_inv(k)
    cm = copresheaf_to_comodule(tagged, k, counit, comult, carrier)
    assert check_left_comodule(cm).ok
    back = comodule_to_copresheaf(cm, c)
    assert back.at == tagged.at and back.action == tagged.action


def test_elements_bicomodule_gives_graph_of_elements(comonoids, corpus):
    rng = random.Random(43)
    for name, c in comonoids.items():
        e = elements_bicomodule(c)
        assert check_bicomodule(e).ok, name
        for x in (terminal(c), random_copresheaf(c, rng, 2), representable(c, c.objects[0])):
            got = evaluate_prafunctor(e, x)
            expected = elements_graph(x, e.left)
            assert find_copresheaf_iso(rebased(got, expected.base), expected) is not None, name
        got = evaluate_prafunctor(e, terminal(c))
        assert find_copresheaf_iso(rebased(got, e.left), category_graph(corpus[name], e.left)) is not None


def test_elements_bicomodule_on_discrete(comonoids):
    c = comonoids["discrete3"]
    x = random_copresheaf(c, random.Random(47), 3)
    got = evaluate_prafunctor(elements_bicomodule(c), x)
    assert len(got.at["v"]) == x.size() == len(got.at["e"])


def test_delta_of_identity_is_identity(comonoids):
    for name in ["walking_arrow", "Z2", "g", "chain2"]:
        c = comonoids[name]
        assert isomorphic(delta_f(identity_functor(c)), identity_bicomodule(c))


def test_delta_composes(comonoids):
    c2 = from_category(chain(2), "chain2")
    c1 = comonoids["walking_arrow"]
    point = comonoids["terminal"]
    for f in enumerate_functors(c1, c2):
        for g in enumerate_functors(c2, point):
            lhs = delta_f(compose_functors(f, g))
            rhs = compose_bicomodules(delta_f(f), delta_f(g))
            assert isomorphic(lhs, rhs)
    for f in enumerate_functors(c1, c2)[:5]:
        for g in enumerate_functors(c2, c1)[:5]:
            assert isomorphic(delta_f(compose_functors(f, g)), compose_bicomodules(delta_f(f), delta_f(g)))


def test_delta_applied_to_terminal(comonoids):
    for src, dst in [("walking_arrow", "chain2"), ("Z2", "Z2"), ("terminal", "g"), ("g", "walking_arrow")]:
        c, d = comonoids[src], comonoids[dst]
        for f in enumerate_functors(c, d)[:3]:
            out = compose_bicomodules(delta_f(f), copresheaf_to_bicomodule(terminal(d)))
            assert all(len(out.over(obj)) == 1 for obj in c.objects)


def test_delta_rejects_non_functors(comonoids):
    c, d = comonoids["walking_arrow"], comonoids["discrete2"]
    bad = ComonoidFunctor(c, d, {"0": "0", "1": "1"}, {("0", "0->0"): "id0", ("0", "0->1"): "id0",
                                                       ("1", "1->1"): "id1"})
    with pytest.raises(InputError):
        delta_f(bad)
