from __future__ import annotations

import random

import pytest

from catsharp.bicomod import (Bicomodule, bicomodule_associator, bicomodule_associator_inv,
                              bicomodule_to_copresheaf, category_span, check_bicomodule,
                              check_bicomodule_morphism, coclosure, coclosure_unit, coclosure_universal_check,
                              compose_bicomodules, compose_oracle, copresheaf_to_bicomodule, dagger,
                              enumerate_bicomodule_morphisms, evaluate_prafunctor, external_product,
                              external_product_copresheaf, find_bicomodule_iso, identity_bicomodule,
                              identity_morphism, is_isomorphism, isomorphic, left_unitor_bicomodule,
                              opposite_via_spans, pair_copresheaf, right_unitor_bicomodule, span_to_bicomodule,
                              sum_bicomodules, tensor_over, tensor_unit, to_span, vee)
from catsharp.comonoid import discrete, opposite_direct
from catsharp.copresheaf import (Copresheaf, check_copresheaf, coproduct, find_copresheaf_iso, representable,
                                 terminal)
from catsharp.fincore import FinFn, FinSet, InputError
from catsharp.poly import PolyMorphism
from catsharp.samples import composable_pairs, random_copresheaf, random_span
from catsharp.theory import delta_f, enumerate_functors

from helpers import coclosure_instances, corpus_pairs, evaluation_by_counting, rebased, triples


def corrupt_left(b: Bicomodule, i, k, value) -> Bicomodule:
    lam = b.lcoaction

    def pos(j):
        c, js = lam.pos(j)
        if j != i:
            return (c, js)
        idx = b.left.carrier.dir_index(c)[k]
        return (c, js[:idx] + (value,) + js[idx + 1:])

    return Bicomodule(b.left, b.right, b.carrier, PolyMorphism(b.carrier, lam.dst, pos, lam.dirs), b.rcoaction,
                      b.name + "*")


def test_identity_and_copresheaf_bicomodules(comonoids):
    for name, c in comonoids.items():
        assert check_bicomodule(identity_bicomodule(c)).ok, name
        x = random_copresheaf(c, random.Random(2), 2)
        bx = copresheaf_to_bicomodule(x)
        assert check_bicomodule(bx).ok, name
        assert find_copresheaf_iso(bicomodule_to_copresheaf(bx), x) is not None


def test_identity_bicomodule_carriers(comonoids):
    d = discrete("abc")
    assert identity_bicomodule(d).carrier.arities() == {1: 3}
    chain = comonoids["chain2"]
    assert sorted(identity_bicomodule(chain).carrier.arities().elements()) == [1, 2, 3]


def test_corrupted_left_coaction_fails(comonoids):
    c = comonoids["walking_arrow"]
    b = identity_bicomodule(c)
    bad = corrupt_left(b, "0", "0->1", "0")
    assert not check_bicomodule(bad).ok


def test_composition_matches_oracle_on_corpus(comonoids):
    for p, q in corpus_pairs(comonoids):
        pq = compose_bicomodules(p, q)
        assert check_bicomodule(pq).ok
        assert isomorphic(pq, compose_oracle(p, q)), (p.name, q.name)


def test_composition_matches_oracle_on_samples():
    for p, q in composable_pairs(seed=1, count=25):
        pq = compose_bicomodules(p, q)
        assert check_bicomodule(pq).ok, (p.name, q.name)
        assert isomorphic(pq, compose_oracle(p, q)), (p.name, q.name)


def test_composition_needs_a_common_middle(comonoids):
    with pytest.raises(InputError):
        compose_bicomodules(identity_bicomodule(comonoids["Z2"]), identity_bicomodule(comonoids["g"]))


def test_units_of_composition():
    for p, _ in composable_pairs(seed=4, count=12):
        lp = compose_bicomodules(identity_bicomodule(p.left), p)
        rp = compose_bicomodules(p, identity_bicomodule(p.right))
        for m in (left_unitor_bicomodule(p, lp), right_unitor_bicomodule(p, rp)):
            assert check_bicomodule_morphism(m).ok and is_isomorphism(m)


def test_associativity(comonoids):
    for p, q, r in triples(comonoids):
        pq_r = compose_bicomodules(compose_bicomodules(p, q), r)
        p_qr = compose_bicomodules(p, compose_bicomodules(q, r))
        assert isomorphic(pq_r, p_qr)
        a = bicomodule_associator(p, q, r, pq_r, p_qr)
        b = bicomodule_associator_inv(p, q, r, p_qr, pq_r)
        assert check_bicomodule_morphism(a).ok and is_isomorphism(a)
        assert a.then(b) == identity_morphism(pq_r)


def test_evaluation_matches_hom_formula(comonoids):
    rng = random.Random(13)
    for p, q in corpus_pairs(comonoids) + composable_pairs(seed=2, count=12):
        if q.right.objects:
            continue
        x = bicomodule_to_copresheaf(q)
        x = rebased(x, p.right)
        fx = evaluate_prafunctor(p, x)
        assert check_copresheaf(fx).ok
        assert fx.sizes() == evaluation_by_counting(p, x), (p.name, q.name)
        # the copresheaf case of composition computes the same thing
        composite = bicomodule_to_copresheaf(compose_bicomodules(p, copresheaf_to_bicomodule(x)))
        assert find_copresheaf_iso(rebased(composite, fx.base), fx) is not None
    for name in ["walking_arrow", "g", "Z2"]:
        c = comonoids[name]
        x = random_copresheaf(c, rng, 3)
        assert find_copresheaf_iso(rebased(evaluate_prafunctor(identity_bicomodule(c), x), c), x) is not None


def test_evaluation_is_functorial_under_composition():
    for p, q in composable_pairs(seed=3, count=18):
        if q.right.objects:
            continue
        x = bicomodule_to_copresheaf(q)
        r = identity_bicomodule(q.left)
        lhs = evaluate_prafunctor(compose_bicomodules(p, r), rebased(x, r.right))
        rhs = evaluate_prafunctor(p, rebased(evaluate_prafunctor(r, rebased(x, r.right)), p.right))
        assert find_copresheaf_iso(rebased(lhs, rhs.base), rhs) is not None


def test_evaluation_of_composites_on_spans():
    rng = random.Random(17)
    checked = 0
    for _ in range(12):
        p = random_span(2, 2, rng, name="p")
        q0 = random_span(2, 1, rng, name="q")
        q = Bicomodule(p.right, q0.right, q0.carrier, q0.lcoaction, q0.rcoaction, "q")
        x = random_copresheaf(q.right, rng, 3)
        lhs = evaluate_prafunctor(compose_bicomodules(p, q), x)
        rhs = evaluate_prafunctor(p, rebased(evaluate_prafunctor(q, x), p.right))
        assert find_copresheaf_iso(rebased(lhs, rhs.base), rhs) is not None
        checked += lhs.size()
    assert checked > 0


def test_restriction_along_functors(comonoids):
    rng = random.Random(19)
    for src, dst in [("walking_arrow", "chain2"), ("discrete2", "walking_arrow"), ("Z2", "Z2"), ("terminal", "g")]:
        for f in enumerate_functors(comonoids[src], comonoids[dst])[:4]:
            x = random_copresheaf(comonoids[dst], rng, 3)
            got = evaluate_prafunctor(delta_f(f), x)
            for obj in comonoids[src].objects:
                assert len(got.at[obj]) == len(x.at[f.on_objects[obj]])


@pytest.mark.parametrize("left,right,seed", [("walking_arrow", "Z2", 0), ("g", "chain2", 1), ("terminal", "g", 2),
                                             ("Z3", "walking_arrow", 3)])
def test_external_product(comonoids, left, right, seed):
    c, d = comonoids[left], comonoids[right]
    e = external_product(c, d)
    assert check_bicomodule(e).ok
    rng = random.Random(seed)
    x = coproduct(random_copresheaf(c, rng, 2), representable(c, c.objects[0]))
    y = coproduct(random_copresheaf(d, rng, 2), representable(d, d.objects[-1]))
    got = evaluate_prafunctor(e, rebased(pair_copresheaf(x, y), e.right))
    direct = external_product_copresheaf(x, y)
    assert min(direct.sizes().values()) >= 0 and direct.size() > 0
    for a, b in e.left.objects:
        assert len(got.at[(a, b)]) == len(x.at[a]) * len(y.at[b])
    assert find_copresheaf_iso(rebased(got, direct.base), direct) is not None


def test_coclosure_examples(comonoids):
    rng = random.Random(23)
    for name in ["walking_arrow", "Z2", "g"]:
        c = comonoids[name]
        p = copresheaf_to_bicomodule(random_copresheaf(c, rng, 2))
        closed = coclosure(p, identity_bicomodule(p.right))
        assert check_bicomodule(closed).ok
        assert set(closed.positions()) == set(p.positions())
        q = identity_bicomodule(c)
        closed = coclosure(q, q)
        assert check_bicomodule(closed).ok
        unit = coclosure_unit(q, q, closed)
        assert check_bicomodule_morphism(unit).ok
    for p, _ in composable_pairs(seed=6, count=6):
        d = identity_bicomodule(p.right)
        closed = coclosure(p, d)
        assert isomorphic(closed, p)
        unit = coclosure_unit(p, d, closed)
        assert check_bicomodule_morphism(unit).ok and is_isomorphism(unit)


def test_coclosure_universal_property_ten_instances():
    instances = coclosure_instances(seed=3, count=10)
    assert len(instances) == 10
    for p, q, r in instances:
        rep = coclosure_universal_check(p, q, r)
        assert rep.ok, rep.violations[:3]
        assert rep.checked >= 2


def test_coclosure_identity_corresponds_to_unit():
    for p, q, _ in coclosure_instances(seed=5, count=4):
        closed = coclosure(p, q)
        unit = coclosure_unit(p, q, closed)
        from catsharp.bicomod import transpose_to
        assert transpose_to(identity_morphism(closed), unit).underlying == unit.underlying


def test_coclosure_of_empty_is_trivial(comonoids):
    c = comonoids["walking_arrow"]
    empty = copresheaf_to_bicomodule(Copresheaf(c, {o: () for o in c.objects}, {o: {f: {} for f in c.out(o)}
                                                                                 for o in c.objects}))
    q = copresheaf_to_bicomodule(terminal(c), empty.right)
    rep = coclosure_universal_check(empty, q, tensor_unit(c, c))
    assert rep.ok and rep.checked == 2


def test_tensor_over_unit(comonoids):
    for name in ["walking_arrow", "Z2", "g"]:
        c = comonoids[name]
        p = sum_bicomodules(identity_bicomodule(c), identity_bicomodule(c))
        t = tensor_over(p, tensor_unit(c, c))
        assert check_bicomodule(t).ok
        assert isomorphic(t, p)


def test_tensor_over_discrete_is_fibrewise_tensor():
    rng = random.Random(29)
    for _ in range(6):
        p = random_span(2, 2, rng)
        q0 = random_span(2, 2, rng)
        q = Bicomodule(p.left, p.right, q0.carrier, q0.lcoaction, q0.rcoaction, "q")
        t = tensor_over(p, q)
        assert check_bicomodule(t).ok
        for i, j in t.positions():
            expected = sum(1 for a in p.directions(i) for b in q.directions(j) if p.dtype(i, a) == q.dtype(j, b))
            assert len(t.directions((i, j))) == expected
        assert len(t.positions()) == sum(len(q.over(p.base(i))) for i in p.positions())


def test_span_round_trips():
    rng = random.Random(31)
    for _ in range(8):
        b = random_span(2, 3, rng)
        s = to_span(b)
        again = span_to_bicomodule(s)
        assert to_span(again) == s


def test_identity_span(comonoids):
    d = discrete("ab")
    s = to_span(identity_bicomodule(d))
    assert len(s.A) == len(s.mid) == len(s.top) == 2


def test_category_span_and_dagger(comonoids):
    for name, c in comonoids.items():
        s = category_span(c)
        assert s.is_right_adjoint_form()
        for m in s.mid:
            assert s.toTop(m) in c.objects
        t = dagger(s)
        # c(1) ←dom c_*(1) = c_*(1) →cod c(1)
        assert t.is_left_adjoint_form()
        assert t.mid == s.mid and t.top == s.mid
        assert all(t.toB(m) == s.toTop(m) and t.toA(m) == s.toB(m) for m in s.mid)
        back = dagger(t)
        assert back.is_right_adjoint_form()
        pairs = lambda sp: sorted((repr(sp.toA(sp.toTop(m))), repr(sp.toB(m))) for m in sp.mid)
        assert pairs(back) == pairs(s)


def test_vee_examples():
    rng = random.Random(37)
    for _ in range(6):
        p = random_span(2, 1, rng)
        v = vee(p)
        assert check_bicomodule(v).ok
        for a in p.left.objects:
            product = 1
            for i in p.over(a):
                product *= len(p.directions(i))
            assert len(v.over(a)) == product
    # a left-adjoint span A ← C = C → A dualizes to A ← C → A = A
    A, C = FinSet(["a0", "a1"]), FinSet(["c0", "c1", "c2"])
    f = FinFn(C, A, {"c0": "a0", "c1": "a1", "c2": "a0"})
    g = FinFn(C, A, {"c0": "a1", "c1": "a1", "c2": "a0"})
    from catsharp.bicomod import SpanDiagram
    left_form = span_to_bicomodule(SpanDiagram(A, A, C, C, g, FinFn.identity(C), f))
    dual = to_span(vee(left_form))
    assert dual.is_right_adjoint_form()
    assert sorted((repr(dual.toA(dual.toTop(m))), repr(dual.toB(m))) for m in dual.mid) == \
        sorted((repr(f(c)), repr(g(c))) for c in C)


def test_opposites_via_spans(comonoids):
    for name, c in comonoids.items():
        b, rep = opposite_via_spans(c)
        assert rep.ok and rep.checked == 2, name
        assert check_bicomodule(b).ok
    z3 = comonoids["Z3"]
    b, _ = opposite_via_spans(z3)
    assert isomorphic(b, span_to_bicomodule(category_span(z3)))


def test_opposite_of_non_self_dual_differs(comonoids):
    c = comonoids["chain2"]
    b, _ = opposite_via_spans(c)
    # the chain is self-dual only up to relabelling objects, which spans over a fixed base cannot do
    assert not isomorphic(b, span_to_bicomodule(category_span(c)))
    assert isomorphic(b, span_to_bicomodule(category_span(opposite_direct(c))))


def test_morphism_enumeration_and_iso_search():
    rng = random.Random(41)
    for _ in range(6):
        p = random_span(2, 2, rng)
        ms = enumerate_bicomodule_morphisms(p, p)
        assert any(m == identity_morphism(p) for m in ms)
        assert all(check_bicomodule_morphism(m).ok for m in ms)
        assert find_bicomodule_iso(p, p) is not None
