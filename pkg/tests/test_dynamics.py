from __future__ import annotations

import random

import pytest

from catsharp.bicomod import compose_bicomodules, isomorphic
from catsharp.comonoid import Cofunctor, check_cofunctor, check_cofunctor_pointwise
from catsharp.dynamics import (ComonoidHandler, ElementaryHandler, Node, check_coalgebra, check_eta_tower,
                               check_handler, check_lift, check_lift_to_cofree, check_tower, coalgebra_to_handler,
                               compose_coalgebras, compose_elementary, compose_handlers, copresheaf_handler,
                               copresheaf_handler_bicomodule_iso, cofree_tower, direction_counts, distinguish,
                               eta_tower, handler_to_bicomodule, handler_to_coalgebra, identity_handler,
                               is_handler_square, lift_handler, lift_to_cofree, pair_states, random_coalgebra,
                               render_tree, run_behavior_tree, same_coalgebra, toggle_machine, tree_to_element,
                               tree_to_json)
from catsharp.fincore import InputError
from catsharp.poly import (STAR, Y, Composite, Poly, PolyMorphism, enumerate_morphisms, first_difference, identity,
                           left_unitor, right_unitor)
from catsharp.samples import random_copresheaf

from helpers import cofunctor_handler, cofunctors

Y2 = Poly({STAR: (0, 1)})


# -- cofree tower -------------------------------------------------------------------

def tree_count(arity: int, depth: int) -> int:
    return 1 if depth == 0 else tree_count(arity, depth - 1) ** arity


def node_count(arity: int, depth: int) -> int:
    return sum(arity ** k for k in range(depth + 1))


def test_y2_direction_counts():
    t = cofree_tower(Y2, 2)
    assert direction_counts(t) == [[1], [3], [7]]


@pytest.mark.parametrize("arity", [0, 1, 2, 3])
def test_tower_sizes_match_closed_form(arity):
    p = Poly({STAR: tuple(range(arity))})
    t = cofree_tower(p, 3)
    for i in range(4):
        assert len(t.positions(i)) == tree_count(arity, i)
        assert all(len(t.level(i).directions(x)) == node_count(arity, i) for x in t.positions(i))


def test_tower_two_positions():
    # p = y + y^2: trees of depth 1 are the two positions
    p = Poly({"a": (0,), "b": (0, 1)})
    t = cofree_tower(p, 2)
    assert len(t.positions(1)) == 2
    assert len(t.positions(2)) == 2 + 4


@pytest.mark.parametrize("p", [Y2, Poly({"a": (0,), "b": (0, 1)}), Poly({"a": (), "b": (0, 1)}),
                               Poly({0: (STAR,), 1: (STAR,)})], ids=["y2", "y+y2", "1+y2", "2y"])
def test_tower_laws_through_total_three(p):
    t = cofree_tower(p, 3)
    rep = check_tower(t, 3)
    assert rep.ok, rep.violations[:3]
    assert rep.checked > 0


def test_phi_unit_cases_are_unitors():
    t = cofree_tower(Y2, 3)
    for i in range(4):
        assert first_difference(t.phi(0, i).then(left_unitor(t.level(i))), identity(t.level(i))) is None
        assert first_difference(t.phi(i, 0).then(right_unitor(t.level(i))), identity(t.level(i))) is None


def test_mutated_phi_fails_tower_check():
    t = cofree_tower(Y2, 2)
    good = t.phi(1, 1)

    def dirs(pos):
        back = dict(good.dirs(pos))
        keys = list(back)
        back[keys[0]], back[keys[-1]] = back[keys[-1]], back[keys[0]]
        return back

    t._phi[(1, 1)] = PolyMorphism(good.src, good.dst, good.pos, dirs, "bad")
    rep = check_tower(t, 2)
    assert not rep.ok
    assert any("φ1,1" in v for v in rep.violations)


def test_tower_rejects_bad_indices():
    t = cofree_tower(Y2, 1)
    with pytest.raises(InputError):
        t.phi(1, 1)
    with pytest.raises(InputError):
        t.level(2)
    with pytest.raises(InputError):
        cofree_tower(Y2, -1)


def test_subtree_cut():
    t = cofree_tower(Y2, 2)
    for pos in t.positions(2):
        assert t.subtree(2, pos, (), 2) == pos
        assert t.subtree(2, pos, (), 0) == STAR


# -- η tower --------------------------------------------------------------------------

def test_eta_tower_on_corpus(comonoids):
    for name, c in comonoids.items():
        rep = check_eta_tower(c, 3)
        assert rep.ok, (name, rep.violations[:3])


def test_eta_level_one_records_codomains(comonoids):
    c = comonoids["walking_arrow"]
    t, etas = eta_tower(c, 2)
    for obj in c.objects:
        _, (root, kids) = etas[2].pos(obj)
        assert root == obj
        assert tuple(k[1][0] for k in kids) == tuple(c.cod(obj, f) for f in c.out(obj))


def test_eta_check_catches_broken_comonoid(comonoids):
    from catsharp.comonoid import Comonoid
    c = comonoids["Z2"]
    good = c.comult

    def dirs(pos):
        back = dict(good.dirs(pos))
        for k, v in back.items():
            back[k] = "0" if v == "1" else "1"
        return back

    broken = Comonoid(c.carrier, c.counit, PolyMorphism(good.src, good.dst, good.pos, dirs), "broken")
    assert not check_eta_tower(broken, 2).ok


# -- comonoid handlers -------------------------------------------------------------

def test_identity_handlers(comonoids):
    for name, c in comonoids.items():
        assert check_handler(identity_handler(c)).ok, name


@pytest.mark.parametrize("c_name,d_name", [("walking_arrow", "chain2"), ("Z2", "Z2"), ("g", "walking_arrow"),
                                           ("discrete2", "discrete3")])
def test_handlers_on_y_are_cofunctors(comonoids, c_name, d_name):
    c, d = comonoids[c_name], comonoids[d_name]
    maps = enumerate_morphisms(Composite(Y, d.carrier), Composite(c.carrier, Y))
    handlers = [f for f in maps if check_handler(ComonoidHandler(c, d, Y, f)).ok]
    pointwise = [m for m in enumerate_morphisms(d.carrier, c.carrier)
                 if check_cofunctor_pointwise(Cofunctor(d, c, m)).ok]
    assert len(handlers) == len(pointwise)


def test_corrupted_handler_fails(comonoids):
    c, d = comonoids["walking_arrow"], comonoids["chain2"]
    bad = [m for m in enumerate_morphisms(d.carrier, c.carrier) if not check_cofunctor(Cofunctor(d, c, m)).ok]
    assert bad
    assert not any(check_handler(cofunctor_handler(c, d, m)).ok for m in bad[:10])


def test_handler_bicomodule_is_lawful(comonoids):
    from catsharp.bicomod import check_bicomodule
    c, d = comonoids["walking_arrow"], comonoids["chain2"]
    for m in cofunctors(d, c):
        assert check_bicomodule(handler_to_bicomodule(cofunctor_handler(c, d, m))).ok


def seeded_handler_pairs(comonoids, seed, count):
    rng = random.Random(seed)
    chains = [("walking_arrow", "chain2"), ("g", "walking_arrow"), ("Z2", "Z2"), ("chain2", "walking_arrow"),
              ("walking_arrow", "g")]
    out = []
    while len(out) < count:
        c_name, d_name = chains[len(out) % len(chains)]
        c, d = comonoids[c_name], comonoids[d_name]
        h = cofunctor_handler(c, d, rng.choice(cofunctors(d, c)), "h")
        if rng.random() < 0.5:
            k = copresheaf_handler(random_copresheaf(d, rng, 2))
        else:
            e_name = rng.choice([n for a, n in chains if a == d_name] or [d_name])
            e = comonoids[e_name]
            k = cofunctor_handler(d, e, rng.choice(cofunctors(e, d)), "k") if cofunctors(e, d) \
                else identity_handler(d)
        out.append((h, k))
    return out


def test_composition_goes_to_composition(comonoids):
    for h, k in seeded_handler_pairs(comonoids, seed=7, count=12):
        hk = compose_handlers(h, k)
        assert check_handler(hk).ok
        assert isomorphic(handler_to_bicomodule(hk),
                          compose_bicomodules(handler_to_bicomodule(h), handler_to_bicomodule(k)))


def test_handler_composition_associative(comonoids):
    rng = random.Random(11)
    a, b, c = comonoids["walking_arrow"], comonoids["chain2"], comonoids["walking_arrow"]
    h = cofunctor_handler(a, b, rng.choice(cofunctors(b, a)), "h")
    k = cofunctor_handler(b, c, rng.choice(cofunctors(c, b)), "k")
    l = copresheaf_handler(random_copresheaf(c, rng, 2))
    left = handler_to_bicomodule(compose_handlers(compose_handlers(h, k), l))
    right = handler_to_bicomodule(compose_handlers(h, compose_handlers(k, l)))
    assert isomorphic(left, right)


def test_identity_handler_is_unit(comonoids):
    c, d = comonoids["g"], comonoids["walking_arrow"]
    h = cofunctor_handler(c, d, cofunctors(d, c)[0])
    bh = handler_to_bicomodule(h)
    assert isomorphic(handler_to_bicomodule(compose_handlers(identity_handler(c), h)), bh)
    assert isomorphic(handler_to_bicomodule(compose_handlers(h, identity_handler(d))), bh)


def test_compose_handlers_needs_shared_middle(comonoids):
    with pytest.raises(InputError):
        compose_handlers(identity_handler(comonoids["Z2"]), identity_handler(comonoids["g"]))


def test_copresheaf_handlers_match_copresheaves(comonoids):
    rng = random.Random(5)
    for name in ["terminal", "walking_arrow", "g", "Z2", "chain2", "commuting_square"]:
        c = comonoids[name]
        for _ in range(2):
            x = random_copresheaf(c, rng, 2)
            assert check_handler(copresheaf_handler(x)).ok
            assert copresheaf_handler_bicomodule_iso(x) is not None, name


def test_distinguish_separates_handlers(comonoids):
    c, d = comonoids["chain2"], comonoids["walking_arrow"]
    hs = [cofunctor_handler(d, c, m, f"F{n}") for n, m in enumerate(cofunctors(c, d))]
    assert len(hs) >= 2
    for h in hs:
        assert distinguish(h, h) is None
    for h in hs:
        for k in hs:
            if h is not k:
                assert distinguish(h, k) is not None


# -- coalgebras -------------------------------------------------------------------------

SMALL = [Poly({0: (STAR,), 1: (STAR,)}), Y2, Poly({"a": (), "b": (0, 1)}), Poly({"x": (0,), "y": (0, 1, 2)})]
# input interfaces need a direction at every position
INPUTS = [SMALL[0], SMALL[1], SMALL[3]]


def random_machines(seed, count):
    rng = random.Random(seed)
    return [random_coalgebra(rng.choice(SMALL), rng.choice(INPUTS), rng.randint(1, 3), rng, f"m{n}")
            for n in range(count)]


def test_coalgebra_handler_round_trips():
    for m in random_machines(seed=1, count=10):
        assert check_coalgebra(m).ok
        h = coalgebra_to_handler(m)
        assert h.phi.check() == []
        assert same_coalgebra(handler_to_coalgebra(h), m)
        again = coalgebra_to_handler(handler_to_coalgebra(h))
        assert first_difference(again.phi, h.phi) is None


def test_handler_to_coalgebra_needs_linear_carrier():
    h = ElementaryHandler(Y, Y, Y2, identity(Composite(Y2, Y)))
    with pytest.raises(InputError):
        handler_to_coalgebra(h)


def test_check_coalgebra_catches_missing_continuation():
    m = toggle_machine()
    on_pos, on_dirs, nxt = m.step[0]
    broken = type(m)(m.p, m.q, m.states, {**m.step, 0: (on_pos, on_dirs, {**nxt, (1, STAR): 7})})
    assert not check_coalgebra(broken).ok


def test_toggle_machine_table():
    m = toggle_machine()
    h = coalgebra_to_handler(m)
    table = {}
    for s in (0, 1):
        for j in (0, 1):
            out, (nxt,) = h.phi.pos((s, (j,)))
            table[(s, j)] = (out, nxt)
    assert table == {(0, 0): (0, 0), (0, 1): (0, 1), (1, 0): (1, 1), (1, 1): (1, 0)}


def test_coalgebra_composition_matches_handler_composition():
    rng = random.Random(4)
    for _ in range(5):
        p, q, r = rng.choice(SMALL), rng.choice(INPUTS), rng.choice(INPUTS)
        m = random_coalgebra(p, q, rng.randint(1, 2), rng, "m")
        n = random_coalgebra(q, r, rng.randint(1, 2), rng, "n")
        wired = compose_coalgebras(m, n)
        assert check_coalgebra(wired).ok
        composite = compose_elementary(coalgebra_to_handler(m), coalgebra_to_handler(n))
        assert is_handler_square(pair_states(m, n), composite, coalgebra_to_handler(wired))


def test_coalgebra_composition_needs_shared_interface():
    m = random_coalgebra(Y2, Y2, 1, random.Random(0))
    n = random_coalgebra(Y, Y, 1, random.Random(0))
    with pytest.raises(InputError):
        compose_coalgebras(m, n)


# -- lifting handlers ----------------------------------------------------------------

@pytest.mark.parametrize("d_name", ["Z2", "walking_arrow", "g", "chain2"])
def test_lift_handler_round_trip(comonoids, d_name):
    d = comonoids[d_name]
    rng = random.Random(len(d_name))
    for _ in range(2):
        m = random_coalgebra(rng.choice(SMALL[:3]), d.carrier, rng.randint(1, 2), rng)
        rep = check_lift(coalgebra_to_handler(m), d, 2)
        assert rep.ok, rep.violations[:3]


def test_lift_handler_level_zero_is_trivial(comonoids):
    d = comonoids["walking_arrow"]
    h = coalgebra_to_handler(random_coalgebra(Y2, d.carrier, 2, random.Random(2)))
    tp, lifted = lift_handler(h, d, 0)
    assert len(lifted) == 1
    for pos in lifted[0].src.positions():
        assert lifted[0].pos(pos)[0] == STAR


def test_lift_handler_rejects_wrong_interface(comonoids):
    h = coalgebra_to_handler(toggle_machine())
    with pytest.raises(InputError):
        lift_handler(h, comonoids["Z2"], 1)


def test_lift_to_cofree():
    for m in [toggle_machine()] + random_machines(seed=9, count=4):
        rep = check_lift_to_cofree(coalgebra_to_handler(m), 2)
        assert rep.ok, rep.violations[:3]


def test_distinct_handlers_have_distinct_lifts(comonoids):
    d = comonoids["Z2"]
    rng = random.Random(3)
    machines = [random_coalgebra(Y2, d.carrier, 1, rng) for _ in range(6)]
    lifts = {}
    for m in machines:
        h = coalgebra_to_handler(m)
        tp, lifted = lift_handler(h, d, 2)
        key = tuple(sorted((repr(x), repr(lifted[1].pos(x)), repr(sorted(lifted[1].dirs(x).items(), key=repr)))
                           for x in lifted[1].src.positions()))
        phi_key = tuple(sorted((repr(x), repr(h.phi.pos(x)), repr(sorted(h.phi.dirs(x).items(), key=repr)))
                               for x in h.phi.src.positions()))
        lifts.setdefault(phi_key, set()).add(key)
    assert len(lifts) >= 2
    assert all(len(v) == 1 for v in lifts.values())
    assert len({next(iter(v)) for v in lifts.values()}) == len(lifts)


# -- behavior trees ------------------------------------------------------------------

def test_depth_zero_tree_is_the_state():
    m = toggle_machine()
    tq = cofree_tower(m.q, 0)
    assert run_behavior_tree(m, 1, 0, tq.positions(0)[0]) == 1


def test_one_direction_machine_gives_a_path():
    m = toggle_machine()
    tq = cofree_tower(m.q, 3)
    tree = run_behavior_tree(m, 0, 3, tq.positions(3)[0])
    length = 0
    while isinstance(tree, Node):
        assert len(tree.children) == 1
        tree = tree.children[0][1]
        length += 1
    assert length == 3


def test_toggle_alternates_on_ones():
    m = toggle_machine()
    tq = cofree_tower(m.q, 2)
    ones = next(x for x in tq.positions(2) if x == (STAR, (1, ((STAR, (1, (STAR,))),))))
    tree = run_behavior_tree(m, 0, 2, ones)
    assert tree.state == 0 and tree.position == 0
    child = tree.children[0][1]
    assert child.state == 1 and child.position == 1
    assert child.children[0][1] == 0


def test_trees_equal_the_lift():
    for m in [toggle_machine()] + random_machines(seed=2, count=4):
        h = coalgebra_to_handler(m)
        tp, tq, lifted = lift_to_cofree(h, 2)
        for qt in tq.positions(2):
            for s0 in m.states:
                tree = run_behavior_tree(m, s0, 2, qt)
                assert tree_to_element(tp, 2, tree) == lifted[2].pos((s0, (qt,)))


def test_behavior_tree_rendering():
    m = toggle_machine()
    tq = cofree_tower(m.q, 1)
    tree = run_behavior_tree(m, 0, 1, tq.positions(1)[1])
    assert render_tree(tree).splitlines()[0] == "state 0 emits 0"
    assert tree_to_json(tree) == {"state": 0, "position": 0,
                                  "children": [{"direction": STAR, "tree": {"state": 1}}]}


def test_behavior_tree_guards():
    m = toggle_machine()
    tq = cofree_tower(m.q, 1)
    with pytest.raises(InputError):
        run_behavior_tree(m, 5, 1, tq.positions(1)[0])
