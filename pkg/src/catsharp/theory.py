"""Monads in Cat♯, their theory categories, and nerves of their algebras.

Carriers indexed by ℕ are truncated at a bound N.  Multiplication raises
TruncationError (or returns the monad's overflow label) outside the bound, and
law checks report what they skipped.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .bicomod import (Bicomodule, BicomoduleMorphism, ComposedCarrier, bicomodule_associator,
                      bicomodule_associator_inv, bicomodule_morphism, check_bicomodule, check_bicomodule_morphism,
                      coclosure, coclosure_unit, compose_bicomodules, copresheaf_to_bicomodule, evaluate_prafunctor,
                      from_actions, identity_bicomodule, left_unitor_bicomodule, left_unitor_bicomodule_inv,
                      right_unitor_bicomodule, right_unitor_bicomodule_inv, transpose_from,
                      whisker_bicomodule_left, whisker_bicomodule_right)
from .comonoid import (Comonoid, FinCategory, Functor, check_category, compare,
                       comonoid_from_tables, from_category, opposite_category, to_category, unit_comonoid)
from .copresheaf import Copresheaf, copresheaf_from_functions, enumerate_copresheaf_morphisms
from .fincore import InputError, Label, PartialDict, Report, TruncationError
from .poly import STAR, Poly, Polynomial
from .corpus import graph_category


# -- monads ------------------------------------------------------------------

class MonadInCatSharp:
    """A (c, c)-bicomodule m with unit c -> m and multiplication m ◁_c m -> m.

    `size` measures positions of m; composites of m with itself are pruned to
    total size at most `truncation`.  `overflow`, if set, is the position label μ
    returns for out-of-bounds inputs instead of raising.  `prune_operations` says that positions of
    p ◁ m above the truncation admit no maps into any p[I], so Θ may discard them.
    """

    def __init__(self, base: Comonoid, carrier: Bicomodule, unit_fn: Callable, mult_fn: Callable,
                 truncation: int | None = None, size: Callable[[Label], int] | None = None,
                 overflow: Label | None = None, name: str = "", prune_operations: bool = False):
        self.base, self.carrier = base, carrier
        self.prune_operations = prune_operations
        self.truncation, self.size, self.overflow = truncation, size, overflow
        self.name = name
        self.square = self.compose(carrier, carrier)
        self.unit = unit_fn(self) if callable(unit_fn) else unit_fn
        self.mult = mult_fn(self) if callable(mult_fn) else mult_fn

    def measure(self, b: Bicomodule, pos: Label) -> int:
        if b is self.carrier:
            return self.size(pos)
        carrier = b.carrier
        if isinstance(carrier, ComposedCarrier):
            return sum(self.measure(carrier.q, j) for j in pos[1])
        return 0

    def compose(self, p: Bicomodule, q: Bicomodule) -> Bicomodule:
        """p ◁_c q, pruned to total size within the truncation."""
        if self.truncation is None or self.size is None:
            return compose_bicomodules(p, q)
        bound = self.truncation
        return compose_bicomodules(p, q, prune=lambda h: sum(self.measure(q, j) for j in h.values()) <= bound)


def check_monad(m: MonadInCatSharp) -> Report:
    rep = Report(f"monad {m.name}".strip())
    rep.absorb(check_bicomodule(m.carrier), "carrier: ")
    rep.absorb(check_bicomodule_morphism(m.unit), "unit: ")
    rep.absorb(check_bicomodule_morphism(m.mult), "multiplication: ")
    if not rep.ok:
        return rep
    c, mc = identity_bicomodule(m.base), m.carrier
    cm, mcc = compose_bicomodules(c, mc), compose_bicomodules(mc, c)
    left = whisker_bicomodule_right(m.unit, mc, cm, m.square).then(m.mult)
    compare(rep, "left unit", left.underlying, left_unitor_bicomodule(mc, cm).underlying, cm.positions())
    right = whisker_bicomodule_left(mc, m.unit, mcc, m.square).then(m.mult)
    compare(rep, "right unit", right.underlying, right_unitor_bicomodule(mc, mcc).underlying, mcc.positions())
    cube = m.compose(m.square, mc)
    other = compose_bicomodules(mc, m.square)
    lhs = whisker_bicomodule_right(m.mult, mc, cube, m.square).then(m.mult)
    rhs = (bicomodule_associator(mc, mc, mc, cube, other)
           .then(whisker_bicomodule_left(mc, m.mult, other, m.square)).then(m.mult))
    compare(rep, "associativity", lhs.underlying, rhs.underlying, cube.positions())
    return rep


def identity_monad(c: Comonoid) -> MonadInCatSharp:
    from .bicomod import identity_morphism
    ident = identity_bicomodule(c)
    return MonadInCatSharp(c, ident, lambda m: identity_morphism(ident),
                           lambda m: left_unitor_bicomodule(ident, m.square), name=f"id_{c.name}")


# -- graphs and the path monad -------------------------------------------------

def graph_base() -> Comonoid:
    """e ⇉ v; a copresheaf gives edges, vertices, and source/target along s and t."""
    return from_category(graph_category(), "g")


def vec(n: int, g: Comonoid | None = None) -> Copresheaf:
    """The linear graph with vertices ('v', 0..n) and edges ('e', i): ('v', i-1) -> ('v', i)."""
    g = g or graph_base()
    at = {"v": [("v", i) for i in range(n + 1)], "e": [("e", i) for i in range(1, n + 1)]}

    def act(obj, x, f):
        if f == "s":
            return ("v", x[1] - 1)
        if f == "t":
            return ("v", x[1])
        return x
    return copresheaf_from_functions(g, at, act, f"vec{n}")


def _path_directions(n: int) -> tuple:
    return tuple(("v", i) for i in range(n + 1)) + tuple(("e", i) for i in range(1, n + 1))


def _segments(lengths: list[int]) -> list[int]:
    offsets = [0]
    for m in lengths:
        offsets.append(offsets[-1] + m)
    return offsets


OVERFLOW = "⊥"


class _OverflowCarrier(Polynomial):
    """A position table plus an overflow label with no directions that is never enumerated."""

    def __init__(self, table: dict, overflow: Label):
        super().__init__()
        self._table, self.overflow = table, overflow

    def _positions(self):
        return tuple(self._table)

    def _directions(self, pos):
        if pos == self.overflow:
            return ()
        return self._table[pos]

    def has_position(self, pos):
        return pos in self._table


def path_monad(n_max: int, g: Comonoid | None = None) -> MonadInCatSharp:
    """{v}y + {e}Σ_{n ≤ N} y^{vec n}: the free-category monad on graphs, truncated at length N.

    Substituting paths whose total length exceeds N yields the overflow position.
    """
    if n_max < 1:
        raise InputError("path monad needs N ≥ 1")
    g = g or graph_base()
    table = {"v": (("v", 0),)}
    for n in range(n_max + 1):
        table[("e", n)] = _path_directions(n)
    carrier = _OverflowCarrier(table, OVERFLOW)

    def base(i):
        return "v" if i == "v" else "e"

    def act(i, k):
        if i == OVERFLOW or k in ("id_e", "id_v"):
            return i
        return "v"

    def transport(i, k):
        if i == OVERFLOW:
            return {}
        if k in ("id_e", "id_v"):
            return {a: a for a in carrier.directions(i)}
        return {("v", 0): ("v", 0) if k == "s" else ("v", i[1])}

    def ract(i, a, k):
        if k == "s":
            return ("v", a[1] - 1)
        if k == "t":
            return ("v", a[1])
        return a

    m = from_actions(g, g, carrier, base, act, transport, lambda i, a: a[0], ract, f"path{n_max}")

    def unit(monad):
        ident = identity_bicomodule(g)
        pos = {"e": ("e", 1), "v": "v"}
        dirs = {"e": {("v", 0): "s", ("v", 1): "t", ("e", 1): "id_e"}, "v": {("v", 0): "id_v"}}
        return bicomodule_morphism(ident, m, pos.__getitem__, dirs.__getitem__, "η")

    def mult(monad):
        sc = monad.square.carrier

        def on_pos(pos):
            i, js = pos
            if i == "v":
                return "v"
            if OVERFLOW in js:
                return OVERFLOW
            total = sum(j[1] for a, j in zip(carrier.directions(i), js) if a[0] == "e")
            return ("e", total) if total <= n_max else OVERFLOW

        def on_dirs(pos):
            i, _ = pos
            target = on_pos(pos)
            if target == OVERFLOW:
                return PartialDict()
            if i == "v" or i[1] == 0:
                return {("v", 0): sc.class_of(pos, ("v", 0), ("v", 0))}
            f = sc.fmap(pos)
            n = i[1]
            off = _segments([f[("e", e)][1] for e in range(1, n + 1)])
            out = {}
            for kind, j in carrier.directions(target):
                for seg in range(1, n + 1):
                    lo, hi = off[seg - 1], off[seg]
                    if kind == "e" and lo < j <= hi:
                        out[(kind, j)] = sc.class_of(pos, ("e", seg), ("e", j - lo))
                        break
                    if kind == "v" and lo <= j <= hi:
                        out[(kind, j)] = sc.class_of(pos, ("e", seg), ("v", j - lo))
                        break
            return out

        return bicomodule_morphism(monad.square, m, on_pos, on_dirs, "μ")

    # graph maps preserve edges, so a substituted path longer than N has no map into vec(n), n ≤ N
    return MonadInCatSharp(g, m, unit, mult, n_max, lambda i: i[1] if isinstance(i, tuple) else 0, OVERFLOW,
                           f"path{n_max}", prune_operations=True)


def list_monad(k_max: int) -> MonadInCatSharp:
    """Σ_{n ≤ K} y^n on the trivial base y: the free monoid monad, truncated at word length K."""
    y = unit_comonoid()
    carrier = _OverflowCarrier({n: tuple(range(1, n + 1)) for n in range(k_max + 1)}, OVERFLOW)
    m = from_actions(y, y, carrier, lambda i: STAR, lambda i, k: i,
                     lambda i, k: {a: a for a in carrier.directions(i)}, lambda i, a: STAR,
                     lambda i, a, g: a, f"list{k_max}")

    def unit(monad):
        ident = identity_bicomodule(y)
        return bicomodule_morphism(ident, m, lambda c: 1, lambda c: {1: STAR}, "η")

    def mult(monad):
        sc = monad.square.carrier

        def on_pos(pos):
            n, js = pos
            total = sum(js)
            return total if total <= k_max else OVERFLOW

        def on_dirs(pos):
            n, js = pos
            if on_pos(pos) == OVERFLOW:
                return PartialDict()
            off = _segments(list(js))
            out = {}
            for j in range(1, off[-1] + 1):
                seg = next(s for s in range(1, n + 1) if off[s - 1] < j <= off[s])
                out[j] = sc.class_of(pos, seg, j - off[seg - 1])
            return out

        return bicomodule_morphism(monad.square, m, on_pos, on_dirs, "μ")

    return MonadInCatSharp(y, m, unit, mult, k_max, lambda i: 0 if i == OVERFLOW else i, OVERFLOW,
                           f"list{k_max}")


def lawvere_list(k_max: int, max_arity: int = 2) -> tuple[MonadInCatSharp, "Theta"]:
    """The list monad with its theory on operations of arity ≤ max_arity.

    Θ(n, m) consists of n-tuples of words of length ≤ K over m generators.
    """
    from .bicomod import restrict_positions
    m = list_monad(k_max)
    arity = min(max_arity, k_max)
    p = restrict_positions(m.carrier, lambda n: n <= arity, f"list≤{arity}")
    return m, theta(m, p)


# -- theory categories -----------------------------------------------------------

@dataclass
class Theta:
    monad: MonadInCatSharp
    operations: Bicomodule          # p
    comonad: Bicomodule             # k = ⟨p | p ◁ m⟩
    counit: BicomoduleMorphism      # k -> d
    comult: BicomoduleMorphism      # k -> k ◁ k
    comonoid: Comonoid              # the carrier of k as a comonoid
    category: FinCategory           # Θ, the opposite of the comonoid's category
    kleisli: FinCategory            # direct construction, same orientation as the comonoid
    composite: Bicomodule           # p ◁ m
    report: Report = field(default_factory=lambda: Report("theta"))


def _contains(label, target) -> bool:
    if label == target:
        return True
    if isinstance(label, tuple):
        return any(_contains(x, target) for x in label)
    return False


def theta_comonad(m: MonadInCatSharp, p: Bicomodule | None = None) -> tuple:
    """Coclosure k = ⟨p | p ◁ m⟩ with counit and comultiplication obtained by transposition."""
    p = p or m.carrier
    d, c = p.left, m.base
    mc = m.carrier
    pm = m.compose(p, mc) if m.prune_operations else compose_bicomodules(p, mc)
    k = coclosure(p, pm)
    unit = coclosure_unit(p, pm, k)
    ident_d = identity_bicomodule(d)

    # counit: p ≅ p ◁ c -> p ◁ m ≅ d ◁ (p ◁ m), transposed
    pc = compose_bicomodules(p, identity_bicomodule(c))
    d_pm = compose_bicomodules(ident_d, pm)
    beta_eps = (right_unitor_bicomodule_inv(p, pc)
                .then(whisker_bicomodule_left(p, m.unit, pc, pm))
                .then(left_unitor_bicomodule_inv(pm, d_pm)))
    counit = transpose_from(beta_eps, k, pm, ident_d)

    # comultiplication: p -> k◁(p◁m) -> k◁((k◁(p◁m))◁m) ≅ k◁(k◁(p◁(m◁m))) -> k◁(k◁(p◁m)) ≅ (k◁k)◁(p◁m)
    k_pm = unit.dst
    k_pm_m = compose_bicomodules(k_pm, mc)
    step = whisker_bicomodule_left(k, whisker_bicomodule_right(unit, mc, pm, k_pm_m),
                                   compose_bicomodules(k, pm), compose_bicomodules(k, k_pm_m))
    pm_m = compose_bicomodules(pm, mc)
    k_pm_m2 = compose_bicomodules(k, pm_m)
    a1 = whisker_bicomodule_left(k, bicomodule_associator(k, pm, mc, k_pm_m, k_pm_m2), step.dst,
                                 compose_bicomodules(k, k_pm_m2))
    mm = compose_bicomodules(mc, mc)
    p_mm = compose_bicomodules(p, mm)
    a2 = whisker_bicomodule_left(k, whisker_bicomodule_left(k, bicomodule_associator(p, mc, mc, pm_m, p_mm),
                                                            k_pm_m2, compose_bicomodules(k, p_mm)),
                                 a1.dst, None)
    mult_in = whisker_bicomodule_left(p, m.mult, p_mm, pm)
    k_p_mm = a2.dst.carrier.q
    k_k_pm = compose_bicomodules(k, k_pm)
    a3 = whisker_bicomodule_left(k, whisker_bicomodule_left(k, mult_in, k_p_mm, k_pm), a2.dst, k_k_pm)
    kk = compose_bicomodules(k, k)
    kk_pm = compose_bicomodules(kk, pm)
    a4 = bicomodule_associator_inv(k, k, pm, k_k_pm, kk_pm)
    beta_delta = unit.then(step).then(a1).then(a2).then(a3).then(a4)
    comult = transpose_from(beta_delta, k, pm, kk)
    if m.overflow is not None:
        comult = _drop_overflow(comult, m.overflow)
    return k, counit, comult, pm


def _drop_overflow(delta: BicomoduleMorphism, overflow: Label) -> BicomoduleMorphism:
    """Forget composites whose Kleisli data left the truncation."""
    def on_dirs(i):
        out = PartialDict()
        for cls, u in delta.dirs(i).items():
            if not _contains(u[0], overflow):
                out[cls] = u
        return out
    return bicomodule_morphism(delta.src, delta.dst, delta.pos, on_dirs, "δ")


def carrier_comonoid(k: Bicomodule, counit: BicomoduleMorphism, comult: BicomoduleMorphism,
                     name: str = "") -> Comonoid:
    """The carrier of a comonad in Cat♯ as a comonoid: counit through d -> y, comultiplication through
    the inclusion k ◁_d k -> k ◁ k."""
    d = k.left
    kk = comult.dst.carrier

    def cod(i, u):
        return dict(zip(k.directions(i), comult.pos(i)[1]))[u]

    def identity(i):
        return counit.dirs(i)[d.identity(counit.pos(i))]

    def compose(i, u, v):
        pos = comult.pos(i)
        try:
            return comult.dirs(i)[kk.class_of(pos, u, v)]
        except KeyError:
            raise TruncationError(f"composite of {u!r} and {v!r} outside the truncation") from None

    objects = k.positions()
    return comonoid_from_tables(objects, {i: k.directions(i) for i in objects}, cod, identity, compose, name)


def kleisli_category(m: MonadInCatSharp, p: Bicomodule | None = None) -> FinCategory:
    """Objects p(1); morphisms out of I with codomain I' are natural maps p[I'] -> m ◁ p[I].

    Labels are (I, I', κ) with κ listing, per direction of I', an element (M, β) of m ◁ p[I].
    Composition substitutes through μ; composites outside the truncation are left undefined.
    """
    p = p or m.carrier
    mc = m.carrier
    objects = p.positions()
    dirs_cp = {i: p.direction_copresheaf(i) for i in objects}
    free = {i: evaluate_prafunctor(mc, dirs_cp[i]) for i in objects}
    out, cod = {}, {}
    kappa = {}
    for i in objects:
        out[i] = []
        for i2 in objects:
            for h in enumerate_copresheaf_morphisms(dirs_cp[i2], free[i]):
                label = (i, i2, tuple(h[p.dtype(i2, a)][a] for a in p.directions(i2)))
                out[i].append(label)
                cod[label] = i2
                kappa[label] = dict(zip(p.directions(i2), label[2]))
    ident = {}
    for i in objects:
        table = []
        for a in p.directions(i):
            obj = p.dtype(i, a)
            j = m.unit.pos(obj)
            back = m.unit.dirs(obj)
            table.append((j, tuple(p.ract(i, a, back[b]) for b in mc.directions(j))))
        ident[i] = (i, i, tuple(table))
    comp = {}
    partial = False
    for i in objects:
        for u in out[i]:
            i2 = cod[u]
            for v in out[i2]:
                i3 = cod[v]
                table = []
                ok = True
                for a in p.directions(i3):
                    mpos, beta = kappa[v][a]
                    inner = [kappa[u][x] for x in beta]
                    pos = (mpos, tuple(j for j, _ in inner))
                    try:
                        target = m.mult.pos(pos)
                        if target == m.overflow:
                            raise TruncationError("overflow")
                        back = m.mult.dirs(pos)
                    except TruncationError:
                        ok = False
                        break
                    values = dict(zip(mc.directions(mpos), inner))
                    entry = []
                    for dd in mc.directions(target):
                        b, b2 = back[dd]
                        j, beta2 = values[b]
                        entry.append(dict(zip(mc.directions(j), beta2))[b2])
                    table.append((target, tuple(entry)))
                if ok:
                    comp[(u, v)] = (i, i3, tuple(table))
                else:
                    partial = True
    return FinCategory(objects, out, cod, ident, comp, f"Kl({m.name})", partial)


def translate_to_kleisli(p: Bicomodule, pm: Bicomodule, i: Label, u: Label) -> Label:
    """(J = (I', f), α) at I  ↦  (I, I', a ↦ (f(a), b ↦ α[(a, b)]))."""
    j, alpha = u
    i2, _ = j
    f = pm.carrier.fmap(j)
    values = dict(zip(pm.directions(j), alpha))
    mc = pm.carrier.q
    table = tuple((f[a], tuple(values[pm.carrier.class_of(j, a, b)] for b in mc.directions(f[a])))
                  for a in p.directions(i2))
    return (i, i2, table)


def compare_theta_routes(comonoid: Comonoid, kleisli: FinCategory, p: Bicomodule, pm: Bicomodule) -> Report:
    """Explicit bijection between the coclosure comonoid and the Kleisli category, checked on
    codomains, identities and composites."""
    rep = Report("coclosure comonoid vs Kleisli category")
    for i in comonoid.objects:
        image = {u: translate_to_kleisli(p, pm, i, u) for u in comonoid.out(i)}
        if len(set(image.values())) != len(image) or set(image.values()) != set(kleisli.out[i]):
            rep.fail(f"morphisms out of {i!r} do not correspond")
            continue
        if image[comonoid.identity(i)] != kleisli.identity[i]:
            rep.fail(f"identity at {i!r} differs")
        for u in comonoid.out(i):
            rep.checked += 1
            i2 = comonoid.cod(i, u)
            if kleisli.cod[image[u]] != i2:
                rep.fail(f"codomain of {u!r} differs")
                continue
            for v in comonoid.out(i2):
                key = (image[u], translate_to_kleisli(p, pm, i2, v))
                try:
                    w = comonoid.compose(i, u, v)
                except TruncationError:
                    if key in kleisli.comp:
                        rep.fail(f"composite at {i!r} defined only in the Kleisli category")
                    else:
                        rep.skipped.append((i, u, v))
                    continue
                if key not in kleisli.comp:
                    rep.fail(f"composite at {i!r} defined only in the coclosure comonoid")
                elif kleisli.comp[key] != image[w]:
                    rep.fail(f"composite at {i!r} differs")
    return rep


def theta(m: MonadInCatSharp, p: Bicomodule | None = None, check: bool = True) -> Theta:
    """Θ_m^p by the coclosure comonad, and the Kleisli category as an independent route."""
    p = p or m.carrier
    k, counit, comult, pm = theta_comonad(m, p)
    comonoid = carrier_comonoid(k, counit, comult, f"k({m.name})")
    cat = to_category(comonoid, f"k({m.name})")
    result = Theta(m, p, k, counit, comult, comonoid, opposite_category(cat), kleisli_category(m, p), pm)
    rep = Report(f"theta {m.name}")
    if check:
        rep.absorb(check_category(cat), "coclosure comonoid: ")
        rep.absorb(compare_theta_routes(comonoid, result.kleisli, p, pm))
    result.report = rep
    result.category.name = f"Θ_{m.name}"
    return result


def monotone_maps(a: int, b: int) -> list[tuple]:
    """Order-preserving maps [a] -> [b] as tuples of images, by filtering all functions."""
    return [f for f in itertools.product(range(b + 1), repeat=a + 1) if all(x <= y for x, y in zip(f, f[1:]))]


def simplex_category(n_max: int, duplicate: bool = True) -> FinCategory:
    """Δ on [0..N], optionally with a second copy 'v' of [0]; morphisms (src, dst, images)."""
    objs = (["v"] if duplicate else []) + [("e", n) for n in range(n_max + 1)]
    dim = {o: (0 if o == "v" else o[1]) for o in objs}
    mors = []
    for a in objs:
        for b in objs:
            for f in monotone_maps(dim[a], dim[b]):
                mors.append(((a, b, f), a, b))
    out = {o: [] for o in objs}
    cod = {}
    for lab, a, b in mors:
        out[a].append(lab)
        cod[lab] = b
    ident = {o: (o, o, tuple(range(dim[o] + 1))) for o in objs}
    comp = {}
    for (a, b, f), _, _ in mors:
        for (b2, c, g) in out[b]:
            comp[((a, b, f), (b2, c, g))] = (a, c, tuple(g[x] for x in f))
    return FinCategory(objs, out, cod, ident, comp, "Δ")


def vertex_map(p: Bicomodule, pm: Bicomodule, u: Label) -> tuple:
    """For the path monad: the monotone map on vertices named by a direction (J, α) of the coclosure."""
    j, alpha = u
    i2, _ = j
    values = dict(zip(pm.directions(j), alpha))
    n2 = 0 if i2 == "v" else i2[1]
    return tuple(values[pm.carrier.class_of(j, ("v", x), ("v", 0))][1] for x in range(n2 + 1))


def theta_to_simplex(th: Theta, n_max: int) -> Functor:
    """Θ_path -> Δ sending a direction to its vertex map."""
    p = th.operations
    pm = th.composite
    delta = simplex_category(n_max)
    cat = th.category
    on_mor = {}
    for f in cat.morphisms:
        # morphisms of Θ are directions of k, reversed
        i, u = (cat.cod[f], f) if f in th.comonoid.out(cat.cod[f]) else f
        on_mor[f] = (cat.dom[f], cat.cod[f], vertex_map(p, pm, u))
    return Functor(cat, delta, {o: o for o in cat.objects}, on_mor)


# -- modules and comodules --------------------------------------------------------

@dataclass
class LeftModule:
    monad: MonadInCatSharp
    carrier: Bicomodule           # (c, b)
    action: BicomoduleMorphism    # m ◁_c A -> A
    name: str = ""


def check_left_module(mod: LeftModule) -> Report:
    rep = Report(f"left module {mod.name}".strip())
    m, a = mod.monad, mod.carrier
    rep.absorb(check_bicomodule_morphism(mod.action), "action: ")
    if not rep.ok:
        return rep
    ma = mod.action.src
    ca = compose_bicomodules(identity_bicomodule(m.base), a)
    left = whisker_bicomodule_right(m.unit, a, ca, ma).then(mod.action)
    compare(rep, "unit", left.underlying, left_unitor_bicomodule(a, ca).underlying, ca.positions())
    mma = m.compose(m.square, a)
    m_ma = compose_bicomodules(m.carrier, ma)
    lhs = whisker_bicomodule_right(m.mult, a, mma, ma).then(mod.action)
    rhs = (bicomodule_associator(m.carrier, m.carrier, a, mma, m_ma)
           .then(whisker_bicomodule_left(m.carrier, mod.action, m_ma, ma)).then(mod.action))
    compare(rep, "multiplication", lhs.underlying, rhs.underlying, mma.positions())
    return rep


def free_module(m: MonadInCatSharp, x: Bicomodule) -> LeftModule:
    """m ◁ X acted on by μ ◁ X."""
    mx = m.compose(m.carrier, x)
    mmx = m.compose(m.carrier, mx)
    assoc_inv = bicomodule_associator_inv(m.carrier, m.carrier, x, mmx, m.compose(m.square, x))
    act = assoc_inv.then(whisker_bicomodule_right(m.mult, x, assoc_inv.dst, mx))
    return LeftModule(m, mx, act, f"free({x.name})")


def category_graph(k: FinCategory, g: Comonoid | None = None) -> Copresheaf:
    """Underlying graph: vertices the objects, edges all morphisms."""
    g = g or graph_base()
    at = {"v": list(k.objects), "e": list(k.morphisms)}

    def act(obj, x, f):
        if f == "s":
            return k.dom[x]
        if f == "t":
            return k.cod[x]
        return x
    return copresheaf_from_functions(g, at, act, k.name)


def path_algebra(m: MonadInCatSharp, k: FinCategory) -> LeftModule:
    """A category as an algebra for the path monad: a path goes to its composite."""
    a = copresheaf_to_bicomodule(category_graph(k, m.base))
    ma = m.compose(m.carrier, a)
    mc = m.carrier

    def on_pos(pos):
        i, js = pos
        if i == "v":
            return js[0]
        f = dict(zip(mc.directions(i), js))
        n = i[1]
        if n == 0:
            return ("e", k.identity[f[("v", 0)][1]])
        g = f[("e", 1)][1]
        for e in range(2, n + 1):
            g = k.then(g, f[("e", e)][1])
        return ("e", g)

    act = bicomodule_morphism(ma, a, on_pos, lambda pos: {}, "ψ")
    return LeftModule(m, a, act, k.name)


@dataclass
class LeftComodule:
    comonad: Bicomodule
    counit: BicomoduleMorphism
    comult: BicomoduleMorphism
    carrier: Bicomodule
    coaction: BicomoduleMorphism    # A -> k ◁_d A


def check_left_comodule(cm: LeftComodule) -> Report:
    rep = Report("left comodule")
    k, a = cm.comonad, cm.carrier
    rep.absorb(check_bicomodule_morphism(cm.coaction), "coaction: ")
    if not rep.ok:
        return rep
    ka = cm.coaction.dst
    da = compose_bicomodules(identity_bicomodule(k.left), a)
    ident = (cm.coaction.then(whisker_bicomodule_right(cm.counit, a, ka, da))
             .then(left_unitor_bicomodule(a, da)))
    compare(rep, "counit", ident.underlying, _identity(a).underlying)
    kk = cm.comult.dst
    kk_a = compose_bicomodules(kk, a)
    k_ka = compose_bicomodules(k, ka)
    lhs = (cm.coaction.then(whisker_bicomodule_right(cm.comult, a, ka, kk_a))
           .then(bicomodule_associator(k, k, a, kk_a, k_ka)))
    rhs = cm.coaction.then(whisker_bicomodule_left(k, cm.coaction, ka, k_ka))
    compare(rep, "coassociativity", lhs.underlying, rhs.underlying)
    return rep


def _identity(b: Bicomodule) -> BicomoduleMorphism:
    from .bicomod import identity_morphism
    return identity_morphism(b)


@dataclass
class Nerve:
    comodule: LeftComodule
    copresheaf: Copresheaf      # on the theory comonoid; a presheaf on Θ
    theta: Theta


def nerve(th: Theta, algebra: LeftModule) -> Nerve:
    """Cells p ◁_c A with coaction (unit ◁ A) ; assoc ; k ◁ p ◁ ψ, then read as a copresheaf on k."""
    m, p, k = th.monad, th.operations, th.comonad
    a = algebra.carrier
    if a.right.objects:
        raise InputError("nerves are implemented for algebras with an empty right base")
    mc = m.carrier
    pa = compose_bicomodules(p, a)
    pm = th.composite
    unit = coclosure_unit(p, pm, k)
    k_pm = unit.dst
    k_pm_a = compose_bicomodules(k_pm, a)
    pm_a = compose_bicomodules(pm, a)
    k_pmA = compose_bicomodules(k, pm_a)
    step1 = whisker_bicomodule_right(unit, a, pa, k_pm_a)
    step2 = bicomodule_associator(k, pm, a, k_pm_a, k_pmA)
    ma = algebra.action.src
    p_ma = compose_bicomodules(p, ma)
    k_p_ma = compose_bicomodules(k, p_ma)
    step3 = whisker_bicomodule_left(k, bicomodule_associator(p, mc, a, pm_a, p_ma), k_pmA, k_p_ma)
    k_pa = compose_bicomodules(k, pa)
    step4 = whisker_bicomodule_left(k, whisker_bicomodule_left(p, algebra.action, p_ma, pa), k_p_ma, k_pa)
    coaction = step1.then(step2).then(step3).then(step4)
    coaction = BicomoduleMorphism(pa, k_pa, coaction.underlying)
    cm = LeftComodule(k, th.counit, th.comult, pa, coaction)
    return Nerve(cm, comodule_to_copresheaf(cm, th.comonoid), th)


def comodule_to_copresheaf(cm: LeftComodule, comonoid: Comonoid) -> Copresheaf:
    """x ↦ u_*x read off the position part of the coaction."""
    a, k = cm.carrier, cm.comonad
    at = {i: [] for i in comonoid.objects}
    for x in a.positions():
        at[cm.coaction.pos(x)[0]].append(x)

    def act(i, x, u):
        return dict(zip(k.directions(i), cm.coaction.pos(x)[1]))[u]
    return copresheaf_from_functions(comonoid, at, act, "nerve")


def copresheaf_to_comodule(x: Copresheaf, k: Bicomodule, counit: BicomoduleMorphism, comult: BicomoduleMorphism,
                           carrier: Bicomodule) -> LeftComodule:
    """Rebuild the coaction from a copresheaf on the theory comonoid whose elements are carrier positions."""
    kc = compose_bicomodules(k, carrier)
    owner = {e: i for i in x.base.objects for e in x.at[i]}

    def on_pos(e):
        i = owner[e]
        return (i, tuple(x.act(i, e, u) for u in k.directions(i)))

    coaction = bicomodule_morphism(carrier, kc, on_pos, lambda e: {}, "coaction")
    return LeftComodule(k, counit, comult, carrier, coaction)


def chains(k: FinCategory, n: int) -> list[tuple]:
    """Classical nerve: (start object, composable morphisms f1..fn)."""
    out = [(a, ()) for a in k.objects]
    for _ in range(n):
        out = [(a, fs + (g,)) for a, fs in out for g in (k.out[k.cod[fs[-1]]] if fs else k.out[a])]
    return out


def chain_vertex(k: FinCategory, chain: tuple, j: int) -> Label:
    a, fs = chain
    return a if j == 0 else k.cod[fs[j - 1]]


def act_on_chain(k: FinCategory, chain: tuple, phi: tuple) -> tuple:
    """Pull a chain back along a monotone map: faces compose, degeneracies insert identities."""
    start = chain_vertex(k, chain, phi[0])
    _, fs = chain
    new = []
    for x, y in zip(phi, phi[1:]):
        if x == y:
            new.append(k.identity[chain_vertex(k, chain, x)])
        else:
            g = fs[x]
            for e in range(x + 1, y):
                g = k.then(g, fs[e])
            new.append(g)
    return (start, tuple(new))


def cell_to_chain(p: Bicomodule, cell: Label) -> tuple:
    """A nerve cell (I, f) of the path monad as a chain of morphisms."""
    i, js = cell
    f = dict(zip(p.directions(i), js))
    start = f[("v", 0)][1]
    if i == "v":
        return (start, ())
    return (start, tuple(f[("e", e)][1] for e in range(1, i[1] + 1)))


def compare_nerve_with_chains(nv: Nerve, k: FinCategory, dim: int) -> Report:
    """Cells, faces and degeneracies against the chain nerve, through the given dimension."""
    rep = Report(f"nerve of {k.name}")
    th, x = nv.theta, nv.copresheaf
    p = th.operations
    pm = th.composite
    for i in th.comonoid.objects:
        n = 0 if i == "v" else i[1]
        if n > dim:
            continue
        cells = [cell_to_chain(p, e) for e in x.at[i]]
        expected = chains(k, n)
        if len(cells) != len(set(cells)) or set(cells) != set(expected):
            rep.fail(f"cells over {i!r}: {len(cells)} vs {len(expected)} chains")
            continue
        for u in th.comonoid.out(i):
            j = th.comonoid.cod(i, u)
            if (0 if j == "v" else j[1]) > dim:
                continue
            phi = vertex_map(p, pm, u)
            for e in x.at[i]:
                rep.checked += 1
                if cell_to_chain(p, x.act(i, e, u)) != act_on_chain(k, cell_to_chain(p, e), phi):
                    rep.fail(f"action of {phi} on {cell_to_chain(p, e)} disagrees")
    return rep


# -- elements bicomodule and restriction -------------------------------------------

def elements_bicomodule(c: Comonoid, g: Comonoid | None = None) -> Bicomodule:
    """g ← {v}c + {e}c_* → c: evaluating at X gives the underlying graph of el(X)."""
    g = g or graph_base()
    table = {}
    for obj in c.objects:
        table[("v", obj)] = c.out(obj)
    for obj in c.objects:
        for f in c.out(obj):
            table[("e", obj, f)] = c.out(obj)
    carrier = Poly(table)

    def base(i):
        return "v" if i[0] == "v" else "e"

    def act(i, k):
        if k in ("id_v", "id_e"):
            return i
        _, obj, f = i
        return ("v", obj) if k == "s" else ("v", c.cod(obj, f))

    def transport(i, k):
        if k in ("id_v", "id_e"):
            return {a: a for a in carrier.directions(i)}
        _, obj, f = i
        if k == "s":
            return {h: h for h in c.out(obj)}
        return {h: c.compose(obj, f, h) for h in c.out(c.cod(obj, f))}

    def dtype(i, a):
        return c.cod(i[1], a)

    def ract(i, a, h):
        return c.compose(i[1], a, h)

    return from_actions(g, c, carrier, base, act, transport, dtype, ract, f"el_{c.name}")


def elements_graph(x: Copresheaf, g: Comonoid | None = None) -> Copresheaf:
    """Underlying graph of the category of elements, built directly."""
    from .copresheaf import elements_category
    k, _ = elements_category(x)
    return category_graph(k, g)


@dataclass
class ComonoidFunctor:
    """A functor between the categories of two comonoids: on_morphisms[(C, f)] leaves on_objects[C]."""

    src: Comonoid
    dst: Comonoid
    on_objects: dict
    on_morphisms: dict


def check_comonoid_functor(F: ComonoidFunctor) -> Report:
    rep = Report("functor")
    c, d = F.src, F.dst
    for obj in c.objects:
        image = F.on_objects.get(obj)
        if image not in set(d.objects):
            rep.fail(f"object {obj!r} has no image")
            continue
        if F.on_morphisms.get((obj, c.identity(obj))) != d.identity(image):
            rep.fail(f"identity of {obj!r} not preserved")
        for f in c.out(obj):
            g = F.on_morphisms.get((obj, f))
            if g not in set(d.out(image)) or d.cod(image, g) != F.on_objects.get(c.cod(obj, f)):
                rep.fail(f"image of {f!r} has wrong ends")
    if not rep.ok:
        return rep
    for obj in c.objects:
        for f in c.out(obj):
            b = c.cod(obj, f)
            for h in c.out(b):
                rep.checked += 1
                lhs = F.on_morphisms[(obj, c.compose(obj, f, h))]
                rhs = d.compose(F.on_objects[obj], F.on_morphisms[(obj, f)], F.on_morphisms[(b, h)])
                if lhs != rhs:
                    rep.fail(f"composite {f!r};{h!r} not preserved")
    return rep


def functor_between(c: Comonoid, d: Comonoid, F: Functor) -> ComonoidFunctor:
    """Read a FinCategory functor between to_category views as a ComonoidFunctor."""
    kc, kd = to_category(c), to_category(d)
    tag_c = (lambda obj, f: f) if set(kc.morphisms) == {f for o in c.objects for f in c.out(o)} else (lambda o, f: (o, f))
    untag_d = (lambda g: g) if set(kd.morphisms) == {f for o in d.objects for f in d.out(o)} else (lambda g: g[1])
    on_mor = {(obj, f): untag_d(F.on_morphisms[tag_c(obj, f)]) for obj in c.objects for f in c.out(obj)}
    return ComonoidFunctor(c, d, dict(F.on_objects), on_mor)


def compose_functors(F: ComonoidFunctor, G: ComonoidFunctor) -> ComonoidFunctor:
    on_obj = {obj: G.on_objects[F.on_objects[obj]] for obj in F.src.objects}
    on_mor = {(obj, f): G.on_morphisms[(F.on_objects[obj], F.on_morphisms[(obj, f)])]
              for obj in F.src.objects for f in F.src.out(obj)}
    return ComonoidFunctor(F.src, G.dst, on_obj, on_mor)


def identity_functor(c: Comonoid) -> ComonoidFunctor:
    return ComonoidFunctor(c, c, {o: o for o in c.objects}, {(o, f): f for o in c.objects for f in c.out(o)})


def delta_f(F: ComonoidFunctor) -> Bicomodule:
    """Δ_F = Σ_C y^{d[F(C)]}; its prafunctor is restriction along F."""
    rep = check_comonoid_functor(F)
    if not rep.ok:
        raise InputError(f"not a functor: {rep.violations[0]}")
    c, d = F.src, F.dst
    carrier = Poly({obj: d.out(F.on_objects[obj]) for obj in c.objects})

    def transport(obj, k):
        b = c.cod(obj, k)
        fk = F.on_morphisms[(obj, k)]
        return {g: d.compose(F.on_objects[obj], fk, g) for g in d.out(F.on_objects[b])}

    return from_actions(c, d, carrier, lambda obj: obj, lambda obj, k: c.cod(obj, k), transport,
                        lambda obj, g: d.cod(F.on_objects[obj], g),
                        lambda obj, g, h: d.compose(F.on_objects[obj], g, h), "Δ_F")


def enumerate_functors(c: Comonoid, d: Comonoid) -> list[ComonoidFunctor]:
    """All functors, by brute force over object maps and morphism images."""
    out = []
    objs = c.objects
    for images in itertools.product(d.objects, repeat=len(objs)):
        on_obj = dict(zip(objs, images))
        slots = [(o, f) for o in objs for f in c.out(o)]
        choices = [[g for g in d.out(on_obj[o]) if d.cod(on_obj[o], g) == on_obj[c.cod(o, f)]] for o, f in slots]
        for pick in itertools.product(*choices):
            F = ComonoidFunctor(c, d, on_obj, dict(zip(slots, pick)))
            if check_comonoid_functor(F).ok:
                out.append(F)
    return out
