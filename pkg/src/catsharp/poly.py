"""Polynomials, their morphisms, and the monoidal structures +, x, tensor and composition.

A polynomial is a finite family of positions, each with an ordered tuple of
directions.  Composite polynomials are lazy: directions at a position are
computed from its label, and positions are only enumerated on request.  This
lets law checks evaluate maps into large composites pointwise.
"""
from __future__ import annotations

import itertools
from collections import Counter
from typing import Callable, Iterable, Iterator

from .fincore import DEFAULT_BUDGET, FinSet, InputError, Label, Memo, guard

STAR = "*"


class Polynomial:
    """Base class.  Subclasses provide `_positions` and `_directions`."""

    def __init__(self):
        self._pos_cache: tuple | None = None
        self._pos_set: frozenset | None = None
        self._dir_cache = Memo()
        self._index_cache: dict = {}

    def _positions(self) -> Iterable[Label]:
        raise NotImplementedError

    def _directions(self, pos: Label) -> tuple:
        raise NotImplementedError

    def positions(self) -> tuple:
        if self._pos_cache is None:
            self._pos_cache = tuple(self._positions())
        return self._pos_cache

    def directions(self, pos: Label) -> tuple:
        return self._dir_cache.get(pos, lambda x: tuple(self._directions(x)))

    def dir_index(self, pos: Label) -> dict:
        try:
            return self._index_cache[pos]
        except KeyError:
            idx = {d: i for i, d in enumerate(self.directions(pos))}
            self._index_cache[pos] = idx
            return idx

    def has_position(self, pos: Label) -> bool:
        if self._pos_set is None:
            self._pos_set = frozenset(self.positions())
        return pos in self._pos_set

    def position_set(self) -> FinSet:
        return FinSet(self.positions())

    def direction_set(self, pos: Label) -> FinSet:
        return FinSet(self.directions(pos))

    def __iter__(self) -> Iterator[Label]:
        return iter(self.positions())

    def __len__(self) -> int:
        return len(self.positions())

    def arities(self) -> Counter:
        return Counter(len(self.directions(i)) for i in self.positions())

    def total_directions(self) -> int:
        return sum(len(self.directions(i)) for i in self.positions())

    def table(self) -> dict:
        return {i: self.directions(i) for i in self.positions()}

    def materialize(self) -> Poly:
        return Poly(self.table())

    def describe(self) -> str:
        """Normal form such as '2y^2 + y + 1'."""
        terms = []
        for n, k in sorted(self.arities().items(), reverse=True):
            coeff = "" if k == 1 and n > 0 else str(k)
            mono = "" if n == 0 else ("y" if n == 1 else f"y^{n}")
            terms.append(coeff + mono if mono else str(k))
        return " + ".join(terms) if terms else "0"

    def same_as(self, other: Polynomial) -> bool:
        """Equality of labelled tables."""
        return self.table() == other.table()

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.same_as(other)

    def __hash__(self) -> int:
        return hash(tuple((i, self.directions(i)) for i in self.positions()))

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.describe()}>"


class Poly(Polynomial):
    """A polynomial given by an explicit table position -> directions."""

    def __init__(self, table: dict | Iterable[tuple[Label, Iterable[Label]]]):
        super().__init__()
        items = table.items() if isinstance(table, dict) else table
        data = {}
        for pos, dirs in items:
            if pos in data:
                raise InputError(f"duplicate position {pos!r}")
            dirs = tuple(dirs)
            if len(set(dirs)) != len(dirs):
                raise InputError(f"duplicate direction at position {pos!r}")
            data[pos] = dirs
        self._data = data
        self._pos_cache = tuple(data)
        self._pos_set = frozenset(data)

    def directions(self, pos: Label) -> tuple:
        try:
            return self._data[pos]
        except KeyError:
            raise InputError(f"unknown position {pos!r}") from None

    def _directions(self, pos):
        return self.directions(pos)

    def has_position(self, pos) -> bool:
        return pos in self._pos_set


def from_arities(arities: Iterable[int]) -> Poly:
    """Positions 0..k-1 with directions 0..n-1."""
    return Poly({i: tuple(range(n)) for i, n in enumerate(arities)})


def constants() -> dict[str, Poly]:
    return {"y": Poly({STAR: (STAR,)}), "0": Poly({}), "1": Poly({STAR: ()})}


Y = constants()["y"]
ZERO = constants()["0"]
ONE = constants()["1"]


def linear(states: Iterable[Label]) -> Poly:
    """Sy: one position per state, each with a single direction."""
    return Poly({s: (STAR,) for s in states})


def representable(dirs: Iterable[Label]) -> Poly:
    """y^T: a single position with directions T."""
    return Poly({STAR: tuple(dirs)})


class Sum(Polynomial):
    def __init__(self, p: Polynomial, q: Polynomial):
        super().__init__()
        self.p, self.q = p, q

    def _positions(self):
        return [(0, i) for i in self.p.positions()] + [(1, j) for j in self.q.positions()]

    def _directions(self, pos):
        tag, x = pos
        return (self.p if tag == 0 else self.q).directions(x)

    def has_position(self, pos):
        return (isinstance(pos, tuple) and len(pos) == 2 and pos[0] in (0, 1)
                and (self.p if pos[0] == 0 else self.q).has_position(pos[1]))


class Product(Polynomial):
    def __init__(self, p: Polynomial, q: Polynomial):
        super().__init__()
        self.p, self.q = p, q

    def _positions(self):
        return [(i, j) for i in self.p.positions() for j in self.q.positions()]

    def _directions(self, pos):
        i, j = pos
        return tuple((0, a) for a in self.p.directions(i)) + tuple((1, b) for b in self.q.directions(j))

    def has_position(self, pos):
        return (isinstance(pos, tuple) and len(pos) == 2
                and self.p.has_position(pos[0]) and self.q.has_position(pos[1]))


class Tensor(Polynomial):
    def __init__(self, p: Polynomial, q: Polynomial):
        super().__init__()
        self.p, self.q = p, q

    def _positions(self):
        return [(i, j) for i in self.p.positions() for j in self.q.positions()]

    def _directions(self, pos):
        i, j = pos
        return tuple((a, b) for a in self.p.directions(i) for b in self.q.directions(j))

    def has_position(self, pos):
        return (isinstance(pos, tuple) and len(pos) == 2
                and self.p.has_position(pos[0]) and self.q.has_position(pos[1]))


class Composite(Polynomial):
    """p ◁ q.  Position (I, J) with J a tuple of q-positions aligned with p[I]."""

    def __init__(self, p: Polynomial, q: Polynomial, budget: int | None = DEFAULT_BUDGET):
        super().__init__()
        self.p, self.q = p, q
        self.budget = budget

    def count_positions(self) -> int:
        nq = len(self.q.positions())
        return sum(nq ** len(self.p.directions(i)) for i in self.p.positions())

    def _positions(self):
        guard(self.count_positions(), self.budget, "positions of a composite")
        qpos = self.q.positions()
        out = []
        for i in self.p.positions():
            for js in itertools.product(qpos, repeat=len(self.p.directions(i))):
                out.append((i, js))
        return out

    def _directions(self, pos):
        i, js = pos
        return tuple((a, b) for a, j in zip(self.p.directions(i), js) for b in self.q.directions(j))

    def has_position(self, pos):
        if not (isinstance(pos, tuple) and len(pos) == 2):
            return False
        i, js = pos
        return (self.p.has_position(i) and isinstance(js, tuple)
                and len(js) == len(self.p.directions(i))
                and all(self.q.has_position(j) for j in js))


def sum_(p: Polynomial, q: Polynomial) -> Sum:
    return Sum(p, q)


def prod(p: Polynomial, q: Polynomial) -> Product:
    return Product(p, q)


def dirichlet(p: Polynomial, q: Polynomial) -> Tensor:
    return Tensor(p, q)


def compose(p: Polynomial, q: Polynomial) -> Composite:
    return Composite(p, q)


class PolyMorphism:
    """A map of polynomials: positions forward, directions backward.

    `on_pos(I)` gives the target position; `on_dirs(I)` gives a dict sending
    each direction of the target position back to a direction of I.  Both are
    memoised.  A direction map may omit entries (truncated constructions); such
    lookups go through `back`, which raises TruncationError via the supplier.
    """

    def __init__(self, src: Polynomial, dst: Polynomial,
                 on_pos: Callable[[Label], Label], on_dirs: Callable[[Label], dict],
                 name: str = ""):
        self.src, self.dst = src, dst
        self._on_pos, self._on_dirs = on_pos, on_dirs
        self._pos_memo = Memo()
        self._dir_memo = Memo()
        self.name = name

    def pos(self, i: Label) -> Label:
        return self._pos_memo.get(i, self._on_pos)

    def dirs(self, i: Label) -> dict:
        return self._dir_memo.get(i, self._on_dirs)

    def back(self, i: Label, b: Label) -> Label:
        return self.dirs(i)[b]

    @classmethod
    def from_tables(cls, src, dst, pos_table: dict, dir_table: dict, name: str = "") -> PolyMorphism:
        return cls(src, dst, pos_table.__getitem__, dir_table.__getitem__, name)

    def tables(self) -> tuple[dict, dict]:
        pos = {i: self.pos(i) for i in self.src.positions()}
        dirs = {i: dict(self.dirs(i)) for i in self.src.positions()}
        return pos, dirs

    def key(self) -> tuple:
        out = []
        for i in self.src.positions():
            j = self.pos(i)
            d = self.dirs(i)
            out.append((j, tuple(d[b] for b in self.dst.directions(j))))
        return tuple(out)

    def then(self, other: PolyMorphism) -> PolyMorphism:
        """self followed by other."""
        f, g = self, other

        def on_dirs(i):
            j = f.pos(i)
            fd, gd = f.dirs(i), g.dirs(j)
            return {c: fd[b] for c, b in gd.items()}

        return PolyMorphism(f.src, g.dst, lambda i: g.pos(f.pos(i)), on_dirs)

    def check(self, positions: Iterable[Label] | None = None) -> list[str]:
        """Well-formedness: images are positions and direction maps are total and land in the source."""
        problems = []
        for i in (self.src.positions() if positions is None else positions):
            j = self.pos(i)
            if not self.dst.has_position(j):
                problems.append(f"position {i!r} maps to non-position {j!r}")
                continue
            d = self.dirs(i)
            src_dirs = set(self.src.directions(i))
            for b in self.dst.directions(j):
                if b not in d:
                    problems.append(f"direction {b!r} over {i!r} has no preimage")
                elif d[b] not in src_dirs:
                    problems.append(f"direction {b!r} over {i!r} maps to non-direction {d[b]!r}")
        return problems

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMorphism):
            return NotImplemented
        return first_difference(self, other) is None

    __hash__ = None

    def __repr__(self) -> str:
        return f"<PolyMorphism {self.name or ''} {self.src!r} -> {self.dst!r}>"


def first_difference(f: PolyMorphism, g: PolyMorphism, positions: Iterable[Label] | None = None):
    """First (position, direction) witness where f and g disagree, or None."""
    for i in (f.src.positions() if positions is None else positions):
        j1, j2 = f.pos(i), g.pos(i)
        if j1 != j2:
            return (i, None, j1, j2)
        d1, d2 = f.dirs(i), g.dirs(i)
        for b in f.dst.directions(j1):
            if d1.get(b) != d2.get(b):
                return (i, b, d1.get(b), d2.get(b))
    return None


def identity(p: Polynomial) -> PolyMorphism:
    return PolyMorphism(p, p, lambda i: i, lambda i: {a: a for a in p.directions(i)}, "id")


def enumerate_morphisms(p: Polynomial, q: Polynomial, budget: int | None = DEFAULT_BUDGET) -> list[PolyMorphism]:
    """All morphisms p -> q in a deterministic order."""
    total = 1
    for i in p.positions():
        total *= sum(len(p.directions(i)) ** len(q.directions(j)) for j in q.positions())
    guard(total, budget, f"morphisms {p.describe()} -> {q.describe()}")
    options = []
    for i in p.positions():
        opts = []
        for j in q.positions():
            qd = q.directions(j)
            for images in itertools.product(p.directions(i), repeat=len(qd)):
                opts.append((j, dict(zip(qd, images))))
        options.append(opts)
    out = []
    src_pos = p.positions()
    for choice in itertools.product(*options):
        pos = {i: c[0] for i, c in zip(src_pos, choice)}
        dirs = {i: c[1] for i, c in zip(src_pos, choice)}
        out.append(PolyMorphism.from_tables(p, q, pos, dirs))
    return out


def is_cartesian(f: PolyMorphism) -> bool:
    for i in f.src.positions():
        d = f.dirs(i)
        src_dirs = f.src.directions(i)
        if len(d) != len(src_dirs) or set(d.values()) != set(src_dirs):
            return False
    return True


def is_vertical(f: PolyMorphism) -> bool:
    images = [f.pos(i) for i in f.src.positions()]
    return len(set(images)) == len(images) and set(images) == set(f.dst.positions())


def invert(f: PolyMorphism) -> PolyMorphism:
    """Inverse of an isomorphism with enumerable ends."""
    if not (is_vertical(f) and is_cartesian(f)):
        raise InputError("not an isomorphism")
    pos = {f.pos(i): i for i in f.src.positions()}
    dirs = {f.pos(i): {a: b for b, a in f.dirs(i).items()} for i in f.src.positions()}
    return PolyMorphism.from_tables(f.dst, f.src, pos, dirs)


# -- operations on morphisms -------------------------------------------------

def compose_maps(f: PolyMorphism, g: PolyMorphism) -> PolyMorphism:
    """f ◁ g : p ◁ q -> p' ◁ q'."""
    src, dst = Composite(f.src, g.src), Composite(f.dst, g.dst)

    def on_pos(pos):
        i, js = pos
        idx = f.src.dir_index(i)
        fd = f.dirs(i)
        i2 = f.pos(i)
        return (i2, tuple(g.pos(js[idx[fd[a2]]]) for a2 in f.dst.directions(i2)))

    def on_dirs(pos):
        i, js = pos
        idx = f.src.dir_index(i)
        fd = f.dirs(i)
        i2 = f.pos(i)
        out = {}
        for a2 in f.dst.directions(i2):
            a = fd[a2]
            j = js[idx[a]]
            for b2, b in g.dirs(j).items():
                out[(a2, b2)] = (a, b)
        return out

    return PolyMorphism(src, dst, on_pos, on_dirs, "◁")


def whisker_left(p: Polynomial, g: PolyMorphism) -> PolyMorphism:
    """p ◁ g."""
    return compose_maps(identity(p), g)


def whisker_right(f: PolyMorphism, q: Polynomial) -> PolyMorphism:
    """f ◁ q."""
    return compose_maps(f, identity(q))


def sum_maps(f: PolyMorphism, g: PolyMorphism) -> PolyMorphism:
    src, dst = Sum(f.src, g.src), Sum(f.dst, g.dst)
    return PolyMorphism(src, dst,
                        lambda pos: (pos[0], (f if pos[0] == 0 else g).pos(pos[1])),
                        lambda pos: dict((f if pos[0] == 0 else g).dirs(pos[1])))


def prod_maps(f: PolyMorphism, g: PolyMorphism) -> PolyMorphism:
    src, dst = Product(f.src, g.src), Product(f.dst, g.dst)

    def on_dirs(pos):
        i, j = pos
        out = {(0, a2): (0, a) for a2, a in f.dirs(i).items()}
        out.update({(1, b2): (1, b) for b2, b in g.dirs(j).items()})
        return out

    return PolyMorphism(src, dst, lambda pos: (f.pos(pos[0]), g.pos(pos[1])), on_dirs)


def tensor_maps(f: PolyMorphism, g: PolyMorphism) -> PolyMorphism:
    src, dst = Tensor(f.src, g.src), Tensor(f.dst, g.dst)

    def on_dirs(pos):
        i, j = pos
        fd, gd = f.dirs(i), g.dirs(j)
        return {(a2, b2): (fd[a2], gd[b2]) for a2 in fd for b2 in gd}

    return PolyMorphism(src, dst, lambda pos: (f.pos(pos[0]), g.pos(pos[1])), on_dirs)


def pairing(f: PolyMorphism, g: PolyMorphism) -> PolyMorphism:
    """(f, g) : p -> q x r."""
    dst = Product(f.dst, g.dst)

    def on_dirs(i):
        out = {(0, a): b for a, b in f.dirs(i).items()}
        out.update({(1, a): b for a, b in g.dirs(i).items()})
        return out

    return PolyMorphism(f.src, dst, lambda i: (f.pos(i), g.pos(i)), on_dirs)


def projection(p: Polynomial, q: Polynomial, side: int) -> PolyMorphism:
    src = Product(p, q)
    return PolyMorphism(src, (p, q)[side], lambda pos: pos[side],
                        lambda pos: {a: (side, a) for a in (p, q)[side].directions(pos[side])})


# -- canonical isomorphisms for ◁ -------------------------------------------

def left_unitor(p: Polynomial) -> PolyMorphism:
    """y ◁ p -> p."""
    return PolyMorphism(Composite(Y, p), p, lambda pos: pos[1][0],
                        lambda pos: {a: (STAR, a) for a in p.directions(pos[1][0])})


def left_unitor_inv(p: Polynomial) -> PolyMorphism:
    """p -> y ◁ p."""
    return PolyMorphism(p, Composite(Y, p), lambda i: (STAR, (i,)),
                        lambda i: {(STAR, a): a for a in p.directions(i)})


def right_unitor(p: Polynomial) -> PolyMorphism:
    """p ◁ y -> p."""
    return PolyMorphism(Composite(p, Y), p, lambda pos: pos[0],
                        lambda pos: {a: (a, STAR) for a in p.directions(pos[0])})


def right_unitor_inv(p: Polynomial) -> PolyMorphism:
    """p -> p ◁ y."""
    return PolyMorphism(p, Composite(p, Y), lambda i: (i, (STAR,) * len(p.directions(i))),
                        lambda i: {(a, STAR): a for a in p.directions(i)})


def associator(p: Polynomial, q: Polynomial, r: Polynomial) -> PolyMorphism:
    """(p ◁ q) ◁ r -> p ◁ (q ◁ r)."""
    pq = Composite(p, q)
    src, dst = Composite(pq, r), Composite(p, Composite(q, r))

    def on_pos(pos):
        (i, js), ks = pos
        kidx = pq.dir_index((i, js))
        inner = []
        for a, j in zip(p.directions(i), js):
            inner.append((j, tuple(ks[kidx[(a, b)]] for b in q.directions(j))))
        return (i, tuple(inner))

    def on_dirs(pos):
        (i, js), ks = pos
        kidx = pq.dir_index((i, js))
        out = {}
        for a, j in zip(p.directions(i), js):
            for b in q.directions(j):
                for c in r.directions(ks[kidx[(a, b)]]):
                    out[(a, (b, c))] = ((a, b), c)
        return out

    return PolyMorphism(src, dst, on_pos, on_dirs, "assoc")


def associator_inv(p: Polynomial, q: Polynomial, r: Polynomial) -> PolyMorphism:
    """p ◁ (q ◁ r) -> (p ◁ q) ◁ r."""
    src, dst = Composite(p, Composite(q, r)), Composite(Composite(p, q), r)

    def on_pos(pos):
        i, inner = pos
        js = tuple(j for j, _ in inner)
        ks = tuple(k for _, kk in inner for k in kk)
        return ((i, js), ks)

    def on_dirs(pos):
        i, inner = pos
        out = {}
        for a, (j, kk) in zip(p.directions(i), inner):
            for b, k in zip(q.directions(j), kk):
                for c in r.directions(k):
                    out[((a, b), c)] = (a, (b, c))
        return out

    return PolyMorphism(src, dst, on_pos, on_dirs, "assoc⁻¹")


# -- ⊗ unitors, duoidality, linear isomorphisms ------------------------------

def tensor_left_unitor(p: Polynomial) -> PolyMorphism:
    """y ⊗ p -> p."""
    return PolyMorphism(Tensor(Y, p), p, lambda pos: pos[1],
                        lambda pos: {a: (STAR, a) for a in p.directions(pos[1])})


def tensor_right_unitor(p: Polynomial) -> PolyMorphism:
    """p ⊗ y -> p."""
    return PolyMorphism(Tensor(p, Y), p, lambda pos: pos[0],
                        lambda pos: {a: (a, STAR) for a in p.directions(pos[0])})


def duoidal_comparison(p: Polynomial, q: Polynomial, r: Polynomial, s: Polynomial) -> PolyMorphism:
    """(p ◁ q) ⊗ (r ◁ s) -> (p ⊗ r) ◁ (q ⊗ s)."""
    src = Tensor(Composite(p, q), Composite(r, s))
    dst = Composite(Tensor(p, r), Tensor(q, s))

    def on_pos(pos):
        (i, js), (k, ls) = pos
        return ((i, k), tuple((j, l) for j in js for l in ls))

    def on_dirs(pos):
        (i, js), (k, ls) = pos
        out = {}
        for a, j in zip(p.directions(i), js):
            for b, l in zip(r.directions(k), ls):
                for x in q.directions(j):
                    for z in s.directions(l):
                        out[((a, b), (x, z))] = ((a, x), (b, z))
        return out

    return PolyMorphism(src, dst, on_pos, on_dirs, "duoidal")


def duoidal_sum(p: Polynomial, q: Polynomial, r: Polynomial, s: Polynomial) -> PolyMorphism:
    """(p ◁ q) + (r ◁ s) -> (p + r) ◁ (q + s)."""
    src = Sum(Composite(p, q), Composite(r, s))
    dst = Composite(Sum(p, r), Sum(q, s))

    def on_pos(pos):
        tag, (i, js) = pos
        return ((tag, i), tuple((tag, j) for j in js))

    def on_dirs(pos):
        tag, (i, js) = pos
        first, second = (p, q) if tag == 0 else (r, s)
        return {(a, b): (a, b) for a, j in zip(first.directions(i), js) for b in second.directions(j)}

    return PolyMorphism(src, dst, on_pos, on_dirs, "duoidal+")


def linear_iso(states: Iterable[Label], p: Polynomial) -> tuple[PolyMorphism, PolyMorphism]:
    """Sy ⊗ p -> Sy ◁ p and p ⊗ y^S -> p ◁ y^S, both induced by duoidality."""
    states = tuple(states)
    sy, ys = linear(states), representable(states)
    # Sy ⊗ p ≅ (Sy ◁ y) ⊗ (y ◁ p) -> (Sy ⊗ y) ◁ (y ⊗ p) ≅ Sy ◁ p
    pre = tensor_maps(right_unitor_inv(sy), left_unitor_inv(p))
    first = pre.then(duoidal_comparison(sy, Y, Y, p)).then(
        compose_maps(tensor_right_unitor(sy), tensor_left_unitor(p)))
    # p ⊗ y^S ≅ (p ◁ y) ⊗ (y ◁ y^S) -> (p ⊗ y) ◁ (y ⊗ y^S) ≅ p ◁ y^S
    pre2 = tensor_maps(right_unitor_inv(p), left_unitor_inv(ys))
    second = pre2.then(duoidal_comparison(p, Y, Y, ys)).then(
        compose_maps(tensor_right_unitor(p), tensor_left_unitor(ys)))
    return first, second


def linear_adjunction(states: Iterable[Label]) -> tuple[PolyMorphism, PolyMorphism]:
    """Unit y -> y^S ◁ Sy and counit Sy ◁ y^S -> y of the adjunction Sy ⊣ y^S."""
    states = tuple(states)
    sy, ys = linear(states), representable(states)
    unit = PolyMorphism(Y, Composite(ys, sy), lambda _: (STAR, states),
                        lambda _: {(s, STAR): STAR for s in states}, "unit")
    counit = PolyMorphism(Composite(sy, ys), Y, lambda pos: STAR,
                          lambda pos: {STAR: (STAR, pos[0])}, "counit")
    return unit, counit


def check_linear_adjunction(states: Iterable[Label]) -> list[str]:
    """Both triangle identities, composed from whiskered unit/counit and associators."""
    states = tuple(states)
    sy, ys = linear(states), representable(states)
    unit, counit = linear_adjunction(states)
    problems = []
    # Sy -> Sy ◁ y -> Sy ◁ (y^S ◁ Sy) -> (Sy ◁ y^S) ◁ Sy -> y ◁ Sy -> Sy
    t1 = (right_unitor_inv(sy).then(whisker_left(sy, unit)).then(associator_inv(sy, ys, sy))
          .then(whisker_right(counit, sy)).then(left_unitor(sy)))
    if t1 != identity(sy):
        problems.append(f"left triangle fails: {first_difference(t1, identity(sy))}")
    # y^S -> y ◁ y^S -> (y^S ◁ Sy) ◁ y^S -> y^S ◁ (Sy ◁ y^S) -> y^S ◁ y -> y^S
    t2 = (left_unitor_inv(ys).then(whisker_right(unit, ys)).then(associator(ys, sy, ys))
          .then(whisker_left(ys, counit)).then(right_unitor(ys)))
    if t2 != identity(ys):
        problems.append(f"right triangle fails: {first_difference(t2, identity(ys))}")
    return problems


def evaluate(p: Polynomial, xs: Iterable[Label]) -> list[tuple]:
    """p(X) = Σ_I X^{p[I]} as a list of (I, tuple of values)."""
    xs = tuple(xs)
    return [(i, vals) for i in p.positions() for vals in itertools.product(xs, repeat=len(p.directions(i)))]


def internal_hom(q: Polynomial, p: Polynomial, budget: int | None = DEFAULT_BUDGET) -> Poly:
    """[q, p]: one position per morphism q -> p, directions Σ_{J} p[φ₁J]."""
    table = {}
    for phi in enumerate_morphisms(q, p, budget):
        table[phi.key()] = tuple((j, a) for j in q.positions() for a in p.directions(phi.pos(j)))
    return Poly(table)


def hom_position_morphism(q: Polynomial, p: Polynomial, key: tuple) -> PolyMorphism:
    """Decode an [q, p] position back into the morphism it names."""
    pos, dirs = {}, {}
    for j, (i, images) in zip(q.positions(), key):
        pos[j] = i
        dirs[j] = dict(zip(p.directions(i), images))
    return PolyMorphism.from_tables(q, p, pos, dirs)


def find_iso(p: Polynomial, q: Polynomial) -> PolyMorphism | None:
    """Some isomorphism p -> q, matching positions of equal arity in order."""
    if p.arities() != q.arities():
        return None
    pool: dict[int, list] = {}
    for j in q.positions():
        pool.setdefault(len(q.directions(j)), []).append(j)
    pos, dirs = {}, {}
    for i in p.positions():
        j = pool[len(p.directions(i))].pop(0)
        pos[i] = j
        dirs[i] = dict(zip(q.directions(j), p.directions(i)))
    return PolyMorphism.from_tables(p, q, pos, dirs)
