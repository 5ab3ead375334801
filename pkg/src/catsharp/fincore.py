"""Finite sets, functions, quotients, pullbacks and function enumeration."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

Label = Hashable

DEFAULT_BUDGET = 10**6
ISO_BUDGET = 10**5


class InputError(ValueError):
    """Malformed or inconsistent input data."""


class ResourceError(RuntimeError):
    """An enumeration would exceed the configured candidate budget."""


class TruncationError(ArithmeticError):
    """A construction left the finite fragment it was truncated to."""


def guard(count: int, budget: int | None, what: str) -> None:
    if budget is not None and count > budget:
        raise ResourceError(f"{what}: {count} candidates exceeds budget {budget}")


class PartialDict(dict):
    """A dict whose missing keys signal that a truncated construction was left."""

    def __missing__(self, key):
        raise TruncationError(f"{key!r} lies outside the truncation")


class Memo:
    """A cache for functions of (often deeply nested, hence slow to hash) labels.

    Repeated lookups with the same object hit an identity table first; the key is
    kept alive so its id cannot be reused.
    """

    def __init__(self):
        self._by_value: dict = {}
        self._by_id: dict = {}

    def get(self, key: Label, compute: Callable[[Label], Any]) -> Any:
        hit = self._by_id.get(id(key))
        if hit is not None and hit[0] is key:
            return hit[1]
        try:
            value = self._by_value[key]
        except KeyError:
            value = self._by_value[key] = compute(key)
        self._by_id[id(key)] = (key, value)
        return value


class FinSet:
    """An ordered finite set of distinct hashable labels."""

    __slots__ = ("elements", "_index")

    def __init__(self, elements: Iterable[Label] = ()):
        elems = tuple(elements)
        index = {}
        for i, x in enumerate(elems):
            if x in index:
                raise InputError(f"duplicate label {x!r}")
            index[x] = i
        self.elements = elems
        self._index = index

    def __iter__(self) -> Iterator[Label]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._index

    def __getitem__(self, i: int) -> Label:
        return self.elements[i]

    def index(self, x: Label) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise InputError(f"unknown label {x!r}") from None

    def __eq__(self, other) -> bool:
        return isinstance(other, FinSet) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"FinSet({list(self.elements)!r})"

    def same_elements(self, other: FinSet) -> bool:
        return set(self._index) == set(other._index)


class FinFn:
    """A total function between finite sets."""

    __slots__ = ("dom", "cod", "map")

    def __init__(self, dom: FinSet, cod: FinSet, mapping: dict):
        for x in dom:
            if x not in mapping:
                raise InputError(f"function undefined at {x!r}")
            if mapping[x] not in cod:
                raise InputError(f"image {mapping[x]!r} of {x!r} not in codomain")
        if len(mapping) != len(dom):
            extra = [x for x in mapping if x not in dom]
            raise InputError(f"function defined outside its domain at {extra[0]!r}")
        self.dom = dom
        self.cod = cod
        self.map = dict(mapping)

    def __call__(self, x: Label) -> Label:
        return self.map[x]

    def then(self, g: FinFn) -> FinFn:
        if g.dom != self.cod:
            raise InputError("composing functions with mismatched ends")
        return FinFn(self.dom, g.cod, {x: g.map[y] for x, y in self.map.items()})

    def is_injective(self) -> bool:
        return len(set(self.map.values())) == len(self.dom)

    def is_surjective(self) -> bool:
        return set(self.map.values()) == set(self.cod)

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def image_tuple(self) -> tuple:
        return tuple(self.map[x] for x in self.dom)

    def __eq__(self, other) -> bool:
        return (isinstance(other, FinFn) and self.dom == other.dom
                and self.cod == other.cod and self.map == other.map)

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, self.image_tuple()))

    def __repr__(self) -> str:
        return f"FinFn({self.map!r})"

    @staticmethod
    def identity(s: FinSet) -> FinFn:
        return FinFn(s, s, {x: x for x in s})


class UnionFind:
    def __init__(self, items: Iterable[Label]):
        self.parent = {x: x for x in items}
        self.order = {x: i for i, x in enumerate(self.parent)}

    def find(self, x: Label) -> Label:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: Label, b: Label) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # the earlier label stays the representative
        if self.order[rb] < self.order[ra]:
            ra, rb = rb, ra
        self.parent[rb] = ra


def quotient(s: FinSet, pairs: Iterable[tuple[Label, Label]]) -> tuple[FinSet, FinFn]:
    """Quotient by the equivalence generated by pairs; classes named by their least member."""
    uf = UnionFind(s)
    for a, b in pairs:
        if a not in s or b not in s:
            bad = a if a not in s else b
            raise InputError(f"unknown label {bad!r} in quotient relation")
        uf.union(a, b)
    proj = {x: uf.find(x) for x in s}
    classes = FinSet(x for x in s if proj[x] == x)
    return classes, FinFn(s, classes, proj)


def enumerate_functions(a: FinSet, b: FinSet, budget: int | None = DEFAULT_BUDGET) -> list[FinFn]:
    """All functions a -> b in lexicographic order (first element varies slowest)."""
    guard(len(b) ** len(a), budget, f"functions {len(a)} -> {len(b)}")
    return [FinFn(a, b, dict(zip(a, images)))
            for images in itertools.product(b.elements, repeat=len(a))]


def pullback(f: FinFn, g: FinFn) -> tuple[FinSet, FinFn, FinFn]:
    """{(x, y) : f(x) = g(y)} with its two projections."""
    if f.cod != g.cod:
        raise InputError("pullback of functions with different codomains")
    pairs = FinSet((x, y) for x in f.dom for y in g.dom if f(x) == g(y))
    left = FinFn(pairs, f.dom, {xy: xy[0] for xy in pairs})
    right = FinFn(pairs, g.dom, {xy: xy[1] for xy in pairs})
    return pairs, left, right


@dataclass
class Report:
    """Outcome of a law check: a list of located violations plus coverage counts."""

    name: str
    violations: list[str] = field(default_factory=list)
    checked: int = 0
    skipped: list[Any] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, message: str) -> None:
        self.violations.append(message)

    def absorb(self, other: Report, prefix: str = "") -> None:
        self.violations.extend(prefix + v for v in other.violations)
        self.checked += other.checked
        self.skipped.extend(other.skipped)

    @property
    def coverage(self) -> float:
        total = self.checked + len(self.skipped)
        return 1.0 if total == 0 else self.checked / total

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        status = "ok" if self.ok else f"{len(self.violations)} violation(s)"
        text = f"{self.name}: {status}, {self.checked} checked"
        if self.skipped:
            text += f", {len(self.skipped)} skipped ({100 * self.coverage:.1f}% coverage)"
        if self.violations:
            text += "\n  " + "\n  ".join(self.violations[:10])
        return text


def natural_maps(
    elements: Sequence[Label],
    arrows: Callable[[Label], Iterable[tuple[Any, Label]]],
    candidates: Callable[[Label], Sequence[Label]],
    act: Callable[[Label, Any], Label],
    *,
    injective: bool = False,
    prune: Callable[[dict], bool] | None = None,
    budget: int | None = DEFAULT_BUDGET,
) -> Iterator[dict]:
    """Enumerate maps h on `elements` with h(x') = act(h(x), g) whenever (g, x') is in arrows(x).

    `candidates(x)` lists the allowed images of x.  Assigning one element forces
    the images of everything it reaches, so search branches only on elements not
    yet reached.  Yields fresh dicts in a deterministic order.
    """
    elements = list(elements)
    nodes = [0]

    def propagate(h: dict, used: set, x: Label, y: Label) -> bool:
        stack = [(x, y)]
        while stack:
            u, v = stack.pop()
            if u in h:
                if h[u] != v:
                    return False
                continue
            if v not in allowed[u]:
                return False
            if injective and v in used:
                return False
            h[u] = v
            used.add(v)
            for g, u2 in arrows(u):
                stack.append((u2, act(v, g)))
        return True

    allowed = {x: set(candidates(x)) for x in elements}

    def search(i: int, h: dict, used: set) -> Iterator[dict]:
        while i < len(elements) and elements[i] in h:
            i += 1
        if i == len(elements):
            yield dict(h)
            return
        x = elements[i]
        for y in candidates(x):
            nodes[0] += 1
            guard(nodes[0], budget, "natural map search nodes")
            h2, used2 = dict(h), set(used)
            if propagate(h2, used2, x, y) and (prune is None or prune(h2)):
                yield from search(i + 1, h2, used2)

    yield from search(0, {}, set())
