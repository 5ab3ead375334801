"""Small named categories used as fixtures and by the CLI."""
from __future__ import annotations

from .comonoid import FinCategory, category_from_homs, monoid_category, preorder_category


def terminal() -> FinCategory:
    return FinCategory(("*",), {"*": ("id",)}, {"id": "*"}, {"*": "id"}, {("id", "id"): "id"}, "terminal")


def discrete_category(n: int) -> FinCategory:
    objs = tuple(str(i) for i in range(n))
    return FinCategory(objs, {a: (f"id{a}",) for a in objs}, {f"id{a}": a for a in objs},
                       {a: f"id{a}" for a in objs}, {(f"id{a}", f"id{a}"): f"id{a}" for a in objs}, f"discrete{n}")


def chain(n: int) -> FinCategory:
    """Objects 0 < 1 < ... < n; one morphism i->j for each i <= j."""
    return preorder_category([str(i) for i in range(n + 1)], lambda a, b: int(a) <= int(b),
                             lambda a, b: f"{a}->{b}", f"chain{n}")


def walking_arrow() -> FinCategory:
    k = chain(1)
    k.name = "walking_arrow"
    return k


def cyclic(n: int) -> FinCategory:
    return monoid_category([str(i) for i in range(n)], lambda f, g: str((int(f) + int(g)) % n), "0", f"Z{n}")


def commuting_square() -> FinCategory:
    objs = ["00", "01", "10", "11"]
    return preorder_category(objs, lambda a, b: a[0] <= b[0] and a[1] <= b[1], lambda a, b: f"{a}->{b}",
                             "commuting_square")


def graph_category() -> FinCategory:
    """e ⇉ v: copresheaves are graphs, with s and t sending an edge to its source and target."""
    mors = [("id_e", "e", "e"), ("s", "e", "v"), ("t", "e", "v"), ("id_v", "v", "v")]
    comp = {("id_e", "id_e"): "id_e", ("id_e", "s"): "s", ("id_e", "t"): "t", ("s", "id_v"): "s",
            ("t", "id_v"): "t", ("id_v", "id_v"): "id_v"}
    return category_from_homs(("e", "v"), mors, {"e": "id_e", "v": "id_v"}, comp, "g")


def idempotent() -> FinCategory:
    """One object with an idempotent e; not a group, so its opposite is a useful test."""
    return monoid_category(["1", "e"], lambda f, g: "1" if f == g == "1" else "e", "1", "idempotent")


def categories() -> dict[str, FinCategory]:
    cats = [terminal(), discrete_category(2), discrete_category(3), walking_arrow(), chain(2), chain(3),
            cyclic(2), cyclic(3), commuting_square(), graph_category()]
    return {k.name: k for k in cats}
