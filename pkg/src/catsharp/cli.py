"""File formats, the workspace loader, and the `catsharp` command line.

Every file is JSON with a top-level `kind` among polynomial, category, copresheaf, bicomodule,
machine, copresheaf_polynomial, or bundle (a list of `items`).  Labels are strings; composite
labels produced by constructions are written in a canonical bracketed form.  Tables are sorted
by label text and fields appear in a fixed order, so emitted files reload byte-identically.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Any

from .bicomod import (Bicomodule, check_bicomodule, compose_bicomodules, compose_oracle, evaluate_prafunctor,
                      from_actions, identity_bicomodule, isomorphic, opposite_via_spans)
from .comonoid import (Comonoid, FinCategory, category_from_homs, check_category, check_isomorphism,
                       from_category, opposite_direct, to_category)
from .copresheaf import Copresheaf, check_copresheaf
from .corpus import categories
from .dynamics import (Coalgebra, Node, check_coalgebra, coalgebra_to_handler, lift_to_cofree, render_tree,
                       run_behavior_tree, tree_to_element)
from .fincore import DEFAULT_BUDGET, InputError, Label, Report, ResourceError, TruncationError
from .poly import STAR, Poly, Polynomial
from .polye import CopresheafPolynomial, check_copresheaf_polynomial, embed


class LawError(Exception):
    """A loaded or computed object fails its checker."""


# -- labels ------------------------------------------------------------------------

def label_text(x: Label) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, bool) or x is None:
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, tuple):
        return "(" + ",".join(label_text(e) for e in x) + ")"
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(label_text(e) for e in x)) + "}"
    return repr(x)


def _texts(labels, where: str) -> dict:
    out = {}
    for x in labels:
        t = label_text(x)
        if t in out.values():
            raise InputError(f"{where}: two labels render as {t!r}")
        out[x] = t
    return out


def _sorted(items):
    return sorted(items)


# -- writers ---------------------------------------------------------------------------

def dump_polynomial(p: Polynomial, name: str = "") -> dict:
    pos = _texts(p.positions(), "polynomial positions")
    entries = []
    for i in p.positions():
        dirs = _texts(p.directions(i), f"directions of {pos[i]}")
        entries.append({"name": pos[i], "directions": _sorted(dirs.values())})
    entries.sort(key=lambda e: e["name"])
    return {"kind": "polynomial", "name": name, "positions": entries}


def _category_view(c: Comonoid | FinCategory):
    """(category, object text, morphism text keyed by (object, direction))."""
    k = c if isinstance(c, FinCategory) else to_category(c)
    objs = _texts(k.objects, "objects")
    mors = _texts(k.morphisms, "morphisms")
    if isinstance(c, FinCategory):
        tag = {(k.dom[f], f): mors[f] for f in k.morphisms}
    else:
        labels = [f for obj in c.objects for f in c.out(obj)]
        unique = len(set(labels)) == len(labels)
        tag = {(obj, f): mors[f if unique else (obj, f)] for obj in c.objects for f in c.out(obj)}
    return k, objs, tag


def dump_category(c: Comonoid | FinCategory, name: str | None = None) -> dict:
    k, objs, _ = _category_view(c)
    text = _texts(k.morphisms, "morphisms")
    morphisms = sorted([text[f], objs[k.dom[f]], objs[k.cod[f]]] for f in k.morphisms)
    identities = {objs[o]: text[k.identity[o]] for o in k.objects}
    comp = sorted([text[f], text[g], text[h]] for (f, g), h in k.comp.items())
    out = {"kind": "category", "name": name if name is not None else (k.name or ""),
           "objects": _sorted(objs.values()), "morphisms": morphisms,
           "identities": dict(sorted(identities.items())), "composition": comp}
    if k.partial:
        out["partial"] = True
    return out


def _dump_sets(x: Copresheaf, objs: dict, tag: dict) -> tuple[dict, dict]:
    c = x.base
    el = {obj: _texts(x.at[obj], f"elements over {objs[obj]}") for obj in c.objects}
    sets = {objs[obj]: _sorted(el[obj].values()) for obj in c.objects}
    actions = {}
    for obj in c.objects:
        for f in c.out(obj):
            b = c.cod(obj, f)
            actions[tag[(obj, f)]] = dict(sorted((el[obj][e], el[b][x.act(obj, e, f)]) for e in x.at[obj]))
    return dict(sorted(sets.items())), dict(sorted(actions.items()))


def dump_copresheaf(x: Copresheaf, name: str | None = None) -> dict:
    _, objs, tag = _category_view(x.base)
    sets, actions = _dump_sets(x, objs, tag)
    return {"kind": "copresheaf", "name": name if name is not None else x.name,
            "category": dump_category(x.base), "sets": sets, "actions": actions}


def dump_bicomodule(b: Bicomodule, name: str | None = None) -> dict:
    _, lobjs, ltag = _category_view(b.left)
    _, robjs, rtag = _category_view(b.right)
    pos = _texts(b.positions(), "bicomodule positions")
    dirs = {i: _texts(b.directions(i), f"directions of {pos[i]}") for i in b.positions()}
    entries, lact, ltrans, ract = [], {}, {}, {}
    for i in b.positions():
        d = dirs[i]
        entries.append({"name": pos[i], "base": lobjs[b.base(i)],
                        "directions": sorted(({"name": d[a], "type": robjs[b.dtype(i, a)]}
                                              for a in b.directions(i)), key=lambda e: e["name"])})
        obj = b.base(i)
        lact[pos[i]] = dict(sorted((ltag[(obj, k)], pos[b.act(i, k)]) for k in b.left.out(obj)))
        ltrans[pos[i]] = dict(sorted(
            (ltag[(obj, k)], dict(sorted((dirs[b.act(i, k)][a2], d[a]) for a2, a in b.transport(i, k).items())))
            for k in b.left.out(obj)))
        ract[pos[i]] = dict(sorted(
            (d[a], dict(sorted((rtag[(b.dtype(i, a), g)], d[b.ract(i, a, g)]) for g in b.right.out(b.dtype(i, a)))))
            for a in b.directions(i)))
    entries.sort(key=lambda e: e["name"])
    return {"kind": "bicomodule", "name": name if name is not None else b.name,
            "left": dump_category(b.left), "right": dump_category(b.right), "positions": entries,
            "left_action": dict(sorted(lact.items())), "left_transport": dict(sorted(ltrans.items())),
            "right_action": dict(sorted(ract.items()))}


def dump_machine(m: Coalgebra) -> dict:
    states = _texts(m.states, "states")
    ppos = _texts(m.p.positions(), "output positions")
    qpos = _texts(m.q.positions(), "input positions")
    step = {}
    for s in m.states:
        on_pos, on_dirs, nxt = m.step[s]
        rows = {}
        for j in m.q.positions():
            i = on_pos[j]
            pd = _texts(m.p.directions(i), "output directions")
            qd = _texts(m.q.directions(j), "input directions")
            rows[qpos[j]] = {"position": ppos[i],
                             "back": dict(sorted((pd[b], qd[on_dirs[j][b]]) for b in m.p.directions(i))),
                             "next": dict(sorted((pd[b], states[nxt[(j, b)]]) for b in m.p.directions(i)))}
        step[states[s]] = dict(sorted(rows.items()))
    return {"kind": "machine", "name": m.name, "output": dump_polynomial(m.p), "input": dump_polynomial(m.q),
            "states": _sorted(states.values()), "step": dict(sorted(step.items()))}


def dump_copresheaf_polynomial(p: CopresheafPolynomial) -> dict:
    _, objs, tag = _category_view(p.base)
    tsets, tact = _dump_sets(p.total, objs, tag)
    psets, pact = _dump_sets(p.parts, objs, tag)
    proj = {objs[obj]: dict(sorted((label_text(w), label_text(x)) for w, x in p.proj[obj].items()))
            for obj in p.base.objects}
    return {"kind": "copresheaf_polynomial", "name": p.name, "category": dump_category(p.base),
            "total": {"sets": tsets, "actions": tact}, "parts": {"sets": psets, "actions": pact},
            "proj": dict(sorted(proj.items()))}


def dump_tree(tree: Node | Label) -> dict:
    if not isinstance(tree, Node):
        return {"state": label_text(tree)}
    return {"state": label_text(tree.state), "position": label_text(tree.position),
            "children": [{"direction": label_text(b), "tree": dump_tree(c)} for b, c in tree.children]}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


# -- readers -------------------------------------------------------------------------

def _need(doc: Any, key: str, where: str, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"{where}: missing field {key!r}")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise InputError(f"{where}.{key}: expected {kind.__name__}")
    return value


def _unique(names: list, where: str) -> None:
    seen = set()
    for n in names:
        if not isinstance(n, str):
            raise InputError(f"{where}: label {n!r} is not a string")
        if n in seen:
            raise InputError(f"{where}: duplicate label {n!r}")
        seen.add(n)


class Workspace:
    """Named definitions; categories of the shipped corpus are always available."""

    def __init__(self, budget: int | None = DEFAULT_BUDGET):
        self.budget = budget
        self.items: dict[str, tuple[str, Any]] = {}
        self.reports: list[tuple[str, str, Report]] = []
        self._comonoids: dict[int, Comonoid] = {}
        self._files: dict[str, tuple] = {}
        for name, k in categories().items():
            self.items[name] = ("category", from_category(k, name))

    # references
    def get(self, name: str, kind: str | None = None):
        if name not in self.items:
            raise InputError(f"unknown name {name!r}")
        k, obj = self.items[name]
        if kind == "bicomodule" and k == "category":
            return identity_bicomodule(obj)
        if kind is not None and k != kind:
            raise InputError(f"{name!r} is a {k}, not a {kind}")
        return obj

    def _same_category(self, name: str, kind: str, obj) -> bool:
        """A category may be redefined under its name by an identical one."""
        return (kind == "category" and name in self.items and self.items[name][0] == "category"
                and self.items[name][1].same_as(obj))

    def add(self, name: str, kind: str, obj, where: str, replace: bool = False) -> None:
        if name in self.items and not replace:
            raise InputError(f"{where}: duplicate name {name!r}")
        self.items[name] = (kind, obj)

    def category(self, ref, where: str) -> Comonoid:
        if isinstance(ref, str):
            return self.get(ref, "category")
        if isinstance(ref, dict):
            key = id(ref)
            if key not in self._comonoids:
                self._comonoids[key] = self.parse(ref, where)
            return self._comonoids[key]
        raise InputError(f"{where}: category must be a name or an inline category")

    def polynomial(self, ref, where: str) -> Polynomial:
        if isinstance(ref, str):
            return self.get(ref, "polynomial")
        return self.parse(ref, where)

    # parsing
    def parse(self, doc: dict, where: str = "$"):
        kind = _need(doc, "kind", where, str)
        parser = getattr(self, f"_parse_{kind}", None)
        if parser is None:
            raise InputError(f"{where}.kind: unknown kind {kind!r}")
        return parser(doc, where)

    def _parse_polynomial(self, doc: dict, where: str) -> Poly:
        entries = _need(doc, "positions", where, list)
        table = {}
        for n, e in enumerate(entries):
            w = f"{where}.positions[{n}]"
            name = _need(e, "name", w, str)
            dirs = _need(e, "directions", w, list)
            _unique(dirs, f"{w}.directions")
            if name in table:
                raise InputError(f"{w}: duplicate position {name!r}")
            table[name] = tuple(dirs)
        return Poly(table)

    def _parse_category(self, doc: dict, where: str) -> Comonoid:
        objects = _need(doc, "objects", where, list)
        _unique(objects, f"{where}.objects")
        mors = _need(doc, "morphisms", where, list)
        triples = []
        for n, m in enumerate(mors):
            if not (isinstance(m, list) and len(m) == 3 and all(isinstance(v, str) for v in m)):
                raise InputError(f"{where}.morphisms[{n}]: expected [name, dom, cod]")
            if m[1] not in objects or m[2] not in objects:
                raise InputError(f"{where}.morphisms[{n}]: unknown object in {m!r}")
            triples.append(tuple(m))
        _unique([t[0] for t in triples], f"{where}.morphisms")
        dom = {f: a for f, a, _ in triples}
        cod = {f: b for f, _, b in triples}
        ident = _need(doc, "identities", where, dict)
        for o in objects:
            f = ident.get(o)
            if f not in dom or dom[f] != o or cod[f] != o:
                raise InputError(f"{where}.identities: {o!r} needs an endomorphism, got {f!r}")
        comp = {}
        for n, entry in enumerate(_need(doc, "composition", where, list)):
            w = f"{where}.composition[{n}]"
            if not (isinstance(entry, list) and len(entry) == 3):
                raise InputError(f"{w}: expected [f, g, f then g]")
            f, g, h = entry
            for x in (f, g, h):
                if x not in dom:
                    raise InputError(f"{w}: unknown morphism {x!r}")
            if cod[f] != dom[g]:
                raise InputError(f"{w}: {f!r} ends at {cod[f]!r} but {g!r} starts at {dom[g]!r}")
            if dom[h] != dom[f] or cod[h] != cod[g]:
                raise InputError(f"{w}: {h!r} does not run from {dom[f]!r} to {cod[g]!r}")
            if (f, g) in comp:
                raise InputError(f"{w}: composite of {f!r} and {g!r} given twice")
            comp[(f, g)] = h
        partial = bool(doc.get("partial", False))
        if not partial:
            for f, _, b in triples:
                for g, b2, _ in triples:
                    if b2 == b and (f, g) not in comp:
                        raise InputError(f"{where}.composition: missing composite of {f!r} and {g!r}")
        k = category_from_homs(objects, triples, ident, comp, doc.get("name", ""))
        k.partial = partial
        rep = check_category(k)
        if not rep.ok:
            raise LawError(f"{where}: {rep.violations[0]}")
        return from_category(k, doc.get("name", ""))

    def _sets_and_actions(self, c: Comonoid, doc: dict, where: str, name: str) -> Copresheaf:
        sets = _need(doc, "sets", where, dict)
        actions = _need(doc, "actions", where, dict)
        at = {}
        for obj in c.objects:
            elems = sets.get(obj, [])
            _unique(elems, f"{where}.sets.{obj}")
            at[obj] = tuple(elems)
        for key in sets:
            if key not in at:
                raise InputError(f"{where}.sets: unknown object {key!r}")
        action = {}
        for obj in c.objects:
            action[obj] = {}
            for f in c.out(obj):
                table = actions.get(f)
                if f == c.identity(obj) and table is None:
                    table = {e: e for e in at[obj]}
                if not isinstance(table, dict):
                    raise InputError(f"{where}.actions: no table for {f!r}")
                target = set(at[c.cod(obj, f)])
                for e in at[obj]:
                    if table.get(e) not in target:
                        raise InputError(f"{where}.actions.{f}: {e!r} has no image in the target set")
                action[obj][f] = {e: table[e] for e in at[obj]}
        return Copresheaf(c, at, action, name)

    def _parse_copresheaf(self, doc: dict, where: str) -> Copresheaf:
        c = self.category(_need(doc, "category", where), f"{where}.category")
        x = self._sets_and_actions(c, doc, where, doc.get("name", ""))
        rep = check_copresheaf(x)
        if not rep.ok:
            raise LawError(f"{where}: {rep.violations[0]}")
        return x

    def _parse_bicomodule(self, doc: dict, where: str) -> Bicomodule:
        left = self.category(_need(doc, "left", where), f"{where}.left")
        right = self.category(_need(doc, "right", where), f"{where}.right")
        table, base, dtype = {}, {}, {}
        for n, e in enumerate(_need(doc, "positions", where, list)):
            w = f"{where}.positions[{n}]"
            name = _need(e, "name", w, str)
            if name in table:
                raise InputError(f"{w}: duplicate position {name!r}")
            base[name] = _need(e, "base", w, str)
            if base[name] not in left.objects:
                raise InputError(f"{w}: unknown base object {base[name]!r}")
            dirs = _need(e, "directions", w, list)
            names = [_need(d, "name", f"{w}.directions", str) for d in dirs]
            _unique(names, f"{w}.directions")
            for d in dirs:
                t = _need(d, "type", f"{w}.directions", str)
                if t not in right.objects:
                    raise InputError(f"{w}: unknown direction type {t!r}")
                dtype[(name, d["name"])] = t
            table[name] = tuple(names)
        carrier = Poly(table)
        lact = _need(doc, "left_action", where, dict)
        ltrans = _need(doc, "left_transport", where, dict)
        ract = _need(doc, "right_action", where, dict)

        def lookup(tab, keys, w):
            value = tab
            for key in keys:
                if not isinstance(value, dict) or key not in value:
                    raise InputError(f"{w}: missing entry {'.'.join(keys)}")
                value = value[key]
            return value

        acts, trans, racts = {}, {}, {}
        for i in table:
            for k in left.out(base[i]):
                j = lookup(lact, (i, k), f"{where}.left_action")
                if j not in table:
                    raise InputError(f"{where}.left_action.{i}.{k}: unknown position {j!r}")
                acts[(i, k)] = j
                t = lookup(ltrans, (i, k), f"{where}.left_transport")
                for a2 in table[j]:
                    if t.get(a2) not in table[i]:
                        raise InputError(f"{where}.left_transport.{i}.{k}: {a2!r} has no image")
                trans[(i, k)] = {a2: t[a2] for a2 in table[j]}
            for a in table[i]:
                for g in right.out(dtype[(i, a)]):
                    v = lookup(ract, (i, a, g), f"{where}.right_action")
                    if v not in table[i]:
                        raise InputError(f"{where}.right_action.{i}.{a}.{g}: unknown direction {v!r}")
                    racts[(i, a, g)] = v
        b = from_actions(left, right, carrier, base.__getitem__, lambda i, k: acts[(i, k)],
                         lambda i, k: trans[(i, k)], lambda i, a: dtype[(i, a)],
                         lambda i, a, g: racts[(i, a, g)], doc.get("name", ""))
        rep = check_bicomodule(b)
        if not rep.ok:
            raise LawError(f"{where}: {rep.violations[0]}")
        return b

    def _parse_machine(self, doc: dict, where: str) -> Coalgebra:
        p = self.polynomial(_need(doc, "output", where), f"{where}.output")
        q = self.polynomial(_need(doc, "input", where), f"{where}.input")
        states = _need(doc, "states", where, list)
        _unique(states, f"{where}.states")
        steps = _need(doc, "step", where, dict)
        step = {}
        for s in states:
            rows = _need(steps, s, f"{where}.step", dict)
            on_pos, on_dirs, nxt = {}, {}, {}
            for j in q.positions():
                w = f"{where}.step.{s}.{j}"
                row = _need(rows, j, f"{where}.step.{s}", dict)
                i = _need(row, "position", w, str)
                if not p.has_position(i):
                    raise InputError(f"{w}: unknown output position {i!r}")
                on_pos[j] = i
                back = _need(row, "back", w, dict)
                nexts = _need(row, "next", w, dict)
                on_dirs[j] = {}
                for b in p.directions(i):
                    if back.get(b) not in q.directions(j):
                        raise InputError(f"{w}.back: {b!r} has no input direction")
                    if nexts.get(b) not in states:
                        raise InputError(f"{w}.next: {b!r} has no next state")
                    on_dirs[j][b] = back[b]
                    nxt[(j, b)] = nexts[b]
            step[s] = (on_pos, on_dirs, nxt)
        m = Coalgebra(p, q, tuple(states), step, doc.get("name", ""))
        rep = check_coalgebra(m)
        if not rep.ok:
            raise LawError(f"{where}: {rep.violations[0]}")
        return m

    def _parse_copresheaf_polynomial(self, doc: dict, where: str) -> CopresheafPolynomial:
        c = self.category(_need(doc, "category", where), f"{where}.category")
        total = self._sets_and_actions(c, _need(doc, "total", where, dict), f"{where}.total", "P")
        parts = self._sets_and_actions(c, _need(doc, "parts", where, dict), f"{where}.parts", "P*")
        proj_doc = _need(doc, "proj", where, dict)
        proj = {obj: dict(proj_doc.get(obj, {})) for obj in c.objects}
        p = CopresheafPolynomial(c, total, parts, proj, doc.get("name", ""))
        rep = check_copresheaf_polynomial(p)
        if not rep.ok:
            raise LawError(f"{where}: {rep.violations[0]}")
        return p

    def _parse_bundle(self, doc: dict, where: str) -> list:
        out = []
        seen = set()
        for n, item in enumerate(_need(doc, "items", where, list)):
            w = f"{where}.items[{n}]"
            obj = self.parse(item, w)
            name = _need(item, "name", w, str)
            if name in seen:
                raise InputError(f"{w}.name: duplicate name {name!r} in the bundle")
            seen.add(name)
            kind = item["kind"]
            self.add(name, kind, obj, w, self._same_category(name, kind, obj))
            out.append((name, kind, obj))
        return out

    # files
    def load_text(self, text: str, source: str = "<input>"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"{source}:{e.lineno}:{e.colno}: {e.msg}") from None
        return doc, self.parse(doc, source)

    def load(self, path: str | Path):
        path = Path(path)
        key = str(path.resolve())
        if key in self._files:
            return self._files[key]
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"{path}: {e.strerror}") from None
        doc, obj = self.load_text(text, str(path))
        if doc["kind"] != "bundle" and doc.get("name"):
            self.add(doc["name"], doc["kind"], obj, str(path), self._same_category(doc["name"], doc["kind"], obj))
        self._files[key] = (doc, obj)
        return doc, obj

    def resolve(self, ref: str, kind: str):
        """A name in the workspace, or a file holding one object of that kind."""
        if ref in self.items:
            return self.get(ref, kind)
        path = Path(ref)
        if path.exists():
            doc, obj = self.load(path)
            if doc["kind"] == kind:
                return obj
            if kind == "bicomodule" and doc["kind"] == "category":
                return identity_bicomodule(obj)
            raise InputError(f"{ref}: expected a {kind}, found a {doc['kind']}")
        raise InputError(f"unknown name or file {ref!r}")


def corpus_document() -> dict:
    return {"kind": "bundle", "name": "corpus",
            "items": [dump_category(k, name) for name, k in categories().items()]}


def shipped_corpus_text() -> str:
    return resources.files("catsharp").joinpath("data/corpus.json").read_text(encoding="utf-8")


# -- summaries -------------------------------------------------------------------------

def summarize(doc: dict) -> str:
    kind = doc["kind"]
    name = doc.get("name") or "(unnamed)"
    if kind == "polynomial":
        n = sum(len(e["directions"]) for e in doc["positions"])
        return f"polynomial {name}: {len(doc['positions'])} positions, {n} directions"
    if kind == "category":
        return f"category {name}: {len(doc['objects'])} objects, {len(doc['morphisms'])} morphisms"
    if kind == "copresheaf":
        sizes = ", ".join(f"{o}: {len(v)}" for o, v in doc["sets"].items())
        return f"copresheaf {name} on {doc['category']['name']}: {sizes}"
    if kind == "bicomodule":
        n = sum(len(e["directions"]) for e in doc["positions"])
        return (f"bicomodule {name} ({doc['left']['name']}, {doc['right']['name']}): "
                f"{len(doc['positions'])} positions, {n} directions")
    if kind == "machine":
        return f"machine {name}: {len(doc['states'])} states"
    if kind == "copresheaf_polynomial":
        return f"copresheaf polynomial {name} on {doc['category']['name']}"
    return f"{kind} {name}"


# -- commands ---------------------------------------------------------------------------

class Outcome:
    def __init__(self):
        self.doc: dict | None = None
        self.lines: list[str] = []
        self.reports: list[Report] = []

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)

    def report(self, rep: Report) -> None:
        self.reports.append(rep)
        self.lines.append(str(rep))


def cmd_check(args, ws: Workspace, out: Outcome) -> None:
    from .samples import composable_pairs
    files = args.files or []
    if not files:
        text = shipped_corpus_text()
        fresh = Workspace(args.budget)
        fresh.items.clear()
        _, loaded = fresh.load_text(text, "corpus.json")
        for name, kind, _ in loaded:
            rep = Report(f"{kind} {name}")
            rep.checked += 1
            out.report(rep)
        rep = Report("shipped corpus is canonical")
        rep.checked += 1
        if text != dumps(corpus_document()):
            rep.fail("corpus.json differs from the serialized corpus")
        out.report(rep)
    for f in files:
        doc, obj = ws.load(f)
        items = obj if doc["kind"] == "bundle" else [(doc.get("name", ""), doc["kind"], obj)]
        for name, kind, _ in items:
            rep = Report(f"{kind} {name} from {f}")
            rep.checked += 1
            out.report(rep)
        if doc["kind"] != "bundle":
            rep = Report(f"{f} round trip")
            rep.checked += 1
            again = dumps(_redump(doc, obj))
            reloaded_doc, reloaded = Workspace(args.budget).load_text(again)
            if dumps(_redump(reloaded_doc, reloaded)) != again:
                rep.fail("re-serialization is not stable")
            out.report(rep)
    if args.samples:
        rep = Report(f"composition oracle on {args.samples} seeded pairs (seed {args.seed})")
        for p, q in composable_pairs(args.seed, args.samples):
            rep.checked += 1
            if not isomorphic(compose_bicomodules(p, q, args.budget), compose_oracle(p, q, args.budget)):
                rep.fail(f"composite of {p.name} and {q.name} differs from the equalizer")
        out.report(rep)
    out.doc = {"kind": "check_report",
               "results": [{"name": r.name, "ok": r.ok, "checked": r.checked, "violations": r.violations}
                           for r in out.reports]}


def _redump(doc: dict, obj) -> dict:
    kind = doc["kind"]
    if kind == "bundle":
        return doc
    writer = {"polynomial": lambda o: dump_polynomial(o, doc.get("name", "")),
              "category": lambda o: dump_category(o, doc.get("name", "")),
              "copresheaf": dump_copresheaf, "bicomodule": dump_bicomodule, "machine": dump_machine,
              "copresheaf_polynomial": dump_copresheaf_polynomial}[kind]
    return writer(obj)


def cmd_compose(args, ws: Workspace, out: Outcome) -> None:
    p = ws.resolve(args.left, "bicomodule")
    q = ws.resolve(args.right, "bicomodule")
    r = compose_bicomodules(p, q, args.budget)
    out.report(check_bicomodule(r))
    if not args.no_verify:
        rep = Report("agrees with the equalizer construction")
        rep.checked += 1
        if not isomorphic(r, compose_oracle(p, q, args.budget)):
            rep.fail("composite differs from the equalizer")
        out.report(rep)
    out.doc = dump_bicomodule(r, args.name or f"{p.name}◁{q.name}")


def cmd_migrate(args, ws: Workspace, out: Outcome) -> None:
    p = ws.resolve(args.bicomodule, "bicomodule")
    x = ws.resolve(args.copresheaf, "copresheaf")
    if not p.right.same_as(x.base):
        raise InputError("the copresheaf lives on a different category than the bicomodule's right base")
    p = Bicomodule(p.left, x.base, p.carrier, p.lcoaction, p.rcoaction, p.name)
    y = evaluate_prafunctor(p, x, args.budget)
    out.report(check_copresheaf(y))
    out.doc = dump_copresheaf(y, args.name or y.name)


def _theta(monad: str, n: int, check: bool = True):
    from .theory import lawvere_list, path_monad, theta
    if monad == "path":
        return theta(path_monad(n), check=check)
    if monad == "list":
        return lawvere_list(n)[1]
    raise InputError(f"unknown monad {monad!r}")


def _object_order(th) -> list:
    return list(th.category.objects)


def cmd_theta(args, ws: Workspace, out: Outcome) -> None:
    from .theory import theta_to_simplex
    n = args.max if args.max is not None else args.max_depth
    th = _theta(args.monad, n)
    out.report(th.report)
    k = th.category
    objs = _object_order(th)
    names = {o: label_text(o) for o in objs}
    width = max(len(t) for t in names.values())
    header = " " * (width + 2) + " ".join(f"{names[o]:>{width}}" for o in objs)
    out.lines.append(f"hom counts in {k.name} (row = domain):")
    out.lines.append(header)
    for a in objs:
        out.lines.append(f"{names[a]:>{width}}  " + " ".join(f"{len(k.hom(a, b)):>{width}}" for b in objs))
    if args.monad == "path":
        rep = Report("isomorphic to the simplex category")
        rep.absorb(check_isomorphism(theta_to_simplex(th, n)))
        out.report(rep)
    out.doc = dump_category(k, k.name)


def cmd_nerve(args, ws: Workspace, out: Outcome) -> None:
    from .theory import compare_nerve_with_chains, nerve, path_algebra
    if args.monad != "path":
        raise InputError("nerves are available for the path monad")
    n = args.dim if args.dim is not None else args.max_depth
    k = to_category(ws.get(args.algebra, "category"))
    th = _theta("path", n, check=False)
    nv = nerve(th, path_algebra(th.monad, k))
    out.report(compare_nerve_with_chains(nv, k, n))
    x = nv.copresheaf
    sizes = ", ".join(f"{label_text(o)}: {len(x.at[o])}" for o in x.base.objects)
    out.lines.append(f"cells per object of the theory category: {sizes}")
    out.doc = dump_copresheaf(x, args.name or f"N({args.algebra})")


def cmd_opposite(args, ws: Workspace, out: Outcome) -> None:
    c = ws.get(args.category, "category")
    _, rep = opposite_via_spans(c, args.budget)
    out.report(rep)
    op = opposite_direct(c)
    out.doc = dump_category(op, f"{args.category}^op")


def _constant_tree(q: Polynomial, j: Label, depth: int) -> Label:
    if depth == 0:
        return STAR
    return (STAR, (j, tuple(_constant_tree(q, j, depth - 1) for _ in q.directions(j))))


def cmd_simulate(args, ws: Workspace, out: Outcome) -> None:
    m = ws.resolve(args.machine, "machine")
    depth = args.depth if args.depth is not None else args.max_depth
    j = args.input if args.input is not None else m.q.positions()[0]
    if not m.q.has_position(j):
        raise InputError(f"unknown input position {j!r}")
    state = args.state if args.state is not None else m.states[0]
    tree = run_behavior_tree(m, state, depth, _constant_tree(m.q, j, depth), args.budget)
    if not args.no_verify:
        rep = Report("tree agrees with the lifted handler")
        tp, _, lifted = lift_to_cofree(coalgebra_to_handler(m), depth)
        rep.checked += 1
        if lifted[depth].pos((state, (_constant_tree(m.q, j, depth),))) != tree_to_element(tp, depth, tree):
            rep.fail("the behavior tree differs from the lifted handler's output")
        out.report(rep)
    out.lines.append(render_tree(tree))
    out.doc = {"kind": "behavior_tree", "machine": m.name, "depth": depth, "input": label_text(j),
               "tree": dump_tree(tree)}


def cmd_embed(args, ws: Workspace, out: Outcome) -> None:
    p = ws.resolve(args.polynomial, "copresheaf_polynomial")
    b = embed(p)
    out.report(check_bicomodule(b))
    out.doc = dump_bicomodule(b, args.name or f"embed({p.name})")


COMMANDS = {"check": cmd_check, "compose": cmd_compose, "migrate": cmd_migrate, "nerve": cmd_nerve,
            "theta": cmd_theta, "opposite": cmd_opposite, "simulate": cmd_simulate, "embed": cmd_embed}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-depth", type=int, default=4, help="default truncation for theta, nerve, simulate")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration budget")
    common.add_argument("--seed", type=int, default=0, help="seed for random micro-instances")
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--format", choices=["json", "summary"], default="json")
    common.add_argument("--load", action="append", default=[], help="load definitions from a file first")
    common.add_argument("--name", help="name of the result")

    parser = argparse.ArgumentParser(prog="catsharp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="load files and run every checker")
    p.add_argument("files", nargs="*")
    p.add_argument("--samples", type=int, default=0, help="also check composition on seeded pairs")
    p = sub.add_parser("compose", parents=[common], help="compose two bicomodules")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--no-verify", action="store_true")
    p = sub.add_parser("migrate", parents=[common], help="apply a bicomodule's prafunctor to a copresheaf")
    p.add_argument("bicomodule")
    p.add_argument("copresheaf")
    p = sub.add_parser("nerve", parents=[common], help="nerve of a category as a path-monad algebra")
    p.add_argument("--monad", default="path")
    p.add_argument("--algebra", required=True)
    p.add_argument("--dim", type=int)
    p = sub.add_parser("theta", parents=[common], help="theory category of a monad")
    p.add_argument("--monad", choices=["path", "list"], default="path")
    p.add_argument("--max", type=int)
    p = sub.add_parser("opposite", parents=[common], help="opposite category via spans")
    p.add_argument("category")
    p = sub.add_parser("simulate", parents=[common], help="unroll a machine into its behavior tree")
    p.add_argument("machine")
    p.add_argument("--state")
    p.add_argument("--depth", type=int)
    p.add_argument("--input", help="input position fed at every step (default: the first)")
    p.add_argument("--no-verify", action="store_true")
    p = sub.add_parser("embed", parents=[common], help="embed a copresheaf polynomial as a bicomodule")
    p.add_argument("polynomial")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    ws = Workspace(args.budget)
    out = Outcome()
    try:
        for f in args.load:
            ws.load(f)
        COMMANDS[args.command](args, ws, out)
    except (InputError, LawError, ResourceError, TruncationError) as e:
        print(f"catsharp {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    summary = ([summarize(out.doc)] if out.doc and out.doc.get("kind") in
               {"polynomial", "category", "copresheaf", "bicomodule", "machine"} else []) + out.lines
    text = "\n".join(summary) + "\n"
    if args.out:
        Path(args.out).write_text(dumps(out.doc), encoding="utf-8")
        sys.stdout.write(text)
    elif args.format == "json":
        sys.stdout.write(dumps(out.doc))
        sys.stderr.write(text)
    else:
        sys.stdout.write(text)
    return 0 if out.ok else 1


if __name__ == "__main__":
    sys.exit(main())
