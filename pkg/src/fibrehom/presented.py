"""Finitely presented categories with an optional track congruence.

A ``PresentedCategory`` carries objects, typed generators, relations and
tracks.  Tracks are pairs of words identified by homotopies rather than
equalities; for every word-problem purpose in this package the congruence
is generated by relations and tracks together (only the discrete quotient
is ever used downstream), the two lists differ in provenance only.

Equality of words is decided either through explicit hom tables (when the
category is finite and tables are present or have been built) or through a
bounded shortlex Knuth-Bendix completion of the combined relation set.
"""

from __future__ import annotations

from . import rewriting
from .errors import (CapExceeded, EndpointMismatch, NoNormalForm,
                     UnknownGenerator)
from .words import FormalSum, MorphismWord, compose as word_compose


class ValidationReport:
    def __init__(self, subject):
        self.subject = subject
        self.issues = []
        self.info = {}

    @property
    def ok(self):
        return not self.issues

    def fail(self, message):
        self.issues.append(message)

    def __str__(self):
        head = f"{self.subject}: {'ok' if self.ok else 'INVALID'}"
        lines = [head] + [f"  - {msg}" for msg in self.issues]
        for key in sorted(self.info):
            lines.append(f"  {key}: {self.info[key]}")
        return "\n".join(lines)


class HomTables:
    """Explicit finite hom-sets with a full composition table.

    ``comp[(g, f)]`` is g after f.  Every element has a representative
    word; identities have the empty word.
    """

    def __init__(self):
        self.elems = {}          # (src, dst) -> sorted list of element names
        self.endpoints = {}      # elem -> (src, dst)
        self.identity_elem = {}  # obj -> elem
        self.comp = {}           # (outer, inner) -> elem
        self.gen_elem = {}       # generator name -> elem
        self.rep_word = {}       # elem -> MorphismWord

    def add_elem(self, name, src, dst):
        self.elems.setdefault((src, dst), []).append(name)
        self.endpoints[name] = (src, dst)

    def hom(self, a, b):
        return self.elems.get((a, b), [])

    def eval_word(self, word):
        (src, _dst) = (word.src, word.dst)
        acc = self.identity_elem[src]
        for gen in word.factors:
            g = self.gen_elem.get(gen)
            if g is None:
                raise UnknownGenerator(f"generator {gen!r} has no table element")
            acc = self.comp[(g, acc)]
        return acc

    def size(self):
        return len(self.endpoints)


class PresentedCategory:
    def __init__(self, objects, generators, relations=(), tracks=(), name="category"):
        """``generators`` maps name -> (source object, target object).

        ``relations`` and ``tracks`` are pairs of application-ordered
        factor tuples with equal endpoints; they may also be given as
        MorphismWord pairs.
        """
        self.name = name
        self.objects = list(objects)
        self._object_set = set(self.objects)
        self.generators = dict(generators)
        self.relations = [self._pair(p) for p in relations]
        self.tracks = [self._pair(p) for p in tracks]
        self.hom_tables = None
        self._rewrite = None       # (RewriteSystem, ok) once attempted
        self.completion_caps = {"max_rules": 600, "max_len": 48, "max_passes": 60}

    # -- word construction -------------------------------------------------

    def _pair(self, pair):
        w1, w2 = pair
        # build the nonempty side first so an empty side can borrow endpoints
        if not isinstance(w1, MorphismWord) and len(tuple(w1)):
            w1 = self.word(w1)
        if not isinstance(w2, MorphismWord) and len(tuple(w2)):
            w2 = self.word(w2)
        if not isinstance(w1, MorphismWord):
            if not isinstance(w2, MorphismWord):
                raise EndpointMismatch("relation between two empty words needs words")
            w1 = self.identity(w2.src)
        if not isinstance(w2, MorphismWord):
            w2 = self.identity(w1.src)
        if (w1.src, w1.dst) != (w2.src, w2.dst):
            raise EndpointMismatch(
                f"relation endpoints differ: {w1.src}->{w1.dst} vs {w2.src}->{w2.dst}")
        return (w1, w2)

    def gen_word(self, name):
        try:
            src, dst = self.generators[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None
        return MorphismWord(src, dst, (name,))

    def identity(self, obj):
        if obj not in self._object_set:
            raise UnknownGenerator(f"unknown object {obj!r}")
        return MorphismWord.identity(obj)

    def word(self, factors, at=None):
        """Build a word from application-ordered generator names."""
        factors = tuple(factors)
        if not factors:
            if at is None:
                raise EndpointMismatch("empty word needs an explicit object")
            return self.identity(at)
        cur = None
        for name in factors:
            if name not in self.generators:
                raise UnknownGenerator(f"unknown generator {name!r}")
            src, dst = self.generators[name]
            if cur is not None and cur != src:
                raise EndpointMismatch(
                    f"factors do not compose at {name!r}: have {cur}, need {src}")
            cur = dst
        return MorphismWord(self.generators[factors[0]][0], cur, factors)

    def compose(self, f, g):
        """f after g, normalized when the word problem is already at hand.

        Never triggers a completion attempt; call has_word_problem() first
        if eager normalization is wanted.
        """
        out = word_compose(f, g)
        if self.word_problem_ready():
            return self.normalize(out)
        return out

    # -- word problem -------------------------------------------------------

    def _relation_tuples(self):
        return [(w1.factors, w2.factors) for (w1, w2) in self.relations + self.tracks]

    def letter_order(self):
        """Shortlex letter ranking: generator declaration order."""
        return rewriting.LetterOrder(list(self.generators))

    def ensure_completion(self):
        if self._rewrite is None:
            self._rewrite = rewriting.complete(
                self._relation_tuples(), order=self.letter_order(),
                **self.completion_caps)
        return self._rewrite[1]

    def has_word_problem(self):
        if self.hom_tables is not None:
            return True
        return self.ensure_completion()

    def word_problem_ready(self):
        """True when normal forms are available without further work."""
        if self.hom_tables is not None:
            return True
        return self._rewrite is not None and self._rewrite[1]

    def normalize(self, w):
        """Canonical representative of the congruence class of ``w``."""
        if w.src not in self._object_set or w.dst not in self._object_set:
            raise UnknownGenerator(f"word endpoints not in category: {w}")
        if self.hom_tables is not None:
            return self.hom_tables.rep_word[self.hom_tables.eval_word(w)]
        if not self.ensure_completion():
            raise NoNormalForm(
                f"completion failed for {self.name} and no hom tables exist")
        system, _ok = self._rewrite
        return MorphismWord(w.src, w.dst, system.reduce(w.factors))

    def equal(self, w1, w2):
        if (w1.src, w1.dst) != (w2.src, w2.dst):
            raise EndpointMismatch("comparing words with different endpoints")
        return self.normalize(w1) == self.normalize(w2)

    # -- enumeration ---------------------------------------------------------

    def _gens_by_source(self):
        table = {}
        for name, (src, dst) in self.generators.items():
            table.setdefault(src, []).append((name, dst))
        for lst in table.values():
            lst.sort()
        return table

    def enumerate_homs(self, a, b, cap=1000, max_len=64):
        """All congruence classes a -> b by normal form, if at most ``cap``.

        Raises CapExceeded when the class count passes ``cap`` or when
        irreducible words keep growing past ``max_len`` (the hom-set is
        then infinite or out of reach).
        """
        if self.hom_tables is not None:
            words = [self.hom_tables.rep_word[e] for e in self.hom_tables.hom(a, b)]
            if len(words) > cap:
                raise CapExceeded(f"hom({a},{b}) larger than cap {cap}",
                                  partial_count=cap)
            return sorted(words, key=lambda w: self.letter_order().key(w.factors))
        if not self.ensure_completion():
            raise NoNormalForm(f"completion failed for {self.name}")
        system, _ok = self._rewrite
        by_src = self._gens_by_source()
        found = []
        if a == b:
            found.append(self.identity(a))
        frontier = [(a, ())]
        length = 0
        while frontier:
            length += 1
            if length > max_len:
                raise CapExceeded(
                    f"irreducible words from {a} still grow at length {max_len}",
                    partial_count=len(found))
            nxt = []
            for end, factors in frontier:
                for name, dst in by_src.get(end, []):
                    w = factors + (name,)
                    if system.is_reduced(w):
                        nxt.append((dst, w))
                        if dst == b:
                            found.append(MorphismWord(a, b, w))
                            if len(found) > cap:
                                raise CapExceeded(
                                    f"hom({a},{b}) larger than cap {cap}",
                                    partial_count=len(found))
            frontier = nxt
        return sorted(found, key=lambda w: self.letter_order().key(w.factors))

    def build_hom_tables(self, cap=1000, max_len=64):
        """Enumerate all hom-sets and attach full composition tables."""
        if self.hom_tables is not None:
            return self.hom_tables
        words = {}
        for a in self.objects:
            for b in self.objects:
                words[(a, b)] = self.enumerate_homs(a, b, cap=cap, max_len=max_len)
        tables = HomTables()
        names = {}
        for (a, b), ws in sorted(words.items()):
            for w in ws:
                name = f"[{'.'.join(w.factors) if w.factors else 'id'}]{a}->{b}"
                tables.add_elem(name, a, b)
                tables.rep_word[name] = w
                names[w.key()] = name
                if not w.factors:
                    tables.identity_elem[a] = name
        for gname in self.generators:
            tables.gen_elem[gname] = names[self.normalize(self.gen_word(gname)).key()]
        for (a, b), inner in sorted(words.items()):
            for (b2, c), outer in sorted(words.items()):
                if b2 != b:
                    continue
                for wi in inner:
                    for wo in outer:
                        comp = self.normalize(word_compose(wo, wi))
                        tables.comp[(names[wo.key()], names[wi.key()])] = names[comp.key()]
        self.hom_tables = tables
        return tables

    # -- validation -----------------------------------------------------------

    def validate(self):
        report = ValidationReport(f"category {self.name}")
        seen = set()
        for obj in self.objects:
            if obj in seen:
                report.fail(f"duplicate object {obj!r}")
            seen.add(obj)
        for name, (src, dst) in self.generators.items():
            if src not in self._object_set:
                report.fail(f"generator {name!r} has undeclared source {src!r}")
            if dst not in self._object_set:
                report.fail(f"generator {name!r} has undeclared target {dst!r}")
        for kind, pairs in (("relation", self.relations), ("track", self.tracks)):
            for w1, w2 in pairs:
                if (w1.src, w1.dst) != (w2.src, w2.dst):
                    report.fail(f"{kind} {w1} = {w2} has mismatched endpoints")
        if self.hom_tables is not None:
            self._validate_tables(report)
        report.info["objects"] = len(self.objects)
        report.info["generators"] = len(self.generators)
        return report

    def _validate_tables(self, report):
        t = self.hom_tables
        for obj in self.objects:
            if obj not in t.identity_elem:
                report.fail(f"hom tables missing identity of {obj!r}")
        # identity laws and associativity, checked exhaustively
        for (g, f), h in t.comp.items():
            (fs, fd) = t.endpoints[f]
            (gs, gd) = t.endpoints[g]
            if fd != gs:
                report.fail(f"composition table pairs non-composable {g} after {f}")
            elif t.endpoints[h] != (fs, gd):
                report.fail(f"composition {g}*{f} lands at wrong endpoints")
        for f, (src, dst) in t.endpoints.items():
            idl = t.identity_elem.get(dst)
            idr = t.identity_elem.get(src)
            if idl is not None and t.comp.get((idl, f)) != f:
                report.fail(f"left identity law fails at {f}")
            if idr is not None and t.comp.get((f, idr)) != f:
                report.fail(f"right identity law fails at {f}")
        elems = sorted(t.endpoints)
        for f in elems:
            for g in elems:
                if t.endpoints[f][1] != t.endpoints[g][0]:
                    continue
                for h in elems:
                    if t.endpoints[g][1] != t.endpoints[h][0]:
                        continue
                    lhs = t.comp[(h, t.comp[(g, f)])]
                    rhs = t.comp[(t.comp[(h, g)], f)]
                    if lhs != rhs:
                        report.fail(f"associativity fails at ({h},{g},{f})")
        for gname in self.generators:
            if gname not in t.gen_elem:
                report.fail(f"generator {gname!r} missing from tables")
        # declared relations and tracks must hold in the tables
        for kind, pairs in (("relation", self.relations), ("track", self.tracks)):
            for w1, w2 in pairs:
                try:
                    if t.eval_word(w1) != t.eval_word(w2):
                        report.fail(f"{kind} {w1} = {w2} fails in hom tables")
                except (KeyError, UnknownGenerator):
                    report.fail(f"{kind} {w1} = {w2} cannot be evaluated in tables")
        # reachability: every element is the value of some generator word
        reached = set(t.identity_elem.values())
        frontier = list(reached)
        while frontier:
            nxt = []
            for f in frontier:
                for gname, g in t.gen_elem.items():
                    if t.endpoints[f][1] == t.endpoints[g][0]:
                        h = t.comp[(g, f)]
                        if h not in reached:
                            reached.add(h)
                            nxt.append(h)
            frontier = nxt
        for f in elems:
            if f not in reached:
                report.fail(f"table element {f} unreachable from generators")

    # -- misc ------------------------------------------------------------------

    def formal_sum(self, terms, src, dst):
        return FormalSum(src, dst, terms)

    def __repr__(self):
        return (f"PresentedCategory({self.name!r}, {len(self.objects)} objects, "
                f"{len(self.generators)} generators)")


def trivial_category():
    """One object, identity only: the structure category of plain spaces."""
    return PresentedCategory(["pt"], {}, name="trivial")


# ---------------------------------------------------------------------------
# orbit categories of finite groups


class FiniteGroup:
    """A finite group given by its multiplication table."""

    def __init__(self, elements, mult, name="G"):
        self.name = name
        self.elements = list(elements)
        self.mult = dict(mult)
        idents = [e for e in self.elements
                  if all(self.mult[(e, x)] == x == self.mult[(x, e)] for x in self.elements)]
        if len(idents) != 1:
            raise ValueError("multiplication table has no unique identity")
        self.identity = idents[0]
        self.inverse = {}
        for x in self.elements:
            for y in self.elements:
                if self.mult[(x, y)] == self.identity:
                    self.inverse[x] = y
        if len(self.inverse) != len(self.elements):
            raise ValueError("multiplication table has non-invertible elements")

    @classmethod
    def cyclic(cls, n):
        els = [f"g{i}" if i else "e" for i in range(n)]
        mult = {}
        for i in range(n):
            for j in range(n):
                k = (i + j) % n
                mult[(els[i], els[j])] = els[k]
        return cls(els, mult, name=f"Z{n}")

    def is_subgroup(self, subset):
        subset = set(subset)
        if self.identity not in subset:
            return False
        return all(self.mult[(a, b)] in subset for a in subset for b in subset)

    def left_cosets(self, subgroup):
        seen = set()
        cosets = []
        for g in self.elements:
            coset = frozenset(self.mult[(g, k)] for k in subgroup)
            if coset not in seen:
                seen.add(coset)
                cosets.append(coset)
        return cosets


def _orbit_name(subgroup):
    return "G/" + "+".join(sorted(subgroup))


def _sanitize(obj):
    return obj.replace("G/", "").replace("+", "")


def orbit_category(group, subgroups, max_gens=None):
    """The category of orbits G/H for the listed subgroups.

    Objects are orbits, morphisms G/H -> G/K are cosets gK with
    g^-1 H g contained in K, composing by right translation.  Every
    non-identity morphism becomes a generator; the full composition table
    is attached, so the word problem is immediate.
    """
    subs = []
    for s in subgroups:
        s = frozenset(s)
        if not group.is_subgroup(s):
            raise ValueError(f"{sorted(s)} is not a subgroup")
        if s not in subs:
            subs.append(s)
    subs.sort(key=lambda s: (len(s), sorted(s)))
    objects = [_orbit_name(s) for s in subs]

    def coset_rep(coset):
        return sorted(coset)[0]

    morphisms = {}  # (src, dst) -> list of coset frozensets
    for h in subs:
        for k in subs:
            pair = (_orbit_name(h), _orbit_name(k))
            valid = []
            for coset in group.left_cosets(k):
                g = coset_rep(coset)
                if all(group.mult[(x, g)] in coset for x in h):
                    valid.append(coset)
            valid.sort(key=coset_rep)
            morphisms[pair] = valid

    tables = HomTables()
    elem_of = {}
    generators = {}
    for (src, dst), cosets in sorted(morphisms.items()):
        for coset in cosets:
            rep = coset_rep(coset)
            is_id = (src == dst and group.identity in coset)
            ename = f"{src}->{dst}:{rep}"
            tables.add_elem(ename, src, dst)
            elem_of[(src, dst, coset)] = ename
            if is_id:
                tables.identity_elem[src] = ename
                tables.rep_word[ename] = MorphismWord.identity(src)
            else:
                gname = f"m_{_sanitize(src)}_{_sanitize(dst)}_{rep}"
                generators[gname] = (src, dst)
                tables.gen_elem[gname] = ename
                tables.rep_word[ename] = MorphismWord(src, dst, (gname,))
    if max_gens is not None and len(generators) > max_gens:
        raise CapExceeded(f"orbit category has {len(generators)} generators",
                          partial_count=len(generators))

    def compose_cosets(src, mid, dst, inner, outer):
        a = coset_rep(inner)
        b = coset_rep(outer)
        ab = group.mult[(a, b)]
        kdst = next(s for s in subs if _orbit_name(s) == dst)
        return frozenset(group.mult[(ab, k)] for k in kdst)

    relations = []
    for (src, mid), inner_list in sorted(morphisms.items()):
        for (mid2, dst), outer_list in sorted(morphisms.items()):
            if mid2 != mid:
                continue
            for inner in inner_list:
                for outer in outer_list:
                    comp = compose_cosets(src, mid, dst, inner, outer)
                    ei = elem_of[(src, mid, inner)]
                    eo = elem_of[(mid, dst, outer)]
                    ec = elem_of[(src, dst, comp)]
                    tables.comp[(eo, ei)] = ec
                    wi = tables.rep_word[ei]
                    wo = tables.rep_word[eo]
                    if wi.factors and wo.factors:
                        relations.append(
                            (wi.factors + wo.factors, tables.rep_word[ec].factors))

    cat = PresentedCategory(objects, generators, name=f"orbits({group.name})")
    for lhs, rhs in relations:
        at = None
        if not rhs:
            w = cat.word(lhs)
            at = w.src
        cat.relations.append(cat._pair((cat.word(lhs), cat.word(rhs, at=at))))
    cat.hom_tables = tables
    return cat


def z2_orbit_category():
    """Orbit category of Z/2 with friendly generator names t and p.

    t is the nontrivial self-map of the free orbit (t*t = id), p the
    projection G/e -> G/G (p*t = p).
    """
    cat = PresentedCategory(
        ["G/e", "G/G"],
        {"t": ("G/e", "G/e"), "p": ("G/e", "G/G")},
        relations=[(("t", "t"), ()), (("t", "p"), ("p",))],
        name="orbits(Z2)",
    )
    cat.build_hom_tables(cap=16)
    return cat
