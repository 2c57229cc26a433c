"""Modules over a presented category: the coefficient systems.

A CatModule assigns to every object a finitely presented abelian group
(free rank plus integer relator vectors) and to every generator a matrix
between the free levels; left modules are covariant, right modules
contravariant.  Because values may carry torsion, equality of maps is
always taken modulo the target's relator lattice.

Free right modules on anchored cells, their hom and tensor pairings, and
the induced integer matrices of ZPi-matrices live here too; together they
turn the cellular chain complex into plain integer chain complexes.
"""

from __future__ import annotations

from . import intlinalg as la
from .errors import AnchorMissing, UnknownGenerator
from .words import compose as word_compose


class AbPres:
    """Presentation Z^rank / <relator vectors> of an abelian group."""

    __slots__ = ("rank", "rels")

    def __init__(self, rank, rels=()):
        self.rank = rank
        self.rels = [list(r) for r in rels]
        assert all(len(r) == rank for r in self.rels)

    @classmethod
    def free(cls, rank):
        return cls(rank, [])

    @classmethod
    def cyclic(cls, m):
        return cls(1, [[m]] if m else [])

    def rel_matrix(self):
        """Relators as columns (rank x len(rels))."""
        return la.from_columns(self.rels, nrows=self.rank)

    def canonical(self):
        if self.rank == 0:
            return la.AbGroupPresentation(0, ())
        s, _u, _v = la.smith_normal_form(self.rel_matrix())
        return la.AbGroupPresentation.from_diagonal(la.snf_diagonal(s), self.rank)

    def direct_sum(self, other):
        rank = self.rank + other.rank
        rels = [r + [0] * other.rank for r in self.rels]
        rels += [[0] * self.rank + r for r in other.rels]
        return AbPres(rank, rels)

    def contains_map_difference(self, a, b):
        """Do matrices a and b agree as maps into this presented group?"""
        diff = la.mat_sub(a, b)
        if la.is_zero_matrix(diff):
            return True
        if not self.rels:
            return False
        return la.solve_matrix(self.rel_matrix(), diff) is not None

    def element_order_context(self):
        return f"Z^{self.rank} mod {len(self.rels)} relators"

    def __repr__(self):
        return f"AbPres({self.rank}, {self.rels})"


def _presented_base(base):
    """Accept either a PresentedCategory or a PiCategory."""
    return getattr(base, "presented", base)


class CatModule:
    def __init__(self, base, variance, values, actions, name="module"):
        assert variance in ("left", "right")
        self.base = base
        self.variance = variance
        self.values = dict(values)     # object name -> AbPres
        self.actions = dict(actions)   # generator name -> matrix
        self.name = name
        self._act_cache = {}

    def value(self, obj):
        try:
            return self.values[obj]
        except KeyError:
            raise AnchorMissing(f"module {self.name} has no value at {obj!r}") from None

    def generator_action(self, gen):
        try:
            return self.actions[gen]
        except KeyError:
            raise UnknownGenerator(f"module {self.name} has no action for {gen!r}") from None

    def act(self, word):
        """Matrix of the word's action, variance-correct.

        Right modules: value(dst) -> value(src); left: value(src) -> value(dst).
        The identity word acts as the identity matrix.
        """
        cat = _presented_base(self.base)
        key_word = cat.normalize(word) if cat.word_problem_ready() else word
        key = key_word.key()
        hit = self._act_cache.get(key)
        if hit is not None:
            return hit
        factors = key_word.factors
        if not factors:
            out = la.identity(self.value(key_word.src).rank)
        elif self.variance == "right":
            out = self._fold_right(factors)
        else:
            out = self._fold_left(factors, key_word)
        self._act_cache[key] = out
        return out

    def _fold_right(self, factors):
        # M(w) = M(g1) * M(g2) * ... * M(gk) for application order g1..gk
        out = None
        for gen in factors:
            m = self.generator_action(gen)
            out = m if out is None else la.mat_mul(out, m)
        return out

    def _fold_left(self, factors, word):
        # N(w) = N(gk) * ... * N(g1)
        if not factors:
            return la.identity(self.value(word.src).rank)
        out = None
        for gen in factors:
            m = self.generator_action(gen)
            out = m if out is None else la.mat_mul(m, out)
        return out

    def act_raw(self, word):
        """Action composed letter by letter, never normalizing the word.

        Relation checks must use this: normalizing first would compare a
        relation's two sides through their common normal form and mask an
        inconsistent assignment of generator actions.
        """
        factors = word.factors
        if not factors:
            return la.identity(self.value(word.src).rank)
        if self.variance == "right":
            return self._fold_right(factors)
        return self._fold_left(factors, word)

    def check_structure(self):
        """Shape checks plus relation compatibility, as a list of issues."""
        issues = []
        cat = _presented_base(self.base)
        for obj in cat.objects:
            if obj not in self.values:
                issues.append(f"missing value at object {obj}")
        for gen, (src, dst) in cat.generators.items():
            if gen not in self.actions:
                issues.append(f"missing action for generator {gen}")
                continue
            mat = self.actions[gen]
            va, vb = self.value(src), self.value(dst)
            if self.variance == "left":
                want = (vb.rank, va.rank)
            else:
                want = (va.rank, vb.rank)
            if la.shape(mat) != want:
                issues.append(f"action of {gen} has shape {la.shape(mat)}, want {want}")
                continue
            # relators must map into relators
            source_pres = va if self.variance == "left" else vb
            target_pres = vb if self.variance == "left" else va
            if source_pres.rels:
                img = la.mat_mul(mat, source_pres.rel_matrix())
                if not target_pres.contains_map_difference(img, la.zeros(*la.shape(img))):
                    issues.append(f"action of {gen} does not respect relators")
        for w1, w2 in cat.relations + cat.tracks:
            try:
                a1, a2 = self.act_raw(w1), self.act_raw(w2)
            except (AnchorMissing, UnknownGenerator) as exc:
                issues.append(f"relation {w1} = {w2}: {exc}")
                continue
            target = self.value(w1.src if self.variance == "right" else w1.dst)
            if not target.contains_map_difference(a1, a2):
                issues.append(f"module breaks relation {w1} = {w2}")
        return issues


class FreeRightModule:
    """Formal direct sum of representables on anchored cells."""

    def __init__(self, base, anchors, name="free"):
        self.base = base
        self.anchors = list(anchors)   # (tag, object name)
        self.name = name
        cat = _presented_base(base)
        known = set(cat.objects)
        for _tag, obj in self.anchors:
            if obj not in known:
                raise AnchorMissing(f"anchor {obj!r} is not an object of the base")

    def __len__(self):
        return len(self.anchors)


def _sum_of_values(anchors, module):
    total = AbPres.free(0)
    offsets = []
    for _tag, obj in anchors:
        offsets.append(total.rank)
        total = total.direct_sum(module.value(obj))
    return total, offsets


def hom_from_free(free, module):
    """hom(free, M) for a right module M: the direct sum of anchor values.

    Returns (AbPres, offsets); a natural transformation is exactly a choice
    of element of M at each anchor, so projections are the offset slices.
    """
    assert module.variance == "right"
    return _sum_of_values(free.anchors, module)


def tensor_free(free, module):
    """free (x) N for a left module N, by the co-Yoneda collapse."""
    assert module.variance == "left"
    return _sum_of_values(free.anchors, module)


def induced_chain_map(d, module):
    """Integer matrix of a ZPi-matrix after tensoring with a left module.

    Row blocks follow d's rows, column blocks d's columns; the (i, j)
    block is the sum of coeff * act(word) over the entry's terms.
    """
    assert module.variance == "left"
    row_pres = [module.value(obj) for obj in d.row_objects]
    col_pres = [module.value(obj) for obj in d.col_objects]
    return _assemble_blocks(d, module, row_pres, col_pres, transpose=False)


def induced_cochain_map(d, module):
    """Integer matrix of hom(d, M) for a right module: blocks transpose."""
    assert module.variance == "right"
    row_pres = [module.value(obj) for obj in d.col_objects]
    col_pres = [module.value(obj) for obj in d.row_objects]
    return _assemble_blocks(d, module, row_pres, col_pres, transpose=True)


def _assemble_blocks(d, module, row_pres, col_pres, transpose):
    row_offsets = []
    total_rows = 0
    for pres in row_pres:
        row_offsets.append(total_rows)
        total_rows += pres.rank
    col_offsets = []
    total_cols = 0
    for pres in col_pres:
        col_offsets.append(total_cols)
        total_cols += pres.rank
    out = la.zeros(total_rows, total_cols)
    for (i, j), entry in d.entries.items():
        if entry.is_zero():
            continue
        block = None
        for word, coeff in entry.items():
            part = la.mat_scale(coeff, module.act(word))
            block = part if block is None else la.mat_add(block, part)
        if transpose:
            bi, bj = j, i
        else:
            bi, bj = i, j
        r0, c0 = row_offsets[bi], col_offsets[bj]
        for r, row in enumerate(block):
            for c, x in enumerate(row):
                out[r0 + r][c0 + c] = x
    return out


# ---------------------------------------------------------------------------
# built-in coefficient systems


def constant_module(base, variance="left", modulus=0, name=None):
    """The constant system: every object Z (or Z/m), every generator 1."""
    cat = _presented_base(base)
    pres = AbPres.cyclic(modulus)
    values = {obj: pres for obj in cat.objects}
    actions = {gen: [[1]] for gen in cat.generators}
    label = name or ("Z" if modulus == 0 else f"Z/{modulus}")
    return CatModule(base, variance, values, actions, name=label)


def sign_module(pi, signs, variance="left", name="sign"):
    """Rank-one system twisting chosen 1-cells by -1.

    ``signs`` maps 1-cell ids to +-1; whiskers act by +1, a track and its
    formal inverse both act by the cell's sign.
    """
    values = {obj: AbPres.free(1) for obj in pi.presented.objects}
    actions = {}
    for gen in pi.presented.generators:
        tag = pi.provenance.get(gen)
        if tag and tag[0] == "track":
            actions[gen] = [[signs.get(tag[1], 1)]]
        else:
            actions[gen] = [[1]]
    return CatModule(pi, variance, values, actions, name=name)


def pullback_module(pi, fmodule, name=None):
    """Pull a structure-category system back along Pi -> F.

    Objects go to their fibres, whiskers to their F-generators, and all
    tracks act as identities; this is how orbit-category (Bredon)
    coefficient systems enter the engine.
    """
    values = {}
    for objname, obj in pi.pi_objects.items():
        values[objname] = fmodule.value(obj.fibre)
    actions = {}
    for gen in pi.presented.generators:
        tag = pi.provenance.get(gen)
        if tag and tag[0] == "whisker":
            actions[gen] = fmodule.generator_action(tag[1])
        else:
            src, dst = pi.presented.generators[gen]
            rank = values[src].rank
            assert values[dst].rank == rank
            actions[gen] = la.identity(rank)
    return CatModule(pi, fmodule.variance, values, actions,
                     name=name or f"pullback({fmodule.name})")


def representable_module(fcat, base_object, variance="left", cap=512, name=None):
    """Z[hom(V0, -)] (left) or Z[hom(-, V0)] (right) over a finite category."""
    homs = {}
    for obj in fcat.objects:
        if variance == "left":
            homs[obj] = fcat.enumerate_homs(base_object, obj, cap=cap)
        else:
            homs[obj] = fcat.enumerate_homs(obj, base_object, cap=cap)
    values = {obj: AbPres.free(len(ws)) for obj, ws in homs.items()}
    index = {obj: {w.key(): i for i, w in enumerate(ws)} for obj, ws in homs.items()}
    actions = {}
    for gen, (src, dst) in fcat.generators.items():
        g = fcat.gen_word(gen)
        if variance == "left":
            rows, cols = len(homs[dst]), len(homs[src])
            mat = la.zeros(rows, cols)
            for j, u in enumerate(homs[src]):
                v = fcat.normalize(word_compose(g, u))
                mat[index[dst][v.key()]][j] = 1
        else:
            rows, cols = len(homs[src]), len(homs[dst])
            mat = la.zeros(rows, cols)
            for j, u in enumerate(homs[dst]):
                v = fcat.normalize(word_compose(u, g))
                mat[index[src][v.key()]][j] = 1
        actions[gen] = mat
    if name is None:
        name = (f"Z[hom({base_object},-)]" if variance == "left"
                else f"Z[hom(-,{base_object})]")
    return CatModule(fcat, variance, values, actions, name=name)
