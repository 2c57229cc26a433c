"""The cellular chain complex of a fibred complex.

Chain groups are free right modules on the cells of each dimension, so a
differential is a matrix of formal integer combinations of morphism words
(rows indexed by lower cells, columns by higher cells, an entry running
from the column's anchor to the row's anchor).

Degree-one boundary of a 1-cell e:   [track to the d1 end] - [d0 anchor],
the twisted cellular  d(e) = t*y - x.

Degree-two boundaries are never stored: they are linearized from the
boundary word.  Scanning the word in application order with transported
prefix u, a forward crossing of e (via psi) contributes
+ whisker(psi)*u * [e]  before u picks up the track, and a backward
crossing contributes the negative after u picks up the inverse track.
This is the free-derivative rule; d.d = 0 then telescopes exactly.

Dimensions three and up copy the stored rows after endpoint checks.
"""

from __future__ import annotations

from . import names
from . import intlinalg as la
from .errors import (EndpointMismatch, InconsistentBoundary, NoNormalForm,
                     NotAChainMap)
from .fundamental import PiCategory
from .presented import PresentedCategory, ValidationReport
from .words import FormalSum, MorphismWord


class ZPiMatrix:
    """Sparse matrix of formal word sums between anchored bases."""

    def __init__(self, row_basis, col_basis):
        # basis entries are (tag, anchor object name)
        self.row_basis = list(row_basis)
        self.col_basis = list(col_basis)
        self.entries = {}

    @property
    def row_objects(self):
        return [obj for _tag, obj in self.row_basis]

    @property
    def col_objects(self):
        return [obj for _tag, obj in self.col_basis]

    def shape(self):
        return (len(self.row_basis), len(self.col_basis))

    def entry(self, i, j):
        got = self.entries.get((i, j))
        if got is not None:
            return got
        return FormalSum.zero(self.col_basis[j][1], self.row_basis[i][1])

    def set(self, i, j, value):
        want = (self.col_basis[j][1], self.row_basis[i][1])
        if (value.src, value.dst) != want:
            raise EndpointMismatch(
                f"entry ({i},{j}) must run {want[0]} -> {want[1]}, "
                f"got {value.src} -> {value.dst}")
        if value.is_zero():
            self.entries.pop((i, j), None)
        else:
            self.entries[(i, j)] = value

    def add_to(self, i, j, value):
        self.set(i, j, self.entry(i, j) + value)

    def compose(self, other):
        """self * other; self's columns must match other's rows."""
        if self.col_objects != other.row_objects:
            raise EndpointMismatch("matrix composition anchors disagree")
        out = ZPiMatrix(self.row_basis, other.col_basis)
        by_row = {}
        for (j, k), entry in other.entries.items():
            by_row.setdefault(j, []).append((k, entry))
        for (i, j), left in self.entries.items():
            for k, right in by_row.get(j, []):
                out.add_to(i, k, left.compose(right))
        return out

    def add(self, other):
        assert self.row_objects == other.row_objects
        assert self.col_objects == other.col_objects
        out = ZPiMatrix(self.row_basis, other.col_basis)
        keys = set(self.entries) | set(other.entries)
        for (i, j) in keys:
            out.set(i, j, self.entry(i, j) + other.entry(i, j))
        return out

    def scale(self, c):
        out = ZPiMatrix(self.row_basis, self.col_basis)
        for (i, j), entry in self.entries.items():
            out.set(i, j, entry.scale(c))
        return out

    def map_words(self, word_fn, row_basis=None, col_basis=None):
        """Entry-wise push along a functor given on words."""
        out = ZPiMatrix(row_basis or self.row_basis, col_basis or self.col_basis)
        for (i, j), entry in self.entries.items():
            src = out.col_basis[j][1]
            dst = out.row_basis[i][1]
            out.set(i, j, entry.map_words(word_fn, src=src, dst=dst))
        return out

    def normalized(self, category):
        out = ZPiMatrix(self.row_basis, self.col_basis)
        for (i, j), entry in self.entries.items():
            out.set(i, j, entry.normalized(category))
        return out

    def identity_like(self):
        assert self.row_objects == self.col_objects
        out = ZPiMatrix(self.row_basis, self.col_basis)
        for i, (_tag, obj) in enumerate(self.row_basis):
            out.set(i, i, FormalSum.of_identity(obj))
        return out

    def __str__(self):
        lines = [f"ZPiMatrix {len(self.row_basis)}x{len(self.col_basis)}"]
        for (i, j) in sorted(self.entries):
            lines.append(f"  [{self.row_basis[i][0]}][{self.col_basis[j][0]}] = "
                         f"{self.entries[(i, j)]}")
        return "\n".join(lines)


def zpi_identity(basis):
    out = ZPiMatrix(basis, basis)
    for i, (_tag, obj) in enumerate(basis):
        out.set(i, i, FormalSum.of_identity(obj))
    return out


def zpi_zero(row_basis, col_basis):
    return ZPiMatrix(row_basis, col_basis)


class FreeChainComplex:
    """Bounded complex of free right modules with cell-indexed bases."""

    def __init__(self, pi, name="C"):
        self.pi = pi
        self.name = name
        self.bases = {}   # degree -> list of (tag, anchor object)
        self.diffs = {}   # degree n -> ZPiMatrix, d_n : C_n -> C_{n-1}

    @property
    def degrees(self):
        return sorted(self.bases)

    @property
    def max_deg(self):
        return max(self.bases) if self.bases else -1

    @property
    def min_deg(self):
        return min(self.bases) if self.bases else 0

    def basis(self, n):
        return self.bases.get(n, [])

    def set_basis(self, n, basis):
        self.bases[n] = list(basis)

    def rank(self, n):
        return len(self.basis(n))

    def d(self, n):
        got = self.diffs.get(n)
        if got is not None:
            return got
        return zpi_zero(self.basis(n - 1), self.basis(n))

    def set_d(self, n, matrix):
        assert matrix.row_objects == [obj for _t, obj in self.basis(n - 1)]
        assert matrix.col_objects == [obj for _t, obj in self.basis(n)]
        self.diffs[n] = matrix

    def category(self):
        return getattr(self.pi, "presented", self.pi)


# ---------------------------------------------------------------------------
# building C_*(X) and C_*(X, A)


def _d1_words(x, pi, edge):
    """(positive term, negative term) of the degree-1 boundary of an edge."""
    fcat = x.category
    cell = x.cells[edge]
    anchor = pi.cell_anchor[edge]
    via1 = fcat.normalize(fcat.word(cell.d1.via) if cell.d1.via
                          else fcat.identity(cell.fibre)).factors
    chain1, src1 = pi.whisker_chain(via1, pi.zero_anchor[cell.d1.cell])
    track = names.track_name(edge, ())
    pos = (track,) + chain1
    via0 = fcat.normalize(fcat.word(cell.d0.via) if cell.d0.via
                          else fcat.identity(cell.fibre)).factors
    chain0, src0 = pi.whisker_chain(via0, pi.zero_anchor[cell.d0.cell])
    assert src0 == anchor, f"d0 chain of {edge} starts at {src0}, anchor {anchor}"
    return pos, chain0


def _linearize_boundary(x, pi, face):
    """Fox-derivative terms of a 2-cell boundary word.

    Returns a list of (edge id, FormalSum term) parts plus the full
    transported loop word, for the d2 column of the face.
    """
    fcat = x.category
    cell = x.cells[face]
    anchor = pi.cell_anchor[face]
    terms = []
    prefix = ()
    for item in cell.boundary_word:
        if item.kind != "track":
            raise InconsistentBoundary(
                f"2-cell {face}: only track items are supported in boundary words")
        psi = fcat.normalize(fcat.word(item.psi) if item.psi
                             else fcat.identity(cell.fibre)).factors
        chain, chain_src = pi.whisker_chain(psi, pi.cell_anchor[item.edge])
        tname = names.track_name(item.edge, psi, inverse=(item.sign < 0))
        if item.sign > 0:
            word = pi.word(prefix + chain, at=anchor)
            terms.append((item.edge, FormalSum.of_word(word)))
            prefix = prefix + (tname,)
        else:
            prefix = prefix + (tname,)
            word = pi.word(prefix + chain, at=anchor)
            terms.append((item.edge, FormalSum.of_word(word).scale(-1)))
    loop = pi.word(prefix, at=anchor)
    return terms, loop


def build_chain_complex(x, pi=None, object_policy="cells-only"):
    """The cellular chain complex of ``x`` over its fundamental category.

    Degree-n basis elements are the n-cells with their anchors; for a
    relative complex degree 0 is dropped (the 0-skeleton plays the
    subcomplex role).
    """
    if pi is None:
        from .fundamental import build_pi
        pi = build_pi(x, object_policy=object_policy)
    c = FreeChainComplex(pi, name=f"C({x.name})")
    for n in sorted(x.by_dim):
        if x.relative and n == 0:
            continue
        basis = [(cid, pi.cell_anchor[cid]) for cid in x.by_dim[n]]
        c.set_basis(n, basis)
    if not x.relative and 0 not in c.bases:
        c.set_basis(0, [])
    # degree 1
    if 1 in c.bases and 0 in c.bases:
        rows = c.basis(0)
        cols = c.basis(1)
        row_index = {tag: i for i, (tag, _o) in enumerate(rows)}
        d1 = ZPiMatrix(rows, cols)
        for j, (edge, anchor) in enumerate(cols):
            pos, neg = _d1_words(x, pi, edge)
            cell = x.cells[edge]
            wpos = pi.word(pos, at=anchor)
            d1.add_to(row_index[cell.d1.cell], j, FormalSum.of_word(wpos))
            wneg = pi.word(neg, at=anchor)
            d1.add_to(row_index[cell.d0.cell], j, FormalSum.of_word(wneg).scale(-1))
        c.set_d(1, d1)
    # degree 2, linearized from boundary words
    if 2 in c.bases and 1 in c.bases:
        rows = c.basis(1)
        cols = c.basis(2)
        row_index = {tag: i for i, (tag, _o) in enumerate(rows)}
        d2 = ZPiMatrix(rows, cols)
        for j, (face, _anchor) in enumerate(cols):
            terms, _loop = _linearize_boundary(x, pi, face)
            for edge, summand in terms:
                d2.add_to(row_index[edge], j, summand)
        c.set_d(2, d2)
    # stored rows in dimension >= 3
    for n in sorted(x.by_dim):
        if n < 3 or n not in c.bases or (n - 1) not in c.bases:
            continue
        rows = c.basis(n - 1)
        cols = c.basis(n)
        row_index = {tag: i for i, (tag, _o) in enumerate(rows)}
        dn = ZPiMatrix(rows, cols)
        for j, (cid, anchor) in enumerate(cols):
            for term in x.cells[cid].boundary_row:
                if term.cell not in row_index:
                    raise InconsistentBoundary(
                        f"cell {cid}: row references unknown cell {term.cell}")
                i = row_index[term.cell]
                try:
                    word = pi.word(term.word, at=anchor)
                except EndpointMismatch as exc:
                    raise InconsistentBoundary(f"cell {cid}: {exc}") from exc
                if (word.src, word.dst) != (anchor, rows[i][1]):
                    raise InconsistentBoundary(
                        f"cell {cid}: row word runs {word.src} -> {word.dst}, "
                        f"expected {anchor} -> {rows[i][1]}")
                dn.add_to(i, j, FormalSum.of_word(word).scale(term.coeff))
        c.set_d(n, dn)
    return c


def verify_d_squared(c, mode="exact", modules=()):
    """Check d.d = 0 either in ZPi or against coefficient modules."""
    from .catmodule import induced_chain_map, induced_cochain_map

    report = ValidationReport(f"d^2 on {c.name} [{mode}]")
    degrees = c.degrees
    pairs = [(n, n + 1) for n in degrees if (n + 1) in c.bases and (n - 1) in c.bases]
    if mode == "exact":
        cat = c.category()
        if pairs and not cat.has_word_problem():
            raise NoNormalForm(
                f"{c.name}: exact mode needs normal forms; use coefficient mode")
        for n, m in pairs:
            square = c.d(n).compose(c.d(m)).normalized(cat)
            for (i, j), entry in sorted(square.entries.items()):
                if not entry.is_zero():
                    report.fail(
                        f"(d{n} d{m})[{square.row_basis[i][0]}]"
                        f"[{square.col_basis[j][0]}] = {entry}")
    elif mode == "coefficients":
        for module in modules:
            for n, m in pairs:
                if module.variance == "left":
                    a = induced_chain_map(c.d(n), module)
                    b = induced_chain_map(c.d(m), module)
                    prod = la.mat_mul(a, b)
                else:
                    a = induced_cochain_map(c.d(n), module)
                    b = induced_cochain_map(c.d(m), module)
                    prod = la.mat_mul(b, a)
                if not la.is_zero_matrix(prod):
                    report.fail(f"module {module.name}: d{n} after d{m} nonzero")
    else:
        raise ValueError(f"unknown mode {mode!r}")
    report.info["degree pairs checked"] = len(pairs)
    return report


# ---------------------------------------------------------------------------
# chain maps


class ChainMap:
    """Degree-wise ZPi-matrices over the target's fundamental category.

    ``functor`` maps source objects and generators into the target; the
    source complex is transported along it before any composition.
    """

    def __init__(self, source, target, mats, functor=None, name="f"):
        self.source = source
        self.target = target
        self.mats = dict(mats)   # degree -> ZPiMatrix (cols = transported source basis)
        self.functor = functor
        self.name = name

    def mat(self, n):
        got = self.mats.get(n)
        if got is not None:
            return got
        src_basis = transported_basis(self.source, self.functor, n)
        return zpi_zero(self.target.basis(n), src_basis)


def transported_basis(c, functor, n):
    if functor is None:
        return c.basis(n)
    obj_map = functor["objects"]
    return [(tag, obj_map[obj]) for (tag, obj) in c.basis(n)]


def transport_word(functor, target_pi, word):
    """Image of a source word under the generator assignment."""
    obj_map = functor["objects"]
    gen_map = functor["gens"]
    out = target_pi.identity(obj_map[word.src])
    for gen in word.factors:
        image = gen_map[gen]
        if image.src != out.dst:
            raise EndpointMismatch(
                f"functor image of {gen} starts at {image.src}, need {out.dst}")
        out = MorphismWord(out.src, image.dst, out.factors + image.factors)
    if out.dst != obj_map[word.dst]:
        raise EndpointMismatch("functor images break endpoint assignment")
    return out


def transport_complex(c, functor, target_pi, name=None):
    """Base change of a complex along a functor into ``target_pi``."""
    out = FreeChainComplex(target_pi, name=name or f"{c.name}^phi")
    for n in c.degrees:
        out.set_basis(n, transported_basis(c, functor, n))
    for n, dmat in c.diffs.items():
        out.set_d(n, dmat.map_words(
            lambda w: transport_word(functor, target_pi, w),
            row_basis=out.basis(n - 1), col_basis=out.basis(n)))
    return out


def verify_chain_map(f, mode="exact", modules=()):
    """Check the commuting squares; raises NotAChainMap on failure."""
    from .catmodule import induced_chain_map

    src = f.source if f.functor is None else transport_complex(
        f.source, f.functor, f.target.pi)
    degrees = sorted(set(src.degrees) | set(f.target.degrees))
    for n in degrees:
        if n - 1 not in f.target.bases and n - 1 not in src.bases:
            continue
        lhs = f.target.d(n).compose(f.mat(n))
        rhs = f.mat(n - 1).compose(src.d(n))
        if mode == "exact":
            cat = f.target.category()
            if not cat.has_word_problem():
                raise NoNormalForm("chain map verification needs normal forms")
            diff = lhs.add(rhs.scale(-1)).normalized(cat)
            if any(not e.is_zero() for e in diff.entries.values()):
                raise NotAChainMap(f"square at degree {n} does not commute",
                                   degree=n)
        else:
            for module in modules:
                a = induced_chain_map(lhs, module)
                b = induced_chain_map(rhs, module)
                if not la.mat_eq(a, b):
                    raise NotAChainMap(
                        f"square at degree {n} fails against {module.name}",
                        degree=n)
    return src


def chain_map_from_cellular(source, target, cell_images, functor=None, name="f",
                            verify="exact", modules=()):
    """Assemble and verify a chain map given per-cell image rows.

    ``cell_images`` maps a source cell tag to a list of (coeff, word
    factors or MorphismWord, target cell tag) over the target category.
    """
    target_pi = target.pi
    mats = {}
    for n in source.degrees:
        rows = target.basis(n)
        cols = transported_basis(source, functor, n)
        row_index = {tag: i for i, (tag, _o) in enumerate(rows)}
        mat = ZPiMatrix(rows, cols)
        for j, (tag, col_obj) in enumerate(cols):
            for coeff, word, row_tag in cell_images.get(tag, ()):
                if row_tag not in row_index:
                    raise NotAChainMap(
                        f"cell {tag}: image references unknown cell {row_tag}",
                        degree=n)
                i = row_index[row_tag]
                if not isinstance(word, MorphismWord):
                    word = target_pi.word(word, at=col_obj)
                mat.add_to(i, j, FormalSum.of_word(word).scale(coeff))
        mats[n] = mat
    f = ChainMap(source, target, mats, functor=functor, name=name)
    verify_chain_map(f, mode=verify, modules=modules)
    return f


def identity_chain_map(c):
    mats = {n: zpi_identity(c.basis(n)) for n in c.degrees}
    return ChainMap(c, c, mats, name="id")


def mapping_cone(f):
    """cone(f)_n = target_n + source_{n-1}, D = [[d', f], [0, -d]]."""
    src = f.source if f.functor is None else transport_complex(
        f.source, f.functor, f.target.pi)
    tgt = f.target
    cone = FreeChainComplex(tgt.pi, name=f"cone({f.name})")
    degrees = sorted(set(tgt.degrees) | {n + 1 for n in src.degrees})
    for n in degrees:
        basis = [(f"t:{tag}", obj) for tag, obj in tgt.basis(n)]
        basis += [(f"s:{tag}", obj) for tag, obj in src.basis(n - 1)]
        cone.set_basis(n, basis)
    for n in degrees:
        if n - 1 not in cone.bases:
            continue
        rows = cone.basis(n - 1)
        cols = cone.basis(n)
        d = ZPiMatrix(rows, cols)
        nt = len(tgt.basis(n - 1))
        mt = len(tgt.basis(n))
        dtgt = tgt.d(n)
        for (i, j), entry in dtgt.entries.items():
            d.add_to(i, j, entry)
        fmat = f.mat(n - 1)
        for (i, j), entry in fmat.entries.items():
            d.add_to(i, mt + j, entry)
        dsrc = src.d(n - 1)
        for (i, j), entry in dsrc.entries.items():
            d.add_to(nt + i, mt + j, entry.scale(-1))
        cone.set_d(n, d)
    return cone


# ---------------------------------------------------------------------------
# base change to the trivial category and object-wise evaluation


def trivial_pi():
    """A one-object fundamental category (the trivial quotient)."""
    pres = PresentedCategory(["pt"], {}, name="Pi(pt)")
    pres.build_hom_tables(cap=4)
    pi = PiCategory(pres, "pt", "cells-only")
    from .fundamental import PiObject
    pi.pi_objects = {"pt": PiObject("pt", "pt", ())}
    pi.zero_anchor = {"pt": "pt"}
    return pi


def trivialize_complex(c, name=None):
    """Collapse every word to the identity: the trivial-quotient complex."""
    pi = trivial_pi()
    out = FreeChainComplex(pi, name=name or f"{c.name}|Z")
    for n in c.degrees:
        out.set_basis(n, [(tag, "pt") for tag, _obj in c.basis(n)])
    for n, dmat in c.diffs.items():
        d = ZPiMatrix(out.basis(n - 1), out.basis(n))
        for (i, j), entry in dmat.entries.items():
            total = entry.coefficient_total()
            if total:
                d.add_to(i, j, FormalSum.of_identity("pt", total))
        out.set_d(n, d)
    return out


def trivialize_chain_map(f, name=None):
    src = trivialize_complex(f.source if f.functor is None else transport_complex(
        f.source, f.functor, f.target.pi))
    tgt = trivialize_complex(f.target)
    mats = {}
    for n in sorted(set(src.degrees) | set(tgt.degrees)):
        fm = f.mat(n)
        d = ZPiMatrix(tgt.basis(n), src.basis(n))
        for (i, j), entry in fm.entries.items():
            total = entry.coefficient_total()
            if total:
                d.add_to(i, j, FormalSum.of_identity("pt", total))
        mats[n] = d
    return ChainMap(src, tgt, mats, name=name or f"{f.name}|Z")


def evaluate_at_object(c, objname):
    """The integer complex of the evaluation C(objname).

    Requires hom tables on the fundamental category.  Returns
    (bases, matrices): bases[n] is a list of (cell tag, word), matrices[n]
    the integer matrix of d_n in those bases.
    """
    cat = c.category()
    tables = cat.hom_tables
    if tables is None:
        raise NoNormalForm("evaluation needs hom tables; run is_finite first")
    bases = {}
    index = {}
    for n in c.degrees:
        bases[n] = []
        for tag, anchor in c.basis(n):
            for elem in tables.hom(objname, anchor):
                word = tables.rep_word[elem]
                index[(n, tag, word.key())] = len(bases[n])
                bases[n].append((tag, word))
    mats = {}
    for n in c.degrees:
        if n - 1 not in c.bases:
            continue
        rows = bases[n - 1]
        cols = bases[n]
        mat = la.zeros(len(rows), len(cols))
        dmat = c.d(n)
        for (i, j), entry in dmat.entries.items():
            row_tag = dmat.row_basis[i][0]
            col_tag = dmat.col_basis[j][0]
            for jj, (tag, word) in enumerate(cols):
                if tag != col_tag:
                    continue
                for w, coeff in entry.items():
                    comp = cat.normalize(MorphismWord(
                        word.src, w.dst, word.factors + w.factors))
                    ii = index[(n - 1, row_tag, comp.key())]
                    mat[ii][jj] += coeff
        mats[n] = mat
    return bases, mats
