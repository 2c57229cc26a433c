"""Top-level homology, cohomology and Whitehead-criteria computations.

Coefficient (co)homology evaluates the cellular complex against a module
and runs exact integer homology on presented chain groups.  Total homology
requires a finite fundamental category: the complex is evaluated at every
object, homology is put in Smith-tracked canonical bases, and generators
act through precomposition.

The chain-level Whitehead criterion is decided by an honest integer linear
system over the category ring: hom-sets of a finite fundamental category
are finite, so matrices of formal word sums have finitely many integer
coordinates and "find g, s, t with gf - 1 = ds + sd, fg - 1 = d't + td'"
is a Diophantine solve.  A certificate is returned and re-verified by
direct word arithmetic.
"""

from __future__ import annotations

from . import intlinalg as la
from .catmodule import induced_chain_map, induced_cochain_map
from .chains import (ZPiMatrix, evaluate_at_object, transport_complex,
                     transport_word, zpi_identity, zpi_zero)
from .errors import (InfiniteFundamentalCategory, NoNormalForm,
                     UndecidableWithinBounds)
from .fundamental import build_pi
from .words import FormalSum, MorphismWord


class HomologyTable:
    def __init__(self, complex_name, coefficient_name, variance, groups):
        self.complex_name = complex_name
        self.coefficient_name = coefficient_name
        self.variance = variance
        self.groups = dict(groups)   # degree -> AbGroupPresentation

    def degree(self, n):
        return self.groups.get(n, la.AbGroupPresentation(0, ()))

    def degrees(self):
        return sorted(self.groups)

    def __eq__(self, other):
        if not isinstance(other, HomologyTable):
            return NotImplemented
        return self.groups == other.groups

    def render(self, symbol=None):
        sym = symbol or ("H_" if self.variance == "left" else "H^")
        lines = [f"{self.complex_name} with {self.coefficient_name}:"]
        for n in self.degrees():
            lines.append(f"  {sym}{n} = {self.groups[n]}")
        return "\n".join(lines)

    def to_record(self):
        return {
            "complex": self.complex_name,
            "coefficients": self.coefficient_name,
            "variance": self.variance,
            "groups": {str(n): self.groups[n].to_record() for n in self.degrees()},
        }


def chain_setup(x, object_policy="cells-only", hom_cap=512):
    """Build the fundamental category and chain complex of a complex."""
    from .chains import build_chain_complex
    pi = build_pi(x, object_policy=object_policy, hom_cap=hom_cap)
    return pi, build_chain_complex(x, pi)


def _chain_group_rels(c, module, n):
    """(relator matrix, free rank) of the evaluated chain group."""
    values = [module.value(obj) for _tag, obj in c.basis(n)]
    total = sum(v.rank for v in values)
    cols = []
    offset = 0
    for v in values:
        for r in v.rels:
            col = [0] * total
            col[offset:offset + v.rank] = r
            cols.append(col)
        offset += v.rank
    return la.from_columns(cols, nrows=total), total


def _degree_range(c):
    return range(0, max(c.max_deg, 0) + 1)


def homology(c, module, with_basis=False):
    """H_*(C (x) N) for a left module N over the complex's category."""
    assert module.variance == "left"
    out = {}
    details = {}
    for n in _degree_range(c):
        if n not in c.bases:
            out[n] = la.AbGroupPresentation(0, ())
            continue
        rel_mid, rank_mid = _chain_group_rels(c, module, n)
        rel_low, rank_low = _chain_group_rels(c, module, n - 1)
        d_out = induced_chain_map(c.d(n), module)
        if la.shape(d_out) != (rank_low, rank_mid):
            d_out = la.zeros(rank_low, rank_mid)
        if (n + 1) in c.bases:
            d_in = induced_chain_map(c.d(n + 1), module)
        else:
            d_in = la.zeros(rank_mid, 0)
        hb = la.homology_of_presented_pair(d_out, rel_low, d_in, rel_mid,
                                           with_basis=True)
        out[n] = hb.group
        details[n] = hb
    table = HomologyTable(c.name, module.name, "left", out)
    return (table, details) if with_basis else table


def cohomology(c, module, with_basis=False):
    """H^*(hom(C, M)) for a right module M."""
    assert module.variance == "right"
    out = {}
    details = {}
    for n in _degree_range(c):
        if n not in c.bases:
            out[n] = la.AbGroupPresentation(0, ())
            continue
        rel_mid, rank_mid = _chain_group_rels(c, module, n)
        rel_up, rank_up = _chain_group_rels(c, module, n + 1)
        if (n + 1) in c.bases:
            delta_out = induced_cochain_map(c.d(n + 1), module)
        else:
            delta_out = la.zeros(rank_up, rank_mid)
        if la.shape(delta_out) != (rank_up, rank_mid):
            delta_out = la.zeros(rank_up, rank_mid)
        if (n - 1) in c.bases:
            delta_in = induced_cochain_map(c.d(n), module)
        else:
            delta_in = la.zeros(rank_mid, 0)
        hb = la.homology_of_presented_pair(delta_out, rel_up, delta_in, rel_mid,
                                           with_basis=True)
        out[n] = hb.group
        details[n] = hb
    table = HomologyTable(c.name, module.name, "right", out)
    return (table, details) if with_basis else table


def euler_characteristics(c, module):
    """Alternating sums of chain ranks and of homology ranks."""
    chi_chain = 0
    for n in c.degrees:
        rels, rank = _chain_group_rels(c, module, n)
        if rank == 0:
            continue
        s, _u, _v = la.smith_normal_form(rels) if rels and rels[0] else (None, None, None)
        diag = la.snf_diagonal(s) if s is not None else []
        pres = la.AbGroupPresentation.from_diagonal(diag, rank)
        chi_chain += (-1) ** n * pres.rank
    table = homology(c, module) if module.variance == "left" else cohomology(c, module)
    chi_hom = sum((-1) ** n * table.degree(n).rank for n in table.degrees())
    return {"chain": chi_chain, "homology": chi_hom}


# ---------------------------------------------------------------------------
# total homology over a finite fundamental category


class ModuleValuedHomology:
    """Per-object homology with generator actions in canonical bases."""

    def __init__(self, complex_name):
        self.complex_name = complex_name
        self.values = {}    # object -> {degree -> AbGroupPresentation}
        self.actions = {}   # generator -> {degree -> matrix}

    def to_record(self):
        return {
            "complex": self.complex_name,
            "objects": {obj: {str(n): g.to_record() for n, g in sorted(degs.items())}
                        for obj, degs in sorted(self.values.items())},
        }


def _eval_d(bases, mats, n):
    rows = len(bases.get(n - 1, []))
    cols = len(bases.get(n, []))
    got = mats.get(n)
    if got is not None and la.shape(got) == (rows, cols):
        return got
    return la.zeros(rows, cols)


def _evaluated_map_at_object(cat, zmat, row_eval, col_eval):
    """Integer matrix of a ZPi-matrix under evaluation at an object."""
    row_index = {}
    for k, (tag, word) in enumerate(row_eval):
        row_index[(tag, word.key())] = k
    out = la.zeros(len(row_eval), len(col_eval))
    for (i, j), entry in zmat.entries.items():
        row_tag = zmat.row_basis[i][0]
        col_tag = zmat.col_basis[j][0]
        for jj, (tag, word) in enumerate(col_eval):
            if tag != col_tag:
                continue
            for w, coeff in entry.items():
                comp = cat.normalize(MorphismWord(
                    word.src, w.dst, word.factors + w.factors))
                out[row_index[(row_tag, comp.key())]][jj] += coeff
    return out


def total_homology(c, cap=512):
    """H_*(C) as a right module over a finite fundamental category."""
    pi = c.pi
    verdict, info = pi.is_finite(cap=cap)
    if verdict is not True:
        raise InfiniteFundamentalCategory(
            f"total homology needs a finite fundamental category ({info})")
    cat = c.category()
    out = ModuleValuedHomology(c.name)
    evals = {}
    homs = {}
    for obj in cat.objects:
        bases, mats = evaluate_at_object(c, obj)
        evals[obj] = bases
        degs, det = {}, {}
        for n in _degree_range(c):
            hb = la.homology_of_pair(_eval_d(bases, mats, n),
                                     _eval_d(bases, mats, n + 1),
                                     with_basis=True)
            degs[n] = hb.group
            det[n] = hb
        out.values[obj] = degs
        homs[obj] = det
    # contravariant generator actions by precomposition
    for gen, (src, dst) in sorted(cat.generators.items()):
        gw = cat.gen_word(gen)
        acts = {}
        for n in _degree_range(c):
            basis_dst = evals[dst].get(n, [])
            basis_src = evals[src].get(n, [])
            index = {(tag, w.key()): k for k, (tag, w) in enumerate(basis_src)}
            mat = la.zeros(len(basis_src), len(basis_dst))
            for j, (tag, word) in enumerate(basis_dst):
                comp = cat.normalize(MorphismWord(
                    src, word.dst, gw.factors + word.factors))
                mat[index[(tag, comp.key())]][j] = 1
            acts[n] = la.induced_on_homology(mat, homs[dst][n], homs[src][n])
        out.actions[gen] = acts
    return out


# ---------------------------------------------------------------------------
# linear solving over the category ring


class LinearEquation:
    """sum of sign * A * X_u * B == rhs over one finite category."""

    def __init__(self, terms, rhs):
        self.terms = terms   # list of (sign, A, unknown id, B)
        self.rhs = rhs


def _hom_words(tables, a, b):
    return [tables.rep_word[e] for e in tables.hom(a, b)]


def zpi_linear_solve(cat, unknowns, equations):
    """Solve for ZPi-matrices with prescribed bases.

    ``unknowns`` maps id -> (row_basis, col_basis).  Returns a dict of
    ZPiMatrix or None when the integer system has no solution.  Requires
    hom tables on ``cat``.
    """
    tables = cat.hom_tables
    if tables is None:
        raise NoNormalForm("solving over the category ring needs hom tables")
    coords = []
    coord_index = {}
    for uid in sorted(unknowns, key=repr):
        rows, cols = unknowns[uid]
        for i, (_rt, robj) in enumerate(rows):
            for j, (_ct, cobj) in enumerate(cols):
                for w in _hom_words(tables, cobj, robj):
                    coord_index[(uid, i, j, w.key())] = len(coords)
                    coords.append((uid, i, j, w))
    rows_int = []
    rhs_int = []
    for eq in equations:
        rhs = eq.rhs.normalized(cat)
        shape_rows = rhs.row_basis
        shape_cols = rhs.col_basis
        position_index = {}
        positions = []
        for p, (_t, robj) in enumerate(shape_rows):
            for q, (_t2, cobj) in enumerate(shape_cols):
                for w in _hom_words(tables, cobj, robj):
                    position_index[(p, q, w.key())] = len(positions)
                    positions.append((p, q, w))
        block = [[0] * len(coords) for _ in positions]
        vec = [0] * len(positions)
        for p, q, w in positions:
            k = position_index[(p, q, w.key())]
            vec[k] = rhs.entry(p, q).terms.get(w, 0)
        for sign, amat, uid, bmat in eq.terms:
            urows, ucols = unknowns[uid]
            for i in range(len(urows)):
                for j in range(len(ucols)):
                    for w in _hom_words(tables, ucols[j][1], urows[i][1]):
                        col = coord_index[(uid, i, j, w.key())]
                        for p in range(len(shape_rows)):
                            a_entry = amat.entry(p, i)
                            if a_entry.is_zero():
                                continue
                            for q in range(len(shape_cols)):
                                b_entry = bmat.entry(j, q)
                                if b_entry.is_zero():
                                    continue
                                for aw, ac in a_entry.terms.items():
                                    for bw, bc in b_entry.terms.items():
                                        comp = cat.normalize(MorphismWord(
                                            bw.src, aw.dst,
                                            bw.factors + w.factors + aw.factors))
                                        k = position_index[(p, q, comp.key())]
                                        block[k][col] += sign * ac * bc
        rows_int.extend(block)
        rhs_int.extend(vec)
    if not coords:
        if any(x != 0 for x in rhs_int):
            return None
        return {uid: ZPiMatrix(*unknowns[uid]) for uid in unknowns}
    if not rows_int:
        sol = [0] * len(coords)
    else:
        sol = la.solve(rows_int, rhs_int)
    if sol is None:
        return None
    out = {uid: ZPiMatrix(*unknowns[uid]) for uid in unknowns}
    for val, (uid, i, j, w) in zip(sol, coords):
        if val:
            out[uid].add_to(i, j, FormalSum.of_word(w, val))
    return out


# ---------------------------------------------------------------------------
# the Whitehead criteria


class WhiteheadVerdict:
    def __init__(self):
        self.pi_iso = None
        self.chain_equivalence = None     # criterion (i)
        self.certificate = None           # (g, s, t) on success
        self.homology_isomorphism = None  # criterion (ii)
        self.homology_details = {}
        self.module_results = {}          # criterion (iii), per module
        self.partial = False

    @property
    def is_equivalence(self):
        if self.chain_equivalence is not None:
            return self.chain_equivalence
        if self.homology_isomorphism is not None:
            return self.homology_isomorphism
        if self.module_results:
            return all(self.module_results.values())
        return None

    def to_record(self):
        return {
            "pi_iso": self.pi_iso,
            "chain_equivalence": self.chain_equivalence,
            "homology_isomorphism": self.homology_isomorphism,
            "modules": dict(sorted(self.module_results.items())),
            "partial": self.partial,
            "equivalence": self.is_equivalence,
        }


def _transported_source(f):
    if f.functor is None:
        return f.source
    return transport_complex(f.source, f.functor, f.target.pi)


def verify_certificate(f, g, s, t):
    """Re-check gf - 1 = ds + sd and fg - 1 = d't + td' by word arithmetic."""
    src = _transported_source(f)
    tgt = f.target
    cat = tgt.category()

    def unk(table, nn, rows, cols):
        got = table.get(nn)
        return got if got is not None else zpi_zero(rows, cols)

    degrees = sorted(set(src.degrees) | set(tgt.degrees))
    for n in degrees:
        gf = unk(g, n, src.basis(n), tgt.basis(n)).compose(f.mat(n))
        lhs = gf.add(zpi_identity(src.basis(n)).scale(-1))
        rhs = src.d(n + 1).compose(unk(s, n, src.basis(n + 1), src.basis(n)))
        rhs = rhs.add(unk(s, n - 1, src.basis(n), src.basis(n - 1)).compose(src.d(n)))
        diff = lhs.add(rhs.scale(-1)).normalized(cat)
        if any(not e.is_zero() for e in diff.entries.values()):
            return False
        fg = f.mat(n).compose(unk(g, n, src.basis(n), tgt.basis(n)))
        lhs = fg.add(zpi_identity(tgt.basis(n)).scale(-1))
        rhs = tgt.d(n + 1).compose(unk(t, n, tgt.basis(n + 1), tgt.basis(n)))
        rhs = rhs.add(unk(t, n - 1, tgt.basis(n), tgt.basis(n - 1)).compose(tgt.d(n)))
        diff = lhs.add(rhs.scale(-1)).normalized(cat)
        if any(not e.is_zero() for e in diff.entries.values()):
            return False
    return True


def _solve_equivalence(f, cap=512):
    """Search for (g, s, t) through a contraction of the mapping cone.

    A contraction delta of cone(f) has block form [[-t, a], [g, s]]; the
    identity D delta + delta D = 1 unpacks to exactly the two homotopy
    equations, so extracting the blocks yields a certificate.  Returns
    None when the cone is not contractible (f is not an equivalence).
    """
    from .chains import mapping_cone
    from .ktheory import find_chain_contraction
    from .errors import NotContractible

    src = _transported_source(f)
    tgt = f.target
    if tgt.category().hom_tables is None:
        verdict, info = tgt.pi.is_finite(cap=cap)
        if verdict is not True:
            raise InfiniteFundamentalCategory(str(info))
    cone = mapping_cone(f)
    try:
        delta = find_chain_contraction(cone, cap=cap)
    except NotContractible:
        return None
    degrees = sorted(set(src.degrees) | set(tgt.degrees))
    g, s, t = {}, {}, {}
    for n in sorted(delta):
        dmat = delta[n]   # cone_n -> cone_{n+1}
        nt_rows = len(tgt.basis(n + 1))
        nt_cols = len(tgt.basis(n))
        gmat = ZPiMatrix(src.basis(n), tgt.basis(n))
        smat = ZPiMatrix(src.basis(n), src.basis(n - 1))
        tmat = ZPiMatrix(tgt.basis(n + 1), tgt.basis(n))
        for (i, j), entry in dmat.entries.items():
            if i < nt_rows and j < nt_cols:
                tmat.add_to(i, j, entry.scale(-1))
            elif i >= nt_rows and j < nt_cols:
                gmat.add_to(i - nt_rows, j, entry)
            elif i >= nt_rows and j >= nt_cols:
                smat.add_to(i - nt_rows, j - nt_cols, entry)
        g[n] = gmat
        if n - 1 in degrees or n - 1 >= 0:
            s[n - 1] = smat
        t[n] = tmat
    for n in degrees:
        g.setdefault(n, ZPiMatrix(src.basis(n), tgt.basis(n)))
        s.setdefault(n, ZPiMatrix(src.basis(n + 1), src.basis(n)))
        t.setdefault(n, ZPiMatrix(tgt.basis(n + 1), tgt.basis(n)))
    return g, s, t


def verify_pi_iso(f, cap=512):
    """Bijectivity of the supplied functor between finite categories."""
    if f.functor is None:
        return True
    src_pi, tgt_pi = f.source.pi, f.target.pi
    va, _ia = src_pi.is_finite(cap=cap)
    vb, _ib = tgt_pi.is_finite(cap=cap)
    if va is not True or vb is not True:
        return None
    obj_map = f.functor["objects"]
    if sorted(obj_map) != sorted(src_pi.presented.objects):
        return False
    if sorted(set(obj_map.values())) != sorted(tgt_pi.presented.objects):
        return False
    for a in src_pi.presented.objects:
        for b in src_pi.presented.objects:
            words = src_pi.presented.enumerate_homs(a, b, cap=cap)
            images = set()
            for w in words:
                images.add(tgt_pi.normalize(
                    transport_word(f.functor, tgt_pi, w)).key())
            target_words = tgt_pi.presented.enumerate_homs(
                obj_map[a], obj_map[b], cap=cap)
            if len(images) != len(words) or len(images) != len(target_words):
                return False
    return True


def whitehead_check(f, modules=(), cap=512):
    """Decide the chain-level Whitehead criteria for a chain map.

    Over a finite fundamental category criteria (i) and (ii) are decided
    outright; otherwise the supplied coefficient modules give a partial
    verdict and an empty module list is an error.
    """
    verdict = WhiteheadVerdict()
    verdict.pi_iso = verify_pi_iso(f, cap=cap)
    finite, _info = f.target.pi.is_finite(cap=cap)
    if finite is True:
        sol = _solve_equivalence(f, cap=cap)
        if sol is None:
            verdict.chain_equivalence = False
        else:
            g, s, t = sol
            assert verify_certificate(f, g, s, t), "certificate failed re-check"
            verdict.chain_equivalence = True
            verdict.certificate = (g, s, t)
        verdict.homology_isomorphism = _homology_iso_all_objects(f, verdict)
    else:
        if not modules:
            raise UndecidableWithinBounds(
                "infinite fundamental category: supply coefficient modules "
                "for a partial verdict")
        verdict.partial = True
    for module in modules:
        verdict.module_results[module.name] = _module_iso(f, module)
    return verdict


def _homology_iso_all_objects(f, verdict):
    src = _transported_source(f)
    tgt = f.target
    cat = tgt.category()
    all_iso = True
    for obj in cat.objects:
        sb, sm = evaluate_at_object(src, obj)
        tb, tm = evaluate_at_object(tgt, obj)
        for n in sorted(set(_degree_range(src)) | set(_degree_range(tgt))):
            hs = la.homology_of_pair(_eval_d(sb, sm, n), _eval_d(sb, sm, n + 1),
                                     with_basis=True)
            ht = la.homology_of_pair(_eval_d(tb, tm, n), _eval_d(tb, tm, n + 1),
                                     with_basis=True)
            fmat = _evaluated_map_at_object(cat, f.mat(n),
                                            tb.get(n, []), sb.get(n, []))
            induced = la.induced_on_homology(fmat, hs, ht)
            verdict.homology_details[(obj, n)] = (hs.group, ht.group)
            if not la.is_group_isomorphism(induced, hs, ht):
                all_iso = False
    return all_iso


def _module_iso(f, module):
    """Criterion (iii) for one right module, (ii)-style for a left one."""
    src = _transported_source(f)
    tgt = f.target
    degrees = sorted(set(_degree_range(src)) | set(_degree_range(tgt)))
    ok = True
    if module.variance == "right":
        _t, tdet = cohomology(tgt, module, with_basis=True)
        _s, sdet = cohomology(src, module, with_basis=True)
        for n in degrees:
            if n not in tdet or n not in sdet:
                if _t.degree(n) != _s.degree(n):
                    ok = False
                continue
            fstar = induced_cochain_map(f.mat(n), module)
            induced = la.induced_on_homology(fstar, tdet[n], sdet[n])
            if not la.is_group_isomorphism(induced, tdet[n], sdet[n]):
                ok = False
    else:
        _t, tdet = homology(tgt, module, with_basis=True)
        _s, sdet = homology(src, module, with_basis=True)
        for n in degrees:
            if n not in tdet or n not in sdet:
                if _t.degree(n) != _s.degree(n):
                    ok = False
                continue
            fstar = induced_chain_map(f.mat(n), module)
            induced = la.induced_on_homology(fstar, sdet[n], tdet[n])
            if not la.is_group_isomorphism(induced, sdet[n], tdet[n]):
                ok = False
    return ok
