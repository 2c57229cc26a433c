"""The fundamental category of a fibred complex.

Only the 2-skeleton matters: objects are anchored fibres (V, 0-cell, phi),
generators are whiskers of structure-category generators together with
1-cell tracks whiskered by fibre identifications, and the relations are

  (a) whiskered relations and tracks of the structure category,
  (b) formal invertibility of every track generator,
  (c) boundary words of 2-cells, whiskered over all fibre maps into the
      cell's fibre, set equal to the identity,
  (d) interchange of tracks and whiskers.

The result is an ordinary PresentedCategory whose word problem is attacked
by the usual bounded completion; every generator carries a provenance tag.

F-words follow the package convention: factor tuples are in application
order, so the point anchored by phi twisted along psi is ι∘phi∘psi and its
factors are ``psi + phi``.
"""

from __future__ import annotations

from . import names
from .errors import CapExceeded, NoNormalForm
from .presented import PresentedCategory


class PiObject:
    __slots__ = ("fibre", "cell0", "phi")

    def __init__(self, fibre, cell0, phi=()):
        self.fibre = fibre
        self.cell0 = cell0
        self.phi = tuple(phi)

    @property
    def name(self):
        return names.pi_object_name(self.fibre, self.cell0, self.phi)

    def key(self):
        return (self.fibre, self.cell0, self.phi)

    def __repr__(self):
        return f"PiObject({self.name})"


class PiCategory:
    """A presented category plus provenance and anchor bookkeeping."""

    def __init__(self, presented, complex_name, policy):
        self.presented = presented
        self.complex_name = complex_name
        self.policy = policy
        self.pi_objects = {}     # name -> PiObject
        self.provenance = {}     # generator name -> tuple tag
        self.cell_anchor = {}    # cell id -> object name
        self.zero_anchor = {}    # 0-cell id -> object name
        self.track_psis = {}     # 1-cell id -> sorted list of (src fibre, psi)
        self.warnings = []
        self._fcat = None

    def normalize(self, w):
        return self.presented.normalize(w)

    def equal(self, w1, w2):
        return self.presented.equal(w1, w2)

    def word(self, factors, at=None):
        return self.presented.word(factors, at=at)

    def identity(self, obj):
        return self.presented.identity(obj)

    @property
    def objects(self):
        return self.presented.objects

    @property
    def generators(self):
        return self.presented.generators

    def whisker_chain(self, fword, target_objname):
        """Application-ordered whisker generator names realizing an F-word.

        The chain runs from the fword-twisted object up to
        ``target_objname``; returns (factors, source object name).
        """
        cur = self.pi_objects[target_objname]
        fcat = self._fcat
        rev = []
        for beta in reversed(tuple(fword)):
            rev.append(names.whisker_name(beta, cur.name))
            bsrc, bdst = fcat.generators[beta]
            assert bdst == cur.fibre, f"whisker {beta} does not end at {cur.fibre}"
            cur = PiObject(bsrc, cur.cell0, _nf(fcat, (beta,) + cur.phi))
        return tuple(reversed(rev)), cur.name

    def is_finite(self, cap=512):
        """Tri-state: (True, census) | (False, reason) | ("unknown", reason)."""
        try:
            tables = self.presented.build_hom_tables(cap=cap)
        except CapExceeded as exc:
            return (False, f"hom enumeration exceeded cap: {exc}")
        except NoNormalForm as exc:
            return ("unknown", f"word problem unavailable: {exc}")
        census = {pair: len(elems) for pair, elems in sorted(tables.elems.items())
                  if elems}
        return (True, census)


def _nf(fcat, factors):
    factors = tuple(factors)
    if not factors:
        return ()
    return fcat.normalize(fcat.word(factors)).factors


def _enumerate_into(fcat, target_fibre, cap):
    """All F-hom classes (source fibre, normalized factors) into a fibre."""
    out = []
    for src in fcat.objects:
        words = fcat.enumerate_homs(src, target_fibre, cap=cap)
        out.extend((src, w.factors) for w in words)
    return out


def build_pi(x, object_policy="cells-only", hom_cap=512):
    """Construct the fundamental category of the 2-skeleton of ``x``.

    ``cells-only`` instantiates the anchors the chain complex needs (plus
    the closure forced by whiskering); ``all`` also instantiates every
    anchored fibre pair that bounded enumeration of the structure category
    reaches.
    """
    if object_policy not in ("cells-only", "all"):
        raise ValueError(f"unknown object policy {object_policy!r}")
    fcat = x.category
    if not fcat.has_word_problem():
        raise NoNormalForm(
            "structure category needs hom tables or a completed rewriting system")

    objects = {}

    def add_object(fibre, cell0, phi_factors):
        obj = PiObject(fibre, cell0, _nf(fcat, phi_factors))
        objects.setdefault(obj.name, obj)
        return obj.name

    zero_anchor = {}
    for c in x.dim_cells(0):
        zero_anchor[c.id] = add_object(c.fibre, c.id, ())

    cell_anchor = {}
    for dim in sorted(x.by_dim):
        for cid in x.by_dim[dim]:
            fibre, base, phi = x.cells[cid].anchor()
            cell_anchor[cid] = add_object(fibre, base, phi)

    # whiskered traversal maps per 1-cell, and per-2-cell whisker sets
    warnings = []
    track_psis = {}
    psi2 = {}
    for e in x.dim_cells(1):
        psis = {(e.fibre, ())}
        try:
            psis.update(_enumerate_into(fcat, e.fibre, hom_cap))
        except (CapExceeded, NoNormalForm) as exc:
            warnings.append(f"1-cell {e.id}: whisker closure limited ({exc})")
        track_psis[e.id] = psis
    for f in x.dim_cells(2):
        sets = {(f.fibre, ())}
        try:
            sets.update(_enumerate_into(fcat, f.fibre, hom_cap))
        except (CapExceeded, NoNormalForm) as exc:
            warnings.append(f"2-cell {f.id}: whiskered relations limited ({exc})")
        psi2[f.id] = sets
        for item in f.boundary_word:
            if item.kind != "track":
                continue
            for (vsrc, psi) in sets:
                whiskered = _nf(fcat, tuple(psi) + tuple(item.psi))
                track_psis[item.edge].add((vsrc, whiskered))
    # suffix closure keeps chained interchange instances available
    for e_id, psis in track_psis.items():
        extra = set()
        for (_vsrc, psi) in psis:
            for k in range(1, len(psi)):
                tail = psi[k:]
                src = fcat.generators[tail[0]][0]
                extra.add((src, _nf(fcat, tail)))
        psis.update(extra)

    for e in x.dim_cells(1):
        for (vsrc, psi) in sorted(track_psis[e.id]):
            add_object(vsrc, e.d0.cell, tuple(psi) + tuple(e.d0.via))
            add_object(vsrc, e.d1.cell, tuple(psi) + tuple(e.d1.via))

    if object_policy == "all":
        for c in x.dim_cells(0):
            try:
                for (vsrc, phi) in _enumerate_into(fcat, c.fibre, hom_cap):
                    add_object(vsrc, c.id, phi)
            except (CapExceeded, NoNormalForm) as exc:
                warnings.append(f"0-cell {c.id}: object enumeration limited ({exc})")

    # close under whisker sources so every whisker generator has endpoints
    gens_by_target = {}
    for gname, (gsrc, gdst) in fcat.generators.items():
        gens_by_target.setdefault(gdst, []).append((gname, gsrc))
    frontier = sorted(objects)
    guard = 0
    while frontier:
        guard += 1
        if guard > 10000:
            raise CapExceeded("object closure did not stabilize")
        nxt = []
        for name in frontier:
            obj = objects[name]
            for beta, bsrc in sorted(gens_by_target.get(obj.fibre, [])):
                cand = PiObject(bsrc, obj.cell0, _nf(fcat, (beta,) + obj.phi))
                if cand.name not in objects:
                    objects[cand.name] = cand
                    nxt.append(cand.name)
        frontier = nxt

    # generators
    generators = {}
    provenance = {}
    for name in sorted(objects):
        obj = objects[name]
        for beta, bsrc in sorted(gens_by_target.get(obj.fibre, [])):
            src_name = names.pi_object_name(
                bsrc, obj.cell0, _nf(fcat, (beta,) + obj.phi))
            gname = names.whisker_name(beta, name)
            generators[gname] = (src_name, name)
            provenance[gname] = ("whisker", beta, name)
    track_endpoints = {}
    for e in sorted(x.by_dim.get(1, [])):
        cell = x.cells[e]
        for (vsrc, psi) in sorted(track_psis[e]):
            o0 = names.pi_object_name(
                vsrc, cell.d0.cell, _nf(fcat, tuple(psi) + tuple(cell.d0.via)))
            o1 = names.pi_object_name(
                vsrc, cell.d1.cell, _nf(fcat, tuple(psi) + tuple(cell.d1.via)))
            tname = names.track_name(e, psi)
            iname = names.track_name(e, psi, inverse=True)
            generators[tname] = (o0, o1)
            generators[iname] = (o1, o0)
            provenance[tname] = ("track", e, psi, 1)
            provenance[iname] = ("track", e, psi, -1)
            track_endpoints[(e, psi)] = (o0, o1)

    pres = PresentedCategory(sorted(objects), generators, name=f"Pi({x.name})")
    pi = PiCategory(pres, x.name, object_policy)
    pi.pi_objects = objects
    pi.provenance = provenance
    pi.cell_anchor = cell_anchor
    pi.zero_anchor = zero_anchor
    pi.track_psis = {e: sorted(p) for e, p in track_psis.items()}
    pi.warnings = warnings
    pi._fcat = fcat

    def rel(lhs_factors, rhs_factors, at):
        w1 = pres.word(lhs_factors, at=at)
        w2 = pres.word(rhs_factors, at=at)
        pres.relations.append(pres._pair((w1, w2)))

    # (a) whiskered structure-category congruence
    for (u, v) in fcat.relations + fcat.tracks:
        for name in sorted(objects):
            obj = objects[name]
            if obj.fibre != u.dst:
                continue
            cu, src_u = pi.whisker_chain(u.factors, name)
            cv, src_v = pi.whisker_chain(v.factors, name)
            assert src_u == src_v, "whiskered relation endpoints disagree"
            rel(cu, cv, at=src_u)

    # (b) tracks invert
    for (e, psi), (o0, o1) in sorted(track_endpoints.items()):
        t = names.track_name(e, psi)
        i = names.track_name(e, psi, inverse=True)
        rel((t, i), (), at=o0)
        rel((i, t), (), at=o1)

    # (c) whiskered 2-cell boundary words
    for f in x.dim_cells(2):
        if any(item.kind != "track" for item in f.boundary_word):
            warnings.append(f"2-cell {f.id}: non-track items ignored in relations")
            continue
        for (vsrc, psi) in sorted(psi2[f.id]):
            factors = tuple(
                names.track_name(item.edge,
                                 _nf(fcat, tuple(psi) + tuple(item.psi)),
                                 inverse=(item.sign < 0))
                for item in f.boundary_word)
            base_obj = names.pi_object_name(
                vsrc, f.basepoint, _nf(fcat, tuple(psi) + tuple(f.basemap)))
            rel(factors, (), at=base_obj)

    # (d) track/whisker interchange, both orientations
    for e in sorted(x.by_dim.get(1, [])):
        for (vsrc, psi) in sorted(track_psis[e]):
            o0, o1 = track_endpoints[(e, psi)]
            for beta, bsrc in sorted(gens_by_target.get(vsrc, [])):
                pb = _nf(fcat, (beta,) + tuple(psi))
                if (bsrc, pb) not in track_psis[e]:
                    continue
                t_psi = names.track_name(e, psi)
                t_pb = names.track_name(e, pb)
                i_psi = names.track_name(e, psi, inverse=True)
                i_pb = names.track_name(e, pb, inverse=True)
                w0 = names.whisker_name(beta, o0)
                w1 = names.whisker_name(beta, o1)
                rel((t_pb, w1), (w0, t_psi), at=generators[w0][0])
                rel((w1, i_psi), (i_pb, w0), at=generators[w1][0])

    return pi


def is_finite_pi(pi, cap=512):
    """Bounded finiteness check; builds full hom tables on success."""
    return pi.is_finite(cap=cap)
