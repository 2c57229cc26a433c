"""Combinatorial fibred CW-complexes.

Attaching data is stored at exactly the algebraic level the chain complex
consumes: endpoint attachments in dimension 1, a based loop word of track
items in dimension 2, and explicit boundary rows over the fundamental
category in dimensions >= 3.  Each cell of dimension >= 1 carries a
basepoint 0-cell; normalization requires the d0 attachment of a 1-cell to
sit at its basepoint.

A complex is ``relative`` when its 0-skeleton plays the role of the
subcomplex A (so the chain complex vanishes in degree 0).
"""

from __future__ import annotations

from . import names
from .errors import EndpointMismatch, UnknownGenerator
from .presented import PresentedCategory, ValidationReport, trivial_category, z2_orbit_category


class Attachment:
    """Endpoint of a 1-cell: a 0-cell plus an F-word into its fibre."""

    __slots__ = ("cell", "via")

    def __init__(self, cell, via=()):
        self.cell = cell
        self.via = tuple(via)

    def __repr__(self):
        return f"Attachment({self.cell!r}, {self.via!r})"

    def __eq__(self, other):
        return (self.cell, self.via) == (other.cell, other.via)


class TrackItem:
    """One 1-cell traversal inside a 2-cell boundary word.

    ``psi`` is the F-word identifying the fibre of the 2-cell with the
    fibre of the traversed 1-cell; ``sign`` is +1 for a forward crossing.
    """

    __slots__ = ("edge", "psi", "sign")
    kind = "track"

    def __init__(self, edge, psi=(), sign=1):
        assert sign in (1, -1)
        self.edge = edge
        self.psi = tuple(psi)
        self.sign = sign

    def __repr__(self):
        return f"TrackItem({self.edge!r}, {self.psi!r}, {self.sign})"


class WhiskerItem:
    """A whisker move by one F-generator inside a boundary word."""

    __slots__ = ("fgen",)
    kind = "whisker"

    def __init__(self, fgen):
        self.fgen = fgen

    def __repr__(self):
        return f"WhiskerItem({self.fgen!r})"


class RowTerm:
    """One summand of a stored boundary row: coeff * word * [cell]."""

    __slots__ = ("coeff", "word", "cell")

    def __init__(self, coeff, word, cell):
        self.coeff = int(coeff)
        self.word = tuple(word)
        self.cell = cell

    def __repr__(self):
        return f"RowTerm({self.coeff}, {self.word!r}, {self.cell!r})"


class FCell:
    def __init__(self, cell_id, dim, fibre, basepoint=None, basemap=(),
                 d0=None, d1=None, boundary_word=None, boundary_row=None):
        self.id = cell_id
        self.dim = dim
        self.fibre = fibre
        self.basepoint = basepoint
        self.basemap = tuple(basemap)
        self.d0 = d0
        self.d1 = d1
        self.boundary_word = list(boundary_word or [])
        self.boundary_row = list(boundary_row or [])

    def anchor(self):
        """(fibre, 0-cell, F-word) anchoring this cell in the 0-skeleton."""
        if self.dim == 0:
            return (self.fibre, self.id, ())
        if self.dim == 1:
            return (self.fibre, self.d0.cell, self.d0.via)
        return (self.fibre, self.basepoint, self.basemap)

    def __repr__(self):
        return f"FCell({self.id!r}, dim={self.dim}, fibre={self.fibre!r})"


class FComplex:
    def __init__(self, category, name="X", relative=False):
        self.category = category
        self.name = name
        self.relative = relative
        self.cells = {}
        self.by_dim = {}

    # -- construction ------------------------------------------------------

    def add_cell(self, cell):
        if cell.id in self.cells:
            raise ValueError(f"duplicate cell id {cell.id!r}")
        self.cells[cell.id] = cell
        self.by_dim.setdefault(cell.dim, []).append(cell.id)
        return cell

    def add_vertex(self, cell_id, fibre):
        return self.add_cell(FCell(cell_id, 0, fibre))

    def add_edge(self, cell_id, fibre, d0, d1):
        cell = FCell(cell_id, 1, fibre, basepoint=d0.cell, d0=d0, d1=d1)
        return self.add_cell(cell)

    def add_face(self, cell_id, fibre, basepoint, word, basemap=()):
        cell = FCell(cell_id, 2, fibre, basepoint=basepoint, basemap=basemap,
                     boundary_word=word)
        return self.add_cell(cell)

    def add_higher_cell(self, cell_id, dim, fibre, basepoint, row, basemap=()):
        assert dim >= 3
        cell = FCell(cell_id, dim, fibre, basepoint=basepoint, basemap=basemap,
                     boundary_row=row)
        return self.add_cell(cell)

    # -- views ---------------------------------------------------------------

    @property
    def max_dim(self):
        return max(self.by_dim) if self.by_dim else -1

    def dim_cells(self, n):
        return [self.cells[cid] for cid in self.by_dim.get(n, [])]

    def skeleton(self, n):
        """The subcomplex of cells of dimension <= n."""
        out = FComplex(self.category, name=f"{self.name}_skel{n}",
                       relative=self.relative)
        for dim in sorted(self.by_dim):
            if dim > n:
                continue
            for cid in self.by_dim[dim]:
                out.add_cell(self.cells[cid])
        return out

    def cell_census(self):
        census = {}
        for dim in sorted(self.by_dim):
            counts = {}
            for cid in self.by_dim[dim]:
                fibre = self.cells[cid].fibre
                counts[fibre] = counts.get(fibre, 0) + 1
            census[dim] = counts
        return census

    # -- validation -----------------------------------------------------------

    def _check_fword(self, report, factors, want_src, want_dst, what):
        try:
            if factors:
                w = self.category.word(factors)
            else:
                w = self.category.identity(want_dst)
        except (UnknownGenerator, EndpointMismatch) as exc:
            report.fail(f"{what}: {exc}")
            return
        if w.src != want_src or w.dst != want_dst:
            report.fail(f"{what}: runs {w.src}->{w.dst}, expected {want_src}->{want_dst}")

    def validate_complex(self):
        report = ValidationReport(f"complex {self.name}")
        objset = set(self.category.objects)
        for cell in self.cells.values():
            if cell.fibre not in objset:
                report.fail(f"cell {cell.id}: fibre {cell.fibre!r} not in category")
        zero = set(self.by_dim.get(0, []))
        for dim in sorted(self.by_dim):
            if dim == 0:
                continue
            for cid in self.by_dim[dim]:
                cell = self.cells[cid]
                base = cell.anchor()[1]
                if base not in zero:
                    report.fail(f"cell {cid}: basepoint {base!r} is not a 0-cell")
        for cell in self.dim_cells(1):
            for tag, att in (("d0", cell.d0), ("d1", cell.d1)):
                if att is None:
                    report.fail(f"1-cell {cell.id}: missing {tag} attachment")
                    continue
                if att.cell not in zero:
                    report.fail(f"1-cell {cell.id}: {tag} attaches to non-0-cell {att.cell!r}")
                    continue
                self._check_fword(report, att.via, cell.fibre,
                                  self.cells[att.cell].fibre,
                                  f"1-cell {cell.id} {tag} map")
            if cell.d0 is not None and cell.basepoint != cell.d0.cell:
                report.fail(f"1-cell {cell.id}: not normalized, d0 must carry the basepoint")
        for cell in self.dim_cells(2):
            self._validate_boundary_word(report, cell)
        for dim in sorted(self.by_dim):
            if dim < 3:
                continue
            lower = set(self.by_dim.get(dim - 1, []))
            for cid in self.by_dim[dim]:
                cell = self.cells[cid]
                for term in cell.boundary_row:
                    if term.cell not in lower:
                        report.fail(f"cell {cid}: row references {term.cell!r}, "
                                    f"not a {dim - 1}-cell")
        if not self.by_dim.get(0):
            report.fail("complex has no 0-cells")
        census = self.cell_census()
        for dim, counts in census.items():
            report.info[f"dim {dim}"] = dict(sorted(counts.items()))
        return report

    def _validate_boundary_word(self, report, cell):
        """A 2-cell word must be a composable loop at the cell's anchor."""
        fibre, base, basemap = cell.anchor()
        if base is None or base not in self.cells or self.cells[base].dim != 0:
            report.fail(f"2-cell {cell.id}: basepoint {base!r} is not a 0-cell")
            return
        self._check_fword(report, basemap, fibre, self.cells[base].fibre,
                          f"2-cell {cell.id} base map")
        start = self._point(fibre, base, basemap, ())
        state = start
        for item in cell.boundary_word:
            if item.kind == "track":
                edge = self.cells.get(item.edge)
                if edge is None or edge.dim != 1:
                    report.fail(f"2-cell {cell.id}: item references non-1-cell {item.edge!r}")
                    return
                self._check_fword(report, item.psi, fibre, edge.fibre,
                                  f"2-cell {cell.id} traversal of {item.edge}")
                ends = (edge.d0, edge.d1) if item.sign == 1 else (edge.d1, edge.d0)
                expect = self._point(fibre, ends[0].cell, ends[0].via, item.psi)
                if expect != state:
                    report.fail(f"2-cell {cell.id}: word breaks at {item.edge}: "
                                f"at {state}, segment starts at {expect}")
                    return
                state = self._point(fibre, ends[1].cell, ends[1].via, item.psi)
            else:
                report.fail(f"2-cell {cell.id}: whisker items change the fibre and "
                            f"cannot appear in a loop of F-points")
                return
        if state != start:
            report.fail(f"2-cell {cell.id}: boundary word is not a loop "
                        f"(ends at {state}, started at {start})")

    def _point(self, fibre, cell0, phi, psi):
        """Normalized (fibre, 0-cell, class of phi . psi)."""
        cat = self.category
        word = tuple(psi) + tuple(phi)
        if cat.has_word_problem():
            w = cat.word(word) if word else cat.identity(fibre)
            return (fibre, cell0, cat.normalize(w).factors)
        return (fibre, cell0, word)


# ---------------------------------------------------------------------------
# built-in generators


def point(fibre="pt", category=None):
    cat = category or trivial_category()
    x = FComplex(cat, name=f"point({fibre})")
    x.add_vertex("v", fibre)
    return x


def sphere(n):
    """Minimal CW sphere: S^1 as one loop, S^n (n>=2) as point plus n-cell."""
    cat = trivial_category()
    x = FComplex(cat, name=f"S{n}")
    x.add_vertex("v", "pt")
    if n == 0:
        x.add_vertex("w", "pt")
        return x
    if n == 1:
        x.add_edge("e", "pt", Attachment("v"), Attachment("v"))
        return x
    if n == 2:
        x.add_face("f", "pt", "v", [])
        return x
    x.add_higher_cell("f", n, "pt", "v", [])
    return x


def rp2():
    cat = trivial_category()
    x = FComplex(cat, name="RP2")
    x.add_vertex("v", "pt")
    x.add_edge("e", "pt", Attachment("v"), Attachment("v"))
    x.add_face("f", "pt", "v", [TrackItem("e"), TrackItem("e")])
    return x


def torus():
    cat = trivial_category()
    x = FComplex(cat, name="T2")
    x.add_vertex("v", "pt")
    x.add_edge("a", "pt", Attachment("v"), Attachment("v"))
    x.add_edge("b", "pt", Attachment("v"), Attachment("v"))
    x.add_face("f", "pt", "v", [TrackItem("a"), TrackItem("b"),
                                TrackItem("a", sign=-1), TrackItem("b", sign=-1)])
    return x


def klein_bottle():
    cat = trivial_category()
    x = FComplex(cat, name="Klein")
    x.add_vertex("v", "pt")
    x.add_edge("a", "pt", Attachment("v"), Attachment("v"))
    x.add_edge("b", "pt", Attachment("v"), Attachment("v"))
    x.add_face("f", "pt", "v", [TrackItem("a"), TrackItem("b"),
                                TrackItem("a"), TrackItem("b", sign=-1)])
    return x


def z2_point(fibre):
    """A single F-point over the Z/2 orbit category; fibre G/e or G/G."""
    cat = z2_orbit_category()
    x = FComplex(cat, name=f"z2-point({fibre})")
    x.add_vertex("v", fibre)
    return x


def z2_sphere(n, action="antipodal"):
    """Z/2-spheres as complexes over the orbit category of Z/2.

    antipodal: one free orbit cell per dimension 0..n (S^n with the free
    antipodal action); reflection (n = 1): two fixed 0-cells and one free
    1-cell (S^1 with a mirror action).
    """
    cat = z2_orbit_category()
    if action == "reflection":
        if n != 1:
            raise ValueError("reflection model implemented for n = 1 only")
        x = FComplex(cat, name="z2-reflection-S1")
        x.add_vertex("north", "G/G")
        x.add_vertex("south", "G/G")
        x.add_edge("arc", "G/e", Attachment("north", ("p",)),
                   Attachment("south", ("p",)))
        return x
    if action != "antipodal":
        raise ValueError(f"unknown action {action!r}")
    x = FComplex(cat, name=f"z2-antipodal-S{n}")
    x.add_vertex("v", "G/e")
    if n == 0:
        return x
    x.add_edge("e", "G/e", Attachment("v"), Attachment("v", ("t",)))
    if n == 1:
        return x
    x.add_face("f2", "G/e", "v", [TrackItem("e"), TrackItem("e", psi=("t",))])
    # in degree k >= 3 the stored row realizes d_k = 1 + (-1)^k * deck
    anchor_obj = names.pi_object_name("G/e", "v", ())
    deck = (names.track_name("e", ()), names.whisker_name("t", anchor_obj))
    for k in range(3, n + 1):
        below = f"f{k - 1}" if k > 3 else "f2"
        sign = 1 if k % 2 == 0 else -1
        x.add_higher_cell(f"f{k}", k, "G/e", "v",
                          [RowTerm(1, (), below), RowTerm(sign, deck, below)])
    return x


GENERATORS = {
    "sphere": sphere,
    "rp2": rp2,
    "torus": torus,
    "klein": klein_bottle,
    "z2-point": z2_point,
    "z2-sphere": z2_sphere,
}


def elementary_expansion(x, dim, base=None, extra_loop=(), tag=None):
    """Attach a canceling (dim, dim+1)-cell pair to a copy of ``x``.

    The new dim-cell z is trivially attached at a 0-cell; the new
    (dim+1)-cell crosses z exactly once, so the pair cancels and the
    inclusion of ``x`` is a simple equivalence.  For dim = 1 an optional
    ``extra_loop`` of existing TrackItems is appended to the boundary word
    after the z-crossing.
    """
    assert dim >= 1
    out = FComplex(x.category, name=f"{x.name}+exp{dim}", relative=x.relative)
    for d in sorted(x.by_dim):
        for cid in x.by_dim[d]:
            out.add_cell(x.cells[cid])
    if base is None:
        base = x.by_dim[0][0]
    fibre = x.cells[base].fibre
    tag = tag or f"x{len(x.cells)}"
    z_id, w_id = f"z{tag}", f"w{tag}"
    if dim == 1:
        out.add_edge(z_id, fibre, Attachment(base), Attachment(base))
        word = [TrackItem(z_id)] + list(extra_loop)
        out.add_face(w_id, fibre, base, word)
    elif dim == 2:
        out.add_face(z_id, fibre, base, [])
        out.add_higher_cell(w_id, 3, fibre, base, [RowTerm(1, (), z_id)])
    else:
        out.add_higher_cell(z_id, dim, fibre, base, [])
        out.add_higher_cell(w_id, dim + 1, fibre, base, [RowTerm(1, (), z_id)])
    return out, (z_id, w_id)
