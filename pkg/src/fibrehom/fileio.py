"""Line-oriented file formats with versioned headers.

Words in files are dot-joined generator names in application order (the
leftmost factor acts first); ``id`` denotes an identity.  F-words inside a
boundary item or a generated name are comma-joined because the dot is the
word separator.

Formats: ``fibcat`` (category), ``fibcomplex`` (complex), ``fibmodule``
(coefficient system), ``fibmap`` (cellular chain map), ``fibdom``
(domination), ``fibgroup`` (finite group table), ``fibchain`` (chain
complex dump).  Writers emit canonical, deterministic text so generated
files diff cleanly and round-trip to equal structures.
"""

from __future__ import annotations

import os

from .catmodule import AbPres, CatModule
from .errors import ParseError
from .fcomplex import Attachment, FComplex, RowTerm, TrackItem
from .presented import FiniteGroup, HomTables, PresentedCategory, trivial_category, \
    z2_orbit_category
from .words import MorphismWord


def _strip_lines(text):
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def _word_factors(text):
    if text == "id":
        return ()
    return tuple(text.split("."))


def _word_text(factors):
    return ".".join(factors) if factors else "id"


def sniff_format(text):
    lines = _strip_lines(text)
    if not lines:
        raise ParseError("empty file")
    head = lines[0][1].split()
    return head[0]


# ---------------------------------------------------------------------------
# category files


def parse_category(text, path=None, name=None):
    lines = _strip_lines(text)
    if not lines or not lines[0][1].startswith("fibcat"):
        raise ParseError("missing fibcat header", path=path)
    objects = []
    gens = {}
    rels = []
    tracks = []
    table_lines = []
    in_table = False
    for lineno, line in lines[1:]:
        parts = line.split()
        try:
            if in_table:
                if line == "homtable end":
                    in_table = False
                else:
                    table_lines.append((lineno, line))
            elif line == "homtable begin":
                in_table = True
            elif parts[0] == "object":
                objects.append(parts[1])
            elif parts[0] == "gen":
                # gen name : src -> dst
                assert parts[2] == ":" and parts[4] == "->"
                gens[parts[1]] = (parts[3], parts[5])
            elif parts[0] in ("rel", "track"):
                body = line[len(parts[0]):].strip()
                at = None
                if " : " in body:
                    body, at = body.rsplit(" : ", 1)
                    at = at.strip()
                lhs_text, rhs_text = [s.strip() for s in body.split("=")]
                (rels if parts[0] == "rel" else tracks).append(
                    (_word_factors(lhs_text), _word_factors(rhs_text), at))
            else:
                raise ParseError(f"unknown directive {parts[0]!r}",
                                 path=path, line=lineno)
        except (IndexError, AssertionError):
            raise ParseError(f"malformed line: {line}", path=path, line=lineno)
    cat = PresentedCategory(objects, gens, name=name or (path or "category"))
    for lhs, rhs, at in rels:
        cat.relations.append(_build_pair(cat, lhs, rhs, at, path))
    for lhs, rhs, at in tracks:
        cat.tracks.append(_build_pair(cat, lhs, rhs, at, path))
    if table_lines:
        cat.hom_tables = _parse_homtable(cat, table_lines, path)
    return cat


def _build_pair(cat, lhs, rhs, at, path):
    try:
        w1 = cat.word(lhs, at=at) if (lhs or at) else None
        w2 = cat.word(rhs, at=at or (w1.src if w1 is not None else None))
        if w1 is None:
            w1 = cat.identity(w2.src)
        return cat._pair((w1, w2))
    except Exception as exc:
        raise ParseError(f"bad relation {_word_text(lhs)} = {_word_text(rhs)}: {exc}",
                         path=path)


def _parse_homtable(cat, table_lines, path):
    tables = HomTables()
    for lineno, line in table_lines:
        parts = line.split()
        try:
            if parts[0] == "elem":
                # elem name : src -> dst rep word
                assert parts[2] == ":" and parts[4] == "->" and parts[6] == "rep"
                name, src, dst = parts[1], parts[3], parts[5]
                factors = _word_factors(parts[7])
                tables.add_elem(name, src, dst)
                word = cat.word(factors, at=src) if not factors else cat.word(factors)
                tables.rep_word[name] = word
                if not factors and src == dst:
                    tables.identity_elem[src] = name
            elif parts[0] == "comp":
                # comp inner outer = result   (inner acts first)
                assert parts[3] == "="
                tables.comp[(parts[2], parts[1])] = parts[4]
            elif parts[0] == "genmap":
                assert parts[2] == "="
                tables.gen_elem[parts[1]] = parts[3]
            else:
                raise AssertionError
        except (IndexError, AssertionError):
            raise ParseError(f"malformed homtable line: {line}", path=path,
                             line=lineno)
    return tables


def write_category(cat):
    lines = ["fibcat 1"]
    for obj in cat.objects:
        lines.append(f"object {obj}")
    for gen, (src, dst) in cat.generators.items():
        lines.append(f"gen {gen} : {src} -> {dst}")
    for tag, pairs in (("rel", cat.relations), ("track", cat.tracks)):
        for w1, w2 in pairs:
            at = f" : {w1.src}" if (not w1.factors or not w2.factors) else ""
            lines.append(f"{tag} {_word_text(w1.factors)} = "
                         f"{_word_text(w2.factors)}{at}")
    if cat.hom_tables is not None:
        t = cat.hom_tables
        lines.append("homtable begin")
        for name in sorted(t.endpoints):
            src, dst = t.endpoints[name]
            rep = _word_text(t.rep_word[name].factors)
            lines.append(f"elem {name} : {src} -> {dst} rep {rep}")
        for (outer, inner), result in sorted(t.comp.items()):
            lines.append(f"comp {inner} {outer} = {result}")
        for gen, elem in sorted(t.gen_elem.items()):
            lines.append(f"genmap {gen} = {elem}")
        lines.append("homtable end")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# complex files


BUILTIN_CATEGORIES = {
    "builtin:trivial": trivial_category,
    "builtin:z2-orbit": z2_orbit_category,
}


def resolve_category(ref, base_dir=None):
    if ref in BUILTIN_CATEGORIES:
        return BUILTIN_CATEGORIES[ref]()
    path = ref if os.path.isabs(ref) or base_dir is None \
        else os.path.join(base_dir, ref)
    with open(path, "r", encoding="utf-8") as fh:
        return parse_category(fh.read(), path=path)


def _parse_boundary_item(token):
    sign = 1
    if token.endswith("^-1"):
        sign = -1
        token = token[:-3]
    psi = ()
    if token.endswith("}") and "{" in token:
        token, psi_text = token[:-1].split("{", 1)
        psi = _word_factors(psi_text)
    return TrackItem(token, psi=psi, sign=sign)


def _boundary_item_text(item):
    text = item.edge
    if item.psi:
        text += "{" + ".".join(item.psi) + "}"
    if item.sign < 0:
        text += "^-1"
    return text


def _parse_row(text, lineno=None, path=None):
    terms = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk or chunk == "0":
            continue
        try:
            coeff_text, word_text, cell_text = chunk.split("*")
            assert cell_text.startswith("[") and cell_text.endswith("]")
            terms.append(RowTerm(int(coeff_text), _word_factors(word_text),
                                 cell_text[1:-1]))
        except (ValueError, AssertionError):
            raise ParseError(f"malformed row term {chunk!r}", path=path,
                             line=lineno)
    return terms


def _row_text(row):
    if not row:
        return "0"
    return " + ".join(f"{t.coeff}*{_word_text(t.word)}*[{t.cell}]" for t in row)


def parse_complex(text, path=None, category=None):
    lines = _strip_lines(text)
    if not lines or not lines[0][1].startswith("fibcomplex"):
        raise ParseError("missing fibcomplex header", path=path)
    base_dir = os.path.dirname(path) if path else None
    name = "X"
    relative = False
    cat = category
    cells = []
    for lineno, line in lines[1:]:
        parts = line.split()
        try:
            if parts[0] == "name":
                name = parts[1]
            elif parts[0] == "category":
                if cat is None:
                    cat = resolve_category(parts[1], base_dir)
            elif parts[0] == "relative":
                relative = parts[1] not in ("0", "false", "no")
            elif parts[0] == "cell":
                cells.append((lineno, line))
            else:
                raise AssertionError
        except (IndexError, AssertionError):
            raise ParseError(f"malformed line: {line}", path=path, line=lineno)
    if cat is None:
        raise ParseError("complex file declares no category", path=path)
    x = FComplex(cat, name=name, relative=relative)
    for lineno, line in cells:
        _parse_cell(x, line, lineno, path)
    return x


def _parse_cell(x, line, lineno, path):
    parts = line.split()
    try:
        cell_id = parts[1]
        assert parts[2] == ":" and parts[3] == "dim" and parts[5] == "fibre"
        dim = int(parts[4])
        fibre = parts[6]
        rest = parts[7:]
        if dim == 0:
            x.add_vertex(cell_id, fibre)
            return
        fields = {}
        i = 0
        while i < len(rest):
            key = rest[i]
            if key in ("d0", "d1"):
                cell0 = rest[i + 1]
                via = ()
                consumed = 2
                if i + 2 < len(rest) and rest[i + 2] == "via":
                    via = _word_factors(rest[i + 3])
                    consumed = 4
                fields[key] = Attachment(cell0, via)
                i += consumed
            elif key == "base":
                fields["base"] = rest[i + 1]
                consumed = 2
                if i + 2 < len(rest) and rest[i + 2] == "via":
                    fields["basemap"] = _word_factors(rest[i + 3])
                    consumed = 4
                i += consumed
            elif key == "word":
                fields["word"] = [_parse_boundary_item(tok) for tok in rest[i + 1:]]
                i = len(rest)
            elif key == "row":
                fields["row"] = _parse_row(" ".join(rest[i + 1:]), lineno, path)
                i = len(rest)
            else:
                raise AssertionError(f"unknown field {key}")
            continue
        if dim == 1:
            x.add_edge(cell_id, fibre, fields["d0"], fields["d1"])
        elif dim == 2:
            x.add_face(cell_id, fibre, fields["base"],
                       fields.get("word", []), basemap=fields.get("basemap", ()))
        else:
            x.add_higher_cell(cell_id, dim, fibre, fields["base"],
                              fields.get("row", []),
                              basemap=fields.get("basemap", ()))
    except (IndexError, KeyError, AssertionError, ValueError) as exc:
        raise ParseError(f"malformed cell line ({exc}): {line}", path=path,
                         line=lineno)


def builtin_category_ref(cat):
    if cat.name == "trivial":
        return "builtin:trivial"
    if cat.name == "orbits(Z2)":
        return "builtin:z2-orbit"
    return None


def write_complex(x, category_ref=None):
    ref = category_ref or builtin_category_ref(x.category)
    if ref is None:
        raise ValueError("complex writer needs a category reference")
    lines = ["fibcomplex 1", f"name {x.name}", f"category {ref}",
             f"relative {1 if x.relative else 0}"]
    for dim in sorted(x.by_dim):
        for cid in x.by_dim[dim]:
            cell = x.cells[cid]
            head = f"cell {cid} : dim {dim} fibre {cell.fibre}"
            if dim == 0:
                lines.append(head)
            elif dim == 1:
                def att(a):
                    out = f"{a.cell}"
                    if a.via:
                        out += " via " + ".".join(a.via)
                    return out
                lines.append(f"{head} d0 {att(cell.d0)} d1 {att(cell.d1)}")
            else:
                base = f"base {cell.basepoint}"
                if cell.basemap:
                    base += " via " + ".".join(cell.basemap)
                if dim == 2:
                    word = " ".join(_boundary_item_text(i) for i in cell.boundary_word)
                    lines.append(f"{head} {base} word {word}".rstrip())
                else:
                    lines.append(f"{head} {base} row {_row_text(cell.boundary_row)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# module files


def _parse_matrix(text):
    if text in ("", "empty"):
        return []
    return [[int(x) for x in row.split(",")] for row in text.split(";")]


def _matrix_text(mat):
    if not mat:
        return "empty"
    return ";".join(",".join(str(x) for x in row) for row in mat)


def parse_module(text, base, path=None):
    """Parse a coefficient system over an already-built base category."""
    lines = _strip_lines(text)
    if not lines or not lines[0][1].startswith("fibmodule"):
        raise ParseError("missing fibmodule header", path=path)
    name = path or "module"
    variance = None
    values = {}
    actions = {}
    for lineno, line in lines[1:]:
        parts = line.split()
        try:
            if parts[0] == "name":
                name = parts[1]
            elif parts[0] == "variance":
                assert parts[1] in ("left", "right")
                variance = parts[1]
            elif parts[0] == "value":
                # value obj rank k [rels v1;v2]
                assert parts[2] == "rank"
                rank = int(parts[3])
                rels = []
                if len(parts) > 4:
                    assert parts[4] == "rels"
                    rels = _parse_matrix(parts[5])
                values[parts[1]] = AbPres(rank, rels)
            elif parts[0] == "act":
                assert parts[2] == "matrix"
                actions[parts[1]] = _parse_matrix(parts[3])
            else:
                raise AssertionError
        except (IndexError, AssertionError, ValueError):
            raise ParseError(f"malformed line: {line}", path=path, line=lineno)
    if variance is None:
        raise ParseError("module file declares no variance", path=path)
    module = CatModule(base, variance, values, actions, name=name)
    issues = module.check_structure()
    if issues:
        raise ParseError("module inconsistent: " + "; ".join(issues), path=path)
    return module


def write_module(module):
    lines = ["fibmodule 1", f"name {module.name}", f"variance {module.variance}"]
    for obj in sorted(module.values):
        pres = module.values[obj]
        line = f"value {obj} rank {pres.rank}"
        if pres.rels:
            line += f" rels {_matrix_text(pres.rels)}"
        lines.append(line)
    for gen in sorted(module.actions):
        lines.append(f"act {gen} matrix {_matrix_text(module.actions[gen])}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# map and domination files


def parse_map_file(text, path=None):
    """Returns a dict of raw fields; complexes are loaded by the caller."""
    lines = _strip_lines(text)
    if not lines or not lines[0][1].startswith("fibmap"):
        raise ParseError("missing fibmap header", path=path)
    out = {"name": "f", "source": None, "target": None,
           "objects": {}, "gens": {}, "cells": {}}
    for lineno, line in lines[1:]:
        parts = line.split()
        try:
            if parts[0] == "name":
                out["name"] = parts[1]
            elif parts[0] in ("source", "target"):
                out[parts[0]] = parts[1]
            elif parts[0] == "object":
                assert parts[2] == "->"
                out["objects"][parts[1]] = parts[3]
            elif parts[0] == "gen":
                assert parts[2] == "->"
                out["gens"][parts[1]] = _word_factors(parts[3])
            elif parts[0] == "cell":
                assert parts[2] == "->"
                out["cells"][parts[1]] = _parse_row(
                    line.split("->", 1)[1].strip(), lineno, path)
            else:
                raise AssertionError
        except (IndexError, AssertionError):
            raise ParseError(f"malformed line: {line}", path=path, line=lineno)
    return out


def parse_domination_file(text, path=None):
    lines = _strip_lines(text)
    if not lines or not lines[0][1].startswith("fibdom"):
        raise ParseError("missing fibdom header", path=path)
    out = {"dominated": None, "dominating": None,
           "f": {}, "g": {}, "H": {}}
    for lineno, line in lines[1:]:
        parts = line.split()
        try:
            if parts[0] in ("dominated", "dominating"):
                out[parts[0]] = parts[1]
            elif parts[0] in ("f", "g", "H") and parts[1] == "cell":
                assert parts[3] == "->"
                out[parts[0]][parts[2]] = _parse_row(
                    line.split("->", 1)[1].strip(), lineno, path)
            else:
                raise AssertionError
        except (IndexError, AssertionError):
            raise ParseError(f"malformed line: {line}", path=path, line=lineno)
    return out


# ---------------------------------------------------------------------------
# finite groups


def parse_group(text, path=None):
    lines = _strip_lines(text)
    if not lines or not lines[0][1].startswith("fibgroup"):
        raise ParseError("missing fibgroup header", path=path)
    elements = []
    mult = {}
    for lineno, line in lines[1:]:
        parts = line.split()
        try:
            if parts[0] == "elements":
                elements = parts[1:]
            elif parts[0] == "mult":
                assert parts[3] == "="
                mult[(parts[1], parts[2])] = parts[4]
            else:
                raise AssertionError
        except (IndexError, AssertionError):
            raise ParseError(f"malformed line: {line}", path=path, line=lineno)
    try:
        return FiniteGroup(elements, mult, name=path or "G")
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad group table: {exc}", path=path)


# ---------------------------------------------------------------------------
# chain complex dump


def write_chain_complex(c):
    lines = ["fibchain 1", f"name {c.name}"]
    for n in c.degrees:
        for tag, obj in c.basis(n):
            lines.append(f"degree {n} cell {tag} anchor {obj}")
    for n in c.degrees:
        if n - 1 not in c.bases:
            continue
        d = c.d(n)
        for (i, j) in sorted(d.entries):
            entry = d.entries[(i, j)]
            terms = " + ".join(f"{coeff}*{_word_text(w.factors)}"
                               for w, coeff in entry.items())
            lines.append(f"d {n} [{d.row_basis[i][0]}][{d.col_basis[j][0]}] = {terms}")
    return "\n".join(lines) + "\n"
