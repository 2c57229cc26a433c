import os
import subprocess
import sys

import pytest

from fibrehom import (FiniteGroup, build_pi, constant_module, orbit_category,
                      rp2, sphere, torus, z2_sphere)
from fibrehom import fileio
from fibrehom.errors import ParseError


def roundtrip_complex(x):
    text = fileio.write_complex(x)
    back = fileio.parse_complex(text)
    assert back.name == x.name
    assert back.cells.keys() == x.cells.keys()
    for cid, cell in x.cells.items():
        other = back.cells[cid]
        assert (cell.dim, cell.fibre, cell.basepoint) == \
            (other.dim, other.fibre, other.basepoint)
        if cell.dim == 1:
            assert cell.d0 == other.d0 and cell.d1 == other.d1
        if cell.dim == 2:
            got = [(i.edge, i.psi, i.sign) for i in other.boundary_word]
            want = [(i.edge, i.psi, i.sign) for i in cell.boundary_word]
            assert got == want
        if cell.dim >= 3:
            got = [(t.coeff, t.word, t.cell) for t in other.boundary_row]
            want = [(t.coeff, t.word, t.cell) for t in cell.boundary_row]
            assert got == want
    assert fileio.write_complex(back) == text


def test_complex_roundtrip_corpus():
    for x in (sphere(1), sphere(2), sphere(3), torus(), rp2(),
              z2_sphere(2), z2_sphere(3), z2_sphere(1, "reflection")):
        roundtrip_complex(x)


def test_category_roundtrip_with_tables():
    group = FiniteGroup.cyclic(2)
    cat = orbit_category(group, [frozenset({"e"}), frozenset({"e", "g1"})])
    text = fileio.write_category(cat)
    back = fileio.parse_category(text)
    assert back.objects == cat.objects
    assert back.generators == cat.generators
    assert back.validate().ok
    assert fileio.write_category(back) == text
    assert len(back.enumerate_homs("G/e", "G/e")) == 2


def test_pi_dump_roundtrip():
    pi = build_pi(rp2())
    text = fileio.write_category(pi.presented)
    back = fileio.parse_category(text)
    assert back.objects == pi.presented.objects
    assert back.generators == pi.presented.generators
    rels = [(a.key(), b.key()) for a, b in back.relations]
    rels0 = [(a.key(), b.key()) for a, b in pi.presented.relations]
    assert rels == rels0


def test_module_roundtrip():
    pi = build_pi(rp2())
    m = constant_module(pi, "left", modulus=4)
    text = fileio.write_module(m)
    back = fileio.parse_module(text, pi)
    assert back.variance == "left"
    assert back.values.keys() == m.values.keys()
    assert fileio.write_module(back) == text


def test_parse_errors():
    with pytest.raises(ParseError):
        fileio.parse_complex("not a complex\n")
    with pytest.raises(ParseError):
        fileio.parse_category("fibcat 1\nobject A\ngen broken\n")
    with pytest.raises(ParseError):
        fileio.parse_complex("fibcomplex 1\nname X\n")   # no category


# ---------------------------------------------------------------------------
# CLI, through real subprocesses


def run_cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "fibrehom.cli"] + args,
                          capture_output=True, text=True, cwd=str(cwd))


@pytest.fixture()
def workdir(tmp_path):
    for name, args in (("rp2", ["rp2"]), ("s2", ["sphere", "2"]),
                       ("as2", ["z2-sphere", "2", "antipodal"])):
        out = run_cli(["gen"] + args, tmp_path)
        assert out.returncode == 0, out.stderr
        (tmp_path / f"{name}.fcpx").write_text(out.stdout)
    return tmp_path


def test_cli_gen_validates(workdir):
    out = run_cli(["validate", "rp2.fcpx"], workdir)
    assert out.returncode == 0, out.stderr
    assert "ok" in out.stdout


def test_cli_gen_roundtrip(workdir):
    text = (workdir / "rp2.fcpx").read_text()
    x = fileio.parse_complex(text)
    assert fileio.write_complex(x) == text


def test_cli_homology_table(workdir):
    out = run_cli(["homology", "rp2.fcpx", "--coeff", "Z"], workdir)
    assert out.returncode == 0, out.stderr
    assert "H_0 = Z" in out.stdout
    assert "H_1 = C2" in out.stdout
    assert "H_2 = 0" in out.stdout


def test_cli_sign_and_records(workdir):
    out = run_cli(["homology", "rp2.fcpx", "--coeff", "sign:e=-1",
                   "--format", "records"], workdir)
    assert out.returncode == 0
    import json
    record = json.loads(out.stdout)
    assert record["groups"]["0"] == {"rank": 0, "torsion": [2]}
    assert record["groups"]["2"] == {"rank": 1, "torsion": []}


def test_cli_euler(workdir):
    out = run_cli(["euler", "s2.fcpx", "--coeff", "Z"], workdir)
    assert out.returncode == 0
    assert "chi_chain = 2" in out.stdout
    assert "chi_homology = 2" in out.stdout


def test_cli_bredon(workdir):
    out = run_cli(["homology", "as2.fcpx", "--coeff", "freeF:G/e"], workdir)
    assert out.returncode == 0, out.stderr
    assert "H_1 = 0" in out.stdout
    assert "H_2 = Z" in out.stdout


def test_cli_total_homology(workdir):
    out = run_cli(["total-homology", "rp2.fcpx"], workdir)
    assert out.returncode == 0
    assert "H_0=Z" in out.stdout and "H_2=Z" in out.stdout


def test_cli_exit_codes(workdir):
    bad = workdir / "bad.fcpx"
    bad.write_text("fibcomplex 1\nname B\ncategory builtin:trivial\n"
                   "cell e : dim 1 fibre pt d0 v d1 v\n")
    out = run_cli(["validate", "bad.fcpx"], workdir)
    assert out.returncode == 1
    out = run_cli(["homology", "missing.fcpx", "--coeff", "Z"], workdir)
    assert out.returncode == 3
    garbled = workdir / "garbled.fcpx"
    garbled.write_text("what even is this\n")
    out = run_cli(["validate", "garbled.fcpx"], workdir)
    assert out.returncode == 3
    # undecidable: total homology of the circle
    s1 = run_cli(["gen", "sphere", "1"], workdir)
    (workdir / "s1.fcpx").write_text(s1.stdout)
    out = run_cli(["total-homology", "s1.fcpx", "--hom-cap", "24"], workdir)
    assert out.returncode == 2


def test_cli_whitehead_and_torsion(workdir):
    mapfile = workdir / "idmap.fmap"
    mapfile.write_text(
        "fibmap 1\nname idmap\nsource rp2.fcpx\ntarget rp2.fcpx\n"
        "cell v -> 1*id*[v]\ncell e -> 1*id*[e]\ncell f -> 1*id*[f]\n")
    out = run_cli(["whitehead-check", "--map", "idmap.fmap"], workdir)
    assert out.returncode == 0, out.stderr
    assert "chain_equivalence = True" in out.stdout
    out = run_cli(["torsion", "--map", "idmap.fmap", "--trivialize"], workdir)
    assert out.returncode == 0, out.stderr
    assert "decided = trivial" in out.stdout


def test_cli_finiteness(workdir):
    domfile = workdir / "dom.fdom"
    domfile.write_text(
        "fibdom 1\ndominated rp2.fcpx\ndominating rp2.fcpx\n"
        "f cell v -> 1*id*[v]\nf cell e -> 1*id*[e]\nf cell f -> 1*id*[f]\n"
        "g cell v -> 1*id*[v]\ng cell e -> 1*id*[e]\ng cell f -> 1*id*[f]\n")
    out = run_cli(["finiteness", "--dom", "dom.fdom"], workdir)
    assert out.returncode == 0, out.stderr
    assert "decided = trivial" in out.stdout


def test_cli_orbit_category(workdir):
    gfile = workdir / "z2.fgrp"
    gfile.write_text("fibgroup 1\nelements e g\nmult e e = e\nmult e g = g\n"
                     "mult g e = g\nmult g g = e\n")
    out = run_cli(["orbit-category", "z2.fgrp", "e", "e,g"], workdir)
    assert out.returncode == 0, out.stderr
    cat = fileio.parse_category(out.stdout)
    assert cat.validate().ok
    assert len(cat.enumerate_homs("G/e", "G/e")) == 2


def test_cli_determinism(workdir):
    jobs = [
        ["gen", "rp2"],
        ["gen", "z2-sphere", "3", "antipodal"],
        ["homology", "rp2.fcpx", "--coeff", "Z", "--format", "records"],
        ["cohomology", "rp2.fcpx", "--coeff", "Z", "--format", "records"],
        ["homology", "as2.fcpx", "--coeff", "freeF:G/e", "--format", "records"],
        ["pi", "rp2.fcpx"],
        ["chains", "as2.fcpx"],
        ["euler", "s2.fcpx", "--coeff", "Z"],
        ["total-homology", "rp2.fcpx", "--format", "records"],
    ]
    for job in jobs:
        first = run_cli(job, workdir)
        second = run_cli(job, workdir)
        assert first.returncode == second.returncode == 0, (job, first.stderr)
        assert first.stdout == second.stdout, job
