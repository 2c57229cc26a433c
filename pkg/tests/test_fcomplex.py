import pytest

from fibrehom import (Attachment, FComplex, TrackItem, elementary_expansion,
                      klein_bottle, rp2, sphere, torus, trivial_category,
                      z2_orbit_category, z2_point, z2_sphere)


def circle():
    return sphere(1)


def test_validate_circle():
    x = circle()
    report = x.validate_complex()
    assert report.ok
    assert x.cell_census() == {0: {"pt": 1}, 1: {"pt": 1}}


def test_validate_not_normalized():
    cat = trivial_category()
    x = FComplex(cat, name="bad")
    x.add_vertex("a", "pt")
    x.add_vertex("b", "pt")
    edge = x.add_edge("e", "pt", Attachment("a"), Attachment("b"))
    edge.basepoint = "b"   # d0 attachment no longer carries the basepoint
    report = x.validate_complex()
    assert not report.ok
    assert any("normalized" in issue for issue in report.issues)


def test_validate_antipodal_circle():
    x = z2_sphere(1)
    report = x.validate_complex()
    assert report.ok, str(report)
    assert x.cell_census() == {0: {"G/e": 1}, 1: {"G/e": 1}}


def test_validate_broken_boundary_word():
    cat = z2_orbit_category()
    x = FComplex(cat, name="broken")
    x.add_vertex("v", "G/e")
    x.add_edge("e", "G/e", Attachment("v"), Attachment("v", ("t",)))
    # traversing e twice without the deck twist does not close up
    x.add_face("f", "G/e", "v", [TrackItem("e"), TrackItem("e")])
    report = x.validate_complex()
    assert not report.ok


def test_validate_bad_fibre_word():
    cat = z2_orbit_category()
    x = FComplex(cat, name="badvia")
    x.add_vertex("v", "G/G")
    x.add_edge("e", "G/e", Attachment("v", ("t",)), Attachment("v", ("p",)))
    report = x.validate_complex()
    assert not report.ok   # t ends at G/e, not at the fibre of v


def test_skeleton():
    x = sphere(2)
    sk1 = x.skeleton(1)
    assert sorted(sk1.by_dim) == [0]
    assert x.skeleton(x.max_dim).cells.keys() == x.cells.keys()
    r = rp2()
    sk = r.skeleton(1)
    assert sorted(sk.by_dim) == [0, 1]
    assert sk.validate_complex().ok


def test_skeleton_composition_law():
    x = z2_sphere(3)
    for m in range(4):
        for n in range(4):
            a = x.skeleton(m).skeleton(n)
            b = x.skeleton(min(m, n))
            assert a.cells.keys() == b.cells.keys()


def test_census_rp2():
    assert rp2().cell_census() == {0: {"pt": 1}, 1: {"pt": 1}, 2: {"pt": 1}}


def test_census_reflection():
    x = z2_sphere(1, "reflection")
    assert x.cell_census() == {0: {"G/G": 2}, 1: {"G/e": 1}}


def test_generators_validate():
    builders = [sphere(1), sphere(2), sphere(3), torus(), rp2(), klein_bottle(),
                z2_point("G/e"), z2_point("G/G"), z2_sphere(1), z2_sphere(2),
                z2_sphere(3), z2_sphere(1, "reflection")]
    for x in builders:
        report = x.validate_complex()
        assert report.ok, f"{x.name}: {report}"


def test_boundary_words_are_loops():
    for x in (rp2(), torus(), klein_bottle(), z2_sphere(2)):
        report = x.validate_complex()
        assert report.ok
        for cell in x.dim_cells(2):
            fibre, base, phi = cell.anchor()
            assert base in x.by_dim[0]


def test_elementary_expansion_validates():
    import random
    rng = random.Random(11)
    for base in (rp2(), torus(), sphere(2)):
        for dim in (1, 2, 3):
            x, (z, w) = elementary_expansion(base, dim, tag=f"t{dim}")
            assert x.validate_complex().ok, f"{base.name} dim {dim}"
            assert z in x.cells and w in x.cells
            assert x.cells[w].dim == dim + 1
