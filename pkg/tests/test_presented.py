import pytest

from fibrehom import FiniteGroup, orbit_category, trivial_category, z2_orbit_category
from fibrehom.errors import CapExceeded, EndpointMismatch, UnknownGenerator
from fibrehom.presented import PresentedCategory
from fibrehom.words import compose

from oracles import cyclic_group_table, permutation_group_table


@pytest.fixture(scope="module")
def z2cat():
    return z2_orbit_category()


def test_compose_identity(z2cat):
    ide = z2cat.identity("G/e")
    assert z2cat.compose(ide, ide) == ide


def test_compose_deck_involution(z2cat):
    t = z2cat.gen_word("t")
    assert z2cat.compose(t, t) == z2cat.identity("G/e")


def test_compose_free_pair():
    cat = PresentedCategory(["A", "B"], {"f": ("A", "B"), "g": ("B", "A")})
    w = compose(cat.gen_word("g"), cat.gen_word("f"))
    assert (w.src, w.dst) == ("A", "A")
    assert len(w) == 2


def test_compose_endpoint_mismatch(z2cat):
    with pytest.raises(EndpointMismatch):
        compose(z2cat.gen_word("t"), z2cat.gen_word("p"))


def test_normalize_idempotent_and_classes(z2cat):
    w = z2cat.word(("t", "t", "t"))
    nf = z2cat.normalize(w)
    assert nf == z2cat.gen_word("t")
    assert z2cat.normalize(nf) == nf
    assert z2cat.normalize(z2cat.word(("t", "t"))) == z2cat.identity("G/e")


def test_normalize_free_category():
    cat = PresentedCategory(["A"], {"f": ("A", "A")})
    w = cat.word(("f", "f", "f"))
    assert cat.normalize(w) == w


def test_normalize_single_rule():
    cat = PresentedCategory(["A"], {"a": ("A", "A")},
                            relations=[(("a", "a"), ("a",))])
    assert cat.normalize(cat.word(("a", "a", "a"))) == cat.gen_word("a")


def test_equal(z2cat):
    assert z2cat.equal(z2cat.word(("t", "t")), z2cat.identity("G/e"))
    cat = PresentedCategory(["A"], {"f": ("A", "A"), "g": ("A", "A")})
    assert not cat.equal(cat.gen_word("f"), cat.gen_word("g"))
    assert cat.equal(cat.gen_word("f"), cat.gen_word("f"))
    with pytest.raises(EndpointMismatch):
        z2cat.equal(z2cat.gen_word("t"), z2cat.gen_word("p"))


def test_enumerate_homs(z2cat):
    assert [str(w) for w in z2cat.enumerate_homs("G/e", "G/e")] == ["id[G/e]", "t"]
    assert z2cat.enumerate_homs("G/G", "G/e") == []
    assert len(z2cat.enumerate_homs("G/e", "G/G")) == 1
    one = trivial_category()
    assert len(one.enumerate_homs("pt", "pt")) == 1


def test_enumerate_homs_infinite_caps():
    cat = PresentedCategory(["A"], {"f": ("A", "A")})
    with pytest.raises(CapExceeded):
        cat.enumerate_homs("A", "A", cap=10, max_len=12)


def test_enumeration_closed_under_normalize(z2cat):
    for a in z2cat.objects:
        for b in z2cat.objects:
            words = z2cat.enumerate_homs(a, b)
            assert len({z2cat.normalize(w).key() for w in words}) == len(words)
            for w in words:
                assert z2cat.normalize(w) == w


def test_validate_z2(z2cat):
    report = z2cat.validate()
    assert report.ok, str(report)


def test_validate_bad_generator():
    cat = PresentedCategory(["A"], {"f": ("A", "Nowhere")})
    report = cat.validate()
    assert not report.ok
    assert any("f" in issue for issue in report.issues)


def test_validate_bad_relation_endpoints():
    cat = PresentedCategory(["A", "B", "C"],
                            {"f": ("A", "B"), "g": ("A", "C")})
    with pytest.raises(EndpointMismatch):
        cat._pair((cat.gen_word("f"), cat.gen_word("g")))


def test_unknown_generator():
    cat = trivial_category()
    with pytest.raises(UnknownGenerator):
        cat.word(("mystery",))


@pytest.mark.parametrize("table_maker,order", [
    (lambda: cyclic_group_table(2), 2),
    (lambda: cyclic_group_table(3), 3),
    (lambda: cyclic_group_table(4), 4),
    (lambda: permutation_group_table(3), 6),
])
def test_orbit_category_free_orbit_hom_count(table_maker, order):
    """hom(G/e, G/e) in the orbit category has exactly |G| classes."""
    elements, mult, identity = table_maker()
    names = {e: f"x{i}" for i, e in enumerate(elements)}
    names[identity] = "e"
    group = FiniteGroup([names[e] for e in elements],
                        {(names[a], names[b]): names[mult[(a, b)]]
                         for a in elements for b in elements})
    cat = orbit_category(group, [frozenset({"e"})])
    assert len(cat.enumerate_homs("G/e", "G/e")) == order
    # brute-force cross-check: equivariant self-maps of the free orbit are
    # the right translations, one per group element
    equivariant = 0
    for g in elements:
        if all(mult[(mult[(h, k)], g)] == mult[(h, mult[(k, g)])]
               for h in elements for k in elements):
            equivariant += 1
    assert equivariant == order


def test_orbit_category_full_z2_tables():
    group = FiniteGroup.cyclic(2)
    cat = orbit_category(group, [frozenset({"e"}), frozenset({"e", "g1"})])
    report = cat.validate()
    assert report.ok, str(report)
    assert len(cat.enumerate_homs("G/e", "G/e")) == 2
    assert len(cat.enumerate_homs("G/e", "G/e+g1")) == 1
    assert len(cat.enumerate_homs("G/e+g1", "G/e")) == 0
    assert len(cat.enumerate_homs("G/e+g1", "G/e+g1")) == 1


def test_orbit_category_s3_subgroup_chain():
    elements, mult, identity = permutation_group_table(3)
    names = {e: "".join(str(i) for i in e) for e in elements}
    group = FiniteGroup([names[e] for e in elements],
                        {(names[a], names[b]): names[mult[(a, b)]]
                         for a in elements for b in elements})
    full = frozenset(names[e] for e in elements)
    trivial = frozenset({names[identity]})
    swap = frozenset({names[identity], names[(1, 0, 2)]})
    cat = orbit_category(group, [trivial, swap, full])
    report = cat.validate()
    assert report.ok, str(report)
    # |hom(G/e, G/H)| = [G : H] and |hom(G/e, G/e)| = |G|
    assert len(cat.enumerate_homs("G/" + "+".join(sorted(trivial)),
                                  "G/" + "+".join(sorted(trivial)))) == 6


def test_compose_associative_up_to_equal(z2cat):
    words = [z2cat.gen_word("t"), z2cat.identity("G/e"), z2cat.word(("t", "t"))]
    for f in words:
        for g in words:
            for h in words:
                lhs = z2cat.compose(z2cat.compose(f, g), h)
                rhs = z2cat.compose(f, z2cat.compose(g, h))
                assert z2cat.equal(lhs, rhs)
