import random

import pytest

from fibrehom import (Domination, FreeChainComplex, ZPiMatrix, build_pi,
                      check_torsion_algebra, constant_module,
                      find_chain_contraction, finiteness_obstruction,
                      identity_chain_map, mapping_cone, reduce_trivial_pi,
                      rp2, sphere, torsion_of_contractible,
                      torsion_of_equivalence, trivial_pi)
from fibrehom.chains import trivialize_complex
from fibrehom.errors import ContractionInvalid, NotADomination, NotContractible
from fibrehom.ktheory import _int_chain_map, _int_complex, verify_contraction
from fibrehom.words import FormalSum
import fibrehom.intlinalg as la


@pytest.fixture(scope="module")
def tpi():
    return trivial_pi()


def elementary_pair_complex(tpi):
    """0 -> Z -> Z -> 0 with the identity differential."""
    return _int_complex(tpi, [1, 1], {1: [[1]]}, "pair")


def test_contraction_identity_pair(tpi):
    c = elementary_pair_complex(tpi)
    s = find_chain_contraction(c)
    assert s[0].entry(0, 0).coefficient_total() == 1
    verify_contraction(c, s)


def test_contraction_cone_of_identity(corpus):
    for name in ("RP2", "S2"):
        _x, _pi, c = corpus[name]
        cone = mapping_cone(identity_chain_map(c))
        s = find_chain_contraction(cone)
        verify_contraction(cone, s)


def test_contraction_obstruction(tpi):
    c = _int_complex(tpi, [1, 0, 1], {}, "S2-like")
    with pytest.raises(NotContractible) as err:
        find_chain_contraction(c)
    assert err.value.group is not None


def test_torsion_of_contractible_identity_pair(tpi):
    c = elementary_pair_complex(tpi)
    s = find_chain_contraction(c)
    rep = torsion_of_contractible(c, s)
    assert rep.verify()
    out = reduce_trivial_pi(rep)
    assert out["decided"] == "trivial"
    assert abs(out["witness_det"]) == 1


def test_torsion_of_contractible_sign(tpi):
    c = _int_complex(tpi, [1, 1], {1: [[-1]]}, "minus")
    s = find_chain_contraction(c)
    rep = torsion_of_contractible(c, s)
    decided = reduce_trivial_pi(rep)
    assert decided["decided"] == "trivial"
    assert decided["witness_det"] in (1, -1)


def test_torsion_rejects_bad_contraction(tpi):
    c = elementary_pair_complex(tpi)
    bad = {0: ZPiMatrix(c.basis(1), c.basis(0))}   # zero map is not a contraction
    with pytest.raises(ContractionInvalid):
        torsion_of_contractible(c, bad)


def test_torsion_of_identity_everywhere(corpus):
    for name, (_x, _pi, c) in corpus.items():
        ct = trivialize_complex(c)
        rep = torsion_of_equivalence(identity_chain_map(ct))
        assert rep.verify()
        decided = reduce_trivial_pi(rep)
        assert decided["decided"] == "trivial", name


def test_reduce_trivial_pi_examples(tpi):
    c = _int_complex(tpi, [2, 2], {1: [[1, 5], [0, 1]]}, "shear")
    s = find_chain_contraction(c)
    rep = torsion_of_contractible(c, s)
    out = reduce_trivial_pi(rep)
    assert out["decided"] == "trivial" and abs(out["witness_det"]) == 1


def test_reduce_nontrivial_base_is_labelled(corpus):
    _x, _pi, c = corpus["RP2"]
    rep = torsion_of_equivalence(identity_chain_map(c))
    out = reduce_trivial_pi(rep, budget=0)
    assert out["decided"] in ("trivial", "representative-only")
    out0 = reduce_trivial_pi(rep, budget=-1)
    assert out0["decided"] == "representative-only"


def test_torsion_base_change_independence(tpi):
    """Permuting the basis or flipping a sign leaves the decision alone."""
    rng = random.Random(3)
    base = _int_complex(tpi, [2, 2], {1: [[1, 1], [0, 1]]}, "base")
    s = find_chain_contraction(base)
    det0 = reduce_trivial_pi(torsion_of_contractible(base, s))["witness_det"]
    flipped = _int_complex(tpi, [2, 2], {1: [[-1, -1], [0, 1]]}, "flip")
    s2 = find_chain_contraction(flipped)
    det1 = reduce_trivial_pi(torsion_of_contractible(flipped, s2))["witness_det"]
    assert abs(det0) == abs(det1) == 1


def test_torsion_algebra_sampler():
    rng = random.Random(20260809)
    report = check_torsion_algebra(rng, pairs=30)
    assert report["ok"], report["failures"][:3]
    assert report["pairs"] == 30
    assert report["addition"] >= 1


def test_finiteness_trivial_domination(tpi):
    c = _int_complex(tpi, [2, 2], {1: [[2, 0], [0, 3]]}, "D")
    idm = identity_chain_map(c)
    rep = finiteness_obstruction(Domination(c, c, idm, idm, {}))
    assert rep.decided == "trivial"
    assert rep.verify_idempotent()


def test_finiteness_nontrivial_homotopy(tpi):
    """gf = 1 only up to homotopy: the cylinder strictification runs."""
    # A contractible (identity differential), g = 0, H = -1 witnesses 0 ~ 1
    a = _int_complex(tpi, [1, 1], {1: [[1]]}, "A")
    d = _int_complex(tpi, [1, 1], {1: [[1]]}, "D")
    f = _int_chain_map(a, d, {0: [[1]], 1: [[1]]}, "f")
    g = _int_chain_map(d, a, {0: [[0]], 1: [[0]]}, "g")
    h = {0: ZPiMatrix(a.basis(1), a.basis(0))}
    h[0].set(0, 0, FormalSum.of_identity("pt", -1))
    rep = finiteness_obstruction(Domination(a, d, f, g, h))
    assert rep.verify_idempotent()
    assert rep.decided == "trivial"
    # cylinder parts span degrees 0..2
    assert [n for n, _p in rep.parts] == [0, 1, 2]


def test_finiteness_rejects_bad_homotopy(tpi):
    a = _int_complex(tpi, [1, 1], {1: [[0]]}, "A")
    d = _int_complex(tpi, [1, 1], {1: [[0]]}, "D")
    f = _int_chain_map(a, d, {0: [[1]], 1: [[1]]}, "f")
    g = _int_chain_map(d, a, {0: [[0]], 1: [[0]]}, "g")   # gf = 0, H = 0 lies
    with pytest.raises(NotADomination):
        finiteness_obstruction(Domination(a, d, f, g, {}))


def test_finiteness_over_rp2_pi(corpus):
    _x, _pi, c = corpus["RP2"]
    idm = identity_chain_map(c)
    rep = finiteness_obstruction(Domination(c, c, idm, idm, {}))
    assert rep.decided == "trivial"   # identity idempotents are free outright
    assert rep.verify_idempotent()


def test_torsion_inverse_certificates(corpus):
    for name in ("RP2", "S2"):
        _x, _pi, c = corpus[name]
        rep = torsion_of_equivalence(identity_chain_map(c))
        assert rep.verify()
