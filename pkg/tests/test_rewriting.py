from fibrehom.rewriting import LetterOrder, RewriteSystem, complete


def run_complete(relations, letters):
    system, ok = complete(relations, order=LetterOrder(letters))
    return system, ok


def test_single_idempotent_rule():
    system, ok = run_complete([(("a", "a"), ("a",))], ["a"])
    assert ok
    assert system.reduce(("a", "a", "a")) == ("a",)


def test_z2_relation():
    system, ok = run_complete([(("t", "t"), ())], ["t"])
    assert ok
    assert system.reduce(("t",) * 5) == ("t",)
    assert system.reduce(("t",) * 4) == ()


def test_free_group_reduction():
    rels = [(("t", "T"), ()), (("T", "t"), ())]
    system, ok = run_complete(rels, ["t", "T"])
    assert ok
    assert system.reduce(("t", "T", "t")) == ("t",)
    assert system.reduce(("t", "t", "T", "T")) == ()


def test_free_abelian_two_generators():
    # inverse pairs adjacent in the order: completion reaches the classical
    # eight-rule system for Z x Z
    letters = ["a", "A", "b", "B"]
    rels = [(("a", "A"), ()), (("A", "a"), ()),
            (("b", "B"), ()), (("B", "b"), ()),
            (("a", "b", "A", "B"), ())]
    system, ok = run_complete(rels, letters)
    assert ok
    assert system.reduce(("b", "a")) == ("a", "b")
    assert system.reduce(("b", "a", "B", "A")) == ()
    assert system.reduce(("B", "a", "b")) == ("a",)


def test_klein_group_words():
    letters = ["a", "A", "b", "B"]
    rels = [(("a", "A"), ()), (("A", "a"), ()),
            (("b", "B"), ()), (("B", "b"), ()),
            (("a", "b", "a", "B"), ())]
    system, ok = run_complete(rels, letters)
    assert ok
    # b a b^-1 = a^-1 in the Klein bottle group (application order words)
    lhs = system.reduce(("b", "a", "B"))
    rhs = system.reduce(("A",))
    assert lhs == rhs


def test_interleaved_order_can_fail():
    # with an inverse letter separated from its base letter the free
    # abelian completion diverges; the cap must fire, not a hang
    letters = ["A", "B", "a", "b"]
    rels = [(("a", "A"), ()), (("A", "a"), ()),
            (("b", "B"), ()), (("B", "b"), ()),
            (("a", "b", "A", "B"), ())]
    _system, ok = complete(rels, order=LetterOrder(letters),
                           max_rules=80, max_passes=12)
    assert not ok


def test_reduction_confluence_property():
    letters = ["a", "A", "b", "B"]
    rels = [(("a", "A"), ()), (("A", "a"), ()),
            (("b", "B"), ()), (("B", "b"), ()),
            (("a", "b", "A", "B"), ())]
    system, ok = run_complete(rels, letters)
    assert ok
    # normal form is invariant under inserting cancelling pairs anywhere
    import random
    rng = random.Random(3)
    for _ in range(200):
        word = tuple(rng.choice(letters) for _ in range(rng.randint(0, 6)))
        nf = system.reduce(word)
        k = rng.randint(0, len(word))
        pair = rng.choice([("a", "A"), ("A", "a"), ("b", "B"), ("B", "b")])
        padded = word[:k] + pair + word[k:]
        assert system.reduce(padded) == nf
