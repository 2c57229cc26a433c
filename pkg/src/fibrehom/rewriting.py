"""Shortlex Knuth-Bendix completion for words in a presented category.

Words are tuples of generator names in application order (index 0 acts
first).  Because generator names are globally unique and carry fixed
endpoints, overlap splices of well-typed rule sides are automatically
well-typed, so the string machinery needs no extra endpoint checks.

The shortlex order compares letters through a caller-supplied ranking.
The ranking matters: completion of a free abelian pair converges when a
generator and its formal inverse are adjacent in the order and diverges
when they are interleaved with other letters, so categories pass their
generator declaration order here.

Completion is bounded: rule count, word length and pass count are capped
and ``complete`` reports failure instead of diverging.  A failed
completion leaves the category usable for everything that only evaluates
words.
"""

from __future__ import annotations


class LetterOrder:
    """Ranking of generator names used by the shortlex order."""

    def __init__(self, ranked_names=None):
        self.rank = {}
        if ranked_names:
            for i, name in enumerate(ranked_names):
                self.rank[name] = i

    def key(self, word):
        if self.rank:
            return (len(word), tuple(self.rank.get(g, len(self.rank)) for g in word),
                    word)
        return (len(word), word)

    def orient(self, w1, w2):
        """Order a pair of words into a shortlex-decreasing rewrite rule."""
        if self.key(w1) >= self.key(w2):
            return (w1, w2)
        return (w2, w1)


class RewriteSystem:
    """A list of shortlex-decreasing rewrite rules over tuples."""

    def __init__(self, rules=(), order=None):
        self.order = order or LetterOrder()
        self.rules = sorted(set(rules), key=lambda r: (self.order.key(r[0]), r[1]))
        self._by_first = {}
        for rule in self.rules:
            lhs = rule[0]
            if lhs:
                self._by_first.setdefault(lhs[0], []).append(rule)

    def rewrite_once(self, word):
        n = len(word)
        for i in range(n):
            bucket = self._by_first.get(word[i])
            if not bucket:
                continue
            for lhs, rhs in bucket:
                ln = len(lhs)
                if i + ln <= n and word[i:i + ln] == lhs:
                    return word[:i] + rhs + word[i + ln:]
        return None

    def reduce(self, word):
        while True:
            nxt = self.rewrite_once(word)
            if nxt is None:
                return word
            word = nxt

    def is_reduced(self, word):
        return self.rewrite_once(word) is None


def _critical_pairs(rule1, rule2):
    """Overlap critical pairs of two rules (suffix of lhs1 = prefix of lhs2)."""
    l1, r1 = rule1
    l2, r2 = rule2
    pairs = []
    for k in range(1, min(len(l1), len(l2)) + 1):
        if k == len(l1) and k == len(l2) and rule1 == rule2:
            continue
        if l1[len(l1) - k:] == l2[:k]:
            # whole word  l1[:-k] . overlap . l2[k:]
            w1 = r1 + l2[k:]
            w2 = l1[:len(l1) - k] + r2
            pairs.append((w1, w2))
    return pairs


def complete(relations, order=None, max_rules=2000, max_len=64, max_passes=200):
    """Knuth-Bendix completion of a finite relation list.

    Returns (RewriteSystem, ok).  With ok=False the returned system is the
    partial state at the point a cap fired and must not be used to decide
    equality.
    """
    order = order or LetterOrder()
    rules = set()
    for w1, w2 in relations:
        lhs, rhs = order.orient(tuple(w1), tuple(w2))
        if lhs != rhs:
            rules.add((lhs, rhs))

    for _ in range(max_passes):
        # interreduce: normalize both sides of every rule against the others
        changed = False
        new_rules = set()
        for lhs, rhs in sorted(rules, key=lambda r: (order.key(r[0]), r[1])):
            others = RewriteSystem(rules - {(lhs, rhs)}, order=order)
            lhs2 = others.reduce(lhs)
            rhs2 = others.reduce(rhs)
            if (lhs2, rhs2) != (lhs, rhs):
                changed = True
            lhs3, rhs3 = order.orient(lhs2, rhs2)
            if lhs3 != rhs3:
                new_rules.add((lhs3, rhs3))
        if new_rules != rules:
            rules = new_rules
            changed = True
        system = RewriteSystem(rules, order=order)

        # deduce critical pairs
        fresh = set()
        rule_list = system.rules
        for r1 in rule_list:
            for r2 in rule_list:
                for w1, w2 in _critical_pairs(r1, r2):
                    n1 = system.reduce(w1)
                    n2 = system.reduce(w2)
                    if n1 != n2:
                        lhs, rhs = order.orient(n1, n2)
                        if len(lhs) > max_len:
                            return system, False
                        fresh.add((lhs, rhs))
        if not fresh and not changed:
            return system, True
        rules |= fresh
        if len(rules) > max_rules:
            return RewriteSystem(rules, order=order), False
    return RewriteSystem(rules, order=order), False
