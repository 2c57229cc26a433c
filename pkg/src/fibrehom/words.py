"""Morphism words and formal integer combinations of them.

A ``MorphismWord`` is a composable sequence of generator names together
with its endpoints.  Factors are stored in application order: the factor
at index 0 acts first.  ``compose(f, g)`` realizes f after g, so words
print right-to-left (composition order) but concatenate left-to-right in
storage.

A ``FormalSum`` is a Z-linear combination of parallel words (all sharing
the same endpoints); these are the entries of ZPi matrices.
"""

from __future__ import annotations

from .errors import EndpointMismatch


class MorphismWord:
    __slots__ = ("src", "dst", "factors")

    def __init__(self, src, dst, factors=()):
        self.src = src
        self.dst = dst
        self.factors = tuple(factors)
        if not self.factors and src != dst:
            raise EndpointMismatch(f"empty word must be an identity, got {src} -> {dst}")

    @classmethod
    def identity(cls, obj):
        return cls(obj, obj, ())

    @property
    def is_identity_word(self):
        return not self.factors

    def __len__(self):
        return len(self.factors)

    def __eq__(self, other):
        if not isinstance(other, MorphismWord):
            return NotImplemented
        return (self.src, self.dst, self.factors) == (other.src, other.dst, other.factors)

    def __hash__(self):
        return hash((self.src, self.dst, self.factors))

    def __repr__(self):
        return f"MorphismWord({self.src!r}, {self.dst!r}, {self.factors!r})"

    def __str__(self):
        if not self.factors:
            return f"id[{self.src}]"
        return "*".join(reversed(self.factors))

    def key(self):
        return (self.src, self.dst, self.factors)


def compose(f, g):
    """The composite f after g (g acts first)."""
    if g.dst != f.src:
        raise EndpointMismatch(
            f"cannot compose: inner word ends at {g.dst}, outer starts at {f.src}")
    return MorphismWord(g.src, f.dst, g.factors + f.factors)


def compose_many(words):
    """Compose a nonempty application-ordered sequence of words."""
    words = list(words)
    out = words[0]
    for w in words[1:]:
        out = compose(w, out)
    return out


class FormalSum:
    """Integer combination of parallel morphism words.

    Zero sums keep their endpoints so matrix arithmetic can stay
    endpoint-checked.  Terms with coefficient 0 are dropped eagerly.
    """

    __slots__ = ("src", "dst", "terms")

    def __init__(self, src, dst, terms=None):
        self.src = src
        self.dst = dst
        self.terms = {}
        if terms:
            for word, coeff in (terms.items() if isinstance(terms, dict) else terms):
                self._accumulate(word, coeff)

    def _accumulate(self, word, coeff):
        if word.src != self.src or word.dst != self.dst:
            raise EndpointMismatch(
                f"term {word} does not run {self.src} -> {self.dst}")
        if coeff == 0:
            return
        new = self.terms.get(word, 0) + coeff
        if new:
            self.terms[word] = new
        else:
            del self.terms[word]

    @classmethod
    def zero(cls, src, dst):
        return cls(src, dst)

    @classmethod
    def of_word(cls, word, coeff=1):
        return cls(word.src, word.dst, [(word, coeff)])

    @classmethod
    def of_identity(cls, obj, coeff=1):
        return cls.of_word(MorphismWord.identity(obj), coeff)

    def is_zero(self):
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].key())

    def __eq__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return (self.src, self.dst, self.terms) == (other.src, other.dst, other.terms)

    def __hash__(self):
        return hash((self.src, self.dst, tuple(sorted(self.terms.items(), key=lambda kv: kv[0].key()))))

    def __add__(self, other):
        if (self.src, self.dst) != (other.src, other.dst):
            raise EndpointMismatch("adding sums with different endpoints")
        out = FormalSum(self.src, self.dst, dict(self.terms))
        for w, c in other.terms.items():
            out._accumulate(w, c)
        return out

    def __neg__(self):
        return FormalSum(self.src, self.dst, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if c == 0:
            return FormalSum.zero(self.src, self.dst)
        return FormalSum(self.src, self.dst, {w: c * k for w, k in self.terms.items()})

    def compose(self, other):
        """Bilinear extension of word composition: self after other."""
        if other.dst != self.src:
            raise EndpointMismatch("composing sums with mismatched endpoints")
        out = FormalSum(other.src, self.dst)
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out._accumulate(compose(w1, w2), c1 * c2)
        return out

    def map_words(self, fn, src=None, dst=None):
        """Apply ``fn`` (word -> word or FormalSum) to every term, summed."""
        out = None
        for w, c in self.terms.items():
            image = fn(w)
            if isinstance(image, MorphismWord):
                image = FormalSum.of_word(image)
            part = image.scale(c)
            out = part if out is None else out + part
        if out is None:
            if src is None or dst is None:
                raise ValueError("mapping an empty sum needs explicit endpoints")
            return FormalSum.zero(src, dst)
        return out

    def normalized(self, category):
        """Collect terms after rewriting every word to its normal form."""
        out = FormalSum(self.src, self.dst)
        for w, c in self.terms.items():
            out._accumulate(category.normalize(w), c)
        return out

    def coefficient_total(self):
        """Sum of coefficients: the image under the trivializing functor."""
        return sum(self.terms.values())

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.items():
            if c == 1:
                parts.append(str(w))
            elif c == -1:
                parts.append(f"-{w}")
            else:
                parts.append(f"{c}*{w}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self):
        return f"FormalSum({self.src!r}, {self.dst!r}, {dict(self.terms)!r})"
