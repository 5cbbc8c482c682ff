"""Words and linear combinations over a generator alphabet.

A Word is a tuple of generator indices (the empty tuple is the
identity).  Generator indices follow the presentation's generator
order, so the deg-lex comparison on words is just comparison of
(length, tuple).  An Element is a finite Scalar-linear combination of
words with no stored zero coefficients.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .scalars import ONE, Scalar

Word = tuple  # tuple[int, ...]

EMPTY_WORD: Word = ()


def word_key(w: Word):
    """Sort key realising the deg-lex order (degree first, then lex)."""
    return (len(w), w)


def word_max(words: Iterable[Word]) -> Word:
    return max(words, key=word_key)


class Element:
    """Finite map Word -> Scalar; the free-algebra element it encodes.

    Mutating constructors are internal; treat instances as immutable.
    Multiplication is concatenation of words extended bilinearly.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, Scalar] | None = None):
        self.terms: dict = {}
        if terms:
            for w, c in terms.items():
                if c:
                    self.terms[w] = c if isinstance(c, Scalar) else Scalar(c)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Element":
        return Element()

    @staticmethod
    def unit(coeff=ONE) -> "Element":
        return Element.monomial(EMPTY_WORD, coeff)

    @staticmethod
    def monomial(word: Word, coeff=ONE) -> "Element":
        e = Element()
        c = coeff if isinstance(coeff, Scalar) else Scalar(coeff)
        if c:
            e.terms[tuple(word)] = c
        return e

    @staticmethod
    def generator(index: int) -> "Element":
        return Element.monomial((index,))

    def copy(self) -> "Element":
        e = Element()
        e.terms = dict(self.terms)
        return e

    # -- queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        """Maximal word length; -1 for the zero element."""
        if not self.terms:
            return -1
        return max(len(w) for w in self.terms)

    def leading_word(self) -> Word:
        if not self.terms:
            raise ValueError("zero element has no leading word")
        return word_max(self.terms)

    def leading_coefficient(self) -> Scalar:
        return self.terms[self.leading_word()]

    def coefficient(self, word: Word) -> Scalar:
        return self.terms.get(tuple(word), Scalar(0))

    def sorted_terms(self) -> list:
        """Terms in decreasing deg-lex order (deterministic iteration)."""
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]), reverse=True)

    def __iter__(self) -> Iterator:
        return iter(self.sorted_terms())

    def __len__(self):
        return len(self.terms)

    # -- arithmetic ---------------------------------------------------

    def _iadd_term(self, word: Word, coeff: Scalar):
        cur = self.terms.get(word)
        if cur is None:
            if coeff:
                self.terms[word] = coeff
        else:
            new = cur + coeff
            if new:
                self.terms[word] = new
            else:
                del self.terms[word]

    def __add__(self, other: "Element") -> "Element":
        out = self.copy()
        for w, c in other.terms.items():
            out._iadd_term(w, c)
        return out

    def __sub__(self, other: "Element") -> "Element":
        out = self.copy()
        for w, c in other.terms.items():
            out._iadd_term(w, -c)
        return out

    def __neg__(self) -> "Element":
        e = Element()
        e.terms = {w: -c for w, c in self.terms.items()}
        return e

    def scale(self, coeff) -> "Element":
        c = coeff if isinstance(coeff, Scalar) else Scalar(coeff)
        if not c:
            return Element()
        e = Element()
        e.terms = {w: cc * c for w, cc in self.terms.items()}
        return e

    def __mul__(self, other):
        if isinstance(other, Element):
            out = Element()
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    out._iadd_term(w1 + w2, c1 * c2)
            return out
        return self.scale(other)

    def __rmul__(self, other):
        # Scalar * Element (scalars commute with everything).
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- formatting ---------------------------------------------------

    def format(self, names: list) -> str:
        """Render with the given generator names, e.g. 'q*gamma*alpha'."""
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            word_str = "*".join(names[i] for i in w) if w else "1"
            cs = str(c)
            if cs == "1":
                term = word_str
            elif cs == "-1":
                term = "-" + word_str
            else:
                if any(ch in cs for ch in "+-/ ") and not (
                    cs.startswith("-") and not any(ch in cs[1:] for ch in "+-/ ")
                ):
                    cs = "(" + cs + ")"
                term = cs if not w else f"{cs}*{word_str}"
            if parts and not term.startswith("-"):
                parts.append("+" + term)
            else:
                parts.append(term)
        return "".join(parts)

    def __repr__(self):
        return f"Element({dict(self.sorted_terms())!r})"
