"""Linear combinations of word tuples: elements of tensor products.

A TensorElement of arity k is a finite map from k-tuples of words to
Scalars.  Each factor may live in a different algebra (or quotient);
the owner information is kept by the caller, not here.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .algebra import EMPTY_WORD, Element, Word, word_key
from .scalars import ONE, Scalar

__all__ = ["TensorElement"]


def _key(words: tuple) -> tuple:
    return tuple(word_key(w) for w in words)


class TensorElement:
    """Finite map (Word, ..., Word) -> Scalar; treat as immutable."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms=None):
        self.arity = arity
        self.terms: dict = {}
        if terms:
            for ws, c in terms.items():
                if c:
                    self.terms[tuple(ws)] = c if isinstance(c, Scalar) else Scalar(c)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(arity: int) -> "TensorElement":
        return TensorElement(arity)

    @staticmethod
    def monomial(words: Iterable[Word], coeff=ONE) -> "TensorElement":
        ws = tuple(tuple(w) for w in words)
        return TensorElement(len(ws), {ws: coeff})

    @staticmethod
    def unit(arity: int, coeff=ONE) -> "TensorElement":
        return TensorElement.monomial((EMPTY_WORD,) * arity, coeff)

    @staticmethod
    def of(*legs: Element) -> "TensorElement":
        """Tensor product of single-factor elements: x1 (x) ... (x) xk."""
        items = [((), ONE)]
        for leg in legs:
            items = [(ws + (w,), c * cw)
                     for ws, c in items for w, cw in leg.terms.items()]
        out = TensorElement(len(legs))
        for ws, c in items:
            out._iadd_term(ws, c)
        return out

    def copy(self) -> "TensorElement":
        out = TensorElement(self.arity)
        out.terms = dict(self.terms)
        return out

    # -- queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: _key(t[0]), reverse=True)

    def leg_degree(self, i: int) -> int:
        """Maximal word length in factor i; -1 for the zero element."""
        if not self.terms:
            return -1
        return max(len(ws[i]) for ws in self.terms)

    # -- arithmetic ---------------------------------------------------

    def _iadd_term(self, words: tuple, coeff: Scalar):
        cur = self.terms.get(words)
        if cur is None:
            if coeff:
                self.terms[words] = coeff
        else:
            new = cur + coeff
            if new:
                self.terms[words] = new
            else:
                del self.terms[words]

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if self.arity != other.arity:
            raise ValueError("tensor arity mismatch")
        out = self.copy()
        for ws, c in other.terms.items():
            out._iadd_term(ws, c)
        return out

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        if self.arity != other.arity:
            raise ValueError("tensor arity mismatch")
        out = self.copy()
        for ws, c in other.terms.items():
            out._iadd_term(ws, -c)
        return out

    def __neg__(self) -> "TensorElement":
        out = TensorElement(self.arity)
        out.terms = {ws: -c for ws, c in self.terms.items()}
        return out

    def scale(self, coeff) -> "TensorElement":
        c = coeff if isinstance(coeff, Scalar) else Scalar(coeff)
        out = TensorElement(self.arity)
        if c:
            out.terms = {ws: cc * c for ws, cc in self.terms.items()}
        return out

    def __mul__(self, other):
        """Componentwise product (the algebra structure of a tensor
        product of algebras); scalar scaling otherwise."""
        if isinstance(other, TensorElement):
            if self.arity != other.arity:
                raise ValueError("tensor arity mismatch")
            out = TensorElement(self.arity)
            for ws1, c1 in self.terms.items():
                for ws2, c2 in other.terms.items():
                    words = tuple(w1 + w2 for w1, w2 in zip(ws1, ws2))
                    out._iadd_term(words, c1 * c2)
            return out
        return self.scale(other)

    __rmul__ = scale

    def tensor(self, other: "TensorElement") -> "TensorElement":
        """Outer tensor product: arity adds."""
        out = TensorElement(self.arity + other.arity)
        for ws1, c1 in self.terms.items():
            for ws2, c2 in other.terms.items():
                out._iadd_term(ws1 + ws2, c1 * c2)
        return out

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    # -- leg operations -----------------------------------------------

    def leg(self, ws: tuple, i: int) -> Word:
        return ws[i]

    def apply_leg(self, i: int, f: Callable[[Word], Element]) -> "TensorElement":
        """Apply a linear word map to factor i."""
        out = TensorElement(self.arity)
        for ws, c in self.terms.items():
            img = f(ws[i])
            for w, cw in img.terms.items():
                out._iadd_term(ws[:i] + (w,) + ws[i + 1:], c * cw)
        return out

    def apply_leg_tensor(self, i: int,
                         f: Callable[[Word], "TensorElement"]) -> "TensorElement":
        """Replace factor i by the image of a word-to-tensor map; the
        image's factors are spliced in place of factor i."""
        out = None
        for ws, c in self.terms.items():
            img = f(ws[i])
            if out is None:
                out = TensorElement(self.arity - 1 + img.arity)
            for iws, cw in img.terms.items():
                out._iadd_term(ws[:i] + iws + ws[i + 1:], c * cw)
        if out is None:
            raise ValueError("cannot infer arity of the image of zero")
        return out

    def factor_as_element(self, i: int) -> Element:
        """Collapse to factor i; only valid when all other factors are
        the empty word (used after counit-style evaluations)."""
        out = Element()
        for ws, c in self.terms.items():
            if any(ws[j] != EMPTY_WORD for j in range(self.arity) if j != i):
                raise ValueError("non-scalar factors remain")
            out._iadd_term(ws[i], c)
        return out

    # -- formatting ---------------------------------------------------

    def format(self, names_per_leg: list) -> str:
        if not self.terms:
            return "0"
        parts = []
        for ws, c in self.sorted_terms():
            legs = []
            for i, w in enumerate(ws):
                names = names_per_leg[i]
                legs.append("*".join(names[g] for g in w) if w else "1")
            body = " (x) ".join(legs)
            cs = str(c)
            if cs == "1":
                term = body
            elif cs == "-1":
                term = "-" + body
            else:
                if any(ch in cs for ch in "+-/ ") and not (
                    cs.startswith("-") and not any(ch in cs[1:] for ch in "+-/ ")
                ):
                    cs = "(" + cs + ")"
                term = f"{cs}*{body}"
            if parts and not term.startswith("-"):
                parts.append(" + " + term)
            elif parts:
                parts.append(" " + term)
            else:
                parts.append(term)
        return "".join(parts)

    def __repr__(self):
        return f"TensorElement(arity={self.arity}, {len(self.terms)} terms)"
