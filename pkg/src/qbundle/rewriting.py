"""Degree-bounded completion and normal forms in a free algebra.

Relations are oriented by the deg-lex order (leading word -> strictly
smaller tail), which makes every accepted relation degree-compatible:
rewriting never raises word degree, so resolving all overlap
ambiguities of total degree <= N certifies unique normal forms for all
elements of degree <= N (diamond lemma, truncated).
"""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence

from .algebra import EMPTY_WORD, Element, Word, word_key
from .scalars import Scalar

__all__ = [
    "RewriteError",
    "DegreeIncompatibleRelation",
    "RuleCapExceeded",
    "DegreeBoundExceeded",
    "RewriteSystem",
    "complete",
]

DEFAULT_RULE_CAP = 10000


class RewriteError(Exception):
    pass


class DegreeIncompatibleRelation(RewriteError):
    """An explicitly oriented relation whose lead is not deg-lex maximal."""


class RuleCapExceeded(RewriteError):
    """Completion produced more rules than the configured cap."""


class DegreeBoundExceeded(RewriteError):
    """An element exceeds the certified degree of the rewrite system."""


def orient(element: Element) -> tuple[Word, Element]:
    """Split a nonzero element into (leading word, reduced tail).

    The rule lead -> tail encodes the relation lead - tail = 0, with
    every tail word strictly smaller than lead under deg-lex.
    """
    if element.is_zero():
        raise ValueError("cannot orient the zero relation")
    lead = element.leading_word()
    c = element.terms[lead]
    tail = Element()
    for w, cw in element.terms.items():
        if w != lead:
            tail.terms[w] = -cw / c
    return lead, tail


def validate_orientation(lead: Word, rhs: Element) -> None:
    """Check an explicit orientation lead -> rhs for degree-compatibility."""
    lk = word_key(lead)
    for w in rhs.terms:
        if len(w) > len(lead):
            raise DegreeIncompatibleRelation(
                f"leading word of length {len(lead)} is shorter than a tail "
                f"word of length {len(w)}"
            )
        if word_key(w) >= lk:
            raise DegreeIncompatibleRelation(
                "leading word is not deg-lex maximal in the relation"
            )


class RewriteSystem:
    """An oriented, degree-bounded rule set with cached reduction.

    Immutable once completion has finished; reductions are pure.
    """

    def __init__(self, n_generators: int, degree_bound: int,
                 rule_cap: int = DEFAULT_RULE_CAP):
        self.n_generators = n_generators
        self.degree_bound = degree_bound
        self.rule_cap = rule_cap
        self.confluence_certified_to = 0
        self.rules: dict = {}           # lead Word -> tail Element
        self._by_first: dict = {}       # first letter -> sorted list of leads
        self._by_last: dict = {}        # last letter -> list of leads
        self._cache_left: dict = {EMPTY_WORD: Element.unit()}
        self._cache_right: dict = {EMPTY_WORD: Element.unit()}

    # -- rule bookkeeping --------------------------------------------

    def _reindex(self) -> None:
        self._by_first = {}
        self._by_last = {}
        for lead in self.rules:
            self._by_first.setdefault(lead[0], []).append(lead)
            self._by_last.setdefault(lead[-1], []).append(lead)
        for bucket in self._by_first.values():
            bucket.sort(key=word_key)
        for bucket in self._by_last.values():
            bucket.sort(key=word_key)
        self._cache_left = {EMPTY_WORD: Element.unit()}
        self._cache_right = {EMPTY_WORD: Element.unit()}

    def _add_rule(self, lead: Word, tail: Element) -> None:
        if len(self.rules) >= self.rule_cap:
            raise RuleCapExceeded(
                f"completion exceeded the rule cap of {self.rule_cap}"
            )
        self.rules[lead] = tail
        self._reindex()

    def _remove_rule(self, lead: Word) -> None:
        del self.rules[lead]
        self._reindex()

    # -- redex search -------------------------------------------------

    def _find_redex_at(self, w: Word, pos: int):
        bucket = self._by_first.get(w[pos])
        if bucket is None:
            return None
        n = len(w)
        for lead in bucket:
            ll = len(lead)
            if pos + ll <= n and w[pos:pos + ll] == lead:
                return lead
        return None

    def _find_redex(self, w: Word, rightmost: bool = False):
        positions = range(len(w) - 1, -1, -1) if rightmost else range(len(w))
        for pos in positions:
            lead = self._find_redex_at(w, pos)
            if lead is not None:
                return pos, lead
        return None

    def is_normal_word(self, w: Word) -> bool:
        return self._find_redex(w) is None

    # -- reduction ----------------------------------------------------

    def _nf_word(self, w: Word, rightmost: bool = False) -> Element:
        cache = self._cache_right if rightmost else self._cache_left
        hit = cache.get(w)
        if hit is not None:
            return hit
        stack = [w]
        while stack:
            u = stack[-1]
            if u in cache:
                stack.pop()
                continue
            redex = self._find_redex(u, rightmost)
            if redex is None:
                cache[u] = Element.monomial(u)
                stack.pop()
                continue
            pos, lead = redex
            tail = self.rules[lead]
            prefix, suffix = u[:pos], u[pos + len(lead):]
            expansion = [(prefix + tw + suffix, tc)
                         for tw, tc in tail.terms.items()]
            missing = [cw for cw, _ in expansion if cw not in cache]
            if missing:
                stack.extend(missing)
                continue
            acc = Element()
            for cw, tc in expansion:
                for nw, nc in cache[cw].terms.items():
                    acc._iadd_term(nw, nc * tc)
            cache[u] = acc
            stack.pop()
        return cache[w]

    def reduce(self, x: Element, rightmost: bool = False) -> Element:
        """Full reduction without a degree-certification check.

        A zero result is a sound ideal-membership certificate at any
        degree; a nonzero result above the certified degree is only a
        representative, not a canonical normal form.
        """
        out = Element()
        for w, c in x.terms.items():
            for nw, nc in self._nf_word(w, rightmost).terms.items():
                out._iadd_term(nw, nc * c)
        return out

    def normal_form(self, x: Element, rightmost: bool = False) -> Element:
        """Canonical representative of x modulo the ideal; idempotent."""
        if x.degree() > self.confluence_certified_to:
            raise DegreeBoundExceeded(
                f"element of degree {x.degree()} exceeds certified degree "
                f"{self.confluence_certified_to}"
            )
        return self.reduce(x, rightmost)

    def is_zero_mod_ideal(self, x: Element) -> bool:
        return self.normal_form(x).is_zero()

    # -- normal words -------------------------------------------------

    def monomial_basis(self, degree: int) -> list:
        """All normal words of degree <= degree, sorted by deg-lex."""
        if degree > self.confluence_certified_to:
            raise DegreeBoundExceeded(
                f"degree {degree} exceeds certified degree "
                f"{self.confluence_certified_to}"
            )
        basis = [EMPTY_WORD]
        layer = [EMPTY_WORD]
        for _ in range(degree):
            nxt = []
            for w in layer:
                for g in range(self.n_generators):
                    u = w + (g,)
                    bucket = self._by_last.get(g)
                    if bucket and any(
                        u[-len(lead):] == lead
                        for lead in bucket if len(lead) <= len(u)
                    ):
                        continue
                    nxt.append(u)
            basis.extend(nxt)
            layer = nxt
        basis.sort(key=word_key)
        return basis

    # -- serialization ------------------------------------------------

    def to_dict(self, names: Sequence[str]) -> dict:
        """Report-friendly description: rules, order, certified degree."""
        rules = []
        for lead in sorted(self.rules, key=word_key):
            rules.append({
                "lead": "*".join(names[i] for i in lead) if lead else "1",
                "tail": self.rules[lead].format(list(names)),
            })
        return {
            "generators": list(names),
            "order": "deglex",
            "degree_bound": self.degree_bound,
            "confluence_certified_to": self.confluence_certified_to,
            "rules": rules,
        }


def _overlap_tasks(l1: Word, l2: Word) -> Iterable[tuple]:
    """Proper overlap ambiguities: a suffix of l1 equals a prefix of l2."""
    for k in range(1, min(len(l1), len(l2))):
        if l1[-k:] == l2[:k]:
            w = l1 + l2[k:]
            yield (len(w), w, l1, l2, len(l1) - k)


def complete(relations: Iterable[Element], n_generators: int,
             degree_bound: int, *, rule_cap: int = DEFAULT_RULE_CAP,
             oriented: Iterable[tuple] | None = None) -> RewriteSystem:
    """Buchberger/diamond-lemma completion, overlaps capped at degree_bound.

    `relations` are oriented automatically by deg-lex; `oriented`
    entries (lead, rhs) carry an explicit orientation which is
    validated for degree-compatibility first.
    """
    rs = RewriteSystem(n_generators, degree_bound, rule_cap)
    pending_elements = []
    for lead, rhs in (oriented or []):
        validate_orientation(lead, rhs)
        pending_elements.append(Element.monomial(lead) - rhs)
    for rel in relations:
        if rel.is_zero():
            raise ValueError("zero relation in presentation")
        pending_elements.append(rel)
    pending_elements.sort(key=lambda e: word_key(e.leading_word()))

    heap: list = []   # (degree, word, l1, l2, pos2) overlap tasks
    counter = 0

    def enqueue_overlaps(lead: Word) -> None:
        nonlocal counter
        for other in list(rs.rules):
            for task in _overlap_tasks(lead, other):
                if task[0] <= degree_bound:
                    heapq.heappush(heap, task)
            if other != lead:
                for task in _overlap_tasks(other, lead):
                    if task[0] <= degree_bound:
                        heapq.heappush(heap, task)

    def absorb(element: Element) -> None:
        """Reduce, orient and insert a relation; inter-reduce the rest."""
        queue = [element]
        while queue:
            elem = queue.pop()
            elem = rs.reduce(elem)
            if elem.is_zero():
                continue
            if elem.degree() > degree_bound:
                raise DegreeBoundExceeded(
                    f"relation of degree {elem.degree()} exceeds the "
                    f"completion bound {degree_bound}"
                )
            lead, tail = orient(elem)
            rs._add_rule(lead, tail)
            # Any older rule whose lead is now reducible goes back in the
            # queue; surviving tails are re-reduced lazily below.
            ll = len(lead)
            for other in sorted(rs.rules, key=word_key):
                if other == lead:
                    continue
                if any(other[i:i + ll] == lead
                       for i in range(len(other) - ll + 1)):
                    old_tail = rs.rules[other]
                    rs._remove_rule(other)
                    queue.append(Element.monomial(other) - old_tail)
            # Keep tails fully reduced against the current rule set.
            changed = True
            while changed:
                changed = False
                for other in sorted(rs.rules, key=word_key):
                    new_tail = rs.reduce(rs.rules[other])
                    if new_tail != rs.rules[other]:
                        rs.rules[other] = new_tail
                        rs._reindex()
                        changed = True
            enqueue_overlaps(lead)

    for elem in pending_elements:
        absorb(elem)

    while heap:
        _, w, l1, l2, pos2 = heapq.heappop(heap)
        if l1 not in rs.rules or l2 not in rs.rules:
            continue
        t1, t2 = rs.rules[l1], rs.rules[l2]
        e1 = Element()
        for tw, tc in t1.terms.items():
            e1._iadd_term(tw + w[len(l1):], tc)
        e2 = Element()
        for tw, tc in t2.terms.items():
            e2._iadd_term(w[:pos2] + tw, tc)
        diff = rs.reduce(e1) - rs.reduce(e2)
        if not diff.is_zero():
            absorb(diff)

    rs.confluence_certified_to = degree_bound
    return rs
