"""Exact sparse linear algebra over Q(q, s).

Vectors are finite maps column-key -> Scalar.  Column keys are ordered
by a caller-supplied key function (for word columns this is the deg-lex
key), and elimination always pivots on the largest remaining column of
a row — deterministic, so bases are reproducible across runs.

Every operation is exact; over a fraction field each pivot step divides
by the pivot coefficient, which is the fraction-free strategy
specialised to a field.
"""

from __future__ import annotations

from typing import Callable, Hashable, Mapping, Sequence

from .scalars import ONE, Scalar

__all__ = ["Echelon", "kernel_of_family", "rank_of_family"]


def _default_key(col):
    return col


class Echelon:
    """Incremental row echelon basis of a subspace.

    Pivot rows are stored normalised (leading coefficient 1) and keyed
    by their leading column; `reduce` eliminates *every* pivot-led
    column from a row, so residues are canonical representatives of
    the quotient by the row space.
    """

    def __init__(self, key: Callable[[Hashable], object] = _default_key):
        self.key = key
        self.pivots: dict = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _leading(self, row: Mapping) -> Hashable:
        return max(row, key=self.key)

    def reduce(self, row: Mapping) -> dict:
        """Fully reduce a row against the stored pivots (row unchanged)."""
        out = {c: v for c, v in row.items() if v}
        while out:
            hit = None
            for c in sorted(out, key=self.key, reverse=True):
                if c in self.pivots:
                    hit = c
                    break
            if hit is None:
                break
            coeff = out[hit]
            for pc, pv in self.pivots[hit].items():
                cur = out.get(pc)
                new = (cur - coeff * pv) if cur is not None else -(coeff * pv)
                if new:
                    out[pc] = new
                else:
                    out.pop(pc, None)
        return out

    def insert(self, row: Mapping):
        """Add a row to the span; returns the new pivot column, or None
        when the row was already in the span."""
        res = self.reduce(row)
        if not res:
            return None
        lead = self._leading(res)
        inv = ONE / res[lead]
        self.pivots[lead] = {c: v * inv for c, v in res.items()}
        return lead

    def contains(self, row: Mapping) -> bool:
        return not self.reduce(row)


def kernel_of_family(vectors: Sequence[Mapping],
                     key: Callable = _default_key) -> list:
    """Basis of {c : sum_i c_i * vectors[i] = 0}.

    Each kernel element is a list of Scalars of length len(vectors).
    Computed by augmented incremental elimination: inserting vector i
    with a tracking unit row; a vanishing residual certifies the
    tracked combination.  Deterministic in the input order.
    """
    ech = Echelon(key)
    trackers: dict = {}          # pivot column -> combination (dict i -> Scalar)
    kernel = []
    n = len(vectors)
    for i, vec in enumerate(vectors):
        row = {c: v for c, v in vec.items() if v}
        combo = {i: ONE}
        while row:
            hit = None
            for c in sorted(row, key=key, reverse=True):
                if c in ech.pivots:
                    hit = c
                    break
            if hit is None:
                break
            coeff = row[hit]
            for pc, pv in ech.pivots[hit].items():
                cur = row.get(pc)
                new = (cur - coeff * pv) if cur is not None else -(coeff * pv)
                if new:
                    row[pc] = new
                else:
                    row.pop(pc, None)
            for ti, tv in trackers[hit].items():
                cur = combo.get(ti)
                new = (cur - coeff * tv) if cur is not None else -(coeff * tv)
                if new:
                    combo[ti] = new
                else:
                    combo.pop(ti, None)
        if not row:
            kernel.append([combo.get(j, Scalar(0)) for j in range(n)])
        else:
            lead = max(row, key=key)
            inv = ONE / row[lead]
            ech.pivots[lead] = {c: v * inv for c, v in row.items()}
            trackers[lead] = {ti: tv * inv for ti, tv in combo.items()}
    return kernel


def rank_of_family(vectors: Sequence[Mapping],
                   key: Callable = _default_key) -> int:
    ech = Echelon(key)
    for vec in vectors:
        ech.insert(vec)
    return ech.rank
