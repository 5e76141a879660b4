"""Element-name similarity based on shared adjacent character pairs.

Every matching, correspondence and coloring decision in the package funnels
through :func:`name_sim`, so the rules here are deliberately small and fixed:

* names are normalized (lowercased, trimmed, inner whitespace collapsed),
* names that are equal after normalization score 1.0,
* otherwise the score is the Dice coefficient over the multisets of adjacent
  code-point pairs: ``2 * |A ∩ B| / (|A| + |B|)``.

Treating the character pairs as a multiset (not a set) means a repeated pair
such as "de" in "order code" counts with its multiplicity on both sides.
"""

from __future__ import annotations

from collections import Counter


def normalize_name(s: str) -> str:
    """Lowercase, trim and collapse internal whitespace runs to one space.

    Operates on Unicode code points; idempotent.
    """
    return " ".join(s.lower().split())


def bigram_bag(s: str) -> Counter[str]:
    """Multiset of adjacent code-point pairs of ``s`` (``len(s) - 1`` entries)."""
    return Counter(s[i : i + 2] for i in range(len(s) - 1))


def name_sim(a: str, b: str, *, length_denominator: bool = False) -> float:
    """Similarity of two element names in [0, 1]; symmetric.

    Equality after normalization short-circuits to 1.0 so empty and
    single-character names compare correctly despite having no character
    pairs.  When only one side has no pairs the names cannot overlap and the
    score is 0.0.

    ``length_denominator=True`` divides by the summed string lengths instead
    of the summed pair counts.  Under that reading identical multi-character
    names score (n-1)/n rather than 1.0, which is why it is not the default;
    it exists so both interpretations of the coefficient stay reproducible.
    """
    na = normalize_name(a)
    nb = normalize_name(b)
    if na == nb:
        return 1.0
    bag_a = bigram_bag(na)
    bag_b = bigram_bag(nb)
    total_a = sum(bag_a.values())
    total_b = sum(bag_b.values())
    if total_a == 0 or total_b == 0:
        return 0.0
    common = sum((bag_a & bag_b).values())
    denominator = (len(na) + len(nb)) if length_denominator else (total_a + total_b)
    return 2.0 * common / denominator
