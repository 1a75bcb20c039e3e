"""Small helpers for binary relations stored as sets of pairs.

All relations here live on modest finite carriers (at most a few dozen
elements), so plain fixpoint loops are fine.
"""

from __future__ import annotations

from typing import Hashable, Iterable

Pair = tuple[Hashable, Hashable]


def identity(elements: Iterable) -> frozenset:
    return frozenset((x, x) for x in elements)


def inverse(pairs: Iterable[Pair]) -> frozenset:
    return frozenset((b, a) for (a, b) in pairs)


def compose(r: Iterable[Pair], s: Iterable[Pair]) -> frozenset:
    by_left: dict = {}
    for (a, b) in s:
        by_left.setdefault(a, []).append(b)
    return frozenset((a, c) for (a, b) in r for c in by_left.get(b, ()))


def transitive_closure(pairs: Iterable[Pair]) -> frozenset:
    rel = set(pairs)
    succ: dict = {}
    for (a, b) in rel:
        succ.setdefault(a, set()).add(b)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for c in list(succ.get(b, ())):
                if (a, c) not in rel:
                    rel.add((a, c))
                    succ.setdefault(a, set()).add(c)
                    changed = True
    return frozenset(rel)


def reflexive_transitive_closure(pairs: Iterable[Pair], elements: Iterable) -> frozenset:
    return transitive_closure(set(pairs) | set(identity(elements)))


def is_reflexive(pairs: frozenset, elements: Iterable) -> bool:
    return all((x, x) in pairs for x in elements)


def is_transitive(pairs: frozenset) -> bool:
    return compose(pairs, pairs) <= pairs


def is_antisymmetric(pairs: frozenset) -> bool:
    return all(a == b for (a, b) in pairs if (b, a) in pairs)


def antisymmetry_violations(pairs: frozenset) -> list[Pair]:
    return sorted({(a, b) for (a, b) in pairs if a != b and (b, a) in pairs})


def is_partial_order(pairs: frozenset, elements: Iterable) -> bool:
    return is_reflexive(pairs, elements) and is_transitive(pairs) and is_antisymmetric(pairs)


def up_set(pairs: frozenset, x) -> frozenset:
    return frozenset(b for (a, b) in pairs if a == x)


def all_partitions(elements: list) -> list[list[list]]:
    """Every partition of `elements`, deterministically ordered."""
    if not elements:
        return [[]]
    head, rest = elements[0], elements[1:]
    out = []
    for part in all_partitions(rest):
        for i in range(len(part)):
            out.append(part[:i] + [[head] + part[i]] + part[i + 1:])
        out.append([[head]] + part)
    return out


def partition_to_pairs(partition: Iterable[Iterable]) -> frozenset:
    pairs = set()
    for block in partition:
        block = list(block)
        for a in block:
            for b in block:
                pairs.add((a, b))
    return frozenset(pairs)


def pairs_to_blocks(pairs: frozenset, elements: list) -> list[list]:
    """Equivalence classes of `pairs`, each sorted by carrier position."""
    index = {e: i for i, e in enumerate(elements)}
    seen: set = set()
    blocks = []
    for e in elements:
        if e in seen:
            continue
        block = sorted((b for (a, b) in pairs if a == e), key=index.__getitem__)
        if e not in block:
            block = sorted(block + [e], key=index.__getitem__)
        seen.update(block)
        blocks.append(block)
    return blocks
