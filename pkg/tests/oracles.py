"""Brute-force reference implementations used to pin expected values.

Everything here deliberately avoids the library's algorithms: closures are
all-pairs product fixpoints, normality conjugates by every element, and
normal subgroups are enumerated from conjugacy-class unions.  Slow, simple,
and only run on small groups.
"""

from typing import FrozenSet, List, Set

from pgroups.groups import FiniteGroup


def mul_table(G: FiniteGroup) -> List[List[int]]:
    return [[G.mul(a, b) for b in range(G.order)] for a in range(G.order)]


def naive_closure(table, elems) -> FrozenSet[int]:
    S = {0} | set(elems)
    while True:
        new = {table[a][b] for a in S for b in S} - S
        if not new:
            return frozenset(S)
        S |= new


def naive_inverse(table, x: int) -> int:
    return next(y for y in range(len(table)) if table[x][y] == 0)


def naive_is_normal(table, elems) -> bool:
    S = set(elems)
    n = len(table)
    return all(
        table[table[naive_inverse(table, g)][x]][g] in S for x in S for g in range(n)
    )


def naive_center(table) -> Set[int]:
    n = len(table)
    return {x for x in range(n) if all(table[x][y] == table[y][x] for y in range(n))}


def naive_element_order(table, x: int) -> int:
    y = x
    n = 1
    while y != 0:
        y = table[y][x]
        n += 1
    return n


def naive_exponent(table) -> int:
    return max(naive_element_order(table, x) for x in range(len(table)))


def naive_commutator_set(table, A, B) -> FrozenSet[int]:
    gens = set()
    for a in A:
        ai = naive_inverse(table, a)
        for b in B:
            bi = naive_inverse(table, b)
            gens.add(table[table[table[ai][bi]][a]][b])
    return naive_closure(table, gens)


def naive_power_set(table, elems, p: int, i: int) -> Set[int]:
    out = set()
    for x in elems:
        y = x
        for _ in range(p**i - 1):
            y = table[y][x]
        out.add(y)
    return out


def naive_all_subgroups(table) -> Set[FrozenSet[int]]:
    """Every subgroup, by closing every one-element extension (order <= 27)."""
    n = len(table)
    triv = frozenset({0})
    seen = {triv}
    queue = [triv]
    while queue:
        H = queue.pop()
        for x in range(n):
            if x in H:
                continue
            M = naive_closure(table, H | {x})
            if M not in seen:
                seen.add(M)
                queue.append(M)
    return seen


def conjugacy_classes(table) -> List[FrozenSet[int]]:
    n = len(table)
    seen = set()
    classes = []
    for x in range(n):
        if x in seen:
            continue
        cls = {
            table[table[naive_inverse(table, g)][x]][g] for g in range(n)
        }
        seen |= cls
        classes.append(frozenset(cls))
    return classes


def naive_normal_subgroups(table) -> Set[FrozenSet[int]]:
    """Normal subgroups as multiplication-closed unions of conjugacy classes."""
    classes = conjugacy_classes(table)
    triv = frozenset({0})
    seen = {triv}
    queue = [triv]
    while queue:
        N = queue.pop()
        for cls in classes:
            if cls <= N:
                continue
            M = naive_closure(table, N | cls)
            if M not in seen:
                seen.add(M)
                queue.append(M)
    return seen


def naive_is_powerfully_embedded(table, p: int, N, whole) -> bool:
    comm = naive_commutator_set(table, N, whole)
    power = naive_closure(table, naive_power_set(table, N, p, 1))
    return comm <= power


def naive_eta(table, p: int) -> FrozenSet[int]:
    whole = frozenset(range(len(table)))
    members = set()
    for N in naive_normal_subgroups(table):
        if naive_is_powerfully_embedded(table, p, N, whole):
            members |= N
    return naive_closure(table, members)
