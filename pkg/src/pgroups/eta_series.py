"""Powerfully embedded subgroups, the upper eta-series, powerful class and
height, and the coclass-side predicates built on them.

For an odd prime p, a normal subgroup N of a finite p-group G is powerfully
embedded when [N, G] <= N^p.  The largest such subgroup eta(G) exists (it is
the product of all of them, and that product is again powerfully embedded);
iterating eta on quotients yields the upper eta-series, whose length is the
powerful class of G.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import GreedyOracleMismatch, InvariantViolation, NoValidS, NotNormal
from .groups import FiniteGroup
from .subgroups import (
    NORMAL_SUBGROUP_BUDGET,
    Subgroup,
    SubgroupSeries,
    center,
    coclass,
    commutator_subgroup,
    enumerate_normal_subgroups,
    join,
    lower_central_term,
    nilpotency_class,
    power_subgroup,
    pull_back,
    push_forward,
    quotient,
    trivial_subgroup,
    whole_subgroup,
)

# The shortest-series BFS oracle cross-checks greedy powerful height on all
# groups up to this order.
_PWH_ORACLE_LIMIT = 729


def commutator_with_group(G: FiniteGroup, N: Subgroup) -> Subgroup:
    """[N, G], memoized per subgroup."""
    key = ("ngcomm", N.bits)
    hit = G.cache.get(key)
    if hit is None:
        hit = commutator_subgroup(G, N, whole_subgroup(G))
        G.cache[key] = hit
    return hit


def is_powerfully_embedded(G: FiniteGroup, N: Subgroup) -> bool:
    """[N, G] <= N^p (N must be normal)."""
    if not N.is_normal():
        raise NotNormal(f"powerfully-embedded test needs a normal subgroup in {G.label}")
    key = ("pwe", N.bits)
    hit = G.cache.get(key)
    if hit is None:
        pw = power_subgroup(G, N, 1).bits
        cm = commutator_with_group(G, N).bits
        hit = cm | pw == pw
        G.cache[key] = hit
    return hit


def is_powerful(G: FiniteGroup) -> bool:
    return is_powerfully_embedded(G, whole_subgroup(G))


def powerfully_embedded_normals(
    G: FiniteGroup, budget: int = NORMAL_SUBGROUP_BUDGET
) -> List[Subgroup]:
    """All powerfully embedded (normal) subgroups, smallest first."""
    hit = G.cache.get("pwe_normals")
    if hit is None:
        hit = [
            N
            for N in enumerate_normal_subgroups(G, budget)
            if is_powerfully_embedded(G, N)
        ]
        G.cache["pwe_normals"] = hit
    return hit


def eta(G: FiniteGroup, budget: int = NORMAL_SUBGROUP_BUDGET) -> Subgroup:
    """The largest powerfully embedded subgroup of G.

    Computed as the join of every powerfully embedded subgroup found by full
    normal-subgroup enumeration; the join is then itself certified as
    powerfully embedded and as containing the center.
    """
    hit = G.cache.get("eta")
    if hit is None:
        pes = powerfully_embedded_normals(G, budget)
        e = join(G, pes)
        if not is_powerfully_embedded(G, e):
            raise InvariantViolation(
                f"join of powerfully embedded subgroups of {G.label} is not powerfully embedded"
            )
        if not center(G) <= e:
            raise InvariantViolation(f"eta({G.label}) does not contain the center")
        G.cache["eta"] = hit = e
    return hit


@dataclass
class EtaStep:
    """Witness for one step of the upper eta-series."""

    quotient_order: int
    eta_of_quotient_order: int


@dataclass
class EtaReport:
    """The upper eta-series of a group together with its step witnesses."""

    series: SubgroupSeries
    powerful_class: int
    steps: List[EtaStep]


def upper_eta_series(G: FiniteGroup, budget: int = NORMAL_SUBGROUP_BUDGET) -> EtaReport:
    """eta_0 = 1, eta_{i+1}/eta_i = eta(G/eta_i), up to eta_k = G."""
    hit = G.cache.get("eta_report")
    if hit is None:
        terms = [trivial_subgroup(G)]
        steps: List[EtaStep] = []
        while not terms[-1].is_whole():
            Q, proj = quotient(G, terms[-1])
            eQ = eta(Q, budget)
            if eQ.is_trivial():
                raise InvariantViolation(
                    f"eta of the nontrivial quotient {Q.label} is trivial"
                )
            nxt = pull_back(proj, eQ, kernel=terms[-1])
            steps.append(EtaStep(Q.order, eQ.order))
            terms.append(nxt)
        for lo, hi, step in zip(terms, terms[1:], steps):
            assert hi.order == lo.order * step.eta_of_quotient_order
        series = SubgroupSeries("eta", "ascending", terms)
        hit = EtaReport(series, len(terms) - 1, steps)
        G.cache["eta_report"] = hit
    return hit


def powerful_class(G: FiniteGroup, budget: int = NORMAL_SUBGROUP_BUDGET) -> int:
    return upper_eta_series(G, budget).powerful_class


def is_eta_series(G: FiniteGroup, terms: Sequence[Subgroup]) -> bool:
    """True iff every step quotient N_{i+1}/N_i is powerfully embedded in G/N_i.

    The series must ascend from the trivial subgroup (ValueError otherwise);
    terms that fail to be normal make the answer False.
    """
    if not terms or not terms[0].is_trivial():
        raise ValueError("an eta-series must start at the trivial subgroup")
    if not all(a <= b for a, b in zip(terms, terms[1:])):
        raise ValueError("an eta-series must be ascending")
    if not all(t.is_normal() for t in terms):
        return False
    for lo, hi in zip(terms, terms[1:]):
        Q, proj = quotient(G, lo)
        img = push_forward(proj, hi)
        if not is_powerfully_embedded(Q, img):
            return False
    return True


def powerful_height(
    G: FiniteGroup,
    N: Subgroup,
    budget: int = NORMAL_SUBGROUP_BUDGET,
    oracle: Optional[bool] = None,
) -> int:
    """Length of the shortest eta-series from 1 to the normal subgroup N.

    The answer is produced greedily (each step joins every normal M <= N
    whose image is powerfully embedded in the current quotient).  The
    greedy-optimality argument is only known for the full upper eta-series,
    so a BFS shortest-path oracle over the normal-subgroup DAG cross-checks
    the result (always for |G| <= 729, controllable via ``oracle``); any
    disagreement raises GreedyOracleMismatch.
    """
    if not N.is_normal():
        raise NotNormal("powerful height is defined for normal subgroups")
    greedy = _pwh_greedy(G, N, budget)
    if oracle is None:
        oracle = G.order <= _PWH_ORACLE_LIMIT
    if oracle:
        shortest = _pwh_bfs(G, N, budget)
        if shortest != greedy:
            raise GreedyOracleMismatch(
                f"greedy powerful height {greedy} != BFS shortest {shortest} "
                f"for subgroup of order {N.order} in {G.label}"
            )
    return greedy


def _pwh_greedy(G: FiniteGroup, N: Subgroup, budget: int) -> int:
    steps = 0
    K = trivial_subgroup(G)
    while K.bits != N.bits:
        Q, proj = quotient(G, K)
        n_img = proj.image_bits(N.bits)
        cands = [
            M
            for M in enumerate_normal_subgroups(Q, budget)
            if not M.is_trivial()
            and M.bits | n_img == n_img
            and is_powerfully_embedded(Q, M)
        ]
        if not cands:
            raise InvariantViolation(
                f"no powerfully embedded step below N in {Q.label}; "
                "every finite p-group must admit one"
            )
        K = pull_back(proj, join(Q, cands), kernel=K)
        steps += 1
    return steps


def _pwh_bfs(G: FiniteGroup, N: Subgroup, budget: int) -> int:
    if N.is_trivial():
        return 0
    nodes = [
        M
        for M in enumerate_normal_subgroups(G, budget)
        if M.bits | N.bits == N.bits
    ]
    seen = {1}
    frontier = [trivial_subgroup(G)]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for K in frontier:
            Q, proj = quotient(G, K)
            for M in nodes:
                if M.bits in seen or M.bits & K.bits != K.bits:
                    continue
                img = push_forward(proj, M)
                if is_powerfully_embedded(Q, img):
                    if M.bits == N.bits:
                        return depth
                    seen.add(M.bits)
                    nxt.append(M)
        frontier = nxt
    raise InvariantViolation(
        f"subgroup of order {N.order} in {G.label} has no eta-series; impossible"
    )


def eta_capability_obstruction(G: FiniteGroup) -> Optional[str]:
    """A reason G cannot be Q/eta(Q) for any finite p-group Q, if one is known.

    Only the necessary conditions are tested: a nontrivial cyclic group never
    occurs, and an abelian one must be elementary abelian.  None means no
    obstruction was found, not that G is eta-capable.
    """
    if G.order == 1:
        return None
    if G.exponent() == G.order:
        return "nontrivial-cyclic"
    if G.is_abelian() and G.exponent() > G.p:
        return "abelian-not-elementary-abelian"
    return None


# -- coclass side ------------------------------------------------------------


@dataclass
class UniserialReport:
    """Uniserial action of G on gamma_m(G) and the power-shift identity.

    Populated only above the order threshold p^(2 p^r + r) for coclass r;
    ``shift_s`` is the found 0 <= s <= r-1 with gamma_i^p = gamma_{i+d} for
    all i >= m, where d = (p-1) p^s and m = p^r - p^(r-1).
    """

    applicable: bool
    coclass_r: int
    m: int
    shift_s: Optional[int] = None
    d: Optional[int] = None
    uniserial: Optional[bool] = None
    power_shift_checks: Tuple[Tuple[int, bool], ...] = ()


def uniserial_report(
    G: FiniteGroup, budget: int = NORMAL_SUBGROUP_BUDGET
) -> UniserialReport:
    """Verify uniserial action on gamma_m(G) for large groups of coclass r."""
    p = G.p
    r = coclass(G)
    if r == 0:  # only the trivial group; p^(r-1) would not be an integer
        return UniserialReport(applicable=False, coclass_r=0, m=0)
    m = p**r - p ** (r - 1)
    if G.order < p ** (2 * p**r + r):
        return UniserialReport(applicable=False, coclass_r=r, m=m)
    c = nilpotency_class(G)
    found = None
    checks: List[Tuple[int, bool]] = []
    for s in range(r):
        d = (p - 1) * p**s
        checks = []
        ok = True
        for i in range(m, c + 2):
            lhs = power_subgroup(G, lower_central_term(G, i), 1)
            rhs = lower_central_term(G, i + d)
            good = lhs.bits == rhs.bits
            checks.append((i, good))
            ok = ok and good
        if ok:
            found = s
            break
    if found is None:
        raise NoValidS(
            f"no shift 0 <= s <= {r - 1} satisfies gamma_i^p = gamma_(i+d) in {G.label}"
        )
    d = (p - 1) * p**found
    gm = lower_central_term(G, m)
    uniserial = True
    for H in enumerate_normal_subgroups(G, budget):
        if H.is_trivial() or H.bits | gm.bits != gm.bits:
            continue
        hg = commutator_with_group(G, H)
        if H.order != p * hg.order:
            uniserial = False
            break
    return UniserialReport(
        applicable=True,
        coclass_r=r,
        m=m,
        shift_s=found,
        d=d,
        uniserial=uniserial,
        power_shift_checks=tuple(checks),
    )


def pwccoclass_bound_check(G: FiniteGroup, budget: int = NORMAL_SUBGROUP_BUDGET) -> bool:
    """|G| <= p^(k+r+m-1) whenever |G| reaches the uniseriality threshold.

    k is the powerful class, r the coclass, m = p^r - p^(r-1); groups below
    the threshold p^(2 p^r + r) pass vacuously.
    """
    p = G.p
    r = coclass(G)
    if G.order < p ** (2 * p**r + r):
        return True
    k = powerful_class(G, budget)
    m = p**r - p ** (r - 1)
    return G.order <= p ** (k + r + m - 1)
