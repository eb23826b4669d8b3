import random

import pytest
from hypothesis import given, settings, strategies as st

from pgroups import (
    ELEMENT_CAP,
    FiniteGroup,
    InconsistentPresentation,
    InvalidWord,
    NotAbelian,
    NotAutomorphism,
    NotOddPrime,
    OrderMismatch,
    PcPresentation,
    SizeLimitExceeded,
    build_abelian,
    build_from_pc,
    build_semidirect,
    build_unitriangular,
    element_order,
    exponent_of,
    validate_odd_prime,
)
from pgroups.subgroups import center, quotient, trivial_subgroup, whole_subgroup

import oracles


def heisenberg_pres(p=3):
    return PcPresentation(p, 3, powers={}, conjugates={(2, 1): ((2, 1), (3, 1))})


# -- prime validation --------------------------------------------------------


@pytest.mark.parametrize("bad", [2, 4, 9, 1, 0, -3, 15])
def test_rejects_non_odd_primes(bad):
    with pytest.raises(NotOddPrime):
        validate_odd_prime(bad)


def test_every_constructor_rejects_two():
    with pytest.raises(NotOddPrime):
        build_abelian(2, [1, 1])
    with pytest.raises(NotOddPrime):
        build_unitriangular(3, 2, 1)
    with pytest.raises(NotOddPrime):
        build_from_pc(PcPresentation(2, 2))


# -- pc presentations ---------------------------------------------------------


def test_pc_single_generator_is_cyclic():
    G = build_from_pc(PcPresentation(3, 1))
    assert G.order == 3
    assert exponent_of(G) == 3
    assert element_order(G, G.generators[0]) == 3


def test_pc_heisenberg_matches_exhaustive_oracle():
    G = build_from_pc(heisenberg_pres())
    assert G.order == 27
    table = oracles.mul_table(G)
    # all 27 elements, identity excluded, have order 3
    assert {oracles.naive_element_order(table, x) for x in range(1, 27)} == {3}
    assert exponent_of(G) == 3
    for x in range(27):
        assert element_order(G, x) == oracles.naive_element_order(table, x)


def test_pc_self_referencing_relation_is_invalid():
    with pytest.raises(InvalidWord):
        build_from_pc(PcPresentation(3, 2, powers={1: ((1, 1),)}))


def test_pc_word_validation():
    with pytest.raises(InvalidWord):
        PcPresentation(3, 3, conjugates={(2, 1): ((1, 1),)}).validate()
    with pytest.raises(InvalidWord):
        PcPresentation(3, 3, powers={1: ((2, 5),)}).validate()
    with pytest.raises(InvalidWord):
        PcPresentation(3, 3, conjugates={(1, 2): ((3, 1),)}).validate()


def test_pc_inconsistent_presentation_detected():
    # g1^3 = g2 makes g2 a power of g1, contradicting g2^g1 = g2^2.
    pres = PcPresentation(
        3, 2, powers={1: ((2, 1),)}, conjugates={(2, 1): ((2, 2),)}
    )
    with pytest.raises(InconsistentPresentation):
        build_from_pc(pres)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_pc_fuzz_builds_or_rejects_cleanly(data):
    # random relation words of valid pc shape: collection must terminate and
    # either certify a group of order 27 or raise InconsistentPresentation
    def word(min_gen):
        gens = list(range(min_gen, 4))
        picked = data.draw(st.lists(st.sampled_from(gens), unique=True, max_size=len(gens)))
        return tuple(
            sorted((g, data.draw(st.integers(min_value=1, max_value=2))) for g in picked)
        )

    powers = {}
    for i in (1, 2):
        if data.draw(st.booleans()):
            powers[i] = word(i + 1)
    conjugates = {}
    for j, i in ((2, 1), (3, 1), (3, 2)):
        if data.draw(st.booleans()):
            conjugates[(j, i)] = word(j)
    pres = PcPresentation(3, 3, powers=powers, conjugates=conjugates)
    try:
        G = build_from_pc(pres)
    except InconsistentPresentation:
        return
    assert G.order == 27
    for x in (0, 5, 13, 26):
        assert G.mul(x, G.inv(x)) == 0
        assert element_order(G, x) in (1, 3, 9, 27)


def test_pc_modular_group_exponent():
    pres = PcPresentation(
        3, 3, powers={2: ((3, 1),)}, conjugates={(2, 1): ((2, 1), (3, 1))}
    )
    G = build_from_pc(pres)
    assert G.order == 27
    assert exponent_of(G) == 9


# -- unitriangular -------------------------------------------------------------


def test_unitriangular_two_by_two_is_cyclic():
    G = build_unitriangular(2, 3, 1)
    assert G.order == 3
    assert exponent_of(G) == 3


def test_unitriangular_heisenberg_fingerprint():
    G = build_unitriangular(3, 3, 1)
    H = build_from_pc(heisenberg_pres())
    assert G.order == H.order == 27
    ford = sorted(element_order(G, x) for x in G.elements())
    hord = sorted(element_order(H, x) for x in H.elements())
    assert ford == hord
    assert center(G).order == center(H).order == 3


def test_unitriangular_order_formula():
    G = build_unitriangular(3, 3, 2)
    assert G.order == 3**6
    assert build_unitriangular(4, 3, 1).order == 3**6


def test_unitriangular_coordinates_roundtrip():
    G = build_unitriangular(3, 3, 2)
    back = G.backend
    for x in [0, 1, 5, 100, 728]:
        assert back.index_of(back.matrix_of(x)) == x
    # generators are the superdiagonal transvections
    for i, g in enumerate(G.generators):
        mat = back.matrix_of(g)
        assert mat[i][i + 1] == 1


def test_unitriangular_size_cap():
    with pytest.raises(SizeLimitExceeded):
        build_unitriangular(4, 5, 2)


# -- abelian --------------------------------------------------------------------


def test_abelian_basic():
    G = build_abelian(3, [2, 2])
    assert G.order == 81
    assert exponent_of(G) == 9
    assert G.is_abelian()
    assert build_abelian(3, [1]).order == 3
    assert build_abelian(5, [2, 1, 1, 1]).order == 5**5


def test_abelian_rejects_bad_exponents():
    with pytest.raises(ValueError):
        build_abelian(3, [])
    with pytest.raises(ValueError):
        build_abelian(3, [0, 1])


@settings(max_examples=50, deadline=None)
@given(
    exps=st.lists(st.integers(min_value=1, max_value=3), min_size=1, max_size=3),
    seed=st.integers(min_value=0, max_value=10**6),
)
def test_abelian_group_laws(exps, seed):
    G = build_abelian(3, exps)
    rng = random.Random(seed)
    n = G.order
    for _ in range(20):
        x, y, z = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))
        assert G.mul(x, y) == G.mul(y, x)
        assert G.mul(x, G.inv(x)) == 0


# -- semidirect ------------------------------------------------------------------


def test_semidirect_trivial_action_is_direct_product():
    M = build_abelian(3, [1, 1])
    G = build_semidirect(M, list(M.generators), 1)
    assert G.order == 27
    assert G.is_abelian()


def test_semidirect_wrong_order_action():
    M = build_abelian(3, [2])
    g = M.generators[0]
    with pytest.raises(OrderMismatch):
        build_semidirect(M, [M.mul(g, g)], 1)  # g -> g^2 has order 6


def test_semidirect_not_an_automorphism():
    M = build_abelian(3, [2])
    g = M.generators[0]
    with pytest.raises(NotAutomorphism):
        build_semidirect(M, [M.pow(g, 3)], 1)  # g -> g^3 is not injective


def test_semidirect_requires_abelian_base():
    H = build_from_pc(heisenberg_pres())
    with pytest.raises(NotAbelian):
        build_semidirect(H, list(H.generators), 1)


def test_semidirect_element_cap():
    M = build_abelian(3, [6, 5])  # 3^11 * 3 > element cap
    with pytest.raises(SizeLimitExceeded):
        build_semidirect(M, list(M.generators), 1)
    assert 3**12 > ELEMENT_CAP >= 3**11


# -- group laws on every built kind ----------------------------------------------


def _law_sample(G: FiniteGroup, samples: int, seed: int = 7):
    rng = random.Random(seed)
    n = G.order
    mul = G.mul
    for _ in range(samples):
        x, y, z = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        assert mul(mul(x, y), z) == mul(x, mul(y, z))
    for _ in range(50):
        x = rng.randrange(n)
        assert mul(x, 0) == x and mul(0, x) == x
        assert mul(x, G.inv(x)) == 0


def test_group_laws_exhaustive_small(groups):
    # exhaustive associativity for every catalog group of order <= 3^5
    for name, params in [
        ("heisenberg", {"p": 3}),
        ("modular", {"p": 3}),
        ("abelian", {"p": 3, "exps": (2, 2)}),
        ("wreath", {"p": 3}),
        ("heisenberg", {"p": 5}),
        ("mann_nonpf", {"p": 3}),
        ("mainline_coclass1", {"p": 3, "k": 4}),
    ]:
        G = groups(name, **params)
        assert G.order <= 243
        tab = oracles.mul_table(G)
        n = G.order
        for x in range(n):
            tx = tab[x]
            for y in range(n):
                tw = tab[tx[y]]
                ty = tab[y]
                for z in range(n):
                    assert tw[z] == tx[ty[z]]


def test_group_laws_sampled_large(groups):
    for name, params in [
        ("unitriangular", {"n": 3, "p": 3, "m": 2}),
        ("mainline_coclass1", {"p": 3, "k": 6}),
        ("potent_nopwc", {"p": 5, "n": 1}),
        ("kirillov_quotient", {"p": 3, "e": 2}),
    ]:
        _law_sample(groups(name, **params), samples=100_000)


def test_group_laws_on_quotients(groups):
    G = groups("wreath", p=3)
    Q, _ = quotient(G, center(G))
    _law_sample(Q, samples=10_000)


def test_element_orders_are_p_powers(groups):
    G = groups("mann_nonpf", p=3)
    for x in G.elements():
        o = element_order(G, x)
        while o % 3 == 0:
            o //= 3
        assert o == 1
    assert element_order(G, 0) == 1


# -- quotients ---------------------------------------------------------------------


def test_quotient_by_trivial_is_same_group(groups):
    G = groups("heisenberg", p=3)
    Q, proj = quotient(G, trivial_subgroup(G))
    assert Q is G
    assert proj.mapping == list(range(27))


def test_quotient_by_whole_is_trivial(groups):
    G = groups("heisenberg", p=3)
    Q, proj = quotient(G, whole_subgroup(G))
    assert Q.order == 1
    assert proj.is_surjective()


def test_quotient_heisenberg_by_center(groups):
    G = groups("heisenberg", p=3)
    Q, proj = quotient(G, center(G))
    assert Q.order == 9
    assert Q.is_abelian()
    assert exponent_of(Q) == 3
    assert proj.is_surjective()
    # projection is a homomorphism everywhere, not just on the sample
    for a in range(27):
        for b in range(27):
            assert proj(G.mul(a, b)) == Q.mul(proj(a), proj(b))


def test_third_isomorphism_fingerprint(groups):
    from pgroups.subgroups import push_forward, lower_central_series

    G = groups("wreath", p=3)
    Z = center(G)
    gamma2 = lower_central_series(G).terms[1]
    Q1, proj = quotient(G, Z)
    img = push_forward(proj, gamma2)
    QQ, _ = quotient(Q1, img)
    direct, _ = quotient(G, gamma2)
    assert QQ.order == direct.order
    assert exponent_of(QQ) == exponent_of(direct)
    assert sorted(element_order(QQ, x) for x in QQ.elements()) == sorted(
        element_order(direct, x) for x in direct.elements()
    )


def test_mann_nonpf_big_prime_builds():
    # order 5^7 = 78125, function-backed multiplication
    from pgroups.catalog import catalog_build

    G = catalog_build("mann_nonpf", p=5)
    assert G.order == 5**7
    back = G.backend
    alpha = back.encode(1, 0)
    assert element_order(G, alpha) == 25
    x1 = back.encode(0, back.M.generators[0])
    assert G.pow(G.mul(alpha, x1), 5) == G.mul(G.pow(alpha, 5), back.encode(0, back.M.generators[-1]))
