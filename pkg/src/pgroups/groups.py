"""Exact finite p-group kernel.

Groups live on the dense element domain 0..order-1 with the identity at
index 0.  Multiplication is an exact integer function supplied by a
construction-specific backend (collection for pc presentations, matrix
arithmetic for unitriangular groups, coordinate arithmetic for abelian and
semidirect products, coset arithmetic for quotients).  Groups are immutable
after construction; per-group caches are filled lazily and idempotently.

Only odd primes are supported; every constructor rejects p = 2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import (
    InconsistentPresentation,
    InvalidWord,
    NotAbelian,
    NotAutomorphism,
    NotOddPrime,
    OrderMismatch,
    SizeLimitExceeded,
)

# Hard cap on the element domain of any single group (covers 3^7 and 5^7).
ELEMENT_CAP = 250_000

# Above this order, pc consistency falls back from the exhaustive
# (x, y, generator) associativity sweep to a sampled one.
_EXHAUSTIVE_PC_LIMIT = 2048

_CHECK_SEED = 0x5E_ED

# A word maps to g_{i1}^{e1} g_{i2}^{e2} ...; generator indices are 1-based
# and strictly increasing, exponents in 1..p-1.
Word = Tuple[Tuple[int, int], ...]


def validate_odd_prime(p: int) -> int:
    """Return p if it is an odd prime, else raise NotOddPrime."""
    if not isinstance(p, int) or p < 3:
        raise NotOddPrime(f"p must be an odd prime >= 3, got {p!r}")
    if p % 2 == 0:
        raise NotOddPrime(f"p = 2 is not supported (got {p})")
    d = 3
    while d * d <= p:
        if p % d == 0:
            raise NotOddPrime(f"{p} is not prime")
        d += 2
    return p


def _check_cap(order: int, what: str) -> int:
    if order > ELEMENT_CAP:
        raise SizeLimitExceeded(
            f"{what} would have order {order} > element cap {ELEMENT_CAP}"
        )
    return order


class FiniteGroup:
    """An explicit finite p-group with elements 0..order-1, identity 0.

    ``mul`` is the total multiplication; ``generators`` is a distinguished
    generating list (element indices).  ``backend`` keeps the
    construction-specific data (e.g. matrix coordinates) reachable.
    """

    def __init__(
        self,
        p: int,
        order: int,
        mul: Callable[[int, int], int],
        generators: Sequence[int],
        label: str = "group",
        backend: object = None,
        inv: Optional[Callable[[int], int]] = None,
    ) -> None:
        self.p = p
        self.order = order
        self.identity = 0
        self.mul = mul
        self.generators = list(generators)
        self.label = label
        self.backend = backend
        self._inv_fn = inv
        self._inv: Optional[List[int]] = None
        self._pth: Optional[List[int]] = None
        self._ordexp: Optional[List[int]] = None
        self._abelian: Optional[bool] = None
        self.cache: Dict[str, object] = {}

    # -- element arithmetic ------------------------------------------------

    def elements(self) -> range:
        return range(self.order)

    def pow(self, x: int, e: int) -> int:
        """x**e by square-and-multiply (e >= 0)."""
        result = 0
        base = x
        mul = self.mul
        while e:
            if e & 1:
                result = mul(result, base)
            base = mul(base, base)
            e >>= 1
        return result

    def inv(self, x: int) -> int:
        if self._inv is None:
            self._build_inverses()
        return self._inv[x]

    def _build_inverses(self) -> None:
        if self._inv_fn is not None:
            self._inv = [self._inv_fn(x) for x in self.elements()]
        else:
            self._inv = [self.pow(x, self.element_order(x) - 1) for x in self.elements()]

    def conj(self, x: int, g: int) -> int:
        """g^-1 x g."""
        return self.mul(self.mul(self.inv(g), x), g)

    def comm(self, x: int, y: int) -> int:
        """[x, y] = x^-1 y^-1 x y."""
        return self.mul(self.inv(self.mul(y, x)), self.mul(x, y))

    def pth_power(self, x: int) -> int:
        if self._pth is None:
            self._build_power_tables()
        return self._pth[x]

    def power_pi(self, x: int, i: int) -> int:
        """x**(p**i) via the cached p-th power map."""
        if self._pth is None:
            self._build_power_tables()
        pth = self._pth
        for _ in range(i):
            x = pth[x]
        return x

    def _build_power_tables(self) -> None:
        mul, p = self.mul, self.p
        pth = []
        for x in self.elements():
            y = x
            for _ in range(p - 1):
                y = mul(y, x)
            pth.append(y)
        self._pth = pth
        ordexp = [-1] * self.order
        ordexp[0] = 0
        for x in self.elements():
            chain = []
            y = x
            while ordexp[y] < 0:
                chain.append(y)
                y = pth[y]
            k = ordexp[y]
            for z in reversed(chain):
                k += 1
                ordexp[z] = k
        self._ordexp = ordexp

    def order_exponent(self, x: int) -> int:
        """k such that the order of x is p**k."""
        if self._ordexp is None:
            self._build_power_tables()
        return self._ordexp[x]

    def element_order(self, x: int) -> int:
        return self.p ** self.order_exponent(x)

    def exponent(self) -> int:
        if self._ordexp is None:
            self._build_power_tables()
        return self.p ** max(self._ordexp)

    def is_abelian(self) -> bool:
        if self._abelian is None:
            mul = self.mul
            self._abelian = all(
                mul(a, b) == mul(b, a)
                for a in self.generators
                for b in self.generators
            )
        return self._abelian

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label}, p={self.p}, order={self.order})"

    # -- construction-time sanity -----------------------------------------

    def spot_check(self, triples: int = 200) -> None:
        """Sampled identity/inverse/associativity check; raises on failure."""
        rng = random.Random(_CHECK_SEED)
        mul, n = self.mul, self.order
        for _ in range(triples):
            x, y, z = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if mul(mul(x, y), z) != mul(x, mul(y, z)):
                raise InconsistentPresentation(
                    f"associativity fails at ({x}, {y}, {z}) in {self.label}"
                )
            if mul(x, 0) != x or mul(0, x) != x:
                raise InconsistentPresentation(f"identity law fails at {x}")
        for x in (rng.randrange(n) for _ in range(20)):
            if mul(x, self.inv(x)) != 0:
                raise InconsistentPresentation(f"inverse law fails at {x}")


def generated_elements(G: FiniteGroup, gens: Sequence[int], limit: Optional[int] = None) -> set:
    """Orbit closure of the identity under right multiplication by gens."""
    seen = {0}
    frontier = [0]
    mul = G.mul
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
                    if limit is not None and len(seen) > limit:
                        return seen
        frontier = new
    return seen


class GroupHom:
    """A homomorphism between explicit groups, stored as a total index map."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, mapping: Sequence[int]):
        self.source = source
        self.target = target
        self.mapping = list(mapping)
        self._surjective: Optional[bool] = None
        self._verify()

    def _verify(self) -> None:
        # Spot check: all generator pairs plus 1000 seeded random pairs.
        mg = self.mapping
        smul, tmul = self.source.mul, self.target.mul
        pairs = [(a, b) for a in self.source.generators for b in self.source.generators]
        rng = random.Random(_CHECK_SEED)
        n = self.source.order
        pairs += [(rng.randrange(n), rng.randrange(n)) for _ in range(1000)]
        for a, b in pairs:
            if mg[smul(a, b)] != tmul(mg[a], mg[b]):
                raise InconsistentPresentation(
                    f"map {self.source.label} -> {self.target.label} is not a homomorphism at ({a}, {b})"
                )

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def image_bits(self, bits: int) -> int:
        out = 0
        mg = self.mapping
        while bits:
            low = bits & -bits
            out |= 1 << mg[low.bit_length() - 1]
            bits ^= low
        return out

    def preimage_bits(self, bits: int) -> int:
        out = 0
        for x, y in enumerate(self.mapping):
            if (bits >> y) & 1:
                out |= 1 << x
        return out

    def is_surjective(self) -> bool:
        if self._surjective is None:
            self._surjective = len(set(self.mapping)) == self.target.order
        return self._surjective


# -- pc presentations ------------------------------------------------------


@dataclass(frozen=True)
class PcPresentation:
    """Power-conjugate presentation with all relative orders equal to p.

    ``powers[i]`` is the normal word equal to g_i^p (omitted: g_i^p = 1) and
    may only use generators > i.  ``conjugates[(j, i)]`` with j > i is the
    normal word equal to g_j^{g_i} (omitted: g_j and g_i commute) and may
    only use generators >= j.
    """

    p: int
    ngens: int
    powers: Dict[int, Word] = field(default_factory=dict)
    conjugates: Dict[Tuple[int, int], Word] = field(default_factory=dict)

    def validate(self) -> None:
        validate_odd_prime(self.p)
        if self.ngens < 1:
            raise InvalidWord(f"ngens must be >= 1, got {self.ngens}")
        for i, word in self.powers.items():
            if not 1 <= i <= self.ngens:
                raise InvalidWord(f"power relation for out-of-range generator {i}")
            self._check_word(word, min_gen=i + 1, what=f"g_{i}^p")
        for key, word in self.conjugates.items():
            j, i = key
            if not (1 <= i < j <= self.ngens):
                raise InvalidWord(f"conjugate relation key {key} must have ngens >= j > i >= 1")
            self._check_word(word, min_gen=j, what=f"g_{j}^g_{i}")

    def _check_word(self, word: Word, min_gen: int, what: str) -> None:
        prev = 0
        for gen, exp in word:
            if not min_gen <= gen <= self.ngens:
                raise InvalidWord(
                    f"{what} references g_{gen}; only g_{min_gen}..g_{self.ngens} are permitted"
                )
            if gen <= prev:
                raise InvalidWord(f"{what} is not a normal word (generator order)")
            if not 0 <= exp < self.p:
                raise InvalidWord(f"{what} has exponent {exp} outside 0..{self.p - 1}")
            prev = gen


class _PcBackend:
    """Collection from the left on normal words for a pc presentation.

    Elements are exponent vectors in {0..p-1}^n, encoded radix-p with g_1 as
    the most significant digit; the identity is 0 and g_i has index
    p^(n-i).  ``mul_gen`` (u * g_i in normal form) is memoized, so repeated
    multiplications amortize to dictionary lookups.
    """

    def __init__(self, pres: PcPresentation):
        self.pres = pres
        self.p = pres.p
        self.n = pres.ngens
        self.order = pres.p ** pres.ngens
        # Conjugate/power words normalized to tuples, with identity defaults.
        self._powers = {i: tuple(w) for i, w in pres.powers.items()}
        self._conj = {k: tuple(w) for k, w in pres.conjugates.items()}
        self._strides = [self.p ** (self.n - i) for i in range(1, self.n + 1)]
        self._memo: Dict[int, int] = {}

    def decode(self, x: int) -> List[int]:
        out = []
        for s in self._strides:
            d, x = divmod(x, s)
            out.append(d)
        return out

    def encode(self, vec: Sequence[int]) -> int:
        x = 0
        for d, s in zip(vec, self._strides):
            x += d * s
        return x

    def generator(self, i: int) -> int:
        return self._strides[i - 1]

    def mul_gen(self, u: int, i: int) -> int:
        """Normal form of u * g_i."""
        key = u * (self.n + 1) + i
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        e = self.decode(u)
        pending: List[Tuple[int, int]] = []
        head = e[:]
        for j in range(i, self.n):
            head[j] = 0
        head[i - 1] = e[i - 1] + 1
        if head[i - 1] == self.p:
            head[i - 1] = 0
            pending.extend(self._powers.get(i, ()))
        for j in range(i + 1, self.n + 1):
            ej = e[j - 1]
            if ej:
                # (g_j^{e_j})^{g_i} = (g_j^{g_i})^{e_j}
                w = self._conj.get((j, i), ((j, 1),))
                pending.extend(w * ej)
        result = self.encode(head)
        for gen, exp in pending:
            for _ in range(exp):
                result = self.mul_gen(result, gen)
        self._memo[key] = result
        return result

    def mul(self, a: int, b: int) -> int:
        result = a
        for j, s in enumerate(self._strides, start=1):
            d = (b // s) % self.p
            for _ in range(d):
                result = self.mul_gen(result, j)
        return result


def build_from_pc(pres: PcPresentation, label: Optional[str] = None) -> FiniteGroup:
    """Realize a pc presentation as an explicit group of order p^ngens.

    Consistency is certified by an associativity sweep over (x, y, g) with g
    a pc generator (exhaustive up to order 2048, sampled with 10^5 triples
    above) together with the check that every element has p-power order
    reaching the identity.
    """
    pres.validate()
    order = _check_cap(pres.p ** pres.ngens, "pc group")
    back = _PcBackend(pres)
    G = FiniteGroup(
        pres.p,
        order,
        back.mul,
        [back.generator(i) for i in range(1, pres.ngens + 1)],
        label=label or f"pc(p={pres.p},n={pres.ngens})",
        backend=back,
    )
    _check_pc_consistency(G, back)
    return G


def _check_pc_consistency(G: FiniteGroup, back: _PcBackend) -> None:
    mul = G.mul
    n = G.order
    if n <= _EXHAUSTIVE_PC_LIMIT:
        gens = G.generators
        for x in range(n):
            if mul(0, x) != x or mul(x, 0) != x:
                raise InconsistentPresentation(f"identity law fails at {x}")
            for y in range(n):
                xy = mul(x, y)
                for g in gens:
                    if mul(xy, g) != mul(x, mul(y, g)):
                        raise InconsistentPresentation(
                            f"collection is not associative at ({x}, {y}, g={g})"
                        )
    else:
        rng = random.Random(_CHECK_SEED)
        for _ in range(100_000):
            x, y, z = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if mul(mul(x, y), z) != mul(x, mul(y, z)):
                raise InconsistentPresentation(
                    f"collection is not associative at ({x}, {y}, {z})"
                )
    # Order check: every element must reach the identity along p-th powers,
    # which also certifies invertibility (hence |G| = p^n distinct elements).
    p = G.p
    reach = [-1] * n
    reach[0] = 0
    for x in range(n):
        chain = []
        y = x
        while reach[y] < 0:
            chain.append(y)
            reach[y] = -2
            y = G.pow(y, p)
            if reach[y] == -2:
                raise InconsistentPresentation(
                    f"element {x} has non-p-power order (power cycle misses identity)"
                )
        for z in chain:
            reach[z] = 1


# -- direct products of cyclic groups --------------------------------------


class _AbelianBackend:
    """Mixed-radix coordinates, componentwise modular addition."""

    def __init__(self, p: int, exps: Sequence[int]):
        self.p = p
        self.exps = list(exps)
        self.radices = [p**e for e in exps]
        strides = []
        s = 1
        for r in self.radices:
            strides.append(s)
            s *= r
        self.strides = strides
        self.order = s

    def decode(self, x: int) -> List[int]:
        out = []
        for r in self.radices:
            x, d = divmod(x, r)
            out.append(d)
        return out

    def encode(self, vec: Sequence[int]) -> int:
        return sum(d % r * s for d, r, s in zip(vec, self.radices, self.strides))

    def mul(self, a: int, b: int) -> int:
        x = 0
        for r, s in zip(self.radices, self.strides):
            a2, da = divmod(a, r)
            b2, db = divmod(b, r)
            x += (da + db) % r * s
            a, b = a2, b2
        return x

    def inv(self, a: int) -> int:
        x = 0
        for r, s in zip(self.radices, self.strides):
            a, d = divmod(a, r)
            x += (-d) % r * s
        return x


def build_abelian(p: int, exps: Sequence[int], label: Optional[str] = None) -> FiniteGroup:
    """Direct product of cyclic groups of orders p^e for e in exps."""
    validate_odd_prime(p)
    exps = list(exps)
    if not exps or any(e < 1 for e in exps):
        raise ValueError(f"exponents must be a nonempty list of integers >= 1, got {exps}")
    back = _AbelianBackend(p, exps)
    _check_cap(back.order, "abelian group")
    G = FiniteGroup(
        p,
        back.order,
        back.mul,
        list(back.strides),
        label=label or "C" + "xC".join(str(p**e) for e in exps),
        backend=back,
        inv=back.inv,
    )
    G._abelian = True
    G.spot_check()
    return G


# -- unitriangular matrix groups -------------------------------------------


class _UnitriangularBackend:
    """Upper unitriangular n x n matrices over Z/p^m.

    The strictly-upper entries, read row by row, are the digits of the
    element index in radix p^m (first position least significant), so matrix
    coordinates are recoverable from the index in O(n^2).
    """

    def __init__(self, n: int, p: int, m: int):
        self.n = n
        self.p = p
        self.m = m
        self.q = p**m
        self.positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
        self.order = self.q ** len(self.positions)

    def matrix_of(self, x: int) -> List[List[int]]:
        n = self.n
        mat = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for i, j in self.positions:
            x, d = divmod(x, self.q)
            mat[i][j] = d
        return mat

    def index_of(self, mat: Sequence[Sequence[int]]) -> int:
        x = 0
        s = 1
        for i, j in self.positions:
            x += mat[i][j] % self.q * s
            s *= self.q
        return x

    def mul(self, a: int, b: int) -> int:
        A = self.matrix_of(a)
        B = self.matrix_of(b)
        n, q = self.n, self.q
        C = [[0] * n for _ in range(n)]
        for i in range(n):
            Ai = A[i]
            Ci = C[i]
            for k in range(i, n):
                aik = Ai[k]
                if aik:
                    Bk = B[k]
                    for j in range(k, n):
                        Ci[j] = (Ci[j] + aik * Bk[j]) % q
        return self.index_of(C)

    def transvection(self, i: int) -> int:
        mat = [[1 if r == c else 0 for c in range(self.n)] for r in range(self.n)]
        mat[i][i + 1] = 1
        return self.index_of(mat)


def build_unitriangular(n: int, p: int, m: int, label: Optional[str] = None) -> FiniteGroup:
    """Upper unitriangular n x n matrices over Z/p^m, order p^(m n(n-1)/2)."""
    validate_odd_prime(p)
    if n < 2:
        raise ValueError(f"matrix dimension must be >= 2, got {n}")
    if m < 1:
        raise ValueError(f"modulus exponent must be >= 1, got {m}")
    back = _UnitriangularBackend(n, p, m)
    _check_cap(back.order, f"UT_{n}(Z/{p}^{m})")
    gens = [back.transvection(i) for i in range(n - 1)]
    G = FiniteGroup(
        p, back.order, back.mul, gens, label=label or f"UT{n}(Z/{p**m})", backend=back
    )
    if back.order <= 32768:
        # Superdiagonal transvections must generate the whole group.
        if len(generated_elements(G, gens)) != back.order:
            raise OrderMismatch("transvections do not generate the unitriangular group")
    G.spot_check()
    return G


# -- semidirect products C_{p^t} acting on an abelian group ----------------


class _SemidirectBackend:
    """Pairs (a, m) = alpha^a m with (a1,m1)(a2,m2) = (a1+a2, alpha^a2(m1) m2).

    ``alpha`` is the conjugation action m |-> m^alpha, stored as full element
    maps for every power of the generator.
    """

    def __init__(self, M: FiniteGroup, pow_maps: List[List[int]], t: int):
        self.M = M
        self.pow_maps = pow_maps
        self.t = t
        self.amod = M.p**t
        self.order = M.order * self.amod

    def decode(self, x: int) -> Tuple[int, int]:
        return divmod(x, self.M.order)

    def encode(self, a: int, m: int) -> int:
        return a * self.M.order + m

    def mul(self, x: int, y: int) -> int:
        a1, m1 = divmod(x, self.M.order)
        a2, m2 = divmod(y, self.M.order)
        return ((a1 + a2) % self.amod) * self.M.order + self.M.mul(
            self.pow_maps[a2][m1], m2
        )


def extend_to_automorphism(M: FiniteGroup, images: Sequence[int]) -> List[int]:
    """Extend generator images to a full automorphism map of abelian M.

    Raises NotAutomorphism when the images do not define one.
    """
    if len(images) != len(M.generators):
        raise NotAutomorphism(
            f"expected {len(M.generators)} generator images, got {len(images)}"
        )
    amap = [-1] * M.order
    amap[0] = 0
    frontier = [0]
    gens = M.generators
    mul = M.mul
    while frontier:
        new = []
        for x in frontier:
            fx = amap[x]
            for g, fg in zip(gens, images):
                y = mul(x, g)
                if amap[y] < 0:
                    amap[y] = mul(fx, fg)
                    new.append(y)
        frontier = new
    if min(amap) < 0:
        raise NotAutomorphism("generators do not generate M")
    # Homomorphism on every (x, generator) pair extends inductively to all words.
    for x in M.elements():
        fx = amap[x]
        for g, fg in zip(gens, images):
            if amap[mul(x, g)] != mul(fx, fg):
                raise NotAutomorphism(f"images do not define a homomorphism at ({x}, {g})")
    if len(set(amap)) != M.order:
        raise NotAutomorphism("extended map is not bijective")
    return amap


def build_semidirect(
    M: FiniteGroup,
    alpha_images: Sequence[int],
    t: int,
    label: Optional[str] = None,
) -> FiniteGroup:
    """Cyclic extension <alpha> x| M with |alpha| = p^t acting by alpha_images.

    ``alpha_images`` lists m^alpha for each distinguished generator m of M;
    the action of alpha^{p^t} must be the identity.
    """
    if not M.is_abelian():
        raise NotAbelian(f"{M.label} is not abelian")
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    amap = extend_to_automorphism(M, alpha_images)
    amod = M.p**t
    _check_cap(M.order * amod, "semidirect product")
    pow_maps = [list(range(M.order)), amap]
    for _ in range(2, amod):
        prev = pow_maps[-1]
        pow_maps.append([amap[x] for x in prev])
    full = [amap[x] for x in pow_maps[-1]] if amod > 1 else amap
    if full != pow_maps[0]:
        raise OrderMismatch(f"alpha^(p^{t}) is not the identity automorphism")
    back = _SemidirectBackend(M, pow_maps, t)
    gens = [back.encode(1, 0)] + [back.encode(0, g) for g in M.generators]
    G = FiniteGroup(
        M.p, back.order, back.mul, gens,
        label=label or f"C{amod}:|{M.label}", backend=back,
    )
    G.spot_check()
    return G


def element_order(G: FiniteGroup, x: int) -> int:
    """Least p-power p^k with x^(p^k) = 1."""
    return G.element_order(x)


def exponent_of(G: FiniteGroup) -> int:
    """Maximum element order (always a p-power)."""
    return G.exponent()
