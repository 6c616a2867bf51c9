"""Arithmetic and combinatorics on Z/2^n and its unit group.

The unit group of Z/2^n (n >= 3) is <5> x <-1>; every unit is written
uniquely as ``eps + 2^b * v`` with ``eps = +-1``, ``2 <= b <= n-1`` and
``v`` odd, or is one of ``+-1`` itself.  Most of what the higher layers
need (orders, subgroup shapes, geometric-sum valuations, orbits of the
multiplication maps) follows from that decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "Residue",
    "UnitElement",
    "SubgroupDescriptor",
    "Orbit",
    "OrbitPartition",
    "OrbitPairing",
    "v2",
    "unit_decompose",
    "brute_order",
    "closure",
    "all_subgroups",
    "subgroup_classify",
    "geom_sum",
    "geom_sum_valuation",
    "orbits",
    "orbit_pairing",
]


def v2(k: int) -> int:
    """2-adic valuation of a nonzero integer."""
    if k == 0:
        raise ValueError("valuation undefined for 0")
    k = abs(k)
    return (k & -k).bit_length() - 1


@dataclass(frozen=True)
class Residue:
    value: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("modulus exponent must be non-negative")
        object.__setattr__(self, "value", self.value % (1 << self.n))

    @property
    def modulus(self) -> int:
        return 1 << self.n

    def __add__(self, other):
        return Residue(self.value + _val(other), self.n)

    def __sub__(self, other):
        return Residue(self.value - _val(other), self.n)

    def __mul__(self, other):
        return Residue(self.value * _val(other), self.n)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.n)

    def __int__(self):
        return self.value

    def is_unit(self) -> bool:
        return self.value % 2 == 1 or self.n == 0


def _val(x) -> int:
    return x.value if isinstance(x, Residue) else int(x)


@dataclass(frozen=True)
class UnitElement:
    """A unit ``r`` of Z/2^n together with its sign decomposition.

    ``r == sign + 2^b * v (mod 2^n)``.  For ``r == +-1`` we store ``b = n``
    and ``v = 0``.
    """

    residue: Residue
    sign: int
    b: int
    v: int
    order: int

    @property
    def value(self) -> int:
        return self.residue.value

    @property
    def n(self) -> int:
        return self.residue.n

    @property
    def log_order(self) -> int:
        return self.order.bit_length() - 1

    def inverse(self) -> "UnitElement":
        return unit_decompose(pow(self.value, -1, 1 << self.n), self.n) if self.n else self

    def __mul__(self, other: "UnitElement") -> "UnitElement":
        return unit_decompose(self.value * other.value, self.n)

    def __pow__(self, e: int) -> "UnitElement":
        if e < 0:
            return self.inverse() ** (-e)
        return unit_decompose(pow(self.value, e, 1 << self.n), self.n)

    def __repr__(self):
        return f"UnitElement({self.value} mod 2^{self.n}, order={self.order})"


def unit_decompose(r: int | Residue, n: int | None = None) -> UnitElement:
    """Decompose an odd residue into ``(sign, b, v)`` and read off its order."""
    if isinstance(r, Residue):
        n = r.n
        r = r.value
    if n is None:
        raise TypeError("modulus exponent n is required for an int residue")
    mod = 1 << n
    r %= mod
    if n == 0:
        return UnitElement(Residue(0, 0), 1, 0, 0, 1)
    if r % 2 == 0:
        raise ValueError(f"{r} is not a unit mod 2^{n}")
    res = Residue(r, n)
    if n == 1:
        return UnitElement(res, 1, 1, 0, 1)
    if n == 2:
        if r == 1:
            return UnitElement(res, 1, 2, 0, 1)
        return UnitElement(res, -1, 2, 0, 2)
    sign = 1 if r % 4 == 1 else -1
    d = (r - sign) % mod
    if d == 0:
        return UnitElement(res, sign, n, 0, 1 if sign == 1 else 2)
    b = v2(d)
    return UnitElement(res, sign, b, d >> b, 1 << (n - b))


def brute_order(r: int, n: int) -> int:
    """Multiplicative order of ``r`` mod 2^n by repeated multiplication."""
    mod = 1 << n
    x, k = r % mod, 1
    while x != 1 % mod:
        x = x * r % mod
        k += 1
    return k


def closure(gens: Iterable[int], n: int) -> frozenset[int]:
    """Subgroup of (Z/2^n)^* generated by ``gens``."""
    mod = 1 << n
    gens = [g % mod for g in gens]
    seen = {1 % mod}
    frontier = [1 % mod]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * g % mod
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return frozenset(seen)


_TAGS = ("trivial", "minus_one", "cyclic_plus", "cyclic_minus", "product")


@dataclass(frozen=True)
class SubgroupDescriptor:
    """One of the subgroup shapes of (Z/2^n)^*.

    ``cyclic_plus(a)``  = <1 + 2^(n-a)>, order 2^a
    ``cyclic_minus(a)`` = <-1 + 2^(n-a)>, order 2^a
    ``product(a)``      = <-1> x <1 + 2^(n-a)>, order 2^(a+1)
    """

    tag: str
    n: int
    a: int = 0

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError(f"unknown subgroup tag {self.tag!r}")

    @property
    def is_cyclic(self) -> bool:
        return self.tag != "product"

    @property
    def canonical_generators(self) -> tuple[int, ...]:
        mod = 1 << self.n
        if self.tag == "trivial":
            return ()
        if self.tag == "minus_one":
            return (mod - 1,)
        step = 1 << (self.n - self.a)
        if self.tag == "cyclic_plus":
            return ((1 + step) % mod,)
        if self.tag == "cyclic_minus":
            return ((step - 1) % mod,)
        return ((1 + step) % mod, mod - 1)

    def elements(self) -> frozenset[int]:
        return closure(self.canonical_generators, self.n)

    @property
    def order(self) -> int:
        return {"trivial": 1, "minus_one": 2, "product": 2 << self.a}.get(self.tag, 1 << self.a)

    def __str__(self):
        if self.tag == "trivial":
            return "1"
        if self.tag == "minus_one":
            return "<-1>"
        if self.tag == "cyclic_plus":
            return f"<1+2^{self.n - self.a}>"
        if self.tag == "cyclic_minus":
            return f"<-1+2^{self.n - self.a}>"
        return f"<-1>x<1+2^{self.n - self.a}>"


def all_subgroups(n: int) -> list[SubgroupDescriptor]:
    """Every subgroup of (Z/2^n)^*, each exactly once."""
    out = [SubgroupDescriptor("trivial", n)]
    if n >= 2:
        out.append(SubgroupDescriptor("minus_one", n))
    for a in range(1, n - 1):
        out.append(SubgroupDescriptor("cyclic_plus", n, a))
        out.append(SubgroupDescriptor("cyclic_minus", n, a))
    for a in range(1, n - 1):
        out.append(SubgroupDescriptor("product", n, a))
    return out


def subgroup_classify(gens: Sequence[int | UnitElement], n: int) -> SubgroupDescriptor:
    """Name the subgroup generated by ``gens``.

    Candidates are narrowed by the largest order among the generators and
    the presence of an element ``= 3 (mod 4)``; the final decision is set
    equality against the reconstructed subgroup.
    """
    vals = [g.value if isinstance(g, UnitElement) else g % (1 << n) for g in gens]
    for g in vals:
        if g % 2 == 0 and n > 0:
            raise ValueError(f"{g} is not a unit mod 2^{n}")
    target = closure(vals, n)
    for desc in all_subgroups(n):
        if desc.order == len(target) and desc.elements() == target:
            return desc
    raise AssertionError(f"subgroup {sorted(target)} mod 2^{n} matched no shape")


def geom_sum(r: int | UnitElement, j: int, n: int | None = None) -> int:
    """``(r^(j-1) + ... + r + 1) mod 2^n`` by direct iteration."""
    if isinstance(r, UnitElement):
        n = r.n
        r = r.value
    mod = 1 << n
    total, p = 0, 1
    for _ in range(j):
        total = (total + p) % mod
        p = p * r % mod
    return total


def geom_sum_valuation(r: UnitElement) -> int | None:
    """Valuation of ``r^(2^a - 1) + ... + r + 1`` where ``2^a = ord(r)``.

    Returns ``a`` for ``r = 1 + 2^(n-a) v``, ``n - 1`` for
    ``r = -1 + 2^(n-a) v`` with ``v`` odd, and ``None`` when the sum vanishes
    mod 2^n (``r = -1``).
    """
    if r.order == 1:
        raise ValueError("trivial unit: the sum has 2^0 = 1 term; handle separately")
    if r.sign == 1:
        return r.log_order
    if r.v == 0:
        return None
    return r.n - 1


@dataclass(frozen=True)
class Orbit:
    elements: tuple[int, ...]

    @property
    def rep(self) -> int:
        return self.elements[0]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, j):
        return j in self.elements


@dataclass(frozen=True)
class OrbitPartition:
    multiplier: int
    n: int
    orbits: tuple[Orbit, ...]

    def orbit_of(self, j: int) -> Orbit:
        for o in self.orbits:
            if j in o:
                return o
        raise KeyError(j)

    def __iter__(self):
        return iter(self.orbits)

    def __len__(self):
        return len(self.orbits)


def _domain(selector, n: int) -> list[int]:
    mod = 1 << n
    if selector == "all":
        return list(range(mod))
    if selector == "units":
        return list(range(1, mod, 2)) if n else [0]
    if selector == "evens":
        return list(range(0, mod, 2))
    if selector == "nonfixed":
        half = mod >> 1
        return [j for j in range(mod) if j not in (0, half)]
    if selector == "evens-minus-fixed":
        half = mod >> 1
        return [j for j in range(0, mod, 2) if j not in (0, half)]
    return sorted({j % mod for j in selector})


def orbits(r: int | UnitElement, n: int | None = None, domain="all") -> OrbitPartition:
    """Orbits of ``j -> r*j`` on a domain inside Z/2^n.

    Each orbit starts at its smallest element and is listed in power order
    ``[j, rj, r^2 j, ...]``; orbits are sorted by representative.
    """
    if isinstance(r, UnitElement):
        n = r.n
        r = r.value
    mod = 1 << n
    points = _domain(domain, n)
    pset = set(points)
    seen: set[int] = set()
    out = []
    for j in points:
        if j in seen:
            continue
        orb = [j]
        seen.add(j)
        x = j * r % mod
        while x != j:
            if x not in pset:
                raise ValueError(f"domain not closed under multiplication by {r}")
            orb.append(x)
            seen.add(x)
            x = x * r % mod
        out.append(Orbit(tuple(orb)))
    return OrbitPartition(r % mod, n, tuple(out))


@dataclass(frozen=True)
class OrbitPairing:
    """Orbits off ``{0, 2^(n-1)}`` grouped as ``(G, -G)``.

    The negated partner is listed from ``-rep`` in power order, so that
    ``pairs[t][1][i] == -pairs[t][0][i]``.
    """

    multiplier: int
    n: int
    pairs: tuple[tuple[Orbit, Orbit], ...]
    fixed: tuple[int, int]
    self_paired: tuple[Orbit, ...] = field(default=())


def orbit_pairing(r: int | UnitElement, n: int | None = None) -> OrbitPairing:
    if isinstance(r, UnitElement):
        n = r.n
        r = r.value
    if n is None or n < 3 or r % 4 != 1:
        raise ValueError("pairing requires r = 1 (mod 4) of canonical form and n >= 3")
    mod = 1 << n
    part = orbits(r, n, "nonfixed")
    used: set[int] = set()
    pairs = []
    selfp = []
    for orb in part:
        if orb.rep in used:
            continue
        used.update(orb)
        neg = [(-x) % mod for x in orb]
        if neg[0] in orb:
            selfp.append(orb)
            continue
        used.update(neg)
        pairs.append((orb, Orbit(tuple(neg))))
    return OrbitPairing(r % mod, n, tuple(pairs), (0, mod >> 1), tuple(selfp))
