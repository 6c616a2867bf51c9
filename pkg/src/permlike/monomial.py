"""Monomial matrices with root-of-unity coefficients.

A :class:`MonomialMatrix` of dimension ``2^n`` is written in the eigenbasis
``e_0, ..., e_{2^n - 1}`` of the maximal cycle ``C = diag(lambda_n^j)``.
Column ``j`` holds a single entry ``lambda_N^{coeffs[j]}`` in row
``perm[j]``, i.e. ``M e_j = lambda_N^{coeffs[j]} e_{perm[j]}``.  ``N`` is the
coefficient level; ``lambda_n = lambda_N^(2^(N-n))``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import lcm
from typing import Iterable, Sequence

from .cyclotomic import RootOfUnity
from .errors import NotNormalizingError
from .residue import UnitElement, unit_decompose

__all__ = [
    "MonomialMatrix",
    "CharPolyFactors",
    "PermVerdict",
    "relation_of",
    "char_factors",
    "eigen_multiset",
    "perm_similarity",
    "is_permutation_matrix",
]


class MonomialMatrix:
    __slots__ = ("n", "level", "perm", "coeffs", "_hash")

    def __init__(self, n: int, level: int, perm: Sequence[int], coeffs: Sequence[int], check=True):
        self.n = n
        self.level = level
        self.perm = tuple(perm)
        mod = 1 << level
        self.coeffs = tuple(c % mod for c in coeffs)
        self._hash = None
        if check:
            d = 1 << n
            if level < n:
                raise ValueError(f"coefficient level {level} below dimension exponent {n}")
            if len(self.perm) != d or len(self.coeffs) != d:
                raise ValueError(f"expected {d} entries")
            if sorted(self.perm) != list(range(d)):
                raise ValueError("perm is not a bijection")

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, n: int, level: int | None = None) -> "MonomialMatrix":
        level = n if level is None else level
        d = 1 << n
        return cls(n, level, range(d), [0] * d, check=False)

    @classmethod
    def cycle(cls, n: int, level: int | None = None, power: int = 1) -> "MonomialMatrix":
        """``C^power`` with ``C = diag(lambda_n^j)``."""
        level = n if level is None else level
        unit = 1 << (level - n)
        d = 1 << n
        return cls(n, level, range(d), [j * power * unit for j in range(d)], check=False)

    @classmethod
    def from_relation(cls, r: int, coeffs: Sequence[int], n: int, level: int | None = None):
        """Matrix with ``M e_j = lambda^coeffs[j] e_{r j}``."""
        level = n if level is None else level
        d = 1 << n
        return cls(n, level, [r * j % d for j in range(d)], coeffs)

    @classmethod
    def diagonal(cls, coeffs: Sequence[int], n: int, level: int | None = None):
        level = n if level is None else level
        return cls(n, level, range(1 << n), coeffs)

    # -- algebra ----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.perm)

    @property
    def unit(self) -> int:
        """Exponent of ``lambda_n`` at the coefficient level."""
        return 1 << (self.level - self.n)

    def lift(self, level: int) -> "MonomialMatrix":
        if level == self.level:
            return self
        s = level - self.level
        if s < 0:
            raise ValueError("cannot lower the coefficient level")
        return MonomialMatrix(self.n, level, self.perm, [c << s for c in self.coeffs], check=False)

    def _aligned(self, other):
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        if self.level == other.level:
            return self, other
        lvl = max(self.level, other.level)
        return self.lift(lvl), other.lift(lvl)

    def __mul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        a, b = self._aligned(other)
        ap, ac, bp, bc = a.perm, a.coeffs, b.perm, b.coeffs
        return MonomialMatrix(
            a.n, a.level,
            [ap[p] for p in bp],
            [c + ac[p] for p, c in zip(bp, bc)],
            check=False,
        )

    def inverse(self) -> "MonomialMatrix":
        d = self.dim
        perm = [0] * d
        coeffs = [0] * d
        for j, (p, c) in enumerate(zip(self.perm, self.coeffs)):
            perm[p] = j
            coeffs[p] = -c
        return MonomialMatrix(self.n, self.level, perm, coeffs, check=False)

    def __pow__(self, k: int) -> "MonomialMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = MonomialMatrix.identity(self.n, self.level)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycles of the permutation part, each starting at its smallest index."""
        seen = [False] * self.dim
        out = []
        for j in range(self.dim):
            if seen[j]:
                continue
            cyc = []
            x = j
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.perm[x]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        """Multiplicative order: lcm over cycles of (length * order of the cycle product)."""
        mod = 1 << self.level
        out = 1
        for cyc in self.cycles():
            omega = RootOfUnity(self.level, sum(self.coeffs[j] for j in cyc) % mod)
            out = lcm(out, len(cyc) * omega.order)
        return out

    def is_identity(self) -> bool:
        return all(p == j for j, p in enumerate(self.perm)) and not any(self.coeffs)

    def is_diagonal(self) -> bool:
        return all(p == j for j, p in enumerate(self.perm))

    def cycle_power(self) -> int | None:
        """``k`` with ``self == C^k``, or ``None``."""
        if not self.is_diagonal():
            return None
        unit = self.unit
        if self.dim == 1:
            return 0 if self.coeffs[0] == 0 else None
        c1 = self.coeffs[1]
        if c1 % unit:
            return None
        k = c1 // unit
        mod = 1 << self.level
        if all(c == j * k * unit % mod for j, c in enumerate(self.coeffs)):
            return k % self.dim
        return None

    def rescaled(self, rescale: Sequence[int]) -> "MonomialMatrix":
        """Matrix in the basis ``e'_j = lambda_N^{rescale[j]} e_j``."""
        p = self.perm
        return MonomialMatrix(
            self.n, self.level, p,
            [c + rescale[j] - rescale[p[j]] for j, c in enumerate(self.coeffs)],
            check=False,
        )

    def key(self):
        return (self.n, self.level, self.perm, self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, MonomialMatrix):
            return NotImplemented
        if self.level != other.level:
            a, b = self._aligned(other)
            return a.key() == b.key()
        return self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            # normalise to a fixed representation so lifted copies hash equal
            m = self
            while m.level > m.n and all(c % 2 == 0 for c in m.coeffs):
                m = MonomialMatrix(m.n, m.level - 1, m.perm, [c >> 1 for c in m.coeffs], check=False)
            self._hash = hash(m.key())
        return self._hash

    def __repr__(self):
        return f"MonomialMatrix(n={self.n}, level={self.level}, perm={list(self.perm)}, coeffs={list(self.coeffs)})"


def is_permutation_matrix(m: MonomialMatrix) -> bool:
    return not any(m.coeffs)


def relation_of(m: MonomialMatrix) -> UnitElement:
    """``r`` with ``m^-1 C m = C^r``; the permutation part must be ``j -> r j``."""
    d = m.dim
    if d == 1:
        return unit_decompose(1, 0)
    r = m.perm[1]
    if r % 2 == 0 or any(p != r * j % d for j, p in enumerate(m.perm)):
        raise NotNormalizingError("does not normalize <C>: permutation part is not a multiplication map")
    return unit_decompose(r, m.n)


@dataclass(frozen=True)
class CharPolyFactors:
    """``prod (x^m - omega)`` over ``factors``, kept sorted."""

    factors: tuple[tuple[int, RootOfUnity], ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(sorted(self.factors, key=lambda f: (f[0], f[1]))))

    @property
    def degree(self) -> int:
        return sum(m for m, _ in self.factors)

    def counter(self) -> Counter:
        return Counter((m, w.canonical()) for m, w in self.factors)

    def __add__(self, other: "CharPolyFactors") -> "CharPolyFactors":
        return CharPolyFactors(self.factors + other.factors)

    def __eq__(self, other):
        if not isinstance(other, CharPolyFactors):
            return NotImplemented
        return self.counter() == other.counter()

    def __hash__(self):
        return hash(frozenset(self.counter().items()))

    def describe(self) -> str:
        parts = []
        for (m, w), k in sorted(self.counter().items(), key=lambda t: (t[0][0], t[0][1])):
            base = f"x^{m}" if m > 1 else "x"
            if w.is_one():
                s = f"({base}-1)"
            elif w == RootOfUnity.minus_one():
                s = f"({base}+1)"
            else:
                s = f"({base}-l{w.level}^{w.exponent})"
            parts.append(s if k == 1 else f"{s}^{k}")
        return "".join(parts)


def char_factors(m: MonomialMatrix) -> CharPolyFactors:
    """One factor ``x^len - (product of coefficients)`` per cycle."""
    mod = 1 << m.level
    c = m.coeffs
    return CharPolyFactors(tuple(
        (len(cyc), RootOfUnity(m.level, sum(c[j] for j in cyc) % mod)) for cyc in m.cycles()
    ))


def eigen_multiset(f: CharPolyFactors) -> Counter:
    """Eigenvalues with multiplicity, all written at one common level.

    The roots of ``x^(2^b) = lambda_N^e`` are ``lambda_{N+b}^(e + 2^N t)``.
    """
    if not f.factors:
        return Counter()
    top = 0
    for m, w in f.factors:
        if m & (m - 1):
            raise ValueError(f"block size {m} is not a power of two")
        top = max(top, w.level + m.bit_length() - 1)
    out: Counter = Counter()
    for m, w in f.factors:
        b = m.bit_length() - 1
        lvl = w.level + b
        for t in range(m):
            out[RootOfUnity(lvl, w.exponent + (t << w.level)).lift(top)] += 1
    return out


@dataclass(frozen=True)
class PermVerdict:
    """Outcome of the permutation-similarity test.

    ``multiplicities[d]`` is the common multiplicity of the primitive
    2^d-th roots of unity (when constant).  For a permutation type,
    ``cycle_type[c]`` counts the 2^c-cycles.
    """

    permutation_type: bool
    cycle_type: dict = field(default_factory=dict)
    multiplicities: dict = field(default_factory=dict)
    violation_level: int | None = None
    reason: str | None = None
    # blocks x^m - w with w a root of unity are squarefree, so monomial
    # matrices of finite order are always diagonalizable
    diagonalizable: bool = True

    def __bool__(self):
        return self.permutation_type


def perm_similarity(f: CharPolyFactors) -> PermVerdict:
    eig = eigen_multiset(f)
    by_order: dict[int, list[int]] = {}
    for root, k in eig.items():
        d = root.order.bit_length() - 1
        by_order.setdefault(d, []).append(k)
    top = max(by_order, default=0)
    mult = {}
    for d in range(top + 1):
        ks = by_order.get(d, [])
        expected = 1 if d == 0 else 1 << (d - 1)
        if ks and (len(ks) != expected or len(set(ks)) != 1):
            return PermVerdict(False, multiplicities=mult, violation_level=d,
                               reason="non-constant multiplicity across primitive roots")
        mult[d] = ks[0] if ks else 0
    for d in range(top):
        if mult[d] < mult[d + 1]:
            return PermVerdict(False, multiplicities=mult, violation_level=d,
                               reason="multiplicity monotonicity failure")
    mult_ext = dict(mult)
    mult_ext[top + 1] = 0
    cycle_type = {c: mult_ext[c] - mult_ext[c + 1] for c in range(top + 1) if mult_ext[c] != mult_ext[c + 1]}
    return PermVerdict(True, cycle_type=cycle_type, multiplicities=mult)


def factors_from_cycle_type(cycle_type: dict[int, int]) -> CharPolyFactors:
    """``prod_c (x^(2^c) - 1)^(j_c)``."""
    one = RootOfUnity(0, 0)
    return CharPolyFactors(tuple((1 << c, one) for c, k in cycle_type.items() for _ in range(k)))
