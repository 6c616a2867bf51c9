"""Exact arithmetic with 2-power roots of unity.

Two tiers:

* :class:`RootOfUnity` stores ``lambda_N^e`` as the pair ``(N, e)``; all
  group computations stay in this exponent form.
* :class:`CycloNum` is a general element of Q(lambda_N) written in the power
  basis ``1, lambda, ..., lambda^(M-1)`` with ``M = 2^(N-1)`` and the rule
  ``lambda^M = -1``.  It is only used by the dense verification path.

Coefficients are :class:`fractions.Fraction`; nothing here touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import gcd
from typing import Iterable, Mapping

__all__ = [
    "RootOfUnity",
    "CycloNum",
    "CycloPoly",
    "cyclotomic_poly_2power",
    "primitive_roots",
    "primitive_product_identity",
]


@total_ordering
@dataclass(frozen=True)
class RootOfUnity:
    level: int
    exponent: int

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be non-negative")
        object.__setattr__(self, "exponent", self.exponent % (1 << self.level))

    @classmethod
    def one(cls, level: int = 0) -> "RootOfUnity":
        return cls(level, 0)

    @classmethod
    def minus_one(cls) -> "RootOfUnity":
        return cls(1, 1)

    def lift(self, level: int) -> "RootOfUnity":
        if level < self.level:
            raise ValueError(f"cannot lift from level {self.level} down to {level}")
        return RootOfUnity(level, self.exponent << (level - self.level))

    def canonical(self) -> "RootOfUnity":
        """Same root written at the smallest level that contains it."""
        e, lvl = self.exponent, self.level
        while lvl > 0 and e % 2 == 0:
            e >>= 1
            lvl -= 1
        return RootOfUnity(lvl, e)

    def _common(self, other: "RootOfUnity"):
        lvl = max(self.level, other.level)
        return lvl, self.lift(lvl).exponent, other.lift(lvl).exponent

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        lvl, a, b = self._common(other)
        return RootOfUnity(lvl, a + b)

    def __truediv__(self, other: "RootOfUnity") -> "RootOfUnity":
        return self * other.inverse()

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(self.level, -self.exponent)

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.level, self.exponent * k)

    @property
    def order(self) -> int:
        mod = 1 << self.level
        return mod // gcd(mod, self.exponent)

    def is_one(self) -> bool:
        return self.exponent == 0

    def angle(self) -> Fraction:
        """The root as ``exp(2 pi i * angle)``."""
        return Fraction(self.exponent, 1 << self.level)

    def _key(self) -> tuple[int, int]:
        e, lvl = self.exponent, self.level
        if e == 0:
            return (0, 0)
        tz = (e & -e).bit_length() - 1
        return (lvl - tz, e >> tz)

    def __eq__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other):
        lvl = max(self.level, other.level)
        return self.exponent << (lvl - self.level) < other.exponent << (lvl - other.level)

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"lambda_{self.level}^{self.exponent}"


class CycloNum:
    """Element of Q(lambda_N), stored sparsely as ``{power: coefficient}``."""

    __slots__ = ("level", "terms", "_hash")

    def __init__(self, level: int, terms: Mapping[int, Fraction | int] | None = None):
        if level < 1:
            level = 1
        self.level = level
        dim = 1 << (level - 1)
        clean: dict[int, Fraction] = {}
        if terms:
            for i, c in terms.items():
                if not c:
                    continue
                if not 0 <= i < dim:
                    q, i = divmod(i, dim)
                    if q % 2:
                        c = -c
                c = clean.get(i, 0) + Fraction(c)
                if c:
                    clean[i] = c
                else:
                    clean.pop(i, None)
        self.terms = clean
        self._hash = None

    @property
    def dim(self) -> int:
        return 1 << (self.level - 1)

    @classmethod
    def zero(cls, level: int) -> "CycloNum":
        return cls(level)

    @classmethod
    def one(cls, level: int) -> "CycloNum":
        return cls(level, {0: 1})

    @classmethod
    def from_int(cls, c, level: int) -> "CycloNum":
        return cls(level, {0: c})

    @classmethod
    def from_root(cls, root: RootOfUnity, level: int | None = None) -> "CycloNum":
        """Embed ``lambda^e``: the e-th unit vector, or minus the (e-M)-th."""
        level = max(level or 0, root.level, 1)
        e = root.lift(level).exponent
        return cls(level, {e: 1})

    @classmethod
    def from_coefficients(cls, coeffs: Iterable, level: int) -> "CycloNum":
        return cls(level, dict(enumerate(coeffs)))

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.dim
        for i, c in self.terms.items():
            out[i] = c
        return tuple(out)

    def lift(self, level: int) -> "CycloNum":
        if level == self.level:
            return self
        if level < self.level:
            raise ValueError("cannot lift to a lower level")
        s = level - self.level
        return CycloNum(level, {i << s: c for i, c in self.terms.items()})

    def _align(self, other):
        if isinstance(other, (int, Fraction)):
            return self, CycloNum(self.level, {0: other})
        if self.level == other.level:
            return self, other
        lvl = max(self.level, other.level)
        return self.lift(lvl), other.lift(lvl)

    def __add__(self, other):
        a, b = self._align(other)
        t = dict(a.terms)
        for i, c in b.terms.items():
            t[i] = t.get(i, 0) + c
        return CycloNum(a.level, t)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.level, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._align(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNum(self.level, {i: c * other for i, c in self.terms.items()})
        a, b = self._align(other)
        dim = a.dim
        out: dict[int, Fraction] = {}
        for i, x in a.terms.items():
            for j, y in b.terms.items():
                k = i + j
                p = x * y
                if k >= dim:
                    k -= dim
                    p = -p
                out[k] = out.get(k, 0) + p
        return CycloNum(a.level, out)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_rational(self) -> bool:
        return all(i == 0 for i in self.terms)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.terms.get(0, Fraction(0))

    def inverse(self) -> "CycloNum":
        if not self.terms:
            raise ZeroDivisionError("inverse of 0 in a cyclotomic field")
        if len(self.terms) == 1:
            (i, c), = self.terms.items()
            return CycloNum(self.level, {2 * self.dim - i: 1 / c})
        return self._solve_inverse()

    def _solve_inverse(self) -> "CycloNum":
        # columns of the multiplication-by-self matrix are self * lambda^j
        dim = self.dim
        cols = [(self * CycloNum(self.level, {j: 1})).coefficients for j in range(dim)]
        rows = [[cols[j][i] for j in range(dim)] + [Fraction(int(i == 0))] for i in range(dim)]
        for c in range(dim):
            piv = next(r for r in range(c, dim) if rows[r][c])
            rows[c], rows[piv] = rows[piv], rows[c]
            inv = 1 / rows[c][c]
            rows[c] = [x * inv for x in rows[c]]
            for r in range(dim):
                if r != c and rows[r][c]:
                    f = rows[r][c]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
        return CycloNum(self.level, {i: rows[i][dim] for i in range(dim)})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.terms.get(0, 0) == other
        if not isinstance(other, CycloNum):
            return NotImplemented
        a, b = self._align(other)
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            s = self
            # hash at the minimal level so equal values at different levels agree
            while s.level > 1 and all(i % 2 == 0 for i in s.terms):
                s = CycloNum(s.level - 1, {i >> 1: c for i, c in s.terms.items()})
            self._hash = hash((s.level, frozenset(s.terms.items())))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for i in sorted(self.terms):
            c = self.terms[i]
            parts.append(f"{c}" if i == 0 else f"{c}*l^{i}")
        return f"CycloNum[{self.level}](" + " + ".join(parts) + ")"


class CycloPoly:
    """Univariate polynomial with :class:`CycloNum` coefficients (sparse)."""

    __slots__ = ("level", "terms")

    def __init__(self, level: int, terms: Mapping[int, CycloNum] | None = None):
        self.level = max(level, 1)
        clean = {}
        for d, c in (terms or {}).items():
            if not isinstance(c, CycloNum):
                c = CycloNum.from_int(c, self.level)
            c = c.lift(max(c.level, self.level))
            if c.level > self.level:
                raise ValueError("coefficient above polynomial level")
            if c:
                clean[d] = c
        self.terms = clean

    @classmethod
    def x(cls, level: int) -> "CycloPoly":
        return cls(level, {1: CycloNum.one(level)})

    @classmethod
    def constant(cls, c, level: int) -> "CycloPoly":
        return cls(level, {0: c if isinstance(c, CycloNum) else CycloNum.from_int(c, level)})

    @classmethod
    def binomial(cls, m: int, root: RootOfUnity, level: int | None = None) -> "CycloPoly":
        """``x^m - root``."""
        level = max(level or 1, root.level)
        return cls(level, {m: CycloNum.one(level), 0: -CycloNum.from_root(root, level)})

    @classmethod
    def from_coefficients(cls, coeffs, level: int) -> "CycloPoly":
        return cls(level, dict(enumerate(coeffs)))

    @property
    def degree(self) -> int:
        return max(self.terms) if self.terms else -1

    def coefficient(self, d: int) -> CycloNum:
        return self.terms.get(d, CycloNum.zero(self.level))

    @property
    def coefficients(self) -> list[CycloNum]:
        return [self.coefficient(d) for d in range(self.degree + 1)]

    def lift(self, level: int) -> "CycloPoly":
        if level == self.level:
            return self
        return CycloPoly(level, {d: c.lift(level) for d, c in self.terms.items()})

    def _align(self, other):
        if self.level == other.level:
            return self, other
        lvl = max(self.level, other.level)
        return self.lift(lvl), other.lift(lvl)

    def __add__(self, other):
        a, b = self._align(other)
        t = dict(a.terms)
        for d, c in b.terms.items():
            t[d] = t[d] + c if d in t else c
        return CycloPoly(a.level, t)

    def __neg__(self):
        return CycloPoly(self.level, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, CycloNum):
            return CycloPoly(max(self.level, other.level),
                             {d: c * other for d, c in self.terms.items()})
        a, b = self._align(other)
        out: dict[int, CycloNum] = {}
        for i, x in a.terms.items():
            for j, y in b.terms.items():
                p = x * y
                out[i + j] = out[i + j] + p if i + j in out else p
        return CycloPoly(a.level, out)

    def __eq__(self, other):
        if not isinstance(other, CycloPoly):
            return NotImplemented
        a, b = self._align(other)
        return a.terms.keys() == b.terms.keys() and all(a.terms[d] == b.terms[d] for d in a.terms)

    def __hash__(self):
        return hash(frozenset((d, hash(c)) for d, c in self.terms.items()))

    @classmethod
    def product(cls, polys: list["CycloPoly"], level: int) -> "CycloPoly":
        """Balanced product tree (partial products stay small when
        neighbouring factors are conjugate)."""
        if not polys:
            return cls.constant(1, level)
        layer = list(polys)
        while len(layer) > 1:
            nxt = [layer[i] * layer[i + 1] for i in range(0, len(layer) - 1, 2)]
            if len(layer) % 2:
                nxt.append(layer[-1])
            layer = nxt
        return layer[0].lift(max(level, layer[0].level))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({self.terms[d]!r})*x^{d}" for d in sorted(self.terms, reverse=True))


def cyclotomic_poly_2power(k: int, level: int = 1) -> CycloPoly:
    """``Phi_{2^k}``: ``x - 1`` for ``k = 0``, else ``x^(2^(k-1)) + 1``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return CycloPoly(level, {1: 1, 0: -1})
    return CycloPoly(level, {1 << (k - 1): 1, 0: 1})


def primitive_roots(k: int) -> list[RootOfUnity]:
    """All primitive 2^k-th roots of unity at level k."""
    if k == 0:
        return [RootOfUnity(0, 0)]
    return [RootOfUnity(k, e) for e in range(1, 1 << k, 2)]


def _bit_reverse(i: int, bits: int) -> int:
    return int(format(i, f"0{bits}b")[::-1], 2) if bits else 0


def primitive_product_identity(a: int, k: int) -> bool:
    """Expand ``prod_w (x^(2^a) - w)`` over primitive 2^k-th roots ``w`` and
    compare with ``Phi_{2^(k+a)}``."""
    if k < 1 or a < 0:
        raise ValueError("need k >= 1 and a >= 0")
    level = k
    roots = primitive_roots(k)
    bits = k - 1
    # bit-reversed order places w next to -w, so the tree's partial products stay binomials
    order = sorted(range(len(roots)), key=lambda i: _bit_reverse(i, bits))
    factors = [CycloPoly.binomial(1 << a, roots[i], level) for i in order]
    lhs = CycloPoly.product(factors, level)
    return lhs == cyclotomic_poly_2power(k + a, level)
