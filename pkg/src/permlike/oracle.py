"""Independent checks: certificate verification, dense exact matrices, naive determinants.

Two verification tiers exist.  The fast tier works on monomial matrices:
every element, rescaled by the certificate, must have the form ``C^s P``
with ``P`` a permutation matrix, and its induced action ``k -> s + rho^-1 k``
on the Fourier basis must compose along words.  The dense tier (``n <= 4``)
expands every element into an exact cyclotomic matrix, conjugates by the
Vandermonde matrix ``T[j][k] = lambda_n^{jk}`` and requires literal 0/1
permutation matrices.  Neither tier touches characteristic polynomials or
synthesis internals.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .cyclotomic import CycloNum, CycloPoly, RootOfUnity
from .engine import GroupAnalysis, GroupSpec, Word, evaluate_word, parse_word, validate, word_str
from .errors import VerificationError
from .monomial import CharPolyFactors, MonomialMatrix
from .synth import PermBasisCertificate

__all__ = [
    "DenseMatrix",
    "dense_expand",
    "dense_diagonal",
    "vandermonde_matrix",
    "vandermonde_inverse",
    "vandermonde_conjugate",
    "brute_char_poly",
    "expand_factors",
    "brute_perm_factorization",
    "fourier_action",
    "ElementResult",
    "VerificationReport",
    "verify_certificate",
]

DENSE_MAX_N = 4
CHARPOLY_MAX_DIM = 16


# -- dense exact matrices ---------------------------------------------------


class DenseMatrix:
    """Square matrix over Q(lambda_L) stored as integer numerators over one denominator.

    ``num[i, j, q]`` is the coefficient of ``lambda_L^q`` (``0 <= q < 2^(L-1)``)
    in entry ``(i, j)``; the entry equals ``num[i, j, :] / den``.
    """

    __slots__ = ("level", "num", "den")

    def __init__(self, level: int, num: np.ndarray, den: int = 1):
        if level < 1:
            raise ValueError("dense matrices use level >= 1")
        self.level = level
        self.num = np.asarray(num, dtype=np.int64)
        self.den = int(den)

    @property
    def dim(self) -> int:
        return self.num.shape[0]

    @property
    def width(self) -> int:
        return 1 << (self.level - 1)

    @classmethod
    def zeros(cls, dim: int, level: int) -> "DenseMatrix":
        return cls(level, np.zeros((dim, dim, 1 << (level - 1)), dtype=np.int64))

    @classmethod
    def identity(cls, dim: int, level: int) -> "DenseMatrix":
        out = cls.zeros(dim, level)
        out.num[np.arange(dim), np.arange(dim), 0] = 1
        return out

    def entry(self, i: int, j: int) -> CycloNum:
        return CycloNum.from_coefficients([Fraction(int(c), self.den) for c in self.num[i, j]], self.level)

    def reduced(self) -> "DenseMatrix":
        g = int(np.gcd.reduce(self.num.ravel())) if self.num.any() else self.den
        g = np.gcd(g, self.den)
        if g > 1:
            return DenseMatrix(self.level, self.num // g, self.den // g)
        return self

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.level != other.level or self.dim != other.dim:
            raise ValueError("shape or level mismatch")
        m = self.width
        out = np.zeros_like(self.num)
        for p in range(m):
            ap = self.num[:, :, p]
            if not ap.any():
                continue
            prod = np.einsum("ij,jkq->ikq", ap, other.num)
            # multiply by lambda^p in Z[x]/(x^m + 1)
            out[:, :, p:] += prod[:, :, : m - p]
            out[:, :, :p] -= prod[:, :, m - p:]
        return DenseMatrix(self.level, out, self.den * other.den).reduced()

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return (self.level == other.level and self.num.shape == other.num.shape
                and np.array_equal(self.num * other.den, other.num * self.den))

    __hash__ = None

    def is_permutation(self) -> list[int] | None:
        """Image list ``k -> row`` if every entry is literally 0 or 1 with one 1 per row and column."""
        a = self.reduced()
        if a.den != 1 or a.num[:, :, 1:].any():
            return None
        re = a.num[:, :, 0]
        if not np.isin(re, (0, 1)).all():
            return None
        if not (re.sum(axis=0) == 1).all() or not (re.sum(axis=1) == 1).all():
            return None
        return [int(i) for i in np.argmax(re, axis=0)]


def _root_vector(exponent: int, level: int) -> tuple[int, int]:
    """``lambda_L^e`` as ``(slot, sign)`` in the negacyclic basis."""
    m = 1 << (level - 1)
    e = exponent % (2 * m)
    return (e, 1) if e < m else (e - m, -1)


def dense_expand(m: MonomialMatrix, rescale: Sequence[int] | None = None) -> DenseMatrix:
    """Entry ``(perm j, j) = lambda_N^(c_j + t_j - t_perm(j))``."""
    level = max(m.level, 1)
    shift = level - m.level
    d = m.dim
    t = rescale if rescale is not None else [0] * d
    out = DenseMatrix.zeros(d, level)
    for j, (p, c) in enumerate(zip(m.perm, m.coeffs)):
        slot, sign = _root_vector((c + t[j] - t[p]) << shift, level)
        out.num[p, j, slot] = sign
    return out


def dense_diagonal(exponents: Sequence[int], level: int) -> DenseMatrix:
    d = len(exponents)
    out = DenseMatrix.zeros(d, level)
    for j, e in enumerate(exponents):
        slot, sign = _root_vector(e, level)
        out.num[j, j, slot] = sign
    return out


def vandermonde_matrix(n: int, level: int) -> DenseMatrix:
    """``T[j][k] = lambda_n^(jk)``: column ``k`` is ``C^k f`` with ``f = sum e'_j``."""
    level = max(level, n, 1)
    d = 1 << n
    unit = 1 << (level - n)
    out = DenseMatrix.zeros(d, level)
    for j in range(d):
        for k in range(d):
            slot, sign = _root_vector(j * k * unit, level)
            out.num[j, k, slot] = sign
    return out


def vandermonde_inverse(n: int, level: int) -> DenseMatrix:
    """``T^-1 = (1/2^n) [lambda_n^(-jk)]`` (transpose of the conjugate)."""
    level = max(level, n, 1)
    d = 1 << n
    unit = 1 << (level - n)
    out = DenseMatrix.zeros(d, level)
    for k in range(d):
        for j in range(d):
            slot, sign = _root_vector(-j * k * unit, level)
            out.num[k, j, slot] = sign
    out.den = d
    return out


def vandermonde_conjugate(m: DenseMatrix, n: int) -> DenseMatrix:
    """``T^-1 M T`` exactly.

    Expands ``sum_{j,i} lambda_n^(-kj) M[j][i] lambda_n^(il)`` over the
    nonzero terms of ``M`` only; every summand is a signed power of
    ``lambda``, so the result is accumulated with integer counts.
    """
    d = 1 << n
    if m.dim != d:
        raise ValueError("dimension mismatch")
    if n > DENSE_MAX_N:
        raise ValueError(f"dense tier is limited to n <= {DENSE_MAX_N}")
    level = m.level
    width = m.width
    unit = 1 << (level - n) if level >= n else None
    if unit is None:
        raise ValueError("coefficient level below n")
    js, is_, qs = np.nonzero(m.num)
    vals = m.num[js, is_, qs]
    k = np.arange(d).reshape(1, d, 1)
    l = np.arange(d).reshape(1, 1, d)
    j3 = js.reshape(-1, 1, 1)
    i3 = is_.reshape(-1, 1, 1)
    e = qs.reshape(-1, 1, 1) + unit * ((i3 * l - k * j3) % d)
    e %= 2 * width
    sign = np.where(e < width, 1, -1) * vals.reshape(-1, 1, 1)
    slot = e % width
    flat = (k * d + l) * width + slot
    acc = np.bincount(flat.ravel(), weights=sign.ravel().astype(np.float64), minlength=d * d * width)
    num = np.rint(acc).astype(np.int64).reshape(d, d, width)
    return DenseMatrix(level, num, m.den * d).reduced()


# -- naive characteristic polynomials ------------------------------------------


def _nc_scale(poly: np.ndarray, entry: np.ndarray) -> np.ndarray:
    """``poly * entry`` where ``poly[deg, slot]`` and ``entry[slot]`` live in Z[x]/(x^w + 1)."""
    out = np.zeros_like(poly)
    for q in np.nonzero(entry)[0]:
        rolled = np.roll(poly, q, axis=1)
        rolled[:, :q] *= -1
        out += entry[q] * rolled
    return out


def brute_char_poly(m: DenseMatrix) -> CycloPoly:
    """``det(xI - M)`` by cofactor expansion along rows, memoized on the used columns.

    Works on integer numerators: with ``M = N / den`` it expands
    ``det(yI - N)`` for ``y = den * x`` and rescales the coefficients.
    """
    d = m.dim
    if d > CHARPOLY_MAX_DIM:
        raise ValueError(f"dimension {d} exceeds the cost gate {CHARPOLY_MAX_DIM}")
    num = m.num
    width = m.width
    rows = [[j for j in range(d) if num[i, j].any() or i == j] for i in range(d)]
    memo: dict[int, np.ndarray] = {}

    def minor(i: int, used: int) -> np.ndarray:
        # coefficients of the minor on rows i.. and the unused columns, degree <= d - i
        if i == d:
            out = np.zeros((1, width), dtype=object)
            out[0, 0] = 1
            return out
        hit = memo.get(used)
        if hit is not None:
            return hit
        total = np.zeros((d - i + 1, width), dtype=object)
        for j in rows[i]:
            if used >> j & 1:
                continue
            sub = minor(i + 1, used | (1 << j))
            if not sub.any():
                continue
            sign = -1 if bin(~used & ((1 << j) - 1)).count("1") % 2 else 1
            term = np.zeros_like(total)
            term[: d - i] -= _nc_scale(sub, num[i, j].astype(object))
            if i == j:
                term[1:] += sub
            total += sign * term
        memo[used] = total
        return total

    coeffs = minor(0, 0)
    den = m.den
    polys = {}
    for deg in range(d + 1):
        scale = Fraction(den ** deg, den ** d)
        polys[deg] = CycloNum.from_coefficients([Fraction(int(c)) * scale for c in coeffs[deg]], m.level)
    return CycloPoly(m.level, polys)


def expand_factors(f: CharPolyFactors, level: int) -> CycloPoly:
    top = max([level] + [w.level for _, w in f.factors])
    return CycloPoly.product([CycloPoly.binomial(mlen, w, top) for mlen, w in f.factors], top)


def _eigen_angles(f: CharPolyFactors | Iterable[tuple[int, RootOfUnity]]) -> Counter:
    factors = f.factors if isinstance(f, CharPolyFactors) else f
    out: Counter = Counter()
    for mlen, w in factors:
        theta = Fraction(w.exponent, 1 << w.level)
        for t in range(mlen):
            out[((theta + t) / mlen) % 1] += 1
    return out


def brute_perm_factorization(f: CharPolyFactors | Counter) -> bool:
    """Exhaustive search for ``prod (x^l - 1)`` with the given roots (as angles in [0, 1))."""
    angles = f if isinstance(f, Counter) else _eigen_angles(f)
    start = tuple(sorted((a, k) for a, k in angles.items() if k))

    @lru_cache(maxsize=None)
    def search(state: tuple) -> bool:
        if not state:
            return True
        pool = dict(state)
        total = sum(pool.values())
        # the root of largest order must sit in a block x^l - 1 with its order dividing l
        lead = max(pool, key=lambda a: (a.denominator, a))
        q = lead.denominator
        length = q
        while length <= total:
            need = [Fraction(t, length) for t in range(length)]
            if all(pool.get(a, 0) >= 1 for a in need):
                rest = dict(pool)
                for a in need:
                    rest[a] -= 1
                if search(tuple(sorted((a, k) for a, k in rest.items() if k))):
                    return True
            length += q
        return False

    return search(start)


# -- certificate verification ------------------------------------------------


def fourier_action(m: MonomialMatrix) -> list[int] | None:
    """``k -> s + rho^-1 k`` when ``m = C^s P`` with ``P`` coefficient-free and relation ``rho``."""
    d = m.dim
    unit = m.unit
    mod = 1 << m.level
    if d == 1:
        return [0] if m.coeffs[0] == 0 else None
    rho = m.perm[1]
    if rho % 2 == 0 or any(p != rho * j % d for j, p in enumerate(m.perm)):
        return None
    j1 = pow(rho, -1, d)
    c = m.coeffs[j1]
    if c % unit:
        return None
    s = c // unit
    if any(cj != s * p * unit % mod for cj, p in zip(m.coeffs, m.perm)):
        return None
    return [(s + j1 * k) % d for k in range(d)]


@dataclass(frozen=True)
class ElementResult:
    word: str
    tier: str
    ok: bool
    reason: str = ""


@dataclass
class VerificationReport:
    passed: bool
    tiers: tuple[str, ...]
    results: list[ElementResult] = field(default_factory=list)
    failures: list[ElementResult] = field(default_factory=list)
    dense_perms: dict[str, list[int]] = field(default_factory=dict, repr=False)
    fast_perms: dict[str, list[int]] = field(default_factory=dict, repr=False)

    def add(self, word: str, tier: str, ok: bool, reason: str = "") -> None:
        res = ElementResult(word, tier, ok, reason)
        self.results.append(res)
        if not ok:
            self.failures.append(res)
            self.passed = False

    @property
    def first_failure(self) -> ElementResult | None:
        return self.failures[0] if self.failures else None

    def raise_on_failure(self) -> None:
        if self.failures:
            f = self.failures[0]
            raise VerificationError(f"{f.tier} tier rejected {f.word}: {f.reason}", word=f.word)


def _compose(p: Sequence[int], q: Sequence[int]) -> list[int]:
    """Action of ``X Y`` from the actions of ``X`` and ``Y``."""
    return [p[k] for k in q]


def _power(p: Sequence[int], e: int) -> list[int]:
    out = list(range(len(p)))
    for _ in range(e):
        out = _compose(p, out)
    return out


def _word_action(word: Word, actions: dict[str, list[int]], d: int) -> list[int] | None:
    out = list(range(d))
    for name, e in word:
        if name not in actions:
            return None
        out = _compose(out, _power(actions[name], e))
    return out


def _orbit_minima(multipliers: Sequence[int], d: int) -> list[int]:
    seen = [False] * d
    out = []
    for j in range(d):
        if seen[j]:
            continue
        out.append(j)
        stack = [j]
        seen[j] = True
        while stack:
            x = stack.pop()
            for r in multipliers:
                y = r * x % d
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
    return out


def _structure(report: VerificationReport, analysis: GroupAnalysis, cert: PermBasisCertificate) -> bool:
    spec = analysis.spec
    d = 1 << spec.n
    if cert.n != spec.n or cert.level != spec.level:
        report.add("I", "structure", False, "certificate n/level differ from the group")
        return False
    if len(cert.rescale) != d:
        report.add("I", "structure", False, f"rescale has {len(cert.rescale)} entries, expected {d}")
        return False
    mod = 1 << spec.level
    if any(not 0 <= t < mod for t in cert.rescale):
        report.add("I", "structure", False, "rescale exponent outside [0, 2^N)")
        return False
    for name, perm in cert.generator_permutations.items():
        if sorted(perm) != list(range(d)):
            report.add(name, "structure", False, "listed image array is not a permutation")
            return False
    if cert.generator_permutations.get("C") != [(k + 1) % d for k in range(d)]:
        report.add("C", "structure", False, "C must act as the shift k -> k+1")
        return False
    mults = [r.value for r in analysis.relations.values()]
    for j in _orbit_minima(mults, d):
        if cert.rescale[j] != 0:
            report.add("I", "structure", False, f"rescale not normalized: t_{j} != 0 at an orbit minimum")
            return False
    return True


def _listed_matrices(analysis: GroupAnalysis, cert: PermBasisCertificate, report: VerificationReport):
    out = {}
    for name in cert.generator_permutations:
        if name == "C":
            out[name] = ((("C", 1),), analysis.spec.cycle)
            continue
        text = cert.generator_words.get(name)
        if text is None:
            report.add(name, "structure", False, "listed generator has no defining word")
            continue
        try:
            w = parse_word(text)
            out[name] = (w, evaluate_word(analysis.spec, w))
        except (KeyError, ValueError):
            report.add(name, "structure", False, f"cannot evaluate word {text!r}")
    return out


def _fast_tier(report: VerificationReport, analysis: GroupAnalysis, cert: PermBasisCertificate, listed) -> None:
    spec = analysis.spec
    d = 1 << spec.n
    t = cert.rescale
    actions: dict[str, list[int]] = {}
    for name, m in [("C", spec.cycle)] + list(spec.generators):
        act = fourier_action(m.rescaled(t))
        if act is None:
            report.add(name, "fast", False, "not of the form C^s P after rescaling")
            return
        actions[name] = act
    for name, (w, m) in listed.items():
        act = fourier_action(m.rescaled(t))
        if act is None:
            report.add(name, "fast", False, "listed generator not of the form C^s P after rescaling")
        elif act != cert.generator_permutations[name]:
            report.add(name, "fast", False, "listed Fourier permutation differs from the computed action")
        elif name != "C" and act[0] != 0:
            report.add(name, "fast", False, "listed generator is not a permutation matrix after rescaling")
        report.fast_perms[name] = act
    for w, m in analysis.elements:
        label = word_str(w)
        act = fourier_action(m.rescaled(t))
        if act is None:
            report.add(label, "fast", False, "not of the form C^s P after rescaling")
            continue
        if act != _word_action(w, actions, d):
            report.add(label, "fast", False, "Fourier action does not compose along the word")
            continue
        report.fast_perms[label] = act
        report.add(label, "fast", True)


def _dense_tier(report: VerificationReport, analysis: GroupAnalysis, cert: PermBasisCertificate, listed) -> None:
    spec = analysis.spec
    if spec.n > DENSE_MAX_N:
        raise ValueError(f"dense tier is limited to n <= {DENSE_MAX_N}")
    d = 1 << spec.n
    t = cert.rescale
    gens = {"C": spec.cycle, **dict(spec.generators)}
    actions = {}
    for name, m in gens.items():
        perm = vandermonde_conjugate(dense_expand(m, t), spec.n).is_permutation()
        if perm is None:
            report.add(name, "dense", False, "T^-1 M T is not a 0/1 permutation matrix")
            return
        actions[name] = perm
    for name, (w, m) in listed.items():
        perm = vandermonde_conjugate(dense_expand(m, t), spec.n).is_permutation()
        if perm != cert.generator_permutations[name]:
            report.add(name, "dense", False, "listed permutation differs from T^-1 M T")
        report.dense_perms[name] = perm
    for w, m in analysis.elements:
        label = word_str(w)
        perm = vandermonde_conjugate(dense_expand(m, t), spec.n).is_permutation()
        if perm is None:
            report.add(label, "dense", False, "T^-1 M T is not a 0/1 permutation matrix")
            continue
        if perm != _word_action(w, actions, d):
            report.add(label, "dense", False, "dense permutation does not compose along the word")
            continue
        report.dense_perms[label] = perm
        report.add(label, "dense", True)


def verify_certificate(spec: GroupSpec | GroupAnalysis, cert: PermBasisCertificate,
                       tier: str = "fast") -> VerificationReport:
    """Check a certificate against every element of the group.

    ``tier`` is ``fast``, ``dense`` or ``both``.  The report lists a result per
    element and tier; ``report.passed`` is false on any failure.
    """
    if tier not in ("fast", "dense", "both"):
        raise ValueError(f"unknown tier {tier!r}")
    analysis = spec if isinstance(spec, GroupAnalysis) else validate(spec)
    tiers = ("fast", "dense") if tier == "both" else (tier,)
    report = VerificationReport(True, tiers)
    if not analysis.self_centralized:
        report.add("I", "structure", False, "group is outside scope")
        return report
    if not _structure(report, analysis, cert):
        return report
    listed = _listed_matrices(analysis, cert, report)
    if not report.passed:
        return report
    if "fast" in tiers:
        _fast_tier(report, analysis, cert, listed)
    if "dense" in tiers:
        _dense_tier(report, analysis, cert, listed)
    if tier == "both" and report.passed and report.fast_perms != report.dense_perms:
        report.add("I", "both", False, "fast and dense tiers disagree")
    return report
