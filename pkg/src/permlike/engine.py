"""Group presentations ``<X_1, ..., X_k, C>`` around a maximal cycle ``C``.

Every generator must normalize ``<C>`` (its permutation part is a
multiplication map ``j -> r j``).  The engine enumerates the group by
canonical words ``X_1^e_1 ... X_k^e_k C^c``, decides permutation-likeness
element by element and implements the two generator normalizations used by
the synthesis drivers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping, Sequence

from .errors import ContradictionError, PresentationError
from .monomial import (
    CharPolyFactors,
    MonomialMatrix,
    PermVerdict,
    char_factors,
    perm_similarity,
    relation_of,
)
from .residue import (
    SubgroupDescriptor,
    UnitElement,
    geom_sum,
    subgroup_classify,
    unit_decompose,
    v2,
)

__all__ = [
    "Word",
    "word_str",
    "parse_word",
    "GroupSpec",
    "TorsionReport",
    "Witness",
    "GroupAnalysis",
    "validate",
    "enumerate_elements",
    "permutation_like",
    "normalize_torsion",
    "commuting_adjust",
    "Roles",
    "select_roles",
    "evaluate_word",
]

# A word is a tuple of (generator name, exponent) pairs; "C" names the cycle.
Word = tuple[tuple[str, int], ...]


def word_str(word: Word) -> str:
    if not word:
        return "I"
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in word)


def parse_word(text: str) -> Word:
    text = text.strip()
    if text in ("", "I"):
        return ()
    out = []
    for part in text.split("*"):
        name, _, exp = part.partition("^")
        out.append((name.strip(), int(exp) if exp else 1))
    return tuple(out)


@dataclass(frozen=True)
class GroupSpec:
    """Generators besides ``C`` at dimension ``2^n`` and coefficient level ``N``."""

    n: int
    level: int
    generators: tuple[tuple[str, MonomialMatrix], ...]
    declared: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise PresentationError("n must be non-negative")
        if self.level < self.n:
            raise PresentationError(f"coefficient level {self.level} below n = {self.n}")
        names = [name for name, _ in self.generators]
        if len(set(names)) != len(names) or "C" in names or "I" in names:
            raise PresentationError("generator names must be distinct and differ from 'C' and 'I'")
        lifted = []
        for name, m in self.generators:
            if m.n != self.n:
                raise PresentationError(f"generator {name}: dimension 2^{m.n}, expected 2^{self.n}")
            if m.level > self.level:
                raise PresentationError(f"generator {name}: coefficient level {m.level} exceeds {self.level}")
            lifted.append((name, m.lift(self.level)))
        object.__setattr__(self, "generators", tuple(lifted))

    @classmethod
    def build(cls, n: int, level: int, gens: Sequence[tuple[str, int, Sequence[int]]]) -> "GroupSpec":
        """From ``(name, r, coeffs)`` triples with ``X e_j = lambda^coeffs[j] e_{r j}``."""
        d = 1 << n
        mats = []
        for name, r, coeffs in gens:
            if len(coeffs) != d:
                raise PresentationError(f"generator {name}: expected {d} coefficients, got {len(coeffs)}")
            if n and r % 2 == 0:
                raise PresentationError(f"generator {name}: r = {r} is not odd")
            mats.append((name, MonomialMatrix.from_relation(r, coeffs, n, level)))
        return cls(n, level, tuple(mats), tuple((name, r % d) for name, r, _ in gens))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.generators)

    def generator(self, name: str) -> MonomialMatrix:
        if name == "C":
            return self.cycle
        for nm, m in self.generators:
            if nm == name:
                return m
        raise KeyError(name)

    @property
    def cycle(self) -> MonomialMatrix:
        return MonomialMatrix.cycle(self.n, self.level)

    def replace(self, name: str, m: MonomialMatrix) -> "GroupSpec":
        gens = tuple((nm, m if nm == name else g) for nm, g in self.generators)
        return GroupSpec(self.n, self.level, gens, self.declared)


def evaluate_word(spec: GroupSpec, word: Word) -> MonomialMatrix:
    out = MonomialMatrix.identity(spec.n, spec.level)
    for name, e in word:
        out = out * spec.generator(name) ** e
    return out


@dataclass(frozen=True)
class TorsionReport:
    """Result of torsion normalization for one generator.

    ``kind`` is one of ``identity``, ``split`` (``A'^(2^a) = I`` reached by a
    shift), ``dihedral`` (``r = -1``, ``A^2 = I``) or ``quaternion``
    (``r = -1``, ``A^2 = C^(2^(n-1))``).
    """

    kind: str
    tau: int
    shift: int
    normalized: MonomialMatrix
    note: str = ""


@dataclass(frozen=True)
class Witness:
    word: Word
    factors: CharPolyFactors
    verdict: PermVerdict

    def __str__(self):
        return f"{word_str(self.word)}: {self.factors.describe()}"


@dataclass
class GroupAnalysis:
    spec: GroupSpec
    relations: dict[str, UnitElement]
    subgroup: SubgroupDescriptor
    order: int
    self_centralized: bool
    elements: list[tuple[Word, MonomialMatrix]] = field(repr=False)
    scope_note: str | None = None
    torsion: dict[str, TorsionReport] = field(default_factory=dict)
    permutation_like: bool | None = None
    witness: Witness | None = None
    scanned: int = 0

    @property
    def in_scope(self) -> bool:
        return self.self_centralized


def _canonical_elements(spec: GroupSpec, relations: Mapping[str, UnitElement]):
    """Canonical words and matrices, deduplicated; also the prefix list."""
    n, level = spec.n, spec.level
    d = 1 << n
    c_pows = [MonomialMatrix.cycle(n, level, k) for k in range(d)]
    names = spec.names
    ranges = [range(relations[nm].order) for nm in names]
    gen_pows = {nm: [spec.generator(nm) ** e for e in range(relations[nm].order)] for nm in names}
    seen: dict = {}
    elements = []
    prefixes = []
    for exps in product(*ranges):
        p = MonomialMatrix.identity(n, level)
        for nm, e in zip(names, exps):
            if e:
                p = p * gen_pows[nm][e]
        if p.key() in seen:
            continue
        pw = tuple((nm, e) for nm, e in zip(names, exps) if e)
        prefixes.append((pw, p))
        for k in range(d):
            m = p * c_pows[k]
            key = m.key()
            if key in seen:
                continue
            seen[key] = True
            elements.append((pw + ((("C", k),) if k else ()), m))
    return elements, prefixes, seen


def _bfs_elements(spec: GroupSpec, cap: int) -> list[tuple[Word, MonomialMatrix]]:
    gens = [("C", spec.cycle)] + list(spec.generators)
    ident = MonomialMatrix.identity(spec.n, spec.level)
    seen = {ident.key()}
    out = [((), ident)]
    queue = deque(out)
    while queue and len(out) < cap:
        w, m = queue.popleft()
        for name, g in gens:
            x = m * g
            if x.key() in seen:
                continue
            seen.add(x.key())
            item = (w + ((name, 1),), x)
            out.append(item)
            queue.append(item)
            if len(out) >= cap:
                break
    return out


def validate(spec: GroupSpec, bfs_cap: int | None = None) -> GroupAnalysis:
    """Check relations, name ``H`` and test that ``<C>`` is self-centralized.

    Raises :class:`~permlike.errors.NotNormalizingError` when a generator's
    permutation part is not a multiplication map and
    :class:`~permlike.errors.PresentationError` when a declared ``r``
    disagrees with the matrix.
    """
    n, d = spec.n, 1 << spec.n
    cyc = spec.cycle
    assert len(set(cyc.coeffs)) == d, "C must have distinct eigenvalues"
    declared = dict(spec.declared)
    relations: dict[str, UnitElement] = {}
    for name, m in spec.generators:
        try:
            rel = relation_of(m)
        except PresentationError as exc:
            raise type(exc)(f"generator {name}: {exc}") from None
        if name in declared and declared[name] % d != rel.value % d:
            raise PresentationError(
                f"generator {name}: declared r = {declared[name]} but the matrix realizes r = {rel.value}")
        relations[name] = rel
    H = subgroup_classify([r.value for r in relations.values()] or [1], n) if n else SubgroupDescriptor("trivial", 0)
    expected = H.order * d
    elements, prefixes, seen = _canonical_elements(spec, relations)
    closed = len(elements) == expected
    if closed:
        for _, p in prefixes:
            for name, g in spec.generators:
                if (p * g).key() not in seen:
                    closed = False
                    break
            if not closed:
                break
    if closed:
        centralizer = [m for _, m in elements if m.is_diagonal()]
        if len(centralizer) != d or any(m.cycle_power() is None for m in centralizer):
            raise RuntimeError("centralizer of C differs from <C> in a closed enumeration")
        return GroupAnalysis(spec, relations, H, expected, True, elements)
    cap = bfs_cap if bfs_cap is not None else 4 * expected
    elements = _bfs_elements(spec, cap)
    note = "not self-centralized: the centralizer of C is larger than <C>"
    if len(elements) >= cap:
        note += f" (enumeration truncated at {cap} elements)"
    return GroupAnalysis(spec, relations, H, len(elements), False, elements, scope_note=note)


def enumerate_elements(spec: GroupSpec | GroupAnalysis) -> Iterator[tuple[Word, MonomialMatrix]]:
    """Each element once, in canonical word order ``X_1^e_1 ... X_k^e_k C^c``."""
    analysis = spec if isinstance(spec, GroupAnalysis) else validate(spec)
    if analysis.self_centralized and len(analysis.elements) != analysis.subgroup.order << analysis.spec.n:
        raise RuntimeError("duplicate detection failure: element count differs from |H| * 2^n")
    return iter(analysis.elements)


def permutation_like(spec: GroupSpec | GroupAnalysis) -> GroupAnalysis:
    """Run the permutation-similarity test on every element; stop at the first failure."""
    analysis = spec if isinstance(spec, GroupAnalysis) else validate(spec)
    cache: dict[tuple, tuple[CharPolyFactors, PermVerdict]] = {}
    analysis.scanned = 0
    mask = (1 << analysis.spec.level) - 1
    for word, m in enumerate_elements(analysis):
        c = m.coeffs
        # similarity class depends only on the sorted (cycle length, cycle product) data
        key = tuple(sorted((len(cyc), sum(c[j] for j in cyc) & mask) for cyc in m.cycles()))
        hit = cache.get(key)
        if hit is None:
            f = char_factors(m)
            hit = cache[key] = (f, perm_similarity(f))
        f, verdict = hit
        analysis.scanned += 1
        if not verdict:
            analysis.permutation_like = False
            analysis.witness = Witness(word, f, verdict)
            return analysis
    analysis.permutation_like = True
    analysis.witness = None
    return analysis


def normalize_torsion(a: MonomialMatrix, r: UnitElement | None = None) -> TorsionReport:
    """Shift ``A`` by a power of ``C`` so that ``A'^(2^a) = I``.

    For ``r = -1`` nothing is shifted: ``(A C^k)^2 = A^2`` for all ``k``, so
    the dihedral/quaternion class is reported instead.
    """
    r = relation_of(a) if r is None else r
    n = a.n
    mod = 1 << n
    order = r.order
    tau = (a ** order).cycle_power()
    if tau is None:
        raise PresentationError(f"inconsistent presentation: A^{order} is not a power of C")
    if order == 1:
        h = (-tau) % mod
        out = a * MonomialMatrix.cycle(n, a.level, h)
        return TorsionReport("identity", tau, h, out, "A' = A*C^-tau is the identity" if h else "")
    if r.sign == -1 and r.v == 0:
        if tau % mod == 0:
            return TorsionReport("dihedral", 0, 0, a, "A^2 = I; unchanged under A -> A*C^k")
        if tau == mod >> 1:
            return TorsionReport("quaternion", tau, 0, a, "A^2 = C^(2^(n-1)); unchanged under A -> A*C^k")
        raise PresentationError(f"inconsistent presentation: A^2 = C^{tau} for r = -1")
    s = geom_sum(r, order)
    val = v2(s) if s else n
    if tau % (1 << val):
        raise PresentationError(f"inconsistent presentation: A^{order} = C^{tau} is not reachable for r = {r.value}")
    u_inv = pow(s >> val, -1, mod)
    if r.sign == 1:
        h = (-(tau >> val) * u_inv) % mod
    else:
        # tau is 0 or 2^(n-1) here; the odd shift u' cancels the latter
        h = 0 if tau == 0 else u_inv
    out = a * MonomialMatrix.cycle(n, a.level, h)
    if not (out ** order).is_identity():
        raise ContradictionError(f"torsion shift h = {h} failed to give A'^{order} = I")
    return TorsionReport("split", tau, h, out)


def commuting_adjust(a: MonomialMatrix, b: MonomialMatrix, r: UnitElement | None = None):
    """Return ``(B', k, h)`` with ``B^-1 A B = A C^k`` and ``B' = B C^h`` commuting with ``A``."""
    r = relation_of(a) if r is None else r
    n = a.n
    mod = 1 << n
    k = (a.inverse() * b.inverse() * a * b).cycle_power()
    if k is None:
        raise PresentationError("A^-1 B^-1 A B is not a power of C")
    a_exp = r.log_order
    if r.sign != 1 or r.order == 1:
        raise PresentationError("commuting adjustment needs r = 1 + 2^(n-a) v with a >= 1")
    if k and v2(k) < n - a_exp:
        raise PresentationError(
            f"B^-1 A B = A C^{k} with v2(k) < n - a = {n - a_exp}: forbidden by the geometric-sum valuation")
    h = (k >> (n - a_exp)) * pow(r.v, -1, mod) % mod
    bp = b * MonomialMatrix.cycle(n, b.level, h)
    if a * bp != bp * a:
        raise ContradictionError("adjusted B does not commute with A")
    if (b * b).is_identity() and not (bp * bp).is_identity():
        raise ContradictionError("adjusted B lost B^2 = I")
    return bp, k, h


@dataclass(frozen=True)
class Roles:
    """Elements playing ``A`` and ``B`` for the drivers, as words in the input generators."""

    a_word: Word | None
    a: MonomialMatrix | None
    b_word: Word | None = None
    b: MonomialMatrix | None = None


def _element_relation(m: MonomialMatrix) -> UnitElement:
    return relation_of(m)


def select_roles(analysis: GroupAnalysis) -> Roles:
    """Pick ``A`` (generating ``H`` or its ``= 1 mod 4`` factor) and ``B`` (relation ``-1``).

    Input generators are preferred, in input order; otherwise the first
    element in canonical order with the right relation is used.
    """
    H = analysis.subgroup
    spec = analysis.spec
    if H.tag == "trivial":
        return Roles(None, None)
    target = H.elements()

    def gen_ok_cyclic(rel: UnitElement) -> bool:
        return rel.order == H.order and set(unit_decompose(rel.value ** i, spec.n).value
                                            for i in range(rel.order)) == target

    def gen_ok_plus(rel: UnitElement) -> bool:
        return rel.sign == 1 and rel.order == 1 << H.a and spec.n >= 3

    def gen_ok_minus(rel: UnitElement) -> bool:
        return rel.value == (1 << spec.n) - 1

    def find(pred):
        for name, _ in spec.generators:
            if pred(analysis.relations[name]):
                return ((name, 1),), spec.generator(name)
        for w, m in analysis.elements:
            if m.is_diagonal():
                continue
            if pred(_element_relation(m)):
                return _strip_c(w), _strip_c_matrix(spec, w, m)
        raise ContradictionError(f"no element realizes the required relation in {H}")

    if H.is_cyclic:
        w, m = find(gen_ok_cyclic)
        return Roles(w, m)
    aw, am = find(gen_ok_plus)
    bw, bm = find(gen_ok_minus)
    return Roles(aw, am, bw, bm)


def _strip_c(word: Word) -> Word:
    return tuple((nm, e) for nm, e in word if nm != "C")


def _strip_c_matrix(spec: GroupSpec, word: Word, m: MonomialMatrix) -> MonomialMatrix:
    return evaluate_word(spec, _strip_c(word))
