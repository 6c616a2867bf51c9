"""Property suites shared by ``permlike selftest`` and the acceptance tests.

Each suite returns a :class:`SuiteResult`; parameters scale the work so the
self-test can run a reduced version of the same checks.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .cyclotomic import CycloPoly, RootOfUnity, cyclotomic_poly_2power, primitive_product_identity, primitive_roots
from .engine import GroupSpec, permutation_like, validate, word_str
from .monomial import CharPolyFactors, MonomialMatrix, char_factors, eigen_multiset, perm_similarity
from .oracle import brute_char_poly, brute_perm_factorization, dense_expand, expand_factors, verify_certificate
from .pipeline import TwistPolicy, build_presentation, check, presentations
from .residue import SubgroupDescriptor, all_subgroups, geom_sum_valuation, unit_decompose, v2
from .synth import PermBasisCertificate

__all__ = [
    "SuiteResult",
    "valuation_suite",
    "cyclotomic_suite",
    "closed_form_suite",
    "dichotomy_suite",
    "cyclic_theorem_suite",
    "noncyclic_theorem_suite",
    "oracle_suite",
    "similarity_suite",
    "mutation_suite",
    "SELFTEST",
]


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{mark} {self.name}: {self.checked} checks in {self.seconds:.2f}s{extra}"


def _timed(name: str, body: Callable[[], tuple[bool, int, str]]) -> SuiteResult:
    t0 = time.perf_counter()
    ok, count, detail = body()
    return SuiteResult(name, ok, count, detail, time.perf_counter() - t0)


def _root_counter(roots: Iterable[RootOfUnity]) -> Counter:
    return Counter(r.canonical() for r in roots)


def _eigen(f: CharPolyFactors) -> Counter:
    return _root_counter(eigen_multiset(f).elements())


# -- valuations and the cyclotomic identity ------------------------------------


def valuation_suite(max_n: int = 12) -> SuiteResult:
    """Closed-form valuation of ``1 + r + ... + r^(ord r - 1)`` against the integer sum."""

    def body():
        count = 0
        for n in range(1, max_n + 1):
            mod = 1 << n
            for r in range(1, mod, 2):
                u = unit_decompose(r, n)
                if not 2 <= u.order <= mod >> 2:
                    continue
                count += 1
                # the valuation never exceeds n, so summing mod 2^(4n) is exact for v2
                big = 1 << (4 * n)
                total, term = 0, 1
                for _ in range(u.order):
                    total += term
                    term = term * r % big
                total %= big
                got = geom_sum_valuation(u)
                if total % mod == 0:
                    if got is not None and got < n:
                        return False, count, f"r={r} n={n}: sum vanishes mod 2^n but got {got}"
                    if r != mod - 1:
                        return False, count, f"r={r} n={n}: zero sum for r != -1"
                elif got != v2(total):
                    return False, count, f"r={r} n={n}: got {got}, direct {v2(total)}"
            if n >= 2:
                count += 1
                if geom_sum_valuation(unit_decompose(-1, n)) is not None:
                    return False, count, f"r=-1 n={n}: zero sum not detected"
        return True, count, ""

    return _timed("geometric-sum valuations", body)


def cyclotomic_suite(max_sum: int = 12) -> SuiteResult:
    def body():
        count = 0
        for a in range(0, max_sum + 1):
            for k in range(1, max_sum - a + 1):
                count += 1
                if not primitive_product_identity(a, k):
                    return False, count, f"product identity fails at a={a}, k={k}"
        for a in range(0, max_sum):
            count += 1
            expect = CycloPoly(1, {1 << a: 1, 0: 1})
            if cyclotomic_poly_2power(a + 1) != expect:
                return False, count, f"Phi_(2^{a + 1}) != x^(2^{a}) + 1"
        return True, count, ""

    return _timed("cyclotomic product identity", body)


# -- closed-form characteristic polynomials ----------------------------------


def _restrict_odd(m: MonomialMatrix) -> MonomialMatrix:
    odd = list(range(1, m.dim, 2))
    pos = {j: i for i, j in enumerate(odd)}
    # a dimension-2^(n-1) container; only cycles and products matter here
    return MonomialMatrix(m.n - 1, m.level, [pos[m.perm[j]] for j in odd], [m.coeffs[j] for j in odd], check=False)


def _expected_vstar(n: int, r, k: int) -> Counter:
    a = r.log_order
    out: Counter = Counter()

    def add(m_exp: int, mult: int, primitive_only: bool):
        levels = [m_exp] if primitive_only else range(m_exp + 1)
        for lvl in levels:
            for root in primitive_roots(lvl):
                out[root.canonical()] += mult

    if r.sign == 1:
        nu = v2(k) if k else None
        if nu is not None and nu < n - a:
            add(n - nu, 1 << nu, True)
        else:
            add(a, 1 << (n - a - 1), False)
    else:
        if k % 2:
            add(a + 1, 1 << (n - a - 1), True)
        else:
            add(a, 1 << (n - a - 1), False)
    return out


def closed_form_suite(ns: Sequence[int] = (4, 5, 6), seed: int = 0) -> SuiteResult:
    """Char factors of ``(A C^k)`` on the odd eigenlines against the closed-form table."""

    def body():
        rng = random.Random(seed)
        count = 0
        for n in ns:
            d = 1 << n
            for rv in range(1, d, 2):
                if rv == d - 1:
                    continue
                r = unit_decompose(rv, n)
                base = MonomialMatrix.from_relation(rv, [0] * d, n, n)
                # a random diagonal conjugate keeps A^(2^a) = I
                t = [rng.randrange(d) for _ in range(d)]
                a_mat = base.rescaled(t)
                for k in range(d):
                    count += 1
                    m = a_mat * MonomialMatrix.cycle(n, n, k)
                    got = _eigen(char_factors(_restrict_odd(m)))
                    if got != _expected_vstar(n, r, k):
                        return False, count, f"n={n} r={rv} k={k}"
        return True, count, ""

    return _timed("closed-form char polys on odd eigenlines", body)


def _dihedral_table(n: int, case: str, k: int) -> Counter:
    one, minus = RootOfUnity(0, 0), RootOfUnity(1, 1)
    split = (k % 2 == 0) == (case == "dihedral-i")
    pairs = (1 << (n - 1)) - (1 if split else 0)
    out = Counter({one: pairs, minus: pairs})
    if split:
        out[one] += 2
    return out


def _quaternion_witness_roots(n: int) -> Counter:
    one, minus = RootOfUnity(0, 0), RootOfUnity(1, 1)
    i_pos, i_neg = RootOfUnity(2, 1), RootOfUnity(2, 3)
    m = (1 << (n - 2)) - 1
    return Counter({one: 2 + m, minus: m, i_pos: 1 + m, i_neg: 1 + m})


def dichotomy_suite(ns: Sequence[int] = (3, 4, 5, 6)) -> SuiteResult:
    """Dihedral char tables for every ``A C^k``; quaternion rejection and its witness."""

    def body():
        count = 0
        for n in ns:
            h = SubgroupDescriptor("minus_one", n)
            for case in ("dihedral-i", "dihedral-ii"):
                spec = build_presentation(h, case)
                an = permutation_like(spec)
                count += 1
                if not an.permutation_like:
                    return False, count, f"n={n} {case} rejected"
                a = spec.generator("A")
                for k in range(1 << n):
                    count += 1
                    got = _eigen(char_factors(a * MonomialMatrix.cycle(n, n, k)))
                    if got != _dihedral_table(n, case, k):
                        return False, count, f"n={n} {case} k={k}"
            for case in ("quaternion-", "quaternion+"):
                an = permutation_like(build_presentation(h, case))
                count += 1
                if an.permutation_like or an.witness is None:
                    return False, count, f"n={n} {case} not rejected"
                if _eigen(an.witness.factors) != _quaternion_witness_roots(n):
                    return False, count, f"n={n} {case} witness {an.witness}"
                if case == "quaternion-" and word_str(an.witness.word) != "A*C":
                    return False, count, f"n={n} {case}: witness is {word_str(an.witness.word)}, expected A*C"
        return True, count, ""

    return _timed("dihedral/quaternion dichotomy", body)


# -- main theorem runs ---------------------------------------------------------


def _theorem_groups(ns, count: int, seeds: Sequence[int | None]):
    """Presentations per ``n``: cyclic ``H`` with ``seeds[0]``, non-cyclic with ``seeds[1]``."""
    for n in ns:
        for seed, cyclic in zip(seeds, (True, False)):
            if seed is None:
                continue
            subs = [h for h in all_subgroups(n) if (h.tag != "product") == cyclic]
            yield from ((n, p) for p in presentations(n, TwistPolicy("seeded", seed, count), subs))


def _theorem_suite(name: str, ns, count: int, seed: int, want_cyclic: bool, dense_max: int) -> SuiteResult:
    def body():
        checked = 0
        certified = 0
        seeds = (seed, None) if want_cyclic else (None, seed)
        for n, p in _theorem_groups(ns, count, seeds):
            tier = "both" if n <= dense_max else "fast"
            out = check(p.spec, tier)
            checked += 1
            if out.status == 0:
                certified += 1
            elif out.status != 2:
                return False, checked, f"n={n} H={p.subgroup} {p.torsion} {p.twist}: {out.message}"
        return True, checked, f"{certified} certified"

    return _timed(name, body)


def cyclic_theorem_suite(ns=(3, 4, 5, 6), count: int = 100, seed: int = 1, dense_max: int = 4) -> SuiteResult:
    return _theorem_suite("cyclic quotient: certify and verify", ns, count, seed, True, dense_max)


def noncyclic_theorem_suite(ns=(3, 4, 5, 6), count: int = 100, seed: int = 2, dense_max: int = 4) -> SuiteResult:
    return _theorem_suite("non-cyclic quotient: certify and verify", ns, count, seed, False, dense_max)


# -- oracle independence -----------------------------------------------------


def oracle_suite(ns=(2, 3, 4), count: int = 3, seeds: Sequence[int] = (1, 2)) -> SuiteResult:
    """Expanded char factors equal naive determinants on every element; dense certificates are 0/1.

    ``seeds`` pairs with (cyclic, non-cyclic) subgroups as in the theorem suites,
    so the same groups are covered.
    """

    def body():
        checked = 0
        cache: dict = {}
        for n, p in _theorem_groups(ns, count, seeds):
            an = validate(p.spec)
            for w, m in an.elements:
                key = m.key()
                if key in cache:
                    continue
                checked += 1
                ok = brute_char_poly(dense_expand(m)) == expand_factors(char_factors(m), m.level)
                cache[key] = ok
                if not ok:
                    return False, checked, f"n={n} {p.torsion} {p.twist} element {word_str(w)}"
            out = check(p.spec, "fast")
            if out.status == 0:
                rep = verify_certificate(out.analysis, out.certificate, "dense")
                checked += len(rep.results)
                if not rep.passed:
                    return False, checked, f"n={n} {p.torsion} {p.twist}: {rep.first_failure}"
        return True, checked, ""

    return _timed("oracle independence", body)


def random_factor_multiset(rng: random.Random, max_degree: int = 32, max_level: int = 5) -> CharPolyFactors:
    """Random ``prod (x^(2^b) - omega)``; about half start from a permutation type."""
    factors = []
    degree = rng.randint(1, max_degree)
    if rng.random() < 0.5:
        while degree > 0:
            b = rng.randint(0, min(5, degree.bit_length() - 1))
            factors.append((1 << b, RootOfUnity(0, 0)))
            degree -= 1 << b
        if factors and rng.random() < 0.5:
            i = rng.randrange(len(factors))
            lvl = rng.randint(1, max_level)
            factors[i] = (factors[i][0], RootOfUnity(lvl, rng.randrange(1 << lvl)))
    else:
        while degree > 0:
            b = rng.randint(0, min(5, degree.bit_length() - 1))
            lvl = rng.randint(0, max_level)
            factors.append((1 << b, RootOfUnity(lvl, rng.randrange(1 << lvl))))
            degree -= 1 << b
    return CharPolyFactors(tuple(factors))


def similarity_suite(ns=(2, 3, 4, 5), random_count: int = 1000, seed: int = 4, twists: int = 3) -> SuiteResult:
    """``perm_similarity`` against exhaustive factorization search."""

    def body():
        seen: set = set()
        samples: list[CharPolyFactors] = []
        for n in ns:
            for p in presentations(n, TwistPolicy("seeded", seed, twists)):
                for _, m in validate(p.spec).elements:
                    f = char_factors(m)
                    if f not in seen:
                        seen.add(f)
                        samples.append(f)
        rng = random.Random(seed)
        samples += [random_factor_multiset(rng) for _ in range(random_count)]
        positives = 0
        for i, f in enumerate(samples):
            fast = bool(perm_similarity(f))
            positives += fast
            if fast != brute_perm_factorization(f):
                return False, i + 1, f"disagreement on {f.describe()}"
        return True, len(samples), f"{positives} permutation types"

    return _timed("permutation similarity vs brute force", body)


# -- mutation robustness -------------------------------------------------------


def mutate(cert: PermBasisCertificate, rng: random.Random) -> tuple[PermBasisCertificate, str]:
    """Change one rescale exponent or one permutation image to a different value."""
    data = cert.to_dict()
    mod = 1 << cert.level
    d = 1 << cert.n
    if rng.random() < 0.5:
        j = rng.randrange(d)
        data["rescale"][j] = (data["rescale"][j] + rng.randrange(1, mod)) % mod
        what = f"rescale[{j}]"
    else:
        name = rng.choice(sorted(data["generator_permutations"]))
        k = rng.randrange(d)
        data["generator_permutations"][name][k] = (data["generator_permutations"][name][k] + rng.randrange(1, d)) % d
        what = f"{name}[{k}]"
    return PermBasisCertificate.from_dict(data), what


def mutation_suite(ns=(3, 4), count: int = 100, seed: int = 5) -> SuiteResult:
    def body():
        rng = random.Random(seed)
        checked = 0
        for n in ns:
            pool = []
            for p in presentations(n, TwistPolicy("seeded", seed, 2)):
                out = check(p.spec, "fast")
                if out.status == 0:
                    pool.append(out)
            for _ in range(count):
                out = rng.choice(pool)
                bad, what = mutate(out.certificate, rng)
                checked += 1
                if verify_certificate(out.analysis, bad, "fast").passed:
                    return False, checked, f"n={n}: mutation of {what} accepted"
        return True, checked, ""

    return _timed("certificate mutation robustness", body)


def _selftest_suites() -> list[Callable[[], SuiteResult]]:
    return [
        lambda: valuation_suite(10),
        lambda: cyclotomic_suite(10),
        lambda: closed_form_suite((4, 5)),
        lambda: dichotomy_suite((3, 4, 5)),
        lambda: cyclic_theorem_suite((3, 4), count=5),
        lambda: noncyclic_theorem_suite((3, 4), count=5),
        lambda: oracle_suite((2, 3), count=1),
        lambda: similarity_suite((2, 3, 4), random_count=200, twists=1),
        lambda: mutation_suite((3,), count=30),
    ]


SELFTEST = _selftest_suites
