"""Construct a basis in which a permutation-like group acts by permutations.

Basis vectors are tracked only through rescale exponents: the new basis is
``e'_j = lambda_N^{t_j} e_j``, so a monomial matrix with coefficients ``c_j``
gets coefficients ``c_j + t_j - t_{perm(j)}`` (see
:meth:`MonomialMatrix.rescaled`).  After the rescaling makes every generator
except ``C`` a permutation matrix, the Fourier basis ``{C^k f}`` with
``f = sum e'_j`` turns ``C`` into the shift ``k -> k + 1`` and a generator with
relation ``r`` into ``k -> r^-1 k``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

from .cyclotomic import RootOfUnity
from .engine import (
    GroupAnalysis,
    GroupSpec,
    Word,
    commuting_adjust,
    normalize_torsion,
    permutation_like,
    select_roles,
    word_str,
)
from .errors import ContradictionError, SynthesisError
from .monomial import MonomialMatrix, is_permutation_matrix, relation_of
from .residue import Orbit, UnitElement, orbit_pairing, orbits

__all__ = [
    "TraceStep",
    "PermBasisCertificate",
    "rescale_orbit",
    "vstar_basis",
    "restrict_v2",
    "dihedral_basis",
    "a_permutation_basis",
    "fourier_permutations",
    "canonicalize_rescale",
    "cyclic_driver",
    "noncyclic_driver",
    "synthesize",
]


@dataclass(frozen=True)
class TraceStep:
    n: int
    r: int
    case: str
    note: str = ""


@dataclass
class PermBasisCertificate:
    n: int
    level: int
    rescale: list[int]
    generator_permutations: dict[str, list[int]]
    generator_words: dict[str, str]
    substitutions: list[str] = field(default_factory=list)
    pairing: list[list[int]] = field(default_factory=list)
    trace: list[dict] = field(default_factory=list)
    fourier: bool = True

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> "PermBasisCertificate":
        return cls(
            n=int(data["n"]),
            level=int(data["level"]),
            rescale=[int(t) for t in data["rescale"]],
            generator_permutations={k: [int(x) for x in v] for k, v in data["generator_permutations"].items()},
            generator_words={k: str(v) for k, v in data.get("generator_words", {}).items()},
            substitutions=list(data.get("substitutions", [])),
            pairing=[list(p) for p in data.get("pairing", [])],
            trace=list(data.get("trace", [])),
            fourier=bool(data.get("fourier", True)),
        )

    @classmethod
    def from_json(cls, text: str) -> "PermBasisCertificate":
        return cls.from_dict(json.loads(text))


def rescale_orbit(a: MonomialMatrix, orbit: Orbit | Sequence[int], start: int = 0):
    """Rescales along ``orbit`` making ``e'_{r^i j} = A^i e'_j``, plus the corner root.

    The first listed index gets exponent ``start``.  The corner ``omega`` is
    the product of ``A``'s coefficients around the orbit; the block is a
    permutation matrix iff ``omega = 1``.
    """
    elems = tuple(orbit)
    mod = 1 << a.level
    out = {elems[0]: start % mod}
    for x, y in zip(elems, elems[1:]):
        if a.perm[x] != y:
            raise ValueError("orbit is not listed in A's power order")
        out[y] = (out[x] + a.coeffs[x]) % mod
    omega = RootOfUnity(a.level, sum(a.coeffs[x] for x in elems) % mod)
    return out, omega


def vstar_basis(a: MonomialMatrix, r: UnitElement | None = None) -> dict[int, int]:
    """Rescales on the odd indices making ``A`` a permutation there."""
    r = relation_of(a) if r is None else r
    out: dict[int, int] = {}
    if a.n == 0:
        return out
    for orb in orbits(r.value, a.n, "units"):
        if len(orb) != r.order:
            raise ContradictionError(f"odd orbit of length {len(orb)} for r of order {r.order}")
        part, omega = rescale_orbit(a, orb)
        if not omega.is_one():
            raise SynthesisError(f"torsion not normalized: corner {omega} on orbit of {orb.rep}")
        out.update(part)
    return out


def restrict_v2(a: MonomialMatrix) -> MonomialMatrix:
    """``A`` on the span of even-indexed eigenvectors, reindexed ``t <-> 2t``.

    The coefficient level is kept, so ``C`` restricts to ``C_2 = diag(lambda_{n-1}^t)``.
    """
    if a.n == 0:
        raise ValueError("no even sublattice below dimension 1")
    half = a.dim >> 1
    perm = [a.perm[2 * t] >> 1 for t in range(half)]
    if any(a.perm[2 * t] % 2 for t in range(half)):
        raise ValueError("even indices are not invariant")
    return MonomialMatrix(a.n - 1, a.level, perm, [a.coeffs[2 * t] for t in range(half)], check=False)


def dihedral_basis(a: MonomialMatrix) -> tuple[dict[int, int] | None, str]:
    """Rescales for ``r = -1, A^2 = I``, or ``(None, 'dihedral-ii')`` when ``A e_half = -e_half``."""
    n, d, mod = a.n, a.dim, 1 << a.level
    if d == 1:
        if a.coeffs[0]:
            raise ContradictionError("A e_0 != e_0")
        return {0: 0}, "dihedral-i"
    half = d >> 1
    if a.coeffs[0] != 0:
        raise ContradictionError("A e_0 != e_0 in a permutation-like dihedral group")
    for j in range(1, half):
        if (a.coeffs[j] + a.coeffs[d - j]) % mod:
            raise SynthesisError("quaternion torsion: A^2 != I")
    sign = a.coeffs[half]
    if sign == mod >> 1:
        return None, "dihedral-ii"
    if sign != 0:
        raise SynthesisError("A^2 != I at the fixed index 2^(n-1)")
    t = {0: 0, half: 0}
    for j in range(1, half):
        t[j] = 0
        t[d - j] = a.coeffs[j]
    return t, "dihedral-i"


def a_permutation_basis(a: MonomialMatrix, trace: list[TraceStep], top: bool = True,
                        substitutions: list[str] | None = None, name: str = "A"):
    """Rescale vector making ``A`` (normalized, ``A^(ord r) = I``) a permutation matrix.

    Returns ``(t, A_final)``; ``A_final`` differs from ``A`` only by the
    dihedral substitution ``A := A*C`` at the top level.
    """
    n, d = a.n, a.dim
    r = relation_of(a)
    t: list[int | None] = [None] * d
    if d == 1:
        if a.coeffs[0]:
            raise ContradictionError("A e_0 != e_0")
        trace.append(TraceStep(n, r.value, "trivial"))
        return [0], a
    if r.order == 1:
        if not a.is_identity():
            raise SynthesisError("torsion not normalized: r = 1 but A != I")
        trace.append(TraceStep(n, r.value, "identity"))
        return [0] * d, a
    if r.sign == -1 and r.v == 0:
        basis, case = dihedral_basis(a)
        if basis is None:
            if not top:
                raise ContradictionError("dihedral case (ii) below the top level")
            a = a * MonomialMatrix.cycle(n, a.level)
            if substitutions is not None:
                substitutions.append(f"{name}:={name}*C")
            trace.append(TraceStep(n, r.value, "dihedral-ii", f"{name} replaced by {name}*C"))
            basis, case = dihedral_basis(a)
            if basis is None:
                raise ContradictionError("A*C still in dihedral case (ii)")
        trace.append(TraceStep(n, r.value, case))
        out = [basis[j] for j in range(d)]
        _check_perm(a, out)
        return out, a
    for j, v in vstar_basis(a, r).items():
        t[j] = v
    a2 = restrict_v2(a)
    mod_half = 1 << (n - 1)
    if r.log_order == 1 and r.sign == 1:
        trace.append(TraceStep(n, r.value, "a=1-plus"))
        if not a2.is_identity():
            if a2 == MonomialMatrix.cycle(n - 1, a.level, 1 << max(n - 2, 0)):
                raise ContradictionError("A|V2 equals a power of C|V2 excluded by the structure theory")
            raise ContradictionError("A|V2 is not the identity for r = 1 + 2^(n-1)")
        sub = [0] * (d >> 1)
    else:
        if r.log_order == 1:
            trace.append(TraceStep(n, r.value, "a=1-minus"))
            if relation_of(a2).value != mod_half - 1:
                raise ContradictionError("restriction of r = -1 + 2^(n-1) is not -1")
        else:
            trace.append(TraceStep(n, r.value, "induction"))
            if pow(r.value, r.order >> 1, 1 << n) != (1 << (n - 1)) + 1:
                raise ContradictionError("r^(2^(a-1)) != 1 + 2^(n-1)")
            if not (a2 ** (r.order >> 1)).is_identity():
                raise ContradictionError("A|V2 does not satisfy A2^(2^(a-1)) = I")
        sub, a2_final = a_permutation_basis(a2, trace, top=False)
    for s, v in enumerate(sub):
        t[2 * s] = v
    out = [int(v) for v in t]
    _check_perm(a, out)
    return out, a


def _check_perm(a: MonomialMatrix, t: Sequence[int]) -> None:
    if not is_permutation_matrix(a.rescaled(t)):
        raise ContradictionError("rescaled generator is not a permutation matrix")


def fourier_permutations(gens: Mapping[str, MonomialMatrix], rescale: Sequence[int]) -> dict[str, list[int]]:
    """Action on ``{C^k f}``: ``C`` shifts, a generator with relation ``r`` maps ``k -> r^-1 k``."""
    out: dict[str, list[int]] = {}
    for name, m in gens.items():
        d = m.dim
        if name == "C":
            out[name] = [(k + 1) % d for k in range(d)]
            continue
        if not is_permutation_matrix(m.rescaled(rescale)):
            raise SynthesisError(f"generator {name} is not a permutation matrix in the rescaled basis")
        r_inv = relation_of(m).inverse().value if d > 1 else 0
        out[name] = [r_inv * k % d for k in range(d)]
    return out


def canonicalize_rescale(t: Sequence[int], multipliers: Sequence[int], n: int, level: int) -> list[int]:
    """Subtract a constant per ``H``-orbit so each orbit's smallest index gets 0.

    Constant shifts on an ``H``-orbit of indices do not change any rescaled
    matrix of the group, so this normal form is free and removes the slack.
    """
    d = 1 << n
    mod = 1 << level
    seen = [False] * d
    out = list(t)
    for j in range(d):
        if seen[j]:
            continue
        stack, members = [j], []
        seen[j] = True
        while stack:
            x = stack.pop()
            members.append(x)
            for r in multipliers:
                y = r * x % d
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        base = t[j]
        for x in members:
            out[x] = (t[x] - base) % mod
    return out


def _record(trace: list[TraceStep]) -> list[dict]:
    return [asdict(s) for s in trace]


def _gate(analysis: GroupAnalysis) -> GroupAnalysis:
    if analysis.permutation_like is None:
        analysis = permutation_like(analysis)
    if not analysis.self_centralized:
        raise SynthesisError("group is outside scope: <C> is not self-centralized")
    if not analysis.permutation_like:
        raise SynthesisError(f"group is not permutation-like (witness {analysis.witness})")
    return analysis


def _shift_note(name: str, h: int) -> str:
    return f"{name}:={name}*C^{h}"


def _finish(analysis: GroupAnalysis, t: list[int], listed: dict[str, MonomialMatrix],
            words: dict[str, str], substitutions, pairing, trace) -> PermBasisCertificate:
    spec = analysis.spec
    t = canonicalize_rescale(t, [r.value for r in analysis.relations.values()], spec.n, spec.level)
    for name, m in listed.items():
        if name != "C" and not is_permutation_matrix(m.rescaled(t)):
            raise ContradictionError(f"{name} is not a permutation matrix after canonicalization")
    gens = {"C": spec.cycle, **listed}
    return PermBasisCertificate(
        n=spec.n,
        level=spec.level,
        rescale=t,
        generator_permutations=fourier_permutations(gens, t),
        generator_words={"C": "C", **words},
        substitutions=list(substitutions),
        pairing=pairing,
        trace=_record(trace),
    )


def _word_with_shift(word: Word, shift: int, d: int) -> str:
    w = list(word)
    shift %= d
    if shift:
        w.append(("C", shift))
    return word_str(tuple(w))


def cyclic_driver(analysis: GroupAnalysis | GroupSpec) -> PermBasisCertificate:
    if isinstance(analysis, GroupSpec):
        analysis = permutation_like(analysis)
    analysis = _gate(analysis)
    spec = analysis.spec
    if not analysis.subgroup.is_cyclic:
        raise SynthesisError("cyclic driver called on a non-cyclic quotient")
    d = 1 << spec.n
    trace: list[TraceStep] = []
    substitutions: list[str] = []
    roles = select_roles(analysis)
    if roles.a is None:
        trace.append(TraceStep(spec.n, 1, "trivial", "H trivial: only <C>"))
        return _finish(analysis, [0] * d, {}, {}, substitutions, [], trace)
    rep = normalize_torsion(roles.a)
    analysis.torsion["A"] = rep
    if rep.kind == "quaternion":
        raise SynthesisError("quaternion torsion passed the gate")
    a = rep.normalized
    shift = rep.shift
    if shift:
        substitutions.append(_shift_note("A", shift))
    t, a_final = a_permutation_basis(a, trace, top=True, substitutions=substitutions)
    if a_final is not a:
        shift += 1
    words = {"A": _word_with_shift(roles.a_word, shift, d)}
    return _finish(analysis, t, {"A": a_final}, words, substitutions, [], trace)


def noncyclic_driver(analysis: GroupAnalysis | GroupSpec) -> PermBasisCertificate:
    if isinstance(analysis, GroupSpec):
        analysis = permutation_like(analysis)
    analysis = _gate(analysis)
    spec = analysis.spec
    if analysis.subgroup.tag != "product":
        raise SynthesisError("non-cyclic driver needs H = <-1> x <1 + 2^(n-a)>")
    n, d = spec.n, 1 << spec.n
    mod = 1 << spec.level
    trace: list[TraceStep] = []
    substitutions: list[str] = []
    roles = select_roles(analysis)
    rep_a = normalize_torsion(roles.a)
    rep_b = normalize_torsion(roles.b)
    analysis.torsion["A"], analysis.torsion["B"] = rep_a, rep_b
    if rep_b.kind != "dihedral":
        raise SynthesisError("B^2 != I passed the gate")
    a = rep_a.normalized
    if rep_a.shift:
        substitutions.append(_shift_note("A", rep_a.shift))
    r = relation_of(a)
    b, k, h = commuting_adjust(a, roles.b, r)
    if h:
        substitutions.append(_shift_note("B", h))
    trace.append(TraceStep(n, r.value, "noncyclic", f"B^-1 A B = A C^{k}; B shifted by C^{h}"))
    # run the A-basis construction for its structural checks
    a_permutation_basis(a, trace, top=False)
    pairing = orbit_pairing(r)
    if pairing.self_paired:
        raise ContradictionError("self-paired orbit for r = 1 (mod 4)")
    t: list[int | None] = [None] * d
    for pos, neg in pairing.pairs:
        part, omega = rescale_orbit(a, pos, 0)
        if not omega.is_one():
            raise ContradictionError(f"corner {omega} on orbit of {pos.rep}")
        jt = pos.rep
        if b.perm[jt] != neg.rep:
            raise ContradictionError("B does not map the orbit onto its negation")
        part_neg, omega_neg = rescale_orbit(a, neg, part[jt] + b.coeffs[jt])
        if not omega_neg.is_one():
            raise ContradictionError(f"corner {omega_neg} on orbit of {neg.rep}")
        for x, v in {**part, **part_neg}.items():
            if t[x] is not None:
                raise ContradictionError(f"index {x} assigned twice")
            t[x] = v
    half = d >> 1
    for j in (0, half):
        if a.coeffs[j]:
            raise ContradictionError(f"A e_{j} != e_{j}")
        t[j] = 0
    if b.coeffs[0]:
        raise ContradictionError("B e_0 != e_0")
    ab = a * b
    a_permutation_basis(ab, trace, top=False)
    if ab.coeffs[half] or b.coeffs[half] % mod:
        raise ContradictionError("B e_half != e_half")
    trace.append(TraceStep(n, r.value, "fixed-points", "A, B fix e_0 and e_half"))
    t_full = [int(v) for v in t]
    for name, m in (("A", a), ("B", b)):
        if not is_permutation_matrix(m.rescaled(t_full)):
            raise ContradictionError(f"{name} not a permutation matrix in the paired basis")
    words = {
        "A": _word_with_shift(roles.a_word, rep_a.shift, d),
        "B": _word_with_shift(roles.b_word, h, d),
    }
    pairs = [[pos.rep, neg.rep] for pos, neg in pairing.pairs]
    return _finish(analysis, t_full, {"A": a, "B": b}, words, substitutions, pairs, trace)


def synthesize(analysis: GroupAnalysis | GroupSpec) -> PermBasisCertificate:
    """Dispatch to the cyclic or non-cyclic driver by the shape of ``H``."""
    if isinstance(analysis, GroupSpec):
        analysis = permutation_like(analysis)
    if analysis.subgroup.is_cyclic or analysis.subgroup.tag == "trivial":
        return cyclic_driver(analysis)
    return noncyclic_driver(analysis)
