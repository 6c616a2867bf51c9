"""End-to-end checks and the presentation generator behind ``enumerate``.

Presentations are generated per subgroup ``H`` of the unit group, per torsion
choice and per coefficient twist.  Coefficient level is ``N = n``.

Torsion choices:

* ``r = -1``: ``dihedral-i`` (``A^2 = I``, ``A e_half = e_half``),
  ``dihedral-ii`` (``A e_half = -e_half``), ``quaternion-`` and
  ``quaternion+`` (``A^2 = C^(2^(n-1))`` with that sign at ``e_half``).
* other cyclic ``H``: ``tau=0`` (``A^(2^a) = I``), ``tau=half``
  (``A^(2^a) = C^(2^(n-1))`` as ``A' C^h`` with ``A'`` a permutation matrix)
  and ``tau=half,corners`` (same torsion from ``-1`` corners on the odd
  orbits, leaving even orbits untouched).
* ``H = <-1> x <1 + 2^(n-a)>``: ``A`` with ``tau=0`` or ``tau=half`` (the latter
  as ``A' C^h``), and ``B`` one of ``dihedral``, ``dihedral*C``,
  ``dihedral-ii``, ``quaternion-``, ``quaternion+``.

The seeded policy picks a torsion choice at random, optionally replaces the
corner roots on even orbits by random allowed roots (cyclic ``H`` only),
multiplies generators by torsion-preserving powers of ``C`` and finally
conjugates every generator by one random diagonal matrix.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .engine import GroupAnalysis, GroupSpec, permutation_like, validate
from .errors import ContradictionError, PermlikeError, PresentationError, SynthesisError
from .monomial import MonomialMatrix
from .oracle import VerificationReport, verify_certificate
from .residue import SubgroupDescriptor, all_subgroups, geom_sum, orbit_pairing, orbits, unit_decompose, v2
from .synth import PermBasisCertificate, synthesize

__all__ = [
    "EXIT_CERTIFIED",
    "EXIT_ERROR",
    "EXIT_NOT_PERMUTATION_LIKE",
    "EXIT_OUTSIDE_SCOPE",
    "CheckOutcome",
    "check",
    "Presentation",
    "TwistPolicy",
    "torsion_choices",
    "build_presentation",
    "presentations",
    "EnumerationRow",
    "run_row",
    "run_enumeration",
]

EXIT_CERTIFIED = 0
EXIT_ERROR = 1
EXIT_NOT_PERMUTATION_LIKE = 2
EXIT_OUTSIDE_SCOPE = 3


@dataclass
class CheckOutcome:
    status: int
    message: str
    analysis: GroupAnalysis | None = None
    certificate: PermBasisCertificate | None = None
    report: VerificationReport | None = None


def check(spec: GroupSpec, tier: str = "fast") -> CheckOutcome:
    """validate -> permutation-likeness -> driver -> verification."""
    try:
        analysis = validate(spec)
    except PresentationError as exc:
        return CheckOutcome(EXIT_OUTSIDE_SCOPE, f"outside scope: {exc}")
    analysis = permutation_like(analysis)
    if not analysis.self_centralized:
        msg = f"outside scope: {analysis.scope_note}"
        if analysis.witness is not None:
            msg += f"; not permutation-like, witness {analysis.witness}"
        return CheckOutcome(EXIT_OUTSIDE_SCOPE, msg, analysis)
    if not analysis.permutation_like:
        return CheckOutcome(EXIT_NOT_PERMUTATION_LIKE, f"not permutation-like: witness {analysis.witness}", analysis)
    try:
        cert = synthesize(analysis)
    except (ContradictionError, SynthesisError, PresentationError) as exc:
        return CheckOutcome(EXIT_ERROR, f"synthesis failed: {type(exc).__name__}: {exc}", analysis)
    if tier in ("dense", "both") and spec.n > 4:
        tier = "fast"
    report = verify_certificate(analysis, cert, tier)
    if not report.passed:
        f = report.first_failure
        return CheckOutcome(EXIT_ERROR, f"certificate rejected at {f.word} ({f.tier}): {f.reason}",
                            analysis, cert, report)
    return CheckOutcome(EXIT_CERTIFIED, f"certified: |G| = {analysis.order}, H = {analysis.subgroup}",
                        analysis, cert, report)


# -- presentation generator --------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    subgroup: SubgroupDescriptor
    torsion: str
    twist: str
    spec: GroupSpec


@dataclass(frozen=True)
class TwistPolicy:
    """``canonical`` or ``seeded`` with a seed and a count per subgroup."""

    kind: str = "canonical"
    seed: int = 0
    count: int = 0

    @classmethod
    def parse(cls, text: str) -> "TwistPolicy":
        if text == "canonical":
            return cls()
        parts = text.split(":")
        if len(parts) == 3 and parts[0] == "seeded":
            return cls("seeded", int(parts[1]), int(parts[2]))
        raise ValueError(f"twist policy must be 'canonical' or 'seeded:SEED:COUNT', got {text!r}")

    def __str__(self):
        return "canonical" if self.kind == "canonical" else f"seeded:{self.seed}:{self.count}"


def torsion_choices(h: SubgroupDescriptor) -> list[str]:
    if h.tag == "trivial":
        return ["-"]
    if h.tag == "minus_one":
        return ["dihedral-i", "dihedral-ii", "quaternion-", "quaternion+"]
    if h.is_cyclic:
        return ["tau=0", "tau=half", "tau=half,corners"]
    return [f"A:{ta},B:{tb}" for ta in ("tau=0", "tau=half")
            for tb in ("dihedral", "dihedral*C", "dihedral-ii", "quaternion-", "quaternion+")]


def _minus_one_coeffs(n: int, level: int, kind: str) -> list[int]:
    d, half, neg = 1 << n, 1 << max(n - 1, 0), 1 << (level - 1)
    c = [0] * d
    if kind in ("dihedral-ii", "quaternion-"):
        c[half] = neg
    if kind.startswith("quaternion"):
        for j in range(1, half, 2):
            c[j] = neg
    return c


def _cyclic_coeffs(r: int, n: int, level: int, tau_half: bool) -> list[int]:
    c = [0] * (1 << n)
    if tau_half:
        for orb in orbits(r, n, "units"):
            c[orb.rep] = 1 << (level - 1)
    return c


def _product_b(r: int, n: int, level: int, kind: str) -> MonomialMatrix:
    d, half, neg = 1 << n, 1 << (n - 1), 1 << (level - 1)
    c = [0] * d
    if kind in ("dihedral-ii", "quaternion-"):
        c[half] = neg
    if kind.startswith("quaternion"):
        for pos, _ in orbit_pairing(r, n).pairs:
            if pos.rep % 2:
                for j in pos:
                    c[j] = neg
    b = MonomialMatrix.from_relation(-1, c, n, level)
    if kind == "dihedral*C":
        b = b * MonomialMatrix.cycle(n, level)
    return b


def _tau_half_shift(r: int, n: int, a: int) -> int:
    """``h`` with ``(A' C^h)^(2^a) = C^(2^(n-1))`` when ``A'^(2^a) = I``."""
    s = geom_sum(r, 1 << a, n)
    val = v2(s)
    return (1 << (n - 1 - val)) * pow(s >> val, -1, 1 << n) % (1 << n)


def build_presentation(h: SubgroupDescriptor, torsion: str, level: int | None = None) -> GroupSpec:
    """Canonical coefficients for one torsion choice."""
    n = h.n
    level = n if level is None else level
    if h.tag == "trivial":
        return GroupSpec(n, level, ())
    if h.tag == "minus_one":
        return GroupSpec.build(n, level, [("A", -1, _minus_one_coeffs(n, level, torsion))])
    if h.is_cyclic:
        r = h.canonical_generators[0]
        a = MonomialMatrix.from_relation(r, _cyclic_coeffs(r, n, level, torsion == "tau=half,corners"), n, level)
        if torsion == "tau=half":
            a = a * MonomialMatrix.cycle(n, level, _tau_half_shift(r, n, h.a))
        return GroupSpec(n, level, (("A", a),), (("A", r % (1 << n)),))
    r = h.canonical_generators[0]
    ta, tb = (part.split(":", 1)[1] for part in torsion.split(","))
    a = MonomialMatrix.from_relation(r, [0] * (1 << n), n, level)
    if ta == "tau=half":
        a = a * MonomialMatrix.cycle(n, level, _tau_half_shift(r, n, h.a))
    b = _product_b(r, n, level, tb)
    return GroupSpec(n, level, (("A", a), ("B", b)), (("A", r % (1 << n)), ("B", (1 << n) - 1)))


def _torsion_preserving_step(rel, n: int) -> int:
    """Smallest ``k`` with ``(A C^k)^(ord r) = A^(ord r)``."""
    if rel.order == 1:
        return 1 << n
    if rel.sign == -1 and rel.v == 0:
        return 1
    s = geom_sum(rel, rel.order)
    return 1 << (n - v2(s))


def _seeded(h: SubgroupDescriptor, index: int, seed: int) -> tuple[str, GroupSpec]:
    n = h.n
    level = n
    mod = 1 << level
    rng = random.Random(f"{seed}:{n}:{h.tag}:{h.a}:{index}")
    torsion = rng.choice(torsion_choices(h))
    spec = build_presentation(h, torsion, level)
    gens = dict(spec.generators)
    if h.is_cyclic and h.tag != "trivial" and rng.random() < 0.5:
        a = gens["A"]
        rel = unit_decompose(a.perm[1], n)
        coeffs = list(a.coeffs)
        for orb in orbits(rel.value, n, "evens"):
            # omega^(ord r / |orbit|) must stay 1 on even orbits
            allowed = (rel.order // len(orb)).bit_length() - 1
            if allowed and rng.random() < 0.5:
                coeffs[orb.rep] = (coeffs[orb.rep] + rng.randrange(1 << allowed) * (mod >> allowed)) % mod
        gens["A"] = MonomialMatrix(n, level, a.perm, coeffs)
    for name, g in gens.items():
        rel = unit_decompose(g.perm[1] if g.dim > 1 else 1, n)
        step = _torsion_preserving_step(rel, n)
        gens[name] = g * MonomialMatrix.cycle(n, level, step * rng.randrange(1 << n))
    t = [rng.randrange(mod) for _ in range(1 << n)]
    gens = {name: g.rescaled(t) for name, g in gens.items()}
    return torsion, GroupSpec(n, level, tuple(gens.items()), spec.declared)


def presentations(n: int, policy: TwistPolicy = TwistPolicy(),
                  subgroups: Sequence[SubgroupDescriptor] | None = None) -> Iterator[Presentation]:
    """Canonical rows for every ``H`` and torsion choice, then the seeded twists."""
    for h in (all_subgroups(n) if subgroups is None else subgroups):
        for torsion in torsion_choices(h):
            yield Presentation(h, torsion, "canonical", build_presentation(h, torsion))
        if policy.kind == "seeded" and h.tag != "trivial":
            for i in range(policy.count):
                torsion, spec = _seeded(h, i, policy.seed)
                yield Presentation(h, torsion, f"seed{policy.seed}#{i}", spec)


@dataclass
class EnumerationRow:
    subgroup: str
    torsion: str
    twist: str
    status: int
    permutation_like: bool | None
    certified: bool
    verified: bool
    witness: str = ""
    message: str = ""

    def tsv(self) -> str:
        yn = lambda b: "-" if b is None else ("yes" if b else "no")
        return "\t".join([self.subgroup, self.torsion, self.twist, yn(self.permutation_like),
                          yn(self.certified), yn(self.verified), self.witness or "-"])


TSV_HEADER = "H\ttorsion\ttwist\tpermutation-like\tcertified\tverified\twitness"


def run_row(p: Presentation, tier: str = "fast") -> EnumerationRow:
    try:
        out = check(p.spec, tier)
    except PermlikeError as exc:
        return EnumerationRow(str(p.subgroup), p.torsion, p.twist, EXIT_ERROR, None, False, False,
                              message=str(exc))
    a = out.analysis
    return EnumerationRow(
        str(p.subgroup), p.torsion, p.twist, out.status,
        None if a is None else a.permutation_like,
        out.certificate is not None,
        out.report is not None and out.report.passed,
        "" if a is None or a.witness is None else str(a.witness),
        out.message,
    )


def _run_row_args(args):
    return run_row(*args)


def run_enumeration(n: int, policy: TwistPolicy = TwistPolicy(), tier: str = "fast",
                    workers: int = 1) -> list[EnumerationRow]:
    """Every presentation for ``n``; output order is generation order for any ``workers``."""
    items = [(p, tier) for p in presentations(n, policy)]
    if workers <= 1:
        return [run_row(*it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_row_args, items, chunksize=8))
