"""JSON group specs and certificates.

Spec file::

    {"n": 3, "level": 3,
     "generators": [{"name": "A", "r": 7, "coeffs": [0, 0, 0, 0, 0, 0, 0, 0]}]}

``coeffs[j]`` is the exponent ``c`` in ``A e_j = lambda_N^c e_{r j mod 2^n}``;
``C = diag(lambda_n^j)`` is implicit.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .engine import GroupSpec
from .errors import PermlikeError
from .synth import PermBasisCertificate

__all__ = ["SpecFormatError", "parse_spec", "load_spec", "dump_spec", "spec_to_dict",
           "load_certificate", "dump_certificate"]


class SpecFormatError(PermlikeError):
    """Malformed spec file; the message names the line or the field."""


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecFormatError(f"{where}: expected an integer, got {value!r}")
    return value


def parse_spec(text: str) -> GroupSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise SpecFormatError("top level: expected a JSON object")
    for key in ("n", "level", "generators"):
        if key not in data:
            raise SpecFormatError(f"missing field {key!r}")
    n = _int(data["n"], "n")
    level = _int(data["level"], "level")
    if n < 0:
        raise SpecFormatError("n: must be non-negative")
    if level < n:
        raise SpecFormatError(f"level: must be >= n = {n}")
    gens = data["generators"]
    if not isinstance(gens, list):
        raise SpecFormatError("generators: expected a list")
    d = 1 << n
    triples = []
    for i, g in enumerate(gens):
        where = f"generators[{i}]"
        if not isinstance(g, dict):
            raise SpecFormatError(f"{where}: expected an object")
        for key in ("name", "r", "coeffs"):
            if key not in g:
                raise SpecFormatError(f"{where}: missing field {key!r}")
        name = g["name"]
        if not isinstance(name, str) or not name or name in ("C", "I") or not name.isidentifier():
            raise SpecFormatError(f"{where}.name: expected an identifier other than 'C' and 'I'")
        r = _int(g["r"], f"{where}.r")
        coeffs = g["coeffs"]
        if not isinstance(coeffs, list) or len(coeffs) != d:
            raise SpecFormatError(f"{where}.coeffs: expected a list of {d} integers")
        coeffs = [_int(c, f"{where}.coeffs[{j}]") for j, c in enumerate(coeffs)]
        triples.append((name, r, coeffs))
    names = [t[0] for t in triples]
    if len(set(names)) != len(names):
        raise SpecFormatError("generators: duplicate names")
    return GroupSpec.build(n, level, triples)


def load_spec(path: str | Path) -> GroupSpec:
    return parse_spec(Path(path).read_text(encoding="utf-8"))


def spec_to_dict(spec: GroupSpec) -> dict:
    return {
        "n": spec.n,
        "level": spec.level,
        "generators": [
            {"name": name, "r": (m.perm[1] if m.dim > 1 else 1), "coeffs": list(m.coeffs)}
            for name, m in spec.generators
        ],
    }


def dump_spec(spec: GroupSpec, path: str | Path | None = None) -> str:
    text = json.dumps(spec_to_dict(spec), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def load_certificate(path: str | Path) -> PermBasisCertificate:
    return PermBasisCertificate.from_json(Path(path).read_text(encoding="utf-8"))


def dump_certificate(cert: PermBasisCertificate, path: str | Path | None = None) -> str:
    text = cert.to_json()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
