import json

import pytest

from permlike.cli import main
from permlike.engine import GroupSpec
from permlike.fileformat import (
    SpecFormatError,
    dump_spec,
    load_certificate,
    parse_spec,
)
from permlike.oracle import verify_certificate
from permlike.pipeline import TwistPolicy, build_presentation, run_enumeration
from permlike.residue import SubgroupDescriptor


def write_spec(path, n, gens, level=None):
    data = {"n": n, "level": n if level is None else level,
            "generators": [{"name": g, "r": r, "coeffs": c} for g, r, c in gens]}
    path.write_text(json.dumps(data))
    return str(path)


def test_check_dihedral_certifies(tmp_path, capsys):
    spec = write_spec(tmp_path / "d4.json", 4, [("A", -1, [0] * 16)])
    out = tmp_path / "d4.cert.json"
    assert main(["check", spec, "--tier", "both"]) == 0
    assert out.exists()
    cert = load_certificate(out)
    assert cert.fourier
    assert verify_certificate(GroupSpec.build(4, 4, [("A", -1, [0] * 16)]), cert, "both").passed
    text = capsys.readouterr().out
    assert "certified" in text and "64 element checks" in text


def test_check_quaternion_reports_witness(tmp_path, capsys):
    q = build_presentation(SubgroupDescriptor("minus_one", 4), "quaternion-")
    path = tmp_path / "q4.json"
    dump_spec(q, path)
    assert main(["check", str(path)]) == 2
    text = capsys.readouterr().out
    assert "witness: A*C" in text
    assert "char factors: (x-1)^2(x^2-1)^3(x^2+1)^4" in text
    assert not (tmp_path / "q4.cert.json").exists()


def test_check_non_normalizing_is_outside_scope(tmp_path, capsys):
    spec = write_spec(tmp_path / "bad.json", 3, [("A", 2, [0] * 8)])
    assert main(["check", spec]) == 3


def test_check_not_self_centralized(tmp_path):
    c = [0] * 8
    c[1] = 4
    spec = write_spec(tmp_path / "diag.json", 3, [("A", 1, c)])
    assert main(["check", spec]) == 3


@pytest.mark.parametrize("text, fragment", [
    ('{"n": 3, "level": 3, "generators": [', "line 1"),
    ('{"n": 3, "generators": []}', "'level'"),
    ('{"n": 3, "level": 3, "generators": [{"name": "A", "r": 3, "coeffs": [0, 0]}]}', "generators[0].coeffs"),
    ('{"n": 3, "level": 3, "generators": [{"name": "A", "r": "x", "coeffs": []}]}', "generators[0].r"),
    ('{"n": 3, "level": 3, "generators": [{"name": "C", "r": 3, "coeffs": [0,0,0,0,0,0,0,0]}]}',
     "generators[0].name"),
    ('{"n": 3, "level": 2, "generators": []}', "level"),
])
def test_malformed_specs(text, fragment):
    with pytest.raises(SpecFormatError) as info:
        parse_spec(text)
    assert fragment in str(info.value)


def test_malformed_file_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"n": 3,\n "level": }')
    assert main(["check", str(path)]) == 1
    assert "line 2" in capsys.readouterr().err


def test_spec_roundtrip():
    spec = build_presentation(SubgroupDescriptor("product", 4, 1), "A:tau=half,B:dihedral*C")
    again = parse_spec(dump_spec(spec))
    assert again.generators == spec.generators


def test_twist_policy_parse():
    assert str(TwistPolicy.parse("canonical")) == "canonical"
    p = TwistPolicy.parse("seeded:7:3")
    assert (p.kind, p.seed, p.count) == ("seeded", 7, 3)
    with pytest.raises(ValueError):
        TwistPolicy.parse("random")


def test_enumerate_n3():
    rows = run_enumeration(3)
    for row in rows:
        assert row.status != 1, row.message
        if row.torsion.startswith("quaternion") and row.subgroup == "<-1>":
            assert row.permutation_like is False
        if row.permutation_like:
            assert row.certified and row.verified


def test_enumerate_n4_cyclic_rows_certify():
    rows = run_enumeration(4)
    cyclic = [r for r in rows if "x" not in r.subgroup and r.torsion in ("tau=0", "tau=half")]
    assert len(cyclic) == 8
    assert all(r.certified and r.verified for r in cyclic)


def test_enumerate_n5_product_rows():
    rows = [r for r in run_enumeration(5) if "x" in r.subgroup]
    for r in rows:
        expect = r.torsion.endswith("B:dihedral") or r.torsion.endswith("B:dihedral*C")
        assert r.permutation_like == expect
        assert (r.certified and r.verified) == expect


def test_enumerate_cli_seeded(tmp_path, capsys):
    out = tmp_path / "n3.tsv"
    assert main(["enumerate", "--n", "3", "--twists", "seeded:7:2", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("H\ttorsion")
    assert any("seed7#1" in line for line in lines)
    assert main(["enumerate", "--n", "3", "--twists", "bogus"]) == 1


def test_enumerate_workers_same_order():
    serial = [r.tsv() for r in run_enumeration(3, TwistPolicy.parse("seeded:1:2"))]
    parallel = [r.tsv() for r in run_enumeration(3, TwistPolicy.parse("seeded:1:2"), workers=2)]
    assert serial == parallel


def test_selftest(capsys):
    assert main(["selftest"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[-1] == "all suites passed"
    assert all(line.startswith("PASS") for line in lines[:-1])
