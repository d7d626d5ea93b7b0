from __future__ import annotations

import json

import pytest

from ffzeta import pipeline as pl
from ffzeta.cli import main

# each single change to the Legendre local data, with the verdicts it breaks
DETECTED = {
    "fiber:0": {"c41", "t12_2"},
    "kodaira:0=I3": {"c41", "t12_2"},
    "conductor:0=2": {"c41", "t12_2", "fe_71"},
    "split:0": {"c41", "t12_2", "fe_71"},
    "disc:0=3": {"c41", "t12_2"},
    "kodaira:2=I3*": {"c41", "t12_2"},
    "conductor:2=1": {"c41", "t12_2", "fe_71"},
    "frobenius:0=1,0": {"c41", "t12_2"},
}


@pytest.fixture(scope="module")
def legendre(corpus):
    return corpus["legendre"]


def run(E, LN, *mutations, threads=1):
    opts = pl.VerifyOptions(threads=threads, mutations=tuple(pl.Mutation.parse(m) for m in mutations))
    return pl.verify_curve(E, LN, opts)


@pytest.mark.parametrize("name", ["constant_e0", "legendre", "e3", "additive_ivstar"])
def test_corpus_verdicts(name, reports):
    rep = reports[name]
    assert rep["all_pass"], rep["errors"]
    assert rep["verdicts"]["lemma_73"] == pl.SKIPPED
    assert set(rep["verdicts"]) == set(pl.VERDICT_KEYS)


@pytest.mark.parametrize("spec", sorted(DETECTED))
def test_mutation_is_detected(spec, legendre):
    rep = run(*legendre, spec)
    failed = {k for k, v in rep["verdicts"].items() if v == pl.FAIL}
    assert DETECTED[spec] <= failed
    assert not rep["all_pass"]
    assert rep["mutations"] == [spec]


def test_far_component_swap_is_invisible(legendre):
    """Swapping the two far components of the I2* fibre changes no global
    count that any identity sees; the local split rule guards it instead."""
    rep = run(*legendre, "frobenius:2=0,1,3,2,4,5,6")
    assert rep["all_pass"]


def test_mutation_parsing():
    m = pl.Mutation.parse("kodaira:1=IV")
    assert (m.kind, m.index, m.value) == ("kodaira", 1, "IV") and str(m) == "kodaira:1=IV"
    for bad in ("bogus:0", "kodaira:0", "disc:x=2"):
        with pytest.raises(pl.ConfigError):
            pl.Mutation.parse(bad)


def test_report_is_deterministic(legendre, reports):
    again = pl.dumps(run(*legendre, threads=2))
    assert again == pl.dumps(reports["legendre"])


def test_retag_is_self_consistent(legendre):
    from ffzeta.reduction import bad_places, expected_component_count

    d = pl.retag(bad_places(legendre[0])[0], "IV*")
    assert d.component_count_geom == expected_component_count("IV*") == 7
    assert d.disc_val == 8 and d.phi_order == 3


# -- command line -------------------------------------------------------------------


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_field_zeta(capsys):
    code, out, _ = cli(capsys, "field-zeta", "--q", "5", "--a", "4", "--b", "0")
    doc = json.loads(out)
    assert code == 0
    assert doc["zeta"] == {"num": [1, 2, 5], "den": [1, -6, 5]}
    code, out, _ = cli(capsys, "field-zeta", "--q", "5")
    assert code == 0 and json.loads(out)["zeta"] == {"num": [1], "den": [1, -6, 5]}


def test_cli_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"q": 5, "a": [1]}')
    assert cli(capsys, "verify", "--curve", str(bad))[0] == 2
    (tmp_path / "garbled.json").write_text("{not json")
    assert cli(capsys, "curve-analyze", "--curve", str(tmp_path / "garbled.json"))[0] == 2
    char3 = tmp_path / "char3.json"
    char3.write_text('{"q": 9, "a": [1], "b": [0, 1]}')
    code, _, err = cli(capsys, "verify", "--curve", str(char3))
    assert code == 3 and "characteristic" in err
    assert cli(capsys, "field-zeta", "--q", "5", "--a", "0", "--b", "0")[0] == 2
    assert cli(capsys, "verify", "--curve", "legendre.json", "--corrupt", "fiber:9")[0] == 2


def test_cli_verify_and_corrupt(capsys, tmp_path):
    out = tmp_path / "rep.json"
    code, _, _ = cli(capsys, "verify", "--curve", "legendre.json", "--corrupt", "fiber:0", "--out", str(out))
    rep = json.loads(out.read_text())
    assert code == 1
    assert rep["c41"] == pl.FAIL and rep["t12_2"] == pl.FAIL


def test_cli_other_commands(capsys, tmp_path):
    code, out, _ = cli(capsys, "curve-analyze", "--curve", "additive_ivstar.json")
    doc = json.loads(out)
    assert code == 0 and [f["kodaira"] for f in doc["bad_fibers"]] == ["IV*", "I2", "II"]
    code, out, _ = cli(capsys, "lfunction", "--curve", "e3.json", "--ln", "e3_ln.json")
    doc = json.loads(out)
    assert code == 0 and doc["analytic_rank"] == 3 and doc["certified_rank"] == 1
    code, out, _ = cli(capsys, "surface-zeta", "--curve", "legendre.json")
    assert code == 0 and json.loads(out)["betti"] == [1, 0, 10, 0, 1]
    code, out, _ = cli(capsys, "lemma73", "--random", "20", "--seed", "3")
    doc = json.loads(out)
    assert code == 0 and doc["general_identity_ok"] == 20
    inst = tmp_path / "inst.json"
    inst.write_text(json.dumps({"m": 1, "m_dual": 1, "pairing": [[1]], "F": [[-1]], "F_dual": [[-1]]}))
    code, out, _ = cli(capsys, "lemma73", "--instance", str(inst), "--details")
    doc = json.loads(out)
    assert code == 0 and doc["printed_identity_ok"] == 0 and doc["reports"][0]["P_prime_at_1"] == 2
