import io
import json
import subprocess
import sys

import pytest

from padestieltjes.cli import main
from padestieltjes.report import CoefficientCache, cache_file


@pytest.fixture(scope="module")
def full_cache(tmp_path_factory, cubic, quartic):
    path = tmp_path_factory.mktemp("cache")
    for series in (cubic, quartic):
        CoefficientCache.from_series(series).write(cache_file(path, series.hamiltonian))
    return path


@pytest.fixture(scope="module")
def short_cache(tmp_path_factory, cubic, quartic):
    path = tmp_path_factory.mktemp("short")
    for series in (cubic, quartic):
        CoefficientCache.from_series(series.truncated(30)).write(cache_file(path, series.hamiltonian))
    return path


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def test_generate_prints_first_coefficients(tmp_path):
    code, text = run("generate", "--hamiltonian", "pt-cubic", "--order", 10, "--cache", tmp_path, "--format", "csv")
    assert code == 0
    assert text.splitlines()[1:4] == ["1,11", "2,-930", "3,158836"]
    assert (tmp_path / "pt-cubic.txt").exists()


def test_generate_json_keeps_strings(tmp_path):
    code, text = run("--cache", tmp_path, "generate", "--order", 4, "--format", "json")
    assert code == 0
    assert json.loads(text)["rows"][1]["c_n"] == "-930"


def test_regenerate_shorter_order_verifies(full_cache, capsys):
    before = cache_file(full_cache, "pt-cubic").read_bytes()
    code, _ = run("generate", "--order", 10, "--cache", full_cache, "--show", 0)
    assert code == 0
    assert "verified" in capsys.readouterr().err
    assert cache_file(full_cache, "pt-cubic").read_bytes() == before


def test_generate_corrupted_cache(tmp_path):
    run("generate", "--order", 5, "--cache", tmp_path)
    path = tmp_path / "pt-cubic.txt"
    path.write_text(path.read_text().replace("-930", "-931"))
    code, _ = run("generate", "--order", 5, "--cache", tmp_path)
    assert code == 1


def test_sum_printed_rows(full_cache):
    code, text = run("sum", "--lambda", "1/7", "--rows", "0,192", "--cache", full_cache, "--format", "csv")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "n,s_n,sigma_n,P(lambda^2),P(beta)"
    assert lines[1] == "0,0.110e+002,0.750e+000,11.0000000000000,0.750000000000000"
    assert lines[2].endswith(",5.52416721306031,0.419249416033487")


def test_sum_beta_equivalent(full_cache):
    a = run("sum", "--lambda", "1/7", "--rows", "3", "--cache", full_cache, "--precision", 100)
    b = run("sum", "--beta", "40/49", "--rows", "3", "--cache", full_cache, "--precision", 100)
    assert a == b and a[0] == 0


def test_sum_zero_coupling(full_cache):
    code, text = run("sum", "--lambda", "0", "--rows", "0-4", "--cache", full_cache, "--format", "json", "--precision", 60)
    rows = json.loads(text)["rows"]
    assert code == 0 and {r["P(lambda^2)"] for r in rows} == {"11.0000000000000"}


def test_sum_text_table(full_cache):
    code, text = run("sum", "--rows", "0", "--cache", full_cache, "--precision", 60)
    assert code == 0 and "0.110·10^002" in text


@pytest.mark.parametrize(
    "argv",
    [
        ("sum", "--rows", "193"),
        ("sum", "--beta", "2"),
        ("predict", "--k", "97"),
        ("predict", "--sweep", "--rows", "192"),
    ],
)
def test_insufficient_data(full_cache, argv):
    code, _ = run(*argv, "--cache", full_cache)
    assert code == 2


def test_missing_cache_hint(tmp_path, capsys):
    code, _ = run("diagnose", "--cache", tmp_path / "empty")
    assert code == 2
    assert "padestieltjes generate" in capsys.readouterr().err


def test_degenerate_input_exit_code(tmp_path):
    # a flat series makes the first-prediction denominator vanish
    from gmpy2 import mpq

    from padestieltjes import Hamiltonian

    CoefficientCache(Hamiltonian.PT_CUBIC, (mpq(1), mpq(0), mpq(1), mpq(0), mpq(1))).write(cache_file(tmp_path, "pt-cubic"))
    code, _ = run("predict", "--k", 1, "--terms", 1, "--cache", tmp_path)
    assert code == 3


def test_predict_single(full_cache):
    code, text = run("predict", "--hamiltonian", "quartic", "--k", 3, "--terms", 2, "--cache", full_cache, "--format", "json", "--precision", 100)
    assert code == 0
    rows = json.loads(text)["rows"]
    assert [r["index"] for r in rows] == ["8", "9"]
    assert all(r["relative_error"].startswith("-") for r in rows)


def test_predict_sweep(full_cache):
    code, text = run("predict", "--sweep", "--rows", "2-4", "--cache", full_cache, "--format", "csv", "--precision", 100)
    assert code == 0
    assert text.splitlines()[0] == "n,R_n,R_n(quartic)"
    assert text.splitlines()[1].startswith("2,-0.")


def test_diagnose_short_run(short_cache, tmp_path):
    evidence = tmp_path / "evidence.json"
    code, text = run(
        "diagnose", "--couplings", "1/7", "--hankel-max", 5, "--pade-max", 8, "--precision", 100,
        "--cache", short_cache, "--evidence", evidence, "--format", "csv",
    )
    assert code == 0
    rows = text.splitlines()[1:]
    assert len(rows) == 2 and all("FAIL" not in r for r in rows)
    dump = json.loads(evidence.read_text())
    assert dump[0]["nesting"]["nesting_violations"] == []
    assert set(dump[0]["hankel_signs"].values()) == {1}


def test_module_entry_point():
    result = subprocess.run([sys.executable, "-m", "padestieltjes", "--help"], capture_output=True, text=True)
    assert result.returncode == 0 and "diagnose" in result.stdout
