from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from anharm.cli import (EXIT_CHECKS, EXIT_CONFIG, EXIT_NO_ROOT,
                        EXIT_NUMERICAL, EXIT_OK, _render, main)


@pytest.fixture
def config_file(tmp_path):
    def write(name="run.json", **overrides):
        payload = {
            "mass": 1,
            "omega": 1,
            "coefficients": ["1/100", "1/100"],
            "state": {"n": 0, "l": 0},
            "order": 5,
            "scalar": {"backend": "float", "digits": 30},
        }
        payload.update(overrides)
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)
    return write


def test_series_human_table(config_file, capsys):
    assert main(["series", config_file()]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0].split() == ["k", "correction", "partial_sum"]
    assert len(out) == 6
    assert out[1].split()[1] == "1.500000"


def test_series_order_flag_overrides_config(config_file, capsys):
    assert main(["series", config_file(), "--order", "2"]) == EXIT_OK
    assert len(capsys.readouterr().out.splitlines()) == 3


def test_series_exact_backend_full_precision(config_file, capsys):
    path = config_file(scalar={"backend": "exact-rational"}, order=2)
    assert main(["series", path, "--full-precision"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].split()[1:] == ["3/2", "3/2"]
    assert lines[2].split()[1] == "3/80"


def test_series_json_rows(config_file, capsys):
    assert main(["series", config_file(), "--format=json"]) == EXIT_OK
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [row["k"] for row in rows] == [1, 2, 3, 4, 5]
    assert list(rows[0]) == ["k", "correction", "partial_sum"]
    assert rows[0]["correction"] == 1.5


def test_series_csv_crlf(config_file, capsys):
    assert main(["series", config_file(), "--format=csv", "--order", "1"]) == EXIT_OK
    raw = capsys.readouterr().out
    assert raw == "k,correction,partial_sum\r\n1,1.500000,1.500000\r\n"


def test_series_warns_on_divergent_tail(config_file, capsys):
    path = config_file(coefficients=[1, 1], order=20,
                       scalar={"backend": "exact-rational"})
    assert main(["series", path]) == EXIT_OK
    assert "diverging" in capsys.readouterr().err


def test_series_quiet_when_tail_shrinks(config_file, capsys):
    assert main(["series", config_file()]) == EXIT_OK
    assert "diverging" not in capsys.readouterr().err


def test_series_rejects_zero_omega(config_file, capsys):
    path = config_file(omega=0, coefficients=[0, 1])
    assert main(["series", path]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "renorm" in err


def test_missing_config_file(capsys):
    assert main(["series", "/no/such/file.json"]) == EXIT_CONFIG
    assert "cannot read" in capsys.readouterr().err


def test_unknown_config_key(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"omega": 1, "wavelength": 2}')
    assert main(["series", str(path)]) == EXIT_CONFIG
    assert "wavelength" in capsys.readouterr().err


def test_renorm_human_summary_and_roots(config_file, capsys):
    assert main(["renorm", config_file(), "--order", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "optimized omega0 = 1.046681" in out
    assert "partial sum S_2 = 1.535791" in out
    assert "selected" in out


def test_renorm_json_selected_root(config_file, capsys):
    assert main(["renorm", config_file(), "--order", "2", "--format=json"]) == EXIT_OK
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    chosen = [row for row in rows if row["selected"]]
    assert len(chosen) == 1
    assert chosen[0]["partial_sum"] == pytest.approx(1.535791, abs=5e-6)
    assert chosen[0]["order"] == 2
    omegas = [row["omega0"] for row in rows]
    assert omegas == sorted(omegas)


def test_renorm_scheme_flag(config_file, capsys):
    assert main(["renorm", config_file(), "--order", "3",
                 "--scheme", "minimal-difference", "--format=json"]) == EXIT_OK
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    chosen = [row for row in rows if row["selected"]][0]
    assert chosen["correction"] == pytest.approx(0.0, abs=1e-9)


def test_renorm_no_root_in_narrow_interval(config_file, capsys):
    assert main(["renorm", config_file(), "--order", "4",
                 "--search", "9.5:10"]) == EXIT_NO_ROOT
    err = capsys.readouterr().err
    assert "[9.5, 10]" in err


def test_renorm_works_from_exact_backend_config(config_file, capsys):
    path = config_file(scalar={"backend": "exact-rational"})
    assert main(["renorm", path, "--order", "2"]) == EXIT_OK


def test_bad_interval_syntax_exits_two(config_file, capsys):
    with pytest.raises(SystemExit) as info:
        main(["renorm", config_file(), "--search", "oops"])
    assert info.value.code == 2


def test_numerov_json(config_file, capsys):
    path = config_file(coefficients=[], order=1)
    assert main(["numerov", path, "--format=json"]) == EXIT_OK
    row = json.loads(capsys.readouterr().out)
    assert row["n"] == 0 and row["l"] == 0
    assert row["energy"] == pytest.approx(1.5, abs=1e-6)


def test_numerov_bad_bracket_is_numerical_failure(config_file, capsys):
    path = config_file(coefficients=[])
    assert main(["numerov", path, "--bracket", "5:9"]) == EXIT_NUMERICAL
    assert "does not isolate" in capsys.readouterr().err


def test_numerov_stiff_grid_is_config_error(config_file, capsys):
    path = config_file(coefficients=[])
    assert main(["numerov", path, "--r-max", "40", "--step", "2.0"]) == EXIT_CONFIG
    assert "too coarse" in capsys.readouterr().err


def test_table1_max_order_validated(capsys):
    assert main(["table1", "--max-order", "1"]) == EXIT_CONFIG
    assert "--max-order" in capsys.readouterr().err


def test_verify_quick_json(capsys):
    assert main(["verify", "--quick", "--format=json"]) == EXIT_OK
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert all(list(row) == ["check", "passed", "detail"] for row in rows)
    assert all(row["passed"] for row in rows)


def test_render_csv_quotes_embedded_commas():
    stream = io.StringIO()

    class Args:
        format = "csv"
        full_precision = False

    _render([{"name": 'say "hi", twice', "value": 1}], ("name", "value"),
            Args(), stream)
    assert stream.getvalue() == ('name,value\r\n'
                                 '"say ""hi"", twice",1\r\n')


def test_console_script_entry_point(config_file):
    proc = subprocess.run(
        [sys.executable, "-m", "anharm", "series", config_file(), "--order", "1"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "1.500000" in proc.stdout
