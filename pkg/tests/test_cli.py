import csv
import io
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from riemannqc.cli import dispatch, fmt, write_csv
from riemannqc.unitary import theta_exact
from riemannqc.zeros import write_zeros_file


def run(argv, capsys):
    code = dispatch(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.reader(io.StringIO(text)))


class TestFormatting:
    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_round_trip_17_digits(self, x):
        assert float(fmt(x)) == x

    def test_types(self):
        assert fmt(3) == "3"
        assert fmt(np.int64(7)) == "7"
        assert fmt(True) == "1"
        assert fmt(0.1) == "0.10000000000000001"
        assert fmt("density") == "density"

    def test_empty_rows_header_only(self, tmp_path):
        p = tmp_path / "e.csv"
        write_csv([], ["a", "b"], p)
        assert p.read_bytes() == b"a,b\n"

    def test_arity(self, tmp_path):
        with pytest.raises(ValueError):
            write_csv([(1, 2, 3)], ["a", "b"], tmp_path / "x.csv")


class TestExitCodes:
    def test_unknown_command(self, capsys):
        code, _, err = run(["frobnicate"], capsys)
        assert code == 1 and "usage" in err

    def test_unknown_flag(self, capsys):
        assert run(["spectrum", "-k", "4", "--bogus"], capsys)[0] == 1

    def test_no_command(self, capsys):
        assert run([], capsys)[0] == 1

    def test_not_power_of_two(self, capsys):
        code, _, err = run(["state", "-k", "6"], capsys)
        assert code == 1 and "power of two" in err

    def test_missing_size(self, capsys):
        assert run(["state"], capsys)[0] == 1
        assert run(["circuit"], capsys)[0] == 1

    def test_missing_file(self, capsys, tmp_path):
        assert run(["spectrum", "-k", "4", "--zeros-file", str(tmp_path / "none.txt")], capsys)[0] == 1

    def test_bad_file(self, capsys, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("21.0\n14.1\n")
        code, _, err = run(["spectrum", "-k", "2", "--zeros-file", str(p)], capsys)
        assert code == 1 and ":2:" in err

    def test_range_flags_pair(self, capsys):
        assert run(["zeros", "--t-lo", "10"], capsys)[0] == 1

    def test_entanglement_range(self, capsys):
        assert run(["entanglement", "--n-min", "1"], capsys)[0] == 1

    def test_verification_failure(self, capsys):
        code, out, _ = run(["circuit", "--qubits", "3", "--verify", "--tolerance", "-1"], capsys)
        assert code == 2 and out.startswith("max_deviation")

    def test_spectrum_tolerance_failure(self, capsys):
        assert run(["spectrum", "-k", "4", "--tolerance", "-1"], capsys)[0] == 2


class TestCommands:
    def test_zeros_count(self, capsys, zeros100):
        code, out, _ = run(["zeros", "--count", "5"], capsys)
        assert code == 0
        assert [float(x) for x in out.split()] == zeros100.b[:5].tolist()

    def test_zeros_range(self, capsys):
        code, out, _ = run(["zeros", "--t-lo", "10", "--t-hi", "30"], capsys)
        assert code == 0 and len(out.split()) == 3

    def test_zeros_beyond_table(self, capsys, zeros16k):
        code, out, _ = run(["zeros", "--count", "3", "--zero-offset", "200"], capsys)
        assert code == 0
        assert [float(x) for x in out.split()] == zeros16k.b[199:202].tolist()

    def test_spectrum(self, capsys, zeros100):
        code, out, _ = run(["spectrum", "-k", "16"], capsys)
        rows = rows_of(out)
        assert code == 0
        assert rows[0] == ["index", "b", "theta_exact", "theta_eigen", "abs_error"]
        assert len(rows) == 17
        assert max(float(r[4]) for r in rows[1:]) <= 1e-10
        assert float(rows[1][2]) == theta_exact(zeros100.b[0])

    def test_spectrum_accepts_any_k(self, capsys):
        assert run(["spectrum", "-k", "7"], capsys)[0] == 0

    def test_spacing(self, capsys, tmp_path):
        p = tmp_path / "spacing.csv"
        code, _, _ = run(["spacing", "--out", str(p)], capsys)
        rows = rows_of(p.read_text())
        assert code == 0
        assert rows[0] == ["theta", "delta_exact", "delta_analytic", "variant"]
        assert len(rows) == 100
        assert {r[3] for r in rows[1:]} == {"density"}

    def test_spacing_literal(self, capsys):
        code, out, _ = run(["spacing", "-k", "20", "--spacing-variant", "literal"], capsys)
        rows = rows_of(out)
        assert code == 0 and len(rows) == 20 and rows[1][3] == "literal"

    def test_spacing_file_via_env(self, capsys, tmp_path, monkeypatch, zeros100):
        p = tmp_path / "odlyzko.txt"
        write_zeros_file(zeros100.take(40), p)
        monkeypatch.setenv("ZETA_ZEROS_FILE", str(p))
        code, out, _ = run(["spacing"], capsys)
        assert code == 0 and len(rows_of(out)) == 40

    def test_state(self, capsys):
        code, out, err = run(["state", "-n", "3"], capsys)
        rows = rows_of(out)
        assert code == 0
        assert rows[0] == ["index", "bits", "re", "im", "prob"]
        assert [r[1] for r in rows[1:3]] == ["000", "001"]
        assert math.isclose(sum(float(r[4]) for r in rows[1:]), 1, abs_tol=1e-12)
        assert "deviation" in err

    def test_entanglement(self, capsys):
        code, out, _ = run(["entanglement", "--n-min", "2", "--n-max", "5"], capsys)
        rows = rows_of(out)
        assert code == 0
        assert rows[0] == ["n_qubits", "E1_vn", "E1_lin", "E2_vn", "E2_lin"]
        assert [r[0] for r in rows[1:]] == ["2", "3", "4", "5"]
        assert float(rows[3][1]) == pytest.approx(0.27249549205721996, abs=1e-12)

    def test_entanglement_measure(self, capsys):
        code, out, _ = run(["entanglement", "--n-max", "3", "--measure", "linear"], capsys)
        assert code == 0 and rows_of(out)[0] == ["n_qubits", "E1_lin", "E2_lin"]

    def test_fidelity(self, capsys):
        code, out, _ = run(["fidelity", "--n-min", "2", "--n-max", "8"], capsys)
        rows = rows_of(out)
        assert code == 0
        assert rows[0] == ["n_qubits", "fidelity", "closed_form"]
        assert len(rows) == 8
        f = [float(r[1]) for r in rows[1:]]
        assert all(a < b for a, b in zip(f, f[1:]))

    @pytest.mark.slow
    def test_fidelity_default_range(self, capsys, zeros64k):
        code, out, _ = run(["fidelity"], capsys)
        rows = rows_of(out)
        assert code == 0 and len(rows) == 16
        assert float(rows[-1][1]) > 0.999

    def test_circuit_verify(self, capsys):
        code, out, _ = run(["circuit", "--qubits", "4", "--verify"], capsys)
        assert code == 0
        assert out.startswith("max_deviation") and "mode dense" in out

    def test_circuit_text(self, capsys, tmp_path):
        code, out, _ = run(["circuit", "-n", "2"], capsys)
        assert code == 0 and out.splitlines()[:2] == ["qubits 2", "MCH 1 1"]
        p = tmp_path / "c.txt"
        assert run(["circuit", "-n", "2", "--expand", "--out", str(p)], capsys)[0] == 0
        assert p.read_text().count("MCP") == 4

    def test_estimate(self, capsys):
        code, out, _ = run(["estimate", "-k", "4"], capsys)
        rows = rows_of(out)
        assert code == 0
        assert rows[0] == ["quantity", "t_bits", "estimate", "truth", "error", "top_probability"]
        assert [r[0] for r in rows[1:]] == ["theta_sum", "spacing_sum"]
        assert all(float(r[4]) <= 2 * math.pi / 4096 for r in rows[1:])

    def test_zero_offset(self, capsys, zeros100):
        code, out, _ = run(["spectrum", "-k", "4", "--zero-offset", "11"], capsys)
        assert code == 0
        assert [int(r[0]) for r in rows_of(out)[1:]] == [11, 12, 13, 14]
        assert float(rows_of(out)[1][1]) == zeros100.b[10]


class TestReproducibility:
    @pytest.mark.parametrize(
        "argv",
        [
            ["spacing"],
            ["entanglement", "--n-max", "6"],
            ["fidelity", "--n-max", "6"],
            ["state", "-n", "4"],
            ["estimate", "-n", "3"],
        ],
    )
    def test_byte_identical(self, tmp_path, capsys, argv):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert dispatch(argv + ["--out", str(a)]) == 0
        assert dispatch(argv + ["--out", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()
        assert b"\r" not in a.read_bytes()

    def test_csv_values_parse_back(self, tmp_path, zeros100):
        p = tmp_path / "s.csv"
        dispatch(["spectrum", "-k", "8", "--out", str(p)])
        rows = rows_of(p.read_text())[1:]
        assert [float(r[1]) for r in rows] == zeros100.b[:8].tolist()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "riemannqc", "estimate", "-k", "2"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("quantity,")
