import csv
import math
import subprocess
import sys

import numpy as np
import pytest

from primezeros.cli import run
from primezeros.tables import ZeroTable, ZeroTableFormatError, read_zero_table, write_zero_table
from primezeros.zeta_oracle import find_zeros


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def data_lines(path):
    return [ln for ln in path.read_text().splitlines() if ln.strip() and not ln.startswith("#")]


class TestZeroTableFile:
    def test_two_values(self, tmp_path):
        f = tmp_path / "z.txt"
        f.write_text("14.134725\n21.022040\n")
        assert len(read_zero_table(f)) == 2

    def test_comments_and_blanks(self, tmp_path):
        f = tmp_path / "z.txt"
        f.write_text("# comment\n\n  14.134725\n   # indented comment\n21.022040\n\n")
        assert read_zero_table(f).gammas.tolist() == [14.134725, 21.02204]

    def test_monotonicity_error(self, tmp_path):
        f = tmp_path / "z.txt"
        f.write_text("21.0\n14.1\n")
        with pytest.raises(ZeroTableFormatError) as err:
            read_zero_table(f)
        assert err.value.line == 2
        assert "line 2" in str(err.value)

    @pytest.mark.parametrize("text,line", [("14.1\nabc\n", 2), ("# x\n-3\n", 2), ("nan\n", 1), ("14.1\n14.1\n", 2)])
    def test_bad_lines(self, tmp_path, text, line):
        f = tmp_path / "z.txt"
        f.write_text(text)
        with pytest.raises(ZeroTableFormatError) as err:
            read_zero_table(f)
        assert err.value.line == line

    def test_round_trip(self, tmp_path, zeros100):
        f = tmp_path / "z.txt"
        write_zero_table(zeros100, f, header="first hundred")
        back = read_zero_table(f)
        assert np.max(np.abs(back.gammas - zeros100.gammas)) <= 1e-8
        assert back.starts_at_first and back.complete_from == 0.0

    def test_constructor_validation(self):
        with pytest.raises(ValueError):
            ZeroTable(np.array([3.0, 2.0]))


class TestCommands:
    def test_oracle_zeros(self, tmp_path, capsys):
        out = tmp_path / "zeros.csv"
        assert run(["oracle-zeros", "--t-max", "30", "--out", str(out)]) == 0
        lines = data_lines(out)
        assert len(lines) == 3
        assert float(lines[0]) == pytest.approx(14.134725141734693, abs=1e-8)
        assert "3 zeros" in capsys.readouterr().out

    def test_oracle_round_trip(self, tmp_path):
        out = tmp_path / "zeros.txt"
        assert run(["oracle-zeros", "--t-max", "100", "--out", str(out)]) == 0
        assert np.max(np.abs(read_zero_table(out).gammas - find_zeros(100.0).gammas)) <= 1e-8

    def test_profile(self, tmp_path):
        out = tmp_path / "prof.csv"
        argv = ["profile", "--lo", "13", "--hi", "16", "--step", "0.02", "--alpha", "1",
                "--eps", "0.05", "--out", str(out)]
        assert run(argv) == 0
        r = rows(out)
        assert r[0] == ["xi", "S", "k", "terms_used", "error_bound"]
        assert len(r) == 152
        assert b"\r" not in out.read_bytes()
        assert float(r[1][0]) == 13.0 and int(r[1][2]) == 169

    def test_profile_deterministic_across_threads(self, tmp_path):
        a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
        base = ["profile", "--lo", "20", "--hi", "22", "--step", "0.05"]
        assert run(base + ["--out", str(a)]) == 0
        assert run(base + ["--out", str(b)]) == 0
        assert run(base + ["--threads", "4", "--out", str(c)]) == 0
        assert a.read_bytes() == b.read_bytes() == c.read_bytes()

    def test_twelve_significant_digits(self, tmp_path):
        out = tmp_path / "prof.csv"
        assert run(["profile", "--lo", "13", "--hi", "13.2", "--step", "0.1", "--out", str(out)]) == 0
        s = rows(out)[1][1]
        assert len(s.lstrip("-").replace(".", "").lstrip("0").split("e")[0]) <= 12

    def test_identity_check(self, tmp_path, capsys):
        zeros = tmp_path / "zeros.csv"
        assert run(["oracle-zeros", "--t-max", "240", "--out", str(zeros)]) == 0
        capsys.readouterr()
        code = run(["identity-check", "--k", "4", "--xi", "2", "--eps", "1e-6", "--zeros", str(zeros)])
        assert code == 0
        out = capsys.readouterr().out
        assert abs(float(out.strip().split()[-1])) <= 1e-4

    def test_identity_check_tolerance_failure(self, capsys):
        code = run(["identity-check", "--k", "4", "--xi", "2", "--eps", "1e-2", "--t-max", "60",
                    "--tol", "1e-30"])
        assert code == 1

    def test_detect(self, tmp_path, capsys):
        out = tmp_path / "cands.csv"
        assert run(["detect", "--lo", "13", "--hi", "16", "--out", str(out)]) == 0
        r = rows(out)
        assert r[0] == ["location", "mass", "window_lo", "window_hi"]
        assert len(r) == 2 and abs(float(r[1][0]) - 14.134725) <= 0.1

    def test_eval_and_compare(self, tmp_path, capsys):
        assert run(["eval", "--xi", "14.134725", "--k", "200"]) == 0
        assert "S estimate" in capsys.readouterr().out
        out = tmp_path / "cmp.csv"
        assert run(["compare", "--xi", "14.134725", "18", "--eps", "0.05", "--out", str(out)]) == 0
        r = rows(out)
        assert len(r) == 3 and all(abs(float(x[4])) <= 0.08 for x in r[1:])

    def test_sieve(self, tmp_path):
        out = tmp_path / "lam.csv"
        assert run(["sieve", "--start", "1", "--length", "4", "--out", str(out)]) == 0
        r = rows(out)
        assert [float(x[1]) for x in r[1:]] == pytest.approx([0, math.log(2), math.log(3), math.log(2)], rel=1e-11)


class TestConfig:
    def test_file_values_used(self, tmp_path):
        cfg = tmp_path / "run.toml"
        out = tmp_path / "prof.csv"
        cfg.write_text(f'[profile]\nlo = 13.0\nhi = 13.5\nstep = 0.1\nout = "{out.as_posix()}"\n')
        assert run(["profile", "--config", str(cfg)]) == 0
        assert len(rows(out)) == 7

    def test_flags_override(self, tmp_path):
        cfg = tmp_path / "run.toml"
        out = tmp_path / "prof.csv"
        cfg.write_text(f'[profile]\nlo = 13.0\nhi = 13.5\nstep = 0.1\nout = "{out.as_posix()}"\n')
        assert run(["profile", "--config", str(cfg), "--hi", "13.2"]) == 0
        assert len(rows(out)) == 4

    def test_unknown_key(self, tmp_path, capsys):
        cfg = tmp_path / "run.toml"
        cfg.write_text("[profile]\nlo = 13.0\nhi = 14.0\nbogus = 1\n")
        assert run(["profile", "--config", str(cfg)]) == 2
        assert "bogus" in capsys.readouterr().err

    def test_bad_toml(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text("[profile\n")
        assert run(["profile", "--config", str(cfg)]) == 2

    def test_missing_config(self, tmp_path):
        assert run(["profile", "--config", str(tmp_path / "none.toml")]) == 2


class TestExitCodes:
    def test_unknown_subcommand(self):
        assert run(["frobnicate"]) == 2

    def test_unknown_flag(self):
        assert run(["eval", "--xi", "3", "--nope"]) == 2

    @pytest.mark.parametrize("argv,field", [
        (["eval", "--xi", "-1"], "xi"),
        (["eval", "--xi", "14", "--eps", "0"], "eps"),
        (["eval"], "xi"),
        (["profile", "--lo", "13"], "hi"),
        (["profile", "--lo", "13", "--hi", "14", "--step", "0.5"], "step"),
        (["oracle-zeros", "--t-max", "5000"], "t_max"),
        (["eval", "--xi", "3", "--threads", "0"], "threads"),
    ])
    def test_validation(self, argv, field, capsys):
        assert run(argv) == 2
        err = capsys.readouterr().err.replace("-", "_")
        assert field in err

    def test_unreadable_zero_file(self, tmp_path, capsys):
        assert run(["identity-check", "--k", "4", "--xi", "2", "--zeros", str(tmp_path / "missing")]) == 2
        assert "zeros" in capsys.readouterr().err

    def test_malformed_zero_file(self, tmp_path, capsys):
        f = tmp_path / "z.txt"
        f.write_text("14.1\nfoo\n")
        assert run(["identity-check", "--k", "4", "--xi", "2", "--zeros", str(f)]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_infeasible_truncation(self, capsys):
        assert run(["eval", "--xi", "1", "--k", "50", "--eps", "1e-3"]) == 2
        assert "eps" in capsys.readouterr().err

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "primezeros", "--version"],
                              capture_output=True, text=True)
        assert proc.returncode == 0 and "0.1.0" in proc.stdout
