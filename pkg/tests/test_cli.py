import json
import os
import subprocess
import sys

import pytest

from fqk import cli


def run_main(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run_main(capsys, *argv, "--format", "json")
    return code, json.loads(out)


class TestCommands:
    def test_classify_180(self, capsys):
        code, rep = run_json(capsys, "classify", "180")
        assert code == 0 and rep["ok"]
        assert rep["schema"] == "fqk/1" and rep["command"] == "classify"
        groups = rep["payload"]["groups"]
        assert [g["group"] for g in groups] == ["Z_180", "Z_2 x Z_90", "Z_3 x Z_60", "Z_6 x Z_30"]
        assert groups[1]["elementary_divisors"] == [2, 2, 9, 5]

    @pytest.mark.parametrize("N, count", [(7, 1), (64, 11), (1, 1)])
    def test_classify_counts(self, capsys, N, count):
        code, rep = run_json(capsys, "classify", str(N))
        assert code == 0 and rep["payload"]["count"] == count == len(rep["payload"]["groups"])

    def test_pauli_check(self, capsys):
        code, rep = run_json(capsys, "pauli", "2", "--check")
        assert code == 0
        assert rep["payload"]["order"] == 8
        assert rep["payload"]["center"] == ["w^0 Q^0 P^0", "w^1 Q^0 P^0"]
        assert all(c["passed"] for c in rep["checks"])

    def test_pauli_exponent_notation(self, capsys):
        code, rep = run_json(capsys, "pauli", "3")
        assert rep["payload"]["Q"] == {"root_level": 3, "entries": ["(0,0)=w^0", "(1,1)=w^1", "(2,2)=w^2"]}
        assert rep["payload"]["P"]["entries"] == ["(0,1)=w^0", "(1,2)=w^0", "(2,0)=w^0"]
        assert rep["checks"] == [] and rep["ok"]

    def test_pauli_five_check(self, capsys):
        code, rep = run_json(capsys, "pauli", "5", "--check")
        assert code == 0 and rep["payload"]["order"] == 125

    @pytest.mark.parametrize("N", [3, 4, 5])
    def test_weyl(self, capsys, N):
        code, rep = run_json(capsys, "weyl", str(N))
        assert code == 0
        assert rep["payload"]["basis_size"] == N * N
        assert len(rep["checks"]) == (2 if N % 2 else 1)

    def test_equiv_six(self, capsys):
        code, rep = run_json(capsys, "equiv", "6")
        assert code == 0
        p = rep["payload"]
        assert p["moduli"] == [2, 3] and p["permutation"] == "(1 4)"
        assert p["residues"][5] == "5 -> (1, 2)"
        assert len(rep["checks"]) == 4

    def test_mad_six(self, capsys):
        code, rep = run_json(capsys, "mad", "6")
        assert code == 0
        assert [d["name"] for d in rep["payload"]["descriptors"]] == [
            "P_3 x P_2 x D(1)", "P_3 x D(2)", "P_2 x D(3)", "D(6)",
        ]

    def test_grading_two_qubits(self, capsys):
        code, rep = run_json(capsys, "grading", "4", "2,2,m=1")
        assert code == 0
        p = rep["payload"]
        assert p["subspace_count"] == 16 and p["dimension_profile"] == {"1": 16}
        assert len(p["closure_table"]) == 256
        assert "(1,0) x (0,1) x diag * (1,1) x (0,1) x diag -> (0,1) x (0,0) x diag" in p["closure_table"]

    def test_grading_cartan(self, capsys):
        code, rep = run_json(capsys, "grading", "2", "m=2")
        assert code == 0
        assert "(0,1) * (0,1) -> 0" in rep["payload"]["closure_table"]
        assert "(0,1) * (1,0) -> diag" in rep["payload"]["closure_table"]


class TestExitCodes:
    def test_product_mismatch(self, capsys):
        code, out, err = run_main(capsys, "grading", "4", "2,m=1")
        assert code == 2 and out == ""
        assert "product constraint" in err

    def test_not_prime_power(self, capsys):
        code, _, err = run_main(capsys, "grading", "6", "6")
        assert code == 2 and "prime power" in err

    def test_malformed_integer(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["classify", "abc"])
        assert info.value.code == 2

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["frobnicate"])
        assert info.value.code == 2

    def test_non_positive(self, capsys):
        assert run_main(capsys, "classify", "0")[0] == 2
        assert run_main(capsys, "equiv", "1")[0] == 2

    def test_bound_from_env(self, capsys, monkeypatch):
        monkeypatch.setenv("FQK_MAX_N", "4")
        code, _, err = run_main(capsys, "pauli", "5")
        assert code == 3 and "bound 4" in err

    def test_flag_overrides_env(self, capsys, monkeypatch):
        monkeypatch.setenv("FQK_MAX_N", "4")
        assert run_main(capsys, "pauli", "5", "--max-n", "5")[0] == 0
        monkeypatch.setenv("FQK_MAX_N", "100")
        assert run_main(capsys, "pauli", "80", "--max-n", "64")[0] == 3

    def test_classify_bound(self, capsys, monkeypatch):
        monkeypatch.setenv("FQK_MAX_CLASSIFY_N", "100")
        assert run_main(capsys, "classify", "180")[0] == 3

    def test_failed_check_exits_4(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "orthonormality_defects", lambda ops: (3, (0, 1)))
        code, out, _ = run_main(capsys, "weyl", "4")
        assert code == 4
        assert "[FAIL] Hilbert-Schmidt orthonormality" in out and "first bad pair (0, 1)" in out
        assert out.rstrip().endswith("ok: false")

    def test_verification_error_exits_4(self, capsys, monkeypatch):
        from fqk.config import VerificationError

        def boom(*args, **kwargs):
            raise VerificationError("T P_N T^-1 = (x)_k P_Nk failed")

        monkeypatch.setattr(cli, "crt_equivalence", boom)
        code, _, err = run_main(capsys, "equiv", "6")
        assert code == 4 and "P_Nk" in err


class TestRendering:
    @pytest.mark.parametrize("argv", [
        ("classify", "180"), ("pauli", "3", "--check"), ("weyl", "3"), ("equiv", "12"),
        ("mad", "8"), ("grading", "4", "2,m=2"),
    ])
    def test_text_and_json_carry_same_data(self, argv):
        args = cli.build_parser().parse_args(list(argv))
        report = cli.run(args)
        decoded = json.loads(cli.render_json(report))
        assert decoded == report
        assert cli.render_text(decoded) == cli.render_text(report)

    def test_key_order_is_stable(self, capsys):
        _, rep = run_json(capsys, "mad", "4")
        assert list(rep) == ["schema", "command", "input", "payload", "checks", "ok"]

    def test_text_layout(self, capsys):
        code, out, _ = run_main(capsys, "classify", "12")
        assert out.splitlines()[0] == "fqk classify (fqk/1)"
        assert "  [PASS] count = product of partition counts (n=2)" in out

    @pytest.mark.parametrize("argv", [
        ["classify", "180"], ["grading", "6", "3,m=2", "--format", "json"], ["equiv", "30"],
    ])
    def test_byte_identical_across_processes(self, argv):
        env = dict(os.environ, LC_ALL="C", PYTHONHASHSEED="random")
        runs = [
            subprocess.run([sys.executable, "-m", "fqk", *argv], env=env, capture_output=True, check=True).stdout
            for _ in range(2)
        ]
        env2 = dict(env, LC_ALL="C.UTF-8", FQK_DISABLE_NUMBA="1")
        runs.append(subprocess.run([sys.executable, "-m", "fqk", *argv], env=env2, capture_output=True, check=True).stdout)
        assert runs[0] == runs[1] == runs[2]
