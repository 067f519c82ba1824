import json
import pytest
from main import EXIT_NOT_DETECTED, EXIT_OK, EXIT_SEPARABLE, EXIT_USAGE, PIPELINE, ROOT, main
from scripts.lib_io import psmq_to_json, save_state, save_witness
from scripts.lib_states import ghz, w
from scripts.lib_symmetric import PsmqCoefficients
from scripts.lib_witness import w_n_witness
from tests.helpers import basis_state, phi_plus_and_zero


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for k in ("WITNESS_N_CAP", "WITNESS_SEED"): monkeypatch.setenv(k, ""); monkeypatch.delenv(k)


@pytest.fixture
def files(tmp_path):
    return {"ghz3": save_state(ghz(3), tmp_path/"ghz3.json"), "w3": save_state(w(3), tmp_path/"w3.json"),
            "zero3": save_state(basis_state("000"), tmp_path/"zero3.json"),
            "sep": save_state(phi_plus_and_zero(), tmp_path/"sep.json"),
            "w3_witness": save_witness(w_n_witness(3), tmp_path/"w3_witness.json")}


def run_json(capsys, *argv):
    code = main([*map(str, argv), "--json"]); return code, json.loads(capsys.readouterr().out)


class TestClassify:
    def test_ghz3(self, files, capsys):
        code, rep = run_json(capsys, "classify", files["ghz3"])
        assert code == EXIT_OK and rep["genuinely_entangled"] and not rep["smq"]["accepted"]
        assert rep["bipartition_ranks"] == {"0|12": 2, "01|2": 2, "02|1": 2}
        assert rep["max_schmidt_coefficient_sq"] == pytest.approx(0.5)

    def test_w3_is_smq(self, files, capsys):
        _, rep = run_json(capsys, "classify", files["w3"])
        assert rep["smq"]["accepted"] and set(rep["smq"]["coefficients"]) == {"001", "010", "100"}

    def test_separable(self, files, capsys):
        _, rep = run_json(capsys, "classify", files["sep"])
        assert not rep["genuinely_entangled"] and rep["bipartition_ranks"]["01|2"] == 1

    def test_flags_before_command(self, files, capsys):
        assert main(["--json", "classify", str(files["w3"])]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["n"] == 3


class TestBuild:
    def test_pipeline_ghz3(self, files, capsys):
        code, rep = run_json(capsys, "build", files["ghz3"])
        assert code == EXIT_OK and rep["expectation"] < 0 and rep["strategy"] == "known:ghz3"
        assert rep["witness"]["provenance"] == "conjugated"

    def test_reports_product_oracle(self, files, capsys):
        _, rep = run_json(capsys, "build", files["ghz3"])
        assert rep["product_oracle"]["restarts"] == 50 and rep["product_oracle"]["value"] >= -1e-7
        assert "best_state" not in rep["product_oracle"]

    def test_oracle_budget_from_config(self, files, tmp_path, capsys):
        cfg = tmp_path/"cfg.json"; cfg.write_text('{"restarts": 3, "sweeps": 5}')
        _, rep = run_json(capsys, "build", "--kind", "w_n", "--n", "3", "--config", cfg)
        assert rep["product_oracle"]["restarts"] == 3

    def test_output_is_byte_identical(self, files, tmp_path, capsys):
        a, b = tmp_path/"a.json", tmp_path/"b.json"
        for out in (a, b): assert main(["build", str(files["ghz3"]), "--seed", "3", "--out", str(out)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_separable_exit(self, files, capsys):
        code, rep = run_json(capsys, "build", files["sep"])
        assert code == EXIT_SEPARABLE and rep["separating_qubits"] == [2] and len(rep["factor"]) == 2

    def test_projector_separable_exit(self, files, capsys):
        assert main(["build", str(files["sep"]), "--kind", "projector"]) == EXIT_SEPARABLE

    def test_not_detected(self, files, capsys):
        assert main(["build", str(files["zero3"]), "--kind", "w_n"]) == EXIT_NOT_DETECTED
        assert "❌" in capsys.readouterr().err

    def test_w_prime_default_b(self, capsys):
        _, rep = run_json(capsys, "build", "--kind", "w_prime", "--n", "4")
        assert rep["b"] == pytest.approx(12**-0.5) and rep["provenance"] == "w_prime"

    def test_w_prime_bad_b(self, capsys):
        assert main(["build", "--kind", "w_prime", "--n", "3", "--b", "-1"]) == EXIT_USAGE

    def test_pipeline_needs_state(self, capsys):
        assert main(["build"]) == EXIT_USAGE

    def test_named_kind_needs_n(self, capsys):
        assert main(["build", "--kind", "w_n"]) == EXIT_USAGE


class TestDecompose:
    def test_w3_schemes(self, files, capsys):
        _, uni = run_json(capsys, "decompose", files["w3_witness"])
        _, opt = run_json(capsys, "decompose", files["w3_witness"], "--scheme", "w3opt")
        assert (uni["declared_count"], opt["declared_count"]) == (7, 5) and opt["residual"] <= 1e-10

    def test_out_file(self, files, tmp_path, capsys):
        out = tmp_path/"dec.json"
        _, rep = run_json(capsys, "decompose", files["w3_witness"], "--out", out)
        assert rep["out"] == str(out) and rep["realizable"] and len(json.loads(out.read_text())["settings"]) == 7

    def test_scheme_mismatch(self, files, capsys):
        assert main(["decompose", str(files["w3_witness"]), "--scheme", "w4improved"]) == EXIT_USAGE


class TestTolerance:
    def test_w3(self, files, capsys):
        _, rep = run_json(capsys, "tolerance", files["w3_witness"], files["w3"])
        assert rep["p_max"] == pytest.approx(8/21, abs=1e-12)

    def test_optimize_b_ghz3(self, files, tmp_path, capsys):
        out = tmp_path/"g.json"; assert main(["build", str(files["ghz3"]), "--out", str(out)]) == EXIT_OK
        capsys.readouterr()
        _, rep = run_json(capsys, "tolerance", out, files["ghz3"], "--optimize-b")
        assert rep["p_max"] == pytest.approx(0.3336, abs=5e-3) and rep["b_star"] > 0

    def test_not_detected(self, files, capsys):
        assert main(["tolerance", str(files["w3_witness"]), str(files["zero3"])]) == EXIT_NOT_DETECTED


class TestSymmetric:
    def test_psmq_product(self, tmp_path, capsys):
        p = tmp_path/"p.json"; p.write_text(json.dumps(psmq_to_json(PsmqCoefficients.of([0.5, 0.5**0.5, 0.5]))))
        _, rep = run_json(capsys, "symmetric", p)
        assert rep["verdict"] == "fully_separable" and rep["ratio"][0] == pytest.approx(1.0)

    def test_examples(self, capsys):
        _, rep = run_json(capsys, "symmetric", "--examples")
        assert rep["msmq_examples"]["rho3"]["symmetric"] and all(rep["msmq_examples"]["rho3"]["ppt"].values())
        assert not any(rep["msmq_examples"]["rho1"]["ppt"].values())

    def test_nothing_given(self, capsys):
        assert main(["symmetric"]) == EXIT_USAGE


class TestUsage:
    @pytest.mark.parametrize("argv", [[], ["nope"], ["classify"], ["build", "--kind", "bogus"]])
    def test_bad_arguments(self, argv, capsys):
        assert main(argv) == EXIT_USAGE

    def test_missing_state_file(self, tmp_path, capsys):
        assert main(["classify", str(tmp_path/"none.json")]) == EXIT_USAGE
        assert "not found" in capsys.readouterr().err

    def test_bad_config(self, files, tmp_path, capsys):
        cfg = tmp_path/"cfg.json"; cfg.write_text('{"n_cap": 99}')
        assert main(["--config", str(cfg), "classify", str(files["w3"])]) == EXIT_USAGE

    def test_missing_config(self, files, tmp_path, capsys):
        assert main(["classify", str(files["w3"]), "--config", str(tmp_path/"none.json")]) == EXIT_USAGE

    def test_n_cap_from_env(self, files, monkeypatch, capsys):
        monkeypatch.setenv("WITNESS_N_CAP", "2")
        assert main(["classify", str(files["w3"])]) == EXIT_USAGE

    @pytest.mark.parametrize("b", ["abc", "0", "nan", "inf"])
    def test_bad_b_value(self, b, capsys):
        assert main(["build", "--kind", "w_prime", "--n", "3", "--b", b]) == EXIT_USAGE
        assert "b" in capsys.readouterr().err

    def test_explicit_b_value(self, capsys):
        _, rep = run_json(capsys, "build", "--kind", "w_prime", "--n", "3", "--b", "0.25")
        assert rep["b"] == pytest.approx(0.25)

    @pytest.mark.parametrize("key", ["WITNESS_SEED", "WITNESS_N_CAP"])
    def test_non_integer_env(self, key, files, monkeypatch, capsys):
        monkeypatch.setenv(key, "abc")
        assert main(["classify", str(files["w3"])]) == EXIT_USAGE
        assert key in capsys.readouterr().err


class TestSelftest:
    def test_plan(self, capsys):
        assert main(["selftest", "--plan"]) == EXIT_OK
        out = capsys.readouterr().out
        assert all(s in out for steps in PIPELINE.values() for s in steps)

    def test_plan_one_phase(self, capsys):
        main(["selftest", "--plan", "--phase", "symmetric"])
        assert capsys.readouterr().out.strip() == "1. 5_check_symmetric.py"


class TestDemo:
    def test_demo_runs_clean(self, capsys):
        assert main(["demo"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "❌ Fail" not in out and (ROOT/"simulate"/"data"/"w3_witness.json").exists()
