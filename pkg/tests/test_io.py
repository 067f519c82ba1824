import json
import math
import numpy as np
import pytest
from scripts.lib_errors import ParameterError, ResourceError, StateFileError
from scripts.lib_io import (dumps, load_psmq, load_state, load_witness, psmq_to_json, save_state, save_witness, state_to_json,
                            witness_to_json)
from scripts.lib_pipeline import build_witness_for_state
from scripts.lib_states import ghz, w
from scripts.lib_symmetric import PsmqCoefficients
from scripts.lib_witness import Provenance, w_n_witness


def put(tmp_path, obj, name="in.json"):
    p = tmp_path/name; p.write_text(obj if isinstance(obj, str) else json.dumps(obj)); return p


class TestStates:
    def test_amplitude_form(self, tmp_path):
        s = load_state(put(tmp_path, {"n": 1, "amplitudes": [[0.6, 0], [0, 0.8]]}))
        np.testing.assert_allclose(s.amplitudes, [0.6, 0.8j])

    def test_family_form(self, tmp_path):
        s = load_state(put(tmp_path, {"family": "ghz", "params": {"n": 3}}))
        np.testing.assert_allclose(s.amplitudes, ghz(3).amplitudes)

    def test_pseudo_w_complex_coeffs(self, tmp_path):
        s = load_state(put(tmp_path, {"family": "pseudo_w", "params": {"coeffs": [[1, 0], [0, 1], [1, 0]]}}))
        assert s.amplitudes[0b010] == pytest.approx(1j/math.sqrt(3))

    def test_saved_file_loads_back(self, tmp_path):
        p = save_state(w(3), tmp_path/"out"/"w3.json")
        np.testing.assert_allclose(load_state(p).amplitudes, w(3).amplitudes)

    def test_unknown_family(self, tmp_path):
        with pytest.raises(ParameterError): load_state(put(tmp_path, {"family": "nope"}))

    def test_cap(self, tmp_path):
        with pytest.raises(ResourceError): load_state(put(tmp_path, {"family": "ghz", "params": {"n": 5}}), n_cap=4)

    def test_zero_vector(self, tmp_path):
        with pytest.raises(StateFileError, match="zero"): load_state(put(tmp_path, {"n": 1, "amplitudes": [[0, 0], [0, 0]]}))


class TestMalformed:
    def test_syntax_error_has_line(self, tmp_path):
        with pytest.raises(StateFileError) as e: load_state(put(tmp_path, '{\n  "n": 1,\n  "amplitudes": [[1, 0], \n}\n'))
        assert e.value.line == 4 and str(e.value).startswith(str(tmp_path/"in.json") + ":4:")

    def test_missing_file(self, tmp_path):
        with pytest.raises(StateFileError, match="not found"): load_state(tmp_path/"none.json")

    @pytest.mark.parametrize("obj", [{"n": 2}, {"n": 1, "amplitudes": [[1, 0]], "family": "ghz"}, {"amplitudes": [[1, 0], [0, 0]]},
                                     {"n": 1, "amplitudes": [[1, 0], [0, 0]], "extra": 1}, {"n": 1, "amplitudes": [[1, 0, 0], [0, 0]]}])
    def test_schema(self, tmp_path, obj):
        with pytest.raises(StateFileError): load_state(put(tmp_path, obj))

    def test_length_mismatch(self, tmp_path):
        with pytest.raises(StateFileError, match="3 amplitudes"): load_state(put(tmp_path, {"n": 1, "amplitudes": [[1, 0]]*3}))


class TestWitnessFiles:
    def test_w3_file(self, tmp_path):
        p = save_witness(w_n_witness(3), tmp_path/"w.json"); wit = load_witness(p)
        assert wit.provenance is Provenance.w_n and wit.base_chain is not None
        np.testing.assert_allclose(wit.matrix, w_n_witness(3).matrix)

    def test_pipeline_witness_keeps_chains(self, tmp_path):
        wit = build_witness_for_state(ghz(3)); back = load_witness(save_witness(wit, tmp_path/"g.json"))
        np.testing.assert_allclose(back.smq_chain.matrix(), wit.smq_chain.matrix())
        assert back.params["strategy"] == "known:ghz3"

    def test_chain_length_checked(self, tmp_path):
        j = witness_to_json(w_n_witness(3)); j["base_chain"] = j["base_chain"][:2]
        with pytest.raises(StateFileError, match="chain of length 2"): load_witness(put(tmp_path, j))

    def test_bad_provenance(self, tmp_path):
        j = witness_to_json(w_n_witness(2)); j["provenance"] = "magic"
        with pytest.raises(StateFileError, match="provenance"): load_witness(put(tmp_path, j))


class TestPsmqFiles:
    def test_load(self, tmp_path):
        c = load_psmq(put(tmp_path, psmq_to_json(PsmqCoefficients.of([0, 1j, 0]))))
        assert c.n_qubits == 2 and c.coeffs[1] == 1j

    def test_count_checked(self, tmp_path):
        with pytest.raises(StateFileError): load_psmq(put(tmp_path, {"n": 3, "dicke_coeffs": [[1, 0]]}))


class TestOutputFormat:
    def test_deterministic_text(self):
        assert dumps({"b": 1, "a": [1.5]}) == '{\n  "a": [\n    1.5\n  ],\n  "b": 1\n}\n'

    def test_state_json(self):
        assert state_to_json(w(2))["amplitudes"][1] == [pytest.approx(1/math.sqrt(2)), 0.0]
