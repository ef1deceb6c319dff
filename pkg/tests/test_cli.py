import json

import pytest

from vnideals import cli
from vnideals.algebra import BlockAlgebra
from vnideals.cli import ExperimentConfig, UsageError, cmd_cover, cmd_partial_ideal, cmd_theorem, main
from vnideals.serialize import dumps, element_to_json


def run(capsys, *argv):
    code = main(["--quiet" if a == "-q" else a for a in argv])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out.err


class TestConfig:
    def test_defaults(self):
        c = ExperimentConfig((2, 3))
        assert c.to_json() == {"dims": [2, 3], "master_seed": 0, "trials": 20, "samples": 10,
                               "eps": 1e-9, "rank_eps": 1e-9}

    @pytest.mark.parametrize("kwargs", [{"dims": ()}, {"dims": (0,)}, {"dims": (33,)},
                                        {"dims": (2,), "trials": 0}, {"dims": (2,), "eps": 0.0}])
    def test_invalid(self, kwargs):
        with pytest.raises(UsageError):
            ExperimentConfig(**kwargs)


class TestTheorem:
    def test_abelian(self):
        code, report = cmd_theorem(ExperimentConfig((1,), trials=5, samples=3))
        assert code == 0 and report["verdict"] == "pass"
        assert [e["mask"] for e in report["central_masks"]] == [[False], [True]]
        assert report["witnesses"] == [] and "abelian" in report["note"]

    def test_m2(self):
        code, report = cmd_theorem(ExperimentConfig((2,), trials=20, samples=3))
        assert code == 0
        assert report["summary"] == {"masks_passed": 2, "masks_total": 2, "witnesses_found": 20, "witness_trials": 20}

    def test_three_blocks(self):
        code, report = cmd_theorem(ExperimentConfig((2, 3, 2), trials=50, samples=4))
        assert code == 0
        assert report["summary"]["masks_passed"] == 8 and report["summary"]["witnesses_found"] == 50
        assert all(e["recovered"] == e["mask"] for e in report["central_masks"])
        assert all(w["gap"] >= 1e-4 for w in report["witnesses"])

    def test_parallel_matches_serial(self):
        config = ExperimentConfig((2, 2), trials=6, samples=2)
        assert dumps(cmd_theorem(config, jobs=2)[1]) == dumps(cmd_theorem(config)[1])

    def test_seed_changes_output(self):
        a = cmd_theorem(ExperimentConfig((2,), 1, trials=3, samples=2))[1]
        b = cmd_theorem(ExperimentConfig((2,), 2, trials=3, samples=2))[1]
        assert a["witnesses"] != b["witnesses"]


class TestCover:
    @pytest.mark.parametrize("dims,ranks,size,rem", [((2,), (1,), 2, [0]), ((3,), (2,), 1, [1]),
                                                     ((2, 3), (1, 2), 2, [0, 1]), ((5, 4, 3), (2, 3, 1), 3, [1, 1, 0])])
    def test_examples(self, dims, ranks, size, rem):
        code, report = cmd_cover(ExperimentConfig(dims), ranks)
        assert code == 0 and report["size_M"] == size and report["ranks"]["s_rem"] == rem

    def test_zero_rank_is_usage_error(self):
        with pytest.raises(UsageError):
            cmd_cover(ExperimentConfig((2, 3)), (0, 0))


class TestPartialIdeal:
    @pytest.mark.parametrize("side", ["left", "right"])
    def test_rank_one_in_m3(self, side):
        p = BlockAlgebra([3]).random_projection([1], 0)
        code, report = cmd_partial_ideal(ExperimentConfig((3,), trials=10), p, side)
        assert code == 0 and report["verdict"] == "pass"
        assert report["consistency"]["verdict"] == "pass"
        assert report["invariance"]["verdict"] == "fail"
        assert report["witness"]["gap"] >= 1e-4

    @pytest.mark.parametrize("ranks", [(3,), (0,)])
    def test_central(self, ranks):
        p = BlockAlgebra([3]).random_projection(ranks, 0)
        code, report = cmd_partial_ideal(ExperimentConfig((3,), trials=10), p)
        assert code == 0 and report["p_central"]
        assert report["consistency"]["verdict"] == report["invariance"]["verdict"] == "pass"
        assert report["witness"] is None


class TestMain:
    def test_theorem_stdout_and_summary(self, capsys):
        code, report, err = run(capsys, "theorem", "--dims", "1,1", "--trials", "2", "--samples", "2")
        assert code == 0 and report["command"] == "theorem" and report["schema_version"] == 1
        assert "theorem: pass" in err

    def test_out_file_and_quiet(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code, report, err = run(capsys, "cover", "--dims", "4", "--ranks", "1", "--out", str(out), "-q")
        assert code == 0 and report is None and err == ""
        assert json.loads(out.read_text())["verdict"] == "pass"

    def test_unwritable_out(self, tmp_path, capsys):
        code, _, err = run(capsys, "cover", "--dims", "2", "--ranks", "1", "--out", str(tmp_path / "no" / "r.json"))
        assert code == 1 and "error" in err

    def test_byte_identical_runs(self, tmp_path, capsys):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            assert main(["theorem", "--dims", "2,1", "--trials", "3", "--samples", "2", "--out", str(p), "--quiet"]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_witness_from_p_json(self, tmp_path, capsys):
        p = BlockAlgebra([2, 2]).random_projection([1, 2], 3)
        path = tmp_path / "p.json"
        path.write_text(dumps(element_to_json(p)))
        code, report, _ = run(capsys, "witness", "--dims", "2,2", "--p-json", str(path), "-q")
        assert code == 0 and report["gap"] >= 1e-4 and report["recheck_gap"] >= 1e-4

    def test_p_json_dims_mismatch(self, tmp_path, capsys):
        path = tmp_path / "p.json"
        path.write_text(dumps(element_to_json(BlockAlgebra([2]).identity())))
        code, _, err = run(capsys, "witness", "--dims", "3", "--p-json", str(path))
        assert code == 1 and "differ" in err

    def test_witness_central_is_usage_error(self, capsys):
        assert run(capsys, "witness", "--dims", "2", "--ranks", "2")[0] == 1

    def test_check_central_mask_passes(self, capsys):
        code, report, _ = run(capsys, "check", "--dims", "2,2", "--mask", "1,0", "--trials", "5", "-q")
        assert code == 0 and report["invariance"]["verdict"] == "pass"

    def test_check_noncentral_fails_verification(self, capsys):
        code, report, _ = run(capsys, "check", "--dims", "3", "--ranks", "1", "--trials", "20", "-q")
        assert code == 2 and report["consistency"]["verdict"] == "pass"
        assert report["invariance"]["verdict"] == "fail"

    def test_check_central_projection_passes(self, capsys):
        code, report, _ = run(capsys, "check", "--dims", "3,2", "--ranks", "3,0", "--trials", "5", "-q")
        assert code == 0 and report["invariance"]["trials"] == 10

    def test_partial_ideal_command(self, capsys):
        code, report, _ = run(capsys, "partial-ideal", "--dims", "3", "--ranks", "1", "--side", "left", "-q")
        assert code == 0 and report["side"] == "left"

    @pytest.mark.parametrize("argv", [[], ["theorem"], ["theorem", "--dims", "a,b"], ["cover", "--dims", "2"],
                                      ["cover", "--dims", "2", "--ranks", "3"], ["nope", "--dims", "2"],
                                      ["check", "--dims", "2", "--mask", "1,1"], ["partial-ideal", "--dims", "2"]])
    def test_usage_errors_exit_1(self, argv, capsys):
        with pytest.raises(SystemExit) as info:
            code = main(argv)
            raise SystemExit(code)
        assert info.value.code == 1

    def test_module_entry_point(self):
        import subprocess
        import sys
        proc = subprocess.run([sys.executable, "-m", "vnideals", "cover", "--dims", "3", "--ranks", "1", "--quiet"],
                              capture_output=True, text=True)
        assert proc.returncode == 0 and json.loads(proc.stdout)["size_M"] == 3


def test_backend_recorded():
    _, report = cmd_cover(ExperimentConfig((2,)), (1,))
    assert report["backend"] == cli._backend.BACKEND
