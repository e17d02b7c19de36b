"""CLI surface: subcommands, outputs, manifests, determinism, exit codes."""
import json
from pathlib import Path

import pytest

from qrclab.cli import main


def run(args):
    return main([str(a) for a in args])


@pytest.fixture(scope="module")
def archive(tmp_path_factory):
    out = tmp_path_factory.mktemp("data") / "tfim4"
    code = run(["data", "gen", "tfim-chain", "--n", 4, "--points", 40,
                "--window-lo", 1.0, "--window-hi", 1.9, "--out", out])
    assert code == 0
    return out


def read_outputs(out_dir: Path) -> dict[str, bytes]:
    return {
        p.name: p.read_bytes()
        for p in sorted(Path(out_dir).iterdir())
        if p.name != "run_manifest.json"
    }


def test_data_gen_archive_contents(archive):
    manifest = json.loads((archive / "manifest.json").read_text())
    assert manifest["n_qubits"] == 4
    assert len(manifest["files"]) == 40
    assert manifest["split_window"] == [1.0, 1.9]
    assert (archive / "run_manifest.json").is_file()
    assert (archive / "point_0000.txt").read_text().startswith("# R= 0.2")


def test_data_inspect(archive, capsys):
    assert run(["data", "inspect", archive]) == 0
    out = capsys.readouterr().out
    assert "qubits: 4" in out
    assert "split: 28 train / 12 test" in out
    assert "r,target" in out


def test_data_inspect_missing_dir(tmp_path, capsys):
    code = run(["data", "inspect", tmp_path / "nope"])
    assert code == 2
    assert "not a dataset archive" in capsys.readouterr().err


def test_qrc_outputs_and_determinism(archive, tmp_path):
    args = ["qrc", "--dataset", archive, "--families", "G3,D2", "--gates", "10",
            "--seeds", 2, "--no-ising"]
    assert run(args + ["--out", tmp_path / "a"]) == 0
    assert run(args + ["--out", tmp_path / "b"]) == 0
    a, b = read_outputs(tmp_path / "a"), read_outputs(tmp_path / "b")
    assert a == b
    assert set(a) == {"tfim4_G3_10.csv", "tfim4_G3_10.json",
                      "tfim4_D2_6.csv", "tfim4_D2_6.json", "summary.csv"}
    summary = a["summary.csv"].decode().strip().split("\n")
    assert summary[0] == "family,n_gates,mean_mse,std_mse,n_seeds"
    assert len(summary) == 3
    cell = a["tfim4_G3_10.csv"].decode().strip().split("\n")
    assert cell[0] == "family,n_gates,seed,mse"
    assert len(cell) == 3


def test_qrc_manifest(archive, tmp_path):
    out = tmp_path / "m"
    assert run(["qrc", "--dataset", archive, "--families", "G1", "--gates", "5",
                "--seeds", 1, "--no-ising", "--seed", 7, "--out", out]) == 0
    manifest = json.loads((out / "run_manifest.json").read_text())
    assert manifest["seed"] == 7
    assert manifest["config"]["families"] == "G1"
    assert "summary.csv" in manifest["outputs"]
    assert manifest["version"]
    assert manifest["wall_time_s"] >= 0


def test_qrc_builtin_dataset(tmp_path):
    # builtin name resolves without an archive on disk
    assert run(["qrc", "--dataset", "tfim6", "--families", "DN", "--seeds", 1,
                "--no-ising", "--out", tmp_path / "t"]) == 0
    summary = (tmp_path / "t" / "summary.csv").read_text().strip().split("\n")
    assert summary[1].startswith("DN,1,")


def test_qrc_bad_dataset(tmp_path, capsys):
    assert run(["qrc", "--dataset", tmp_path / "missing", "--out", tmp_path / "x"]) == 2
    assert "neither an archive" in capsys.readouterr().err


def test_qrc_bad_family(archive, tmp_path, capsys):
    assert run(["qrc", "--dataset", archive, "--families", "G9",
                "--out", tmp_path / "x"]) == 2
    assert "unknown family" in capsys.readouterr().err


def test_config_file_precedence(archive, tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("# comment\nfamilies = G2\ngates = 5\nseeds = 3\nising = off\n")
    out = tmp_path / "c"
    assert run(["qrc", "--dataset", archive, "--config", cfg, "--seeds", 2,
                "--out", out]) == 0
    rows = (out / "summary.csv").read_text().strip().split("\n")
    assert rows[1].startswith("G2,5,")
    assert rows[1].endswith(",2")  # CLI --seeds beats the config file
    assert len(rows) == 2  # ising disabled by the file


def test_majorization_outputs(tmp_path):
    out = tmp_path / "maj"
    assert run(["majorization", "--n", 3, "--circuits", 10, "--families", "G3,DN",
                "--gates", "15", "--out", out]) == 0
    names = set(read_outputs(out))
    assert names == {"majorization_G3_15.csv", "majorization_DN_1.csv",
                     "majorization_haar.csv", "ranking.csv"}
    ranking = (out / "ranking.csv").read_text().strip().split("\n")
    assert ranking[0] == "family,n_gates,summary,summary_se"
    assert len(ranking) == 4
    summaries = [float(r.split(",")[2]) for r in ranking[1:]]
    assert summaries == sorted(summaries)


def test_majorization_all_families_shape(tmp_path):
    out = tmp_path / "all"
    assert run(["majorization", "--n", 4, "--circuits", 8, "--families", "all",
                "--gates", "12", "--out", out]) == 0
    names = set(read_outputs(out))
    reports = {n for n in names if n.startswith("majorization_") and n != "majorization_haar.csv"}
    assert len(reports) == 7  # one per family
    assert "majorization_haar.csv" in names
    ranking = (out / "ranking.csv").read_text().strip().split("\n")
    assert len(ranking) == 1 + 7 + 1


def test_majorization_seed_pin(tmp_path):
    out = tmp_path / "pin"
    assert run(["majorization", "--n", 3, "--circuits", 2, "--families", "G1",
                "--gates", "10", "--seed-pin", "--out", out]) == 0
    text = (out / "majorization_G1_10.csv").read_text()
    stds = [float(line.split(",")[2]) for line in text.strip().split("\n")[2:]]
    assert all(s == 0.0 for s in stds)


def test_pauli_map_outputs(tmp_path):
    out = tmp_path / "pm"
    assert run(["pauli-map", "--families", "G1,DN", "--gates", "20",
                "--circuits", 25, "--out", out]) == 0
    names = set(read_outputs(out))
    assert names == {"cloud_G1.csv", "cloud_DN.csv", "cloud_haar.csv",
                     "projection_G1.csv", "projection_DN.csv", "projection_haar.csv"}
    cloud = (out / "cloud_G1.csv").read_text().strip().split("\n")
    assert len(cloud) == 26
    rerun = tmp_path / "pm2"
    assert run(["pauli-map", "--families", "G1,DN", "--gates", "20",
                "--circuits", 25, "--out", rerun]) == 0
    assert read_outputs(out) == read_outputs(rerun)


def test_pauli_map_rejects_d3(tmp_path, capsys):
    assert run(["pauli-map", "--families", "D3", "--circuits", 10,
                "--out", tmp_path / "x"]) == 2


def test_ising_subcommand(tmp_path):
    out = tmp_path / "is"
    assert run(["ising", "--n", 4, "--time", 1.0, "--convergence", "--out", out]) == 0
    params = json.loads((out / "ising_params.json").read_text())
    assert params["n_qubits"] == 4 and params["seed"] == 0
    counts = dict(
        line.split(",") for line in
        (out / "gate_counts.csv").read_text().strip().split("\n")[1:]
    )
    assert counts["total"] == "30"  # 3*C(4,2) + 3*4
    conv = (out / "trotter_convergence.csv").read_text().strip().split("\n")
    errs = [float(line.split(",")[1]) for line in conv[1:]]
    assert len(errs) == 7
    assert errs[-1] < errs[0]


def test_unknown_flag_exits_2(capsys):
    assert run(["qrc", "--definitely-not-a-flag"]) == 2
