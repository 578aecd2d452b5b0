import json
import subprocess
import sys

import jsonschema
import pytest

from topoclust.cli import main
from topoclust.errors import InvalidK, InvalidParameter, KEqualsN
from topoclust.fields import ScalarField
from topoclust.fileio import load_diagram, save_ensemble, write_field
from topoclust.pipeline import RunConfig, parse_synth, parse_threshold, run_pipeline
from topoclust.report import load_schema, read_plot_data, strip_timing
from topoclust.synthetic import generate_gaussians_ensemble

SMALL = "gaussians:n=9,patterns=3,grid=24x24"


@pytest.fixture(scope="module")
def small_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    cfg = RunConfig(synth=SMALL, k_min=1, k_max=4, t_max=10.0, seed=1, threads=1, output=str(out))
    return out, run_pipeline(cfg)


def test_report_validates_and_selects(small_run):
    out, rep = small_run
    on_disk = json.loads((out / "report.json").read_text())
    assert on_disk == rep
    jsonschema.validate(rep, load_schema())
    block = rep["families"]["maxima"]
    assert block["selected_k"] == {"aic": 3, "bic": 3}
    assert [e["k"] for e in block["per_k"]] == [1, 2, 3, 4]
    assert "threads" not in rep["config"]


def test_centroid_files_and_plot_data(small_run):
    out, rep = small_run
    for entry in rep["families"]["maxima"]["per_k"]:
        assert len(entry["centroids"]) == entry["k"]
        for path in entry["centroids"]:
            assert load_diagram(out / path).family == "maxima"
    for crit in ("aic", "bic"):
        data = read_plot_data(out / f"scores_maxima_{crit}.dat")
        assert data[0] == (1, 1.0)
        assert [k for k, _ in data] == [1, 2, 3, 4]


def test_run_twice_identical_modulo_timing(small_run, tmp_path):
    out, rep = small_run
    cfg = RunConfig(synth=SMALL, k_min=1, k_max=4, t_max=10.0, seed=1, threads=2, output=str(tmp_path))
    again = run_pipeline(cfg)
    assert strip_timing(again) == strip_timing(rep)


def test_both_families(tmp_path):
    cfg = RunConfig(synth=SMALL, family="both", k_min=1, k_max=3, seed=0, threads=1, output=str(tmp_path))
    rep = run_pipeline(cfg)
    assert set(rep["families"]) == {"minima", "maxima"}
    assert (tmp_path / "scores_minima_bic.dat").exists()
    jsonschema.validate(rep, load_schema())


def test_partial_report_on_scoring_failure(tmp_path):
    # k = n leaves no degrees of freedom for the variance
    cfg = RunConfig(synth="gaussians:n=3,patterns=3,grid=16x16", k_min=1, k_max=3,
                    threads=1, output=str(tmp_path))
    with pytest.raises(KEqualsN):
        run_pipeline(cfg)
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["status"] == "error"
    assert len(rep["families"]["maxima"]["per_k"]) == 3
    jsonschema.validate(rep, load_schema())


def test_config_validation():
    with pytest.raises(InvalidK):
        RunConfig(synth=SMALL, k_min=5, k_max=2).validate()
    with pytest.raises(InvalidParameter):
        RunConfig(synth=SMALL, alpha=2.0).validate()
    with pytest.raises(InvalidParameter):
        RunConfig().validate()
    with pytest.raises(InvalidK):
        run_pipeline(RunConfig(synth=SMALL, k_max=20))
    assert RunConfig(synth=SMALL, k_min=1, k_max=4, total_budget=8.0).budget_per_k().max_duration == 2.0


def test_parsers():
    assert parse_threshold("auto") == ("auto", 0.01)
    assert parse_threshold("auto:0.05") == ("auto", 0.05)
    assert parse_threshold("0.3") == ("absolute", 0.3)
    with pytest.raises(InvalidParameter):
        parse_threshold("-1")
    ens = parse_synth("gaussians:n=4,patterns=2,grid=8x8,seed=3")
    assert len(ens) == 4 and ens[0].dims == (8, 8, 1)
    with pytest.raises(InvalidParameter):
        parse_synth("waves:n=3")
    with pytest.raises(InvalidParameter):
        parse_synth("gaussians:n=3,colour=red")


def test_usage_error_for_reversed_k_range(capsys):
    with pytest.raises(SystemExit) as e:
        main(["run", "--synth", SMALL, "--kmin", "5", "--kmax", "2"])
    assert e.value.code != 0
    assert "kmin" in capsys.readouterr().err


def test_bad_flag_values_are_usage_errors():
    for argv in (["run", "--synth", SMALL, "--alpha", "3"], ["run", "--synth", SMALL, "--tmax", "soon"]):
        with pytest.raises(SystemExit) as e:
            main(argv)
        assert e.value.code == 2


def test_diagram_subcommand_on_path_field(tmp_path, capsys):
    write_field(ScalarField((5, 1, 1), [2, 0, 4, 1, 5], name="p"), tmp_path / "p.sfield")
    assert main(["diagram", str(tmp_path / "p.sfield"), "--family", "minima",
                 "-o", str(tmp_path / "p.pdiag")]) == 0
    d = load_diagram(tmp_path / "p.pdiag")
    assert sorted(zip(d.births, d.deaths)) == [(0.0, 5.0), (1.0, 4.0)]


def test_distance_of_diagram_to_itself_is_zero(tmp_path, capsys):
    write_field(ScalarField((5, 1, 1), [2, 0, 4, 1, 5]), tmp_path / "p.sfield")
    main(["diagram", str(tmp_path / "p.sfield"), "-o", str(tmp_path / "d.pdiag")])
    capsys.readouterr()
    assert main(["distance", str(tmp_path / "d.pdiag"), str(tmp_path / "d.pdiag")]) == 0
    assert float(capsys.readouterr().out) == 0.0


@pytest.fixture(scope="module")
def diagram_dir(tmp_path_factory):
    base = tmp_path_factory.mktemp("ens")
    save_ensemble(generate_gaussians_ensemble(9, 3, grid=(24, 24), seed=2), base / "fields")
    (base / "diagrams").mkdir()
    for f in sorted((base / "fields").glob("*.sfield")):
        main(["diagram", str(f), "-o", str(base / "diagrams" / (f.stem + ".pdiag"))])
    return base


def test_barycenter_subcommand(diagram_dir, tmp_path):
    out = tmp_path / "b.pdiag"
    assert main(["barycenter", str(diagram_dir / "diagrams"), "-o", str(out)]) == 0
    assert len(load_diagram(out)) > 0


def test_cluster_then_select(diagram_dir, tmp_path, capsys):
    for k in range(1, 5):
        assert main(["cluster", str(diagram_dir / "diagrams"), "--k", str(k), "--seed", "0",
                     "-o", str(tmp_path / f"k{k}.json")]) == 0
    one = json.loads((tmp_path / "k3.json").read_text())
    assert one["k"] == 3 and len(one["centroids"]) == 3
    capsys.readouterr()
    assert main(["select", str(tmp_path), "--kmin", "1", "--kmax", "4"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["selected_k"] == {"aic": 3, "bic": 3}


def test_select_on_fields_runs_a_sweep(diagram_dir, capsys):
    assert main(["select", str(diagram_dir / "fields"), "--kmin", "1", "--kmax", "4", "--threads", "1"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["selected_k"]["bic"] == 3


def test_missing_input_exits_nonzero(tmp_path, capsys):
    assert main(["run", "--input", str(tmp_path / "none"), "--output", str(tmp_path / "o")]) == 1
    assert "error" in capsys.readouterr().err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "topoclust", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "select" in r.stdout
