"""End-to-end command-line behavior: outputs, exit codes, determinism."""

import csv
import json
import subprocess
import sys

import pytest

from bdwork import bd_rate, ingest_dataset
from bdwork.cli import EXIT_COMPUTE, EXIT_INPUT, EXIT_OK, main
from bdwork.model import dataset_rows, write_dataset_csv

from conftest import dataset_from_generator

HEADER = "sequence,codec,label,quality_metric,quality,cost_metric,cost,support"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def disjoint_csv(tmp_path):
    rows = [HEADER]
    for i, q in enumerate((30.0, 32.0, 34.0, 36.0)):
        rows.append(f"street,slow,{i},psnr,{q},bitrate_kbps,{1000 + 900 * i},1")
    for i, q in enumerate((40.0, 42.0, 44.0, 46.0)):
        rows.append(f"street,fast,{i},psnr,{q},bitrate_kbps,{1100 + 900 * i},1")
    path = tmp_path / "disjoint.csv"
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def five_point_csv(tmp_path):
    def log_cost(codec, sequence, q):
        return 3.0 + 0.08 * (q - 32.0) + 0.001 * (q - 32.0) ** 2

    ds = dataset_from_generator(
        log_cost, codecs=("A",), sequences=("s",), support_idx=(0, 4, 8, 12, 15)
    )
    path = tmp_path / "five.csv"
    write_dataset_csv(ds, path)
    return path


class TestArgumentErrors:
    def test_same_ref_and_test(self, capsys, pair_csv, tmp_path):
        code, _, err = run(
            capsys, "compute", "--input", pair_csv, "--ref", "refcodec",
            "--test", "refcodec", "--out", tmp_path / "o",
        )
        assert code == EXIT_INPUT
        assert "must differ" in err

    def test_unknown_method(self, capsys, pair_csv, tmp_path):
        code, _, err = run(
            capsys, "compute", "--input", pair_csv, "--ref", "refcodec",
            "--test", "newcodec", "--method", "quintic", "--out", tmp_path / "o",
        )
        assert code == EXIT_INPUT
        assert "quintic" in err

    def test_malformed_pair(self, capsys, pair_csv, tmp_path):
        code, _, err = run(
            capsys, "assess", "--input", pair_csv, "--pair", "psnr",
            "--out", tmp_path / "o",
        )
        assert code == EXIT_INPUT
        assert "QUALITY:COST" in err

    def test_missing_required_argument(self, capsys, pair_csv):
        assert run(capsys, "compute", "--input", pair_csv)[0] == EXIT_INPUT

    def test_unknown_subcommand(self, capsys):
        assert run(capsys, "frobnicate")[0] == EXIT_INPUT

    def test_missing_input_file(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "assess", "--input", tmp_path / "nope.csv", "--out", tmp_path,
        )
        assert code == EXIT_INPUT

    def test_unknown_codec(self, capsys, pair_csv, tmp_path):
        code, _, err = run(
            capsys, "compute", "--input", pair_csv, "--ref", "refcodec",
            "--test", "turbo", "--out", tmp_path / "o",
        )
        assert code == EXIT_INPUT
        assert "turbo" in err

    def test_pair_not_in_file(self, capsys, pair_csv, tmp_path):
        code, _, err = run(
            capsys, "compute", "--input", pair_csv, "--ref", "refcodec",
            "--test", "newcodec", "--pair", "vmaf:bitrate_kbps",
            "--out", tmp_path / "o",
        )
        assert code == EXIT_INPUT
        assert "vmaf" in err


class TestCompute:
    def test_table_layout(self, capsys, pair_csv, tmp_path):
        out_dir = tmp_path / "out"
        code, out, err = run(
            capsys, "compute", "--input", pair_csv, "--ref", "refcodec",
            "--test", "newcodec", "--out", out_dir,
        )
        assert code == EXIT_OK
        lines = (out_dir / "bd_results.csv").read_text().splitlines()
        assert lines[0] == "sequence,codec_ref,codec_test,direction,method,low,high,delta"
        assert len(lines) == 4
        assert lines[1].startswith("city,refcodec,newcodec,rate,akima,")
        assert lines[2].startswith("forest,")
        assert lines[3].startswith("MEAN,")
        assert all(line.endswith("%") for line in lines[1:])
        assert "BD-rate (akima) newcodec vs refcodec" in out

    def test_json_round_trips_full_precision(self, capsys, pair_csv, tmp_path):
        out_dir = tmp_path / "out"
        code, _, _ = run(
            capsys, "compute", "--input", pair_csv, "--ref", "refcodec",
            "--test", "newcodec", "--method", "pchip", "--out", out_dir,
        )
        assert code == EXIT_OK
        payload = json.loads((out_dir / "bd_results.json").read_text())
        ds = ingest_dataset(pair_csv)
        pair = ds.metric_pairs[0]
        for entry in payload["results"]:
            expected = bd_rate(
                ds.curve("refcodec", entry["sequence"], pair),
                ds.curve("newcodec", entry["sequence"], pair),
                "pchip",
            )
            assert entry["delta"] == expected.delta
            assert entry["low"] == expected.bounds.low
            assert entry["high"] == expected.bounds.high
        deltas = [e["delta"] for e in payload["results"]]
        assert payload["summary"]["mean"] == sum(deltas) / len(deltas)

    def test_identical_codecs_give_zero_delta(self, capsys, tmp_path, knee_csv):
        rows = knee_csv.read_text().splitlines()
        twin = [rows[0]]
        for line in rows[1:]:
            twin.append(line)
            twin.append(line.replace("c0", "c1", 1))
        path = tmp_path / "twin.csv"
        path.write_text("\n".join(twin) + "\n", encoding="utf-8")
        out_dir = tmp_path / "out"
        code, _, _ = run(
            capsys, "compute", "--input", path, "--ref", "c0", "--test", "c1",
            "--out", out_dir,
        )
        assert code == EXIT_OK
        lines = (out_dir / "bd_results.csv").read_text().splitlines()
        assert all(line.endswith(",0.00%") for line in lines[1:])

    def test_disjoint_spans_exit_code(self, capsys, disjoint_csv, tmp_path):
        code, _, err = run(
            capsys, "compute", "--input", disjoint_csv, "--ref", "slow",
            "--test", "fast", "--out", tmp_path / "o",
        )
        assert code == EXIT_COMPUTE
        assert "street" in err

    def test_quality_direction(self, capsys, pair_csv, tmp_path):
        out_dir = tmp_path / "out"
        code, out, _ = run(
            capsys, "compute", "--input", pair_csv, "--ref", "refcodec",
            "--test", "newcodec", "--direction", "quality", "--out", out_dir,
        )
        assert code == EXIT_OK
        payload = json.loads((out_dir / "bd_results.json").read_text())
        assert payload["direction"] == "quality"
        lines = (out_dir / "bd_results.csv").read_text().splitlines()
        assert all(not line.endswith("%") for line in lines[1:])
        assert "BD-quality" in out

    def test_byte_identical_reruns(self, capsys, pair_csv, tmp_path):
        args = [
            "compute", "--input", pair_csv, "--ref", "refcodec",
            "--test", "newcodec",
        ]
        dirs = [tmp_path / "a", tmp_path / "b"]
        for out_dir in dirs:
            assert run(capsys, *args, "--out", out_dir)[0] == EXIT_OK
        for name in ("bd_results.csv", "bd_results.json"):
            assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()


class TestAssess:
    def test_default_five_backends_sorted(self, capsys, knee_csv, tmp_path):
        out_dir = tmp_path / "out"
        code, out, _ = run(capsys, "assess", "--input", knee_csv, "--out", out_dir)
        assert code == EXIT_OK
        with open(out_dir / "accuracy.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 5
        assert rows[0]["method"] == "akima"
        e_bars = [float(r["e_bar"]) for r in rows]
        assert e_bars == sorted(e_bars)
        assert "best backend: akima" in out

    def test_method_subset_and_per_point(self, capsys, knee_csv, tmp_path):
        out_dir = tmp_path / "out"
        code, _, _ = run(
            capsys, "assess", "--input", knee_csv, "--methods", "akima,PCHIP",
            "--per-point", "--out", out_dir,
        )
        assert code == EXIT_OK
        with open(out_dir / "accuracy.csv", newline="") as fh:
            assert len(list(csv.DictReader(fh))) == 2
        assert (out_dir / "point_errors_akima.csv").exists()
        assert (out_dir / "point_errors_pchip.csv").exists()

    def test_skip_notice_on_stderr(self, capsys, five_point_csv, tmp_path):
        code, _, err = run(
            capsys, "assess", "--input", five_point_csv,
            "--methods", "single_cubic,akima", "--out", tmp_path / "o",
        )
        assert code == EXIT_OK
        assert "single_cubic" in err

    def test_no_applicable_backend(self, capsys, five_point_csv, tmp_path):
        code, _, err = run(
            capsys, "assess", "--input", five_point_csv,
            "--methods", "single_cubic", "--out", tmp_path / "o",
        )
        assert code == EXIT_COMPUTE
        assert "single_cubic" in err

    def test_byte_identical_reruns(self, capsys, knee_csv, tmp_path):
        dirs = [tmp_path / "a", tmp_path / "b"]
        for out_dir in dirs:
            code, _, _ = run(
                capsys, "assess", "--input", knee_csv, "--per-point",
                "--out", out_dir,
            )
            assert code == EXIT_OK
        for name in ("accuracy.csv", "accuracy.json", "point_errors_akima.csv"):
            assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()


class TestPlot:
    def test_writes_svg_and_csv_per_sequence(self, capsys, pair_csv, tmp_path):
        out_dir = tmp_path / "out"
        code, out, _ = run(capsys, "plot", "--input", pair_csv, "--out", out_dir)
        assert code == EXIT_OK
        for seq in ("city", "forest"):
            svg = out_dir / f"plot_{seq}_psnr_bitrate_kbps.svg"
            table = out_dir / f"plot_{seq}_psnr_bitrate_kbps.csv"
            assert svg.exists() and table.exists()
            assert svg.read_text().startswith("<svg")
        assert "wrote" in out

    def test_log_x_flag(self, capsys, knee_csv, tmp_path):
        out_dir = tmp_path / "out"
        code, _, _ = run(
            capsys, "plot", "--input", knee_csv, "--method", "pchip",
            "--log-x", "--out", out_dir,
        )
        assert code == EXIT_OK
        svg = (out_dir / "plot_knee_ssim_bitrate_kbps.svg").read_text()
        assert ">1000</text>" in svg
        assert "(pchip)" in svg

    def test_byte_identical_reruns(self, capsys, knee_csv, tmp_path):
        dirs = [tmp_path / "a", tmp_path / "b"]
        for out_dir in dirs:
            assert run(capsys, "plot", "--input", knee_csv, "--out", out_dir)[0] == EXIT_OK
        name = "plot_knee_ssim_bitrate_kbps.svg"
        assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()


class TestDiagnostics:
    def test_hull_drop_note_goes_to_stderr(self, capsys, tmp_path, knee_csv):
        rows = knee_csv.read_text().splitlines()
        rows.append("knee,c0,x99,ssim,0.9999,bitrate_kbps,50000.0,0")
        path = tmp_path / "outlier.csv"
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        code, _, err = run(capsys, "assess", "--input", path, "--out", tmp_path / "o")
        assert code == EXIT_OK
        assert "note:" in err and "x99" in err


class TestInstalledEntrypoint:
    def test_module_invocation(self, pair_csv, tmp_path):
        proc = subprocess.run(
            [
                sys.executable, "-m", "bdwork.cli", "compute",
                "--input", str(pair_csv), "--ref", "refcodec",
                "--test", "newcodec", "--out", str(tmp_path / "out"),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == EXIT_OK, proc.stderr
        assert (tmp_path / "out" / "bd_results.csv").exists()

    def test_module_invocation_error_code(self, tmp_path):
        proc = subprocess.run(
            [
                sys.executable, "-m", "bdwork.cli", "assess",
                "--input", str(tmp_path / "missing.csv"), "--out", str(tmp_path),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == EXIT_INPUT
