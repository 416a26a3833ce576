import json
import os
import signal
import socket
import subprocess
import sys
import time

import pytest
from click.testing import CliRunner
from PIL import Image

from skinsafe.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, list(args), catch_exceptions=False)


class TestTtsbCommand:
    def test_twenty_minutes(self, runner):
        result = invoke(runner, "ttsb", "--uv", "10", "--skin", "3", "--spf", "0")
        assert result.exit_code == 0
        assert result.output.strip() == "20.0"

    def test_spf15(self, runner):
        result = invoke(runner, "ttsb", "--uv", "10", "--skin", "3", "--spf", "15")
        assert result.output.strip() == "74.0"

    def test_no_burn_risk(self, runner):
        result = invoke(runner, "ttsb", "--uv", "0", "--skin", "1", "--spf", "0")
        assert result.exit_code == 0
        assert result.output.strip() == "NO-BURN-RISK"

    def test_env_and_altitude(self, runner):
        result = invoke(runner, "ttsb", "--uv", "5", "--skin", "2", "--env", "snow")
        assert result.output.strip() == "10.8"

    def test_json_format(self, runner):
        result = invoke(runner, "ttsb", "--uv", "10", "--skin", "3",
                        "--format", "json")
        body = json.loads(result.output)
        assert body["kind"] == "burn_in"
        assert body["minutes"] == pytest.approx(20.0)

    @pytest.mark.parametrize("args", [
        ("--uv", "5", "--skin", "9"),
        ("--uv", "5", "--skin", "2", "--spf", "7"),
        ("--uv", "5", "--skin", "2", "--env", "volcano"),
    ])
    def test_invalid_flags_exit_2(self, runner, args):
        result = runner.invoke(main, ["ttsb", *args])
        assert result.exit_code == 2


class TestDatasetVerify:
    def test_counts_and_clean_exit(self, runner, small_dataset):
        result = invoke(runner, "dataset", "verify",
                        "--manifest", small_dataset["manifest"])
        assert result.exit_code == 0
        assert "normal: 12" in result.output
        assert "melanoma: 8" in result.output

    def test_json_format(self, runner, small_dataset):
        result = invoke(runner, "dataset", "verify", "--format", "json",
                        "--manifest", small_dataset["manifest"])
        body = json.loads(result.output)
        assert body["counts"] == {"normal": 12, "atypical": 12, "melanoma": 8}
        # the small fixture set is deliberately not PH2-resolution
        assert len(body["resolution_flags"]) == 32

    def test_missing_file_nonzero_exit(self, runner, small_dataset, tmp_path):
        manifest = tmp_path / "broken.csv"
        lines = open(small_dataset["manifest"]).read().splitlines()
        lines[1] = lines[1].replace("images/", "gone/")
        manifest.write_text("\n".join(lines) + "\n")
        result = runner.invoke(main, ["dataset", "verify", "--manifest", str(manifest)])
        assert result.exit_code == 3

    def test_bad_manifest_exit_2(self, runner, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("image_id,image_path,mask_path,label\nx,y,,benign\n")
        result = runner.invoke(main, ["dataset", "verify", "--manifest", str(path)])
        assert result.exit_code == 2

    def test_empty_manifest_warns_exit_0(self, runner, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("image_id,image_path,mask_path,label\n")
        result = invoke(runner, "dataset", "verify", "--manifest", str(path))
        assert result.exit_code == 0
        assert "empty" in result.output


@pytest.fixture(scope="module")
def trained(small_dataset, tmp_path_factory):
    out = str(tmp_path_factory.mktemp("cli-model") / "model.json")
    result = CliRunner().invoke(main, [
        "train", "--manifest", small_dataset["manifest"],
        "--out-model", out, "--k", "5"], catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return out


class TestTrainEvalAnalyze:
    def test_train_writes_loadable_model(self, trained):
        from skinsafe.classify import load_model
        model = load_model(trained)
        assert model.stage_one.shape[0] == 32

    def test_train_insufficient_data_exit_2(self, runner, small_dataset):
        result = runner.invoke(main, [
            "train", "--manifest", small_dataset["manifest"],
            "--out-model", "/tmp/nope.json", "--k", "99"])
        assert result.exit_code == 2

    def test_eval_deterministic_and_formatted(self, runner, small_dataset):
        args = ["eval", "--manifest", small_dataset["manifest"],
                "--folds", "4", "--seed", "7", "--k", "5"]
        first = invoke(runner, *args)
        second = invoke(runner, *args)
        assert first.exit_code == 0
        assert first.output == second.output
        assert "overall (3-class)" in first.output
        assert "stage I" in first.output and "stage II" in first.output
        assert "reference 96.3" in first.output
        assert "reference 95.7" in first.output and "reference 97.5" in first.output

    def test_eval_json(self, runner, small_dataset):
        result = invoke(runner, "eval", "--manifest", small_dataset["manifest"],
                        "--folds", "4", "--seed", "7", "--k", "5",
                        "--format", "json")
        body = json.loads(result.output)
        assert body["params"] == {"folds": 4, "seed": 7, "k": 5}
        assert len(body["overall"]["row_percentages"]) == 3
        for row in body["overall"]["row_percentages"]:
            assert sum(row) == pytest.approx(100.0, abs=0.01)

    def test_analyze_json_and_mask(self, runner, small_dataset, trained, tmp_path):
        image = str(small_dataset["root"] / "images" / "syn_030_melanoma.png")
        mask_out = str(tmp_path / "mask.png")
        result = invoke(runner, "analyze", "--image", image, "--model", trained,
                        "--emit-mask", mask_out, "--format", "json")
        assert result.exit_code == 0
        body = json.loads(result.output)
        assert body["lesion_class"] in ("normal", "atypical", "melanoma")
        assert body["advisory"] == (body["lesion_class"] != "normal")
        with Image.open(mask_out) as mask_img:
            assert mask_img.mode == "1"

    def test_analyze_table_output(self, runner, small_dataset, trained):
        image = str(small_dataset["root"] / "images" / "syn_000_normal.png")
        result = invoke(runner, "analyze", "--image", image, "--model", trained)
        assert result.exit_code == 0
        assert "class:" in result.output

    def test_analyze_uniform_image_exit_3(self, runner, trained, tmp_path):
        import numpy as np
        path = str(tmp_path / "uniform.png")
        Image.fromarray(np.full((128, 128, 3), 120, dtype=np.uint8)).save(path)
        result = runner.invoke(main, ["analyze", "--image", path, "--model", trained])
        assert result.exit_code == 3
        assert "NoLesionFound" in result.output

    def test_analyze_matches_server_response(self, runner, small_dataset, trained):
        from fastapi.testclient import TestClient
        from skinsafe.server import ServerConfig, create_app

        image_path = str(small_dataset["root"] / "images" / "syn_012_atypical.png")
        cli_result = invoke(runner, "analyze", "--image", image_path,
                            "--model", trained, "--format", "json")
        cli_body = json.loads(cli_result.output)

        config = ServerConfig(model_path=trained,
                              data_dir=str(small_dataset["root"] / "srv"))
        with TestClient(create_app(config)) as client:
            with open(image_path, "rb") as fh:
                resp = client.post("/api/v1/analyze",
                                   files={"image": ("x.png", fh.read(), "image/png")})
        assert resp.status_code == 200
        assert resp.json() == cli_body


def free_port():
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class TestServeCommand:
    def test_serve_healthz_and_clean_shutdown(self, small_dataset, trained_bundle,
                                              tmp_path):
        import httpx

        port = free_port()
        proc = subprocess.Popen(
            [sys.executable, "-m", "skinsafe", "serve",
             "--port", str(port), "--model", trained_bundle["model_path"],
             "--data-dir", str(tmp_path / "data")],
            stdout=subprocess.PIPE, stderr=subprocess.STDOUT)
        try:
            deadline = time.time() + 30
            body = None
            while time.time() < deadline:
                try:
                    body = httpx.get(f"http://127.0.0.1:{port}/healthz",
                                     timeout=1.0).json()
                    break
                except Exception:
                    time.sleep(0.2)
            assert body is not None, "server never became healthy"
            assert body["model_loaded"] is True
            proc.send_signal(signal.SIGINT)
            assert proc.wait(timeout=15) == 0
        finally:
            if proc.poll() is None:
                proc.kill()

    def test_serve_bad_model_path_nonzero_exit(self):
        result = subprocess.run(
            [sys.executable, "-m", "skinsafe", "serve",
             "--model", "/nonexistent/model.json", "--port", str(free_port())],
            capture_output=True, timeout=60)
        assert result.returncode != 0
