"""Command-line interface tests, driven through main()."""

from __future__ import annotations

import json

import numpy as np
import pytest

from hcontour import BinaryImage, GrayImage, write_pgm
from hcontour.cli import main


@pytest.fixture
def rect_pgm(tmp_path):
    """Solid white rectangle from (10,5) to (50,20) on a 64x32 black field."""
    pixels = np.zeros((32, 64), dtype=np.uint8)
    pixels[5:21, 10:51] = 255
    path = tmp_path / "rect.pgm"
    path.write_bytes(write_pgm(GrayImage(pixels)))
    return path


@pytest.fixture
def black_pgm(tmp_path):
    path = tmp_path / "black.pgm"
    path.write_bytes(write_pgm(GrayImage(np.zeros((32, 32), dtype=np.uint8))))
    return path


class TestDetect:
    def test_direct_on_solid_rectangle(self, rect_pgm, capsys):
        assert main(["detect", "--algo", "direct", "--input", str(rect_pgm)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["algorithm"] == "direct"
        assert payload["closed"] is True
        corners = {(10, 5), (50, 5), (10, 20), (50, 20)}
        assert corners <= {tuple(p) for p in payload["points"]}
        assert {x for x, _ in payload["points"]} == {10, 50}

    def test_defaults_only_input_required(self, rect_pgm, capsys):
        assert main(["detect", "--input", str(rect_pgm)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["params"]["run_limit"] == 20
        assert payload["params"]["min_width"] == 10

    def test_pitch_sets_run_limit_default(self, rect_pgm, capsys):
        assert main(["detect", "--input", str(rect_pgm), "--pitch", "7"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["params"]["run_limit"] == 14

    def test_sliding_on_all_black_exits_1(self, black_pgm, capsys):
        code = main(["detect", "--algo", "sliding", "--input", str(black_pgm)])
        assert code == 1
        assert "no contours found" in capsys.readouterr().err

    def test_direct_on_all_black_exits_1(self, black_pgm, capsys):
        code = main(["detect", "--algo", "direct", "--input", str(black_pgm)])
        assert code == 1
        assert "no contour points" in capsys.readouterr().err

    def test_oversized_step_warns_but_runs(self, rect_pgm, capsys):
        code = main(["detect", "--algo", "sliding", "--input", str(rect_pgm),
                     "--step", "20", "--core", "8"])
        assert code == 0
        assert "exceeds 2*core" in capsys.readouterr().err

    def test_irrelevant_params_warn(self, rect_pgm, capsys):
        assert main(["detect", "--algo", "direct", "--input", str(rect_pgm),
                     "--core", "4"]) == 0
        assert "--core ignored" in capsys.readouterr().err

    def test_fixed_bin_threshold(self, rect_pgm, capsys):
        assert main(["detect", "--input", str(rect_pgm), "--bin-threshold", "200"]) == 0
        assert json.loads(capsys.readouterr().out)["params"]["bin_threshold"] == 200

    def test_bad_threshold_exits_2(self, rect_pgm, capsys):
        assert main(["detect", "--input", str(rect_pgm), "--bin-threshold", "300"]) == 2

    def test_bad_run_limit_names_flag(self, rect_pgm, capsys):
        assert main(["detect", "--input", str(rect_pgm), "--run-limit", "0"]) == 2
        assert "--run-limit" in capsys.readouterr().err

    def test_missing_file_exits_2(self, tmp_path, capsys):
        assert main(["detect", "--input", str(tmp_path / "nope.pgm")]) == 2

    def test_malformed_pgm_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.pgm"
        bad.write_bytes(b"P5\n4 4\n255\n\x00")
        assert main(["detect", "--input", str(bad)]) == 2
        assert "truncated" in capsys.readouterr().err

    def test_json_and_overlay_outputs(self, rect_pgm, tmp_path, capsys):
        out_json = tmp_path / "contour.json"
        out_svg = tmp_path / "overlay.svg"
        code = main(["detect", "--input", str(rect_pgm),
                     "--json", str(out_json), "--overlay", str(out_svg)])
        assert code == 0
        payload = json.loads(out_json.read_text())
        assert payload["closed"] is True
        svg = out_svg.read_text()
        assert svg.startswith("<svg")
        assert "data:image/x-portable-graymap;base64," in svg
        assert 'stroke="red"' in svg

    def test_overlay_by_reference(self, rect_pgm, tmp_path):
        out_svg = tmp_path / "ref.svg"
        assert main(["detect", "--input", str(rect_pgm),
                     "--overlay", str(out_svg), "--overlay-ref"]) == 0
        svg = out_svg.read_text()
        assert "base64" not in svg
        assert "rect.pgm" in svg


class TestSynth:
    def test_deterministic_byte_identical(self, tmp_path):
        args = ["synth", "--shape", "rect", "--size", "200x150", "--pitch", "16",
                "--specks", "20", "--seed", "7"]
        a_img, a_mask = tmp_path / "a.pgm", tmp_path / "am.pgm"
        b_img, b_mask = tmp_path / "b.pgm", tmp_path / "bm.pgm"
        assert main(args + ["--image", str(a_img), "--mask", str(a_mask)]) == 0
        assert main(args + ["--image", str(b_img), "--mask", str(b_mask)]) == 0
        assert a_img.read_bytes() == b_img.read_bytes()
        assert a_mask.read_bytes() == b_mask.read_bytes()

    def test_c_shape_mask_has_split_row(self, tmp_path):
        from hcontour import read_pgm

        mask_path = tmp_path / "m.pgm"
        assert main(["synth", "--shape", "c-shape", "--size", "200x150",
                     "--image", str(tmp_path / "i.pgm"), "--mask", str(mask_path)]) == 0
        mask = read_pgm(mask_path.read_bytes())
        split_rows = 0
        for row in mask.pixels:
            whites = np.flatnonzero(row)
            if whites.size and (np.diff(whites) > 1).any():
                split_rows += 1
        assert split_rows > 0

    def test_speck_count_exact(self, tmp_path):
        from hcontour import read_pgm
        from tests.test_synthbench import count_isolated_white

        img_path, mask_path = tmp_path / "i.pgm", tmp_path / "m.pgm"
        assert main(["synth", "--shape", "rect", "--size", "160x120", "--pitch", "14",
                     "--specks", "50", "--seed", "3",
                     "--image", str(img_path), "--mask", str(mask_path)]) == 0
        image = read_pgm(img_path.read_bytes())
        mask = read_pgm(mask_path.read_bytes())
        outside = np.where(mask.pixels == 0, image.pixels, 0)
        assert count_isolated_white(outside, 215) == 50

    def test_polygon_file(self, tmp_path):
        poly = tmp_path / "tri.json"
        poly.write_text("[[10, 10], [80, 12], [40, 70]]")
        assert main(["synth", "--shape", str(poly), "--size", "100x90",
                     "--image", str(tmp_path / "i.pgm"), "--mask", str(tmp_path / "m.pgm")]) == 0

    def test_invalid_polygon_exits_2(self, tmp_path, capsys):
        poly = tmp_path / "bow.json"
        poly.write_text("[[0, 0], [50, 50], [50, 0], [0, 50]]")
        assert main(["synth", "--shape", str(poly), "--size", "100x90",
                     "--image", str(tmp_path / "i.pgm"), "--mask", str(tmp_path / "m.pgm")]) == 2
        assert "simple" in capsys.readouterr().err


class TestEval:
    def test_perfect_match(self, tmp_path, capsys):
        mask = BinaryImage.from_mask(np.ones((20, 20), dtype=bool))
        truth = tmp_path / "t.pgm"
        truth.write_bytes(write_pgm(mask))
        contour = tmp_path / "c.json"
        contour.write_text(json.dumps(
            {"algorithm": "direct", "points": [[0, 0], [19, 0], [19, 19], [0, 19]],
             "closed": True, "params": {}}))
        assert main(["eval", "--json", str(contour), "--input", str(truth)]) == 0
        assert capsys.readouterr().out.strip() == "1.0000"

    def test_empty_area_contour(self, tmp_path, capsys):
        mask = np.zeros((20, 20), dtype=bool)
        mask[5:15, 5:15] = True
        truth = tmp_path / "t.pgm"
        truth.write_bytes(write_pgm(BinaryImage.from_mask(mask)))
        contour = tmp_path / "c.json"
        contour.write_text(json.dumps({"points": [[0, 0], [1, 0]]}))
        assert main(["eval", "--json", str(contour), "--input", str(truth)]) == 0
        assert capsys.readouterr().out.strip() == "0.0000"

    def test_half_overlap(self, tmp_path, capsys):
        truth = tmp_path / "t.pgm"
        truth.write_bytes(write_pgm(BinaryImage.from_mask(np.ones((10, 10), dtype=bool))))
        contour = tmp_path / "c.json"
        contour.write_text(json.dumps({"points": [[0, 0], [4, 0], [4, 9], [0, 9]]}))
        assert main(["eval", "--json", str(contour), "--input", str(truth)]) == 0
        assert capsys.readouterr().out.strip() == "0.5000"


class TestBench:
    def test_default_grid_covers_both_cases(self, tmp_path, capsys):
        out = tmp_path / "bench"
        assert main(["bench", "--out-dir", str(out)]) == 0
        text = capsys.readouterr().out
        assert "rect" in text and "c-shape" in text
        assert (out / "rect.json").exists() and (out / "c-shape.json").exists()
        assert (out / "summary.txt").exists()

    def test_c_shape_case_sliding_beats_direct(self, tmp_path):
        out = tmp_path / "bench"
        assert main(["bench", "--cases", "c-shape", "--out-dir", str(out)]) == 0
        payload = json.loads((out / "c-shape.json").read_text())
        assert payload["sliding"]["iou"] > payload["direct"]["iou"]

    def test_reports_parse_and_carry_timings(self, tmp_path):
        out = tmp_path / "bench"
        assert main(["bench", "--cases", "rect", "--out-dir", str(out)]) == 0
        payload = json.loads((out / "rect.json").read_text())
        assert payload["direct"]["ms"] > 0.0
        assert payload["sliding"]["ms"] > 0.0
        assert payload["direct"]["error"] is None

    def test_unknown_case_exits_2(self, tmp_path, capsys):
        assert main(["bench", "--cases", "pentagon", "--out-dir", str(tmp_path)]) == 2


class TestGoldenStability:
    def test_detect_outputs_byte_identical_across_runs(self, rect_pgm, tmp_path):
        outputs = []
        for run in ("one", "two"):
            out_json = tmp_path / f"{run}.json"
            out_svg = tmp_path / f"{run}.svg"
            assert main(["detect", "--input", str(rect_pgm),
                         "--json", str(out_json), "--overlay", str(out_svg)]) == 0
            outputs.append((out_json.read_bytes(), out_svg.read_bytes()))
        assert outputs[0] == outputs[1]

    def test_usage_error_exits_2(self, capsys):
        assert main(["detect"]) == 2  # --input is required
        assert main(["frobnicate"]) == 2
