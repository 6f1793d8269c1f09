"""
Tests of the xigeo command line
"""
import json
import os

import mock
import pytest

from xigeo import cli, constants, numpy_helper, pandas_helper


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def _body(text):
    return json.loads(text)[constants.REPORT.BODY]


class TestAnalyzeSuite(object):
    """
    Unit Test Suite for xigeo analyze
    """

    def test_product_torus_report(self, capsys):
        code, out = _run(capsys, "analyze", "--family", "product-torus", "--a", "1", "--b", "2",
                         "--nu", "32", "--nv", "32")
        assert code == constants.EXIT_CODES.SUCCESS
        document = json.loads(out)
        assert document[constants.REPORT.METADATA]["provenance"]["family"] == constants.FAMILIES.PRODUCT_TORUS
        body = document[constants.REPORT.BODY]
        assert body["lagrangian"]
        assert body["xi"]["is_xi"]
        assert body["maslov"]["rounded_periods"] == [1, 1]
        assert body["xi"]["fitted"]["a"] == pytest.approx(1.0, abs=1e-8)
        assert body["pinching"]["conditions"]["c4"]["holds"] is False
        assert body["skipped"] == {}

    def test_file_input_gives_identical_body(self, capsys, tmp_path):
        surface = str(tmp_path / "surface.json")
        code, built = _run(capsys, "analyze", "--family", "product-ellipse", "--a1", "1", "--b1", "1.2",
                           "--nu", "32", "--nv", "32", "--save-surface", surface)
        assert code == constants.EXIT_CODES.SUCCESS
        code, loaded = _run(capsys, "analyze", "--input", surface)
        assert code == constants.EXIT_CODES.SUCCESS
        assert json.dumps(_body(built), indent=2) == json.dumps(_body(loaded), indent=2)
        assert json.loads(loaded)[constants.REPORT.METADATA]["provenance"]["source"] == surface

    def test_body_is_deterministic(self, tmp_path):
        first, second = str(tmp_path / "first.json"), str(tmp_path / "second.json")
        argv = ["analyze", "--family", "product-torus", "--a", "0.8", "--b", "1.3", "--nu", "16", "--nv", "16"]
        assert cli.main(argv + ["--output", first]) == constants.EXIT_CODES.SUCCESS
        assert cli.main(argv + ["--output", second]) == constants.EXIT_CODES.SUCCESS
        with open(first) as f1, open(second) as f2:
            assert _body(f1.read()) == _body(f2.read())

    def test_ellipse_product_skips_xi_identities(self, capsys):
        code, out = _run(capsys, "analyze", "--family", "product-ellipse", "--a1", "1", "--b1", "1.2",
                         "--nu", "64", "--nv", "64")
        assert code == constants.EXIT_CODES.SUCCESS
        body = _body(out)
        assert not body["xi"]["is_xi"]
        assert body["xi"]["fitted"] is None
        assert "fit" in body["skipped"]
        for identity in constants.IDENTITIES.XI_ONLY:
            assert body["identities"][identity]["residual"] is None
            assert body["identities"][identity]["reason"]
        assert body["identities"][constants.IDENTITIES.GAUSS]["passed"]

    def test_plot_data(self, capsys, tmp_path):
        plot = str(tmp_path / "plot.csv")
        code, _ = _run(capsys, "analyze", "--family", "product-torus", "--nu", "16", "--nv", "16",
                       "--emit-plot-data", plot)
        assert code == constants.EXIT_CODES.SUCCESS
        df = pandas_helper.read_csv(plot)
        assert list(df.columns) == ["u", "v", "field", "value"]
        assert len(df) == 4 * 16 * 16
        assert set(df["field"]) == {"h2", "H2", "K", "P"}

    def test_non_lagrangian_input(self, capsys, tmp_path, non_lagrangian):
        surface = str(tmp_path / "non_lagrangian.json")
        numpy_helper.save(surface, non_lagrangian)
        code, out = _run(capsys, "analyze", "--input", surface)
        assert code == constants.EXIT_CODES.SUCCESS
        body = _body(out)
        assert not body["lagrangian"]
        assert body["xi"] is None and body["maslov"] is None
        code, _ = _run(capsys, "analyze", "--input", surface, "--require-lagrangian")
        assert code == constants.EXIT_CODES.NUMERIC

    def test_malformed_surface_file(self, capsys, resources):
        code, out = _run(capsys, "analyze", "--input", os.path.join(resources, "malformed_surface.json"))
        assert code == constants.EXIT_CODES.USAGE
        assert out == ""

    @pytest.mark.parametrize("argv", [["analyze"],
                                      ["analyze", "--family", "product-torus", "--input", "surface.json"],
                                      ["analyze", "--family", "klein-bottle"],
                                      ["analyze", "--family", "product-torus", "--a", "-1"],
                                      ["analyze", "--family", "product-torus", "--nu", "4"],
                                      ["analyze", "--family", "product-torus", "--tol-xi", "0"],
                                      []])
    def test_usage_errors(self, capsys, argv):
        code, _ = _run(capsys, *argv)
        assert code == constants.EXIT_CODES.USAGE

    def test_version(self, capsys):
        assert cli.main(["--version"]) == constants.EXIT_CODES.SUCCESS


class TestScanSuite(object):
    """
    Unit Test Suite for xigeo scan
    """

    def test_scan_csv(self, tmp_path):
        output = str(tmp_path / "scan.csv")
        code = cli.main(["scan", "--a", "0.5:1.5:3", "--b", "0.5:1.5:3", "--output", output])
        assert code == constants.EXIT_CODES.SUCCESS
        with open(output, newline="") as f:
            text = f.read()
        assert text.splitlines()[0] == ",".join(constants.CSV.SCAN_COLUMNS)
        assert "\r" not in text
        df = pandas_helper.read_csv(output)
        assert len(df) == 9
        assert list(df["a"][:3]) == [0.5, 0.5, 0.5]
        assert list(df["b"][:3]) == [0.5, 1.0, 1.5]
        assert (df["c4"] == df["region"]).all()
        assert (abs(df["P_max"]) <= 1e-8).all()

    def test_scan_uses_tolerance_flags(self, tmp_path):
        output = str(tmp_path / "scan.csv")
        with mock.patch.object(cli.xi, "xi_estimate", wraps=cli.xi.xi_estimate) as estimate:
            code = cli.main(["scan", "--a", "1:2:2", "--b", "1:1:1", "--nu", "16", "--nv", "16",
                             "--tol-xi", "1e-3", "--tol-lagrangian", "1e-7", "--output", output])
        assert code == constants.EXIT_CODES.SUCCESS
        assert estimate.call_count == 2
        tolerances = estimate.call_args[0][2]
        assert tolerances.xi == 1e-3
        assert tolerances.lagrangian == 1e-7

    def test_scan_rejects_bad_tolerance(self, capsys):
        code, _ = _run(capsys, "scan", "--a", "1:2:2", "--b", "1:2:2", "--tol-lagrangian", "-1")
        assert code == constants.EXIT_CODES.USAGE

    def test_parse_range(self):
        assert list(cli.parse_range("1:2:3", "a")) == [1.0, 1.5, 2.0]
        assert list(cli.parse_range("0.7:3:1", "a")) == [0.7]

    @pytest.mark.parametrize("argv", [["scan", "--a", "1:2", "--b", "1:2:2"],
                                      ["scan", "--a", "1:2:0", "--b", "1:2:2"],
                                      ["scan", "--a", "1:x:2", "--b", "1:2:2"],
                                      ["scan", "--family", "product-ellipse", "--a", "1:2:2", "--b", "1:2:2"]])
    def test_scan_usage_errors(self, capsys, argv):
        code, _ = _run(capsys, *argv)
        assert code == constants.EXIT_CODES.USAGE


class TestCurveSuite(object):
    """
    Unit Test Suite for xigeo curve
    """

    def test_unit_circle(self, capsys, tmp_path):
        samples = str(tmp_path / "curve.csv")
        code, out = _run(capsys, "curve", "--lambda", "0", "--bracket", "0.5:1.5", "--curve-output", samples)
        assert code == constants.EXIT_CODES.SUCCESS
        body = _body(out)
        assert body["status"] == constants.REPORT.STATUS_FOUND
        assert body["rotation"] == "1/1"
        assert body["r0"] == pytest.approx(1.0, abs=1e-10)
        assert body["lambda_residual"] <= 1e-6
        assert body["product"] is None
        df = pandas_helper.read_csv(samples)
        assert list(df.columns) == ["s", "x", "y", "tx", "ty", "k"]
        assert len(df) == constants.GRID.DEFAULT_SAMPLES

    def test_not_found_is_reported(self, capsys):
        code, out = _run(capsys, "curve", "--lambda", "0", "--bracket", "2:3", "--product-with-circle", "1")
        assert code == constants.EXIT_CODES.SUCCESS
        body = _body(out)
        assert body["status"] == constants.REPORT.STATUS_NOT_FOUND
        assert body["r0"] is None
        assert body["skipped"]["product"]

    def test_product_with_circle(self, capsys, tmp_path):
        surface = str(tmp_path / "product.json")
        code, out = _run(capsys, "curve", "--lambda", "-1.5", "--bracket", "1:3", "--samples", "32", "--nv", "32",
                         "--product-with-circle", "1", "--surface-output", surface)
        assert code == constants.EXIT_CODES.SUCCESS
        product = _body(out)["product"]
        assert product["xi"]["is_xi"]
        assert product["certification_residual"] <= 1e-6
        assert numpy_helper.load(surface).spec.nu == 32

    def test_bad_bracket(self, capsys):
        code, _ = _run(capsys, "curve", "--lambda", "0", "--bracket", "1.5")
        assert code == constants.EXIT_CODES.USAGE

    @pytest.mark.parametrize("rotation", ["a/b", "1.5/2", "1/", "2/4"])
    def test_bad_rotation(self, capsys, rotation):
        code, out = _run(capsys, "curve", "--lambda", "0", "--rotation", rotation, "--bracket", "0.5:1.5")
        assert code == constants.EXIT_CODES.USAGE
        assert out == ""


class TestVerifySuite(object):
    """
    Unit Test Suite for xigeo verify
    """

    def test_builtin_suite_passes(self, capsys):
        code, out = _run(capsys, "verify")
        assert code == constants.EXIT_CODES.SUCCESS
        body = _body(out)
        assert body["passed"]
        assert len(body["surfaces"]) == len(cli.verification_suite(16))

    def test_single_surface(self, capsys):
        code, out = _run(capsys, "verify", "--family", "product-torus", "--a", "1", "--b", "2",
                         "--nu", "32", "--nv", "32")
        assert code == constants.EXIT_CODES.SUCCESS
        assert _body(out)["surfaces"][0]["failures"] == []

    def test_failure_exit_code(self, capsys):
        with mock.patch.object(cli, "_failures", return_value=[constants.IDENTITIES.GAUSS]):
            code, out = _run(capsys, "verify", "--family", "product-torus", "--nu", "16", "--nv", "16")
        assert code == constants.EXIT_CODES.VERIFICATION
        body = _body(out)
        assert not body["passed"]
        assert body["surfaces"][0]["failures"] == [constants.IDENTITIES.GAUSS]
