import csv
import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from equizeros.bases import build_basis
from equizeros.cli import main, read_basis_csv, read_coefficients
from equizeros.domains import Ellipse
from equizeros.ensembles import DistributionSpec, sample_coefficients


def write_coeffs(path, values):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "re", "im"])
        for k, v in enumerate(values):
            w.writerow([k, complex(v).real, complex(v).imag])


class TestSampleCoeffs:
    def test_csv_round_trip(self, tmp_path, capsys):
        out = tmp_path / "a.csv"
        assert main(["sample-coeffs", "--dist", "log-pareto", "--alpha", "0.5", "--n", "300",
                     "--seed", "7", "--out", str(out)]) == 0
        diag = json.loads(capsys.readouterr().out)
        assert diag["log_moment"] == "infinite" and diag["n"] == 300
        seq = read_coefficients(out)
        ref = sample_coefficients(DistributionSpec("log-pareto", 0.5), 300, 7)
        np.testing.assert_array_equal(seq.log_abs, ref.log_abs)
        np.testing.assert_allclose(seq.phase, ref.phase, atol=1e-15)
        assert diag["record_indices"][0] >= 1

    def test_diagnostics_file(self, tmp_path):
        diag = tmp_path / "d.json"
        main(["sample-coeffs", "--dist", "complex-gaussian", "--n", "50", "--seed", "1",
              "--out", str(tmp_path / "a.csv"), "--diagnostics", str(diag)])
        d = json.loads(diag.read_text())
        assert d["log_moment"] == "finite" and "gaps" in d

    def test_overflowing_moduli_survive(self, tmp_path):
        out = tmp_path / "a.csv"
        main(["sample-coeffs", "--dist", "log-pareto", "--alpha", "0.3", "--n", "2000", "--seed", "3",
              "--out", str(out), "--diagnostics", str(tmp_path / "d.json")])
        seq = read_coefficients(out)
        ref = sample_coefficients(DistributionSpec("log-pareto", 0.3), 2000, 3)
        np.testing.assert_array_equal(seq.log_abs, ref.log_abs)


class TestBuildBasis:
    def test_table_and_header(self, tmp_path):
        out = tmp_path / "b.csv"
        assert main(["build-basis", "--kind", "faber", "--nmax", "12", "--domain", "ellipse",
                     "--a", "2", "--b", "1", "--out", str(out)]) == 0
        table = read_basis_csv(out)
        np.testing.assert_array_equal(table, build_basis("faber", Ellipse(2, 1), 12).table)
        h = json.loads(out.with_suffix(".json").read_text())
        assert h["kind"] == "faber" and h["nmax"] == 12

    def test_custom_header_path(self, tmp_path):
        hdr = tmp_path / "h.json"
        main(["build-basis", "--kind", "bergman", "--nmax", "5", "--out", str(tmp_path / "b.csv"),
              "--header", str(hdr)])
        assert json.loads(hdr.read_text())["domain"]["kind"] == "disk"


class TestRoots:
    def test_shifted_monomial_example(self, tmp_path):
        # 5 * 0 + 2 (z - 1) + 3 (z^2 - 1) = 3 z^2 + 2 z - 5
        coeffs, basis, out = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "r.csv"
        write_coeffs(coeffs, [5, 2, 3])
        main(["build-basis", "--kind", "shifted-monomial", "--nmax", "2", "--out", str(basis)])
        assert main(["roots", "--coeffs", str(coeffs), "--basis", str(basis), "--out", str(out)]) == 0
        z = np.loadtxt(out, delimiter=",", skiprows=1)
        roots = np.sort_complex(z[:, 0] + 1j * z[:, 1])
        np.testing.assert_allclose(roots, [-5 / 3, 1], atol=1e-12)
        cert = json.loads(out.with_suffix(".json").read_text())
        assert cert["converged"] and cert["degree"] == 2

    def test_monomial_default(self, tmp_path):
        coeffs, out = tmp_path / "a.csv", tmp_path / "r.csv"
        write_coeffs(coeffs, [-8, 0, 0, 1])
        main(["roots", "--coeffs", str(coeffs), "--out", str(out), "--certificate", str(tmp_path / "c.json")])
        z = np.loadtxt(out, delimiter=",", skiprows=1)
        np.testing.assert_allclose(np.abs(z[:, 0] + 1j * z[:, 1]), 2, rtol=1e-12)

    def test_truncated_degree(self, tmp_path):
        coeffs, out = tmp_path / "a.csv", tmp_path / "r.csv"
        write_coeffs(coeffs, [-4, 0, 1, 5, 7])
        main(["roots", "--coeffs", str(coeffs), "--n", "2", "--out", str(out)])
        z = np.loadtxt(out, delimiter=",", skiprows=1)
        np.testing.assert_allclose(np.sort(z[:, 0]), [-2, 2], atol=1e-12)

    def test_nonconvergence_exit_code(self, tmp_path):
        coeffs = tmp_path / "a.csv"
        main(["sample-coeffs", "--dist", "complex-gaussian", "--n", "300", "--seed", "0",
              "--out", str(coeffs), "--diagnostics", str(tmp_path / "d.json")])
        assert main(["roots", "--coeffs", str(coeffs), "--max-iter", "1", "--out", str(tmp_path / "r.csv")]) == 3

    def test_indices_must_be_contiguous(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("index,re,im\n0,1,0\n2,1,0\n")
        with pytest.raises(ValueError):
            read_coefficients(p)


class TestExperiment:
    def config(self, tmp_path, **extra):
        cfg = {"distribution": {"kind": "complex-gaussian"}, "degrees": [16, 64], "trials": 4,
               "figures": False}
        cfg.update(extra)
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps(cfg))
        return p

    def test_pass_exit_code(self, tmp_path, capsys):
        cfg = self.config(tmp_path, thresholds={"discrepancy_at_max_degree": 0.5,
                                                "band_mass_at_max_degree": 0.5,
                                                "lognorm_max_dev_at_max_degree": 0.5})
        out = tmp_path / "run"
        assert main(["experiment", "--config", str(cfg), "--out", str(out), "--threads", "2"]) == 0
        assert "PASS" in capsys.readouterr().out
        assert (out / "trials.jsonl").exists()

    def test_fail_exit_code(self, tmp_path, capsys):
        cfg = self.config(tmp_path, thresholds={"discrepancy_at_max_degree": 0.0})
        assert main(["experiment", "--config", str(cfg), "--out", str(tmp_path / "run")]) == 1
        assert "FAIL  discrepancy_at_max_degree" in capsys.readouterr().out

    def test_abort_exit_code(self, tmp_path):
        cfg = self.config(tmp_path, degrees=[200], max_iter=1)
        assert main(["experiment", "--config", str(cfg), "--out", str(tmp_path / "run")]) == 2

    def test_save_zeros_flag(self, tmp_path):
        cfg = self.config(tmp_path)
        out = tmp_path / "run"
        main(["experiment", "--config", str(cfg), "--out", str(out), "--save-zeros", "--no-figures"])
        assert len(list(out.glob("zeros_*.csv"))) == 8
        assert not (out / "figures").exists()


@pytest.mark.skipif(shutil.which("equizeros") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["equizeros", "--help"], capture_output=True, text=True)
    assert r.returncode == 0
    for cmd in ("sample-coeffs", "build-basis", "roots", "experiment"):
        assert cmd in r.stdout


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "equizeros.cli", "roots", "--help"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "--coeffs" in r.stdout
