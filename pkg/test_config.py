"""Tests for configuration loading, settings, result writers and run validation."""

import json
import math

import numpy as np
import pandas as pd
import pytest

from xwave_quant.data.config_loader import ConfigLoader, config_hash, load_run_config, load_spectrum_csv
from xwave_quant.data.writers import field_frame, write_csv, write_summary
from xwave_quant.errors import ConfigError
from xwave_quant.evaluation.accuracy_validator import AccuracyValidator, QualityLevel, validate_run
from xwave_quant.models.basis import QuadratureKind
from xwave_quant.models.config import RunConfig, Tolerances
from xwave_quant.models.field import FieldEnvelope, SpectrumInterpolation, VelocityCoefficients
from xwave_quant.models.medium import UnitSystem
from xwave_quant.settings import get_settings, reset_settings


def write_json(tmp_path, data):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(data))
    return path


def write_spectrum(path, kperp, kz, re):
    pd.DataFrame({"kperp": kperp, "kz": kz, "re": re, "im": 0.0}).to_csv(path, index=False)
    return path


class TestConfigLoader:
    def test_defaults_without_file(self):
        loader = ConfigLoader()
        assert loader.config == RunConfig()
        params = loader.medium()
        assert (params.k, params.omega1, params.omega2) == (1.0, 1.0, 1.0)
        cfg = loader.basis(params)
        assert cfg.alpha_rule.kind == QuadratureKind.GAUSS_LAGUERRE
        assert cfg.v_grid.v_max == pytest.approx(0.2)

    def test_dispersive_medium(self, tmp_path):
        path = write_json(tmp_path, {"medium": {"omega": 2.0, "k": 3.0, "omega1": 0.5, "omega2": 0.1}})
        params = ConfigLoader(path).medium()
        assert params.k == 3.0
        assert params.omega2 == 0.1

    def test_partial_dispersion_is_rejected(self, tmp_path):
        with pytest.raises(ConfigError) as excinfo:
            ConfigLoader(write_json(tmp_path, {"medium": {"k": 3.0}}))
        assert any(line.startswith("medium") for line in excinfo.value.diagnostics)

    def test_unreadable_and_malformed_files(self, tmp_path):
        with pytest.raises(ConfigError):
            ConfigLoader(tmp_path / "absent.json")
        broken = tmp_path / "broken.json"
        broken.write_text("[1, 2")
        with pytest.raises(ConfigError) as excinfo:
            ConfigLoader(broken)
        assert "line 1" in excinfo.value.diagnostics[0]
        listing = tmp_path / "list.json"
        listing.write_text("[]")
        with pytest.raises(ConfigError):
            ConfigLoader(listing)

    def test_natural_units_flag_overrides_file(self, tmp_path):
        path = write_json(tmp_path, {"units": {"system": "SI"}})
        assert load_run_config(path).units.system == UnitSystem.SI
        assert load_run_config(path, natural_units=True).units.system == UnitSystem.NATURAL

    def test_gauss_legendre_window_and_odd_grid(self, tmp_path):
        path = write_json(tmp_path, {"basis": {"delta": 2.0, "alpha_rule": "gauss-legendre", "v_points": 8}})
        cfg = ConfigLoader(path).basis()
        assert cfg.alpha_rule.upper == pytest.approx(20.0)
        assert cfg.v_grid.points == 9

    def test_field_orders_must_lie_in_basis(self, tmp_path):
        with pytest.raises(ConfigError):
            ConfigLoader(write_json(tmp_path, {"basis": {"p_max": 2, "field_orders": [3]}}))

    def test_opa_defaults_follow_mismatch(self):
        loader = ConfigLoader()
        cfg = loader.opa()
        assert cfg.uv_grid.v_max == pytest.approx(5e-6)
        slope = 0.5 / ((1.0 + cfg.rho) * cfg.omega2)
        # first sinc zero at an eighth of v_max
        assert 2.0 * math.pi / (slope * cfg.t) == pytest.approx(cfg.uv_grid.v_max / 8.0)
        times = loader.width_times(cfg)
        assert times == [cfg.t, 2 * cfg.t, 4 * cfg.t, 8 * cfg.t]

    def test_opa_bases_use_their_own_medium(self, tmp_path, monkeypatch):
        loader = ConfigLoader(write_json(tmp_path, {"opa": {"delta1": 1.0, "delta2": 2.0}}))
        built = []
        original = ConfigLoader.basis

        def recording(self, params=None, section=None):
            built.append((params, section.delta))
            return original(self, params, section)

        monkeypatch.setattr(ConfigLoader, "basis", recording)
        cfg = loader.opa()
        assert built == [(cfg.field1, 1.0), (cfg.field2, 2.0)]
        assert cfg.field2.k == pytest.approx(1.9)
        assert cfg.basis1.delta == 1.0
        assert cfg.basis2.delta == 2.0

    def test_opa_pairs_and_times_are_validated(self, tmp_path):
        with pytest.raises(ConfigError):
            ConfigLoader(write_json(tmp_path, {"opa": {"pairs": [[3, 0]]}}))
        with pytest.raises(ConfigError):
            ConfigLoader(write_json(tmp_path, {"opa": {"times": [1.0]}}))
        with pytest.raises(ConfigError):
            ConfigLoader(write_json(tmp_path, {"opa": {"field1": {"omega": 1.0}}}))

    def test_spectrum_path_resolves_against_config_directory(self, tmp_path):
        path = write_json(tmp_path, {"propagate": {"spectrum_file": "signal.csv"}})
        assert ConfigLoader(path).spectrum_path() == tmp_path / "signal.csv"
        with pytest.raises(ConfigError):
            ConfigLoader().spectrum_path()

    def test_negative_times_are_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            ConfigLoader(write_json(tmp_path, {"propagate": {"times": [0.0, -1.0]}}))


class TestConfigHash:
    def test_hash_is_stable_and_short(self):
        first = config_hash(RunConfig())
        assert len(first) == 16
        assert all(character in "0123456789abcdef" for character in first)
        assert config_hash(RunConfig()) == first

    def test_hash_ignores_spelling_of_defaults(self, tmp_path):
        explicit = load_run_config(write_json(tmp_path, {"basis": {"p_max": 24}}))
        assert config_hash(explicit) == config_hash(RunConfig())
        changed = load_run_config(write_json(tmp_path, {"basis": {"p_max": 23}}))
        assert config_hash(changed) != config_hash(RunConfig())


class TestSpectrumCsv:
    def test_full_grid_in_any_row_order(self, tmp_path):
        path = write_spectrum(tmp_path / "s.csv", [1.0, 0.0, 1.0, 0.0], [0.5, 0.5, -0.5, -0.5], [4.0, 2.0, 3.0, 1.0])
        spectrum = load_spectrum_csv(path)
        np.testing.assert_array_equal(spectrum.kperp_grid, [0.0, 1.0])
        np.testing.assert_array_equal(spectrum.kz_grid, [-0.5, 0.5])
        np.testing.assert_array_equal(spectrum.values.real, [[1.0, 2.0], [3.0, 4.0]])

    def test_comment_lines_are_skipped(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("# sampled spectrum\nkperp,kz,re,im\n0,0,1,0\n0,1,1,0\n1,0,1,0\n1,1,1,1\n")
        assert load_spectrum_csv(path).values[1, 1] == 1 + 1j

    def test_malformed_spectra(self, tmp_path):
        with pytest.raises(ConfigError):
            load_spectrum_csv(tmp_path / "missing.csv")

        no_im = tmp_path / "no_im.csv"
        pd.DataFrame({"kperp": [0.0], "kz": [0.0], "re": [1.0]}).to_csv(no_im, index=False)
        with pytest.raises(ConfigError):
            load_spectrum_csv(no_im)

        duplicate = write_spectrum(tmp_path / "dup.csv", [0.0, 0.0, 1.0, 1.0], [0.0, 0.0, 0.0, 1.0], 1.0)
        with pytest.raises(ConfigError):
            load_spectrum_csv(duplicate)

        ragged = write_spectrum(tmp_path / "ragged.csv", [0.0, 0.0, 1.0], [0.0, 1.0, 0.0], 1.0)
        with pytest.raises(ConfigError):
            load_spectrum_csv(ragged)

        negative = write_spectrum(tmp_path / "neg.csv", [-1.0, -1.0, 1.0, 1.0], [0.0, 1.0, 0.0, 1.0], 1.0)
        with pytest.raises(ConfigError):
            load_spectrum_csv(negative)

    def test_cubic_interpolation_of_smooth_spectrum(self, tmp_path):
        kperp, kz = np.meshgrid(np.linspace(0.0, 2.0, 21), np.linspace(-1.0, 1.0, 21), indexing="ij")
        path = write_spectrum(tmp_path / "smooth.csv", kperp.ravel(), kz.ravel(), np.exp(-(kperp + kz**2)).ravel())
        points = (np.array([0.33, 1.27, 1.91]), np.array([-0.61, 0.05, 0.77]))
        exact = np.exp(-(points[0] + points[1] ** 2))
        linear, _ = load_spectrum_csv(path).evaluate(*points)
        cubic, _ = load_spectrum_csv(path, interpolation=SpectrumInterpolation.CUBIC).evaluate(*points)
        assert np.max(np.abs(cubic - exact)) < 1e-4
        assert np.max(np.abs(cubic - exact)) < 0.1 * np.max(np.abs(linear - exact))

    def test_cubic_interpolation_needs_four_points(self, tmp_path):
        small = write_spectrum(tmp_path / "small.csv", [0.0, 0.0, 1.0, 1.0], [0.0, 1.0, 0.0, 1.0], 1.0)
        with pytest.raises(ConfigError):
            load_spectrum_csv(small, interpolation=SpectrumInterpolation.CUBIC)

    def test_interpolation_is_read_from_config(self, tmp_path):
        assert ConfigLoader().config.propagate.interpolation == SpectrumInterpolation.LINEAR
        path = write_json(tmp_path, {"propagate": {"interpolation": "cubic"}})
        assert ConfigLoader(path).config.propagate.interpolation == SpectrumInterpolation.CUBIC
        with pytest.raises(ConfigError):
            ConfigLoader(write_json(tmp_path, {"propagate": {"interpolation": "quintic"}}))


class TestSettings:
    def test_thread_count_from_environment(self, monkeypatch):
        monkeypatch.setenv("XWAVE_THREADS", "3")
        reset_settings()
        assert get_settings().threads == 3

    @pytest.mark.parametrize("value", ["x", "0", "-2"])
    def test_invalid_thread_count(self, monkeypatch, value):
        monkeypatch.setenv("XWAVE_THREADS", value)
        reset_settings()
        with pytest.raises(ConfigError):
            get_settings()

    def test_settings_are_cached(self):
        assert get_settings() is get_settings()


class TestWriters:
    def test_csv_has_provenance_header(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", pd.DataFrame({"x": [0.1, 1.0 / 3.0]}), "0123456789abcdef")
        lines = path.read_text().splitlines()
        assert lines[0] == "# xwave_quant 1.0.0 config_hash=0123456789abcdef"
        assert lines[1] == "x"
        assert float(lines[3]) == 1.0 / 3.0

    def test_field_frame_layout(self):
        field = FieldEnvelope(
            r_grid=np.array([0.0, 1.0]), zeta_grid=np.array([-1.0, 0.0, 1.0]),
            values=np.arange(6).reshape(2, 3) * (1 + 2j),
        )
        frame = field_frame(field)
        assert list(frame.columns) == ["r", "zeta", "re", "im"]
        assert frame["zeta"].tolist() == [-1.0, 0.0, 1.0, -1.0, 0.0, 1.0]
        assert frame["im"].tolist() == [0.0, 2.0, 4.0, 6.0, 8.0, 10.0]

    def test_summary_replaces_non_finite_numbers(self, tmp_path):
        path = write_summary(tmp_path / "summary.json", {"b": math.nan, "a": np.float64(1.5), "n": np.int64(2)})
        assert json.loads(path.read_text()) == {"a": 1.5, "b": None, "n": 2}
        assert path.read_text().index('"a"') < path.read_text().index('"b"')


class TestAccuracyValidator:
    def test_exact_overlaps_pass(self, medium):
        norm = medium.k / (4.0 * math.pi**2 * medium.omega1)
        assert AccuracyValidator().check_orthonormality(norm * np.eye(4), medium) == []

    def test_grading_levels(self, medium):
        validator = AccuracyValidator(Tolerances(discrepancy=1e-6, energy_drift=1e-8))
        rows = [
            {"t": 0.0, "l2_discrepancy": 1e-9, "energy_drift_direct": 0.0, "energy_drift_xwave": 0.0},
            {"t": 1.0, "l2_discrepancy": 5e-7, "energy_drift_direct": 0.0, "energy_drift_xwave": math.nan},
        ]
        discrepancy = validator.check_discrepancy(rows)
        assert [violation.level for violation in discrepancy] == [QualityLevel.CAUTION]
        drift = validator.check_energy_drift(rows)
        assert [violation.level for violation in drift] == [QualityLevel.FAILURE]
        assert str(drift[0]).startswith("FAILURE: energy_drift")

    def test_validate_run_summary(self, medium):
        coefficients = VelocityCoefficients(v_grid=np.array([-1.0, 0.0, 1.0]), coeffs=np.zeros((1, 3)), residual=0.3)
        result = validate_run(Tolerances(), coefficients=coefficients, regime_ratio=2.0)
        assert result["passed"]
        assert result["level"] == "caution"
        assert result["violation_count"] == 2

        norm = medium.k / (4.0 * math.pi**2 * medium.omega1)
        failed = validate_run(Tolerances(), params=medium, orthonormality=norm * (np.eye(3) + 1e-3))
        assert not failed["passed"]
        assert failed["level"] == "failure"

        clean = validate_run(Tolerances())
        assert clean == {"passed": True, "level": "ok", "violations": [], "violation_count": 0}
