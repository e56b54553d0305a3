import json

import numpy as np
import pytest

from qwalk_nm.errors import ConfigError, IntegrityError
from qwalk_nm.reporting import (
    audit_manifest,
    format_cell,
    require_clean_audit,
    sha256_of,
    write_csv,
    write_json,
    write_manifest,
)


class TestFormatting:
    def test_floats_round_trip_shortest(self):
        assert format_cell(0.1) == "0.1"
        assert format_cell(1.0) == "1.0"
        assert format_cell(2.675000000000001) == "2.675000000000001"

    def test_numpy_scalars_are_stripped(self):
        assert format_cell(np.float64(0.25)) == "0.25"

    def test_bools_and_ints(self):
        assert format_cell(True) == "true"
        assert format_cell(False) == "false"
        assert format_cell(42) == "42"


class TestCsv:
    def test_unix_line_ends_exactly(self, tmp_path):
        path = tmp_path / "t.csv"
        write_csv(str(path), ["a", "b"], [(1, 0.5), (2, 0.25)])
        raw = path.read_bytes()
        assert raw == b"a,b\n1,0.5\n2,0.25\n"
        assert b"\r" not in raw

    def test_identical_rows_identical_bytes(self, tmp_path):
        rows = [(i, float(i) / 7.0) for i in range(50)]
        write_csv(str(tmp_path / "x.csv"), ["i", "v"], rows)
        write_csv(str(tmp_path / "y.csv"), ["i", "v"], rows)
        assert (tmp_path / "x.csv").read_bytes() == (tmp_path / "y.csv").read_bytes()


class TestManifest:
    def make_run(self, tmp_path):
        write_csv(str(tmp_path / "data.csv"), ["v"], [(1,), (2,)])
        write_manifest(str(tmp_path), "walk", {"steps": 2, "rate": 0.125},
                       {"noise_timing": "stepwise"}, 0.01, ["data.csv"])
        return tmp_path

    def test_clean_audit(self, tmp_path):
        run = self.make_run(tmp_path)
        assert audit_manifest(str(run)) == []
        require_clean_audit(str(run))

    def test_config_round_trips_losslessly(self, tmp_path):
        run = self.make_run(tmp_path)
        manifest = json.loads((run / "manifest.json").read_text())
        assert manifest["config"] == {"steps": 2, "rate": 0.125}
        assert manifest["schema_version"] == 1
        assert manifest["files"]["data.csv"]["sha256"] == sha256_of(str(run / "data.csv"))

    def test_tamper_detected(self, tmp_path):
        run = self.make_run(tmp_path)
        with open(run / "data.csv", "a") as fh:
            fh.write("3\n")
        problems = audit_manifest(str(run))
        assert problems and "data.csv" in problems[0]
        with pytest.raises(IntegrityError):
            require_clean_audit(str(run))

    def test_missing_file_detected(self, tmp_path):
        run = self.make_run(tmp_path)
        (run / "data.csv").unlink()
        assert audit_manifest(str(run)) == ["data.csv: missing"]

    def test_missing_manifest_is_config_error(self, tmp_path):
        with pytest.raises(ConfigError):
            audit_manifest(str(tmp_path))

    def test_json_floats_shortest_round_trip(self, tmp_path):
        write_json(str(tmp_path / "x.json"), {"v": 0.1, "w": [1e-9, 2.5]})
        text = (tmp_path / "x.json").read_text()
        assert "0.1" in text and "1e-09" in text
        assert json.loads(text) == {"v": 0.1, "w": [1e-9, 2.5]}
