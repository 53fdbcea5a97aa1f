"""
Unit tests for session config ingestion.

Key Concepts Demonstrated:
- Schema violations reported with a JSON path
- Syntax errors reported with line and column
- Shipped configs loading into the expected mathematical objects
"""

from __future__ import annotations

import copy
import json

import pytest

from services.twist.twist_app.cli.session import load_session, read_document, session_from_document
from services.twist.twist_app.errors import ConfigError, DatumError

pytestmark = pytest.mark.unit

E1_DOCUMENT = {
    "name": "e1",
    "group": {"cyclic": 4},
    "datum": {
        "g": [2],
        "chi": [["1", "z (conductor 4)", "-1", "-z (conductor 4)"]],
    },
    "family": {"xi": [[1, "1"]]},
}


def _document(**changes):
    document = copy.deepcopy(E1_DOCUMENT)
    document.update(changes)
    return document


class TestSchemaValidation:
    def test_valid_document_builds_session(self, contracts_dir):
        """Test that the E1 document yields q = -1 and xi_1 = 1."""
        # Act
        session = session_from_document(E1_DOCUMENT, contracts_dir)

        # Assert
        assert session.name == "e1"
        assert session.datum.q_i(0) == -1
        assert session.family.xi_i(0) == 1
        assert session.B is not None
        assert session.seed is None

    def test_missing_datum_is_located_at_root(self, contracts_dir):
        """Test that a missing required key is reported at (root)."""
        document = _document()
        del document["datum"]
        with pytest.raises(ConfigError) as exc_info:
            session_from_document(document, contracts_dir)
        assert exc_info.value.location == "(root)"
        assert "datum" in str(exc_info.value)

    @pytest.mark.parametrize(
        "changes, location",
        [
            ({"group": {"cyclic": 0}}, "group/cyclic"),
            ({"seed": -1}, "seed"),
            ({"family": {"xi": [[0, "1"]]}}, "family/xi/0/0"),
            ({"colour": "blue"}, "(root)"),
        ],
    )
    def test_schema_errors_carry_paths(self, contracts_dir, changes, location):
        """Test that each schema violation names the offending field."""
        with pytest.raises(ConfigError) as exc_info:
            session_from_document(_document(**changes), contracts_dir)
        assert exc_info.value.location == location

    def test_character_of_wrong_length(self, contracts_dir):
        """Test that a character vector must have |G| entries."""
        document = _document(datum={"g": [2], "chi": [["1", "-1"]]})
        with pytest.raises(ConfigError, match="chi_1 needs 4 values") as exc_info:
            session_from_document(document, contracts_dir)
        assert exc_info.value.location == "datum/chi/0"

    def test_group_element_out_of_range(self, contracts_dir):
        """Test that g_i must index an element of G."""
        document = _document(datum={"g": [7], "chi": E1_DOCUMENT["datum"]["chi"]})
        with pytest.raises(ConfigError) as exc_info:
            session_from_document(document, contracts_dir)
        assert exc_info.value.location == "datum/g/0"

    def test_bad_literal_is_located(self, contracts_dir):
        """Test that an unparseable character value is reported under datum/chi."""
        document = _document(datum={"g": [2], "chi": [["1", "zz", "-1", "1"]]})
        with pytest.raises(ConfigError) as exc_info:
            session_from_document(document, contracts_dir)
        assert exc_info.value.location == "datum/chi/0"

    def test_family_index_beyond_theta(self, contracts_dir):
        """Test that a_12 is refused when theta = 1."""
        document = _document(family={"a": [[1, 2, "1"]]})
        with pytest.raises(ConfigError) as exc_info:
            session_from_document(document, contracts_dir)
        assert exc_info.value.location == "family"

    def test_invalid_datum_is_deferred(self, contracts_dir):
        """Test that q = 1 loads but require_valid raises DatumError."""
        document = _document(datum={"g": [2], "chi": [["1", "-1", "1", "-1"]]})
        session = session_from_document(document, contracts_dir)
        assert session.B is None
        with pytest.raises(DatumError):
            session.require_valid()


class TestReading:
    def test_yaml_syntax_error_has_line_and_column(self, tmp_path):
        """Test that a YAML syntax error is located by line and column."""
        # Arrange
        path = tmp_path / "broken.yaml"
        path.write_text("name: broken\ngroup: {cyclic: 4\n", encoding="utf-8")

        # Act & Assert
        with pytest.raises(ConfigError) as exc_info:
            read_document(path)
        assert exc_info.value.location.startswith("line ")
        assert "column" in exc_info.value.location

    def test_missing_file(self, tmp_path):
        """Test that an unreadable path surfaces as ConfigError."""
        with pytest.raises(ConfigError, match="Cannot read session config"):
            read_document(tmp_path / "absent.json")

    def test_json_file_round_trip(self, tmp_path, contracts_dir):
        """Test that a JSON file on disk loads like the in-memory document."""
        path = tmp_path / "e1.json"
        path.write_text(json.dumps(E1_DOCUMENT), encoding="utf-8")
        session = load_session(path, contracts_dir)
        assert session.source == str(path)
        assert session.datum.N == (2,)


class TestShippedConfigs:
    def test_e3_gauge_and_candidates(self, configs_dir, contracts_dir):
        """Test that the exterior config carries a gauge element and two candidates."""
        session = load_session(configs_dir / "e3.json", contracts_dir)
        assert session.gauge is not None
        assert session.gauge.label == "exp(xy)"
        assert (session.gauge.source, session.gauge.target) == ("identity", "family")
        assert [c.label for c in session.candidates] == ["exp(-xy)", "exp(2xy)"]
        # exp(x1 x2) = 1 + x1 x2 since (x1 x2)^2 = 0
        assert session.gauge.c.coefficient((1, 1)) == 1
        assert session.gauge.c.coefficient((0, 0)) == 1

    def test_invariant_config_over_klein_group(self, configs_dir, contracts_dir):
        """Test that the integer-valued character loads with N = 2."""
        session = load_session(configs_dir / "invariant.json", contracts_dir)
        assert session.group.order == 4
        assert session.datum.N == (2,)

    def test_untwisted_config_has_zero_family(self, configs_dir, contracts_dir):
        """Test that omitting the family gives D = 0."""
        session = load_session(configs_dir / "untwisted.json", contracts_dir)
        assert session.family.is_zero()
