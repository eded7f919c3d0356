"""
Tests for output formatting helpers.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from scripts.graphlim import utils
from scripts.graphlim.utils import format_float, round_float, to_jsonable


class TestFormatting:
    """Test float formatting for reports."""

    def test_twelve_digits(self):
        """Should keep 12 significant digits."""
        assert format_float(1.0 / 3.0) == "0.333333333333"
        assert round_float(2.0 / 3.0) == pytest.approx(0.666666666667, abs=1e-15)

    def test_infinities_become_strings(self):
        """Should write infinities as strings so JSON stays standard."""
        assert round_float(math.inf) == "inf"
        assert round_float(-math.inf) == "-inf"

    def test_to_jsonable_numpy(self):
        """Should convert numpy scalars, arrays and tuples to plain values."""
        data = {"a": np.arange(2), "b": (np.float64(0.5), np.bool_(True)), 3: math.inf}
        assert to_jsonable(data) == {"a": [0, 1], "b": [0.5, True], "3": "inf"}

    def test_exports(self):
        """Should export only the helpers the package uses."""
        assert "format_float" in utils.__all__
        assert "parse_float" not in utils.__all__
