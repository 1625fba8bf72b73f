import math

import numpy as np
import pytest

from selberg_afe.afe import afe_sharp
from selberg_afe.datum import builtin
from selberg_afe.descriptor import load_descriptor, parse_text, resolve_datum
from selberg_afe.errors import CoefficientRangeError, ValidationError

ZETA_TEXT = f"""# zeta written out by hand
label = myzeta
q = 1
Q = {math.pi ** -0.5!r}
lambda = [0.5]
mu = [[0, 0]]
omega = [1, 0]
pole_order = 1
coeffs = zeta
"""


def test_parse_fields():
    f = parse_text(ZETA_TEXT)
    assert f["label"] == "myzeta" and f["lambda"] == [0.5] and f["coeffs"] == "zeta"


def test_zeta_descriptor_matches_builtin(tmp_path):
    path = tmp_path / "zeta.txt"
    path.write_text(ZETA_TEXT, encoding="utf-8")
    d = load_descriptor(path)
    a = afe_sharp(d, 0.5 + 100j, 1).value
    b = afe_sharp(builtin("zeta"), 0.5 + 100j, 1).value
    assert a == b


@pytest.mark.parametrize("extra, field", [
    ("colour = red\n", "colour"),
    ("q = 2\n", "q"),
    ("nonsense\n", "descriptor"),
])
def test_rejections(extra, field):
    with pytest.raises(ValidationError) as exc:
        parse_text(ZETA_TEXT + extra)
    assert exc.value.field == field


def test_missing_field():
    with pytest.raises(ValidationError) as exc:
        parse_text(ZETA_TEXT.replace("pole_order = 1\n", ""))
    assert exc.value.field == "pole_order"


def test_bad_values(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text(ZETA_TEXT.replace("q = 1", "q = 1.5"), encoding="utf-8")
    with pytest.raises(ValidationError, match="q"):
        load_descriptor(path)
    path.write_text(ZETA_TEXT.replace("mu = [[0, 0]]", "mu = [[0, 0, 1]]"), encoding="utf-8")
    with pytest.raises(ValidationError, match="mu"):
        load_descriptor(path)


def test_table_source(tmp_path):
    table = tmp_path / "a.csv"
    table.write_text("".join(f"{n},1.0,0.0\n" for n in range(1, 51)), encoding="utf-8")
    path = tmp_path / "d.txt"
    path.write_text(ZETA_TEXT.replace("coeffs = zeta", "coeffs = table:a.csv"), encoding="utf-8")
    d = load_descriptor(path)
    assert np.all(d.coefficients(50) == 1)
    with pytest.raises(CoefficientRangeError):
        d.coefficients(51)


def test_table_errors(tmp_path):
    path = tmp_path / "d.txt"
    path.write_text(ZETA_TEXT.replace("coeffs = zeta", "coeffs = table:a.csv"), encoding="utf-8")
    table = tmp_path / "a.csv"
    table.write_text("", encoding="utf-8")
    with pytest.raises(ValidationError, match="empty"):
        load_descriptor(path)
    table.write_text("1,1,0\n3,1,0\n", encoding="utf-8")
    with pytest.raises(ValidationError, match="expected n = 2"):
        load_descriptor(path)
    table.write_text("1,x,0\n", encoding="utf-8")
    with pytest.raises(ValidationError, match="bad row"):
        load_descriptor(path)


def test_resolve():
    assert resolve_datum("delta").label == "delta"
    with pytest.raises(ValidationError):
        resolve_datum("no_such_datum")
