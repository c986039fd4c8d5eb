import csv
import io
import json

import numpy as np
import pytest

import lossypdc


def figure_config(pdc_type="I", n_imag=0.0):
    cfg = lossypdc.ExperimentConfig()
    cfg.type = pdc_type
    cfg.set_index("pump", 1.75, n_imag)
    cfg.set_index("signal", 1.67, n_imag)
    cfg.set_index("idler", 1.67, n_imag)
    return cfg


def test_type_one_is_proportional_to_identity():
    a = lossypdc.amplitude(figure_config("I", 1e-6))
    assert a.shape == (2, 2)
    assert a[0, 1] == 0 and a[1, 0] == 0
    assert a[0, 0] == pytest.approx(a[1, 1], rel=1e-14)
    assert lossypdc.rate(a) == pytest.approx(np.sum(np.abs(a) ** 2), rel=1e-14)


def test_numeric_matches_far_field():
    cfg = figure_config("II", 2e-6)
    far = lossypdc.amplitude(cfg)
    num = lossypdc.amplitude(cfg, method="numeric", tol=1e-7)
    assert np.linalg.norm(num - far) / np.linalg.norm(far) < 5e-3
    assert abs(num[0, 0]) == 0.0


def test_config_text_and_errors():
    cfg = lossypdc.load_config("type = II\nlength = 1.5 mm\nomega = 3.54e15 rad/s\n")
    assert cfg.type == "II"
    assert cfg.length == pytest.approx(1.5e-3)
    assert cfg.omega_pump == pytest.approx(7.08e15)
    assert cfg.indices()["signal"].real == pytest.approx(1.67, abs=1e-4)
    with pytest.raises(lossypdc.ValidationError, match="birefringence"):
        lossypdc.load_config("birefringence = 0.1\n")
    with pytest.raises(lossypdc.ParseError, match="line 1"):
        lossypdc.load_config("length 2 mm\n")
    with pytest.raises(ValueError):
        cfg.set_index("probe", 1.5)


def test_preset_round_trip():
    res = lossypdc.run_preset("fig5")
    assert res.columns == ["n_imag", "rate_ratio_I", "rate_ratio_II"]
    assert len(res.rows) == 20
    assert res.rows[0][1] == 1.0
    assert res.metadata["preset"] == "fig5"

    rows = list(csv.reader(io.StringIO(lossypdc.emit(res, "csv"))))
    assert rows[0] == res.columns
    assert [float(v) for v in rows[5]] == res.rows[4]

    doc = json.loads(lossypdc.emit(res, "json"))
    assert doc["schema_version"] == 1
    assert doc["rows"][7]["rate_ratio_II"] == res.rows[7][2]


def test_noise_gain_order_of_magnitude():
    import math

    n_imag = -math.log(0.9) * 299792458.0 / (2 * 3.54e15 * 0.01)
    gain = lossypdc.noise_gain(figure_config("I", n_imag))
    assert 1e-13 <= gain <= 1e-11
