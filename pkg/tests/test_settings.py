import pytest

from eogchair.errors import ValidationError
from eogchair.settings import default_config_text, load_config, parse_config


def test_default_config_loads():
    cfg = load_config()
    assert cfg.pipeline.sample_rate_hz == 250
    assert cfg.pipeline.frontend.gain_A == 1000
    assert cfg.pipeline.filter.f_c_hz == 50
    assert [s.id for s in cfg.subjects] == [1, 2, 3, 4, 5]
    assert cfg.n_trials == 1000
    assert cfg.motor.dwell_s == 1.0


def test_default_config_cites_tables():
    text = default_config_text()
    assert "Table 1" in text and "Table 2" in text


def test_empty_config_gives_defaults():
    cfg = parse_config({})
    assert cfg.subjects == ()
    assert cfg.pipeline.detector.threshold_V == 0.1


def test_sample_rate_feeds_adc():
    assert parse_config({"sample_rate_hz": 500}).pipeline.adc.fs_hz == 500


@pytest.mark.parametrize("data, match", [
    ({"frontend": {"gain": 10}}, "unknown key"),
    ({"bogus": {}}, "unknown section"),
    ({"filter": {"k": 0.5}}, r"\[filter\]"),
    ({"subjects": [{"id": 1, "saccade_amp_mean_uV": 10}]}, r"subjects\[0\]"),
    ({"subjects": [{"id": 1, "saccade_amp_mean_uV": 500}, {"id": 1, "saccade_amp_mean_uV": 600}]},
     "duplicate"),
    ({"evaluation": {"trials": 3}}, "evaluation"),
])
def test_invalid_configs(data, match):
    with pytest.raises(ValidationError, match=match):
        parse_config(data)


def test_bad_yaml(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text("frontend: [unclosed\n")
    with pytest.raises(ValidationError, match="YAML"):
        load_config(path)
