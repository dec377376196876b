import json

import pytest

from plectic.manifoldspec import (
    SpecError,
    load_spec,
    parse_spec_dict,
    thickened_spec_dict,
)
from plectic.splitting import build_split_frame
from plectic.thicken import build_thickening

from conftest import fixture_path


def _minimal(**overrides):
    data = {
        "name": "toy",
        "coordinates": ["x", "y", "z"],
        "form": {
            "degree": 2,
            "terms": [{"indices": ["x", "y"], "coeff": "1"}],
        },
    }
    data.update(overrides)
    return data


def test_bundled_fixtures_load():
    for name in (
        "scalar_field_2d.json",
        "scalar_field_2d_nondegenerate.json",
        "r4_premultisymplectic.json",
        "r5_thickening.json",
        "r6_thickening.json",
    ):
        spec = load_spec(fixture_path(name))
        assert spec.form.degree == 3


def test_unknown_top_level_key_rejected():
    with pytest.raises(SpecError, match="unknown top-level keys"):
        parse_spec_dict(_minimal(surprise=1))


def test_duplicate_indices_rejected():
    bad = _minimal()
    bad["form"]["terms"][0]["indices"] = ["x", "x"]
    with pytest.raises(SpecError, match="duplicate"):
        parse_spec_dict(bad)


def test_unknown_coordinate_in_indices_rejected():
    bad = _minimal()
    bad["form"]["terms"][0]["indices"] = ["x", "w"]
    with pytest.raises(SpecError, match="unknown coordinate"):
        parse_spec_dict(bad)


def test_malformed_coefficient_reports_position():
    bad = _minimal()
    bad["form"]["terms"][0]["coeff"] = "1 + * y"
    with pytest.raises(SpecError, match="position"):
        parse_spec_dict(bad)


def test_non_increasing_indices_normalize_by_sign():
    data = _minimal()
    data["form"]["terms"] = [
        {"indices": ["y", "x"], "coeff": "1"},
        {"indices": ["x", "y"], "coeff": "1"},
    ]
    spec = parse_spec_dict(data)
    assert spec.form.is_zero()


def test_fibration_auxiliary_must_be_fiber():
    data = _minimal()
    data["fibration"] = {"base": ["x"], "auxiliary": ["x"]}
    with pytest.raises(SpecError, match="fiber"):
        parse_spec_dict(data)


def test_samples_block_validated():
    data = _minimal(samples={"count": 0})
    with pytest.raises(SpecError, match="positive"):
        parse_spec_dict(data)
    data = _minimal(samples={"coordinate_range": [3, -3]})
    with pytest.raises(SpecError, match="low <= high"):
        parse_spec_dict(data)


def test_emitted_thickened_spec_round_trips(tmp_path):
    spec = load_spec(fixture_path("scalar_field_2d.json"))
    manifold = spec.manifold()
    frame = build_split_frame(manifold, spec.vertical, spec.horizontal)
    thickening = build_thickening(manifold, frame)
    emitted = thickened_spec_dict(thickening, spec)

    path = tmp_path / "thick.json"
    path.write_text(json.dumps(emitted), encoding="utf-8")
    reloaded = load_spec(str(path))

    assert reloaded.chart.dim == 12
    assert reloaded.form.degree == 3
    # field-equal form after the string round-trip
    rebuilt_terms = {
        idx: coeff for idx, coeff in reloaded.form.terms.items()
    }
    assert len(rebuilt_terms) == len(thickening.omega_tilde.terms)
    for idx, coeff in thickening.omega_tilde.terms.items():
        assert idx in rebuilt_terms
        assert rebuilt_terms[idx] == coeff.subs_rename(reloaded.chart.coords)
    # closedness survives, kernel is trivial
    reloaded.manifold()
    assert reloaded.fibration_base == ("x", "t")
    assert set(reloaded.fibration_auxiliary) == set(thickening.fiber_names)
