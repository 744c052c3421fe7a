import json
import xml.etree.ElementTree as ET

import jsonschema
import pytest

import stabtop.objects
from stabtop.cli import ConfigError, load_config, main
from stabtop.schemas import SCHEMAS

GOOD_CONFIG = {
    "charge": {"z1": {"re": "-1", "im": "0"}, "z2": {"re": "0", "im": "1"}},
    "model": "P1",
    "bounds": {"max_d1": 2, "max_d2": 2, "shifts": [-1, 1]},
    "points": ["[1:0]", "[0:1]", "[1:1]"],
    "seed": 7,
}


@pytest.fixture
def config_path(tmp_path):
    def write(overrides=None, **extra):
        cfg = {**GOOD_CONFIG, **(overrides or {}), **extra}
        path = tmp_path / "config.json"
        path.write_text(json.dumps(cfg))
        return str(path)

    return write


def run_json(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr().out
    return rc, json.loads(out)


def validate(payload):
    jsonschema.validate(payload, SCHEMAS[payload["command"]])


def test_load_config_ok(config_path):
    cfg = load_config(config_path())
    assert cfg.model == "P1"
    assert cfg.bounds.max_d1 == 2
    assert len(cfg.points) == 3
    assert cfg.seed == 7


@pytest.mark.parametrize(
    "overrides",
    [
        {"extra_key": 1},
        {"model": "weird"},
        {"w": 1},  # w outside localP1
        {"charge": {"z1": {"re": "1", "im": "0"}, "z2": {"re": "0", "im": "1"}}},
        {"charge": {"z1": {"re": "0", "im": "1"}}},
        {"points": ["[0:0]"]},
        {"points": ["[1:0]", "[1:0]"]},
        {"bounds": {"max_d1": 2, "max_d2": 2, "shifts": [1, -1]}},
        {"bounds": {"max_d1": 2, "max_d2": 2, "widths": [0, 0]}},
        {"seed": "nope"},
    ],
)
def test_load_config_rejects(config_path, overrides):
    with pytest.raises(ConfigError):
        load_config(config_path(overrides))


def test_hn_command(config_path, capsys):
    rc, payload = run_json(capsys, ["--config", config_path(), "hn", "P(1)"])
    assert rc == 0
    validate(payload)
    assert payload["regime"] == "AllSemistable"
    assert len(payload["factors"]) == 1


def test_hn_command_collapsed_example(config_path, capsys):
    path = config_path({"charge": {"z1": {"re": "0", "im": "1"}, "z2": {"re": "-1", "im": "0"}}})
    rc, payload = run_json(capsys, ["--config", path, "hn", "P(1)"])
    assert rc == 0
    validate(payload)
    assert [f["class"] for f in payload["factors"]] == [[0, 2], [1, 0]]
    assert [f["phase"]["approx"] for f in payload["factors"]] == [1.0, 0.5]


def test_ztilde_fiber_jh_sequiv(config_path, capsys):
    path = config_path()
    for argv in (
        ["ztilde", "P(1) + P(0)[1]"],
        ["ztilde", "0"],
        ["fiber", "R([1:0],1)"],
        ["jh", "R([1:0],2)"],
        ["sequiv", "R([1:0],2)", "R([1:0],1)^2"],
    ):
        rc, payload = run_json(capsys, ["--config", path, *argv])
        assert rc == 0
        validate(payload)


def test_sequiv_distinct_points_false(config_path, capsys):
    rc, payload = run_json(
        capsys, ["--config", config_path(), "sequiv", "R([1:0],1)", "R([0:1],1)"]
    )
    assert rc == 0
    validate(payload)
    assert payload["s_equivalent"] is False


def test_faithful_check_witness(config_path, capsys):
    path = config_path({"charge": {"z1": {"re": "0", "im": "1"}, "z2": {"re": "0", "im": "2"}}})
    rc, payload = run_json(capsys, ["--config", path, "faithful-check"])
    assert rc == 0
    validate(payload)
    assert payload == {
        "command": "faithful-check",
        "faithful": False,
        "witness": [[1, 0], [0, 1]],
    }


def test_sample_faithful_command(config_path, capsys):
    rc, payload = run_json(
        capsys,
        ["--config", config_path(), "sample-faithful", "--count", "50", "--grid", "10"],
    )
    assert rc == 0
    validate(payload)
    assert payload["count"] == 50
    assert payload["seed"] == 7

    rc2, payload2 = run_json(
        capsys,
        ["--config", config_path(), "sample-faithful", "--count", "50", "--grid", "10", "--seed", "7"],
    )
    assert payload2 == payload


def test_twist_command(config_path, capsys):
    path = config_path({"model": "localP1", "w": 0})
    rc, payload = run_json(capsys, ["--config", path, "twist", "O(-1)[1] + O(0)"])
    assert rc == 0
    validate(payload)
    assert payload["k_theory_consistent"] is True
    assert payload["class_before"] == [1, 0]
    assert payload["class_after"] == [1, 0]

    assert main(["--config", path, "twist", "R([1:0],1)"]) == 2
    assert main(["--config", config_path(), "twist", "O(0)"]) == 2  # needs localP1


def test_check_props_clean(config_path, capsys):
    rc, payload = run_json(capsys, ["--config", config_path(), "check-props", "--oracle"])
    assert rc == 0
    validate(payload)
    assert payload["violations_total"] == 0
    assert {r["proposition"] for r in payload["reports"]} >= {
        "semistable fibers",
        "positive-self-pairing fibers",
        "point-class fibers",
        "oracle HN equivalence",
    }


def test_check_props_mutation_flips_exit(config_path, capsys, monkeypatch):
    # corrupt one Hom-table cell; the oracle cross-check must notice
    original = stabtop.objects._hom_indec

    def corrupted(m, n, i):
        value = original(m, n, i)
        if i == 0 and m.kind == "P" and n.kind == "P" and m.n == 0 and n.n == 1:
            return value + 1
        return value

    monkeypatch.setattr(stabtop.objects, "_hom_indec", corrupted)
    rc, payload = run_json(capsys, ["--config", config_path(), "check-props", "--oracle"])
    assert rc == 1
    validate(payload)
    assert payload["violations_total"] > 0


def test_degenerate_config_check_props_is_input_error(config_path, capsys):
    path = config_path({"charge": {"z1": {"re": "0", "im": "1"}, "z2": {"re": "0", "im": "2"}}})
    assert main(["--config", path, "check-props"]) == 2


def test_malformed_object_exits_2(config_path, capsys):
    assert main(["--config", config_path(), "hn", "P(1]"]) == 2
    err = capsys.readouterr().err
    assert "position" in err


def test_jh_non_semistable_exits_2(config_path):
    path = config_path({"charge": {"z1": {"re": "0", "im": "1"}, "z2": {"re": "-1", "im": "0"}}})
    assert main(["--config", path, "jh", "R([1:0],1)"]) == 2


def test_plot_command(config_path, tmp_path, capsys):
    objs = tmp_path / "objects.txt"
    objs.write_text("P(0)\nP(1)\nR([1:0],1)\n0\n\n")
    out = tmp_path / "image.svg"
    rc, payload = run_json(
        capsys, ["--config", config_path(), "plot", str(objs), "--out", str(out)]
    )
    assert rc == 0
    validate(payload)
    assert payload["objects"] == 4
    assert payload["markers"] == 3

    tree = ET.parse(out)
    ns = {"svg": "http://www.w3.org/2000/svg"}
    circles = tree.getroot().findall(".//svg:circle", ns)
    assert len(circles) == 3
    rects = tree.getroot().findall(".//svg:rect", ns)
    assert len(rects) >= 2  # background + infinity marker


def test_missing_config_file(tmp_path):
    assert main(["--config", str(tmp_path / "nope.json"), "faithful-check"]) == 2
