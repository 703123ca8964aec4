"""End-to-end command tests: files in, lines or canonical JSON out."""

import json

import pytest

from toricmmp.cli import main
from toricmmp.fan import make_fan
from toricmmp.jsonio import dumps, fan_to_json, group_to_json, pair_to_json
from toricmmp.mckay import make_group, quotient_pair
from toricmmp.pairs import make_pair


def write(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture
def orthant_pair_file(tmp_path):
    fan = make_fan([(1, 0), (0, 1)], [(0, 1)])
    return write(tmp_path / "orthant.json", pair_to_json(make_pair(fan, [0, 0])))


@pytest.fixture
def sixth_group_file(tmp_path):
    return write(tmp_path / "g6.json", group_to_json(make_group(2, [(6, (3, 2))])))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_text(capsys, orthant_pair_file):
    code, out, _ = run(capsys, "check", orthant_pair_file)
    assert code == 0
    assert out.splitlines() == [
        "valid: true",
        "complete: false",
        "terminal: true",
        "canonical: true",
        "nef: true",
    ]


def test_check_json(capsys, tmp_path):
    fan = make_fan([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 0)])
    path = write(tmp_path / "p2.json", fan_to_json(fan))  # bare fan: coeffs 0
    code, out, _ = run(capsys, "check", path, "--json")
    assert code == 0
    data = json.loads(out)
    assert data == {
        "valid": True, "complete": True, "terminal": True,
        "canonical": True, "nef": True,
    }


def test_check_rejects_bad_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "check", str(path))
    assert code == 1 and "error:" in err
    code, _, err = run(capsys, "check", str(tmp_path / "absent.json"))
    assert code == 1 and "error:" in err


def test_terminalize_text_and_json(capsys, tmp_path):
    X = quotient_pair(make_group(2, [(3, (1, 1))]))
    path = write(tmp_path / "x.json", pair_to_json(X))
    code, out, _ = run(capsys, "terminalize", path)
    assert code == 0
    assert out.splitlines() == [
        "extract [0, 1] at log discrepancy 2/3",
        "terminal model: 3 rays, 2 cones",
    ]
    code, out, _ = run(capsys, "terminalize", path, "--json")
    data = json.loads(out)
    assert len(data["steps"]) == 1
    assert data["steps"][0]["psi_value"] == "2/3"
    assert len(data["pair"]["rays"]) == 3


def test_mmp_contracts_interior_ray(capsys, tmp_path):
    fan = make_fan([(1, 0), (0, 1), (1, 1)], [(0, 2), (1, 2)])
    path = write(tmp_path / "bl.json", pair_to_json(make_pair(fan, [0, 0, 0])))
    code, out, _ = run(capsys, "mmp", path)
    assert code == 0
    assert out.splitlines() == [
        "contract ray [1, 1]",
        "minimal model: 2 rays, 1 cones",
    ]
    code, out2, _ = run(capsys, "mmp", path, "--base", "orthant")
    assert code == 0 and out2 == out
    code, _, err = run(capsys, "mmp", path, "--max-steps", "0")
    assert code == 1 and "max-steps" in err


def test_mckay_single(capsys, sixth_group_file):
    code, out, _ = run(capsys, "mckay", sixth_group_file)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "order: 6"
    assert lines[1] == "sl: false"
    assert lines[2] == "rank: 6 -> 1"
    assert lines[3].startswith("extraction ray [1, 1] psi 5/6 rank 6 -> 5")
    assert lines[-1] == "telescope: 6 = 1 + 5"


def test_mckay_json_deterministic(capsys, sixth_group_file):
    code, out1, _ = run(capsys, "mckay", sixth_group_file, "--json")
    code2, out2, _ = run(capsys, "mckay", sixth_group_file, "--json")
    assert code == code2 == 0
    assert out1 == out2
    data = json.loads(out1)
    assert [e["kind"] for e in data["ledger"]] == [
        "extraction", "coefficient_drop", "coefficient_drop", "divisorial",
    ]


def test_mckay_batch(capsys, tmp_path):
    d = tmp_path / "groups"
    d.mkdir()
    write(d / "a.json", group_to_json(make_group(2, [(3, (1, 1))])))
    write(d / "b.json", group_to_json(make_group(2, [(2, (0, 1))])))
    code, out, _ = run(capsys, "mckay", "--batch", str(d))
    assert code == 0
    assert out.splitlines()[0] == "== a.json"
    assert "== b.json" in out
    # a broken file is reported per entry and flips the exit code
    (d / "c.json").write_text(json.dumps({"n": 2, "gens": [{"r": 0, "weights": [1, 1]}]}))
    code, out, _ = run(capsys, "mckay", "--batch", str(d))
    assert code == 1
    assert "== c.json" in out and "error:" in out


def test_mckay_needs_exactly_one_input(capsys, sixth_group_file):
    code, _, err = run(capsys, "mckay")
    assert code == 1
    code, _, err = run(capsys, "mckay", sixth_group_file, "--batch", "x")
    assert code == 1


def test_flop_decompose_atiyah(capsys, tmp_path):
    rays = [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
    fx = make_fan(rays, [(0, 1, 2), (0, 2, 3)])
    fy = make_fan(rays, [(0, 1, 3), (1, 2, 3)])
    px = write(tmp_path / "x.json", pair_to_json(make_pair(fx, [0] * 4)))
    py = write(tmp_path / "y.json", pair_to_json(make_pair(fy, [0] * 4)))
    code, out, _ = run(capsys, "flop-decompose", px, py)
    assert code == 0
    assert out.splitlines()[-1] == "flops: 1"
    code, out, _ = run(capsys, "flop-decompose", px, py, "--json")
    data = json.loads(out)
    assert len(data["steps"]) == 1
    assert sorted(data["steps"][0]["coeffs"]) == [-1, -1, 1, 1]


def test_flop_decompose_rejects_non_equivalent(capsys, tmp_path):
    fx = make_fan([(1, 0), (0, 1)], [(0, 1)])
    fy = make_fan([(1, 0), (0, 1), (1, 1)], [(0, 2), (1, 2)])
    px = write(tmp_path / "x.json", pair_to_json(make_pair(fx, [0, 0])))
    py = write(tmp_path / "y.json", pair_to_json(make_pair(fy, [0, 0, 0])))
    code, _, err = run(capsys, "flop-decompose", px, py)
    assert code == 1 and "error:" in err


def test_hj_lines(capsys):
    code, out, _ = run(capsys, "hj", "3", "1")
    assert code == 0 and out == "chain: -3\n"
    code, out, _ = run(capsys, "hj", "7", "3")
    assert out == "chain: -3 -2 -2\n"
    code, out, _ = run(capsys, "hj", "5", "2", "--json")
    assert json.loads(out)["chain"] == [-3, -2]
    code, _, err = run(capsys, "hj", "4", "2")
    assert code == 1 and "error:" in err


def test_rank_command(capsys, tmp_path, sixth_group_file):
    code, out, _ = run(capsys, "rank", sixth_group_file)
    assert code == 0 and out == "rank: 6\n"
    X = quotient_pair(make_group(2, [(6, (3, 2))]))
    path = write(tmp_path / "pair.json", pair_to_json(X))
    code, out, _ = run(capsys, "rank", path)
    assert code == 0 and out == "rank: 6\n"


def test_case_a_command(capsys):
    code, out, _ = run(capsys, "case-a", "5", "2")
    assert code == 0
    assert out.splitlines() == ["components: 1 3 4", "count: 3"]
    code, out, _ = run(capsys, "case-a", "4", "4", "--json")
    assert json.loads(out) == {"components": [], "count": 0}
    code, _, err = run(capsys, "case-a", "3", "5")
    assert code == 1


def test_engine_invariant_exit_code(capsys, sixth_group_file, monkeypatch):
    from toricmmp.errors import EngineInvariantError
    import toricmmp.cli as cli

    def boom(_):
        raise EngineInvariantError("fabricated")

    monkeypatch.setattr(cli, "mckay_pipeline", boom)
    code, _, err = run(capsys, "mckay", sixth_group_file)
    assert code == 2 and "internal error" in err


def test_usage_error_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["hj", "3"])
    assert exc.value.code == 1


def test_output_matches_library_dumps(capsys, sixth_group_file):
    from toricmmp.mckay import mckay_pipeline

    code, out, _ = run(capsys, "mckay", sixth_group_file, "--json")
    assert out == dumps(mckay_pipeline(make_group(2, [(6, (3, 2))]))) + "\n"
