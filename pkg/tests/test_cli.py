import json

import pytest

from kmroots.cli import EXIT_INVALID, EXIT_OK, EXIT_USAGE, load_config, run

from conftest import A1_AFF, A2, HYP, RANK3


@pytest.fixture
def files(tmp_path):
    def write(name, rows):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps({"name": name, "rows": rows}))
        return str(p)

    return {
        "a2": write("A2", A2),
        "a11": write("A1_1", A1_AFF),
        "hyp": write("hyp", HYP),
        "r3": write("r3", RANK3),
        "cycle": write("cycle", [[2, -1, -1], [-2, 2, -1], [-2, -2, 2]]),
        "bad": write("bad", [[2, -1], [0, 2]]),
    }


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.setenv("KMROOTS_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.setenv("KMROOTS_CONFIG", str(tmp_path / "missing.json"))
    monkeypatch.delenv("KMROOTS_CONFIG")
    monkeypatch.setenv("HOME", str(tmp_path / "home"))


def test_validate(files):
    out, _, code = run(["validate", files["a2"]])
    assert code == 0 and "finite, D = diag(1,1)" in out
    out, _, code = run(["validate", files["a11"]])
    assert code == 0 and "affine, δ = [1,1]" in out
    _, err, code = run(["validate", files["cycle"]])
    assert code == EXIT_INVALID and "NotSymmetrizable" in err and "cycle" in err
    _, err, code = run(["validate", files["bad"]])
    assert code == EXIT_INVALID and "zero-symmetry" in err
    out, _, code = run(["validate", files["a11"], "--format", "json"])
    assert json.loads(out)["components"][0]["null_root"] == [1, 1]


def test_roots_counts(files):
    out, _, _ = run(["roots", files["a2"], "--max-height", "3", "--format", "json"])
    assert len(json.loads(out)["roots"]) == 3
    out, _, _ = run(["roots", files["a11"], "--max-height", "4", "--format", "csv"])
    lines = out.splitlines()
    assert lines[0] == "coeffs,height,kind,norm,mult" and len(lines) == 7
    out, _, _ = run(["roots", files["r3"], "--max-height", "1", "--format", "json"])
    assert [r["coeffs"] for r in json.loads(out)["roots"]] == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]


def test_roots_deterministic(files, tmp_path):
    args = ["roots", files["hyp"], "--max-height", "10", "--format", "csv"]
    first = run(args)[0]
    second = run(args)[0]
    third = run(args + ["--no-cache"])[0]
    assert first == second == third
    assert run(args[:-1] + ["json"])[0] == run(args[:-1] + ["json"])[0]


def test_string_examples(files):
    out, _, code = run(["string", files["a11"], "--alpha", "1,0", "--beta", "1,1", "--format", "json"])
    d = json.loads(out)
    assert code == 0 and d["classification"]["tag"] == "bi-infinite"
    assert d["growth"]["tag"] == "multiplicity-one"
    out, _, _ = run(["string", files["r3"], "--alpha", "0,0,1", "--beta", "1,1,0", "--format", "json"])
    d = json.loads(out)
    assert d["classification"]["tag"] == "semi-infinite-plus"
    assert d["growth"]["tag"] == "superpolynomial-lower-bound"
    out, _, _ = run(["string", files["hyp"], "--alpha", "1,0", "--beta", "1,1", "--window", "-3..3"])
    assert "infinite-at-least-one-direction" in out and "exponential-lower-bound" in out
    out, _, _ = run(["string", files["hyp"], "--alpha", "-1,0", "--beta", "1,1", "--window=-2..2", "--format", "csv"])
    assert out.splitlines()[0] == "n,vector,dim,member"


def test_string_errors(files):
    _, err, code = run(["string", files["a2"], "--alpha", "1,0", "--beta", "2,0"])
    assert code == EXIT_INVALID and "not a root" in err
    _, _, code = run(["string", files["a2"], "--alpha", "1,0", "--beta", "0,1", "--window", "1..3"])
    assert code == EXIT_USAGE
    _, _, code = run(["string", files["a2"], "--alpha", "x", "--beta", "0,1"])
    assert code == EXIT_USAGE


def test_usage_errors(files):
    assert run([])[2] == EXIT_USAGE
    assert run(["roots"])[2] == EXIT_USAGE
    assert run(["frobnicate"])[2] == EXIT_USAGE
    assert run(["--help"])[2] == EXIT_OK
    assert run(["roots", "/nonexistent.json"])[2] == EXIT_INVALID


def test_verify_single_matrix(files):
    out, _, code = run(["verify", files["hyp"], "--format", "json"])
    assert code == 0 and json.loads(out)["passed"] is True


def test_verify_corrupt_cache(files, tmp_path):
    cache = tmp_path / "c"
    run(["roots", files["a2"], "--cache-dir", str(cache)])
    (path,) = cache.glob("*.kmt")
    path.write_text(path.read_text().replace("\n0 1 1 1 1\n", "\n0 1 3 1 1\n"))
    _, err, code = run(["verify", files["a2"], "--cache-dir", str(cache)])
    assert code == 3 and "CorruptCache" in err


def test_cache_dir_precedence(files, tmp_path, monkeypatch):
    flag, env, conf = tmp_path / "flag", tmp_path / "env", tmp_path / "conf"
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"cache_dir": str(conf)}))
    monkeypatch.setenv("KMROOTS_CACHE_DIR", str(env))
    base = ["roots", files["a2"], "--max-height", "2", "--config", str(config)]
    run(base + ["--cache-dir", str(flag)])
    assert list(flag.iterdir()) and not env.exists()
    run(base)
    assert list(env.iterdir()) and not conf.exists()
    monkeypatch.delenv("KMROOTS_CACHE_DIR")
    run(base)
    assert list(conf.iterdir())
    run(base + ["--no-cache"])


def test_config_values(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"default_height": 5, "default_window": "-2..2", "output_format": "json"}))
    cfg = load_config(p)
    assert cfg.default_height == 5 and cfg.default_window == (-2, 2) and cfg.output_format == "json"
    p.write_text(json.dumps({"default_height": 1}))
    _, err, code = run(["validate", "x", "--config", str(p)])
    assert code == EXIT_INVALID


def test_config_used_for_defaults(files, tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"default_height": 3, "output_format": "json"}))
    out, _, _ = run(["roots", files["a2"], "--config", str(p), "--no-cache"])
    assert json.loads(out)["max_height"] == 3


def test_module_entry_point(files):
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "kmroots", "validate", files["a2"]], capture_output=True, text=True)
    assert r.returncode == 0 and "finite" in r.stdout
