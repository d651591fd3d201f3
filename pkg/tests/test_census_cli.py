import json
import logging
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from unitary_shimura import census_cli
from unitary_shimura.census_cli import (
    CensusCache,
    CensusStats,
    ComponentReport,
    census_record,
    cmd_census,
    cmd_report,
    dumps,
    main,
)


def run_main(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_report_minus_7(capsys):
    code, out, _ = run_main(["report", "-D", "-7"], capsys)
    assert code == 0
    (line,) = out.splitlines()
    r = json.loads(line)
    assert r["isotropic"] and r["disc_B"] == 1 and r["N"] == 7
    assert r["degree"] == "1/3"
    assert r["volume_symbolic"]["c_log"] == {"7": "1/8"}
    assert r["volume_numeric"]["precision"] == 30


def test_report_minus_15():
    reports = cmd_report(-15)
    assert len(reports) == 2
    iso, aniso = reports
    assert aniso.degree == Fraction(1, 3) and not aniso.isotropic and aniso.disc_B == 15
    # the isotropic space has degree (1+3)(1+5)/24
    assert iso.degree == 1 and iso.isotropic and iso.N == 15
    assert iso.volume_symbolic.c_log != aniso.volume_symbolic.c_log


def test_report_even_discriminant(capsys):
    code, out, err = run_main(["report", "-D", "-4"], capsys)
    assert code != 0 and out == ""
    assert "odd" in err


def test_report_as_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "unitary_shimura", "report", "-D", "-8"], capture_output=True, text=True
    )
    assert proc.returncode != 0 and "odd" in proc.stderr


def test_report_round_trip():
    for D in (-3, -15, -23, -455):
        for r in cmd_report(D, 20):
            d = r.to_dict()
            assert ComponentReport.from_dict(json.loads(dumps(d))) == r


def test_census_range(tmp_path):
    records = cmd_census(-25, -3, cache_path=tmp_path / "c.ndjson")
    assert [r["D"] for r in records] == [-3, -7, -11, -15, -19, -23]
    by_d = {r["D"]: r for r in records}
    assert by_d[-23]["h"] == 3 and by_d[-15]["o_k"] == 2 and by_d[-15]["cl0"] == 1
    assert sum(len(s["components"]) for s in by_d[-23]["spaces"]) == 3


def test_census_warm_cache(tmp_path):
    path = tmp_path / "c.ndjson"
    cold = CensusStats()
    first = cmd_census(-120, -3, cache_path=path, stats=cold)
    assert cold.computed == len(first) and cold.cached == 0
    warm = CensusStats()
    second = cmd_census(-120, -3, cache_path=path, stats=warm)
    assert warm.computed == 0 and warm.cached == len(first)
    assert second == first


def test_census_cache_keyed_by_precision(tmp_path):
    path = tmp_path / "c.ndjson"
    cmd_census(-20, -3, precision=20, cache_path=path)
    stats = CensusStats()
    cmd_census(-20, -3, precision=25, cache_path=path, stats=stats)
    assert stats.computed == 5 and stats.cached == 0


def test_census_jobs_deterministic(tmp_path, capsys):
    base = ["census", "--min", "-300", "--max", "-3", "--no-cache"]
    _, serial, _ = run_main(base + ["--jobs", "1"], capsys)
    _, parallel, _ = run_main(base + ["--jobs", "4"], capsys)
    assert serial == parallel and serial.count("\n") > 50


def test_census_corrupted_cache(tmp_path, caplog):
    path = tmp_path / "c.ndjson"
    cmd_census(-40, -3, cache_path=path)
    lines = path.read_text().splitlines()
    lines[2] = lines[2][: len(lines[2]) // 2]
    victim = json.loads(lines[3])
    victim["record"]["h"] = 99
    victim["record"]["checksum"] = "0" * 64
    lines[3] = dumps(victim)
    path.write_text("\n".join(lines) + "\n")
    stats = CensusStats()
    with caplog.at_level(logging.WARNING):
        records = cmd_census(-40, -3, cache_path=path, stats=stats)
    assert stats.computed == 2
    assert "corrupted" in caplog.text
    assert records == [census_record(D, 30) for D in stats.discriminants]


def test_cache_unknown_header(tmp_path, caplog):
    path = tmp_path / "c.ndjson"
    path.write_text('{"schema": "something else"}\n')
    with caplog.at_level(logging.WARNING):
        assert CensusCache(path).entries == {}
    assert "header" in caplog.text


def test_cache_soundness_sampled(tmp_path):
    path = tmp_path / "c.ndjson"
    records = cmd_census(-400, -3, cache_path=path)
    cache = CensusCache(path)
    for r in random.Random(7).sample(records, 10):
        assert cache.get(r["D"], 30) == census_record(r["D"], 30)


def test_cache_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(census_cli.CACHE_ENV, str(tmp_path))
    assert census_cli.default_cache_path().parent == tmp_path
    assert main(["census", "--min", "-11", "--max", "-3"]) == 0
    assert (tmp_path / "census.ndjson").exists()


def test_census_bad_range(capsys):
    code, _, err = run_main(["census", "--min", "-3", "--max", "-30", "--no-cache"], capsys)
    assert code != 0 and err


def test_verify_scope(capsys):
    code, out, _ = run_main(["verify", "--scope", "volumes", "--bound", "200"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1] == "3/3 checks passed"


def test_verify_rejects_unknown_scope(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "--scope", "nothing"])


@pytest.mark.parametrize("scope,bound", [("classgroup", 2000), ("orders", 300), ("volumes", 2000)])
def test_verify_suites_at_full_bounds(scope, bound, capsys):
    code, out, _ = run_main(["verify", "--scope", scope, "--bound", str(bound)], capsys)
    assert code == 0, out
    assert "FAIL" not in out
