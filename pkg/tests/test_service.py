import json

import pytest
from fastapi.testclient import TestClient

from krfoam.cli import main
from krfoam.service import ReportRequest, app, build_report
from krfoam.service import ParseError, ComputeError

client = TestClient(app)


def test_healthz():
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


def test_report_endpoint_roundtrip():
    resp = client.post("/v1/report", json={
        "braid": "s1 s1", "reports": ["homology", "moy"], "qmax": 6,
    })
    assert resp.status_code == 200
    body = resp.json()
    assert body["schema"] == 1
    assert body["reports"]["moy"]["coeffs"] == [[-4, 1], [-2, 1], [0, 1], [2, 1]]
    assert body["reports"]["homology"]["kappa"] == [-2, 1]


def test_parse_errors_are_400():
    for payload in (
        {"braid": "nonsense"},
        {"pd": "X[1,2,3]"},
        {"braid": "s1", "field": "fp:2"},
        {"braid": "s1", "field": "gf:4"},
        {"braid": "s1", "t1": "x/y"},
        {"braid": "s1", "framing": "sideways"},
        {"braid": "s1", "reports": ["nope"]},
        {},
    ):
        resp = client.post("/v1/report", json=payload)
        assert resp.status_code == 400, payload
        assert resp.json()["detail"]["kind"] == "parse"


def test_compute_errors_are_500():
    # s-invariant of a 2-component link is undefined
    resp = client.post("/v1/report", json={"braid": "s1 s1", "reports": ["s"]})
    assert resp.status_code == 500
    assert resp.json()["detail"]["kind"] == "compute"


def test_build_report_validates_directly():
    with pytest.raises(ParseError):
        build_report(ReportRequest(braid="s1", pd="unknot"))
    with pytest.raises(ComputeError):
        build_report(ReportRequest(braid="s1", n=3, reports=["homology"]))


def test_rationals_serialized_as_integer_pairs():
    rep = build_report(ReportRequest(braid="s1 s1", t1="1/4", t2="3/4",
                                     reports=["homology"], qmax=5))
    assert rep["input"]["t1"] == [1, 4]
    assert rep["input"]["t2"] == [3, 4]
    text = json.dumps(rep)
    assert "e-0" not in text and not any(
        isinstance(x, float) for x in _walk(rep))


def _walk(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            yield from _walk(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            yield from _walk(v)
    else:
        yield obj


def test_cli_deterministic_output(tmp_path, capsys):
    args = ["--braid", "s1 s1", "--report", "homology,sl2",
            "--qmax", "6", "--framing", "unframed"]
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert main(args + ["--json", str(out1)]) == 0
    assert main(args + ["--json", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    body = json.loads(out1.read_text())
    assert body["schema"] == 1 and "sl2" in body["reports"]


def test_cli_exit_codes(capsys):
    assert main(["--braid", "s1", "--report", "moy"]) == 0
    capsys.readouterr()
    assert main(["--braid", "not a braid", "--report", "moy"]) == 2
    capsys.readouterr()
    assert main(["--report", "moy"]) == 2          # no diagram
    capsys.readouterr()
    assert main(["--braid", "s1 s1", "--report", "s"]) == 1
    capsys.readouterr()


def test_cli_pd_file_input(tmp_path, capsys):
    pd = tmp_path / "hopf.pd"
    pd.write_text("X[1,3,2,4] X[3,1,4,2]\n")
    assert main(["--pd", str(pd), "--report", "moy"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["reports"]["moy"]["coeffs"]


def test_cli_batch_order(capsys):
    code = main(["--braid", "s1", "--braid", "s1 s1", "--report", "moy"])
    assert code == 0
    body = json.loads(capsys.readouterr().out)
    assert [item["input"]["braid"] for item in body["batch"]] == ["s1", "s1 s1"]


def test_cli_invariance_suite(capsys):
    assert main(["--report", "invariance-suite", "--qmax", "7"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert all(r["pass"] for r in body["reports"]["invariance-suite"])
