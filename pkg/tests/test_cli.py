import io
import json

import pytest
from fastapi.testclient import TestClient

from clrp import catalog, cli
from clrp.service import app, dump_instance, load_instance
from clrp.transform import parse_edge_list, validate_transform


def run(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), out)
    return code, out.getvalue()


def test_exit_codes_follow_the_verdict():
    assert run("prove-rate", "fano", "--rates", "1,1,1,1,1,1,1", "-q", "2")[0] == 0
    assert run("prove-rate", "fano", "--rates", "1,1,1,1,1,1,1", "-q", "3")[0] == 1


@pytest.mark.parametrize("argv", [
    ["prove-rate", "fano", "--rates", "1,1"],
    ["prove-rate", "fano", "--rates", "1,x"],
    ["prove-rate", "nowhere", "--rates", "1"],
    ["prove-rate", "fano", "--rates", "1,1,1,1,1,1,1", "-q", "6"],
    ["prove-ss", "fano", "--sizes", "1,1,1,1,1,1,1"],
    ["frobnicate"],
    [],
])
def test_errors_exit_with_three(argv, capsys):
    assert run(*argv)[0] == 3
    assert capsys.readouterr().err


def test_json_envelope():
    code, text = run("--json", "prove-rate", "2u24", "--rates", "1,1,1,1", "-q", "3")
    reply = json.loads(text)
    assert code == 0 and reply["verdict"] == "yes" and reply["exit_code"] == 0
    assert sorted(reply["witness"]["labels"]) == [1, 2, 3, 4]
    assert sum(s["oracle_evaluations"] for s in reply["stats"]) == reply["oracle_evaluations"]


def test_text_report_has_no_timing():
    _, a = run("prove-rate", "fano", "--rates", "1,1,1,1,1,1,1")
    _, b = run("prove-rate", "fano", "--rates", "1,1,1,1,1,1,1")
    assert a == b and "verdict: yes" in a and "time" not in a


def test_catalog_listing_and_dump(tmp_path):
    code, text = run("catalog")
    names = text.split()
    assert code == 0 and {"fano", "benaloh", "linrank6"} <= set(names)
    for name in names:
        code, dump = run("catalog", name)
        assert code == 0
        # names are not part of the text format, so compare the dumps
        assert dump_instance(load_instance(dump)) == dump
    assert run("catalog", "nothing")[0] == 3


def test_instance_from_file(tmp_path):
    path = tmp_path / "fano.net"
    path.write_text(run("catalog", "fano")[1])
    assert run("prove-rate", str(path), "--rates", "1,1,1,1,1,1,1")[0] == 0


def test_transform_writes_a_valid_edge_list(tmp_path):
    out, dot = tmp_path / "g.txt", tmp_path / "g.dot"
    code, _ = run("transform", "fano", "--rates", "1,1,1,1,1,1,1", "--out", str(out), "--dot", str(dot))
    assert code == 0
    g = parse_edge_list(out.read_text())
    assert len(g.nodes) == 17 and validate_transform(g) == []
    assert dot.read_text().startswith("digraph")


def test_stats_csv(tmp_path):
    path = tmp_path / "stats.csv"
    code, text = run("prove-rate", "fano", "--rates", "1,1,1,1,1,1,1", "--stats", str(path))
    rows = path.read_text().splitlines()
    assert rows[0] == "r,size,simple_size,tested,kept,oracle_evaluations"
    total = sum(int(r.split(",")[-1]) for r in rows[1:])
    assert f"oracle evaluations: {total}" in text


def test_inconclusive_exit_code():
    assert run("prove-rate", "vamos", "--rates", "1,1,1,1,1,1,1,1", "--max-reps", "1")[0] == 2
    assert run("prove-rate", "vamos", "--rates", "1,1,1,1,1,1,1,1", "--timeout", "0")[0] == 2


def test_region_and_emitted_block(tmp_path):
    path = tmp_path / "region.ext"
    relay = "network k=1 n=2\ncon {1} -> {1,2}\ncon {2} -> {1,2}\n"
    src = tmp_path / "relay.net"
    src.write_text(relay)
    code, text = run("prove-region", str(src), "--dmax", "1", "--rmax", "2", "--emit-region", str(path))
    assert code == 0 and "[1, 1]" in text
    assert path.read_text().startswith("H-representation")


def test_region_with_no_codes(tmp_path):
    # independent sources that determine each other must both be zero
    src = tmp_path / "null.net"
    src.write_text("network k=2 n=2\ncon {1} -> {1,2}\ncon {2} -> {1,2}\n")
    code, text = run("--json", "prove-region", str(src), "--dmax", "1", "--rmax", "2")
    reply = json.loads(text)
    assert code == 0 and reply["vectors"] == [] and reply["codes"] == 0
    # only the origin remains once both sources point inwards
    assert sorted(reply["region"]) == [[-1, 0], [0, -1], [0, 1], [1, 0]]


def test_enumerate_command():
    code, text = run("enumerate", "--n", "3", "--r", "3", "--K", "1", "--smin", "3")
    assert code == 0
    assert "# simple size 3: 2" in text
    assert sum(1 for ln in text.splitlines() if ln.startswith("3 3 2 [")) == 2


def test_prove_ss_and_prove_rep():
    assert run("prove-ss", "benaloh", "--sizes", "1,1,1,1,1")[0] == 1
    assert run("prove-rep", "linrank6", "-q", "2", "--max-reps", "1")[0] == 2
    bad = "rank n=2\n1,1,3\n"
    assert run("prove-rep", bad)[0] == 3


def test_server_mode_matches_in_process(monkeypatch):
    client = TestClient(app)

    def post(url, json=None, timeout=None):
        return client.post(url.removeprefix("http://testserver"), json=json)

    import httpx
    monkeypatch.setattr(httpx, "post", post)
    local = run("--json", "prove-rate", "fano", "--rates", "1,1,1,1,1,1,1")
    remote = run("--json", "--server", "http://testserver", "prove-rate", "fano", "--rates", "1,1,1,1,1,1,1")
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "seconds"}  # noqa: E731
    assert local[0] == remote[0] == 0 and strip(local[1]) == strip(remote[1])
    assert run("--server", "http://testserver", "prove-rate", "fano", "--rates", "1,1")[0] == 3


def test_api_validation_and_catalog():
    client = TestClient(app)
    assert client.post("/prove-rate", json={"instance": "fano"}).status_code == 422
    assert client.post("/prove-rate", json={"instance": "fano", "rates": [1]}).status_code == 422
    r = client.post("/transform", json={"instance": "fano", "rates": [1] * 7})
    assert r.status_code == 200 and r.json()["nodes"] == 17
    assert set(client.get("/catalog").json()["networks"]) == set(catalog.NETWORKS)
    assert client.get("/catalog/hn1").json()["text"].startswith("network k=3 n=6")
    assert client.get("/catalog/missing").status_code == 404
