import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from topoproj import PointSet, save_csv
from topoproj.cli import main
from topoproj.service import create_app

from conftest import caterpillar_blobs


@pytest.fixture(scope="module")
def blob_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "blobs.csv"
    save_csv(PointSet(caterpillar_blobs(n_blobs=4, per=250, d=4)), path)
    return path


@pytest.fixture(scope="module")
def client(blob_file):
    app = create_app()
    with TestClient(app) as c:
        c.app_ref = app
        yield c


@pytest.fixture(scope="module")
def ds(client, blob_file):
    with open(blob_file, "rb") as fh:
        r = client.post("/datasets", files={"file": ("blobs.csv", fh)})
    assert r.status_code == 200
    dataset_id = r.json()["dataset_id"]
    r = client.post(f"/datasets/{dataset_id}/mst", json={"method": "exact"})
    assert r.status_code == 200
    return dataset_id


def test_upload_fields_and_reupload(blob_file):
    app = create_app()
    with TestClient(app) as client:
        data = blob_file.read_bytes()
        r1 = client.post("/datasets", files={"file": ("blobs.csv", data)})
        r2 = client.post("/datasets", files={"file": ("blobs.csv", data)})
    a, b = r1.json(), r2.json()
    assert set(a) == {"dataset_id", "n", "d", "checksum"}
    assert a["n"] == 1000 and a["d"] == 4
    assert (a["dataset_id"], b["dataset_id"]) == ("ds-1", "ds-2")
    assert a["checksum"] == b["checksum"]  # same bytes, fresh id


def test_upload_rejects_bad_rows():
    app = create_app()
    with TestClient(app) as client:
        r = client.post("/datasets",
                        files={"file": ("x.csv", b"1.0,2.0\n3.0,oops\n")})
    assert r.status_code == 400
    body = r.json()
    assert body["error"] == "parse" and "row 2" in body["message"]


def test_upload_cap():
    app = create_app(max_upload_bytes=16)
    with TestClient(app) as client:
        r = client.post("/datasets", files={"file": ("x.csv", b"0" * 64)})
    assert r.status_code == 413
    assert r.json()["error"] == "too_large"


def test_unknown_format():
    app = create_app()
    with TestClient(app) as client:
        r = client.post("/datasets", files={"file": ("x.csv", b"1.0\n")},
                        data={"format": "parquet"})
    assert r.status_code == 400 and r.json()["error"] == "format"


def test_endpoints_404_unknown_dataset(client):
    assert client.post("/datasets/ds-99/mst", json={}).status_code == 404
    assert client.get("/datasets/ds-99/hierarchy").status_code == 404
    assert client.post("/datasets/ds-99/layout", json={}).status_code == 404


def test_cross_origin_pages_may_call_us(client):
    # the explorer is a static page on some other port
    origin = {"Origin": "http://localhost:8080"}
    r = client.get("/datasets/ds-99/hierarchy", headers=origin)
    assert r.headers["access-control-allow-origin"] == "*"
    r = client.options("/datasets/ds-99/layout",
                       headers={**origin,
                                "Access-Control-Request-Method": "POST",
                                "Access-Control-Request-Headers": "content-type"})
    assert r.status_code == 200
    assert r.headers["access-control-allow-origin"] == "*"


def test_hierarchy_and_layout_need_mst(client, blob_file):
    r = client.post("/datasets", files={"file": ("b.csv", blob_file.read_bytes())})
    fresh = r.json()["dataset_id"]
    r = client.get(f"/datasets/{fresh}/hierarchy")
    assert r.status_code == 412 and r.json()["error"] == "no_mst"
    r = client.post(f"/datasets/{fresh}/layout", json={"selected": []})
    assert r.status_code == 412


def test_mst_validates_method_and_params(client, ds):
    r = client.post(f"/datasets/{ds}/mst", json={"method": "sloppy"})
    assert r.status_code == 422 and r.json()["error"] == "method"
    r = client.post(f"/datasets/{ds}/mst",
                    json={"method": "approx", "params": {"R": 64, "L": 32}})
    assert r.status_code == 422 and r.json()["error"] == "params"
    # rebuild exact for the rest of the module
    r = client.post(f"/datasets/{ds}/mst", json={"method": "exact"})
    assert r.status_code == 200
    body = r.json()
    assert set(body) == {"total_weight", "l_max", "seconds"}
    assert body["total_weight"] > 0 and body["l_max"] > 0


def test_four_blobs_at_one_percent(client, ds):
    r = client.get(f"/datasets/{ds}/hierarchy", params={"eta": "1%"})
    assert r.status_code == 200
    body = r.json()
    assert body["eta"] == 10
    coi = body["hierarchy"]["components_of_interest"]
    assert len(coi) == 4
    sizes = {node["id"]: node["size"] for node in body["hierarchy"]["nodes"]}
    assert [sizes[c] for c in coi] == [250, 250, 250, 250]
    flagged = [n for n in body["hierarchy"]["nodes"] if n["component_of_interest"]]
    assert sorted(n["id"] for n in flagged) == sorted(coi)
    boxes = [b for b in body["treemap"] if b["component_of_interest"]]
    assert len(boxes) == 4


def test_hierarchy_cache_returns_equal_bytes(client, ds):
    r1 = client.get(f"/datasets/{ds}/hierarchy", params={"eta": "1%"})
    r2 = client.get(f"/datasets/{ds}/hierarchy", params={"eta": "10"})
    assert r1.content == r2.content  # same resolved eta, cached bytes
    r3 = client.get(f"/datasets/{ds}/hierarchy")  # default is 1%
    assert r3.content == r1.content


def test_eta_validation(client, ds):
    for bad in ("0", "150%", "-3", "oops"):
        r = client.get(f"/datasets/{ds}/hierarchy", params={"eta": bad})
        assert r.status_code == 422, bad
        assert r.json()["error"] == "eta"


def test_eta_above_n_single_root(client, ds):
    r = client.get(f"/datasets/{ds}/hierarchy", params={"eta": "5000"})
    assert r.status_code == 200
    body = r.json()
    assert body["hierarchy"]["components_of_interest"] == []
    assert len(body["treemap"]) == 1
    # restore the working eta for later tests
    client.get(f"/datasets/{ds}/hierarchy", params={"eta": "1%"})


def test_layout_validates_selection(client, ds):
    r = client.get(f"/datasets/{ds}/hierarchy", params={"eta": "1%"})
    coi = r.json()["hierarchy"]["components_of_interest"]
    r = client.post(f"/datasets/{ds}/layout",
                    json={"selected": [coi[0], 123456]})
    assert r.status_code == 422
    body = r.json()
    assert body["error"] == "selection" and body["invalid"] == [123456]
    r = client.post(f"/datasets/{ds}/layout", json={"selected": "all"})
    assert r.status_code == 422
    r = client.post(f"/datasets/{ds}/layout",
                    json={"selected": coi, "alpha_max": 0.5})
    assert r.status_code == 422 and r.json()["error"] == "params"


def test_layout_empty_selection_is_plain(client, ds):
    r = client.post(f"/datasets/{ds}/layout", json={"selected": []})
    assert r.status_code == 200
    body = r.json()
    assert body["n"] == 1000
    assert body["components"] == []
    assert all(c is None for c in body["component_of"])


def test_layout_selection_scales_components(client, ds):
    coi = client.get(f"/datasets/{ds}/hierarchy",
                     params={"eta": "1%"}).json()["hierarchy"]["components_of_interest"]
    r = client.post(f"/datasets/{ds}/layout", json={"selected": coi[:2]})
    assert r.status_code == 200
    body = r.json()
    scaled = [c["id"] for c in body["components"]]
    assert sorted(scaled) == sorted(coi[:2])
    for comp in body["components"]:
        assert comp["alpha"] >= 1.0 and comp["size"] == 250
        assert len(comp["hull"]) >= 3
    members = [i for i, c in enumerate(body["component_of"]) if c is not None]
    assert len(members) == 500


def test_layout_matches_cli_bytes(client, ds, blob_file, tmp_path):
    out = tmp_path / "cli"
    assert main(["project", "--input", str(blob_file), "--eta", "1%",
                 "--out", str(out)]) == 0
    coi = client.get(f"/datasets/{ds}/hierarchy",
                     params={"eta": "1%"}).json()["hierarchy"]["components_of_interest"]
    r = client.post(f"/datasets/{ds}/layout", json={"selected": coi})
    assert r.content == (out / "layout.json").read_bytes()
    r = client.get(f"/datasets/{ds}/hierarchy", params={"eta": "1%"})
    assert r.content == (out / "hierarchy.json").read_bytes()


def test_busy_dataset_conflicts(client, ds):
    lock = client.app_ref.state.datasets[ds].lock
    assert lock.acquire(blocking=False)
    try:
        r = client.get(f"/datasets/{ds}/hierarchy", params={"eta": "1%"})
        assert r.status_code == 409 and r.json()["error"] == "busy"
        r = client.post(f"/datasets/{ds}/mst", json={})
        assert r.status_code == 409
        r = client.post(f"/datasets/{ds}/layout", json={"selected": []})
        assert r.status_code == 409
    finally:
        lock.release()


def test_fvecs_upload():
    import struct
    rows = []
    for i in range(8):
        vec = [float(i), float(i) + 0.5, 1.0]
        rows.append(struct.pack("<i", 3) + struct.pack("<3f", *vec))
    app = create_app()
    with TestClient(app) as client:
        r = client.post("/datasets", files={"file": ("pts.fvecs", b"".join(rows))})
    assert r.status_code == 200
    body = r.json()
    assert body["n"] == 8 and body["d"] == 3
