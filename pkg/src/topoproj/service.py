"""HTTP facade the explorer UI drives.

Thin JSON layer over the pipeline: upload a dataset, build its tree, query
the simplified hierarchy, regenerate layouts for a selection. Per-dataset
compute is serialized with a non-blocking lock (409 on contention); hierarchy
responses are cached per resolved eta so equal queries return equal bytes.
"""

from __future__ import annotations

import json
import tempfile
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .data import PointSet, load_csv, load_fvecs
from .filtration import (MergeTree, SimplifiedTree, build_merge_tree,
                         components_point_map, default_eta, hierarchy_json,
                         resolve_eta, simplify)
from .layout import ScalingParams, topomap_project
from .mst import SpanningTree, exact_emst
from .treemap import treemap_json, treemap_layout
from .vamana import VamanaParams, amst


@dataclass
class _Dataset:
    ps: PointSet
    lock: threading.Lock = field(default_factory=threading.Lock)
    tree: Optional[SpanningTree] = None
    merge: Optional[MergeTree] = None
    hierarchy_cache: dict = field(default_factory=dict)  # eta -> response bytes
    simplified: dict = field(default_factory=dict)  # eta -> SimplifiedTree
    current_eta: Optional[int] = None


def _error(status: int, code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"error": code, "message": message, **extra})


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, separators=(",", ":"), allow_nan=False) + "\n").encode()


def create_app(max_upload_bytes: int = 64 * 1024 * 1024) -> FastAPI:
    app = FastAPI(title="topoproj", docs_url=None, redoc_url=None)
    # the explorer page is served statically from wherever; let it call us
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    datasets: dict = {}
    counter = {"next": 1}
    registry_lock = threading.Lock()
    app.state.datasets = datasets

    def get_dataset(dataset_id: str) -> Optional[_Dataset]:
        return datasets.get(dataset_id)

    @app.post("/datasets")
    async def upload_dataset(file: UploadFile = File(...),
                             format: Optional[str] = Form(None)):
        raw = await file.read()
        if len(raw) > max_upload_bytes:
            return _error(413, "too_large",
                          f"upload is {len(raw)} bytes, cap is {max_upload_bytes}")
        name = file.filename or "upload"
        fmt = format or ("fvecs" if name.endswith(".fvecs") else "csv")
        if fmt not in ("csv", "fvecs"):
            return _error(400, "format", f"unknown format: {fmt}")
        suffix = ".fvecs" if fmt == "fvecs" else ".csv"
        try:
            with tempfile.NamedTemporaryFile(suffix=suffix) as tmp:
                tmp.write(raw)
                tmp.flush()
                loader = load_fvecs if fmt == "fvecs" else load_csv
                ps = loader(tmp.name, name=name)
        except ValueError as e:
            return _error(400, "parse", str(e))
        with registry_lock:
            dataset_id = f"ds-{counter['next']}"
            counter["next"] += 1
            datasets[dataset_id] = _Dataset(ps=ps)
        return {"dataset_id": dataset_id, "n": ps.n, "d": ps.d,
                "checksum": ps.meta.checksum}

    @app.post("/datasets/{dataset_id}/mst")
    async def compute_mst(dataset_id: str, request: Request):
        ds = get_dataset(dataset_id)
        if ds is None:
            return _error(404, "unknown_dataset", f"no dataset {dataset_id}")
        try:
            body = await request.json()
        except json.JSONDecodeError:
            body = {}
        method = body.get("method", "exact")
        if method not in ("exact", "approx"):
            return _error(422, "method", f"unknown method: {method}")
        if not ds.lock.acquire(blocking=False):
            return _error(409, "busy", f"computation in flight for {dataset_id}")
        try:
            t0 = time.perf_counter()
            if method == "exact":
                tree = exact_emst(ds.ps)
            else:
                raw = body.get("params") or {}
                try:
                    params = VamanaParams(
                        alpha=raw.get("alpha", 1.3), L=raw.get("L", 100),
                        R=raw.get("R", 100), passes=raw.get("passes", 2))
                except (ValueError, TypeError) as e:
                    return _error(422, "params", str(e))
                tree = amst(ds.ps, params, seed=int(body.get("seed", 0)))
            seconds = time.perf_counter() - t0
            ds.tree = tree
            ds.merge = build_merge_tree(tree)
            ds.hierarchy_cache.clear()
            ds.simplified.clear()
            ds.current_eta = None
        finally:
            ds.lock.release()
        return {"total_weight": tree.total_weight, "l_max": tree.l_max,
                "seconds": seconds}

    def materialize(ds: _Dataset, eta: int) -> SimplifiedTree:
        if eta not in ds.simplified:
            s = simplify(ds.merge, eta)
            ds.simplified[eta] = s
            ds.hierarchy_cache[eta] = _json_bytes({
                "eta": eta,
                "hierarchy": hierarchy_json(ds.merge, s),
                "treemap": treemap_json(treemap_layout(s, ds.merge)),
            })
        ds.current_eta = eta
        return ds.simplified[eta]

    @app.get("/datasets/{dataset_id}/hierarchy")
    async def get_hierarchy(dataset_id: str, eta: Optional[str] = None):
        ds = get_dataset(dataset_id)
        if ds is None:
            return _error(404, "unknown_dataset", f"no dataset {dataset_id}")
        if ds.tree is None:
            return _error(412, "no_mst", "compute the spanning tree first")
        try:
            value = default_eta(ds.ps.n) if eta is None else resolve_eta(eta, ds.ps.n)
        except ValueError as e:
            return _error(422, "eta", str(e))
        if not ds.lock.acquire(blocking=False):
            return _error(409, "busy", f"computation in flight for {dataset_id}")
        try:
            materialize(ds, value)
            payload = ds.hierarchy_cache[value]
        finally:
            ds.lock.release()
        return Response(content=payload, media_type="application/json")

    @app.post("/datasets/{dataset_id}/layout")
    async def compute_layout(dataset_id: str, request: Request):
        ds = get_dataset(dataset_id)
        if ds is None:
            return _error(404, "unknown_dataset", f"no dataset {dataset_id}")
        if ds.tree is None:
            return _error(412, "no_mst", "compute the spanning tree first")
        try:
            body = await request.json()
        except json.JSONDecodeError:
            body = {}
        selected = body.get("selected", [])
        if not isinstance(selected, list):
            return _error(422, "selection", "selected must be a list of node ids")
        c = float(body.get("c", 2.0))
        alpha_max = body.get("alpha_max")
        alpha_max = float("inf") if alpha_max is None else float(alpha_max)
        try:
            params = ScalingParams(c=c, alpha_max=alpha_max)
        except ValueError as e:
            return _error(422, "params", str(e))
        if not ds.lock.acquire(blocking=False):
            return _error(409, "busy", f"computation in flight for {dataset_id}")
        try:
            s = materialize(ds, ds.current_eta if ds.current_eta is not None
                            else default_eta(ds.ps.n))
            interest = set(int(x) for x in s.components_of_interest)
            bad = [x for x in selected if int(x) not in interest]
            if bad:
                return _error(422, "selection",
                              "not components of interest of the current hierarchy",
                              invalid=bad)
            comp_map = components_point_map(s, ds.merge)
            keep = np.isin(comp_map, np.asarray(sorted(int(x) for x in selected),
                                                dtype=np.int64))
            comp_map = np.where(keep, comp_map, -1)
            layout = topomap_project(ds.ps, ds.tree, components=comp_map,
                                     params=params)
            payload = _json_bytes(layout.to_json())
        finally:
            ds.lock.release()
        return Response(content=payload, media_type="application/json")

    return app
