"""
实例与因子文件的存取

文件为 UTF-8 JSON 文本容器：
    format / version / kind      自描述头
    header                       参数块（n、模型参数、种子、元数据……）
    payloads                     矩阵数据：dtype + shape + base64(小端、行优先)
    checksum                     "sha256:<hex>"，覆盖除 checksum 外的全部内容
矩阵以原始字节保存，读写往返逐位一致。
"""
import base64
import binascii
import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError

from ..config.schema import SbmParams, model_params_from_dict
from ..core.models import CostMatrix, FactorPoint, Graph, ProblemInstance, SignVector
from ..errors import MalformedFileError, StorageError
from ..utils.logger import get_logger

logger = get_logger(__name__)

FORMAT_NAME = "bm-sync"
FORMAT_VERSION = 1
KIND_INSTANCE = "instance"
KIND_FACTOR = "factor"

_DTYPES = {"<f8": np.dtype("<f8"), "<i1": np.dtype("<i1")}

PathLike = Union[str, Path]


def _encode_array(arr: np.ndarray, dtype: str) -> Dict[str, Any]:
    data = np.ascontiguousarray(arr, dtype=_DTYPES[dtype])
    return {
        "dtype": dtype,
        "shape": list(data.shape),
        "data": base64.b64encode(data.tobytes(order="C")).decode("ascii"),
    }


def _decode_array(name: str, block: Any) -> np.ndarray:
    if not isinstance(block, dict):
        raise MalformedFileError(f"payload '{name}' must be an object", field=f"payloads.{name}")
    for key in ("dtype", "shape", "data"):
        if key not in block:
            raise MalformedFileError(f"payload '{name}' is missing '{key}'", field=f"payloads.{name}.{key}")
    dtype = _DTYPES.get(block["dtype"])
    if dtype is None:
        raise MalformedFileError(f"payload '{name}' has unsupported dtype {block['dtype']!r}",
                                 field=f"payloads.{name}.dtype")
    shape = block["shape"]
    if not isinstance(shape, list) or not all(isinstance(s, int) and s >= 0 for s in shape):
        raise MalformedFileError(f"payload '{name}' has invalid shape {shape!r}",
                                 field=f"payloads.{name}.shape")
    try:
        raw = base64.b64decode(block["data"], validate=True)
    except (binascii.Error, TypeError, ValueError) as e:
        raise MalformedFileError(f"payload '{name}' is not valid base64",
                                 field=f"payloads.{name}.data") from e
    expected = int(np.prod(shape, dtype=np.int64)) * dtype.itemsize
    if len(raw) != expected:
        raise MalformedFileError(f"payload '{name}' has {len(raw)} bytes, expected {expected}",
                                 field=f"payloads.{name}.data")
    return np.frombuffer(raw, dtype=dtype).reshape(shape).astype(dtype.type)


def _checksum(body: Dict[str, Any]) -> str:
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def encode_container(kind: str, header: Dict[str, Any],
                     payloads: Dict[str, Optional[Dict[str, Any]]]) -> str:
    """组装容器文本（payloads 为 _encode_array 的结果或 None）"""
    body = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "kind": kind,
        "header": header,
        "payloads": payloads,
    }
    doc = dict(body)
    doc["checksum"] = _checksum(body)
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def decode_container(text: str, expected_kind: str) -> Tuple[Dict[str, Any], Dict[str, Optional[np.ndarray]]]:
    """解析并校验容器，返回 (header, 解码后的矩阵)"""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedFileError(f"file is not a valid container ({e.msg} at line {e.lineno})",
                                 field="document") from e
    if not isinstance(doc, dict):
        raise MalformedFileError("container must be a JSON object", field="document")

    for key in ("format", "version", "kind", "header", "payloads", "checksum"):
        if key not in doc:
            raise MalformedFileError(f"container is missing '{key}'", field=key)
    if doc["format"] != FORMAT_NAME:
        raise MalformedFileError(f"unknown format {doc['format']!r}", field="format")
    if doc["version"] != FORMAT_VERSION:
        raise MalformedFileError(f"unsupported version {doc['version']!r}", field="version")
    if doc["kind"] != expected_kind:
        raise MalformedFileError(f"expected a {expected_kind} file, got {doc['kind']!r}", field="kind")

    body = {k: v for k, v in doc.items() if k != "checksum"}
    if _checksum(body) != doc["checksum"]:
        raise MalformedFileError("checksum mismatch", field="checksum")

    header = doc["header"]
    if not isinstance(header, dict) or not isinstance(doc["payloads"], dict):
        raise MalformedFileError("header and payloads must be objects", field="header")
    arrays = {name: (None if block is None else _decode_array(name, block))
              for name, block in doc["payloads"].items()}
    return header, arrays


def _write_text(path: PathLike, text: str) -> None:
    try:
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    except OSError as e:
        raise StorageError(f"Failed to write {path}: {e}") from e


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise MalformedFileError(f"{path} is not UTF-8 text", field="document") from e
    except OSError as e:
        raise StorageError(f"Failed to read {path}: {e}") from e


def _require(header: Dict[str, Any], key: str) -> Any:
    if key not in header:
        raise MalformedFileError(f"header is missing '{key}'", field=f"header.{key}")
    return header[key]


def instance_to_text(inst: ProblemInstance) -> str:
    header = {
        "n": inst.n,
        "params": inst.params.model_dump(mode="json"),
        "seed": int(inst.seed),
        "truth_balanced": bool(inst.truth.balanced) if inst.truth is not None else False,
        "metadata": inst.metadata,
    }
    payloads = {
        "cost": _encode_array(inst.cost.entries, "<f8"),
        "truth": _encode_array(inst.truth.entries, "<i1") if inst.truth is not None else None,
        "graph": _encode_array(inst.graph.weights, "<f8") if inst.graph is not None else None,
    }
    return encode_container(KIND_INSTANCE, header, payloads)


def instance_from_text(text: str) -> ProblemInstance:
    header, arrays = decode_container(text, KIND_INSTANCE)
    try:
        params = model_params_from_dict(_require(header, "params"))
    except ValidationError as e:
        raise MalformedFileError(f"invalid params block: {e.errors()[0]['msg']}",
                                 field="header.params") from e
    seed = _require(header, "seed")
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise MalformedFileError("seed must be an integer", field="header.seed")
    metadata = header.get("metadata", {})
    if not isinstance(metadata, dict):
        raise MalformedFileError("metadata must be an object", field="header.metadata")

    if arrays.get("cost") is None:
        raise MalformedFileError("cost payload is missing", field="payloads.cost")
    cost = CostMatrix(arrays["cost"])
    if cost.n != _require(header, "n"):
        raise MalformedFileError(f"header n={header['n']} does not match cost {cost.n}×{cost.n}",
                                 field="header.n")

    truth_arr = arrays.get("truth")
    truth = None
    if truth_arr is not None:
        balanced = bool(header.get("truth_balanced", isinstance(params, SbmParams)))
        truth = SignVector(truth_arr, balanced=balanced)
    graph_arr = arrays.get("graph")
    graph = Graph(graph_arr) if graph_arr is not None else None

    return ProblemInstance(cost=cost, params=params, seed=seed, truth=truth, graph=graph,
                           metadata=metadata)


def save_instance(inst: ProblemInstance, path: PathLike) -> None:
    """保存实例"""
    _write_text(path, instance_to_text(inst))
    logger.debug(f"Instance ({inst.model}, n={inst.n}) saved to {path}")


def load_instance(path: PathLike) -> ProblemInstance:
    """读取实例；格式错误抛 MalformedFileError，数据不变量错误抛 InvariantViolationError"""
    inst = instance_from_text(_read_text(path))
    logger.debug(f"Instance ({inst.model}, n={inst.n}) loaded from {path}")
    return inst


def save_factor(Y: FactorPoint, path: PathLike, metadata: Optional[Dict[str, Any]] = None) -> None:
    """保存因子 Y"""
    header = {"n": Y.n, "r": Y.r, "metadata": metadata or {}}
    _write_text(path, encode_container(KIND_FACTOR, header, {"Y": _encode_array(Y.Y, "<f8")}))


def load_factor(path: PathLike) -> FactorPoint:
    """读取因子 Y"""
    header, arrays = decode_container(_read_text(path), KIND_FACTOR)
    Y = arrays.get("Y")
    if Y is None or Y.ndim != 2:
        raise MalformedFileError("factor payload 'Y' is missing or not a matrix", field="payloads.Y")
    if list(Y.shape) != [_require(header, "n"), _require(header, "r")]:
        raise MalformedFileError(f"header shape does not match payload {Y.shape}", field="header")
    return FactorPoint(Y)
