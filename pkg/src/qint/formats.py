"""JSON and CSV formats: algebra and hom definitions, step-function literals, reports."""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io
import json
from importlib import resources
from pathlib import Path as FsPath
from typing import Any, Mapping

import jsonschema
import numpy as np

from . import __version__
from .algebra import (
    AlgebraHom,
    RewriteRule,
    RewriteSystem,
    StructureConstantAlgebra,
    WeightQuiver,
    algebra_from_admissible_quiver,
    algebra_from_rewrite_system,
)
from .errors import ConfigError, QintError
from .fixtures import ALGEBRAS, HOMS, algebra_fixture, hom_fixture
from .norms import BasisNormFn, PNormSpec
from .stepfn import Box, Domain, StepFunction

_PATH = {
    "oneOf": [
        {"type": "string", "minLength": 1},
        {"type": "array", "items": {"type": "string"}, "minItems": 1},
        {
            "type": "object",
            "required": ["vertex"],
            "properties": {"vertex": {"type": ["string", "integer"]}},
            "additionalProperties": False,
        },
    ]
}

_COMBO = {"type": "object", "additionalProperties": {"type": "number"}}
_TERMS = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["label", "coeff"],
        "properties": {"label": {"type": "string"}, "coeff": {"type": "number"}},
        "additionalProperties": False,
    },
}

NORM_SCHEMA = {
    "type": "object",
    "properties": {
        "p": {"type": "number", "minimum": 1},
        "basis_norm": {"type": "object", "additionalProperties": {"type": "number", "minimum": 0}},
    },
    "additionalProperties": False,
}

ALGEBRA_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "vertices": {"type": "array", "items": {"type": ["string", "integer"]}, "minItems": 1},
        "arrows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "src", "tgt"],
                "properties": {
                    "id": {"type": "string"},
                    "src": {"type": ["string", "integer"]},
                    "tgt": {"type": ["string", "integer"]},
                },
                "additionalProperties": False,
            },
        },
        "weights": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 1}},
        "relations": {
            "type": "object",
            "properties": {
                "monomial": {"type": "array", "items": _PATH},
                "rewrite": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["lhs", "rhs"],
                        "properties": {
                            "lhs": _PATH,
                            "rhs": {
                                "type": "array",
                                "items": {
                                    "type": "object",
                                    "required": ["path", "coeff"],
                                    "properties": {"path": _PATH, "coeff": {"type": "number"}},
                                    "additionalProperties": False,
                                },
                            },
                        },
                        "additionalProperties": False,
                    },
                },
                "normal_form_basis": {"type": "array", "items": _PATH},
            },
            "additionalProperties": False,
        },
        "cutoff": {"type": "integer", "minimum": 1},
        "max_reduction_steps": {"type": "integer", "minimum": 1},
        "norm": NORM_SCHEMA,
        "structure_constants": {
            "type": "object",
            "required": ["basis", "products", "unit"],
            "properties": {
                "basis": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                "products": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["left", "right", "result"],
                        "properties": {
                            "left": {"type": "string"},
                            "right": {"type": "string"},
                            "result": _COMBO,
                        },
                        "additionalProperties": False,
                    },
                },
                "unit": _COMBO,
                "idempotents": {"type": "array", "items": _COMBO},
            },
            "additionalProperties": False,
        },
    },
    "anyOf": [{"required": ["vertices", "arrows"]}, {"required": ["structure_constants"]}],
    "additionalProperties": False,
}

HOM_SCHEMA = {
    "type": "object",
    "required": ["domain", "codomain"],
    "properties": {
        "name": {"type": "string"},
        "domain": {"type": ["string", "object"]},
        "codomain": {"type": ["string", "object"]},
        "matrix": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "basis_map": {"type": "object", "additionalProperties": {"anyOf": [_COMBO, _TERMS]}},
    },
    "oneOf": [{"required": ["matrix"]}, {"required": ["basis_map"]}],
    "additionalProperties": False,
}

STEP_SCHEMA = {
    "type": "object",
    "required": ["pieces"],
    "properties": {
        "pieces": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["box", "coeff"],
                "properties": {
                    "box": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "prefixItems": [
                                {"type": "number"},
                                {"type": "number"},
                                {"enum": ["co", "cc", "oc", "oo"]},
                            ],
                            "minItems": 3,
                            "maxItems": 3,
                        },
                        "minItems": 1,
                    },
                    "coeff": _COMBO,
                },
                "additionalProperties": False,
            },
        }
    },
    "additionalProperties": True,
}


# ---------------------------------------------------------------- reading


def read_json(source: str | FsPath) -> Any:
    """Parse a JSON file, turning syntax errors into ConfigError with line and column."""
    p = FsPath(source)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read {p}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{p}:{e.lineno}:{e.colno}: {e.msg}") from None


def validate(obj: Any, schema: dict, where: str = "input") -> None:
    v = jsonschema.Draft202012Validator(schema)
    errs = sorted(v.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errs:
        e = errs[0]
        ptr = "/" + "/".join(str(x) for x in e.absolute_path)
        raise ConfigError(f"{where}: schema error at {ptr}: {e.message}")


def data_file(name: str) -> FsPath:
    return FsPath(str(resources.files("qint") / "data" / name))


def _load(source, schema, where):
    if isinstance(source, Mapping):
        obj = source
    else:
        obj = read_json(source)
        where = str(source)
    validate(obj, schema, where)
    return obj


def _path(q: WeightQuiver, spec):
    if isinstance(spec, dict):
        return q.trivial(spec["vertex"])
    if isinstance(spec, str):
        spec = spec.split()
    return q.path(*spec)


def algebra_from_json(obj: Mapping, where: str = "algebra", check: bool = True):
    """Build the algebra described by an already-validated definition; returns (algebra, norm spec or None)."""
    name = obj.get("name", where)
    try:
        if "structure_constants" in obj:
            sc = obj["structure_constants"]
            labels = sc["basis"]
            idx = {l: i for i, l in enumerate(labels)}
            if len(idx) != len(labels):
                raise ConfigError("duplicate basis labels")
            n = len(labels)
            T = np.zeros((n, n, n))
            for entry in sc["products"]:
                i, j = idx[entry["left"]], idx[entry["right"]]
                for lab, c in entry["result"].items():
                    T[i, j, idx[lab]] += c
            unit = np.zeros(n)
            for lab, c in sc["unit"].items():
                unit[idx[lab]] += c
            idem = None
            if "idempotents" in sc:
                idem = np.zeros((len(sc["idempotents"]), n))
                for r, e in enumerate(sc["idempotents"]):
                    for lab, c in e.items():
                        idem[r, idx[lab]] += c
            alg = StructureConstantAlgebra(labels, T, unit, idem, name=name)
        else:
            q = WeightQuiver(obj["vertices"], [(a["id"], a["src"], a["tgt"]) for a in obj["arrows"]], obj.get("weights"))
            rel = obj.get("relations", {})
            if "rewrite" in rel or "normal_form_basis" in rel:
                if "normal_form_basis" not in rel:
                    raise ConfigError("rewrite relations need a normal_form_basis")
                rules = [
                    RewriteRule(_path(q, r["lhs"]), [(_path(q, t["path"]), float(t["coeff"])) for t in r["rhs"]])
                    for r in rel.get("rewrite", [])
                ]
                rules += [RewriteRule(_path(q, m), []) for m in rel.get("monomial", [])]
                rw = RewriteSystem(rules, [_path(q, p) for p in rel["normal_form_basis"]])
                alg = algebra_from_rewrite_system(q, rw, obj.get("max_reduction_steps", 10_000), name=name, check=check)
            else:
                if "cutoff" not in obj:
                    raise ConfigError("monomial presentations need a cutoff")
                mon = [_path(q, m) for m in rel.get("monomial", [])]
                alg = algebra_from_admissible_quiver(q, mon, obj["cutoff"], name=name, check=check)
    except KeyError as e:
        raise ConfigError(f"{where}: unknown label {e}") from None
    spec = None
    if "norm" in obj:
        nb = obj["norm"]
        spec = PNormSpec(float(nb.get("p", 1.0)), BasisNormFn.from_mapping(alg, nb.get("basis_norm", {})))
    return alg, spec


def load_algebra(source, check: bool = True):
    """Fixture name, file path or dict -> (algebra, norm spec or None)."""
    if isinstance(source, str) and source in ALGEBRAS:
        return algebra_fixture(source), None
    if isinstance(source, str) and not FsPath(source).exists() and not source.endswith(".json"):
        raise ConfigError(f"{source!r} is neither a fixture name nor a file; fixtures: {sorted(ALGEBRAS)}")
    obj = _load(source, ALGEBRA_SCHEMA, "algebra")
    return algebra_from_json(obj, FsPath(str(source)).stem if not isinstance(source, Mapping) else "algebra", check)


def load_hom(source, check: bool = False) -> AlgebraHom:
    """Fixture name, file path or dict; algebras referenced by fixture name, file or inline definition."""
    if isinstance(source, str) and source in HOMS:
        return hom_fixture(source)
    if isinstance(source, str) and not FsPath(source).exists() and not source.endswith(".json"):
        raise ConfigError(f"{source!r} is neither a hom fixture nor a file; fixtures: {sorted(HOMS)}")
    obj = _load(source, HOM_SCHEMA, "hom")
    base = FsPath(str(source)).parent if not isinstance(source, Mapping) else FsPath(".")

    def resolve(ref):
        if isinstance(ref, str) and ref not in ALGEBRAS and not FsPath(ref).is_absolute():
            cand = base / ref
            if cand.exists():
                ref = str(cand)
        return load_algebra(ref)[0]

    A, B = resolve(obj["domain"]), resolve(obj["codomain"])
    name = obj.get("name", "hom")
    try:
        if "matrix" in obj:
            m = np.array(obj["matrix"], dtype=float)
            if m.shape != (B.dim, A.dim):
                raise ConfigError(f"hom matrix has shape {m.shape}, expected {(B.dim, A.dim)}")
            return AlgebraHom(A, B, m, check=check, name=name)
        images = {}
        for src, img in obj["basis_map"].items():
            if isinstance(img, list):
                combo: dict[str, float] = {}
                for t in img:
                    combo[t["label"]] = combo.get(t["label"], 0.0) + t["coeff"]
                img = combo
            images[src] = img
        return AlgebraHom.from_basis_map(A, B, images, check=check, name=name)
    except KeyError as e:
        raise ConfigError(f"hom: unknown label {e}") from None


def step_from_json(obj: Mapping, domain: Domain, algebra: StructureConstantAlgebra) -> StepFunction:
    validate(obj, STEP_SCHEMA, "step function")
    pieces = []
    for p in obj["pieces"]:
        if len(p["box"]) != domain.dim:
            raise ConfigError(f"box has {len(p['box'])} axes, domain has {domain.dim}")
        lo = [a[0] for a in p["box"]]
        hi = [a[1] for a in p["box"]]
        flags = [a[2] for a in p["box"]]
        try:
            b = algebra.from_dict(p["coeff"])
        except KeyError as e:
            raise ConfigError(str(e)) from None
        pieces.append((Box.make(lo, hi, flags), b))
    try:
        return StepFunction.from_pieces(domain, algebra, pieces)
    except QintError as e:
        raise ConfigError(f"step function: {e}") from None


def step_to_json(f: StepFunction) -> dict:
    return {
        "domain": f.domain.to_dict(),
        "pieces": [
            {
                "box": [[lo, hi, fl] for lo, hi, fl in zip(box.lo, box.hi, box.flags)],
                "coeff": b.to_dict(drop_zeros=True),
            }
            for box, b in f.pieces
        ],
    }


# ---------------------------------------------------------------- hashing and reports


def fingerprint(obj) -> str:
    """Stable sha256 of an algebra, hom, domain, handle or plain JSON-able value."""
    h = hashlib.sha256()
    if isinstance(obj, StructureConstantAlgebra):
        h.update(json.dumps(obj.labels).encode())
        h.update(np.ascontiguousarray(obj.table).tobytes())
        h.update(np.ascontiguousarray(obj.unit).tobytes())
    elif isinstance(obj, AlgebraHom):
        h.update(fingerprint(obj.domain).encode())
        h.update(fingerprint(obj.codomain).encode())
        h.update(np.ascontiguousarray(obj.matrix).tobytes())
    elif isinstance(obj, Domain):
        h.update(json.dumps(obj.to_dict()).encode())
    elif hasattr(obj, "params") and hasattr(obj, "name"):
        h.update(json.dumps({"name": obj.name, "params": obj.params}, sort_keys=True, default=str).encode())
    else:
        h.update(json.dumps(obj, sort_keys=True, default=str).encode())
    return h.hexdigest()


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, float) and (x != x or x in (float("inf"), float("-inf"))):
        return str(x)
    return x


def report_json(command: str, result: Mapping, *, seed: int | None, tolerances: Mapping, fixtures: Mapping[str, str], exit_code: int, timestamp: str | None = None) -> str:
    """Pretty JSON with sorted keys; the timestamp sits alone on its own line."""
    ts = timestamp or _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()
    doc = {
        "engine": {"name": "qint", "version": __version__},
        "command": command,
        "seed": seed,
        "tolerances": dict(tolerances),
        "fixtures": dict(fixtures),
        "exit_code": exit_code,
        "result": result,
        "timestamp": ts,
    }
    return json.dumps(_clean(doc), indent=2, sort_keys=True) + "\n"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)  # RFC 4180 line endings
    w.writerow(header)
    for r in rows:
        w.writerow(r)
    return buf.getvalue()
