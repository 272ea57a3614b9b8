"""JSON-lines records for counts, density matrices and reports.

Complex numbers are ``{"re": x, "im": y}`` with floats written by ``repr``
(shortest round-trip form), so a matrix read back compares exactly.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import IO, Iterable, Iterator, Optional, Union

import numpy as np

from .deutsch import Oracle
from .numkit import as_matrix
from .reference import matrix_from_entries
from .tomography import CountsRecord

__all__ = [
    "RecordError",
    "complex_to_json",
    "matrix_to_json",
    "matrix_record",
    "parse_matrix_record",
    "dumps",
    "read_jsonl",
    "write_jsonl",
    "read_counts",
    "read_matrices",
]

PathLike = Union[str, Path]


class RecordError(ValueError):
    pass


def complex_to_json(z) -> dict:
    z = complex(z)
    return {"re": float(z.real), "im": float(z.imag)}


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[complex_to_json(z) for z in row] for row in m]


def matrix_record(oracle: Optional[Oracle], m, **meta) -> dict:
    m = as_matrix(m)
    rec = {
        "oracle": Oracle.parse(oracle).value if oracle is not None else None,
        "dim": int(m.shape[0]),
        "entries": matrix_to_json(m),
    }
    rec.update(meta)
    return rec


def parse_matrix_record(rec: dict) -> tuple[Optional[Oracle], np.ndarray]:
    try:
        m = matrix_from_entries(rec["entries"])
        dim = int(rec.get("dim", m.shape[0]))
    except (KeyError, TypeError, ValueError) as exc:
        raise RecordError(f"malformed matrix record: {exc}") from exc
    if m.shape != (dim, dim):
        raise RecordError(f"matrix record declares dim {dim} but has shape {m.shape}")
    oracle = rec.get("oracle")
    return (Oracle.parse(oracle) if oracle is not None else None), m


def dumps(obj) -> str:
    return json.dumps(obj, allow_nan=False)


def read_jsonl(path: PathLike) -> Iterator[dict]:
    text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            yield json.loads(line)
        except json.JSONDecodeError as exc:
            raise RecordError(f"{path}:{lineno}: {exc}") from exc


def write_jsonl(records: Iterable[dict], out: IO[str]) -> None:
    for r in records:
        out.write(dumps(r))
        out.write("\n")


def read_counts(path: PathLike) -> list[CountsRecord]:
    try:
        return [CountsRecord.from_dict(d) for d in read_jsonl(path)]
    except (KeyError, TypeError) as exc:
        raise RecordError(f"{path}: malformed counts record ({exc})") from exc


def read_matrices(path: PathLike) -> dict:
    """``{oracle: matrix}`` from a matrix JSON-lines file."""
    out = {}
    for rec in read_jsonl(path):
        oracle, m = parse_matrix_record(rec)
        if oracle is None:
            raise RecordError(f"{path}: matrix record without an oracle name")
        out[oracle] = m
    return out
