"""JSON system documents, JSON-lines signal files and CSV matrix export."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from .core import GaborSystem, canonical_residues
from .errors import GaborError


class DocumentError(GaborError):
    """Malformed input file; the message names the line and field."""


@dataclass
class SystemDocument:
    N: int
    g: list[complex]
    L: list[int]
    K: list[int]
    meta: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_system(cls, sys: GaborSystem, meta=None) -> "SystemDocument":
        return cls(sys.N, [complex(z) for z in sys.g], list(sys.L), list(sys.K), dict(meta or {}))

    def to_system(self) -> GaborSystem:
        return GaborSystem(np.array(self.g, dtype=complex), self.L, self.K)

    def to_json(self) -> dict:
        out = {
            "N": self.N,
            "g": [[z.real, z.imag] for z in self.g],
            "L": list(self.L),
            "K": list(self.K),
        }
        if self.meta:
            out["meta"] = self.meta
        return out


def _complex_entry(value, where: str) -> complex:
    if isinstance(value, bool):
        raise DocumentError(f"{where}: expected a number or [re, im] pair, got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise DocumentError(f"{where}: expected a number or [re, im] pair, got {value!r}")


def _int_list(value, where: str) -> list[int]:
    if not isinstance(value, list) or not value:
        raise DocumentError(f"{where}: expected a nonempty list of integers")
    for i, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, int):
            raise DocumentError(f"{where}[{i}]: expected an integer, got {v!r}")
    return list(value)


def parse_document(text: str, source: str = "<input>") -> SystemDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise DocumentError(f"{source}: top level must be a JSON object")
    for key in ("N", "g", "L", "K"):
        if key not in raw:
            raise DocumentError(f"{source}: missing field {key!r}")
    n = raw["N"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DocumentError(f"{source}: field 'N': expected a positive integer, got {n!r}")
    if not isinstance(raw["g"], list):
        raise DocumentError(f"{source}: field 'g': expected a list")
    g = [_complex_entry(v, f"{source}: field 'g[{i}]'") for i, v in enumerate(raw["g"])]
    if len(g) != n:
        raise DocumentError(f"{source}: field 'g': length {len(g)} != N={n}")
    if not any(g):
        raise DocumentError(f"{source}: field 'g': window must not be zero")
    L = list(canonical_residues(_int_list(raw["L"], f"{source}: field 'L'"), n))
    K = list(canonical_residues(_int_list(raw["K"], f"{source}: field 'K'"), n))
    meta = raw.get("meta", {})
    if not isinstance(meta, dict):
        raise DocumentError(f"{source}: field 'meta': expected an object")
    return SystemDocument(n, g, L, K, meta)


def emit_document(doc: SystemDocument) -> str:
    return json.dumps(doc.to_json(), indent=2) + "\n"


def parse_signals(text: str, n: int, source: str = "<signals>") -> list[np.ndarray]:
    """One JSON array per line; entries are numbers or [re, im] pairs."""
    signals = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{source}: line {lineno}, column {exc.colno}: {exc.msg}") from None
        if not isinstance(raw, list) or len(raw) != n:
            raise DocumentError(f"{source}: line {lineno}: expected an array of length {n}")
        signals.append(np.array([_complex_entry(v, f"{source}: line {lineno}, entry {i}") for i, v in enumerate(raw)]))
    return signals


def emit_signals(signals: Iterable[np.ndarray]) -> str:
    return "".join(json.dumps([[float(z.real), float(z.imag)] for z in s]) + "\n" for s in signals)


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def matrix_to_csv(a) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(a, dtype=complex):
        writer.writerow(format_complex(z) for z in row)
    return buf.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [[complex(cell) for cell in row] for row in csv.reader(io.StringIO(text)) if row]
    return np.array(rows, dtype=complex)
