"""JSON input and output shared by the command line.

Inputs may be a bare state/access/pattern document or a bundle holding it
under ``"state"``, ``"access"`` or ``"pattern"``, so the output of
``builtin`` can be piped into any consumer.  ``-`` (or no path) is stdin,
which is read once and reused.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from qsskit.access import AccessStructure
from qsskit.bits import mask_of
from qsskit.errors import FormatError
from qsskit.qstate import PureState
from qsskit.uniformity import PurityPattern

SIG_DIGITS = 12

_stdin_cache: list = []


def read_json(path: str | None):
    """Parse a JSON file, or stdin for ``None``/``-``; a stream of documents is merged."""
    if path in (None, "-"):
        if not _stdin_cache:
            _stdin_cache.append(_parse_stream(sys.stdin.read(), "stdin"))
        return _stdin_cache[0]
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    return _parse_stream(text, path)


def reset_stdin() -> None:
    """Forget cached stdin, so each command invocation reads afresh."""
    _stdin_cache.clear()


def _parse_stream(text: str, where: str):
    """One JSON value, or several concatenated objects merged into a bundle."""
    decoder = json.JSONDecoder()
    docs = []
    idx = 0
    text = text.strip()
    try:
        while idx < len(text):
            doc, end = decoder.raw_decode(text, idx)
            docs.append(doc)
            idx = end
            while idx < len(text) and text[idx].isspace():
                idx += 1
    except json.JSONDecodeError as exc:
        raise FormatError(f"{where} is not valid JSON: {exc}") from exc
    if not docs:
        raise FormatError(f"{where} is empty")
    if len(docs) == 1:
        return docs[0]
    merged = {}
    for doc in docs:
        if not isinstance(doc, dict):
            raise FormatError(f"{where} holds several JSON values that are not objects")
        merged.update(_as_bundle(doc))
    return merged


def _as_bundle(doc: dict) -> dict:
    if "amplitudes" in doc:
        return {"state": doc}
    if "minimal_authorized" in doc:
        return {"access": doc}
    if "fixed" in doc and "n_qubits" in doc:
        return {"pattern": doc}
    return doc


def _pick(doc, key: str, marker: str, path):
    if not isinstance(doc, dict):
        raise FormatError(f"{path or 'stdin'} does not hold a JSON object")
    if marker in doc:
        return doc
    if key in doc:
        return doc[key]
    raise FormatError(f"{path or 'stdin'} holds no {key}")


def load_state(path: str | None) -> PureState:
    return PureState.from_json(_pick(read_json(path), "state", "amplitudes", path))


def load_access(path: str | None) -> AccessStructure:
    return AccessStructure.from_json(_pick(read_json(path), "access", "minimal_authorized", path))


def load_pattern(path: str | None) -> PurityPattern:
    return PurityPattern.from_json(_pick(read_json(path), "pattern", "fixed", path))


def parse_subset(text: str | None) -> int | None:
    """``"1,2,3"`` to a mask; an empty string is the empty set."""
    if text is None:
        return None
    try:
        items = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise FormatError(f"bad subset {text!r}") from exc
    return mask_of(items)


def jsonable(obj):
    """Floats to 12 significant digits, rationals to "p/q", numpy scalars to Python."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.{SIG_DIGITS}g}")
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=1) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def write_files(out_dir, docs: dict[str, dict]) -> list[str]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, doc in docs.items():
        write_json(out / name, doc)
        written.append(str(out / name))
    return written


def bundle(docs: dict[str, dict]) -> dict:
    """Merge built-in documents into one object consumable from a pipe."""
    merged = {}
    for doc in docs.values():
        merged.update(_as_bundle(doc))
    if len(merged) == 1:
        return next(iter(merged.values()))
    return merged
