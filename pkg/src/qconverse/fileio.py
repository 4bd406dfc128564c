"""Problem-file parsing and deterministic report serialization.

Problem files are JSON documents::

    {
      "sources":  {"s": {"p": [0.5, 0.5], "states": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}},
      "channels": {"deph": {"kind": "dephasing", "dim": 2},
                   "noisy": {"kind": "depolarizing", "dim": 2, "noise": 0.25},
                   "custom": {"kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}},
      "jobs": [{"command": "coherent-info", "source": "s", "channel": "deph"}]
    }

Complex scalars are ``[re, im]`` pairs (a bare real number is accepted too),
matrices are row-major nested lists and state vectors are flat lists.
"""

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import channels as ch
from .errors import ProblemFileError, QConverseError
from .quantities import is_divergent
from .states import Source

SCHEMA_VERSION = 1
BUILTIN_CHANNEL = re.compile(r"^(identity|dephasing|depolarizing:(?P<noise>[0-9.eE+-]+))$")
CHANNEL_KINDS = ("identity", "dephasing", "depolarizing", "unitary", "kraus")


@dataclass
class ProblemFile:
    sources: dict = field(default_factory=dict)
    channels: dict = field(default_factory=dict)
    jobs: list = field(default_factory=list)


def _line_of(text, needle):
    pos = text.find(f'"{needle}"')
    return text.count("\n", 0, pos) + 1 if pos >= 0 else None


def parse_complex(x, where):
    if isinstance(x, bool):
        raise ProblemFileError(f"{where}: expected a number or [re, im], got {x!r}")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in x
    ):
        return complex(x[0], x[1])
    raise ProblemFileError(f"{where}: expected a number or [re, im], got {x!r}")


def parse_vector(v, where) -> np.ndarray:
    if not isinstance(v, list) or not v:
        raise ProblemFileError(f"{where}: expected a non-empty list of complex scalars")
    return np.array([parse_complex(x, f"{where}[{i}]") for i, x in enumerate(v)])


def parse_matrix(m, where) -> np.ndarray:
    if not isinstance(m, list) or not m:
        raise ProblemFileError(f"{where}: expected a non-empty list of rows")
    rows = [parse_vector(r, f"{where} row {i}") for i, r in enumerate(m)]
    if len({len(r) for r in rows}) != 1:
        raise ProblemFileError(f"{where}: rows have unequal lengths")
    return np.array(rows)


def parse_source(name, spec) -> Source:
    if not isinstance(spec, dict):
        raise ProblemFileError(f"source {name!r} must be an object")
    probs = spec.get("p", spec.get("probs"))
    states = spec.get("states")
    if probs is None or states is None:
        raise ProblemFileError(f"source {name!r} needs 'p' and 'states'")
    vecs = [parse_vector(v, f"source {name!r} state {i}") for i, v in enumerate(states)]
    if len({len(v) for v in vecs}) > 1:
        raise ProblemFileError(f"source {name!r}: states have unequal dimensions")
    try:
        return Source(np.array(vecs), np.asarray(probs, dtype=float))
    except (QConverseError, ValueError, TypeError) as exc:
        raise ProblemFileError(f"source {name!r}: {exc}") from None


def parse_channel(name, spec) -> ch.KrausChannel:
    if not isinstance(spec, dict):
        raise ProblemFileError(f"channel {name!r} must be an object")
    kind = spec.get("kind", "kraus" if "kraus" in spec else None)
    if kind not in CHANNEL_KINDS:
        raise ProblemFileError(f"channel {name!r}: unknown kind {kind!r} (expected one of {CHANNEL_KINDS})")
    try:
        if kind == "kraus":
            ops = [parse_matrix(m, f"channel {name!r} Kraus {i}") for i, m in enumerate(spec["kraus"])]
            if len({op.shape for op in ops}) != 1:
                raise ProblemFileError(f"channel {name!r}: Kraus operators have unequal shapes")
            return ch.KrausChannel(np.array(ops))
        if kind == "unitary":
            return ch.unitary_channel(parse_matrix(spec["matrix"], f"channel {name!r} matrix"))
        d = int(spec["dim"])
        if kind == "identity":
            return ch.identity_channel(d)
        if kind == "dephasing":
            return ch.dephasing_channel(d)
        return ch.depolarizing_channel(d, float(spec["noise"]))
    except KeyError as exc:
        raise ProblemFileError(f"channel {name!r}: missing field {exc}") from None
    except ProblemFileError:
        raise
    except (QConverseError, ValueError, TypeError) as exc:
        raise ProblemFileError(f"channel {name!r}: {exc}") from None


def builtin_channel(name, dim):
    """Resolve ``identity``, ``dephasing`` or ``depolarizing:<noise>`` at dimension ``dim``."""
    m = BUILTIN_CHANNEL.match(name)
    if m is None:
        return None
    if name == "identity":
        return ch.identity_channel(dim)
    if name == "dephasing":
        return ch.dephasing_channel(dim)
    return ch.depolarizing_channel(dim, float(m.group("noise")))


def parse_problem_file(text: str) -> ProblemFile:
    """Parse and fully validate a problem document.

    Raises:
        ProblemFileError: on syntax errors (with line), unresolved names, or
            invariant violations of any source or channel.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"syntax error: {exc.msg} (column {exc.colno})", exc.lineno) from None
    if not isinstance(doc, dict):
        raise ProblemFileError("top level must be an object", 1)
    unknown = set(doc) - {"sources", "channels", "jobs"}
    if unknown:
        raise ProblemFileError(f"unknown top-level keys {sorted(unknown)}", 1)

    pf = ProblemFile()
    for name, spec in (doc.get("sources") or {}).items():
        try:
            pf.sources[name] = parse_source(name, spec)
        except ProblemFileError as exc:
            raise ProblemFileError(str(exc), _line_of(text, name)) from None
    for name, spec in (doc.get("channels") or {}).items():
        try:
            pf.channels[name] = parse_channel(name, spec)
        except ProblemFileError as exc:
            raise ProblemFileError(str(exc), _line_of(text, name)) from None

    for i, job in enumerate(doc.get("jobs") or []):
        if not isinstance(job, dict) or "command" not in job:
            raise ProblemFileError(f"job {i} must be an object with a 'command'", _line_of(text, "jobs"))
        src = job.get("source")
        if src is not None and src not in pf.sources:
            raise ProblemFileError(f"job {i} references undefined source {src!r}", _line_of(text, src))
        for key in ("channel", "encoder", "decoder"):
            ref = job.get(key)
            if ref is not None and ref not in pf.channels and not BUILTIN_CHANNEL.match(ref):
                raise ProblemFileError(f"job {i} references undefined channel {ref!r}", _line_of(text, ref))
        pf.jobs.append(dict(job))
    return pf


def load_problem_file(path) -> ProblemFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc.strerror}") from None
    return parse_problem_file(text)


# ---------------------------------------------------------------------------
# serialization

def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"+inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def to_plain(obj):
    """Convert library objects into JSON-ready Python values."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if is_divergent(obj):
        return math.inf
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return to_plain(obj.astype(complex).tolist())
        return obj.tolist()
    if isinstance(obj, Source):
        return {"p": to_plain(obj.probs), "states": to_plain(obj.states)}
    if isinstance(obj, ch.KrausChannel):
        return {"kraus": to_plain(obj.kraus_ops)}
    if hasattr(obj, "to_dict"):
        return to_plain(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj, indent, level, out):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(k)}: ")
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
        elif all(not isinstance(v, (dict, list)) for v in obj):
            parts = []
            for v in obj:
                sub = []
                _emit(v, indent, level + 1, sub)
                parts.append("".join(sub))
            out.append("[" + ", ".join(parts) + "]")
        else:
            out.append("[\n")
            for i, v in enumerate(obj):
                out.append(pad)
                _emit(v, indent, level + 1, out)
                out.append(",\n" if i < len(obj) - 1 else "\n")
            out.append(end + "]")
    else:
        raise TypeError(f"cannot emit {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON with insertion-ordered keys and floats at 17 significant digits."""
    out = []
    _emit(to_plain(obj), indent, 0, out)
    return "".join(out) + "\n"


def envelope(command, result, seed, tolerances, version) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "qconverse",
        "version": version,
        "command": command,
        "seed": seed,
        "tolerances": dict(tolerances),
        "result": result,
    }


def is_flat(rows) -> bool:
    return all(not isinstance(v, (dict, list)) for row in rows for v in row.values())


def to_csv(rows) -> str:
    """CSV for a list of flat records; nested values are rejected."""
    rows = [to_plain(r) for r in rows]
    if not rows:
        return ""
    if not is_flat(rows):
        raise ValueError("report is nested; CSV output supports flat reports only")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: _format_float(v).strip('"') if isinstance(v, float) else v for k, v in r.items()})
    return buf.getvalue()
