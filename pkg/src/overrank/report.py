"""Run configuration and machine-parseable reports.

A Report is a flat sequence of typed records (dicts of scalars).  The
json-lines form is the lossless interchange format; the text form renders
the same records for terminals and simple tooling.  Big integers travel as
decimal strings, rationals as "p/q", so nothing is squeezed through floats.
"""

from __future__ import annotations

import json
import platform
import shlex
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath

__all__ = ["Report", "RunConfig", "environment_fingerprint", "fmt_value"]

REPORT_SCHEMA = 1


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = 160
    n_max: int = 3000
    cache_path: str | None = None
    margin_policy: float = 1e-12
    parallelism: int = 1

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be >= 64")
        if self.n_max < 0:
            raise ValueError("n_max must be >= 0")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")


def environment_fingerprint() -> dict:
    from . import __version__
    return {
        "package": f"overrank-{__version__}",
        "python": platform.python_version(),
        "platform": platform.platform(terse=True),
        "mpmath": mpmath.__version__,
    }


def fmt_value(v) -> str:
    """Render a scalar for report records: exact decimal for int/Fraction."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, mpmath.mpf):
        return mpmath.nstr(v, 20)
    return str(v)


@dataclass
class Report:
    command: str
    config: RunConfig
    inputs: dict = field(default_factory=dict)
    outputs: list[dict] = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    environment: dict = field(default_factory=environment_fingerprint)
    schema_version: int = REPORT_SCHEMA

    def add(self, record: str, **fields) -> None:
        rec = {"record": record}
        rec.update(fields)
        self.outputs.append(rec)

    # -- lossless interchange form -------------------------------------
    def to_json_lines(self) -> str:
        lines = [json.dumps({"record": "header", "schema_version": self.schema_version,
                             "command": self.command, "inputs": self.inputs},
                            sort_keys=True)]
        lines.append(json.dumps({"record": "config", **asdict(self.config)},
                                sort_keys=True))
        for rec in self.outputs:
            lines.append(json.dumps(rec, sort_keys=True))
        lines.append(json.dumps({"record": "timings", **self.timings}, sort_keys=True))
        lines.append(json.dumps({"record": "environment", **self.environment},
                                sort_keys=True))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_json_lines(cls, text: str) -> "Report":
        header = config = None
        outputs: list[dict] = []
        timings: dict = {}
        environment: dict = {}
        for line in text.strip().splitlines():
            rec = json.loads(line)
            kind = rec.pop("record")
            if kind == "header":
                header = rec
            elif kind == "config":
                config = RunConfig(**rec)
            elif kind == "timings":
                timings = rec
            elif kind == "environment":
                environment = rec
            else:
                outputs.append({"record": kind, **rec})
        if header is None or config is None:
            raise ValueError("missing header or config record")
        return cls(command=header["command"], config=config, inputs=header["inputs"],
                   outputs=outputs, timings=timings, environment=environment,
                   schema_version=header["schema_version"])

    # -- human-readable form -------------------------------------------
    def to_text(self) -> str:
        def kv(d: dict) -> str:
            # keep one record per line even for multi-line payloads
            parts = []
            for k, v in d.items():
                flat = fmt_value(v).replace("\n", "\\n")
                parts.append(f"{k}={shlex.quote(flat)}")
            return " ".join(parts)

        lines = [f"report schema={self.schema_version} command={self.command}"]
        if self.inputs:
            lines.append("inputs " + kv(self.inputs))
        lines.append("config " + kv(asdict(self.config)))
        for rec in self.outputs:
            rec = dict(rec)
            kind = rec.pop("record")
            lines.append(f"{kind} " + kv(rec))
        lines.append("timings " + kv(self.timings))
        lines.append("environment " + kv(self.environment))
        lines.append("end")
        return "\n".join(lines) + "\n"
