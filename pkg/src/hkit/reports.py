"""Check results, verification reports and their serializations."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
REFUSED = "precondition-violation"

REPORT_SCHEMA = {
    "type": "object",
    "required": ["suite", "checks"],
    "properties": {
        "suite": {"type": "string"},
        "passed": {"type": "boolean"},
        "config": {"type": "object"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "ref", "lhs", "rhs", "error", "tolerance", "pass"],
                "properties": {
                    "name": {"type": "string"},
                    "ref": {"type": "string"},
                    "lhs": {"type": ["number", "null"]},
                    "rhs": {"type": ["number", "null"]},
                    "error": {"type": ["number", "null"]},
                    "tolerance": {"type": ["number", "null"]},
                    "pass": {"type": "boolean"},
                    "status": {"type": "string"},
                    "details": {"type": "object"},
                },
            },
        },
    },
}

_SIG = 12


def _num(x):
    """JSON-safe float rounded to a fixed number of significant digits."""
    if x is None:
        return None
    x = complex(x)
    v = abs(x) if x.imag != 0 else x.real
    if not np.isfinite(v):
        return None
    return float(f"{v:.{_SIG}g}")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, complex):
        return [_num(obj.real), _num(obj.imag)]
    return obj


@dataclass
class Check:
    """Outcome of one numerical check.

    Attributes
    ----------
    name : str
    lhs, rhs : float
        The two compared quantities (magnitudes for complex data).
    error : float
        Error measure compared against ``tolerance``.
    tolerance : float
    passed : bool
    ref : str
        Traceability tag of the verified statement.
    status : str
        ``pass``, ``fail``, ``inconclusive`` or ``precondition-violation``.
    details : dict
        Extra diagnostics (JSON-serializable after conversion).
    """

    name: str
    lhs: float
    rhs: float
    error: float
    tolerance: float
    passed: bool
    ref: str = ""
    status: str = ""
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)
        if not self.status:
            self.status = PASS if self.passed else FAIL

    def to_dict(self):
        return {
            "name": self.name,
            "ref": self.ref,
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "error": _num(self.error),
            "tolerance": _num(self.tolerance),
            "pass": self.passed,
            "status": self.status,
            "details": _jsonable(self.details),
        }


def compare(name, lhs, rhs, tolerance, ref="", relative=False, **details):
    """Build a :class:`Check` from two scalars or arrays (max-abs error)."""
    lhs_a = np.asarray(lhs)
    rhs_a = np.asarray(rhs)
    err = float(np.max(np.abs(lhs_a - rhs_a))) if lhs_a.size else 0.0
    if relative:
        scale = float(np.max(np.abs(rhs_a))) if rhs_a.size else 0.0
        err = err / scale if scale > 0 else err
    lhs_v = float(np.max(np.abs(lhs_a))) if lhs_a.size else 0.0
    rhs_v = float(np.max(np.abs(rhs_a))) if rhs_a.size else 0.0
    return Check(name, lhs_v, rhs_v, err, tolerance, err < tolerance, ref, details=details)


@dataclass
class VerificationReport:
    """Ordered collection of checks for one suite."""

    suite: str
    checks: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed]

    def extend(self, checks):
        self.checks.extend(checks)

    def to_dict(self):
        return {
            "suite": self.suite,
            "passed": self.passed,
            "config": _jsonable(self.config),
            "checks": [c.to_dict() for c in self.checks],
        }


def report_to_json(report):
    """Byte-stable JSON text (fixed key order, rounded floats)."""
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"


def validate_report(data):
    """Validate a parsed JSON report against :data:`REPORT_SCHEMA`."""
    import jsonschema

    jsonschema.validate(data, REPORT_SCHEMA)


_CSV_FIELDS = ["suite", "name", "ref", "lhs", "rhs", "error", "tolerance", "pass", "status"]


def report_to_csv(report):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_FIELDS)
    for c in report.checks:
        d = c.to_dict()
        writer.writerow([report.suite] + ["" if d[k] is None else d[k] for k in _CSV_FIELDS[1:]])
    return buf.getvalue()


# statement tag -> (description, suite)
TRACEABILITY = [
    ("2 Moyal", "Moyal identity for the Fourier-Wigner transform", "moyal"),
    ("2 Weyl", "Weyl transform: kernel form, rank-one rule, spectral form", "weyl"),
    ("2 radial", "Laguerre reduction and W(phi_k) = (2pi)^n P_k", "weyl"),
    ("2 twisted", "W(F *_1 G) = W(F) W(G)", "twisted-algebra"),
    ("Thm 2.2", "W(S) L^2 = S (Schwartz decay of W(F) phi)", "schwartz"),
    ("3 Gutzmer", "Gutzmer identity, n = 1", "gutzmer"),
    ("Thm 3.1", "Weighted Bergman norm identity, n = 1", "bergman"),
    ("Thm 3.3", "Pointwise bound on the tube", "semigroups"),
    ("Thm 3.4", "Tensor estimate for special Hermite coefficients", "factorize-analytic"),
    ("Cor 3.6", "Constructive factorization, analytic case", "factorize-analytic"),
    ("Thm 3.7", "W(F) maps L^2 into M_s", "factorize-analytic"),
    ("Lemma 3.8", "Exponential pointwise decay of W(F) phi", "factorize-analytic"),
    ("Thm 3.9", "Hermite-coefficient bound, exponential decay", "bounds-3.9"),
    ("Thm 1.1", "Closure of the analytic algebra", "closure"),
    ("4 heat", "Special Hermite heat kernel, W(p_t) = exp(-tH)", "semigroups"),
    ("4 U_t", "Hermite-Bergman isometry", "bergman"),
    ("Cor 4.4", "Constructive factorization, entire case", "factorize-entire"),
    ("Thm 4.5", "W(F) maps L^2 into E_s", "factorize-entire"),
    ("Lemma 4.6", "Gaussian pointwise decay of W(F) phi", "factorize-entire"),
    ("Thm 4.7", "Hermite-coefficient bound, Gaussian decay", "bounds-4.7"),
    ("Rem 4.8", "Hardy trichotomy", "hardy"),
    ("Thm 1.3", "Pfannschmidt refinement", "hardy"),
    ("Thm 1.4", "Minimal-type characterization of E_infinity", "hardy"),
    ("3 Bargmann", "Bargmann coefficient link and Fourier intertwining", "bounds-3.9"),
]


def report_to_markdown(report):
    """Markdown rendering with per-check table and traceability matrix."""
    lines = [f"# Verification report: {report.suite}", ""]
    lines.append(f"Overall: {'PASS' if report.passed else 'FAIL'}")
    lines.append("")
    lines.append("| check | ref | lhs | rhs | error | tolerance | status |")
    lines.append("|---|---|---|---|---|---|---|")
    for c in report.checks:
        d = c.to_dict()
        lines.append(f"| {d['name']} | {d['ref']} | {d['lhs']} | {d['rhs']} | "
                     f"{d['error']} | {d['tolerance']} | {d['status']} |")
    lines.append("")
    lines.append("## Traceability")
    lines.append("")
    lines.append("| statement | content | suite | checks in this report |")
    lines.append("|---|---|---|---|")
    for tag, desc, suite in TRACEABILITY:
        count = sum(1 for c in report.checks if c.ref == tag)
        lines.append(f"| {tag} | {desc} | {suite} | {count} |")
    return "\n".join(lines) + "\n"


def emit_report(report, fmt="json", path=None):
    """Serialize ``report`` as json, csv or markdown; write to ``path`` if given."""
    renderers = {"json": report_to_json, "csv": report_to_csv, "markdown": report_to_markdown,
                 "md": report_to_markdown}
    if fmt not in renderers:
        raise ValueError(f"unknown report format {fmt!r}")
    text = renderers[fmt](report)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
