"""Verification suites and their reports.

Structured output is JSON Lines, one object per line with sorted keys:

* ``{"record": "header", "tool", "version", "provenance", "dim", "conventions"}``
* ``{"record": "check", "name", "status", "detail", "data"}`` per check
* ``{"record": "summary", "status", "passed", "failed", "skipped"}``

``status`` is ``"pass"``, ``"fail"`` or ``"skipped"``. Timings appear only
in text output so that structured reports are byte-identical across runs.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable

from . import __version__
from .dualmaps import (
    counit_assignment,
    double_shadow_check,
    qmap_assignment,
    qmap_equivariance_check,
    substitute_and_check,
)
from .qalg import (
    DEFAULT_TABLE_BOUND,
    ResourceGuardError,
    frt_presentation,
    hilbert_prefix,
    re_presentation,
    re_presentation_s_form,
)
from .rewriting import NonConfluentError
from .rmatrix import RMatrixSpec, check_hecke, check_ybe
from .scalars import encode_rational
from .semiclassical import (
    NotADeformationError,
    check_cybe,
    classical_limit,
    jacobi_check,
    quantization_correspondence,
    re_bracket,
    sklyanin_bracket,
)
from .tensor import SingularOperatorError
from .twist import (
    compose_cocycles,
    frt_to_re_cocycle,
    inverse_cocycle,
    invariance_check,
    op_square_generator_image,
    quasi_commutativity_relations,
    r13_cocycle,
    r23_cocycle,
    twist_presentation,
    twisted_square_generator_image,
)

CHECK_ORDER = (
    "ybe",
    "hecke",
    "present-frt",
    "present-re",
    "twist-equivalence",
    "quasi-commutativity",
    "invariance",
    "hilbert",
    "semiclassical",
    "qmap",
    "double-shadow",
)

CONVENTIONS = {
    "h_scaling": "q = exp(h); R = 1 + h X + O(h^2); [a, b] = h {a, b} + O(h^2)",
    "monomial_order": "deglex on words, generators row-major z11 < z12 < ... < znn; each relation rewrites its smallest word",
    "r_matrix": "R[(i,k),(j,l)] is the coefficient of e_i(x)e_k in R(e_j(x)e_l); sl(n) spreading term (q - q^-1) E_ji(x)E_ij for i < j",
    "indices": "1-based in files and reports",
    "coactions": "checked through their induced degree-2 actions only",
}


@dataclass(frozen=True)
class CheckRecord:
    name: str
    status: str
    detail: str = ""
    data: dict = field(default_factory=dict)
    seconds: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class VerificationReport:
    version: str
    provenance: str
    dim: int
    checks: tuple[CheckRecord, ...]
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))

    @property
    def status(self) -> str:
        return "fail" if any(c.status == "fail" for c in self.checks) else "pass"

    @property
    def exit_code(self) -> int:
        return 0 if self.status == "pass" else 1


@dataclass(frozen=True)
class SuiteOptions:
    max_degree: int | None = None
    h_order: int = 1
    table_bound: int = DEFAULT_TABLE_BOUND

    def degree_for(self, n: int) -> int:
        if self.max_degree is not None:
            return self.max_degree
        return 4 if n == 2 else 2


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _check_ybe(spec: RMatrixSpec, opts: SuiteOptions) -> CheckRecord:
    v = check_ybe(spec.R)
    return CheckRecord("ybe", _status(v.passed), v.detail)


def _check_hecke(spec: RMatrixSpec, opts: SuiteOptions) -> CheckRecord:
    pair = check_hecke(spec.R)
    if pair is None:
        return CheckRecord("hecke", "fail", "no quadratic relation for P R over Q(q)")
    a, b = pair
    data = {"a": encode_rational(a), "b": encode_rational(b)}
    return CheckRecord("hecke", "pass", f"(PR - {a})(PR - ({b})) = 0", data)


def _check_present(kind: str) -> Callable[[RMatrixSpec, SuiteOptions], CheckRecord]:
    def run(spec: RMatrixSpec, opts: SuiteOptions) -> CheckRecord:
        if kind == "frt":
            P = frt_presentation(spec)
            detail = f"{len(P)} independent relations"
            ok = True
        else:
            P = re_presentation(spec)
            same = P == re_presentation_s_form(spec)
            ok = same
            detail = f"{len(P)} independent relations; S-form {'agrees' if same else 'differs'}"
        return CheckRecord(f"present-{kind}", _status(ok), detail, {"relations": P.render(), "export": P.export()})

    return run


def _check_twist(spec: RMatrixSpec, opts: SuiteOptions) -> CheckRecord:
    F, E = frt_presentation(spec), re_presentation(spec)
    C = frt_to_re_cocycle(spec)
    equal = twist_presentation(F, C) == E
    c13, c23 = r13_cocycle(spec), r23_cocycle(spec)
    composite = compose_cocycles(c13, c23) == C
    stepwise = twist_presentation(twist_presentation(F, c13), c23) == E
    back = twist_presentation(twist_presentation(F, C), inverse_cocycle(C)) == F
    data = {"twisted_frt_equals_re": equal, "composite_cocycle": composite, "stepwise_twist": stepwise, "inverse_restores": back}
    ok = equal and composite and stepwise and back
    failed = [k for k, v in data.items() if not v]
    return CheckRecord("twist-equivalence", _status(ok), "all hold" if ok else f"failed: {', '.join(failed)}", data)


def _check_qc(spec: RMatrixSpec, opts: SuiteOptions) -> CheckRecord:
    frt = quasi_commutativity_relations(op_square_generator_image(spec)) == frt_presentation(spec)
    re = quasi_commutativity_relations(twisted_square_generator_image(spec)) == re_presentation(spec)
    data = {"op_square_gives_frt": frt, "twisted_square_gives_re": re}
    return CheckRecord("quasi-commutativity", _status(frt and re), f"FRT {frt}, RE {re}", data)


def _check_invariance(spec: RMatrixSpec, opts: SuiteOptions) -> CheckRecord:
    a = invariance_check(frt_presentation(spec), spec, "regular")
    b = invariance_check(re_presentation(spec), spec, "adjoint")
    data = {"frt_regular": a.passed, "re_adjoint": b.passed}
    return CheckRecord("invariance", _status(a.passed and b.passed), f"FRT: {a.detail}; RE: {b.detail}", data)


def _check_hilbert(spec: RMatrixSpec, opts: SuiteOptions) -> CheckRecord:
    D = opts.degree_for(spec.dim)
    m = spec.dim * spec.dim
    expected = [comb(d + m - 1, m - 1) for d in range(D + 1)]
    frt = hilbert_prefix(frt_presentation(spec), D, opts.table_bound)
    re = hilbert_prefix(re_presentation(spec), D, opts.table_bound)
    ok = frt == expected and re == expected
    data = {"frt": frt, "re": re, "commutative": expected}
    return CheckRecord("hilbert", _status(ok), f"FRT {frt}, RE {re}, commutative {expected}", data)


def _check_semiclassical(spec: RMatrixSpec, opts: SuiteOptions) -> CheckRecord:
    if opts.h_order < 1:
        raise ValueError("--h-order must be at least 1")
    try:
        data = classical_limit(spec, opts.h_order)
    except NotADeformationError as exc:
        return CheckRecord("semiclassical", "fail", str(exc))
    F, E = frt_presentation(spec), re_presentation(spec)
    S, B = sklyanin_bracket(data), re_bracket(data)
    results = {
        "cybe": check_cybe(data).passed,
        "sklyanin_antisymmetric": S.check_antisymmetry().passed,
        "re_antisymmetric": B.check_antisymmetry().passed,
        "sklyanin_jacobi": jacobi_check(S).passed,
        "re_jacobi": jacobi_check(B).passed,
        "frt_quantizes_sklyanin": quantization_correspondence(F, S).passed,
        "re_quantizes_re_bracket": quantization_correspondence(E, B).passed,
    }
    ok = all(results.values())
    results["crossed_pair_agrees"] = quantization_correspondence(F, B).passed
    results["sklyanin"] = S.render()
    results["re_bracket"] = B.render()
    failed = [k for k, v in results.items() if v is False and k != "crossed_pair_agrees"]
    return CheckRecord("semiclassical", _status(ok), "all hold" if ok else f"failed: {', '.join(failed)}", results)


def _check_qmap(spec: RMatrixSpec, opts: SuiteOptions) -> CheckRecord:
    E = re_presentation(spec)
    hom = substitute_and_check(E, qmap_assignment(spec)).passed
    equiv = qmap_equivariance_check(spec).passed
    counit = substitute_and_check(E, counit_assignment(spec.dim)).passed
    data = {"homomorphism": hom, "equivariance": equiv, "counit_character": counit}
    return CheckRecord("qmap", _status(hom and equiv and counit), f"homomorphism {hom}, equivariance {equiv}, counit {counit}", data)


def _check_double(spec: RMatrixSpec, opts: SuiteOptions) -> CheckRecord:
    v = double_shadow_check(spec)
    return CheckRecord("double-shadow", _status(v.passed), v.detail)


CHECKS: dict[str, Callable[[RMatrixSpec, SuiteOptions], CheckRecord]] = {
    "ybe": _check_ybe,
    "hecke": _check_hecke,
    "present-frt": _check_present("frt"),
    "present-re": _check_present("re"),
    "twist-equivalence": _check_twist,
    "quasi-commutativity": _check_qc,
    "invariance": _check_invariance,
    "hilbert": _check_hilbert,
    "semiclassical": _check_semiclassical,
    "qmap": _check_qmap,
    "double-shadow": _check_double,
}


def run_suite(spec: RMatrixSpec, selection: Iterable[str], options: SuiteOptions | None = None) -> VerificationReport:
    opts = options or SuiteOptions()
    wanted = set(selection)
    unknown = wanted - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(sorted(unknown))}")
    records = []
    for name in CHECK_ORDER:
        if name not in wanted:
            continue
        start = time.perf_counter()
        try:
            rec = CHECKS[name](spec, opts)
        except ResourceGuardError as exc:
            rec = CheckRecord(name, "skipped", str(exc))
        except (SingularOperatorError, NonConfluentError, ArithmeticError) as exc:
            rec = CheckRecord(name, "fail", f"{type(exc).__name__}: {exc}")
        elapsed = time.perf_counter() - start
        records.append(CheckRecord(rec.name, rec.status, rec.detail, rec.data, elapsed))
    return VerificationReport(__version__, spec.provenance, spec.dim, tuple(records))


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def emit(report: VerificationReport, fmt: str = "text") -> bytes:
    if fmt == "structured":
        lines = [
            _dumps({
                "record": "header",
                "tool": "retwist",
                "version": report.version,
                "provenance": report.provenance,
                "dim": report.dim,
                "conventions": report.conventions,
            })
        ]
        for c in report.checks:
            lines.append(_dumps({"record": "check", "name": c.name, "status": c.status, "detail": c.detail, "data": c.data}))
        counts = {s: sum(1 for c in report.checks if c.status == s) for s in ("pass", "fail", "skipped")}
        lines.append(_dumps({
            "record": "summary",
            "status": report.status,
            "passed": counts["pass"],
            "failed": counts["fail"],
            "skipped": counts["skipped"],
        }))
        return ("\n".join(lines) + "\n").encode()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    out = [f"retwist {report.version}: {report.provenance} (n={report.dim})", "conventions:"]
    out += [f"  {k}: {v}" for k, v in report.conventions.items()]
    for c in report.checks:
        out.append(f"[{c.status.upper()}] {c.name}: {c.detail} ({c.seconds * 1000:.0f} ms)")
        for key in ("relations", "sklyanin", "re_bracket"):
            if key in c.data:
                out.append(f"    {key}:")
                out += [f"      {line}" for line in c.data[key]]
    out.append(f"status: {report.status}")
    return ("\n".join(out) + "\n").encode()


def parse_structured(blob: bytes | str) -> VerificationReport:
    """Inverse of ``emit(report, "structured")`` (timings are not recorded)."""
    text = blob.decode() if isinstance(blob, bytes) else blob
    records = [json.loads(line) for line in text.splitlines() if line.strip()]
    if not records or records[0].get("record") != "header" or records[-1].get("record") != "summary":
        raise ValueError("structured report needs a header line first and a summary line last")
    head = records[0]
    checks = []
    for r in records[1:-1]:
        if r.get("record") != "check" or r.get("status") not in ("pass", "fail", "skipped"):
            raise ValueError(f"malformed check line: {r!r}")
        checks.append(CheckRecord(r["name"], r["status"], r["detail"], r["data"]))
    report = VerificationReport(head["version"], head["provenance"], head["dim"], tuple(checks), head["conventions"])
    if report.status != records[-1]["status"]:
        raise ValueError("summary status disagrees with the check lines")
    return report
