"""
Command-line surface: gate-set documents, verdict documents and exit codes.

    qudecide check gates.json [--json] [--project] [--closure-on-fail]
    qudecide adjoint | spectrum | closure | netcov gates.json
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from . import __version__
from .adjoint_service import adjoint_of
from .ball_service import N_SU2, ball_membership, is_exceptional_spectrum
from .config import MAX_GROUP, TOL_EQ, TOL_RANK, TOL_UNITARY
from .decider_service import decide, suggest_fix
from .errors import (
    GateValidationError,
    NonUnitAxisError,
    NotUnitaryError,
    ParseError,
    QudecideError,
    SingularMatrixError,
)
from .linalg_service import project_to_special_unitary
from .models import (
    AxisAngle,
    DeciderConfig,
    GateEntry,
    GateSet,
    GateSetDocument,
    UnitaryGate,
    Verdict,
    VerdictDocument,
    VerdictKind,
    unitarity_defects,
)
from .oracle_service import DEFAULT_DELTA, closure_enumerate, epsilon_net_coverage
from .su2_service import su2_from_axis_angle

logger = logging.getLogger(__name__)

EXIT_CODES = {
    VerdictKind.UNIVERSAL.value: 0,
    VerdictKind.FINITE_GROUP.value: 10,
    VerdictKind.INFINITE_NON_UNIVERSAL.value: 11,
    VerdictKind.INCONCLUSIVE.value: 12,
}
EXIT_INPUT_ERROR = 64

HADAMARD = (1j / np.sqrt(2.0)) * np.array([[1, 1], [1, -1]], dtype=complex)


def phase_gate(phi: float) -> np.ndarray:
    """T_phi = diag(e^{-i phi}, e^{i phi})."""
    return np.diag([np.exp(-1j * phi), np.exp(1j * phi)])


def _entry_matrix(entry: GateEntry, index: int, d: int) -> np.ndarray:
    where = f"gates[{index}]"
    sources = [k for k in ("matrix", "builtin", "axis_angle") if getattr(entry, k) is not None]
    if len(sources) != 1:
        raise ParseError(f"gate '{entry.name}' needs exactly one of matrix, builtin, axis_angle; got {sources}",
                         field=where)

    if entry.matrix is not None:
        try:
            m = np.array(entry.matrix, dtype=float)
        except ValueError:
            raise ParseError(f"gate '{entry.name}' matrix is ragged", field=f"{where}.matrix")
        if m.shape != (d, d, 2):
            raise ParseError(f"gate '{entry.name}' matrix has shape {m.shape}, expected ({d}, {d}, 2)",
                             field=f"{where}.matrix")
        return m[..., 0] + 1j * m[..., 1]

    if d != 2:
        raise ParseError(f"gate '{entry.name}': {sources[0]} gates need d=2", field=where)

    if entry.builtin == "H":
        return HADAMARD.copy()
    if entry.builtin == "phase":
        if entry.phi is None:
            raise ParseError(f"phase gate '{entry.name}' needs phi", field=f"{where}.phi")
        return phase_gate(entry.phi)

    try:
        a = AxisAngle(entry.axis_angle.phi, tuple(entry.axis_angle.k))
    except NonUnitAxisError as e:
        raise GateValidationError(entry.name, "unit axis", e.detail)
    return np.array(su2_from_axis_angle(a, entry.name).matrix)


def _build_gate(name: str, m: np.ndarray, project: bool, warnings: List[str]) -> UnitaryGate:
    try:
        return UnitaryGate(name, m)
    except NotUnitaryError as e:
        if not np.all(np.isfinite(m)):
            raise GateValidationError(name, "finite entries", e.detail)
        if not project:
            unitary_defect, _ = unitarity_defects(m)
            invariant = "unitarity" if unitary_defect > TOL_UNITARY else "determinant one"
            raise GateValidationError(name, invariant, e.detail)

    try:
        gate = project_to_special_unitary(m, name)
    except SingularMatrixError as e:
        raise GateValidationError(name, "nonsingular", e.detail)
    unitary_defect, det_defect = unitarity_defects(m)
    message = f"gate '{name}' projected to SU(d) (unitarity defect {unitary_defect:.3e}, det defect {det_defect:.3e})"
    logger.warning(message)
    warnings.append(message)
    return gate


def load_gateset(text: str, project: bool = False) -> Tuple[GateSet, List[str]]:
    """
    Parse a gate-set document and report any --project repairs.

    Raises:
        ParseError: Malformed JSON or document structure
        GateValidationError: A gate failed a special-unitary invariant
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno)

    try:
        doc = GateSetDocument.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first["loc"])
        raise ParseError(first["msg"], field=field)

    warnings: List[str] = []
    gates = []
    for i, entry in enumerate(doc.gates):
        gates.append(_build_gate(entry.name, _entry_matrix(entry, i, doc.d), project, warnings))
    return GateSet(doc.d, tuple(gates)), warnings


def parse_gateset(text: str, project: bool = False) -> GateSet:
    """
    Build a GateSet from its JSON document.

    Builtins: "H" is (i/sqrt 2)[[1, 1], [1, -1]] and "phase" is T_phi.
    Matrix entries are [re, im] pairs.

    Args:
        text: The document
        project: Repair near-unitary matrices by projection instead of failing

    Returns:
        GateSet: The validated gates in document order
    """
    return load_gateset(text, project)[0]


def serialize_gateset(s: GateSet) -> str:
    """JSON document with every gate as a full-precision [re, im] matrix."""
    gates = []
    for gate in s.gates:
        entries = [[[float(z.real), float(z.imag)] for z in row] for row in gate.matrix]
        gates.append({"name": gate.name, "matrix": entries})
    return json.dumps({"d": s.d, "gates": gates})


def verdict_to_document(v: Verdict, cfg: DeciderConfig) -> VerdictDocument:
    """Flatten a verdict into its schema-stable document."""
    return VerdictDocument(
        verdict=v.kind.value,
        kernel_dim=v.kernel_dim,
        terminating_l=v.terminating_l,
        order=v.order,
        overflowed=v.overflowed,
        witness_word=list(v.witness.letters) if v.witness else None,
        witness_power=v.witness_power,
        reason=v.reason,
        warnings=list(v.warnings),
        config=cfg.model_dump(),
    )


def exit_code_for(doc: VerdictDocument) -> int:
    """Exit code determined by the verdict kind alone."""
    return EXIT_CODES[doc.verdict]


def _config_from_args(args, d: int) -> DeciderConfig:
    cfg = DeciderConfig(
        tol_rank=args.tol_rank,
        tol_eq=args.tol_eq,
        max_word_len=args.max_word_len,
        max_group_size=args.max_group,
        n_power_max=args.n_power_max,
        closure_on_fail=args.closure_on_fail,
        threads=args.threads,
    )
    return cfg.resolved(d)


def _emit(payload: Dict[str, Any], as_json: bool, lines: List[str]):
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def run_check(args) -> Tuple[int, Optional[VerdictDocument]]:
    """
    Run one subcommand on a parsed argument namespace.

    Returns:
        Tuple[int, Optional[VerdictDocument]]: exit code, plus the verdict document for `check`
    """
    text = Path(args.file).read_text(encoding="utf-8")
    s, parse_warnings = load_gateset(text, args.project)
    cfg = _config_from_args(args, s.d)

    if args.command == "check":
        verdict = decide(s, cfg)
        doc = verdict_to_document(verdict, cfg)
        doc.warnings = parse_warnings + doc.warnings
        lines = [f"verdict: {doc.verdict}", f"kernel_dim: {doc.kernel_dim}"]
        for key in ("terminating_l", "order", "overflowed", "witness_power", "reason"):
            if getattr(doc, key) is not None:
                lines.append(f"{key}: {getattr(doc, key)}")
        if doc.witness_word:
            lines.append(f"witness_word: {'*'.join(doc.witness_word)}")
        lines.extend(f"warning: {w}" for w in doc.warnings)
        if verdict.kind != VerdictKind.UNIVERSAL:
            lines.append(suggest_fix(s, verdict))
        _emit(doc.model_dump(), args.json, lines)
        return exit_code_for(doc), doc

    if args.command == "adjoint":
        matrices = {g.name: adjoint_of(g).entries.tolist() for g in s.gates}
        lines = []
        with np.printoptions(precision=6, suppress=True):
            for g in s.gates:
                lines.append(f"Ad_{g.name} =\n{adjoint_of(g).entries}")
        _emit({"d": s.d, "adjoint": matrices}, args.json, lines)
        return 0, None

    if args.command == "spectrum":
        n_bound = N_SU2 if s.d == 2 else cfg.n_power_max
        rows, lines = [], []
        for g in s.gates:
            spectrum = is_exceptional_spectrum(g, n_bound)
            membership = ball_membership(g)
            rows.append({
                "name": g.name,
                "phases": list(spectrum.phases),
                "in_ball": membership.in_ball,
                "center_distance": membership.distance,
                "exceptional": spectrum.exceptional,
                "n_power": spectrum.n_power,
            })
            lines.append(f"{g.name}: phases={['%.6f' % p for p in spectrum.phases]} "
                         f"in_ball={membership.in_ball} exceptional={spectrum.exceptional} "
                         f"n_power={spectrum.n_power}")
        _emit({"d": s.d, "gates": rows}, args.json, lines)
        return 0, None

    if args.command == "closure":
        closure = closure_enumerate(s, cfg.max_group_size, cfg.tol_eq)
        payload = {"order": closure.order, "generations": closure.generations, "overflowed": closure.overflowed}
        lines = [f"order: {closure.order}{' (cap exceeded)' if closure.overflowed else ''}",
                 f"generations: {closure.generations}"]
        _emit(payload, args.json, lines)
        return 0, None

    # netcov
    report = epsilon_net_coverage(
        s, args.word_len, args.samples, args.seed,
        delta=args.delta, verdict=decide(s, cfg), tol_eq=cfg.tol_eq, threads=cfg.threads,
    )
    lines = [f"words: {report.word_count} (length <= {report.word_length_cap})",
             f"max_min_distance: {report.max_min_distance:.6f}",
             f"epsilon_target: {report.epsilon_target:.6f}",
             f"covered: {report.covered}"]
    lines.extend(f"warning: {w}" for w in report.warnings)
    _emit(report.model_dump(), args.json, lines)
    return 0, None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="Gate-set JSON document")
    common.add_argument("--tol-rank", type=float, default=TOL_RANK, help="Relative rank tolerance")
    common.add_argument("--tol-eq", type=float, default=TOL_EQ, help="Element equality tolerance")
    common.add_argument("--max-word-len", type=int, default=None, help="Word length cap (13 for d=2, 20 otherwise)")
    common.add_argument("--max-group", type=int, default=MAX_GROUP, help="Group size cap")
    common.add_argument("--n-power-max", type=int, default=None, help="Power search cap (6 for d=2, 64 otherwise)")
    common.add_argument("--json", action="store_true", help="Print a JSON document")
    common.add_argument("--project", action="store_true", help="Project near-unitary matrices to SU(d)")
    common.add_argument("--seed", type=int, default=0, help="Seed for Haar sampling")
    common.add_argument("--closure-on-fail", action="store_true",
                        help="Enumerate the closure when the commutant test fails")
    common.add_argument("--threads", type=int, default=None, help="Worker thread cap (overrides QUDECIDE_THREADS)")

    parser = argparse.ArgumentParser(prog="qudecide", description="Decide universality of qudit gate sets")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="Run the universality decider")
    sub.add_parser("adjoint", parents=[common], help="Print adjoint representation matrices")
    sub.add_parser("spectrum", parents=[common], help="Classify each gate's spectrum")
    sub.add_parser("closure", parents=[common], help="Enumerate the generated group")
    netcov = sub.add_parser("netcov", parents=[common], help="Estimate epsilon-net coverage")
    netcov.add_argument("--word-len", type=int, default=8, help="Longest word enumerated")
    netcov.add_argument("--samples", type=int, default=100, help="Number of Haar-random targets")
    netcov.add_argument("--delta", type=float, default=DEFAULT_DELTA, help="Slack in 1/(2 sqrt 2 + delta)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, _ = run_check(args)
        return code
    except QudecideError as e:
        print(f"error: {e}", file=sys.stderr)
    except ValidationError as e:
        print(f"error: invalid configuration: {e.errors()[0]['msg']}", file=sys.stderr)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
