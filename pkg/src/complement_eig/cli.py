"""Command-line front end: ``eig``, ``verify`` and ``demo``.

Exit codes: 0 all checks pass, 1 some check failed, 2 unreadable input or
bad parameters, 3 non-Hermitian input, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import showcase, spectral, tensor_core, trace_identities
from .errors import (
    ComplementEigError,
    ConvergenceError,
    DimensionGuardError,
    HermiticityError,
    MultiplicityError,
    OrderError,
    ParameterError,
    ShapeError,
)
from .oracles import DEFAULT_SEED, subspace_angles
from .results import IdentityCheckResult, compare

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_HERMITIAN, EXIT_NUMERIC = 0, 1, 2, 3, 4
SUITES = ("kronecker", "lemma1", "cauchy-binet", "traces", "bell", "minor-sums")
SEED_ENV = "COMPLEMENT_EIG_SEED"


class InputError(ComplementEigError, ValueError):
    """Matrix file or command parameter could not be parsed."""


# ---------------------------------------------------------------------------
# matrix files
# ---------------------------------------------------------------------------

@dataclass
class MatrixFile:
    n: int
    matrix: np.ndarray
    label: str | None = None

    @property
    def digest(self) -> str:
        blob = json.dumps(showcase.encode(self.matrix.reshape(-1)), separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _parse_json(text: str) -> MatrixFile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "n" not in obj or "entries" not in obj:
        raise InputError('matrix JSON needs keys "n" and "entries"')
    n = obj["n"]
    entries = obj["entries"]
    if not isinstance(n, int) or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    if not isinstance(entries, list) or len(entries) != n * n:
        raise InputError(f"expected {n * n} entries")
    values = []
    for e in entries:
        if (not isinstance(e, list) or len(e) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in e)):
            raise InputError(f"entry {e!r} is not an [re, im] pair")
        values.append(complex(e[0], e[1]))
    label = obj.get("label")
    return MatrixFile(n, np.array(values).reshape(n, n), label if isinstance(label, str) else None)


def _parse_text(text: str) -> MatrixFile:
    tokens = [t for line in text.splitlines() if not line.lstrip().startswith("#") for t in line.split()]
    try:
        n = int(tokens[0])
        nums = [float(t) for t in tokens[1:]]
    except (IndexError, ValueError) as exc:
        raise InputError(f"plain-text matrix unreadable: {exc}") from exc
    if n < 1 or len(nums) != 2 * n * n:
        raise InputError(f"expected n followed by {n * n} 're im' pairs")
    values = np.array(nums[0::2]) + 1j * np.array(nums[1::2])
    return MatrixFile(n, values.reshape(n, n))


def parse_matrix(text: str) -> MatrixFile:
    """JSON ``{"n", "label"?, "entries": [[re, im], ...]}`` or plain text ``n`` then pairs."""
    return _parse_json(text) if text.lstrip().startswith("{") else _parse_text(text)


def read_matrix(path: str) -> MatrixFile:
    if path == "-":
        return parse_matrix(sys.stdin.read())
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_matrix(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise InputError(f"not a complex number: {text!r}") from exc


def parse_vector3(text: str) -> tuple[float, float, float]:
    try:
        parts = tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"not a comma-separated vector: {text!r}") from exc
    if len(parts) != 3:
        raise InputError(f"momentum needs three components, got {len(parts)}")
    return parts


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _num(z):
    z = complex(z)
    return [z.real, z.imag]


def spectrum_payload(report: spectral.SpectrumReport) -> dict:
    return {
        "groups": [{"lambda": float(np.real(g.lam)), "s": g.s, "vanishing_s": g.vanishing_s,
                    "members": [_num(x) for x in g.members]} for g in report.groups],
        "pairs": [{"lambda": float(np.real(p.lam)), "residual": p.residual,
                   "vectors": [showcase.encode(p.vectors[:, k]) for k in range(p.s)]} for p in report.pairs],
        "flags": list(report.flags),
    }


def build_report(inputs: dict, checks: list[IdentityCheckResult], config: dict,
                 spectrum: dict | None = None, extra: dict | None = None, timestamp: bool = True) -> dict:
    out: dict = {"input": inputs}
    if spectrum is not None:
        out["spectrum"] = spectrum
    if extra:
        out.update(extra)
    out["checks"] = [c.row() for c in checks]
    out["config"] = config
    out["pass"] = all(c.passed for c in checks)
    if timestamp:
        out["generated"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return out


def render_text(report: dict) -> str:
    lines = []
    for key, value in report["input"].items():
        if value is not None:
            lines.append(f"{key}: {value}")
    if "spectrum" in report:
        lines.append("eigenvalue          s  vanishing  residual")
        for g, p in zip(report["spectrum"]["groups"], report["spectrum"]["pairs"]):
            lines.append(f"{g['lambda']:<18.12g}  {g['s']:<2d} {str(g['vanishing_s']):<10} {p['residual']:.2e}")
        for flag in report["spectrum"]["flags"]:
            lines.append(f"flag: {flag}")
    if "demo" in report:
        lines.append("quantity                      reference           library             deviation")
        for row in report["demo"]:
            lines.append(f"{row['quantity']:<29} {row['reference']!s:<19} {row['library']!s:<19} {row['deviation']:.2e}")
    lines.append("check                                         max_dev     tol       verdict")
    for c in report["checks"]:
        lines.append(f"{c['name']:<45} {c['max_dev']:<11.3e} {c['tol']:<9.1e} {'PASS' if c['pass'] else 'FAIL'}")
    lines.append(f"config: {json.dumps(report['config'], sort_keys=True)}")
    lines.append("PASS" if report["pass"] else "FAIL")
    if "generated" in report:
        lines.append(f"generated: {report['generated']}")
    return "\n".join(lines) + "\n"


def emit(report: dict, args) -> None:
    text = render_text(report) if args.format == "text" else json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def resolve_seed(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise InputError(f"{SEED_ENV} must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _config_echo(args, seed: int, **more) -> dict:
    return {"tol": args.tol, "cluster_tol": args.cluster_tol, "seed": seed,
            "hermitian_check": not args.no_hermitian_check, **more}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_eig(args) -> int:
    seed = resolve_seed(args.seed)
    mf = read_matrix(args.path)
    config = spectral.SpectralConfig(cluster_tol=args.cluster_tol, hermitian_tol=args.tol,
                                     check_hermitian=not args.no_hermitian_check)
    result = spectral.full_spectrum(mf.matrix, config)
    inputs = {"source": args.path, "label": mf.label, "n": mf.n, "sha256": mf.digest}
    report = build_report(inputs, result.checks, _config_echo(args, seed, spectral=result.tolerances),
                          spectrum_payload(result), timestamp=not args.no_timestamp)
    emit(report, args)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def kronecker_suite(max_n: int = 5) -> list[IdentityCheckResult]:
    checks = []
    for n in range(1, max_n + 1):
        for p in range(n + 1):
            for s in range(p + 1):
                checks.append(tensor_core.check_kronecker_contraction(n, s, p))
                checks.append(tensor_core.check_kronecker_product(n, s, p))
    return checks


def instance_suite(suite: str, A: np.ndarray, tol: float, tag: str) -> list[IdentityCheckResult]:
    """Checks of one suite on one matrix; names are prefixed with ``tag``."""
    n = A.shape[0]
    out: list[IdentityCheckResult] = []
    if suite == "lemma1":
        for s in range(1, n + 1):
            for r in range(1, s + 1):
                out.append(tensor_core.check_contraction_identity(A, r, s, tol=tol))
        for s in range(n + 1):
            out.append(tensor_core.check_minor_complement_product(A, s, tol=tol))
    elif suite == "cauchy-binet":
        B = A.conj().T
        for s in range(1, min(n, 4) + 1):
            out.append(tensor_core.check_cauchy_binet_all(A, B, s, tol=tol))
    elif suite == "traces":
        out += [trace_identities.check_trace_route(A, s, tol) for s in range(1, n)]
    elif suite == "bell":
        out += [trace_identities.check_bell_route(A, s, tol) for s in range(1, n)]
    elif suite == "minor-sums":
        out += [trace_identities.check_minor_sums(A, s, tol) for s in range(1, n)]
    else:
        raise InputError(f"unknown suite {suite!r}")
    for res in out:
        res.name = f"{tag}:{res.name}"
    return out


def cmd_verify(args) -> int:
    seed = resolve_seed(args.seed)
    suites = SUITES if args.suite == "all" else (args.suite,)
    instances: list[tuple[str, np.ndarray]] = []
    if args.random is not None:
        n, k = args.random
        if n < 1 or k < 1:
            raise InputError("--random needs n >= 1 and k >= 1")
        if n > 8:
            raise DimensionGuardError("--random is limited to n <= 8")
        rng = np.random.default_rng(seed)
        for t in range(k):
            instances.append((f"random{t}", rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))))
        inputs = {"source": "random", "n": n, "count": k, "seed": seed}
    elif args.path is not None:
        mf = read_matrix(args.path)
        if not args.no_hermitian_check:
            spectral.require_hermitian(mf.matrix, args.tol)
        instances.append((mf.label or "input", mf.matrix))
        inputs = {"source": args.path, "label": mf.label, "n": mf.n, "sha256": mf.digest}
    elif suites == ("kronecker",):
        inputs = {"source": "none"}
    else:
        raise InputError("verify needs a matrix path or --random n k")

    checks: list[IdentityCheckResult] = []
    for suite in suites:
        if suite == "kronecker":
            checks += kronecker_suite()
            continue
        for tag, A in instances:
            checks += instance_suite(suite, A, args.tol, tag)
    report = build_report(inputs, checks, _config_echo(args, seed, suites=list(suites)),
                          timestamp=not args.no_timestamp)
    emit(report, args)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def _row(quantity: str, reference, library, deviation: float) -> dict:
    def fmt(x):
        x = complex(x)
        return f"{x.real:.10g}" if x.imag == 0 else f"{x.real:.6g}{x.imag:+.6g}i"
    return {"quantity": quantity, "reference": fmt(reference), "library": fmt(library),
            "deviation": float(deviation)}


def demo_two_level(args) -> tuple[dict, list[IdentityCheckResult], list[dict]]:
    params = showcase.TwoLevelParams(args.v11, args.v22, parse_complex(args.v12))
    H = showcase.two_level_hamiltonian(params)
    ref = showcase.two_level_reference(params)
    groups = spectral.eigenvalues(H, args.cluster_tol)
    lib = sorted(float(np.real(g.lam)) for g in groups)
    scale = max(1.0, np.abs(H).max())
    tol = max(args.tol, 1e-12)
    rows, checks = [], []
    for sign, lam, chi, adj_ref, P in ((+1, ref.lam_plus, ref.chi_plus, ref.adj_plus, ref.P_plus),
                                       (-1, ref.lam_minus, ref.chi_minus, ref.adj_minus, ref.P_minus)):
        tag = "+" if sign > 0 else "-"
        got = lib[-1] if sign > 0 else lib[0]
        rows.append(_row(f"lambda{tag}", lam, got, abs(lam - got)))
        checks.append(compare(f"eigenvalue{tag}", got, lam, tol, floor=scale))
        adj = tensor_core.adjugate(lam * np.eye(2) - H)
        checks.append(compare(f"adjugate{tag}", adj, adj_ref, tol, floor=scale))
        v = spectral.eigenvector_nondegenerate(H, got)
        cross = showcase.cross_determinant(v, chi)
        rows.append(_row(f"|<chi{tag}, v{tag}>|", 1.0, abs(np.vdot(chi, v)), cross))
        checks.append(IdentityCheckResult(f"parallel_chi{tag}", cross, cross, tol, cross < tol))
        checks.append(compare(f"projector_idempotent{tag}", P @ P, P, tol, floor=1.0))
    checks.append(compare("projector_orthogonal", ref.P_plus @ ref.P_minus, np.zeros((2, 2)), tol, floor=1.0))
    a, b, n = showcase.pauli_decomposition(H)
    rows.append(_row("a = Tr[H]/2", (params.V11 + params.V22) / 2, a, abs(a - (params.V11 + params.V22) / 2)))
    rows.append(_row("b = omega/2", ref.omega / 2, b, abs(b - ref.omega / 2)))
    inputs = {"demo": "two-level", "V11": params.V11, "V22": params.V22, "V12": _num(params.V12)}
    return inputs, checks, rows


def demo_dirac(args) -> tuple[dict, list[IdentityCheckResult], list[dict]]:
    params = showcase.DiracParams(args.m, parse_vector3(args.p))
    E = params.energy
    if E == 0:
        raise ParameterError("m = 0 and p = 0 give a vanishing Hamiltonian")
    H = showcase.dirac_hamiltonian(params)
    groups = spectral.eigenvalues(H, args.cluster_tol)
    rows, checks = [], []
    tol = max(args.tol, 1e-10)
    lams = sorted((float(np.real(g.lam)), g.s) for g in groups)
    checks.append(IdentityCheckResult("multiplicities", 0.0, 0.0, 0.0, [s for _, s in lams] == [2, 2],
                                      {"groups": lams}))
    for sign in (+1, -1):
        tag = "+" if sign > 0 else "-"
        lam = sign * E
        got = max(lams)[0] if sign > 0 else min(lams)[0]
        rows.append(_row(f"lambda{tag}", lam, got, abs(lam - got)))
        checks.append(compare(f"eigenvalue{tag}", got, lam, tol, floor=E))
        C = lam * np.eye(4) - H
        dev_det = abs(tensor_core.det(C))
        dev_adj = float(np.abs(tensor_core.adjugate(C)).max())
        checks.append(IdentityCheckResult(f"det_vanishes{tag}", dev_det, dev_det / E ** 4, 1e-9, dev_det < 1e-9 * E ** 4))
        checks.append(IdentityCheckResult(f"adjugate_vanishes{tag}", dev_adj, dev_adj / E ** 3, 1e-9,
                                          dev_adj < 1e-9 * E ** 3))
        psi = trace_identities.reduced_complement_via_traces(C, 2)
        psi_ref = showcase.dirac_complement(params, lam)
        checks.append(compare(f"psi_complement{tag}", psi, psi_ref, tol))
        checks.append(compare(f"null_space{tag}", C @ psi, np.zeros((4, 4)), tol, floor=np.abs(psi_ref).max()))
        rows.append(_row(f"max|Psi{tag}|", np.abs(psi_ref).max(), np.abs(psi).max(), np.abs(psi - psi_ref).max()))
    extra_inputs = {}
    if params.m > 0:
        ref = showcase.dirac_reference(params)
        for sign, spinors in ((+1, ref.u), (-1, ref.v)):
            tag = "+" if sign > 0 else "-"
            V = spectral.eigenvectors_degenerate(H, sign * E, 2)
            angle = float(subspace_angles(V, np.column_stack(spinors)).max())
            checks.append(IdentityCheckResult(f"span{tag}", angle, angle, 1e-8, angle < 1e-8))
            rows.append(_row(f"max angle span{tag}", 0.0, angle, angle))
        for name, spinor in zip(("u(p,+)", "u(p,-)", "v(p,+)", "v(p,-)"), ref.u + ref.v):
            extra_inputs[name] = showcase.encode(spinor)
    inputs = {"demo": "dirac", "m": params.m, "p": list(params.p), "energy": E}
    if extra_inputs:
        inputs["spinors"] = extra_inputs
    return inputs, checks, rows


def cmd_demo(args) -> int:
    seed = resolve_seed(args.seed)
    runner = demo_two_level if args.name == "two-level" else demo_dirac
    inputs, checks, rows = runner(args)
    report = build_report(inputs, checks, _config_echo(args, seed), extra={"demo": rows},
                          timestamp=not args.no_timestamp)
    emit(report, args)
    return EXIT_OK if report["pass"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tol", type=float, default=d(1e-10), help="identity and Hermiticity tolerance")
    parser.add_argument("--cluster-tol", type=float, default=d(1e-7), help="eigenvalue merge tolerance")
    parser.add_argument("--seed", type=int, default=d(None), help=f"random seed (default ${SEED_ENV} or 42)")
    parser.add_argument("--out", default=d(None), help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "text"), default=d("json"))
    parser.add_argument("--no-timestamp", action="store_true", default=d(False))
    parser.add_argument("--no-hermitian-check", action="store_true", default=d(False),
                        help="accept non-Hermitian input (diagnostic only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="complement-eig",
                                     description="Eigenvectors from complements of minor determinants.")
    _add_common(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p_eig = sub.add_parser("eig", parents=[common], help="full spectrum of a Hermitian matrix")
    p_eig.add_argument("path", help="matrix file, or - for stdin")
    p_eig.set_defaults(func=cmd_eig)

    p_ver = sub.add_parser("verify", parents=[common], help="check identities on matrices")
    p_ver.add_argument("path", nargs="?", help="matrix file, or - for stdin")
    p_ver.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p_ver.add_argument("--random", nargs=2, type=int, metavar=("N", "K"), help="K random N x N matrices")
    p_ver.set_defaults(func=cmd_verify)

    p_demo = sub.add_parser("demo", parents=[common], help="worked examples")
    demos = p_demo.add_subparsers(dest="name", required=True)
    p_two = demos.add_parser("two-level", parents=[common])
    p_two.add_argument("--v11", type=float, default=1.0)
    p_two.add_argument("--v22", type=float, default=-1.0)
    p_two.add_argument("--v12", default="0.5+0.5i")
    p_dirac = demos.add_parser("dirac", parents=[common])
    p_dirac.add_argument("--m", type=float, default=1.0)
    p_dirac.add_argument("--p", default="0,0,1", help="momentum as x,y,z")
    p_demo.set_defaults(func=cmd_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HermiticityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HERMITIAN
    except (ConvergenceError, MultiplicityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InputError, ParameterError, ShapeError, OrderError, DimensionGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
