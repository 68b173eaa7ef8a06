"""Command-line front end.

Exit codes: 0 success, 1 audit failure, 2 usage or parse error, 3 domain
error (a file that parses but violates a state/density invariant, or an
operation rejecting its input).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import linalg, measures, optimize, states
from .errors import EntcohError
from .files import FileFormatError, read_density, read_state

EXIT_OK, EXIT_AUDIT, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

AUDIT_TOL = 1e-8
CONJECTURE_SLACK = 1e-9
PROBE_BASES = 20
SWEEP_HEADER = "param,ec,iconc_norm,entropy_norm"


class UsageError(Exception):
    pass


def _fixed(x: float, digits: int = 9) -> str:
    # Round first so tiny negatives never print as "-0.000000000".
    return f"{round(float(x), digits) + 0.0:.{digits}f}"


def _sci(x: float) -> str:
    return f"{float(x):.3e}"


def _emit(out, rows: list[tuple[str, str]], fmt: str) -> None:
    if fmt == "csv":
        out.write(",".join(k for k, _ in rows) + "\n")
        out.write(",".join(v for _, v in rows) + "\n")
    else:
        width = max(len(k) for k, _ in rows)
        for k, v in rows:
            out.write(f"{k:<{width}} = {v}\n")


def cmd_measure(args, out) -> int:
    psi = read_state(args.file)
    report = measures.full_report(psi, seed=args.seed)
    digits = 9 if args.format == "csv" else 6
    rows = [("n", str(report.n))]
    for name in ("ec", "i_concurrence_sq", "i_concurrence_norm", "entropy", "entropy_norm",
                 "quantum_uncertainty", "max_skew_coherence"):
        rows.append((name, _fixed(getattr(report, name), digits)))
    rows += [(f"residual.{k}", _sci(v)) for k, v in report.identity_residuals.items()]
    _emit(out, rows, args.format)
    if report.max_residual > AUDIT_TOL:
        sys.stderr.write(f"identity residual {report.max_residual:.3e} exceeds {AUDIT_TOL:g}\n")
        return EXIT_DOMAIN
    return EXIT_OK


def sweep_rows(family: str, steps: int) -> list[tuple[float, float, float, float]]:
    if steps < 2:
        raise UsageError("--steps must be at least 2")
    if family == "psi1":
        grid, make = np.linspace(0.0, np.pi / 2, steps), states.make_psi1
    else:
        grid, make = np.linspace(0.0, 1.0, steps), states.make_psi2
    rows = []
    for t in grid:
        rho = states.smaller_reduction(make(float(t)))
        rows.append((float(t), measures.ec_from_density(rho),
                     measures.i_concurrence_norm(rho),
                     measures.entropy_of_entanglement(rho, normalized=True)))
    return rows


def cmd_sweep(args, out) -> int:
    rows = sweep_rows(args.family, args.steps)
    text = SWEEP_HEADER + "\n" + "".join(",".join(_fixed(v) for v in row) + "\n" for row in rows)
    if args.out in (None, "-"):
        out.write(text)
        return EXIT_OK
    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from exc
    return EXIT_OK


def _structural_residuals(psi, rng) -> dict:
    """Checks beyond ``identity_residuals`` that need both reductions or a
    local unitary."""
    n = psi.n
    rho_a = states.reduced_density(psi, "A")
    rho_b = states.reduced_density(psi, "B")
    spec_a = rho_a.eigenvalues[:n]
    spec_b = rho_b.eigenvalues[:n]
    sd = states.schmidt_decompose(psi)
    u = linalg.haar_random_unitary(psi.dim_a, rng)
    v = linalg.haar_random_unitary(psi.dim_b, rng)
    moved = states.local_unitary(psi, u, v)
    ec = measures.entanglement_coherence(psi)
    return {
        "reduced_spectra": float(np.max(np.abs(spec_a - spec_b))),
        "subsystem_symmetry": abs(measures.ec_from_density(rho_a, n)
                                  - measures.ec_from_density(rho_b, n)),
        "schmidt_reconstruction": linalg.max_abs(sd.reconstruct() - psi.coeffs),
        "local_unitary_invariance": abs(measures.entanglement_coherence(moved) - ec),
    }


def _conjecture_probe(psi, rng) -> tuple[int, float]:
    """Compare joint-basis coherence in the Schmidt bases against random
    product bases; return (violations, smallest margin)."""
    sa, sb = states.schmidt_unitaries(psi)
    schmidt_value = measures.joint_basis_coherence(psi, sa, sb)
    violations = 0
    margin = np.inf
    for _ in range(PROBE_BASES):
        ua = linalg.haar_random_unitary(psi.dim_a, rng)
        ub = linalg.haar_random_unitary(psi.dim_b, rng)
        diff = measures.joint_basis_coherence(psi, ua, ub) - schmidt_value
        margin = min(margin, diff)
        violations += diff < -CONJECTURE_SLACK
    return violations, float(margin)


def run_audit(trials: int, max_dim: int, seed: int, psi=None):
    """Identity audit over random states (or ``trials`` passes over ``psi``).

    Returns ``(maxima, violations, min_margin, comparisons)`` where
    ``maxima`` maps each identity to its largest residual.
    """
    if trials < 1:
        raise UsageError("--trials must be at least 1")
    if not 2 <= max_dim <= 8:
        raise UsageError("--max-dim must lie in [2, 8]")
    rng = np.random.default_rng(seed)
    maxima: dict[str, float] = {}
    violations = 0
    min_margin = np.inf
    for _ in range(trials):
        if psi is None:
            d_a, d_b = (int(d) for d in rng.integers(2, max_dim + 1, size=2))
            state = states.random_state(d_a, d_b, rng)
        else:
            state = psi
        res = measures.identity_residuals(state, seed=int(rng.integers(2**63)))
        res.update(_structural_residuals(state, rng))
        for k, v in res.items():
            maxima[k] = max(maxima.get(k, 0.0), v)
        count, margin = _conjecture_probe(state, rng)
        violations += count
        min_margin = min(min_margin, margin)
    return maxima, violations, min_margin, trials * PROBE_BASES


def cmd_audit(args, out) -> int:
    psi = read_state(args.state) if args.state else None
    maxima, violations, margin, comparisons = run_audit(args.trials, args.max_dim, args.seed, psi)
    ok = all(v <= AUDIT_TOL for v in maxima.values())
    if args.format == "csv":
        out.write("identity,max_residual,status\n")
        for k, v in maxima.items():
            out.write(f"{k},{_sci(v)},{'PASS' if v <= AUDIT_TOL else 'FAIL'}\n")
        out.write(f"schmidt_minimality_violations,{violations},REPORTED\n")
    else:
        out.write(f"audit trials={args.trials} max_dim={args.max_dim} seed={args.seed} "
                  f"tolerance={AUDIT_TOL:g}\n")
        width = max(len(k) for k in maxima)
        for k, v in maxima.items():
            out.write(f"{k:<{width}}  {_sci(v)}  {'PASS' if v <= AUDIT_TOL else 'FAIL'}\n")
        out.write(f"schmidt-minimality probe: {comparisons} comparisons, "
                  f"{violations} violations, min margin {_sci(margin)}\n")
        out.write(f"result: {'PASS' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_AUDIT


def _matrix_rows(name: str, m: np.ndarray) -> list[tuple[str, str]]:
    return [(f"{name}[{i}]", " ".join(f"{_fixed(z.real)}{'+' if z.imag >= 0 else '-'}"
                                      f"{_fixed(abs(z.imag))}j" for z in row))
            for i, row in enumerate(m)]


def cmd_optimize_basis(args, out) -> int:
    rho, _ = read_density(args.file, args.tolerance)
    res = optimize.maximize_skew_coherence(rho, args.iterations, args.restarts, args.seed)
    rows = [
        ("best_value", _fixed(res.best_value)),
        ("analytic_target", _fixed(res.analytic_target)),
        ("gap", _sci(res.gap)),
        ("iterations_used", str(res.iterations_used)),
        ("converged", str(res.converged).lower()),
    ]
    if args.format == "text":
        rows += _matrix_rows("basis", res.best_basis)
    _emit(out, rows, args.format)
    return EXIT_OK


def _parse_dims(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--dims expects A,B, got {text!r}") from exc
    return a, b


def cmd_convex_roof(args, out) -> int:
    rho, file_dims = read_density(args.file, args.tolerance)
    if args.dims:
        dims = _parse_dims(args.dims)
    elif len(file_dims) == 2:
        dims = file_dims
    else:
        raise UsageError("--dims A,B is required when the file does not give two dimensions")
    est = optimize.convex_roof_upper_bound(rho, dims, args.ensemble, args.restarts,
                                           args.iterations, args.seed)
    rows = [
        ("upper_bound", _fixed(est.upper_bound)),
        ("ensemble_size", str(est.ensemble_size)),
        ("members", str(len(est.decomposition))),
        ("restarts_used", str(est.restarts_used)),
        ("iterations_used", str(est.iterations_used)),
        ("converged", str(est.converged).lower()),
    ]
    if args.format == "text":
        for k, (q, psi) in enumerate(est.decomposition):
            rows.append((f"member[{k}]", f"weight={_fixed(q)} "
                                         f"ec={_fixed(measures.entanglement_coherence(psi))}"))
    _emit(out, rows, args.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entcoh", description="Entanglement coherence of bipartite states.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=linalg.DEFAULT_TOL,
                        help="validation tolerance for density files (default 1e-10)")
    common.add_argument("--format", choices=("text", "csv"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", parents=[common], help="all measures of a pure state file")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0, help="seed of the rotated audit basis")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("sweep", parents=[common], help="measure curves of the qutrit families")
    p.add_argument("--family", choices=("psi1", "psi2"), required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("audit", parents=[common], help="randomized identity audit")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-dim", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--state", default=None, help="audit this state file instead of random ones")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("optimize-basis", parents=[common],
                       help="numerically maximize skew coherence of a density file")
    p.add_argument("file")
    p.add_argument("--iterations", type=int, default=2000)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_optimize_basis)

    p = sub.add_parser("convex-roof", parents=[common],
                       help="convex-roof upper bound for a bipartite density file")
    p.add_argument("file")
    p.add_argument("--dims", default=None, help="subsystem dimensions A,B")
    p.add_argument("--ensemble", type=int, default=None)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--iterations", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_convex_roof)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, FileFormatError) as exc:
        sys.stderr.write(f"entcoh {args.command}: {exc}\n")
        return EXIT_USAGE
    except EntcohError as exc:
        sys.stderr.write(f"entcoh {args.command}: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
