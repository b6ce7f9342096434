"""Command line interface: ``maxalg <command> --input FILE [options]``.

Exit status is 0 on success, 1 on input or parse errors and 2 when a
mathematical precondition fails (the message names it).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import io
from .core import EXACT, FLOAT, Family, MaxMatrix, RootValue, format_scalar
from .dynamics import (
    DEFAULT_EPSILON,
    DEFAULT_MAX_ITER,
    CommonEigenSystem,
    common_eigenvectors,
    decay_certificate,
    matrix_period,
    orbit,
    parse_word,
    predicted_limit,
    word_product,
)
from .errors import EnumerationLimitError, MaxAlgebraError, PreconditionError
from .graph import (
    find_common_triangularizer,
    frobenius_normal_form,
    max_cycle_mean,
    triangularization_obstruction,
)
from .polynomial import (
    check_chain_single,
    check_family_bounds,
    coefficient_pool,
    poly_eval,
    poly_spectrum,
    triangular_jsr,
)
from .reproduce import perturbed_b1, verify_paper
from .spectral import eigen_spectrum, eta, eta_hat, eta_hat_estimate, induced_norm, jsr, jsr_bracket

DEFAULT_HORIZON = 4


class InputError(MaxAlgebraError):
    """The input file lacks what the command needs."""


def _val(x):
    return io.dump_value(x)


def _txt(x) -> str:
    if isinstance(x, RootValue) and x.is_rational():
        x = x.as_fraction()
    if isinstance(x, RootValue) and not x.is_float:
        return f"{x} ~ {float(x):.12g}"
    return format_scalar(x)


def _vec(v: MaxMatrix) -> list[str]:
    return io.dump_vector(v)


def _vtxt(v: MaxMatrix) -> str:
    return "(" + ", ".join(format_scalar(x) for x in v.flat()) + ")"


def _one_based(cycle) -> list[int]:
    return [i + 1 for i in cycle]


def _need_matrix(sc: io.Scenario) -> MaxMatrix:
    if sc.matrix is not None:
        return sc.matrix
    if sc.family is not None and len(sc.family) == 1:
        return sc.family.matrices()[0]
    raise InputError("this command needs a single matrix")


def _need_family(sc: io.Scenario) -> Family:
    if sc.family is not None:
        return sc.family
    if sc.polys:
        return coefficient_pool(sc.polys)
    if sc.matrix is not None:
        return Family({"1": sc.matrix})
    raise InputError("this command needs a family of matrices")


def _need_poly(sc: io.Scenario):
    if len(sc.polys) != 1:
        raise InputError(f"this command needs exactly one polynomial, found {len(sc.polys)}")
    return sc.polys[0]


def _need_polys(sc: io.Scenario):
    if not sc.polys:
        raise InputError("this command needs a list of polynomials")
    return sc.polys


def _need_word(sc: io.Scenario, args) -> str:
    word = args.word or sc.word
    if not word:
        raise InputError("this command needs a word (scenario 'word' or --word)")
    return word


def _need_x(sc: io.Scenario, args) -> MaxMatrix:
    if args.x:
        return MaxMatrix.vector([io.parse_entry(t, args.backend, "--x", f"[{i}]")
                                 for i, t in enumerate(args.x.split(","))], args.backend)
    if sc.x is None:
        raise InputError("this command needs an initial vector (scenario 'x' or --x)")
    return sc.x


def _opt(args, sc: io.Scenario, name: str, default):
    val = getattr(args, name)
    if val is not None:
        return val
    return sc.options.get(name, default)


# each handler returns (result dict, text lines)

def cmd_cyclemean(sc, args):
    A = _need_matrix(sc)
    cm = max_cycle_mean(A)
    return ({"value": _val(cm.value), "cycle": _one_based(cm.cycle)},
            [f"mu = {_txt(cm.value)}", f"cycle = {_one_based(cm.cycle)}"])


def cmd_eig(sc, args):
    A = _need_matrix(sc)
    pairs = eigen_spectrum(A)
    res = [{"value": _val(p.value), "vector": _vec(p.vector),
            "generators": [_vec(g) for g in p.generators]} for p in pairs]
    lines = [f"lambda = {_txt(p.value)}  v = {_vtxt(p.vector)}" for p in pairs]
    return {"eigenpairs": res}, lines


def cmd_fnf(sc, args):
    A = _need_matrix(sc)
    f = frobenius_normal_form(A)
    classes = [[i + 1 for i in c] for c in f.components]
    res = {"permutation": [i + 1 for i in f.permutation.image], "classes": classes,
           "permuted": io.dump_matrix(f.permuted),
           "class_mu": [_val(max_cycle_mean(B).value) for B in f.blocks]}
    return res, [f"classes = {classes}", str(f.permuted)]


def cmd_triangularize(sc, args):
    F = _need_family(sc)
    sigma = find_common_triangularizer(F)
    if sigma is None:
        cyc = _one_based(triangularization_obstruction(F))
        return ({"triangularizable": False, "obstruction": cyc},
                [f"not simultaneously triangularizable; cycle {cyc}"])
    return ({"triangularizable": True, "permutation": [i + 1 for i in sigma.image],
             "cycles": str(sigma)}, [f"sigma = {sigma}"])


def cmd_eta(sc, args):
    A = _need_matrix(sc)
    norm = _opt(args, sc, "norm", "linf")
    K = _opt(args, sc, "horizon", DEFAULT_HORIZON)
    est = eta_hat_estimate(A, K, norm)
    res = {"norm": norm, "eta": _val(eta(A, norm)), "eta_hat": _val(eta_hat(A)),
           "induced_norm": _val(induced_norm(A, norm)), "estimates": [_val(e) for e in est]}
    return res, [f"eta = {_txt(eta(A, norm))}", f"eta_hat = {_txt(eta_hat(A))}",
                 f"induced norm = {_txt(induced_norm(A, norm))}"]


def cmd_jsr(sc, args):
    F = _need_family(sc)
    K = _opt(args, sc, "horizon", None)
    norm = _opt(args, sc, "norm", "linf")
    rep = jsr_bracket(F, K, norm) if K else jsr(F)
    res = {"value": _val(rep.value), "cycle": _one_based(rep.cycle), "assignment": list(rep.assignment)}
    lines = [f"jsr = {_txt(rep.value)}", f"cycle = {_one_based(rep.cycle)} via {list(rep.assignment)}"]
    if K:
        res.update(norm=norm, lower=[_val(x) for x in rep.lower], upper=[_val(x) for x in rep.upper],
                   attained_at=rep.attained_at(), brackets_hold=rep.brackets_hold())
        lines += [f"k={k}: {_txt(lo)} <= jsr <= {_txt(up)}"
                  for k, (lo, up) in enumerate(zip(rep.lower, rep.upper), 1)]
    return res, lines


def cmd_poly_eval(sc, args):
    P = _need_poly(sc)
    if args.at is None:
        raise InputError("poly-eval needs --at")
    lam = io.parse_entry(args.at, args.backend, "--at")
    M = poly_eval(P, lam)
    return {"at": _val(lam), "value": io.dump_matrix(M)}, [str(M)]


def cmd_poly_spectrum(sc, args):
    P = _need_poly(sc)
    spec = poly_spectrum(P)
    res = [{"value": _val(k), "vector": _vec(v)} for k, v in spec]
    return {"spectrum": res}, [f"k = {_txt(k)}  v = {_vtxt(v)}" for k, v in spec]


def cmd_poly_bounds(sc, args):
    P = _need_poly(sc)
    rep = check_chain_single(P, _opt(args, sc, "norm", "linf"))
    res = {"lower": _val(rep.lower), "middle": _val(rep.middle), "upper": _val(rep.upper),
           "verdict": rep.verdict, "norm": rep.norm, "provenance": rep.provenance}
    return res, [f"{_txt(rep.lower)} <= {_txt(rep.middle)} <= {_txt(rep.upper)}: "
                 f"{'holds' if rep.verdict else 'FAILS'}"]


def cmd_family_bounds(sc, args):
    psi = _need_polys(sc)
    K = _opt(args, sc, "horizon", DEFAULT_HORIZON)
    rep = check_family_bounds(psi, K, _opt(args, sc, "norm", "linf"))
    traj = [{k: (_val(v) if isinstance(v, (RootValue, Fraction)) else v) for k, v in row.items()}
            for row in rep.trajectory]
    res = {"lower": _val(rep.lower), "middle": _val(rep.middle), "upper": _val(rep.upper),
           "verdict": rep.verdict, "norm": rep.norm, "provenance": rep.provenance, "trajectory": traj}
    lines = [f"jsr(pool) = {_txt(rep.lower)}"]
    lines += [f"k={r['k']}: {_txt(r['coefficient_bound'])} <= {_txt(r['growth'])} <= {_txt(r['upper'])}"
              for r in rep.trajectory]
    lines.append("holds" if rep.verdict else "FAILS")
    return res, lines


def cmd_triangular_jsr(sc, args):
    tj = triangular_jsr(sc.polys if sc.polys else _need_family(sc))
    res = {"value": _val(tj.value), "permutation": [i + 1 for i in tj.permutation.image],
           "pools": [[_val(x) for x in p] for p in tj.pools], "suprema": [_val(x) for x in tj.suprema],
           "jsr": _val(tj.jsr_value), "agrees": tj.agrees}
    return res, [f"sigma = {tj.permutation}",
                 *(f"pool {i + 1}: {[format_scalar(x) for x in p]}" for i, p in enumerate(tj.pools)),
                 f"triangular jsr = {_txt(tj.value)} (jsr = {_txt(tj.jsr_value)})"]


def cmd_word(sc, args):
    F = _need_family(sc)
    word = _need_word(sc, args)
    M = word_product(F, word)
    symbols = parse_word(F, word)
    return ({"word": list(symbols), "complete": set(symbols) == set(F.names()),
             "product": io.dump_matrix(M)}, [str(M)])


def cmd_orbit(sc, args):
    x = _need_x(sc, args)
    if sc.family is not None and (args.word or sc.word):
        T = word_product(sc.family, _need_word(sc, args))
    else:
        T = _need_matrix(sc)
    eps = _opt(args, sc, "epsilon", DEFAULT_EPSILON)
    if args.backend == FLOAT:
        eps = float(eps)
    rep = orbit(T, x, eps, _opt(args, sc, "max_iter", DEFAULT_MAX_ITER))
    res = {"mode": rep.mode, "steps": rep.steps, "state": _vec(rep.state)}
    line = f"{rep.mode} after {rep.steps} steps"
    if rep.mode == "exact-periodic":
        res.update(period=rep.period, transient=rep.transient)
        line += f", period {rep.period}"
    if rep.limit is not None:
        res["limit"] = _vec(rep.limit)
        line += f", limit {_vtxt(rep.limit)}"
    if rep.rate is not None:
        res["rate"] = _val(rep.rate)
        line += f", rate {_txt(rep.rate)}"
    if rep.distance is not None:
        res["distance"] = _val(rep.distance)
    return res, [line]


def cmd_period(sc, args):
    A = _need_matrix(sc)
    rep = matrix_period(A, _opt(args, sc, "cap", 512))
    res = {"period": rep.period, "transient": rep.transient, "eigenvalue": _val(rep.eigenvalue),
           "complete": rep.complete, "robust": rep.robust}
    if not rep.complete:
        return res, [f"no repetition within {rep.states} powers (partial)"]
    return res, [f"p = {rep.period}, k0 = {rep.transient}, lambda = {_txt(rep.eigenvalue)}"
                 + (" (robust)" if rep.robust else "")]


def _system_json(system: CommonEigenSystem) -> dict:
    return {"vectors": [_vec(v) for v in system.vectors],
            "alpha": {name: [_val(a) for a in row]
                      for name, row in zip(system.family.names(), system.alpha)}}


def cmd_common_eig(sc, args):
    F = _need_family(sc)
    system = common_eigenvectors(F)
    lines = [f"v{j + 1} = {_vtxt(v)}  alpha = {[_txt(system.alpha[i][j]) for i in range(len(F))]}"
             for j, v in enumerate(system.vectors)]
    return _system_json(system), lines or ["no common eigenvector found"]


def cmd_predict_limit(sc, args):
    F = _need_family(sc)
    x = _need_x(sc, args)
    system = common_eigenvectors(F)
    pred = predicted_limit(x, _need_word(sc, args), system, F)
    res = {"limit": _vec(pred.limit), "gamma": [_val(g) for g in pred.gamma],
           "beta": [_val(b) for b in pred.beta], "fixed_by_word": pred.fixed_by_word,
           "fixed_by": pred.fixed_by, "complete": pred.complete, **_system_json(system)}
    return res, [f"limit = {_vtxt(pred.limit)}", f"fixed by word: {pred.fixed_by_word}",
                 f"fixed by each member: {pred.fixed_by}"]


def cmd_decay(sc, args):
    F = _need_family(sc)
    x = _need_x(sc, args)
    k = _opt(args, sc, "horizon", 20)
    cert = decay_certificate(F, _need_word(sc, args), x, k)
    res = {"rho": _val(cert.rho), "rate": _val(cert.rate), "asymptotic_rate": _val(cert.asymptotic_rate),
           "constant": _val(cert.constant), "threshold": cert.threshold, "word_length": cert.word_length,
           "norms": [_val(v) for v in cert.norms], "bounds": [_val(v) for v in cert.bounds],
           "holds": cert.holds, "asymptotic_holds": cert.asymptotic_holds,
           "periodic_orbit_found": cert.periodic_orbit_found}
    return res, [f"jsr = {_txt(cert.rho)} < r = {cert.asymptotic_rate}",
                 f"|A_w^k x| <= {cert.constant} * ({cert.rate})^(k p) |x| for k <= {k}: "
                 f"{'holds' if cert.holds else 'FAILS'}",
                 f"nonzero periodic orbit detected: {cert.periodic_orbit_found}"]


def cmd_verify_paper(sc, args):
    checks = verify_paper(perturbed_b1() if args.perturb else None)
    res = {"passed": all(c.passed for c in checks),
           "checks": [{"example": c.example, "name": c.name, "passed": c.passed, "detail": c.detail}
                      for c in checks]}
    lines = [f"[{'PASS' if c.passed else 'FAIL'}] {c.example}: {c.name} ({c.detail})" for c in checks]
    return res, lines


COMMANDS = {
    "cyclemean": (cmd_cyclemean, "maximum cycle mean and a witness cycle"),
    "eig": (cmd_eig, "max-eigenvalues with eigenvectors"),
    "fnf": (cmd_fnf, "Frobenius normal form"),
    "triangularize": (cmd_triangularize, "common triangularizing permutation"),
    "eta": (cmd_eta, "seminorm and its spectral limit"),
    "jsr": (cmd_jsr, "joint spectral radius (brackets with --horizon)"),
    "poly-eval": (cmd_poly_eval, "evaluate a polynomial at --at"),
    "poly-spectrum": (cmd_poly_spectrum, "polynomial spectrum via the companion matrix"),
    "poly-bounds": (cmd_poly_bounds, "single-polynomial bound chain"),
    "family-bounds": (cmd_family_bounds, "finite-horizon bounds for a polynomial family"),
    "triangular-jsr": (cmd_triangular_jsr, "JSR from diagonal pools"),
    "word": (cmd_word, "word product"),
    "orbit": (cmd_orbit, "iterate a matrix or word product on x"),
    "period": (cmd_period, "matrix period and transient"),
    "common-eig": (cmd_common_eig, "common eigenvectors of a family"),
    "predict-limit": (cmd_predict_limit, "limit of a switched orbit from common eigenvectors"),
    "decay": (cmd_decay, "decay certificate when jsr < 1"),
    "verify-paper": (cmd_verify_paper, "re-derive both worked examples"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maxalg", description="Exact max-times linear algebra.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        if name != "verify-paper":
            p.add_argument("--input", "-i", required=True, help="JSON input file")
        p.add_argument("--norm", choices=["linf", "l1"], default=None)
        p.add_argument("--horizon", type=int, default=None)
        p.add_argument("--epsilon", default=None, help="tolerance, e.g. 1/1000000000000")
        p.add_argument("--max-iter", dest="max_iter", type=int, default=None)
        p.add_argument("--cap", type=int, default=None, help="state cap for period")
        p.add_argument("--word", default=None)
        p.add_argument("--x", default=None, help="comma-separated initial vector")
        p.add_argument("--at", default=None, help="evaluation point for poly-eval")
        p.add_argument("--json", action="store_true", help="machine-readable output only")
        p.add_argument("--backend", choices=[EXACT, FLOAT], default=EXACT)
        if name == "verify-paper":
            p.add_argument("--perturb", action="store_true",
                           help="raise one diagonal entry of the first 4x4 matrix to 1.1")
    return parser


def run_command(argv=None, out=None, err=None) -> int:
    """Run one command; returns the exit status."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        if args.epsilon is not None:
            args.epsilon = io.parse_entry(args.epsilon, EXACT, "--epsilon")
        sc = io.load(args.input, args.backend) if getattr(args, "input", None) else io.Scenario()
        result, lines = handler(sc, args)
    except (PreconditionError, EnumerationLimitError) as exc:
        return _fail(args, out, err, 2, "precondition", exc)
    except (MaxAlgebraError, OSError) as exc:
        return _fail(args, out, err, 1, "input", exc)
    status = 0
    if args.command == "verify-paper" and not result["passed"]:
        status = 2
    if args.json:
        out.write(io.to_json({"command": args.command, "status": "ok", "result": result}) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return status


def _fail(args, out, err, code: int, kind: str, exc: Exception) -> int:
    if args.json:
        out.write(json.dumps({"command": args.command, "status": "error", "kind": kind,
                              "message": str(exc)}, indent=2) + "\n")
    err.write(f"maxalg {args.command}: {exc}\n")
    return code


def main(argv=None) -> int:
    sys.exit(run_command(argv))


if __name__ == "__main__":
    main()
