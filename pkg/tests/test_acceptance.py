"""The ten acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line; run with
``pytest tests/test_acceptance.py -v`` (lines are written past capture).
"""

import io as stdio
import json
import math
import random
from fractions import Fraction

import pytest

from maxalg import io
from maxalg.cli import run_command
from maxalg.core import Family, MaxMatrix, RootValue, mat_power, oplus_all, otimes, permute_similarity
from maxalg.dynamics import (
    CommonEigenSystem,
    check_poly_fixed_point,
    decay_certificate,
    matrix_period,
    orbit,
    periodic_point_implies_unit_mu,
    predicted_limit,
    rational_between,
    verify_common_eigenvector,
    word_product,
)
from maxalg.graph import enumerate_cycle_means, find_common_triangularizer, max_cycle_mean
from maxalg.polynomial import (
    MaxPoly,
    check_chain_single,
    check_family_bounds,
    companion,
    is_poly_eigenpair,
    poly_spectrum,
    scalar_poly_spectrum,
    triangular_jsr,
)
from maxalg.spectral import jsr, jsr_bracket

from conftest import (
    FIXTURES,
    rand_entry,
    rand_family,
    rand_irreducible,
    rand_matrix,
    rand_poly,
    rand_triangularizable,
)

A01 = MaxMatrix([[3, 0, 2], [0, 1, 0], [0, 2, 4]])
A11 = MaxMatrix([[2, 3, 1], [0, 2, 0], [0, 1, 3]])
A02 = MaxMatrix([[1, 2, 3], [0, 0, 0], [0, 1, 2]])
A12 = MaxMatrix([[4, 1, 0], [0, 1, 0], [0, 3, 2]])
B1 = MaxMatrix([[1, "0.5", 0, 0], ["0.3", 1, 0, 0], [0, 0, "0.9", "0.7"], [0, 0, "0.5", "0.9"]])
B2 = MaxMatrix([["0.8", 1, 0, 0], [1, "0.4", 0, 0], [0, 0, "0.8", "0.6"], [0, 0, "0.4", "0.8"]])
V1 = MaxMatrix.vector([1, 1, 0, 0])
V2 = MaxMatrix.vector([0, 0, 1, 1])


@pytest.fixture
def report(capsys):
    def emit(number, title, failures, total, detail=""):
        status = "PASS" if not failures else "FAIL"
        line = f"[{status}] criterion {number}: {title} ({total - len(failures)}/{total} ok)"
        if detail:
            line += f" {detail}"
        with capsys.disabled():
            print("\n" + line)
        assert not failures, failures[:5]
    return emit


def test_criterion_01_polynomial_pair(report):
    failures = []
    pool = [A01, A11, A02, A12]
    sigma = find_common_triangularizer(pool)
    checks = {
        "triangularizer": sigma is not None
        and all(permute_similarity(A, sigma).is_upper_triangular() for A in pool),
    }
    tj = triangular_jsr([MaxPoly([A01, A11]), MaxPoly([A02, A12])])
    checks["pools"] = tj.pools == ((3, 2, 1, 4), (4, 3, 2, 2), (1, 2, 0, 1))
    checks["triangular jsr"] = tj.value == 4
    S = oplus_all(pool)
    checks["max-sum"] = S == MaxMatrix([[4, 3, 3], [0, 2, 0], [0, 3, 4]])
    checks["mu"] = max_cycle_mean(S).value == 4
    checks["jsr"] = jsr(Family(pool)).value == 4
    failures = [k for k, ok in checks.items() if not ok]
    report(1, "polynomial pair reproduction", failures, len(checks))


def test_criterion_02_common_eigenvectors(report):
    F = Family({"1": B1, "2": B2})
    checks = {}
    rows = [verify_common_eigenvector(F, v) for v in (V1, V2)]
    checks["alpha"] = rows == [[1, 1], [Fraction(9, 10), Fraction(8, 10)]]
    checks["mu"] = max_cycle_mean(oplus_all([B1, B2])).value == 1
    Aw = word_product(F, "12")
    checks["contraction"] = otimes(Aw, V2) == Fraction(18, 25) * V2
    rep = orbit(Aw, MaxMatrix.vector([1, 1, 1, 1]), Fraction(1, 10**12), 100)
    checks["orbit"] = (rep.mode == "converging" and rep.limit == V1 and rep.steps <= 100
                       and rep.distance <= Fraction(1, 10**12) and rep.rate == Fraction(18, 25))
    system = CommonEigenSystem.from_vectors(F, [V1, V2])
    pred = predicted_limit(MaxMatrix.vector([1, 1, 1, 1]), "12", system)
    checks["prediction"] = pred.limit == rep.limit
    rng = random.Random(2)
    polys = [MaxPoly([rng.choice([B1, B2]) for _ in range(rng.randint(1, 4))]) for _ in range(30)]
    checks["P(1) fixed"] = all(check_poly_fixed_point(P, rep.limit) for P in polys)
    failures = [k for k, ok in checks.items() if not ok]
    report(2, "common-eigenvector example reproduction", failures, len(checks),
           f"converged at k={rep.steps}")


def test_criterion_03_chain(report):
    rng = random.Random(3)
    failures, total = [], 0
    for t in range(200):
        P = rand_poly(rng, rng.randint(1, 4), rng.randint(1, 3))
        for norm in ("linf", "l1"):
            total += 1
            rep = check_chain_single(P, norm)
            if not rep.verdict:
                failures.append((t, norm, str(rep.lower), str(rep.middle), str(rep.upper)))
    report(3, "eta_hat(P) <= jsr(Sigma_P) <= eta(P)", failures, total)


def test_criterion_04_max_sum_reduction(report):
    rng = random.Random(4)
    failures = []
    for t in range(100):
        n = rng.randint(1, 4)
        F = rand_family(rng, n, rng.randint(1, 3))
        mu = max_cycle_mean(F.sum()).value
        ok = True
        for norm in ("linf", "l1"):
            rep = jsr_bracket(F, n, norm)
            ok = ok and max(rep.lower) == mu and all(up >= mu for up in rep.upper)
        if not ok:
            failures.append(t)
    report(4, "max-product cycle means reach mu of the max-sum", failures, 100)


def test_criterion_05_karp(report):
    rng = random.Random(5)
    failures, acyclic = [], 0
    for t in range(300):
        A = rand_matrix(rng, rng.randint(1, 7), zero_density=rng.choice([0.3, 0.6, 0.85]))
        means = enumerate_cycle_means(A)
        acyclic += not means
        if max_cycle_mean(A).value != (means[0].value if means else 0):
            failures.append(t)
    report(5, "Karp equals cycle enumeration", failures, 300, f"{acyclic} acyclic cases")


def test_criterion_06_family_bracket(report):
    rng = random.Random(6)
    failures = []
    upper_ok = 0
    for t in range(50):
        n = rng.randint(1, 3)
        psi = [rand_poly(rng, n, rng.randint(1, 3)) for _ in range(2)]
        rep = check_family_bounds(psi, 4)
        rho = rep.lower
        ok = all(row["bound_le_growth"] and rho <= row["growth"] for row in rep.trajectory)
        upper_ok += all(row["growth_le_upper"] for row in rep.trajectory)
        if not ok:
            failures.append(t)
    report(6, "per-k growth brackets", failures, 50, f"upper bound held on {upper_ok}/50")


def test_criterion_07_triangular_jsr(report):
    rng = random.Random(7)
    failures = []
    for t in range(100):
        F = rand_triangularizable(rng, rng.randint(1, 4), rng.randint(1, 3))
        tj = triangular_jsr(F)
        if not (tj.value == jsr(F).value == max(tj.suprema)):
            failures.append(t)
    report(7, "triangular jsr equals jsr", failures, 100)


def _diagonal_poly(rng, n, m):
    return MaxPoly([MaxMatrix([[rand_entry(rng) if i == j else 0 for j in range(n)] for i in range(n)])
                    for _ in range(m)])


def test_criterion_08_spectrum(report):
    rng = random.Random(8)
    failures, pairs = [], 0
    for t in range(100):
        n, m = rng.randint(1, 3), rng.randint(1, 3)
        P = MaxPoly([rand_irreducible(rng, n) for _ in range(m)])
        for k, v in poly_spectrum(P):
            pairs += 1
            if not is_poly_eigenpair(P, k, v):
                failures.append(("pair", t, str(k)))
    for t in range(100):
        n, m = rng.randint(1, 3), rng.randint(1, 3)
        P = _diagonal_poly(rng, n, m)
        union = set()
        for i in range(n):
            union.update(scalar_poly_spectrum([A[i, i] for A in P.coeffs]))
        if {k for k, _ in poly_spectrum(P)} != union:
            failures.append(("diagonal", t))
    report(8, "polynomial spectra self-verify; diagonal union exact", failures, 200,
           f"{pairs} eigenpairs checked")


def test_criterion_09_dynamics(report):
    rng = random.Random(9)
    failures = []
    caps = 0
    for t in range(100):
        A = rand_irreducible(rng, rng.randint(1, 4))
        rep = matrix_period(A, cap=4096)
        if not rep.complete:
            failures.append(("period cap", t))
            continue
        caps = max(caps, rep.states)
        k0, p, lam = rep.transient, rep.period, rep.eigenvalue
        base = mat_power(A, k0)
        if mat_power(A, k0 + p) != lam ** p * base:
            failures.append(("period identity", t))
        if any(mat_power(A, k0 + q) == lam ** q * base for q in range(1, p)):
            failures.append(("period minimality", t))
        if k0 and mat_power(A, k0 - 1 + p) == lam ** p * mat_power(A, k0 - 1):
            failures.append(("transient minimality", t))

    for t in range(20):
        n, m = rng.randint(1, 3), rng.randint(1, 3)
        P = MaxPoly([rand_irreducible(rng, n) for _ in range(m)])
        mu = max_cycle_mean(companion(P)).value
        Q = P.rescaled(RootValue(1) / mu)
        C = companion(Q)
        per = matrix_period(C, cap=4096)
        power = mat_power(C, per.transient)
        y = next(power.column(j) for j in range(C.cols) if not power.column(j).is_zero())
        ev = periodic_point_implies_unit_mu(Q, y, per.period)
        if not ev.confirmed:
            failures.append(("unit mu", t))

    for t in range(50):
        n = rng.randint(1, 4)
        F = rand_family(rng, n, rng.randint(1, 3))
        rho = jsr(F).value
        if rho:
            target = rng.choice([Fraction(1, 2), Fraction(3, 4), Fraction(9, 10)])
            F = F.scaled(rational_between(RootValue(0), target / rho))
        word = "".join(rng.choice(F.names()) for _ in range(rng.randint(1, 3)))
        x = MaxMatrix.vector([rand_entry(rng, 0.2) for _ in range(n)])
        cert = decay_certificate(F, word, x, 8)
        if not (cert.holds and cert.asymptotic_holds and not cert.periodic_orbit_found):
            failures.append(("decay", t))
    report(9, "periods, unit cycle mean, decay certificates", failures, 170,
           f"largest period search {caps} powers")


FLOAT_CASES = [
    ("cyclemean", "two-cycle.json"), ("cyclemean", "root-cycle.json"), ("cyclemean", "id.json"),
    ("jsr", "eg1-pool.json"), ("jsr", "eg2-scenario.json"), ("eta", "upper.json"),
    ("poly-bounds", "eg1-p1.json"), ("triangular-jsr", "eg1-polys.json"),
    ("orbit", "eg2-scenario.json"), ("period", "two-cycle.json"),
]


def _cli_json(*argv):
    out, err = stdio.StringIO(), stdio.StringIO()
    code = run_command([*argv, "--json"], out, err)
    return code, json.loads(out.getvalue())


def _float_leaves(obj, path=""):
    if isinstance(obj, dict):
        if "float" in obj:
            yield path, obj["float"]
        for k, v in obj.items():
            if k != "float":
                yield from _float_leaves(v, f"{path}.{k}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _float_leaves(v, f"{path}[{i}]")


def test_criterion_10_cli_contract(report):
    failures = []
    code, rep = _cli_json("verify-paper")
    if code != 0 or not rep["result"]["passed"]:
        failures.append("verify-paper")
    fixtures = sorted(p for p in FIXTURES.glob("*.json") if not p.name.startswith("bad-"))
    for path in fixtures:
        sc = io.load(path)
        if io.parse_document(json.loads(json.dumps(io.dump_scenario(sc))), str(path)) != sc:
            failures.append(f"round trip {path.name}")
    compared = 0
    for cmd, name in FLOAT_CASES:
        c1, exact = _cli_json(cmd, "--input", str(FIXTURES / name))
        c2, approx = _cli_json(cmd, "--input", str(FIXTURES / name), "--backend", "float")
        if c1 or c2:
            failures.append(f"{cmd} {name} exit {c1}/{c2}")
            continue
        fl = dict(_float_leaves(approx["result"]))
        for path, value in _float_leaves(exact["result"]):
            compared += 1
            if path not in fl or not math.isclose(value, fl[path], rel_tol=1e-9, abs_tol=1e-12):
                failures.append(f"{cmd} {name} {path}")
    report(10, "CLI contract", failures, 1 + len(fixtures) + compared,
           f"{len(fixtures)} fixtures, {compared} float comparisons")
