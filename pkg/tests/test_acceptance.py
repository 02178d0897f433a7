"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Criterion 1 (reference-table reproduction) carries a documented caveat:
three of the twelve printed reference entries are mistranscribed and no
computation can reproduce them --

* (alpha/pi = 0.10, M = 8): the printed residual 3.146e-6 appears exactly
  (3.1458e-6) at truncation index 6, one past the printed index 5;
* (alpha/pi = 0.20, M = 8): the printed residual duplicates the 0.10 row;
  the best achievable residual over every truncation is ~8.7e-5 (a factor
  ~27 larger), so the printed value cannot belong to this row;
* (alpha/pi = 0.25, M = 8): the printed 4.687e-3 matches the computed
  4.68729e-4 in all four mantissa digits -- a power-of-ten slip.

test_criterion_1 therefore asserts the nine consistent rows at the stated
tolerance AND asserts the numerical defect signatures of the three bad
rows (so it fails if either our values drift or the defect evidence stops
holding); the literal all-twelve-rows reading is kept visible as a
strict xfail in test_criterion_1_all_rows_as_printed.
"""

import math
import warnings

import pytest

from kelvinwake import bounds, specfun
from kelvinwake.cli import main as cli_main
from kelvinwake.expansions import (
    TruncationPolicy,
    asymptotic_sum,
    bessho_F,
    ck_recurrence,
    ck_symbolic_coefficients,
    ck_table,
    curly_F_residual,
    paris_F,
)
from kelvinwake.oracle import (
    EvalPoint,
    oracle_Ck,
    oracle_F,
    oracle_I1_alpha,
    oracle_I2,
    oracle_moment_identity,
)
from kelvinwake.table1 import (
    KNOWN_REFERENCE_DEFECTS,
    TABLE1_ROWS,
    matches_reference,
    row_is_defective,
)


@pytest.fixture(scope="module")
def residuals():
    """|curly F| at every reference row (shared across criteria)."""
    out = {}
    for row in TABLE1_ROWS:
        out[(row.alpha_over_pi, row.x)] = abs(
            curly_F_residual(row.point(), row.n_terms, oracle_abs_tol=1e-12))
    return out


def _report(num, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" -- {detail}" if detail else ""
    print(f"ACCEPTANCE {num} ({name}): {status}{suffix}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def test_criterion_1_table1_reproduction(residuals):
    """Computed |curly F| vs the printed reference, three significant
    figures or 1% relative, at the tabulated truncations."""
    bad = []
    for row in TABLE1_ROWS:
        if row_is_defective(row):
            continue
        computed = residuals[(row.alpha_over_pi, row.x)]
        if not matches_reference(computed, row.residual_abs):
            bad.append((row.alpha_over_pi, row.M, computed, row.residual_abs))

    # defect signatures of the three mistranscribed rows must hold exactly
    evidence = []
    r = abs(curly_F_residual(EvalPoint(0.4, 0.005, 0.10 * math.pi), 7))
    evidence.append(abs(r / 3.146e-6 - 1.0) <= 1e-3)          # off-by-one index
    r = residuals[(0.25, 0.40)]
    evidence.append(abs(10.0 * r / 4.687e-3 - 1.0) <= 1e-3)   # power-of-ten slip
    best = min(abs(curly_F_residual(EvalPoint(0.4, 0.005, 0.20 * math.pi), n))
               for n in range(1, 12))
    evidence.append(best > 20.0 * 3.146e-6)                   # unreachable value

    ok = not bad and all(evidence)
    _report(1, "table1-reproduction", ok,
            "9/9 consistent rows reproduce; 3 documented reference "
            "misprints verified defective" if ok else f"failing rows: {bad}, "
            f"evidence flags: {evidence}")


@pytest.mark.xfail(strict=True,
                   reason="three printed reference entries are mistranscribed "
                          "(see KNOWN_REFERENCE_DEFECTS); the other nine "
                          "reproduce to 3 significant figures or 1%")
def test_criterion_1_all_rows_as_printed(residuals):
    for row in TABLE1_ROWS:
        computed = residuals[(row.alpha_over_pi, row.x)]
        assert matches_reference(computed, row.residual_abs), (
            f"alpha/pi={row.alpha_over_pi}, M={row.M}: computed {computed:.6e} "
            f"vs printed {row.residual_abs:.3e}")


def test_criterion_2_oracle_cross_validation():
    """|bessho - oracle| <= 1e-8 absolute at the six benchmark points."""
    worst = 0.0
    for (x, rho) in [(0.4, 0.005), (1.0, 0.02)]:
        for frac in (0.0, 0.2, 0.4):
            pt = EvalPoint(x, rho, frac * math.pi)
            diff = abs(bessho_F(pt).value - oracle_F(pt, abs_tol=1e-12).value)
            worst = max(worst, diff)
    _report(2, "oracle-cross-validation", worst <= 1e-8,
            f"worst |bessho - oracle| = {worst:.2e}")


def test_criterion_3_identity_suite():
    """Moment identity <= 1e-12 relative, Kummer transformation <= 1e-12,
    Bessel Wronskians <= 1e-11."""
    worst_moment = 0.0
    for k in range(6):
        for mu in (0.5, 1.5, 2.5):
            for (M, p) in [(8.0, 0.05), (12.5, 0.04)]:
                lhs, rhs = oracle_moment_identity(k, mu, M, p)
                worst_moment = max(worst_moment, abs(lhs - rhs) / abs(rhs))

    worst_kummer = 0.0
    for a in (0.5, 1.0, 1.5):
        for b in (1.5, 2.5, 3.5):
            for z in (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0):
                lhs = specfun.kummer_1f1(a, b, z).value
                rhs = math.exp(z) * specfun.kummer_1f1(b - a, b, -z).value
                worst_kummer = max(worst_kummer, abs(lhs - rhs) / abs(rhs))

    worst_wronskian = 0.0
    for n in range(21):
        for x in (0.1, 0.5, 1.0, 2.0):
            jy = (specfun.bessel_j(n + 1, x).value * specfun.bessel_y(n, x).value
                  - specfun.bessel_j(n, x).value * specfun.bessel_y(n + 1, x).value)
            ik = (specfun.bessel_i(n, x).value * specfun.bessel_k(n + 1, x).value
                  + specfun.bessel_i(n + 1, x).value * specfun.bessel_k(n, x).value)
            worst_wronskian = max(
                worst_wronskian,
                abs(jy - 2.0 / (math.pi * x)) / (2.0 / (math.pi * x)),
                abs(ik - 1.0 / x) * x)

    ok = worst_moment <= 1e-12 and worst_kummer <= 1e-12 and worst_wronskian <= 1e-11
    _report(3, "identity-suite", ok,
            f"moment {worst_moment:.1e}, kummer {worst_kummer:.1e}, "
            f"wronskian {worst_wronskian:.1e}")


def test_criterion_4_coefficient_consistency():
    """Recurrence vs quadrature coefficients <= 1e-9 relative for k <= 6,
    and the exact integer pattern of the first five coefficient rows."""
    worst = 0.0
    for x in (0.4, 1.0, 2.0):
        tab = ck_recurrence(7, x)
        for k in range(7):
            q = oracle_Ck(k, x, 0.0).value
            worst = max(worst, abs(tab.values[k] - q) / abs(q))
    ints_ok = ck_symbolic_coefficients(5) == [
        [1], [-1, 1], [1, -2, 3], [-1, 3, -9, 15], [1, -4, 18, -60, 105]]
    _report(4, "coefficient-consistency", worst <= 1e-9 and ints_ok,
            f"worst recurrence/quadrature deviation {worst:.2e}; "
            f"integer rows {'exact' if ints_ok else 'WRONG'}")


def test_criterion_5_struve_sum_equivalence():
    """(pi e^-rho / 2) * double Struve sum equals the branch-cut integral
    to 1e-11 absolute."""
    from kelvinwake.expansions import struve_double_sum

    worst = 0.0
    for (x, rho) in [(0.4, 0.005), (1.0, 0.02)]:
        for frac in (0.0, 0.1, 0.25, 0.4):
            pt = EvalPoint(x, rho, frac * math.pi)
            s = struve_double_sum(pt)
            i1 = oracle_I1_alpha(pt).value
            worst = max(worst, abs(0.5 * math.pi * math.exp(-rho) * s - i1))
    _report(5, "struve-sum-equivalence", worst <= 1e-11,
            f"worst absolute deviation {worst:.2e}")


def test_criterion_6_bound_certification():
    """Measured remainders and tails below their bounds (strict) at every
    reference point for all n up to the tabulated count, plus the
    incomplete-gamma inequality over a 50 x 50 grid."""
    checked = 0
    for row in TABLE1_ROWS:
        pt = row.point()
        for n in range(1, row.n_terms + 1):
            rep = bounds.verify_remainder(pt, n)   # raises on violation
            assert abs(rep.measured_rn) < rep.rn_bound
            assert abs(rep.measured_tail) < rep.tail_bound
            checked += 1
    grid = [(chi * j / 49.0, chi)
            for chi in [1.0 + 49.0 * i / 49.0 for i in range(50)]
            for j in range(50)]
    rep = bounds.verify_inc_gamma_bound(grid)
    _report(6, "bound-certification", rep.inc_gamma_margin <= 1.0,
            f"{checked} remainder/tail checks strict; gamma-grid margin "
            f"{rep.inc_gamma_margin:.3f}")


def test_criterion_7_saddle_envelope(residuals):
    """|oracle - (paris without saddle)| inside 3 sqrt(pi/M)
    e^{-(M - rho/2) cos alpha} for the oblique rows and 3 e^-M / M on the
    midplane."""
    ok = True
    details = []
    for row in TABLE1_ROWS:
        pt = row.point()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            r = paris_F(pt, TruncationPolicy(n=row.n_terms))
        f_ref = oracle_F(pt, abs_tol=1e-12).value
        resid = abs(f_ref - (r.value - r.components.saddle))
        if row.alpha_over_pi == 0.0:
            envelope = 3.0 * math.exp(-pt.M) / pt.M
        else:
            envelope = 3.0 * math.sqrt(math.pi / pt.M) * math.exp(
                -(pt.M - 0.5 * pt.rho) * math.cos(pt.alpha))
        if resid > envelope:
            ok = False
            details.append(f"alpha/pi={row.alpha_over_pi} M={row.M}: "
                           f"{resid:.2e} > {envelope:.2e}")
    _report(7, "saddle-envelope", ok,
            "all 12 rows inside the envelope" if ok else "; ".join(details))


def test_criterion_8_asymptotic_convergence_shape(pt_m8):
    """At (0.4, 0.005, 0) the n-term error against I2 is non-increasing for
    n = 1..8 and each error sits below its remainder bound."""
    i2 = oracle_I2(pt_m8).value
    errs = []
    for n in range(1, 9):
        tab = ck_table(n, pt_m8.x, 0.0)
        err = abs(0.5 * math.pi * asymptotic_sum(pt_m8, tab) - i2)
        assert err <= bounds.remainder_bound(n, pt_m8.M)
        errs.append(err)
    monotone = all(b <= a for a, b in zip(errs, errs[1:]))
    _report(8, "asymptotic-convergence-shape", monotone,
            f"errors {errs[0]:.1e} .. {errs[-1]:.1e} non-increasing, "
            "each below its bound")


def test_criterion_9_determinism(tmp_path):
    """Byte-identical field output on a 10 x 5 x 5 grid for 1 and 8 threads."""
    args = ["field", "--x-range", "0.4:1.2:10", "--rho-range", "0.005:0.02:5",
            "--alpha-pi-range=-0.45:0.45:5", "--format", "csv"]
    p1 = tmp_path / "threads1.csv"
    p8 = tmp_path / "threads8.csv"
    rc1 = cli_main(args + ["--threads", "1", "--out", str(p1)])
    rc8 = cli_main(args + ["--threads", "8", "--out", str(p8)])
    identical = p1.read_bytes() == p8.read_bytes()
    _report(9, "determinism", rc1 == 0 and rc8 == 0 and identical,
            f"250 grid points, exit codes ({rc1}, {rc8}), "
            f"{'byte-identical' if identical else 'DIFFER'}")
