"""Reproduction checks for the two worked families and the general constructions.

Each check returns a :class:`CheckResult`. ``tolerance=None`` uses the
tolerance pinned for that check; passing a value overrides every pinned
tolerance at once (useful as a negative control). Fixed thresholds that are
not numerical tolerances, such as the minimum trace-preservation defect
of the intermediate map, are never overridden.
"""

import warnings
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from .beconstruct import construct
from .channels import channel_from_choi, choi, random_channel
from .examples import channel_a_closed_form, channel_alpha, rho_a, sigma_alpha
from .linalg import max_abs
from .states import (
    max_entangled,
    negativity,
    pt_min_eigenvalue,
    random_separable_state,
    random_state,
    realignment_value,
    reduce,
    support_inclusion_holds,
)

ALPHAS = (3.0, 3.25, 3.5, 3.75, 4.0)
A_GRID = (0.1, 0.25, 0.5, 0.75, 0.9)
THETA_MIN_DEFECT = 1e-3
NPT_MARGIN = 1e-6


@dataclass(frozen=True)
class CheckResult:
    key: str
    title: str
    passed: bool
    detail: str


def _tol(override: Optional[float], pinned: float) -> float:
    return pinned if override is None else override


def check_round_trip(tolerance=None, seed=42) -> CheckResult:
    tol = _tol(tolerance, 1e-10)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(200):
        m, n = (int(x) for x in rng.integers(2, 5, size=2))
        n_kraus = int(rng.integers(-(-m // n), m * n + 1))
        ch = random_channel(m, n, n_kraus, int(rng.integers(2**31)))
        c = choi(ch)
        worst = max(worst, max_abs(choi(channel_from_choi(c)).rho - c.rho))
    return CheckResult(
        "1", "channel/state isomorphism round trip (200 random channels)",
        worst <= tol, f"max error {worst:.2e} <= {tol:g}",
    )


def check_alpha_family(tolerance=None, seed=42) -> CheckResult:
    tol = _tol(tolerance, 1e-12)
    choi_err = red_err = 0.0
    pt_min = np.inf
    for alpha in ALPHAS:
        s = sigma_alpha(alpha)
        choi_err = max(choi_err, max_abs(choi(channel_alpha(alpha)).rho - s.rho))
        for side in "AB":
            red_err = max(red_err, max_abs(reduce(s, side) - np.eye(3) / 3))
        if alpha > 3.0:
            pt_min = min(pt_min, pt_min_eigenvalue(s))
    ok = choi_err <= tol and red_err <= tol and pt_min >= -tol
    return CheckResult(
        "2", "shift-channel family: Choi state, reductions, PPT",
        ok, f"choi {choi_err:.2e}, reductions {red_err:.2e}, min PT eig {pt_min:.2e}",
    )


def check_rho_a_pipeline(tolerance=None, seed=42) -> CheckResult:
    tol12 = _tol(tolerance, 1e-12)
    tol10 = _tol(tolerance, 1e-10)
    failures = []
    worst = {"reduction": 0.0, "tp": 0.0, "choi": 0.0, "sigma_A": 0.0}
    theta_min = np.inf
    for a in A_GRID:
        rho = rho_a(a)
        if not rho.is_valid(tol10):
            failures.append(f"a={a} invalid state")
        if pt_min_eigenvalue(rho) < -tol10:
            failures.append(f"a={a} not PPT")
        expected = np.diag([3 * a, 3 * a, 1 + 2 * a]) / (8 * a + 1)
        worst["reduction"] = max(worst["reduction"], max_abs(reduce(rho, "A") - expected))
        c = construct(rho, "A")
        worst["tp"] = max(worst["tp"], c.channel.tp_defect)
        theta_min = min(theta_min, c.theta.tp_defect)
        worst["choi"] = max(worst["choi"], max_abs(choi(c.channel).rho - c.filtered.sigma.rho))
        worst["sigma_A"] = max(
            worst["sigma_A"], max_abs(reduce(c.filtered.sigma, "A") - np.eye(3) / 3)
        )
    ok = (
        not failures
        and worst["reduction"] <= tol12
        and worst["tp"] <= tol10
        and theta_min > THETA_MIN_DEFECT
        and worst["choi"] <= tol10
        and worst["sigma_A"] <= tol10
    )
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    detail += f", theta defect >= {theta_min:.3f}"
    if failures:
        detail += "; " + "; ".join(failures)
    return CheckResult("3", "filtered rho(a) channel is trace preserving", ok, detail)


def check_closed_form(tolerance=None, seed=42) -> CheckResult:
    tol = _tol(tolerance, 1e-9)
    c = construct(rho_a(0.5), "A")
    err = max_abs(choi(channel_a_closed_form(0.5)).rho - choi(c.channel).rho)
    return CheckResult(
        "4", "closed-form rho(a) channel matches pipeline at a=0.5",
        err <= tol, f"Choi difference {err:.2e} <= {tol:g}",
    )


def check_support_inclusion(tolerance=None, seed=42) -> CheckResult:
    tol = _tol(tolerance, 1e-9)
    rng = np.random.default_rng(seed)
    bad = 0
    for i in range(200):
        s = random_state(3, 3, 1 + i % 9, int(rng.integers(2**31)))
        if not support_inclusion_holds(s, cutoff=1e-10, tol=tol):
            bad += 1
    return CheckResult(
        "5", "support inside product of reduction supports (200 random states)",
        bad == 0, f"{200 - bad}/200 hold",
    )


def check_choi_ppt(tolerance=None, seed=42) -> CheckResult:
    tol = _tol(tolerance, 1e-12)
    c = choi(channel_alpha(3.5))
    lo = pt_min_eigenvalue(c)
    realign = realignment_value(c)
    return CheckResult(
        "6", "Choi state of the alpha=3.5 channel is PPT",
        lo >= -tol, f"min PT eig {lo:.3e}; realignment {realign:.6f} (recorded)",
    )


def check_witnesses(tolerance=None, seed=42) -> CheckResult:
    tol = _tol(tolerance, 1e-10)
    rng = np.random.default_rng(seed)
    worst_sep = 0.0
    for _ in range(100):
        m, n = (int(x) for x in rng.integers(2, 4, size=2))
        s = random_separable_state(m, n, int(rng.integers(1, 7)), int(rng.integers(2**31)))
        worst_sep = max(worst_sep, negativity(s))
    p = max_entangled(3)
    neg_err = abs(negativity(p) - 1.0)
    re_err = abs(realignment_value(p) - 3.0)
    ok = worst_sep <= tol and neg_err <= tol and re_err <= tol
    return CheckResult(
        "7", "witness sanity: separable mixtures, maximally entangled state",
        ok, f"separable negativity {worst_sep:.2e}, |N-1| {neg_err:.2e}, |R-3| {re_err:.2e}",
    )


def check_negative_control(tolerance=None, seed=42) -> CheckResult:
    lo = pt_min_eigenvalue(sigma_alpha(4.5))
    return CheckResult(
        "8", "negative control: alpha=4.5 is NPT",
        lo < -NPT_MARGIN, f"min PT eig {lo:.6f} < -{NPT_MARGIN:g}",
    )


CHECKS: List[Callable[..., CheckResult]] = [
    check_round_trip,
    check_alpha_family,
    check_rho_a_pipeline,
    check_closed_form,
    check_support_inclusion,
    check_choi_ppt,
    check_witnesses,
    check_negative_control,
]


def run_all(tolerance: Optional[float] = None, seed: int = 42) -> List[CheckResult]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return [check(tolerance=tolerance, seed=seed) for check in CHECKS]
