"""The full verification suite behind ``heatent verify``.

Each check exercises one identity, inequality or bound of the library on
built-in fixtures and returns a CheckResult; the CLI serialises the lot as a
deterministic JSON report.  Check names are stable identifiers usable with
``--only``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import bounds as bd
from . import fixtures as fx
from . import h3entropy as h3
from . import spectral as sp
from .quadrature import QuadratureSpec, integrate_semi_infinite
from .specfun import (
    HyperbolicMoment,
    hyperbolic_moment_closed_form,
    hyperbolic_moment_quadrature,
    log_sinh_ratio,
    sinh_ratio_bounds_check,
)

_MOMENTS = [HyperbolicMoment(m, "sinh") for m in range(5)] + [
    HyperbolicMoment(m, "cosh") for m in range(4)]
_KAPPA_GRID = (0.5, 1.0, 2.0)
_T_GRID = (0.1, 1.0, 10.0)

_RANDOM_SEED = 20240817


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    max_error: float
    details: str


def _stable_moment_integrand(kappa: float, t: float, moment: HyperbolicMoment):
    """exp(-r^2/2t) r^m {sinh,cosh}(kr) with the exponentials combined, so the
    far tail evaluates to 0 instead of overflowing."""

    def f(r: float) -> float:
        if r == 0.0:
            return 1.0 if (moment.kind == "cosh" and moment.power == 0) else 0.0
        gauss = -r * r / (2.0 * t)
        up = math.exp(gauss + kappa * r - math.log(2.0))
        down = math.exp(gauss - kappa * r - math.log(2.0))
        s = up - down if moment.kind == "sinh" else up + down
        return r ** moment.power * s

    return f


def check_moment_table(spec: QuadratureSpec) -> CheckResult:
    """Nine closed-form moments vs the quadrature oracle, both paths."""
    worst = 0.0
    for moment in _MOMENTS:
        for kappa in _KAPPA_GRID:
            for t in _T_GRID:
                closed = hyperbolic_moment_closed_form(moment, kappa, t).value()
                direct = integrate_semi_infinite(
                    _stable_moment_integrand(kappa, t, moment), spec).value
                shifted = hyperbolic_moment_quadrature(moment, kappa, t, spec).value()
                worst = max(worst,
                            abs(closed - direct) / abs(direct),
                            abs(shifted - direct) / abs(direct))
    return CheckResult(worst <= 1e-8, worst,
                       "closed forms and both integration paths agree on the "
                       f"{len(_MOMENTS)}x{len(_KAPPA_GRID)}x{len(_T_GRID)} grid")


def check_second_moment(spec: QuadratureSpec) -> CheckResult:
    """Closed-form scaled second moment vs radial quadrature; equals 2 at
    kappa^2 t = 1."""
    worst = 0.0
    for kappa in _KAPPA_GRID:
        p = h3.H3Params(kappa, spec)
        for t in _T_GRID:
            closed = h3.I1(p, t)
            quad = h3.I1_quadrature(p, t)
            worst = max(worst, abs(closed - quad) / abs(closed))
    pin = abs(h3.I1(h3.H3Params(2.0, spec), 0.25) - 2.0)
    worst = max(worst, pin)
    return CheckResult(worst <= 1e-8, worst,
                       "second moment matches quadrature; value 2 at kappa^2 t = 1")


def check_h3_normalization(spec: QuadratureSpec) -> CheckResult:
    worst = 0.0
    for kappa in _KAPPA_GRID:
        p = h3.H3Params(kappa, spec)
        for t in (0.1, 1.0, 10.0, 50.0):
            worst = max(worst, abs(h3.normalization_quadrature(p, t) - 1.0))
    return CheckResult(worst <= 1e-8, worst,
                       "radial kernel mass is 1 on the kappa x t grid")


def check_envelopes(spec: QuadratureSpec,
                    narrow_fraction: float = 0.0) -> CheckResult:
    """Quadrature values sit strictly inside the closed-form envelopes on a
    40-point log grid; narrow_fraction > 0 shrinks each side for the harness
    self-test."""
    p = h3.H3Params(1.0, spec)
    failures = 0
    for t in np.geomspace(0.1, 100.0, 40):
        t = float(t)
        for value, envelope in ((h3.eta(p, t), h3.eta_envelope(p, t)),
                                (h3.eta_prime(p, t), h3.eta_prime_envelope(p, t))):
            lo, hi = envelope
            if narrow_fraction > 0.0:
                gap = hi - lo
                lo = lo + gap * narrow_fraction
                hi = hi - gap * narrow_fraction
            if not (lo < value < hi):
                failures += 1
    detail = "eta and eta' strictly inside their envelopes on the log grid"
    if narrow_fraction > 0.0:
        detail += f" (fault injected: narrowed by {narrow_fraction:.0%} per side)"
    return CheckResult(failures == 0, float(failures), detail)


def check_band(spec: QuadratureSpec) -> CheckResult:
    """Entropy rate inside the asymptotic band with 0.05 kappa^2 slack."""
    failures = 0
    worst = 0.0
    for kappa, ts in ((1.0, (20.0, 50.0, 100.0)), (2.0, (5.0, 12.5, 25.0))):
        p = h3.H3Params(kappa, spec)
        lo, hi = h3.asymptotic_band(p)
        slack = 0.05 * kappa * kappa
        for t in ts:
            rate = h3.entropy_rate(p, t)
            excess = max(lo - slack - rate, rate - hi - slack)
            worst = max(worst, excess)
            if excess > 0.0:
                failures += 1
    return CheckResult(failures == 0, worst,
                       "large-time entropy rate inside the band at kappa = 1 and 2")


def check_rate_consistency(spec: QuadratureSpec) -> CheckResult:
    """Direct rate vs finite difference of the entropy, hyperbolic and spectral."""
    worst = 0.0
    p = h3.H3Params(1.0, spec)
    for t in (1.0, 5.0, 20.0):
        rate = h3.entropy_rate(p, t)
        worst = max(worst, abs(rate - h3.entropy_rate_fd(p, t)) / abs(rate))
    for name in ("circle", "torus", "sphere", "torus-drift"):
        fixture = fx.get_fixture(name)
        trace = sp.entropy_trace(fixture.initial, fixture.rate_check_times,
                                 dt=fixture.dt)
        rel = np.abs(trace.rate_direct - trace.rate_fd) / np.abs(trace.rate_direct)
        worst = max(worst, float(rel.max()))
    return CheckResult(worst <= 1e-4, worst,
                       "rate_direct and rate_fd agree on hyperbolic space and "
                       "all four spectral fixtures")


def check_fixture_bounds(spec: QuadratureSpec) -> CheckResult:
    """Every applicable bound holds along every fixture trace, and at large
    times on the sphere the curvature bound beats the gradient bound."""
    del spec
    failures = []
    worst = -math.inf
    for name in ("circle", "torus", "sphere", "torus-drift"):
        fixture = fx.get_fixture(name)
        trace = sp.entropy_trace(fixture.initial, fixture.default_times,
                                 dt=fixture.dt)
        for report in bd.check_bounds(trace, fixture.manifold, fixture.initial):
            if not report.all_satisfied:
                failures.append(f"{name}:{report.bound_name}")
            worst = max(worst, float(np.max(trace.rate_direct - report.rhs)))
    sphere = fx.get_fixture("sphere")
    _, q0 = sp.entropy_and_fisher(sphere.initial)
    inf_f, sup_f = sp.grid_extrema(sphere.initial)
    sup_rel = sup_f * sphere.manifold.volume
    comparison_ok = True
    for t in (5.0, 8.0):
        ricci = bd.ricci_bound_rhs(2, sphere.manifold.ricci_lower_bound, q0, t)
        gradient = bd.hamilton_bound_rhs(0.0, sup_rel, t)
        if not ricci < gradient:
            comparison_ok = False
            failures.append(f"comparison:t={t}")
    detail = ("all bound reports satisfied; curvature bound beats gradient "
              "bound on the sphere at large t")
    if failures:
        detail = "violations: " + ", ".join(failures)
    return CheckResult(not failures and comparison_ok, worst, detail)


def check_bochner(spec: QuadratureSpec) -> CheckResult:
    """Pointwise commutation-identity residual for 10 random (field, drift)
    pairs on the torus, the first with zero drift."""
    del spec
    rng = np.random.default_rng(_RANDOM_SEED)
    torus = sp.torus2(1.0, 1.0)
    worst = 0.0
    for trial in range(10):
        w = fx.random_positive_torus_field(rng, torus)
        potential = None if trial == 0 else fx.random_torus_potential(rng, torus)
        report = sp.bochner_residual(w, potential=potential)
        worst = max(worst, report.relative)
    return CheckResult(worst <= 1e-8, worst,
                       "identity residual is roundoff-level for 10 random pairs "
                       "(first has zero drift)")


def check_hessian_trace(spec: QuadratureSpec) -> CheckResult:
    """Pointwise Hessian-vs-trace inequality for random positive fields."""
    del spec
    rng = np.random.default_rng(_RANDOM_SEED + 1)
    torus = sp.torus2(1.0, 1.0)
    worst = 0.0
    for _ in range(8):
        w = fx.random_positive_torus_field(rng, torus)
        gap, scale = sp.hessian_trace_gap(w)
        worst = max(worst, -gap / scale)
    return CheckResult(worst <= 1e-12, worst,
                       "squared traceless-Hessian term dominates the trace term "
                       "pointwise for 8 random positive fields")


def check_cauchy_step(spec: QuadratureSpec) -> CheckResult:
    """Mean-square step and the integration-by-parts identity on evolved
    fixture densities."""
    del spec
    worst_ineq = 0.0
    worst_ibp = 0.0
    for name in ("circle", "torus", "sphere"):
        fixture = fx.get_fixture(name)
        for t in (0.05, 0.2, 1.0):
            field = sp.evolve(fixture.initial, t)
            mean_sq, second, fisher = sp.cauchy_step_values(field)
            scale = max(second, 1e-30)
            worst_ineq = max(worst_ineq, (mean_sq - second) / scale)
            # absolute floor: once the field is flat, fisher sits at the
            # roundoff floor and a pure relative comparison is noise
            worst_ibp = max(worst_ibp,
                            abs(math.sqrt(mean_sq) - fisher) / max(fisher, 1e-10))
    passed = worst_ineq <= 1e-12 and worst_ibp <= 1e-8
    return CheckResult(passed, max(worst_ineq, worst_ibp),
                       "mean-square inequality and the integration-by-parts "
                       "identity hold on evolved fixture densities")


def check_sinh_ratio_bounds(spec: QuadratureSpec) -> CheckResult:
    """Strict two-sided bound on (1 - e^{-2r})/(2r), plus its sharpness: for
    each beta in (1, 2) the lower comparison flips once r is large enough."""
    del spec
    violations = 0
    for r in np.geomspace(1e-6, 1e3, 400):
        lo, mid, hi = sinh_ratio_bounds_check(float(r))
        if not (lo < mid < hi):
            violations += 1
    for beta in (1.25, 1.5, 1.75):
        r_max = (beta - 1.0) / beta
        inner = np.linspace(r_max / 50.0, r_max * (1.0 - 1e-9), 50)
        for r in inner:
            _, mid, _ = sinh_ratio_bounds_check(float(r))
            if not mid > 1.0 / (1.0 + beta * float(r)):
                violations += 1
        flipped = any(
            sinh_ratio_bounds_check(float(r))[1] < 1.0 / (1.0 + beta * float(r))
            for r in np.geomspace(1.0, 1e3, 40))
        if not flipped:
            violations += 1
    return CheckResult(violations == 0, float(violations),
                       "two-sided bound strict on the log grid; sharpness "
                       "exhibited for beta in {1.25, 1.5, 1.75}")


def check_log_sandwich(spec: QuadratureSpec) -> CheckResult:
    """kr + log(1/(1+2kr)) < log(sinh kr / kr) < kr + log(1/(1+kr))."""
    del spec
    violations = 0
    for kappa in _KAPPA_GRID:
        for r in np.geomspace(1e-6, 1e2, 200):
            x = kappa * float(r)
            val = log_sinh_ratio(x)
            lo = x - math.log1p(2.0 * x)
            hi = x - math.log1p(x)
            if not (lo < val < hi):
                violations += 1
    return CheckResult(violations == 0, float(violations),
                       "log sinh ratio sandwich strict on the kappa x r grid")


def check_euclidean_limit(spec: QuadratureSpec) -> CheckResult:
    """Small-curvature entropy rate reproduces the flat-space value n/(2t)."""
    p = h3.H3Params(0.01, spec)
    rate = h3.entropy_rate(p, 1.0)
    reference = bd.euclidean_rate_reference(3, 1.0)
    rel = abs(rate - reference) / reference
    return CheckResult(rel <= 0.01, rel,
                       f"rate at kappa = 0.01, t = 1 is {rate:.6f} vs flat {reference}")


def check_entropy_decomposition(spec: QuadratureSpec) -> CheckResult:
    """Assembled entropy vs one direct quadrature of -h log h.

    This is also the arbiter between the two candidate Gaussian weights in
    the transcendental factor: the single-Gaussian reading used by the
    library matches the direct integral; a doubled exponent would not.
    """
    worst = 0.0
    for kappa in (0.5, 1.0, 2.0):
        p = h3.H3Params(kappa, spec)
        for t in (0.3, 1.0, 5.0):
            assembled = h3.entropy(p, t)
            direct = h3.entropy_quadrature(p, t)
            worst = max(worst, abs(assembled - direct) / abs(direct))
    return CheckResult(worst <= 1e-6, worst,
                       "decomposed entropy equals the direct integral; "
                       "single-Gaussian weight confirmed")


CHECKS: dict[str, Callable[[QuadratureSpec], CheckResult]] = {
    "moment_table": check_moment_table,
    "second_moment": check_second_moment,
    "h3_normalization": check_h3_normalization,
    "envelopes": check_envelopes,
    "band": check_band,
    "rate_consistency": check_rate_consistency,
    "fixture_bounds": check_fixture_bounds,
    "bochner_residual": check_bochner,
    "hessian_trace": check_hessian_trace,
    "cauchy_step": check_cauchy_step,
    "sinh_ratio_bounds": check_sinh_ratio_bounds,
    "log_sandwich": check_log_sandwich,
    "euclidean_limit": check_euclidean_limit,
    "entropy_decomposition": check_entropy_decomposition,
}


def run_checks(only: Optional[str] = None,
               spec: QuadratureSpec = QuadratureSpec(),
               inject_fault: Optional[str] = None) -> dict[str, CheckResult]:
    """Run the suite (or one named group); inject_fault="envelopes" narrows
    the envelopes by 10% per side so failure propagation can be exercised."""
    if only is not None and only not in CHECKS:
        raise KeyError(f"unknown check {only!r}; choose from {sorted(CHECKS)}")
    names = [only] if only else list(CHECKS)
    results: dict[str, CheckResult] = {}
    for name in names:
        if name == "envelopes" and inject_fault == "envelopes":
            results[name] = check_envelopes(spec, narrow_fraction=0.10)
        else:
            results[name] = CHECKS[name](spec)
    return results
