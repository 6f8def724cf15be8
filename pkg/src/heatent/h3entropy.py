"""Heat-kernel entropy on 3-dimensional hyperbolic space of curvature -kappa^2.

The kernel is an explicit Gaussian times a sinh correction, so its entropy
splits into a closed-form part plus one genuinely transcendental piece

    I2(t) = xi(t) * eta(t),

where xi is elementary and eta is a Gaussian-hyperbolic integral with a
log(sinh r / r) weight.  eta and its derivative are computed by quadrature
through the overflow-safe shifted-Gaussian path and are pinned between
closed-form envelopes; the entropy rate assembles as

    d/dt Ent = 3/(2t) + kappa^2 + xi'(t) eta(t) + xi(t) eta'(t)

entirely in split-exponent arithmetic, and for large t it settles inside the
band kappa^2 * (2 -+ log sqrt 2).

A note on the radial weight: the density decomposition used here carries a
single Gaussian factor exp(-r^2/2t) inside eta.  A doubled-Gaussian variant
of that integrand is inconsistent with the closed-form pieces; the direct
quadrature of -integral h log h dV (``entropy_quadrature``) confirms the
single-Gaussian reading to full tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .logscale import LogScaled
from .quadrature import (
    QuadratureSpec,
    integrate_semi_infinite,
    integrate_shifted_gaussian,
    require_converged,
)
from .specfun import alpha, log_sinh_ratio

_SQRT_HALF_PI = math.sqrt(math.pi / 2.0)
_SQRT_TWO_OVER_PI = math.sqrt(2.0 / math.pi)
_LOG_SQRT2 = 0.5 * math.log(2.0)

# Central-difference step for the entropy-rate cross-check; balances
# truncation against quadrature noise at the default tolerances.
_FD_STEP_SCALE = 1e-4


@dataclass(frozen=True)
class H3Params:
    """Hyperbolic-space configuration: curvature magnitude and quadrature budget."""

    kappa: float
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if not self.kappa > 0.0:
            raise ValueError("kappa must be positive")


def heat_kernel(p: H3Params, t: float, d: float) -> float:
    """Transition density at time t between points at geodesic distance d."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    if d < 0.0:
        raise ValueError("d must be nonnegative")
    k = p.kappa
    log_h = (
        -d * d / (2.0 * t)
        - 1.5 * math.log(2.0 * math.pi * t)
        - log_sinh_ratio(k * d)
        - 0.5 * k * k * t
    )
    return math.exp(log_h)


def _radial_mass(p: H3Params, t: float, r: float) -> float:
    """Radial density of the kernel: h(t, r) times the 4 pi sinh^2(kr)/k^2 shell.

    Written with the exponentials combined so it stays finite at any
    kappa^2 t (the raw shell factor alone would overflow).
    """
    if r == 0.0:
        return 0.0
    k = p.kappa
    expo = -((r - k * t) ** 2) / (2.0 * t)
    pref = 4.0 * math.pi / k * (2.0 * math.pi * t) ** -1.5
    return pref * r * math.exp(expo) * 0.5 * -math.expm1(-2.0 * k * r)


def normalization_quadrature(p: H3Params, t: float) -> float:
    """Total kernel mass by radial quadrature; equals 1 for every t."""
    result = integrate_semi_infinite(
        lambda r: _radial_mass(p, t, r), p.quadrature,
        peak_hint=p.kappa * t, peak_width=math.sqrt(t))
    return require_converged(result, "kernel normalization").value


def I1(p: H3Params, t: float) -> float:
    """Scaled second moment of the kernel, in closed form: (kappa^2 t + 3)/2."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    return 0.5 * (p.kappa * p.kappa * t + 3.0)


def I1_quadrature(p: H3Params, t: float) -> float:
    """Second-moment integral done honestly by radial quadrature."""
    result = integrate_semi_infinite(
        lambda r: _radial_mass(p, t, r) * r * r, p.quadrature,
        peak_hint=p.kappa * t, peak_width=math.sqrt(t))
    return require_converged(result, "second moment").value / (2.0 * t)


def xi(p: H3Params, t: float) -> LogScaled:
    """sqrt(2/pi) / (kappa t^{3/2}) times exp(-kappa^2 t/2); always positive."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    k = p.kappa
    return LogScaled(_SQRT_TWO_OVER_PI / (k * t ** 1.5), -0.5 * k * k * t)


def xi_prime(p: H3Params, t: float) -> LogScaled:
    """d/dt of xi; always negative."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    k = p.kappa
    k2t = k * k * t
    mant = -(k2t + 3.0) / (math.sqrt(2.0 * math.pi) * k * t ** 2.5)
    return LogScaled(mant, -0.5 * k2t)


def _log_weighted_sinh_integral(p: H3Params, t: float, power: int) -> LogScaled:
    """integral_0^inf exp(-r^2/2t) r^power sinh(kappa r) log(sinh kr/kr) dr.

    Splits sinh into its exponential halves, completes the square, and
    integrates each half in the substituted variable r = -+kappa t + sqrt(t) s,
    so nothing ever sees the exp(kappa^2 t/2) growth directly.
    """
    k = p.kappa
    st = math.sqrt(t)

    def g_plus(s: float) -> float:
        # max() absorbs the one-ulp negative r at the substituted domain edge
        r = max(0.0, k * t + st * s)
        return math.exp(-0.5 * s * s) * r ** power * log_sinh_ratio(k * r)

    def g_minus(s: float) -> float:
        r = max(0.0, -k * t + st * s)
        return math.exp(-0.5 * s * s) * r ** power * log_sinh_ratio(k * r)

    context = f"log-weighted sinh integral (power {power})"
    jp = require_converged(
        integrate_shifted_gaussian(g_plus, k * t, st, p.quadrature), context).value
    jm = require_converged(
        integrate_shifted_gaussian(g_minus, -k * t, st, p.quadrature), context).value
    return LogScaled(0.5 * st * (jp - jm), 0.5 * k * k * t)


def eta(p: H3Params, t: float) -> LogScaled:
    """The transcendental factor of I2, by overflow-safe quadrature."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    return _log_weighted_sinh_integral(p, t, 1)


def eta_prime(p: H3Params, t: float) -> LogScaled:
    """d/dt of eta: the same integral with an r^3/(2t^2) weight."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    raw = _log_weighted_sinh_integral(p, t, 3)
    return raw * (0.5 / (t * t))


def eta_envelope(p: H3Params, t: float) -> tuple[LogScaled, LogScaled]:
    """Closed-form (lower, upper) bounds that eta must sit strictly inside."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    k = p.kappa
    k2t = k * k * t
    a = alpha(k, t)
    st = math.sqrt(t)
    common = LogScaled(k * k * t * t, 0.0) + LogScaled(
        k * t * st * (k2t + 1.0) * a, 0.5 * k2t)
    coeff = _SQRT_HALF_PI * k * t * st
    lower = common - LogScaled(coeff * math.log(2.0 * k2t + 4.0), 0.5 * k2t)
    upper = common - LogScaled(
        coeff * math.log1p(_SQRT_HALF_PI * k2t / a), 0.5 * k2t)
    return lower, upper


def eta_prime_envelope(p: H3Params, t: float) -> tuple[LogScaled, LogScaled]:
    """Closed-form (lower, upper) bounds for eta'."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    k = p.kappa
    k2t = k * k * t
    a = alpha(k, t)
    st = math.sqrt(t)
    quartic = k2t * k2t + 6.0 * k2t + 3.0
    common = LogScaled(0.5 * k * k * t * (k2t + 5.0), 0.0) + LogScaled(
        0.5 * k * st * quartic * a, 0.5 * k2t)
    coeff = 0.5 * _SQRT_HALF_PI * k * st * (k2t + 3.0)
    decayed = math.exp(-0.5 * k2t)  # harmless underflow to 0 at large k2t
    lower_arg = (
        2.0 * k * _SQRT_TWO_OVER_PI * st * (k2t + 5.0) / (k2t + 3.0) * decayed
        + 2.0 * _SQRT_TWO_OVER_PI * quartic / (k2t + 3.0) * a
    )
    upper_arg = _SQRT_HALF_PI * k2t * (k2t + 3.0) / (k * st * decayed + (k2t + 1.0) * a)
    lower = common - LogScaled(coeff * math.log1p(lower_arg), 0.5 * k2t)
    upper = common - LogScaled(coeff * math.log1p(upper_arg), 0.5 * k2t)
    return lower, upper


def entropy(p: H3Params, t: float) -> float:
    """Differential entropy of the kernel at time t (nats)."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    k = p.kappa
    i2 = (xi(p, t) * eta(p, t)).value()
    return 1.5 * math.log(2.0 * math.pi * t) + 0.5 * k * k * t + I1(p, t) + i2


def entropy_quadrature(p: H3Params, t: float) -> float:
    """Entropy by one direct radial quadrature of -h log h, no decomposition.

    Independent oracle for the assembled value; also settles the radial
    Gaussian-weight reading discussed in the module docstring.
    """
    k = p.kappa
    base = 1.5 * math.log(2.0 * math.pi * t) + 0.5 * k * k * t

    def integrand(r: float) -> float:
        neg_log_h = r * r / (2.0 * t) + base + log_sinh_ratio(k * r)
        return _radial_mass(p, t, r) * neg_log_h

    result = integrate_semi_infinite(integrand, p.quadrature,
                                     peak_hint=k * t, peak_width=math.sqrt(t))
    return require_converged(result, "direct entropy integral").value


def entropy_rate(p: H3Params, t: float) -> float:
    """d/dt of the entropy, assembled in split-exponent arithmetic."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    k = p.kappa
    cross = xi_prime(p, t) * eta(p, t) + xi(p, t) * eta_prime(p, t)
    return 1.5 / t + k * k + cross.value()


def entropy_rate_fd(p: H3Params, t: float, step_scale: float = _FD_STEP_SCALE) -> float:
    """Central finite difference of the entropy, for cross-checking the rate."""
    h = step_scale * t
    return (entropy(p, t + h) - entropy(p, t - h)) / (2.0 * h)


def asymptotic_band(p: H3Params) -> tuple[float, float]:
    """Large-time band for the entropy rate: kappa^2 (2 -+ log sqrt 2)."""
    k2 = p.kappa * p.kappa
    return k2 * (2.0 - _LOG_SQRT2), k2 * (2.0 + _LOG_SQRT2)


@dataclass(frozen=True)
class H3EntropyRecord:
    """One time-grid row of the hyperbolic entropy sweep."""

    t: float
    entropy: float
    I1: float
    I2: float
    rate_direct: float
    rate_fd: float
    eta: LogScaled
    eta_lower: LogScaled
    eta_upper: LogScaled
    etap: LogScaled
    etap_lower: LogScaled
    etap_upper: LogScaled
    band_lo: float
    band_hi: float

    @property
    def envelope_ok(self) -> bool:
        return (self.eta_lower < self.eta < self.eta_upper
                and self.etap_lower < self.etap < self.etap_upper)

    def band_ok(self, kappa: float, slack_factor: float = 0.05) -> bool:
        """Band containment, enforced once t >= 20/kappa^2."""
        k2 = kappa * kappa
        if self.t * k2 < 20.0:
            return True
        slack = slack_factor * k2
        return self.band_lo - slack <= self.rate_direct <= self.band_hi + slack


def evaluate_record(p: H3Params, t: float) -> H3EntropyRecord:
    e = eta(p, t)
    ep = eta_prime(p, t)
    e_lo, e_hi = eta_envelope(p, t)
    ep_lo, ep_hi = eta_prime_envelope(p, t)
    x = xi(p, t)
    xp = xi_prime(p, t)
    i1 = I1(p, t)
    i2 = (x * e).value()
    k = p.kappa
    ent = 1.5 * math.log(2.0 * math.pi * t) + 0.5 * k * k * t + i1 + i2
    rate = 1.5 / t + k * k + (xp * e + x * ep).value()
    band_lo, band_hi = asymptotic_band(p)
    return H3EntropyRecord(
        t=t,
        entropy=ent,
        I1=i1,
        I2=i2,
        rate_direct=rate,
        rate_fd=entropy_rate_fd(p, t),
        eta=e,
        eta_lower=e_lo,
        eta_upper=e_hi,
        etap=ep,
        etap_lower=ep_lo,
        etap_upper=ep_hi,
        band_lo=band_lo,
        band_hi=band_hi,
    )


def evaluate_records(p: H3Params, times) -> list[H3EntropyRecord]:
    return [evaluate_record(p, float(t)) for t in times]
