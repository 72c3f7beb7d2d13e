"""Eigenfunction layer: the forward amplitude F, its Hankel transform
(the position-space eigenfunctions), the adjoint amplitude G in both
printed forms, norm integrals with their closed forms, and the
bilinear Gram pairing with a closed-form diagonal.

Conventions: principal-branch complex powers throughout; default
normalization constants f = g = 1; the Gram diagonal carries one
global sign GRAM_SIGN fixed by the tail-integral orientation of G.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, DomainError, PreconditionError
from .quad import (
    CLD,
    LD,
    CumulativeIntegral,
    IntegrandSpec,
    QuadResult,
    _adaptive_panels,
    _X15,
    _W15,
    integrate_finite,
    integrate_semi_infinite,
)
from .special import EULER_GAMMA, bessel_j0, eta, gamma, zeta, zeta_prime

__all__ = [
    "StateParams",
    "GramEntry",
    "GRAM_SIGN",
    "amplitude_F",
    "psi",
    "psi_tilde",
    "amplitude_G_tail",
    "amplitude_G_rewritten",
    "norm_integral",
    "norm_series_oracle",
    "paper_norm_closed_form",
    "gram",
    "gram_matrix",
    "gram_diagonal_closed_form",
    "gram_diagonal_by_parts",
    "gram_diagonal_log_moment",
]

# Global orientation sign of the Gram diagonal relative to
# (1-2^{1-rho}) Gamma(rho) zeta'(rho); a consequence of pairing the
# tail-integral G against Psi.  Constant across zeros.
GRAM_SIGN = -1

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class StateParams:
    """Spectral parameter and the two normalization constants."""

    s: complex
    f_const: complex = 1.0
    g_const: complex = 1.0

    def __post_init__(self):
        if complex(self.s).real <= 0:
            raise DomainError("StateParams requires Re(s) > 0")


@dataclass(frozen=True)
class GramEntry:
    rho_row: complex
    rho_col: complex
    value: complex
    abs_err: float

    def __post_init__(self):
        if not (math.isfinite(self.abs_err) and cmath.isfinite(self.value)):
            raise DomainError("GramEntry requires finite value and error")


def amplitude_F(p: StateParams, t: float) -> complex:
    """f * t^{s-1} / (1 + e^t).

    t = 0 is allowed only where the power has a limit: zero for
    Re(s) > 1, f/2 at s = 1 exactly.
    """
    s = complex(p.s)
    if t < 0:
        raise DomainError("amplitude_F requires t >= 0")
    if t == 0:
        if s == 1:
            return complex(p.f_const) * 0.5
        if s.real > 1:
            return 0j
        raise DomainError(
            "t = 0 is a singular point of F for Re(s) <= 1 "
            "(the phase of t^{s-1} has no limit off s = 1)"
        )
    if t > 690:
        return 0j
    return (
        complex(p.f_const)
        * cmath.exp((s - 1) * math.log(t))
        / (1.0 + math.exp(t))
    )


def psi(p: StateParams, x: float, tol: float = 1e-10) -> QuadResult:
    """The Hankel-type transform of F: integral over t of
    F_s(t) J0(2 sqrt(x t)), as a QuadResult."""
    if x < 0:
        raise DomainError("psi requires x >= 0")
    s = complex(p.s)
    sm1 = CLD(s - 1)
    fc = complex(p.f_const)
    x64 = float(x)

    def f(t):
        t = np.asarray(t, dtype=LD)
        base = np.exp(sm1 * np.log(t)) / (1.0 + np.exp(t))
        if x64 > 0:
            base = base * bessel_j0(
                2.0 * np.sqrt(x64 * np.asarray(t, dtype=np.float64))
            )
        return fc * base

    spec = IntegrandSpec(
        endpoint_exponent=s.real,
        decay="exponential",
        oscillatory=(x64 > 0 or s.imag != 0),
    )
    return integrate_semi_infinite(f, spec, tol)


def psi_tilde(p: StateParams, x: float, tol: float = 1e-10) -> QuadResult:
    """e^{-x/2} psi(p, x); the weighted eigenfunction whose x = 0 value
    is the boundary function."""
    r = psi(p, x, tol=tol)
    w = math.exp(-0.5 * x)
    return QuadResult(r.value * w, r.abs_err * w, r.evals)


def amplitude_G_tail(p: StateParams, t: float, tol: float = 1e-10) -> QuadResult:
    """g * t^{s-1} (1 + e^t) * integral_t^inf tau^{-s}/(1+e^tau) dtau.

    The inner integral is evaluated on the shifted axis so the
    quadrature starts at the regular point u = 0.
    """
    if not t > 0:
        raise DomainError("amplitude_G_tail requires t > 0")
    if t > 690:
        raise DomainError("prefactor overflows for t > 690")
    s = complex(p.s)
    ms = CLD(-s)
    t_ld = LD(t)

    def f(u):
        tau = t_ld + np.asarray(u, dtype=LD)
        return np.exp(ms * np.log(tau)) / (1.0 + np.exp(tau))

    # Absolute inner tolerance scaled to the t^{-sigma} e^{-t} size of
    # the inner value, so the reported error tracks |G| itself.
    scale = math.exp(-t) * max(t, 1.0) ** (-s.real)
    spec = IntegrandSpec(endpoint_exponent=1.0, decay="exponential",
                         oscillatory=s.imag != 0)
    inner = integrate_semi_infinite(f, spec, tol * scale)
    pref = (
        complex(p.g_const)
        * cmath.exp((s - 1) * math.log(t))
        * (1.0 + math.exp(t))
    )
    return QuadResult(pref * inner.value, abs(pref) * inner.abs_err,
                      inner.evals)


def _require_zero(rho: complex, label: str):
    r = abs(zeta(rho))
    if not r < 1e-7:
        raise PreconditionError(
            f"{label} = {rho} is not a verified zero (|zeta| = {r:.3e})"
        )


def amplitude_G_rewritten(rho, t: float, g_const: complex = 1.0,
                          tol: float = 1e-12) -> QuadResult:
    """The rewritten adjoint amplitude
    -g - g t^{rho-1}(1+e^t) * integral_0^t tau^{-rho}/(1+e^tau)
    (rho + tau e^tau/(1+e^tau)) dtau,
    valid only at zeros (the rewrite uses the vanishing of zeta)."""
    rho = complex(rho)
    _require_zero(rho, "rho")
    if not t > 0:
        raise DomainError("amplitude_G_rewritten requires t > 0")
    if t > 690:
        raise DomainError("prefactor overflows for t > 690")
    mrho = CLD(-rho)
    rho_c = CLD(rho)

    def f(tau):
        tau = np.asarray(tau, dtype=LD)
        et = np.exp(tau)
        return (
            np.exp(mrho * np.log(tau))
            / (1.0 + et)
            * (rho_c + tau * et / (1.0 + et))
        )

    pref = (
        complex(g_const)
        * cmath.exp((rho - 1) * math.log(t))
        * (1.0 + math.exp(t))
    )
    spec = IntegrandSpec(endpoint_exponent=1.0 - rho.real,
                         oscillatory=rho.imag != 0)
    inner = integrate_finite(f, 0.0, t, tol / max(abs(pref), 1.0), spec=spec)
    value = -complex(g_const) - pref * inner.value
    err = abs(pref) * inner.abs_err + 64 * float(np.finfo(LD).eps) * (
        1.0 + abs(value)
    )
    return QuadResult(value, err, inner.evals)


def norm_integral(c, tol: float = 1e-12) -> QuadResult:
    """integral_0^inf t^{c-2}/(1+e^t)^2 dt.

    Log-divergent at Re(c) = 1; the band Re(c) <= 1.01 is refused
    outright since the panel budget there grows without bound.
    """
    c = complex(c)
    if c.real <= 1.01:
        raise DivergenceError(
            "norm integral diverges at Re(c) <= 1; the band up to 1.01 "
            "is out of contract (endpoint exponent too close to -1)"
        )
    cm2 = CLD(c - 2)

    def f(t):
        t = np.asarray(t, dtype=LD)
        e = np.exp(-t)
        return np.exp(cm2 * np.log(t)) * (e / (1.0 + e)) ** 2

    spec = IntegrandSpec(endpoint_exponent=c.real - 1.0, decay="exponential",
                         oscillatory=c.imag != 0)
    return integrate_semi_infinite(f, spec, tol)


def norm_series_oracle(s) -> complex:
    """Gamma(s)(eta(s) - eta(s-1)) = integral t^{s-1}/(1+e^t)^2 dt,
    from expanding the squared denominator into an alternating series."""
    s = complex(s)
    if s.real <= 0:
        raise DomainError("norm_series_oracle requires Re(s) > 0")
    return gamma(s) * (eta(s) - eta(s - 1))


def paper_norm_closed_form(c) -> complex:
    """2^{-c} Gamma(1+c) ((2^c - 1) zeta(1+c) - (2^c - 2) zeta(c)),
    with the removable point c = 1 handled by its limit
    (2^c - 2) zeta(c) -> 2 ln 2 (plus the first-order term in c - 1)."""
    c = complex(c)
    # Real powers of two round better than exp(c ln 2); at integer c
    # they are exact, which the printed reference digits rely on.
    p = 2.0**c.real if c.imag == 0 else cmath.exp(c * _LN2)
    if abs(c - 1) < 1e-6:
        delta = c - 1
        t2 = 2 * _LN2 * (1.0 + delta * (EULER_GAMMA + _LN2 / 2.0))
    else:
        t2 = (p - 2.0) * zeta(c)
    t1 = (p - 1.0) * zeta(1 + c)
    return gamma(1 + c) * (t1 - t2) / p


def gram_diagonal_closed_form(rho, f_const: complex = 1.0,
                              g_const: complex = 1.0) -> complex:
    """GRAM_SIGN * (1 - 2^{1-rho}) Gamma(rho) zeta'(rho) * conj(g) f."""
    rho = complex(rho)
    den = 1 - cmath.exp((1 - rho) * _LN2)
    return (
        GRAM_SIGN
        * den
        * gamma(rho)
        * zeta_prime(rho)
        * complex(g_const).conjugate()
        * complex(f_const)
    )


def gram_diagonal_by_parts(rho, f_const: complex = 1.0,
                           g_const: complex = 1.0) -> complex:
    """-d/drho [Gamma(rho) eta(rho)], the integration-by-parts value of
    the diagonal, assembled from Gamma' (central difference) and eta'
    (product rule through zeta and zeta').  Keeps the Gamma' eta term,
    which matters only off an exact zero."""
    rho = complex(rho)
    h = 1e-6
    gp = (gamma(rho + h) - gamma(rho - h)) / (2 * h)
    den = 1 - cmath.exp((1 - rho) * _LN2)
    z = zeta(rho)
    e = den * z
    ep = _LN2 * cmath.exp((1 - rho) * _LN2) * z + den * zeta_prime(rho)
    return (
        -(gp * e + gamma(rho) * ep)
        * complex(g_const).conjugate()
        * complex(f_const)
    )


def gram_diagonal_log_moment(rho, tol: float = 5e-16) -> QuadResult:
    """The same by-parts diagonal as a quadrature:
    - integral_0^inf ln t * t^{rho-1}/(1+e^t) dt."""
    rho = complex(rho)
    rm1 = CLD(rho - 1)

    def f(t):
        t = np.asarray(t, dtype=LD)
        lt = np.log(t)
        return lt * np.exp(rm1 * lt) / (1.0 + np.exp(t))

    spec = IntegrandSpec(endpoint_exponent=rho.real, decay="exponential",
                         oscillatory=True)
    res = integrate_semi_infinite(f, spec, tol)
    return QuadResult(-res.value, res.abs_err, res.evals)


def _propagated(panels, coef_abs, err_at):
    """Sum over final panels of a 15-node quadrature of
    |coef(u)| * (pointwise inner-query error at u)."""
    total = 0.0
    for pa, pb, _v, _e in panels:
        h = (pb - pa) / 2
        mid = (pa + pb) / 2
        nodes = mid + h * _X15
        total += float(h) * float(
            np.dot(_W15, coef_abs(nodes) * err_at(nodes))
        )
    return total


def gram(rho_row, rho_col, f_const: complex = 1.0, g_const: complex = 1.0,
         tol: float = 1e-18, route: str = "tail",
         max_evals: int = 2_000_000) -> GramEntry:
    """The bilinear pairing
    conj(g) f * integral_0^inf t^{rho_row* + rho_col - 2}
                 (integral_0^t tau^{-rho_row*}/(1+e^tau) dtau) dt
    between an adjoint state at rho_row and a state at rho_col, both
    verified zeros.

    route="tail" (default) replaces the inner factor by
    -integral_t^inf, valid at zeros since the full integral
    Gamma(1-rho*) eta(1-rho*) vanishes there; the outer integrand then
    decays exponentially instead of passing through cancelling O(1)
    terms.  route="naive" integrates the printed inner direction and
    serves as the loose-tolerance oracle.

    Both routes run on square-root axes (t = u^2, tau = v^2), where the
    integrands become bounded log-oscillations; one cumulative inner
    decomposition is queried from the low end below u = 1 (anchored at
    the analytically known total) and from the high end above.
    """
    rho_row = complex(rho_row)
    rho_col = complex(rho_col)
    _require_zero(rho_row, "rho_row")
    _require_zero(rho_col, "rho_col")
    rs = rho_row.conjugate()
    refl = 1 - rs
    _require_zero(refl, "1 - conj(rho_row)")
    if route not in ("tail", "naive"):
        raise DomainError(f"unknown route {route!r}")

    a = rs + rho_col
    upper = math.sqrt(-math.log(tol) + 8.0)
    vmax = math.sqrt(upper * upper + 12.0)
    tail_v = math.exp(-vmax * vmax)
    one_m2rs = CLD(1 - 2 * rs)

    def inner_f(v):
        v = np.asarray(v, dtype=LD)
        return 2.0 * np.exp(one_m2rs * np.log(v)) / (1.0 + np.exp(v * v))

    cum = CumulativeIntegral(inner_f, 0.0, vmax, tol / 200.0,
                             max_evals=max_evals // 2, tail_bound=tail_v,
                             initial=32)
    # Full inner integral = Gamma(1-rho*) eta(1-rho*); tiny at a zero
    # but kept as the exact low anchor.
    w0 = complex(gamma(refl) * eta(refl))
    gf = complex(g_const).conjugate() * complex(f_const)

    if route == "tail":
        coef_exp = CLD(2 * a - 3)
        coef_re = float((2 * a - 3).real)
        switch = 1.0

        def w_tilde(u, want_err=False):
            u = np.asarray(u, dtype=LD)
            w = np.empty(u.shape, dtype=CLD)
            errs = np.empty(u.shape) if want_err else None
            lo = u < switch
            if np.any(lo):
                pre, e1 = cum.query_lo_many(u[lo])
                w[lo] = CLD(w0) - pre
                if want_err:
                    errs[lo] = e1
            hi_m = ~lo
            if np.any(hi_m):
                suf, e2 = cum.query_hi_many(u[hi_m])
                w[hi_m] = suf
                if want_err:
                    errs[hi_m] = e2
            return (w, errs) if want_err else w

        def outer_f(u):
            u = np.asarray(u, dtype=LD)
            coef = 2.0 * np.exp(coef_exp * np.log(u))
            return -coef * w_tilde(u)

        panels, value, q_err, evals = _adaptive_panels(
            outer_f, LD(0), LD(upper), tol, max_evals, 64
        )

        def coef_abs(u):
            return 2.0 * np.exp(coef_re * np.log(np.asarray(u, dtype=np.float64)))

        def err_at(u):
            _, e = w_tilde(u, want_err=True)
            return e

        prop = _propagated(panels, coef_abs, err_at)
        tail_outer = math.exp(-(upper * upper))
        total_err = q_err + prop + tail_outer
        return GramEntry(rho_row, rho_col, gf * complex(value),
                         abs(gf) * total_err)

    # Naive route: the printed lower-anchored inner, outer on the t axis.
    t_hi = upper * upper
    coef_exp = CLD(a - 2)
    coef_re = float((a - 2).real)

    def outer_naive(t):
        t = np.asarray(t, dtype=LD)
        pre, _ = cum.query_lo_many(np.sqrt(t))
        coef = np.exp(coef_exp * np.log(t))
        return coef * pre

    panels, value, q_err, evals = _adaptive_panels(
        outer_naive, LD(0), LD(t_hi), tol, max_evals, 64
    )

    def coef_abs(t):
        return np.exp(coef_re * np.log(np.asarray(t, dtype=np.float64)))

    def err_at(t):
        _, e = cum.query_lo_many(np.sqrt(np.asarray(t, dtype=LD)))
        return e

    prop = _propagated(panels, coef_abs, err_at)
    # Truncation: the true inner tends to w0, so the discarded tail is
    # the exponential remnant plus the w0 log-moment out to t_hi.
    tail_outer = math.exp(-t_hi) + abs(w0) * 80.0
    total_err = q_err + prop + tail_outer
    return GramEntry(rho_row, rho_col, gf * complex(value),
                     abs(gf) * total_err)


def gram_matrix(rhos, f_const: complex = 1.0, g_const: complex = 1.0,
                tol: float = 1e-18):
    """All pairings of the given zeros, row-major deterministic order."""
    return [
        [gram(r, c, f_const=f_const, g_const=g_const, tol=tol) for c in rhos]
        for r in rhos
    ]
