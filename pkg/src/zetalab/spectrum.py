"""Boundary function, zero location on the critical line, strip
counting by the argument principle, and the eigenvalue map.

The boundary function xi_bc(s) = (1 - 2^{1-s}) Gamma(s) zeta(s) is
computed as Gamma(s) eta(s), which is regular at s = 1.  Zero
bracketing uses the classical completed xi, which is real on the
critical line and so admits sign-change scanning.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import (
    CapabilityError,
    ConvergenceError,
    DomainError,
    PreconditionError,
    ResolutionError,
)
from .special import eta, gamma, zeta, zeta_prime, _zeta_pair

__all__ = [
    "ZeroRecord",
    "StripRectangle",
    "xi_bc",
    "critical_line_real_form",
    "find_zeros",
    "count_zeros",
    "eigenvalue_of",
]

_TAU_CAP = 60.0


@dataclass(frozen=True)
class ZeroRecord:
    """One located on-line zero: 1-based index, ordinate, rho = 1/2 + i tau,
    |zeta(rho)| residual, and the scan bracket it was refined from."""

    index: int
    tau: float
    rho: complex
    residual: float
    bracket: tuple[float, float]


@dataclass(frozen=True)
class StripRectangle:
    """Axis-aligned rectangle inside the critical strip."""

    sigma_lo: float
    sigma_hi: float
    tau_lo: float
    tau_hi: float

    def __post_init__(self):
        if not (0.0 < self.sigma_lo < self.sigma_hi < 1.0):
            raise DomainError("require 0 < sigma_lo < sigma_hi < 1")
        if not self.tau_lo < self.tau_hi:
            raise DomainError("require tau_lo < tau_hi")


def xi_bc(s, route: str = "eta") -> complex:
    """(1 - 2^{1-s}) Gamma(s) zeta(s), by default through Gamma(s) eta(s).

    route="zeta" evaluates the literal product instead; the two agree
    wherever both are defined (the product form keeps the removable
    point s = 1 and the spurious denominator zeros out of reach).
    """
    s = complex(s)
    if s.real <= 0:
        raise DomainError("xi_bc requires Re(s) > 0")
    if route == "eta":
        return gamma(s) * eta(s)
    if route == "zeta":
        return (1 - cmath.exp((1 - s) * math.log(2))) * gamma(s) * zeta(s)
    raise DomainError(f"unknown route {route!r}")


def critical_line_real_form(tau: float) -> float:
    """Real-valued zero detector on the line: the completed
    xi(1/2 + i tau) = (1/2) s(s-1) pi^{-s/2} Gamma(s/2) zeta(s),
    which is real-analytic in tau and changes sign exactly at the
    on-line zeros in the working range."""
    if tau < 0:
        raise DomainError("critical_line_real_form requires tau >= 0")
    s = complex(0.5, tau)
    val = (
        0.5
        * s
        * (s - 1)
        * cmath.exp(-s / 2 * math.log(math.pi))
        * gamma(s / 2)
        * zeta(s)
    )
    return val.real


def eigenvalue_of(rho) -> complex:
    """The spectral map i(1/2 - rho); real exactly when rho is on the line."""
    return 1j * (0.5 - complex(rho))


def find_zeros(tau_max: float, tol: float = 1e-10, step: float = 0.01):
    """All on-line zeros with 0 < tau <= tau_max, bracketed by a fixed-step
    sign scan of critical_line_real_form and refined by Brent's method.

    The 0.01 step is safe below tau = 60 where consecutive zero gaps
    stay above 0.05; larger heights are out of scope.
    """
    if tau_max > _TAU_CAP:
        raise CapabilityError(f"find_zeros supports tau_max <= {_TAU_CAP}")
    out = []
    if tau_max <= 0:
        return out
    n_steps = int(math.ceil(tau_max / step))
    prev_t = 0.0
    prev_v = critical_line_real_form(0.0)
    k = 0
    for i in range(1, n_steps + 1):
        t = min(i * step, tau_max)
        v = critical_line_real_form(t)
        if v == 0.0:
            root = t
        elif prev_v * v < 0:
            try:
                root = brentq(critical_line_real_form, prev_t, t,
                              xtol=tol, rtol=8.9e-16)
            except (ValueError, RuntimeError) as exc:
                raise ConvergenceError(
                    f"refinement failed on bracket [{prev_t}, {t}]: {exc}"
                ) from exc
        else:
            prev_t, prev_v = t, v
            continue
        k += 1
        rho = complex(0.5, root)
        out.append(
            ZeroRecord(
                index=k,
                tau=float(root),
                rho=rho,
                residual=abs(zeta(rho)),
                bracket=(prev_t, t),
            )
        )
        prev_t, prev_v = t, v
    return out


def _edge_integral(z0, z1, n_init, state):
    """Adaptive log-derivative integral of zeta along a segment.

    state carries the min-|zeta| tracker and the evaluation cache.
    """

    def vals(z):
        cached = state["cache"].get(z)
        if cached is None:
            cached = _zeta_pair(z)
            state["cache"][z] = cached
            m = abs(cached[0])
            if m < state["min_abs"]:
                state["min_abs"] = m
                state["argmin"] = z
        return cached

    def recurse(za, zb, fa, fb, depth):
        zm = (za + zb) / 2
        fm = vals(zm)
        wa, wb, wm = fa[1] / fa[0], fb[1] / fb[0], fm[1] / fm[0]
        trap = (wa + wb) / 2 * (zb - za)
        simp = (wa + 4 * wm + wb) / 6 * (zb - za)
        # A phase stride near pi between samples can slip a turn.
        stride = abs(cmath.phase(fb[0] / fa[0]))
        if abs(simp - trap) < 0.004 and stride < 1.2:
            return simp
        if depth >= 48:
            if state["min_abs"] < 1e-6:
                raise PreconditionError(
                    f"contour point {state['argmin']} has |zeta| = "
                    f"{state['min_abs']:.2e} < 1e-6; move the rectangle"
                )
            raise ResolutionError(
                f"argument-principle refinement stalled near {zm}"
            )
        return recurse(za, zm, fa, fm, depth + 1) + recurse(
            zm, zb, fm, fb, depth + 1
        )

    total = 0j
    pts = [z0 + (z1 - z0) * i / n_init for i in range(n_init + 1)]
    fs = [vals(z) for z in pts]
    for i in range(n_init):
        total += recurse(pts[i], pts[i + 1], fs[i], fs[i + 1], 0)
    return total


def count_zeros(rect: StripRectangle, min_segments: int = 400) -> int:
    """Number of zeta zeros inside the rectangle, by winding of the
    logarithmic derivative around the boundary (counterclockwise).

    Raises PreconditionError if the contour passes within 1e-6 of a
    zero and ResolutionError if the winding does not land within 0.1
    of an integer.
    """
    corners = [
        complex(rect.sigma_lo, rect.tau_lo),
        complex(rect.sigma_hi, rect.tau_lo),
        complex(rect.sigma_hi, rect.tau_hi),
        complex(rect.sigma_lo, rect.tau_hi),
    ]
    lengths = [abs(corners[(i + 1) % 4] - corners[i]) for i in range(4)]
    perimeter = sum(lengths)
    state = {"cache": {}, "min_abs": math.inf, "argmin": None}
    total = 0j
    for i in range(4):
        n_init = max(24, int(math.ceil(min_segments * lengths[i] / perimeter)))
        total += _edge_integral(corners[i], corners[(i + 1) % 4], n_init, state)
    if state["min_abs"] < 1e-6:
        raise PreconditionError(
            f"contour point {state['argmin']} has |zeta| = "
            f"{state['min_abs']:.2e} < 1e-6; move the rectangle"
        )
    winding = total.imag / (2 * math.pi)
    nearest = round(winding)
    if abs(winding - nearest) >= 0.1 or abs(total.real) > 0.5:
        raise ResolutionError(
            f"winding {winding!r} (closure defect {total.real!r}) "
            "is not within 0.1 of an integer"
        )
    return int(nearest)
