"""Running couplings from cutoff independence of the reduced ground level.

Requiring dE0/dLambda = 0 for the reduced-oscillator level E0(g, Lambda)
turns the coupling into a running one,

    dg/dln(Lambda) = beta(g, Lambda) = -Lambda (dE0/dLambda) / (dE0/dg).

Each builtin family carries two descriptions of the same flow:

* ``beta_closed_form``   the hand-derived expression for that family;
* ``beta_numeric``       implicit differentiation of the family's energy
                         law by central finite differences.

The energy law E0(g, Lambda) is the large-cutoff form the closed-form beta
was derived from.  For the quartic and Coulomb families it coincides (to
rounding) with the exact completed-square pipeline; for the Morse family it
is the leading large-Lambda form, which the exact expansion only approaches
as Lambda grows (see ``pipeline_ground_energy`` to evaluate the exact
route).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator

from .errors import (DomainError, FlowUndefinedError, IntegrationAbortError,
                     NoFixedPointError, NoUVLimitError)
from .potentials import Family, PotentialSpec, with_coupling_and_cutoff
from .reduction import (EstimateSource, GroundStateEstimate, SignBranch,
                        expand_at_cutoff, ho_ground_energy)

LAMBDA_FLOOR = 2.0

_EPS = float(np.finfo(float).eps)
_FD_STEP = _EPS ** (1.0 / 3.0)


def _check_lam(lam: float) -> float:
    lam = float(lam)
    if not lam > LAMBDA_FLOOR:
        raise DomainError(f"cutoff {lam} is at or below the floor {LAMBDA_FLOOR}")
    return lam


# -- coupling flows ---------------------------------------------------------

@dataclass(frozen=True)
class PowerLawFlow:
    """g(Lambda) = coefficient * Lambda**exponent."""

    coefficient: float
    exponent: float
    lam_min: float = LAMBDA_FLOOR
    lam_max: float = math.inf

    def __call__(self, lam: float) -> float:
        if not (self.lam_min <= lam <= self.lam_max):
            raise DomainError(f"cutoff {lam} outside validity range "
                              f"[{self.lam_min}, {self.lam_max}]")
        return self.coefficient * lam ** self.exponent


@dataclass(frozen=True)
class LogFlow:
    """g(Lambda) = K**2 / ln(Lambda), the logarithmic running solution."""

    K: float
    lam_min: float = LAMBDA_FLOOR
    lam_max: float = math.inf

    def __call__(self, lam: float) -> float:
        if not (self.lam_min <= lam <= self.lam_max):
            raise DomainError(f"cutoff {lam} outside validity range "
                              f"[{self.lam_min}, {self.lam_max}]")
        return self.K ** 2 / math.log(lam)

    def derivative_wrt_log(self, lam: float) -> float:
        """d g / d ln(Lambda), analytic."""
        s = math.log(lam)
        return -self.K ** 2 / (s * s)


@dataclass(frozen=True)
class TabulatedFlow:
    """Sampled trajectory, interpolated monotonically in ln(Lambda)."""

    lams: np.ndarray
    couplings: np.ndarray
    _interp: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lams = np.asarray(self.lams, dtype=float)
        if lams.ndim != 1 or len(lams) < 2 or np.any(np.diff(lams) <= 0):
            raise DomainError("tabulated flow needs strictly increasing cutoffs")
        interp = PchipInterpolator(np.log(lams), np.asarray(self.couplings, dtype=float))
        object.__setattr__(self, "_interp", interp)

    @property
    def lam_min(self) -> float:
        return float(self.lams[0])

    @property
    def lam_max(self) -> float:
        return float(self.lams[-1])

    def __call__(self, lam: float) -> float:
        if not (self.lam_min <= lam <= self.lam_max):
            raise DomainError(f"cutoff {lam} outside tabulated range "
                              f"[{self.lam_min}, {self.lam_max}]")
        return float(self._interp(math.log(lam)))


CouplingFlow = PowerLawFlow | LogFlow | TabulatedFlow


class SignPolicy(Enum):
    PREFER_NEGATIVE = "prefer-negative"
    PREFER_POSITIVE = "prefer-positive"
    REPORT_BOTH = "report-both"


_DEFAULT_POLICY = {
    Family.MORSE: SignPolicy.PREFER_POSITIVE,
    Family.QUARTIC: SignPolicy.PREFER_POSITIVE,
    Family.COULOMB: SignPolicy.PREFER_NEGATIVE,
    Family.SOFT_COULOMB: SignPolicy.PREFER_NEGATIVE,
    Family.KRAMERS_HENNEBERGER: SignPolicy.PREFER_NEGATIVE,
    Family.CUSTOM: SignPolicy.PREFER_POSITIVE,
}


def default_sign_policy(spec: PotentialSpec) -> SignPolicy:
    """Attractive families resolve the root downward, confining ones upward."""
    return _DEFAULT_POLICY[spec.family]


# -- energy laws ------------------------------------------------------------

def pipeline_ground_energy(spec: PotentialSpec, g: float, lam: float) -> float:
    """E0 through the exact completed-square route (positive branch)."""
    red = expand_at_cutoff(with_coupling_and_cutoff(spec, g, lam), lam)
    return ho_ground_energy(red).energy


def uv_energy_law(spec: PotentialSpec) -> Callable[[float, float], float]:
    """The closed-form large-cutoff level E0(g, Lambda) for the family.

    This is the expression the family's closed-form beta is the implicit
    derivative of.  For quartic and Coulomb it equals the exact reduction;
    for Morse and the regularized Coulomb it is the printed large-Lambda
    form (the regularized-Coulomb one keeps the printed bracket constant,
    which differs from the generic completed square; see README).
    """
    fam = spec.family
    if fam is Family.MORSE:
        a = spec.shape["a"]
        m = spec.shape["m"]

        def law(A, lam):
            if A < 0:
                raise FlowUndefinedError("Morse energy law needs A >= 0")
            return a * math.sqrt(A / (2.0 * m)) - A - a * a * A / lam ** 2
        return law
    if fam is Family.QUARTIC:
        def law(g, lam):
            if g < 0:
                raise FlowUndefinedError("quartic energy law needs g >= 0")
            return math.sqrt(6.0 * g) / lam + g / (3.0 * lam ** 4)
        return law
    if fam is Family.COULOMB:
        def law(alpha, lam):
            if alpha > 0:
                raise FlowUndefinedError("Coulomb energy law needs alpha <= 0")
            return 0.5 * math.sqrt(-2.0 * alpha * lam ** 3) - 0.75 * alpha * lam
        return law
    if fam is Family.SOFT_COULOMB:
        def law(alpha, lam):
            if alpha > 0:
                raise FlowUndefinedError("softened Coulomb energy law needs alpha <= 0")
            return (0.5 * math.sqrt(-(math.sqrt(2.0) / 8.0) * alpha * lam ** 3)
                    - (math.sqrt(2.0) / 2.0) * alpha * lam)
        return law
    if fam is Family.KRAMERS_HENNEBERGER:
        eps = spec.shape["eps_exp"]

        def law(alpha, lam):
            s = math.log(lam)
            x = (2.0 / math.pi) * (alpha / eps) * s
            if x < 0:
                raise FlowUndefinedError("dressed energy law needs alpha >= 0")
            return 0.5 * math.sqrt(x) + x
        return law
    # no printed law for custom shapes; fall back to the exact reduction
    return lambda g, lam: pipeline_ground_energy(spec, g, lam)


# -- beta functions ---------------------------------------------------------

def beta_closed_form(spec: PotentialSpec, g: float, lam: float) -> float:
    """Hand-derived beta = dg/dln(Lambda) for the builtin families."""
    lam = _check_lam(lam)
    fam = spec.family
    if fam is Family.MORSE:
        a = spec.shape["a"]
        m = spec.shape["m"]
        if g <= 0:
            raise FlowUndefinedError("Morse beta needs A > 0")
        den = lam ** 2 + a * a - a * lam ** 2 / math.sqrt(8.0 * m * g)
        if den == 0.0:
            raise FlowUndefinedError("Morse beta denominator vanished")
        return 2.0 * a * a * g / den
    if fam is Family.QUARTIC:
        if g < 0:
            raise FlowUndefinedError("quartic beta needs g >= 0")
        u = math.sqrt(6.0 * g) / lam
        return 2.0 * g * (9.0 * lam ** 2 + 2.0 * u) / (9.0 * lam ** 2 + u)
    if fam is Family.COULOMB:
        if g > 0:
            raise FlowUndefinedError("Coulomb beta needs alpha <= 0")
        t = math.sqrt(-2.0 * g * lam)
        return -3.0 * g * (2.0 * lam + t) / (2.0 * lam + 3.0 * t)
    if fam is Family.SOFT_COULOMB:
        if g > 0:
            raise FlowUndefinedError("softened Coulomb beta needs alpha <= 0")
        t = math.sqrt(-2.0 * math.sqrt(2.0) * g * lam)
        return -g * (3.0 * lam + 4.0 * t) / (lam + 4.0 * t)
    if fam is Family.KRAMERS_HENNEBERGER:
        return -g / math.log(lam)
    raise FlowUndefinedError(f"no closed-form beta for family {fam.value}")


def beta_numeric(spec: PotentialSpec, g: float, lam: float,
                 energy: Optional[Callable[[float, float], float]] = None) -> float:
    """beta = -Lambda (dE0/dLambda)/(dE0/dg) by central finite differences.

    ``energy`` defaults to the family's energy law (see uv_energy_law);
    pass ``pipeline_ground_energy`` partials to differentiate the exact
    completed-square route instead.
    """
    lam = _check_lam(lam)
    if energy is None:
        energy = uv_energy_law(spec)
    hg = (abs(g) if g != 0.0 else 1.0) * _FD_STEP
    hl = lam * _FD_STEP
    de_dg = (energy(g + hg, lam) - energy(g - hg, lam)) / (2.0 * hg)
    de_dl = (energy(g, lam + hl) - energy(g, lam - hl)) / (2.0 * hl)
    if de_dg == 0.0 or not math.isfinite(de_dg) or not math.isfinite(de_dl):
        raise FlowUndefinedError(
            f"cutoff independence is degenerate at (g={g}, lam={lam})")
    return -lam * de_dl / de_dg


@dataclass(frozen=True)
class BetaEvaluation:
    coupling: float
    cutoff: float
    value: float
    method: str  # "closed-form" or "numeric"


def evaluate_beta(spec: PotentialSpec, g: float, lam: float,
                  method: str = "closed-form") -> BetaEvaluation:
    if method == "closed-form":
        val = beta_closed_form(spec, g, lam)
    elif method == "numeric":
        val = beta_numeric(spec, g, lam)
    else:
        raise DomainError(f"unknown beta method {method!r}")
    return BetaEvaluation(float(g), float(lam), val, method)


# -- fixed points -----------------------------------------------------------

class FixedPointTarget(Enum):
    """Canonical reduced forms the stiffness can be matched to."""

    UNIT_OSCILLATOR = (1.0, 1.0)   # p^2 + x^2
    HALF_OSCILLATOR = (0.5, 0.5)   # (p^2 + x^2)/2

    @property
    def stiffness(self) -> float:
        return self.value[0]

    @property
    def kappa(self) -> float:
        return self.value[1]


def _default_target(spec: PotentialSpec) -> FixedPointTarget:
    for target in FixedPointTarget:
        if spec.kappa == target.kappa:
            return target
    raise NoFixedPointError(
        f"no canonical oscillator with kinetic normalization {spec.kappa}")


def solve_fixed_point(spec: PotentialSpec,
                      target: Optional[FixedPointTarget] = None,
                      lam_max: float = 1.0e8) -> CouplingFlow:
    """Coupling law g(Lambda) that pins the reduced stiffness to the target.

    Pointwise, g(Lambda) = c_target / (v''(1/Lambda)/2).  For shapes with
    power-law curvature this is an exact power law; otherwise the pointwise
    solution is returned as a tabulated trajectory.
    """
    if target is None:
        target = _default_target(spec)
    if spec.kappa != target.kappa:
        raise NoFixedPointError(
            f"family kinetic normalization {spec.kappa} cannot reach the "
            f"target form (needs kappa = {target.kappa})")
    tc = target.stiffness
    fam = spec.family
    if fam is Family.QUARTIC:
        return PowerLawFlow(tc / 6.0, 2.0)
    if fam is Family.COULOMB:
        return PowerLawFlow(-tc, -3.0)
    if fam is Family.SOFT_COULOMB:
        return PowerLawFlow(-8.0 * math.sqrt(2.0) * tc, -3.0)
    if fam is Family.KRAMERS_HENNEBERGER:
        raise NoFixedPointError(
            "the dressed family runs logarithmically; use kh.cs_solution")

    def pointwise(lam: float) -> float:
        moved = with_coupling_and_cutoff(spec, 1.0, lam)
        _, _, v2 = moved.shape_derivatives(1.0 / lam)
        if v2 == 0.0:
            raise NoFixedPointError(f"flat shape curvature at cutoff {lam}")
        return tc / (0.5 * v2)

    lams = np.geomspace(LAMBDA_FLOOR, lam_max, 25 * 8 + 1)
    vals = np.array([pointwise(l) for l in lams])
    if np.any(~np.isfinite(vals)):
        raise NoFixedPointError("pointwise stiffness match is not finite")
    # exact-power-law detection on interior probes
    probes = lams[10:-10:40]
    pvals = vals[10:-10:40]
    if np.all(pvals > 0) or np.all(pvals < 0):
        k = np.diff(np.log(np.abs(pvals))) / np.diff(np.log(probes))
        k0 = float(np.round(np.mean(k)))
        coef = pvals / probes ** k0
        if abs(np.mean(k) - k0) < 1e-9 and np.ptp(coef) <= 1e-10 * abs(np.mean(coef)):
            return PowerLawFlow(float(np.mean(coef)), k0)
    return TabulatedFlow(lams, vals)


# -- flow integration -------------------------------------------------------

def integrate_flow(spec: PotentialSpec, g0: float, lam0: float, lam1: float,
                   beta: str | Callable[[float, float], float] = "closed-form",
                   rtol: float = 1.0e-8, n_points: int = 129) -> TabulatedFlow:
    """Integrate dg/ds = beta(g, e^s) in s = ln(Lambda) from lam0 to lam1."""
    lam0 = _check_lam(lam0)
    lam1 = _check_lam(lam1)
    if lam0 == lam1:
        raise DomainError("integration endpoints coincide")
    if callable(beta):
        rhs_beta = beta
    elif beta == "closed-form":
        rhs_beta = lambda g, lam: beta_closed_form(spec, g, lam)
    elif beta == "numeric":
        rhs_beta = lambda g, lam: beta_numeric(spec, g, lam)
    else:
        raise DomainError(f"unknown beta method {beta!r}")

    def rhs(s, y):
        return [rhs_beta(y[0], math.exp(s))]

    s0, s1 = math.log(lam0), math.log(lam1)
    s_eval = np.linspace(s0, s1, n_points)
    try:
        sol = solve_ivp(rhs, (s0, s1), [float(g0)], t_eval=s_eval,
                        rtol=rtol, atol=abs(g0) * rtol * 1e-3 + 1e-300,
                        method="RK45")
    except (FlowUndefinedError, DomainError, ValueError, OverflowError) as exc:
        raise IntegrationAbortError(f"beta evaluation failed mid-flow: {exc}") from exc
    good = np.isfinite(sol.y[0])
    if not sol.success or not good.all():
        lams_ok = np.exp(sol.t[good])
        gs_ok = sol.y[0][good]
        last = (float(lams_ok[-1]), float(gs_ok[-1])) if len(gs_ok) else None
        raise IntegrationAbortError(
            f"flow integration aborted: {sol.message}", last_state=last,
            partial=(lams_ok, gs_ok) if len(gs_ok) else None)
    lams = np.exp(sol.t)
    gs = sol.y[0]
    if lams[0] > lams[-1]:
        lams, gs = lams[::-1], gs[::-1]
    # exp(log(lam)) rounding must not shrink the range past the endpoints
    lams[0], lams[-1] = min(lam0, lam1), max(lam0, lam1)
    return TabulatedFlow(lams, gs)


# -- large-cutoff limit -----------------------------------------------------

UV_SAMPLE_CUTOFFS = (1.0e3, 10.0 ** 4.5, 1.0e6)


def _aitken(e1: float, e2: float, e3: float) -> Tuple[float, float]:
    """One acceleration step: (estimate, estimated remaining error).

    For a geometrically settling tail e_k = e* + A r^k the step is exact;
    the error estimate scales the applied correction by r once more.  A
    non-shrinking tail (|r| >= 1) gets an infinite error estimate.
    """
    d1, d2 = e2 - e1, e3 - e2
    if d1 == 0.0 or d2 == 0.0:
        return e3, abs(d2)
    ratio = d2 / d1
    if abs(ratio) >= 1.0:
        return e3, math.inf
    correction = d2 * ratio / (1.0 - ratio)
    return e3 + correction, abs(correction * ratio)


def uv_limit_energy(spec: PotentialSpec, flow: CouplingFlow,
                    policy: Optional[SignPolicy] = None,
                    samples: Sequence[float] = UV_SAMPLE_CUTOFFS,
                    rel_tol: float = 1.0e-6) -> GroundStateEstimate:
    """Ground level in the infinite-cutoff limit along a coupling flow.

    E0(Lambda) is sampled through the exact reduction at the given cutoffs,
    required to settle (last two samples within rel_tol), and accelerated
    with one Aitken step.  When the flow has left the binding coupling
    regime the frequency root is sign-ambiguous and ``policy`` picks the
    branch (REPORT_BOTH keeps both; ``energy`` then carries the positive
    branch).
    """
    if policy is None:
        policy = default_sign_policy(spec)
    if len(samples) != 3 or not all(s2 > s1 for s1, s2 in zip(samples, samples[1:])):
        raise DomainError("need three increasing sample cutoffs")
    roots, offsets, flipped = [], [], False
    for lam in samples:
        try:
            g = flow(lam)
        except DomainError as exc:
            raise NoUVLimitError(f"flow not defined up to cutoff {lam}: {exc}") from exc
        red = expand_at_cutoff(with_coupling_and_cutoff(spec, g, lam), lam)
        roots.append(math.sqrt(red.kappa * abs(red.stiffness)))
        offsets.append(red.offset)
        if red.stiffness < 0.0 or g * spec.binding_sign < 0.0:
            flipped = True
    plus = [c + r for c, r in zip(offsets, roots)]
    minus = [c - r for c, r in zip(offsets, roots)]

    def settle(series):
        est, err = _aitken(*series)
        if err > rel_tol * max(1.0, abs(est)):
            raise NoUVLimitError(
                "reduced level is still drifting at the largest cutoffs",
                trend=list(zip(samples, series)))
        return est

    if not flipped:
        return GroundStateEstimate(settle(plus), SignBranch.POSITIVE,
                                   EstimateSource.UV_LIMIT)
    both = (settle(plus), settle(minus))
    if policy is SignPolicy.PREFER_NEGATIVE:
        energy = both[1]
    else:  # PREFER_POSITIVE and REPORT_BOTH carry the positive branch
        energy = both[0]
    return GroundStateEstimate(energy, SignBranch.AMBIGUOUS,
                               EstimateSource.UV_LIMIT, branches=both)
