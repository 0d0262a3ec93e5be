"""Oracle and property suites behind ``gaussacc verify``.

Each suite returns a list of :class:`Check` records holding the measured
worst-case deviation and the tolerance it is held to.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .duality import dual_observable, full_report, threshold_check
from .ensemble import (
    GaussianEnsemble,
    GaussianObservable,
    gaussian_mi,
    outcome_density,
)
from .errors import ThresholdViolation
from .gaussian_ops import GaussianState, sandwich_cov, sandwich_overlap
from .instances import (
    random_covariance,
    random_psd,
    random_single_mode,
    random_threshold_ensemble,
)
from .oracles import fock, montecarlo
from .single_mode import sm_accinfo, sm_optimal_meas, sm_tilde_params
from .symplectic import symplectic_eigenvalues


@dataclass(frozen=True)
class Check:
    name: str
    deviation: float
    tol: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.deviation <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" [{self.detail}]" if self.detail else ""
        return f"{status} {self.name}: deviation {self.deviation:.3e} (tol {self.tol:.1e}){extra}"


def _mode_cycle(i: int) -> int:
    return 1 + i % 3


def suite_duality(seed: int, n: int = 200) -> list[Check]:
    rng = np.random.default_rng(seed)
    rt = 0.0
    for i in range(n):
        e = random_threshold_ensemble(_mode_cycle(i), rng)
        d = dual_observable(e)
        back = sandwich_cov(d.alpha_tilde, d.beta_tilde).mat
        rt = max(rt, float(np.max(np.abs(back - e.beta.mat))))
    worst = -math.inf
    for i in range(n):
        s = _mode_cycle(i)
        beta = random_covariance(s, rng)
        gamma = beta + random_psd(2 * s, rng, scale=rng.uniform(0.1, 2.0)) + 1e-3 * np.eye(2 * s)
        worst = max(worst, -threshold_check(GaussianEnsemble(gamma, beta))[1])
    return [
        Check("duality round trip |sandwich_cov(alpha_t, beta_t) - beta|", rt, 1e-9, f"n={n}"),
        Check("gamma >= beta implies threshold (max negative margin)", max(0.0, worst), 1e-9, f"n={n}"),
    ]


def suite_attainment(seed: int, n: int = 200) -> list[Check]:
    rng = np.random.default_rng(seed)
    att = pure = gap = 0.0
    for i in range(n):
        e = random_threshold_ensemble(_mode_cycle(i), rng)
        rep = full_report(e)
        aim = rep.accessible_info_nats
        att = max(att, abs(gaussian_mi(e.gamma, e.beta.mat + rep.beta_star.mat) - aim))
        pure = max(pure, float(np.max(np.abs(symplectic_eigenvalues(rep.beta_star) - 0.5))))
        gap = max(gap, rep.lower_bound_nats - aim)
    return [
        Check("attainment |MI(beta_star) - accessible_info|", att, 1e-9, f"n={n}"),
        Check("optimal noise purity |nu - 1/2|", pure, 1e-8, f"n={n}"),
        Check("lower bound excess over accessible_info", max(0.0, gap), 1e-12, f"n={n}"),
    ]


def suite_singlemode(seed: int, n: int = 1000) -> list[Check]:
    rng = np.random.default_rng(seed)
    acc = bt = bs = 0.0
    for _ in range(n):
        p = random_single_mode(rng)
        gamma, beta = p.matrices()
        e = GaussianEnsemble(gamma, beta)
        rep = full_report(e)
        acc = max(acc, abs(rep.accessible_info_nats - sm_accinfo(p)))
        _, _, b1, b2 = sm_tilde_params(p)
        bt = max(bt, float(np.max(np.abs(rep.beta_tilde.mat - np.diag([b1, b2])))))
        if rep.beta_star is not None:
            try:
                s1, s2 = sm_optimal_meas(p)
            except ThresholdViolation:
                continue
            bs = max(bs, float(np.max(np.abs(rep.beta_star.mat - np.diag([s1, s2])))))
    return [
        Check("single-mode accessible_info vs closed form", acc, 1e-9, f"n={n}"),
        Check("single-mode beta_tilde entrywise", bt, 1e-10, f"n={n}"),
        Check("single-mode beta_star entrywise", bs, 1e-8, f"n={n}"),
    ]


def one_mode_cov(nu: float, r: float, theta: float) -> np.ndarray:
    """``nu R(theta) diag(e^{-2r}, e^{2r}) R(theta)^T``."""
    c, s = math.cos(theta), math.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    return nu * rot @ np.diag([math.exp(-2 * r), math.exp(2 * r)]) @ rot.T


def fock_envelope() -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Fixed covariances and displacement points used by the Fock suite."""
    covs = [
        one_mode_cov(nu, r, th)
        for nu, r, th in itertools.product((0.5, 1.0, 2.0), (0.0, 0.3), (0.0, 0.7))
        if not (r == 0.0 and th != 0.0)
    ]
    covs.append(one_mode_cov(0.5, 0.7, 0.4))
    pts = [np.array(p) for p in ((0.0, 0.0), (1.0, -0.5), (-0.6, 1.2), (1.5, 0.0))]
    return covs, pts


def _plus_gaussian(alpha, beta, z) -> float:
    obs = GaussianObservable.unscaled(beta)
    return outcome_density(GaussianState.centered(alpha), obs).trace_density(z)


def suite_fock(cutoff: int = fock.DEFAULT_CUTOFF) -> list[Check]:
    covs, pts = fock_envelope()
    plus = sq = 0.0
    for alpha, beta in zip(covs, covs[1:] + covs[:1]):
        for z in pts:
            plus = max(plus, abs(fock.fock_outcome_prob(alpha, beta, z, cutoff) - _plus_gaussian(alpha, beta, z)))
    for alpha in covs:
        for z1, z2 in zip(pts, pts[1:] + pts[:1]):
            sq = max(sq, abs(fock.fock_sqsq(alpha, z1, z2, cutoff) - sandwich_overlap(alpha, z1, z2)))
    return [
        Check("Fock outcome density vs Gaussian formula", plus, 1e-6, f"cutoff={cutoff}"),
        Check("Fock sqrt-sandwich overlap vs Gaussian formula", sq, 1e-5, f"cutoff={cutoff}"),
    ]


MC_REFERENCE = (
    (np.eye(2), np.eye(2)),
    (np.diag([2.0, 1.0]), 0.5 * np.eye(2)),
)


def mc_instances(seed: int, count: int) -> list[GaussianEnsemble]:
    rng = np.random.default_rng(seed)
    out = [GaussianEnsemble(g, b) for g, b in MC_REFERENCE]
    while len(out) < count:
        out.append(random_threshold_ensemble(_mode_cycle(len(out)), rng))
    return out[:count]


def mc_check(e: GaussianEnsemble, n: int, seed: int) -> tuple[float, montecarlo.McEstimate]:
    """Deviation of the MC estimate from the closed form, in standard errors."""
    rep = full_report(e)
    obs = GaussianObservable.unscaled(rep.beta_star)
    est = montecarlo.mc_mutual_info(e, obs, n, seed)
    return abs(est.value_nats - rep.accessible_info_nats) / est.stderr, est


def suite_mc(seed: int, n: int = 100_000, count: int = 5) -> list[Check]:
    worst = 0.0
    sub = np.random.SeedSequence(seed).generate_state(count, dtype=np.uint64)
    instances = mc_instances(seed, count)
    first = None
    for e, s in zip(instances, sub):
        dev, est = mc_check(e, n, int(s))
        worst = max(worst, dev)
        if first is None:
            first = (e, int(s), est.value_nats)
    e, s, v = first
    again = montecarlo.mc_mutual_info(e, GaussianObservable.unscaled(full_report(e).beta_star), n, s)
    return [
        Check("Monte Carlo vs closed form (in stderr units)", worst, 4.0, f"n={n}, instances={count}"),
        Check("Monte Carlo same-seed repeat", abs(again.value_nats - v), 0.0, "bit-exact"),
    ]


SUITES: dict[str, Callable[..., list[Check]]] = {
    "duality": suite_duality,
    "attainment": suite_attainment,
    "fock": suite_fock,
    "mc": suite_mc,
    "singlemode": suite_singlemode,
}
SEEDED = ("duality", "attainment", "mc", "singlemode")


def run_suite(name: str, *, seed: Optional[int] = None, n: Optional[int] = None, cutoff: Optional[int] = None) -> list[Check]:
    if name not in SUITES:
        raise KeyError(name)
    if name == "fock":
        return suite_fock(cutoff or fock.DEFAULT_CUTOFF)
    if seed is None:
        raise ValueError(f"suite {name!r} is randomized and needs an explicit seed")
    kwargs = {} if n is None else {"n": n}
    return SUITES[name](seed, **kwargs)
