"""Randomized verification suites for the identities and inequalities of the tradeoff.

Every trial draws from its own generator seeded with ``seed ^ index`` and the
dimension ``dims[index % len(dims)]``, so a failing trial can be replayed alone
with ``verify --suite NAME --trial-seed SEED --dims D``.
"""

import logging
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..models.ensemble import Ensemble
from ..models.scenario import CheckOutcome, SuiteResult, TrialResult
from ..utils.errors import InvalidParams, NotInfoComplete, TradeoffLabError
from ..utils.randomness import (
    haar_unitary,
    make_rng,
    random_density_matrix,
    random_hermitian,
    random_pure_vector,
    trial_seed,
)
from .disturbance import (
    bound_f,
    bound_f2,
    cw_sandwich_check,
    entropy_defect_loss,
    eq17_lower_check,
    eq18_check,
    lemma1_identity_check,
    theorem_one_report,
)
from .ensembles import average_state, ensemble_from_povm
from .frames import (
    basis_povm,
    build_dual_frame,
    default_frame_povm,
    frame_norm_bound,
    mub_povm,
    sic_povm,
)
from .info_gain import info_equivalence_report
from .instruments import random_instrument
from .irreducibility import eta, eta_exhaustive, path_value
from .qmat import purify, relative_entropy, trace_norm
from .recovery import RecoveryOptimizer, optimize_recovery_average, optimize_recovery_entanglement

logger = logging.getLogger(__name__)

TrialFn = Callable[[np.random.Generator, int], list[CheckOutcome]]


def at_least(name: str, slack: float, tol: float) -> CheckOutcome:
    """Inequality check: passes when ``slack >= -tol``."""
    return CheckOutcome(name, bool(slack >= -tol), float(slack), 0.0, float(slack))


def at_most(name: str, residual: float, tol: float) -> CheckOutcome:
    """Identity check: passes when ``residual <= tol``; slack is the margin left."""
    return CheckOutcome(name, bool(residual <= tol), float(residual), tol, float(tol - residual))


def _labels(k: int) -> list[str]:
    return [f"x{i}" for i in range(k)]


def random_pure_ensemble(rng: np.random.Generator, d: int, k: int) -> Ensemble:
    vectors = [random_pure_vector(rng, d) for _ in range(k)]
    return Ensemble.from_vectors(_labels(k), rng.dirichlet(np.ones(k)), vectors)


def random_sparse_ensemble(rng: np.random.Generator, d: int, k: int) -> Ensemble:
    """Pure ensemble whose vectors live on random coordinate subsets, so some overlaps vanish."""
    vectors = []
    for _ in range(k):
        support = rng.random(d) < 0.6
        support[rng.integers(d)] = True
        vectors.append(random_pure_vector(rng, d) * support)
    return Ensemble.from_vectors(_labels(k), rng.dirichlet(np.ones(k)), vectors)


def random_mixed_ensemble(rng: np.random.Generator, d: int, k: int) -> Ensemble:
    states = [random_density_matrix(rng, d, int(rng.integers(1, d + 1))) for _ in range(k)]
    return Ensemble.from_states(_labels(k), rng.dirichlet(np.ones(k)), states)


def random_test_instrument(rng: np.random.Generator, d: int, single_kraus: Optional[bool] = None):
    """At most 3 outcomes with at most 2 Kraus operators each."""
    n_outcomes = int(rng.integers(1, 4))
    if single_kraus is None:
        kraus = int(rng.integers(1, 3))
    else:
        kraus = 1 if single_kraus else 2
    if n_outcomes * kraus < 2:
        n_outcomes = 2
    return random_instrument(rng, d, n_outcomes, kraus)


def _fast_optimizer() -> RecoveryOptimizer:
    return RecoveryOptimizer(tol=1e-6, max_iter=2000)


# -- trials ------------------------------------------------------------------


def lemma1_trial(rng: np.random.Generator, d: int) -> list[CheckOutcome]:
    s = random_pure_ensemble(rng, d, int(rng.integers(1, 6)))
    instr = random_test_instrument(rng, d)
    return [at_most("lemma1 identity", lemma1_identity_check(s, instr), 1e-8)]


def _zero_plus_ensemble(d: int) -> Ensemble:
    zero = np.zeros(d, dtype=complex)
    zero[0] = 1.0
    plus = np.zeros(d, dtype=complex)
    plus[:2] = 1 / np.sqrt(2)
    return Ensemble.from_vectors(["0", "+"], [0.5, 0.5], [zero, plus])


def theorem1_trial(rng: np.random.Generator, d: int) -> list[CheckOutcome]:
    s = _zero_plus_ensemble(d)
    instr = random_test_instrument(rng, d, single_kraus=bool(rng.random() < 0.5))
    report = theorem_one_report(s, instr, optimizer=_fast_optimizer())
    checks = [
        at_least("fidelity order", report.slack_fidelities, 1e-7),
        at_least("disturbance lower bound", report.slack_disturbance, 1e-7),
    ]
    if report.slack_rhs is not None:
        checks.append(at_least("f bound", report.slack_rhs, 1e-7))
    for name, check in (("delta-chi bound", report.lemma2), ("complement bound", report.lemma3)):
        if check.slack is not None:
            checks.append(at_least(name, check.slack, 1e-7))
    return checks


def eq9_trial(rng: np.random.Generator, d: int) -> list[CheckOutcome]:
    s = random_pure_ensemble(rng, d, int(rng.integers(2, 5)))
    instr = random_test_instrument(rng, d)
    report = info_equivalence_report(
        average_state(s), instr, ensemble=s, search_budget=200, seed=int(rng.integers(2**31))
    )
    checks = [
        at_least("holevo bound", report.iota - report.mutual_info, 1e-9),
        at_least("accessible info", report.holevo_slack, 1e-9),
        at_least("norm bound", report.norm_slack, 1e-7),
    ]
    if not report.bound_saturated:
        checks.append(at_least("frame upper bound", report.upper_slack, 1e-7))
    return checks


def eq15_trial(rng: np.random.Generator, d: int) -> list[CheckOutcome]:
    s = random_pure_ensemble(rng, d, int(rng.integers(2, 4)))
    rho_s = average_state(s)
    instr = random_test_instrument(rng, d)
    optimizer = _fast_optimizer()
    recovery, f_e = optimize_recovery_entanglement(rho_s, instr, optimizer=optimizer)
    other = ensemble_from_povm(purify(rho_s), basis_povm(haar_unitary(rng, d)))
    checks = []
    for name, ensemble in (("sampled ensemble", s), ("basis decomposition", other)):
        _, f_av = optimize_recovery_average(
            ensemble, instr, optimizer=optimizer, warm_start=recovery
        )
        checks.append(at_least(f"f_e <= f_av ({name})", f_av - f_e, 1e-7))
    return checks


def eq17_trial(rng: np.random.Generator, d: int) -> list[CheckOutcome]:
    rho = random_density_matrix(rng, d, int(rng.integers(1, d + 1)))
    instr = random_test_instrument(rng, d)
    slack = eq17_lower_check(rho, instr, _fast_optimizer())
    return [at_least("delta >= (1-f_e)^2/4", slack, 1e-7)]


def eq18_trial(rng: np.random.Generator, d: int) -> list[CheckOutcome]:
    rho = random_density_matrix(rng, d)
    instr = random_test_instrument(rng, d, single_kraus=bool(rng.random() < 0.5))
    slack, single = eq18_check(rho, instr)
    checks = [at_least("delta >= iota", slack, 1e-9)]
    if single:
        checks.append(at_most("single-Kraus equality", abs(slack), 1e-8))
    return checks


def eq22_trial(rng: np.random.Generator, d: int) -> list[CheckOutcome]:
    k = int(rng.integers(1, 5))
    if rng.random() < 0.5:
        s = random_pure_ensemble(rng, d, k)
    else:
        s = random_mixed_ensemble(rng, d, k)
    instr = random_test_instrument(rng, d)
    delta_chi, decomposition = entropy_defect_loss(s, instr)
    return [
        at_most("output chi decomposition", decomposition.identity_residual, 1e-9),
        at_most("loss forms agree", abs(delta_chi - decomposition.delta_chi_alt), 1e-9),
        at_least("delta chi >= 0", delta_chi, 1e-9),
    ]


def cw_trial(rng: np.random.Generator, d: int) -> list[CheckOutcome]:
    if rng.random() < 0.25:
        rho = np.eye(d, dtype=complex) / d
    else:
        rho = random_density_matrix(rng, d)
    instr = random_test_instrument(rng, d)
    lower, upper = cw_sandwich_check(rho, instr)
    return [
        at_least("delta >= delta chi", lower, 1e-7),
        at_least("delta <= 2 delta chi", upper, 1e-7),
    ]


def eta_trial(rng: np.random.Generator, d: int) -> list[CheckOutcome]:
    k = int(rng.integers(2, 6))
    s = random_sparse_ensemble(rng, d, k)
    n_max = min(k * k, k + 2)
    result = eta(s, n_max)
    brute = eta_exhaustive(s, n_max)
    checks = [at_most("dp equals exhaustive", abs(result.eta - brute), 1e-12)]
    if result.eta > 0:
        witness = path_value(s, result.witness_path)
        checks.append(at_most("witness attains eta", abs(witness - result.eta), 1e-12))
    return checks


def frame_trial(rng: np.random.Generator, d: int) -> list[CheckOutcome]:
    povm = default_frame_povm(d, seed=int(rng.integers(2**31)))
    if d in (2, 3) and rng.random() < 0.5:
        povm = mub_povm(d)
    frame = build_dual_frame(povm)
    x = random_hermitian(rng, d)
    error = float(np.max(np.abs(frame.reconstruct(x) - x)))
    s = random_pure_ensemble(rng, d, int(rng.integers(2, 5)))
    lhs, rhs = frame_norm_bound(s, frame)
    return [at_most("dual reconstruction", error, 1e-8), at_least("norm bound", rhs - lhs, 1e-7)]


def pinsker_trial(rng: np.random.Generator, d: int) -> list[CheckOutcome]:
    rho = random_density_matrix(rng, d, int(rng.integers(1, d + 1)))
    sigma = random_density_matrix(rng, d)
    distance = trace_norm(rho - sigma)
    divergence = relative_entropy(rho, sigma)
    return [at_least("pinsker", divergence - distance**2 / (2 * np.log(2)), 1e-9)]


# -- fixed cases run once per suite -------------------------------------------


def eta_hand_cases() -> list[CheckOutcome]:
    zero, one = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    cases = (
        ("eta {0,+}", [zero, plus], np.sqrt(2) / 4),
        ("eta {0,1,+}", [zero, one, plus], np.sqrt(2) / 6),
        ("eta {0,1}", [zero, one], 0.0),
    )
    checks = []
    for name, vectors, expected in cases:
        k = len(vectors)
        s = Ensemble.from_vectors(_labels(k), np.full(k, 1.0 / k), vectors)
        checks.append(at_most(name, abs(eta(s).eta - expected), 1e-12))
    tilted = [zero, np.array([np.cos(0.4), np.sin(0.4)]), np.array([np.cos(1.3), 1j * np.sin(1.3)])]
    s = Ensemble.from_vectors(_labels(3), [0.2, 0.3, 0.5], tilted)
    result = eta(s)
    checks.append(
        at_most(
            f"eta at n_max = {result.n_max} vs exhaustive",
            abs(result.eta - eta_exhaustive(s, result.n_max)),
            1e-12,
        )
    )
    return checks


def frame_fixed_cases() -> list[CheckOutcome]:
    rng = make_rng(0)
    checks = []
    for name, povm in (("3-MUB qubit", mub_povm(2)), ("qubit SIC", sic_povm(2))):
        frame = build_dual_frame(povm)
        samples = [random_hermitian(rng, 2) for _ in range(20)]
        errors = [np.max(np.abs(frame.reconstruct(x) - x)) for x in samples]
        checks.append(at_most(f"reconstruction {name}", float(max(errors)), 1e-8))
    try:
        build_dual_frame(mub_povm(2, 2))
        rejected = False
    except NotInfoComplete:
        rejected = True
    checks.append(CheckOutcome("two-basis qubit POVM rejected", rejected))
    return checks


def bound_fixed_cases() -> list[CheckOutcome]:
    return [
        at_most("f at zero", abs(bound_f(0.0, 2, 2)), 1e-15),
        at_most("f2(1/4) with N = d = 2", abs(bound_f2(0.25, 2, 2) - 12.0), 1e-12),
    ]


@dataclass(frozen=True)
class SuiteSpec:
    """A named suite: per-trial function, default trial count, optional fixed cases."""

    name: str
    description: str
    trial: TrialFn
    default_trials: int
    fixed: Optional[Callable[[], list[CheckOutcome]]] = None


SUITES: dict[str, SuiteSpec] = {
    spec.name: spec
    for spec in (
        SuiteSpec("lemma1", "delta = Delta chi + chi of the complement", lemma1_trial, 200),
        SuiteSpec(
            "theorem1",
            "fidelity and disturbance chain with its f bound",
            theorem1_trial,
            50,
            bound_fixed_cases,
        ),
        SuiteSpec("eq9", "I(X:X-hat) <= I_acc <= iota <= t(c sqrt(2 I))", eq9_trial, 50),
        SuiteSpec("eq15", "F_e(rho_s) <= F_av(s) over decompositions", eq15_trial, 30),
        SuiteSpec("eq17", "delta >= (1 - F_e)^2 / 4", eq17_trial, 50),
        SuiteSpec("eq18", "delta >= iota, equality for single-Kraus", eq18_trial, 200),
        SuiteSpec("eq22", "chi(M(s)) = I(X:X-hat) + sum_m p(m) chi(s_m)", eq22_trial, 200),
        SuiteSpec("cw", "Delta chi <= delta <= 2 Delta chi", cw_trial, 50),
        SuiteSpec(
            "eta-oracle", "walk DP against exhaustive enumeration", eta_trial, 50, eta_hand_cases
        ),
        SuiteSpec(
            "frame", "dual-frame reconstruction and norm bound", frame_trial, 20, frame_fixed_cases
        ),
        SuiteSpec("pinsker", "D(rho||sigma) >= ||rho - sigma||_1^2 / (2 ln 2)", pinsker_trial, 200),
    )
}

SUITE_NAMES = tuple(SUITES) + ("all",)


def reproduction_command(suite: str, seed: int, dim: int) -> str:
    return f"tradeoff-lab verify --suite {suite} --trial-seed {seed} --dims {dim}"


def _run_trial(spec: SuiteSpec, index: int, seed: int, dim: int) -> TrialResult:
    started = time.perf_counter()
    rng = make_rng(seed)
    error = None
    checks: list[CheckOutcome] = []
    try:
        checks = spec.trial(rng, dim)
    except TradeoffLabError as exc:
        error = f"{type(exc).__name__}: {exc}"
    result = TrialResult(
        index=index,
        seed=seed,
        checks=tuple(checks),
        runtime=time.perf_counter() - started,
        error=error,
        reproduce=reproduction_command(spec.name, seed, dim),
    )
    if result.passed:
        logger.info("%s trial %d (seed %d, d=%d) passed", spec.name, index, seed, dim)
    else:
        failed = [c.name for c in result.checks if not c.passed]
        logger.error(
            "%s trial %d failed %s%s; reproduce with: %s",
            spec.name,
            index,
            failed,
            f" ({error})" if error else "",
            result.reproduce,
        )
    return result


def run_suite(
    name: str,
    trials: Optional[int] = None,
    seed: int = 0,
    dims: Sequence[int] = (2, 3),
    threads: int = 1,
    replay_seed: Optional[int] = None,
) -> SuiteResult:
    """Run one named suite.

    Args:
        name: Suite name from SUITES.
        trials: Number of random trials; the suite default when None.
        seed: Suite seed; trial i uses ``seed ^ i``.
        dims: Dimensions cycled over the trials.
        threads: Trials run concurrently when > 1; results stay in trial order.
        replay_seed: Run exactly one trial with this seed in ``dims[0]``.

    Raises:
        InvalidParams: For an unknown suite, empty dims or a negative trial count.
    """
    if name not in SUITES:
        raise InvalidParams(f"unknown suite {name!r}; known: {', '.join(SUITE_NAMES)}")
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 2 for d in dims):
        raise InvalidParams(f"dims must be a non-empty list of integers >= 2, got {dims}")
    spec = SUITES[name]
    started = time.perf_counter()

    if replay_seed is not None:
        results = (_run_trial(spec, 0, int(replay_seed), dims[0]),)
        return SuiteResult(name, int(replay_seed), dims[:1], results, time.perf_counter() - started)

    n = spec.default_trials if trials is None else int(trials)
    if n < 0:
        raise InvalidParams(f"trials must be >= 0, got {n}")
    jobs = [(i, trial_seed(seed, i), dims[i % len(dims)]) for i in range(n)]
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda job: _run_trial(spec, *job), jobs))
    else:
        results = [_run_trial(spec, *job) for job in jobs]

    if spec.fixed is not None:
        fixed = TrialResult(
            index=-1,
            seed=seed,
            checks=tuple(spec.fixed()),
            reproduce=f"tradeoff-lab verify --suite {name} --trials 0",
        )
        results.insert(0, fixed)
    result = SuiteResult(name, seed, dims, tuple(results), time.perf_counter() - started)
    logger.info(
        "suite %s: %d trials, %d failures in %.1fs",
        name,
        n,
        len(result.failures),
        result.runtime,
    )
    return result


def run_suites(
    name: str,
    trials: Optional[int] = None,
    seed: int = 0,
    dims: Sequence[int] = (2, 3),
    threads: int = 1,
    replay_seed: Optional[int] = None,
) -> list[SuiteResult]:
    """``run_suite`` for one name, or every suite in order for ``all``."""
    if name == "all":
        if replay_seed is not None:
            raise InvalidParams("--trial-seed needs a single suite, not 'all'")
        return [run_suite(n, trials, seed, dims, threads) for n in SUITES]
    return [run_suite(name, trials, seed, dims, threads, replay_seed)]
