"""Full analysis of one instance: information gain, disturbance and every check."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..models.reports import TradeoffReport
from ..models.scenario import Instance
from ..utils.tolerances import TAU_EIG
from .disturbance import (
    cw_sandwich_check,
    disturbance_report,
    entropy_defect_loss,
    theorem_one_report,
)
from .ensembles import average_state, entropy_defect
from .info_gain import (
    DEFAULT_SEARCH_BUDGET,
    info_equivalence_report,
    mutual_information,
    quantum_info_gain,
)
from .instruments import is_single_kraus
from .irreducibility import PRACTICAL_MAX_STATES
from .qmat import entropy_of_matrix
from .recovery import RecoveryOptimizer
from .settings_manager import SettingsManager

logger = logging.getLogger(__name__)


@dataclass
class AnalysisOptions:
    """Knobs of ``analyze_instance``."""

    search_budget: int = DEFAULT_SEARCH_BUDGET
    seed: int = 0
    with_info: bool = True
    n_max: Optional[int] = None
    recovery_tol: float = 1e-5
    recovery_max_iter: int = 5000
    threads: int = 1
    strict: bool = False

    @classmethod
    def from_settings(cls, settings: SettingsManager) -> "AnalysisOptions":
        return cls(
            search_budget=settings.get_search_budget(),
            recovery_tol=settings.get_recovery_tol(),
            recovery_max_iter=settings.get_recovery_max_iter(),
            threads=settings.get_threads(),
        )

    def optimizer(self) -> RecoveryOptimizer:
        return RecoveryOptimizer(
            tol=self.recovery_tol,
            max_iter=self.recovery_max_iter,
            max_workers=self.threads,
            strict=self.strict,
        )


def analyze_instance(
    instance: Instance, options: Optional[AnalysisOptions] = None
) -> TradeoffReport:
    """Compute every quantity of the tradeoff for one instance.

    The irreducibility measures, the disturbance chain and the pure-ensemble
    identity are included for pure ensembles only; the Christandl-Winter
    sandwich only when the average state has full rank.
    """
    options = options or AnalysisOptions()
    s, instr = instance.ensemble, instance.instrument
    rho_s = average_state(s)
    logger.info("analyzing %s", instance.name)

    _, mutual = mutual_information(s, instr)
    iota = quantum_info_gain(rho_s, instr)
    disturbance = disturbance_report(s, instr, options.optimizer())
    _, decomposition = entropy_defect_loss(s, instr)

    irreducibility, theorem_one, lemma1 = None, None, None
    if s.is_pure:
        lemma1 = abs(disturbance.delta - disturbance.delta_chi - disturbance.chi_complement)
        if len(s) <= PRACTICAL_MAX_STATES:
            theorem_one = theorem_one_report(
                s, instr, disturbance=disturbance, n_max=options.n_max
            )
            irreducibility = theorem_one.irreducibility
        else:
            logger.warning(
                "%d states exceed the irreducibility search limit of %d; skipping",
                len(s),
                PRACTICAL_MAX_STATES,
            )

    cw_slacks = None
    if np.min(rho_s.eigenvalues()) >= TAU_EIG:
        cw_slacks = cw_sandwich_check(rho_s, instr)

    info = None
    if options.with_info:
        info = info_equivalence_report(
            rho_s, instr, ensemble=s, search_budget=options.search_budget, seed=options.seed
        )

    f_e = min(1.0, disturbance.f_e)
    return TradeoffReport(
        name=instance.name,
        dim=s.dim,
        n_states=len(s),
        n_outcomes=instr.n_outcomes,
        pure_ensemble=s.is_pure,
        single_kraus=is_single_kraus(instr),
        entropy=entropy_of_matrix(rho_s.matrix),
        chi=entropy_defect(s),
        mutual_info=mutual,
        iota=iota,
        disturbance=disturbance,
        decomposition=decomposition,
        slack_17=disturbance.delta - (1.0 - f_e) ** 2 / 4,
        slack_18=disturbance.delta - iota,
        irreducibility=irreducibility,
        theorem_one=theorem_one,
        info=info,
        cw_slacks=cw_slacks,
        lemma1_slack=lemma1,
    )
