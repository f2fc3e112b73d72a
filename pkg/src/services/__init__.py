"""Services for tradeoff-lab."""

from .analysis import AnalysisOptions, analyze_instance
from .disturbance import (
    bound_f,
    bound_f1,
    bound_f2,
    complement_ensemble_chi,
    cw_sandwich_check,
    disturbance_report,
    entropy_defect_loss,
    eq17_lower_check,
    eq18_check,
    lemma1_identity_check,
    quantum_disturbance,
    theorem_one_report,
)
from .info_gain import (
    accessible_info_lower,
    info_equivalence_report,
    mutual_information,
    quantum_info_gain,
    t_bound,
)
from .instance_io import load_instance, parse_instance, write_instance
from .irreducibility import eta, eta_exhaustive, zeta
from .recovery import (
    RecoveryOptimizer,
    optimize_recovery_average,
    optimize_recovery_entanglement,
    petz_recovery,
)
from .settings_manager import SettingsManager

__all__ = [
    "AnalysisOptions",
    "analyze_instance",
    "quantum_disturbance",
    "entropy_defect_loss",
    "complement_ensemble_chi",
    "lemma1_identity_check",
    "bound_f",
    "bound_f1",
    "bound_f2",
    "theorem_one_report",
    "eq17_lower_check",
    "eq18_check",
    "cw_sandwich_check",
    "disturbance_report",
    "mutual_information",
    "quantum_info_gain",
    "accessible_info_lower",
    "t_bound",
    "info_equivalence_report",
    "load_instance",
    "parse_instance",
    "write_instance",
    "eta",
    "zeta",
    "eta_exhaustive",
    "RecoveryOptimizer",
    "optimize_recovery_entanglement",
    "optimize_recovery_average",
    "petz_recovery",
    "SettingsManager",
]
