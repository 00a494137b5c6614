"""Result records of the deciders and their JSON form."""
import enum
from dataclasses import dataclass, field

from levy.extended import to_json


class Verdict(str, enum.Enum):
    YES = 'Yes'
    NO = 'No'
    UNDETERMINED = 'Undetermined'


class Failing(str, enum.Enum):
    GAUSSIAN = 'Gaussian'
    NEGATIVE_JUMPS = 'NegativeJumps'
    DRIFT = 'Drift'


class Decision(str, enum.Enum):
    NO_RUIN_FROM = 'NoRuinFrom'
    RUIN_EVERYWHERE = 'RuinEverywhere'
    UNDETERMINED = 'Undetermined'


class Branch(str, enum.Enum):
    SIGMA_POSITIVE = 'SigmaPositive'
    SIGMA_ZERO = 'SigmaZero'


@dataclass(frozen=True)
class SubordinatorCertificate:
    """Why a one-dimensional process is, or is not, a subordinator.

    ``jumps_ok`` is the verdict on negative jumps; for the two-dimensional
    test it comes from the quadrant conditions, and ``region_bullet`` names
    the one that held (1, 2 or 3).
    """

    verdict: Verdict
    gaussian_ok: bool = None
    jumps_ok: bool = None
    negative_jumps_mass: float = None
    drift_d: float = None
    failing_condition: Failing = None
    u: float = None
    region_bullet: int = None
    warnings: tuple = ()

    @classmethod
    def undetermined(cls, message, u=None):
        return cls(Verdict.UNDETERMINED, u=u, warnings=(message,))

    def to_json(self):
        return {
            'verdict': self.verdict.value,
            'u': to_json(self.u),
            'gaussian_ok': self.gaussian_ok,
            'jumps_ok': self.jumps_ok,
            'negative_jumps_mass': to_json(self.negative_jumps_mass),
            'drift_d': to_json(self.drift_d),
            'failing_condition': (
                self.failing_condition.value
                if self.failing_condition else None
            ),
            'region_bullet': self.region_bullet,
            'warnings': list(self.warnings),
        }


def conclude(gaussian_ok, jumps_ok, drift_ok):
    """Verdict and first failing condition; ``None`` means undecided."""
    for ok, failing in (
        (gaussian_ok, Failing.GAUSSIAN),
        (jumps_ok, Failing.NEGATIVE_JUMPS),
        (drift_ok, Failing.DRIFT),
    ):
        if ok is None:
            return Verdict.UNDETERMINED, None
        if not ok:
            return Verdict.NO, failing
    return Verdict.YES, None


@dataclass(frozen=True)
class RuinReport:
    decision: Decision
    branch: Branch
    u_star: float = None
    thetas: object = None
    feasible_u: list = field(default_factory=list)
    certificate: SubordinatorCertificate = None
    literal_u_prime: float = None
    drift_lhs: object = None
    warnings: tuple = ()

    def to_json(self):
        return {
            'decision': self.decision.value,
            'u_star': to_json(self.u_star),
            'branch': self.branch.value,
            'thetas': self.thetas.to_json() if self.thetas else None,
            'feasible_u': [piece.to_json() for piece in self.feasible_u],
            'certificate': (
                self.certificate.to_json() if self.certificate else None
            ),
            'literal_u_prime': to_json(self.literal_u_prime),
            'drift_lhs': self.drift_lhs.to_json() if self.drift_lhs else None,
            'warnings': list(self.warnings),
        }


@dataclass(frozen=True)
class FiniteVariationReport:
    decision: Decision
    d_xi: float
    d_eta: float
    case: int = None
    u_star: float = None

    def to_json(self):
        return {
            'decision': self.decision.value,
            'd_xi': to_json(self.d_xi),
            'd_eta': to_json(self.d_eta),
            'case': self.case,
            'u_star': to_json(self.u_star),
        }


MEAN_CRITERION_NOTE = (
    'ξ_t → +∞ is decided from E[ξ₁] only; the general drift-to-infinity '
    'criterion is not implemented'
)


@dataclass(frozen=True)
class ConvergenceReport:
    verdict: Verdict
    mean_xi: float = None
    em_integral: float = None
    note: str = MEAN_CRITERION_NOTE
    warnings: tuple = ()

    def to_json(self):
        return {
            'verdict': self.verdict.value,
            'mean_xi': to_json(self.mean_xi),
            'em_integral': to_json(self.em_integral),
            'note': self.note,
            'warnings': list(self.warnings),
        }


@dataclass(frozen=True)
class StationarityReport:
    verdict: Verdict
    convergence: ConvergenceReport = None
    warnings: tuple = ()

    def to_json(self):
        return {
            'verdict': self.verdict.value,
            'convergence': (
                self.convergence.to_json() if self.convergence else None
            ),
            'warnings': list(self.warnings),
        }
