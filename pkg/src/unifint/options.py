from dataclasses import dataclass, replace


@dataclass(frozen=True)
class EvalConfig:
    """Tolerances and truncation controls shared by every evaluator.

    Parameters
    ----------
    tol : float
        Target relative accuracy of a single evaluation.
    max_terms : int
        Cap on the number of series steps (residue series and pFq).
    max_panels : int
        Cap on the number of panels an adaptive quadrature may create.
    t_max : float
        Initial half-height of the truncated Mellin-Barnes contour.
    t_max_limit : float
        Largest half-height the contour integrator may double up to.
    contour_c : float or None
        Abscissa of the contour; ``None`` picks the default abscissa.
    """

    tol: float = 1e-10
    max_terms: int = 10_000
    max_panels: int = 4000
    t_max: float = 8.0
    t_max_limit: float = 4096.0
    contour_c: float | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if self.max_terms < 1 or self.max_panels < 1:
            raise ValueError("max_terms and max_panels must be positive")
        if not 0 < self.t_max <= self.t_max_limit:
            raise ValueError("need 0 < t_max <= t_max_limit")

    def with_tol(self, tol):
        return replace(self, tol=tol)


DEFAULT_CONFIG = EvalConfig()
