"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI reports
alongside the message.
"""

from __future__ import annotations


class BetaTilesError(Exception):
    code = "error"


class DegreeTooSmall(BetaTilesError):
    code = "degree_too_small"


class NotIrreducible(BetaTilesError):
    code = "not_irreducible"


class NotPisot(BetaTilesError):
    code = "not_pisot"


class PrecisionExhausted(BetaTilesError):
    code = "precision_exhausted"


class NotIntegral(BetaTilesError):
    code = "not_integral"


class OutOfDomain(BetaTilesError):
    code = "out_of_domain"


class CycleNotFound(BetaTilesError):
    code = "cycle_not_found"


class NotInHalfOpenUnit(OutOfDomain):
    code = "not_in_half_open_unit"


class NotBetaRational(BetaTilesError):
    code = "not_beta_rational"


class WrongInterval(BetaTilesError):
    code = "wrong_interval"


class LevelMismatch(BetaTilesError):
    code = "level_mismatch"


class LevelTooHigh(BetaTilesError):
    code = "level_too_high"


class QMViolated(BetaTilesError):
    code = "qm_violated"


class BoxTooLarge(BetaTilesError):
    code = "box_too_large"


class BadParameters(BetaTilesError):
    code = "bad_parameters"


class IterationCapExceeded(BetaTilesError):
    code = "iteration_cap_exceeded"


class ConstructionFailed(BetaTilesError):
    code = "construction_failed"


class LevelTooLow(BetaTilesError):
    code = "level_too_low"
