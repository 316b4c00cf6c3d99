"""Central numerical tolerances.

All thresholds are multiplied by a global scale read from the
``KREIN_WEYL_TOL`` environment variable (default 1). The CLI can override
the scale with :func:`set_tolerance_scale`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

__all__ = ["Tolerances", "tol", "set_tolerance_scale", "tolerance_scale"]


@dataclass(frozen=True)
class Tolerances:
    """Default thresholds before scaling.

    Attributes
    ----------
    rank : float
        Relative singular-value cutoff for spans and null spaces.
    span : float
        Largest admissible sine of a principal angle for span equality.
    form : float
        Relative band around zero when counting signs of Hermitian forms.
    isometry : float
        Absolute cutoff for the zero form on an orthonormal graph basis.
    colligation : float
        Residual threshold of the colligation identities.
    weyl : float
        Relative least-squares residual accepted for a Weyl evaluation.
    kernel : float
        Relative negative-eigenvalue threshold for kernel Gram matrices.
    hankel : float
        Relative singular-value cutoff for Hankel ranks.
    spectrum : float
        Distance below which a point is identified with an eigenvalue.
    cond_cap : float
        Condition-number cap for "boundedly invertible"; never scaled.
    """

    rank: float = 1e-10
    span: float = 1e-8
    form: float = 1e-10
    isometry: float = 1e-9
    colligation: float = 1e-9
    weyl: float = 1e-8
    kernel: float = 1e-9
    hankel: float = 1e-9
    spectrum: float = 1e-8
    cond_cap: float = 1e12

    def scaled(self, factor: float) -> "Tolerances":
        changes = {f.name: getattr(self, f.name) * factor
                   for f in fields(self) if f.name != "cond_cap"}
        return replace(self, **changes)


def _env_scale() -> float:
    raw = os.environ.get("KREIN_WEYL_TOL", "1")
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(f"KREIN_WEYL_TOL must be a positive number, got {raw!r}") from exc
    if not value > 0:
        raise ValueError(f"KREIN_WEYL_TOL must be positive, got {value}")
    return value


_DEFAULTS = Tolerances()
_scale = _env_scale()


def tolerance_scale() -> float:
    """Return the active global scale."""
    return _scale


def set_tolerance_scale(value: float | None) -> None:
    """Set the global scale; ``None`` re-reads the environment."""
    global _scale
    if value is None:
        _scale = _env_scale()
    elif not value > 0:
        raise ValueError("tolerance scale must be positive")
    else:
        _scale = float(value)


def tol() -> Tolerances:
    """Return the active (scaled) tolerances."""
    return _DEFAULTS.scaled(_scale)
