"""Interleaved inner/outer membership loop for sectional-curvature queries.

At each level m the inner (sum-of-squares) test can certify sec >= k and the
outer (curvature-term) test can refute it; the loop walks m upwards until one
side decides.  The two hierarchies converge to the true cone from opposite
sides but need not meet at any finite level, so the loop is bounded by
``m_max`` and surfaces UNDECIDED when the budget is exhausted.  An
INCONCLUSIVE inner solve is treated as "not certified" and the loop simply
continues.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .exactmath import Rat
from .sos import NO_CERTIFICATE, YES, SosCertificate, inner_membership
from .tensorspace import LOWER, CurvOp, apply_bound_reduction
from .weitzenboeck import outer_first_failure

TRUE = "TRUE"
FALSE = "FALSE"
UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class LevelTrace:
    m: int
    inner: Optional[str]  # YES / NO_CERTIFICATE / INCONCLUSIVE / "size cap"
    outer: Optional[bool]


@dataclass
class Verdict:
    answer: str
    level: int
    witness: Union[SosCertificate, int, None]
    trace: list[LevelTrace] = field(default_factory=list)

    def trace_text(self) -> str:
        parts = []
        for entry in self.trace:
            bits = []
            if entry.inner is not None:
                bits.append(f"inner {entry.inner}")
            if entry.outer is not None:
                bits.append(f"outer {'TRUE' if entry.outer else 'FALSE'}")
            parts.append(f"m={entry.m}: " + ", ".join(bits))
        return "; ".join(parts)


def algorithm1(
    r: CurvOp,
    k: Rat = Fraction(0),
    m_max: int = 1,
    tol: float = 1e-7,
) -> Verdict:
    """Decide sec >= k by escalating inner certificates and outer refutations.

    Returns TRUE with an SOS certificate, FALSE with the violated
    curvature-term degree, or UNDECIDED with the per-level trace.  Size-cap
    errors from the inner test propagate with the level recorded in the
    trace up to that point.
    """
    if m_max < 0:
        raise ValueError("need m_max >= 0")
    shifted = apply_bound_reduction(r, Fraction(k), LOWER)
    trace: list[LevelTrace] = []
    for m in range(m_max + 1):
        inner = inner_membership(shifted, m, tol)
        if inner.status == YES:
            trace.append(LevelTrace(m, YES, None))
            return Verdict(TRUE, m, inner.certificate, trace)
        bad_p = outer_first_failure(shifted, m)
        if bad_p is not None:
            trace.append(LevelTrace(m, inner.status, False))
            return Verdict(FALSE, m, bad_p, trace)
        trace.append(LevelTrace(m, inner.status, True))
    return Verdict(UNDECIDED, m_max, None, trace)
