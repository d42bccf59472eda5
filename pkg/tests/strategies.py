"""Random problem instances for the property and statistical tests."""

from typing import List, Optional, Tuple

import numpy as np
from hypothesis import strategies as st

from app.models.schemas.dlc import DlcParams

# Distance kept from x_L* regime boundaries in the comparison sample
X_MARGIN = 1e-3


@st.composite
def dlc_params(draw, risk: bool = True) -> DlcParams:
    """Valid instances whose first-best allocations lie inside (0, 1).

    The loss gap is capped so the high type still values its efficient
    allocation above the low type's valuation of it.
    """
    theta_low = draw(st.floats(0.5, 2.0))
    spread = draw(st.floats(0.1, 2.0))
    m = draw(st.floats(0.0, 1.0)) if risk else 0.0
    loss_low = draw(st.floats(0.0, 1.0)) if risk else 0.0
    gap_cap = 1.0 if m == 0.0 else min(1.0, 0.4 * spread / m)
    loss_high = loss_low + draw(st.floats(0.0, gap_cap)) if risk else 0.0
    top = theta_low + spread + m * loss_high
    zeta = top / draw(st.floats(0.3, 0.95))
    return DlcParams(
        theta_low=theta_low,
        theta_high=theta_low + spread,
        zeta=zeta,
        m=m,
        loss_low=loss_low,
        loss_high=loss_high,
        prior_high=draw(st.floats(0.05, 0.95)),
    )


def risk_dominant_window(
    theta_low: float,
    theta_high: float,
    zeta: float,
    m: float,
    loss_low: float,
    loss_high: float,
) -> Optional[Tuple[float, float]]:
    """Priors above p_bar where the reduced menu needs no participation guard.

    Inside the window x_L* is interior, the high type keeps a positive rent,
    the no-risk x_L is interior and the t_H side condition holds. None when
    the instance has no such priors.
    """
    a = theta_low + m * loss_low
    b = theta_high + m * loss_high
    p_bar = loss_low / loss_high
    x_high = b / zeta

    def prior_at(x: float) -> float:
        # x_L*(p) = (a − p·b)/((1 − p)ζ) is decreasing in p
        return (a - x * zeta) / (b - x * zeta)

    rent_gap = m * (loss_high - loss_low)
    floor = rent_gap / (theta_high - theta_low + rent_gap) + X_MARGIN
    ceiling = (x_high - p_bar) / (1.0 - p_bar) - X_MARGIN
    if ceiling <= floor:
        return None
    lo = max(p_bar + 0.01, prior_at(ceiling))
    hi = min(prior_at(floor), theta_low / theta_high - 0.01, 0.95)
    if hi - lo < 0.01:
        return None
    return lo, hi


def _comparison_params(rng: np.random.Generator, below: bool) -> Optional[DlcParams]:
    theta_low = rng.uniform(0.5, 2.0)
    spread = rng.uniform(0.1, 2.0)
    m = rng.uniform(0.2, 1.0)
    ratio = rng.uniform(0.0, 0.5)
    loss_high = min(rng.uniform(0.1, 1.0), 0.4 * spread / (m * (1.0 - ratio)))
    loss_low = ratio * loss_high
    theta_high = theta_low + spread
    zeta = (theta_high + m * loss_high) / rng.uniform(0.3, 0.95)

    if below:
        if ratio < 0.05:
            return None
        prior = rng.uniform(0.02, ratio - 0.01)
    else:
        window = risk_dominant_window(
            theta_low, theta_high, zeta, m, loss_low, loss_high
        )
        if window is None:
            return None
        prior = rng.uniform(*window)
    return DlcParams(
        theta_low=float(theta_low),
        theta_high=float(theta_high),
        zeta=float(zeta),
        m=float(m),
        loss_low=float(loss_low),
        loss_high=float(loss_high),
        prior_high=float(prior),
    )


def comparison_sample(
    count: int, seed: int = 0, below_share: float = 0.25
) -> List[DlcParams]:
    """Seeded instances for ordering statistics.

    A ``below_share`` of them have p below p_bar, where the t_H ordering is
    not stated. The rest sit in the risk-dominant window, so every ordering
    there is tested rather than skipped.
    """
    rng = np.random.default_rng(seed)
    sample: List[DlcParams] = []
    while len(sample) < count:
        params = _comparison_params(rng, below=bool(rng.random() < below_share))
        if params is not None:
            sample.append(params)
    return sample
