"""Named parameter profiles for the contraction framework and the inner
procedure.

The "paper" profile carries the published constants (only meaningful
asymptotically); the "desk" profile keeps every structural relation the
correctness arguments need while shrinking the constants so bench-scale
instances are non-degenerate.  Certificate soundness at desk scale is
established by the brute-force oracles in the test suite, not by the
constants themselves.
"""

import math
from dataclasses import dataclass


def _lnln(m: int) -> float:
    return max(1.0, math.log(math.log(max(m, 3)) + 2))


@dataclass(frozen=True)
class Profile:
    name: str
    gamma_coeff: float        # gamma = max(1, ceil(coeff * ln m)); 0 -> 1
    c1: float                 # passive supervertex threshold coefficient
    s0_factor: float          # s0 = ceil(s0_factor * gamma * delta)
    k_groups: int             # number of parallel flow problems
    scale_divisor: int        # 1/scale applied when combining preflows
    tau: float = 0.1
    keep_fraction: float = 0.8     # bundle kept iff routed >= frac * sigma
    w_phase: int = 3               # per-phase width (remainder carry slack)
    u_excess_coeff: float = 1.0    # U for the scaling runs ~ coeff * ln m_G
    u_final_divisor: int = 20      # U_final = max(1, s // (divisor * delta))
    h_coeff: float = 17.0          # h ~ coeff * ln(m_G) * lnln(m_G)
    z_divisor: int = 10            # paper bundle size delta/10
    # fixed framework fractions (trim 2/5, shave 1/2, core 1/4, stop 1/20)
    trim_num: int = 2
    trim_den: int = 5
    stop_fraction_den: int = 20

    # -- derived parameters -------------------------------------------------

    def gamma(self, m_g: int) -> int:
        if self.gamma_coeff <= 0:
            return 1
        return max(1, math.ceil(self.gamma_coeff * math.log(max(m_g, 2))))

    def s0(self, delta: int, m_g: int) -> int:
        return max(1, math.ceil(self.s0_factor * self.gamma(m_g) * delta))

    def passive_threshold(self, delta: int, m_g: int) -> float:
        return self.c1 * self.gamma(m_g) * delta

    def degree_floor(self, m_g: int) -> int:
        """Validity floor: the cluster lemma needs c1 * gamma <= delta / 20."""
        return math.ceil(20 * self.c1 * self.gamma(m_g))

    def u_excess(self, m_g: int) -> int:
        return max(2, math.ceil(self.u_excess_coeff * math.log(max(m_g, 3))))

    def u_final(self, s: int, delta: int) -> int:
        return max(1, s // (self.u_final_divisor * delta))

    def h(self, m_g: int) -> int:
        base = math.ceil(self.h_coeff * math.log(max(m_g, 3)) * _lnln(m_g))
        return max(base, math.ceil(math.log(max(m_g, 2))) + 2)

    def bundle_size(self, delta: int, s: int, m_g: int) -> int:
        """Per-bundle edge count: paper delta/10, capped so the construction
        budget 2 * count * Z * gamma <= m stays feasible at small strengths."""
        cap = max(1, s // (2 * self.k_groups * self.gamma(m_g)))
        return max(1, min((2 * delta) // 5, delta // self.z_divisor or 1, cap))

    @property
    def w_final(self) -> int:
        if self.k_groups % self.scale_divisor:
            raise ValueError("k_groups must be divisible by scale_divisor")
        w = self.k_groups // self.scale_divisor
        if w < 2:
            raise ValueError("k/scale must be >= 2 for the final Unit-Flow")
        return w


PAPER = Profile(
    name="paper",
    gamma_coeff=1e7,
    c1=2500.0,
    s0_factor=1000.0,
    k_groups=5000,
    scale_divisor=200,
    u_excess_coeff=100.0,
    h_coeff=1000.0,
)

DESK = Profile(
    name="desk",
    gamma_coeff=0.0,     # gamma = 1
    c1=3.0,
    s0_factor=1.0,
    k_groups=6,
    scale_divisor=2,
    u_excess_coeff=1.0,
    h_coeff=17.0,
    z_divisor=2,         # effective Z = 2*delta/5: tames spread concentration
)

PROFILES = {"paper": PAPER, "desk": DESK}


def get_profile(name: str) -> Profile:
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown profile {name!r}; "
                         f"choose from {sorted(PROFILES)}") from None
