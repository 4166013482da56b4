"""
Published constants the verifier reproduces or consumes.

Every number that comes from the published proof lives here, next to a short
note on where it enters the argument, so bound envelopes, reduction rounds and
tests all read the same value. Scales beyond the double range (``1.3e867``)
are kept as decimal strings and turned into exact integers with
``precision.parse_scale``.
"""

import math

from enum import StrEnum
from typing import NamedTuple


class FormKind(StrEnum):
    """The four linear forms in three logarithms used by the proof."""

    # 9 f_k(a)(2a - 1)/d1 * 10^-(2l+m) * a^(n-1) - 1, field Q(alpha), D = k
    G1 = "G1"
    # 9 f_k(a)(2a - 1)/(d1 10^l - (d1 - d2)) * 10^-(l+m) * a^(n-1) - 1
    G2 = "G2"
    # d1/27 * 10^(2l+m) * 2^-(n-2) - 1, rational, D = 1
    G3 = "G3"
    # (d1 10^l - (d1 - d2))/27 * 10^(l+m) * 2^-(n-2) - 1, rational, D = 1
    G4 = "G4"

    @property
    def is_rational(self) -> bool:
        return self in (FormKind.G3, FormKind.G4)


class Branch(StrEnum):
    """Which term realises min{k/2, l log2 10} in the large-k regime."""

    A = "a"
    B = "b"


# Matveev: log|Gamma| > -1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D)(1 + log B) A_1...A_t
MATVEEV_FACTOR = 1.4
MATVEEV_BASE = 30
MATVEEV_A_FLOOR = 0.16

# Binet-like residual |e_k(n)| < 1.5 and the sharper estimate valid for n < 2^(k/2)
BINET_RESIDUAL_BOUND = 1.5
SHARP_ESTIMATE_FACTOR = 36

# A_i choices per form
G1_A1_SLOPE = 9
G1_A1_OFFSET = 0.7
ALPHA_A = 0.7
G2_A1_FACTOR = 6.04e12
G3_A1 = math.log(243)
G4_A1_FACTOR = 1.9e12

# Envelopes the lemmas round the Matveev value up to
G1_ENVELOPE = 6.02e12  # * k^4 (log k)^2 log n
G2_ENVELOPE = 3.95e24  # * k^8 (log k)^3 (log n)^2
G3_ENVELOPE = 1.9e12  # * log n
G4_ENVELOPE = 6.5e23  # * (log n)^2

# Right-hand sides |Gamma| < c / 10^l (G1) and < c / 10^m (G2)
G1_GAMMA_NUMERATOR = 11
G2_GAMMA_NUMERATOR = 12

# Closed-form exponent bounds
ELL_BOUND_FACTOR = 2.62e12  # l < . k^4 (log k)^2 log n
M_BOUND_FACTOR = 1.73e24  # m < . k^8 (log k)^3 (log n)^2
N_BOUND_FACTOR = 1.63e29  # n < . k^8 (log k)^5

# Large-k lemma
CASE2_BRANCH_A_FACTOR = 5.5e12  # k < . log n
CASE2_BRANCH_B_FACTOR = 1.9e24  # k < . (log n)^2
CASE2_BRANCH_A_LOG_N = 23  # log n < 23 log k for k > 1500
CASE2_BRANCH_B_LOG_N = 24
CASE2_PUBLISHED_K = {Branch.A: 8.3e15, Branch.B: 1.8e31}
CASE2_PUBLISHED_N = "3.5e288"

# Split between the enumerated and the symbolic regime
CASE1_K_MAX = 1500
CASE2_K_MIN = CASE1_K_MAX + 1
THEOREM_K_MIN = 3
N_MIN_ASSUMED = 8
# The exhaustive search is stated over n in [7, 1821]; 7 < 8 is harmless.
N_MIN_SEARCHED = 7
APPENDIX_N_MAX = 1500

# Small case n <= k
SMALL_CASE_ELL_MAX = 3
SMALL_CASE_M_MAX = 12
SMALL_CASE_N_MIN = 6
SCREEN_ELL_LIMIT = 4  # 16 | 10^l for l >= 4
SCREEN_TWO_ADIC_N = 16
SCREEN_TWO_ADIC_ELL_PLUS_M = 14

# Reduction rounds: (published n bound, C, c3)
CASE1_N_BOUND = "8.8e58"
G1_ROUND_C = "2.1e178"
G1_ROUND_C3 = 18
G2_ROUND_C = "3.0e178"
G2_ROUND_C3 = 19
CASE2_ROUND1_C = "1.3e867"
CASE2_ROUND2_N_BOUND = "3.0e62"
CASE2_ROUND2_C = "9.0e188"
G3_ROUND_C3 = 59
G4_ROUND_C3 = 11

# Outcomes printed in the published proof
PUBLISHED_ELL_CAP = 121
PUBLISHED_M_CAP = 122
PUBLISHED_N_CAP = 1821
PUBLISHED_CASE2_ROUND1 = 1921
PUBLISHED_CASE2_K_CAP = 3838
PUBLISHED_CASE2_ROUND2 = 419


class PublishedRound(NamedTuple):
    """Lemma inputs exactly as printed for one reduction round."""

    label: str
    form: FormKind
    C: str
    delta: str
    S: str
    T: str
    c3: int
    c4_base: int
    printed: int


PUBLISHED_ROUNDS = {
    "case1-G1": PublishedRound(
        "case1-G1", FormKind.G1, G1_ROUND_C, "1.81e59", "1.53e118", "1.32e59",
        G1_ROUND_C3, 10, PUBLISHED_ELL_CAP,
    ),
    "case1-G2": PublishedRound(
        "case1-G2", FormKind.G2, G2_ROUND_C, "2.0e59", "1.53e118", "1.32e59",
        G2_ROUND_C3, 10, PUBLISHED_M_CAP,
    ),
    "case2-round1-G3": PublishedRound(
        "case2-round1-G3", FormKind.G3, CASE2_ROUND1_C, "5.6e290", "2.5e578",
        "5.3e289", G3_ROUND_C3, 2, PUBLISHED_CASE2_ROUND1,
    ),
    "case2-round1-G4": PublishedRound(
        "case2-round1-G4", FormKind.G4, CASE2_ROUND1_C, "5.6e290", "2.5e578",
        "5.3e289", G4_ROUND_C3, 2, 1919,
    ),
    "case2-round2-G3": PublishedRound(
        "case2-round2-G3", FormKind.G3, CASE2_ROUND2_C, "6.0e64", "1.9e126",
        "5.0e63", G3_ROUND_C3, 2, PUBLISHED_CASE2_ROUND2,
    ),
    "case2-round2-G4": PublishedRound(
        "case2-round2-G4", FormKind.G4, CASE2_ROUND2_C, "6.0e64", "1.9e126",
        "5.0e63", G4_ROUND_C3, 2, 417,
    ),
}
