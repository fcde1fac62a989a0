"""Extremal lower-bound sequences, with a verifier that re-checks them."""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, replace

from .groups import FiniteAbelianGroup
from .sequences import GSequence, has_short_zero_sum

log = logging.getLogger(__name__)


class ConstructionKind(enum.Enum):
    HOMOCYCLIC_ETA = "homocyclic_eta"
    RANK_TWO_ETA = "rank_two_eta"


@dataclass(frozen=True)
class ConstructionRecord:
    kind: ConstructionKind
    parameters: tuple[int, int]
    sequence: GSequence
    expected_length: int
    verified: bool = False

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "kind": self.kind.value,
            "parameters": list(self.parameters),
            "group": str(self.sequence.group),
            "sequence": self.sequence.literal(),
            "length": self.sequence.length,
            "expected_length": self.expected_length,
            "verified": self.verified,
        }


def verify_construction(rec: ConstructionRecord) -> ConstructionRecord:
    """Re-check that the sequence has no short zero-sum subsequence."""
    ok = rec.sequence.length == rec.expected_length and has_short_zero_sum(rec.sequence) is None
    if not ok:
        log.warning("construction %s%s failed verification", rec.kind.value, rec.parameters)
    return replace(rec, verified=ok)


def homocyclic_eta_extremal(r: int, n: int, verify: bool = True) -> ConstructionRecord:
    """n - 1 copies of e_I = sum of e_i over I, for every non-empty I.

    Length (2^r - 1)(n - 1) over C_n^r.
    """
    if r < 1 or n < 2:
        raise ValueError("need r >= 1 and n >= 2")
    G = FiniteAbelianGroup((n,) * r)
    counts = [(G.element(bits), n - 1) for bits in itertools.product((0, 1), repeat=r) if any(bits)]
    rec = ConstructionRecord(ConstructionKind.HOMOCYCLIC_ETA, (r, n), GSequence(G, tuple(counts)), (2**r - 1) * (n - 1))
    return verify_construction(rec) if verify else rec


def rank_two_eta_extremal(m: int, n: int, verify: bool = True) -> ConstructionRecord:
    """e_1^{m-1} (e_1 + e_2)^{m-1} e_2^{n-1} over C_m + C_n.

    This is the standard extremal sequence from the zero-sum literature,
    of length 2m + n - 3; correctness here rests on the verifier.
    """
    if m < 2 or n % m:
        raise ValueError(f"need m >= 2 and m | n, got m={m}, n={n}")
    G = FiniteAbelianGroup((m, n))
    counts = [(G.element((1, 0)), m - 1), (G.element((1, 1)), m - 1), (G.element((0, 1)), n - 1)]
    rec = ConstructionRecord(ConstructionKind.RANK_TWO_ETA, (m, n), GSequence(G, tuple(counts)), 2 * m + n - 3)
    return verify_construction(rec) if verify else rec
