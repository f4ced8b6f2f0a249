"""The relative-speedup order on fiber extensions, with checkable certificates.

One ergodic fiber extension admits a relative speedup isomorphic to another
precisely when some member of the second system's subgroup class embeds in a
member of the first system's class.  The verdict carries the witnessing pair
of subgroups so the claim can be re-verified independently of the decision
procedure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .ergodic import GpResult, fiber_transitive, gp_invariant, gp_report
from .perm import PermGroup, contains_up_to_conjugacy, group_to_json
from .symbolic import LabeledSystem


@dataclass(frozen=True)
class SpeedupVerdict:
    answer: bool
    witness: Optional[tuple[PermGroup, PermGroup]]
    gp1: GpResult
    gp2: GpResult
    symmetric: bool

    def __post_init__(self) -> None:
        if self.answer != (self.witness is not None):
            raise ValueError("a yes verdict carries a witness and a no verdict does not")


@dataclass
class WitnessCheck:
    ok: bool
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def decide(sys1: LabeledSystem, sys2: LabeledSystem) -> SpeedupVerdict:
    """Does the first system admit a relative speedup isomorphic to the second?

    Both systems must be ergodic fiber extensions of equal fiber degree; the
    criterion is unsound otherwise, so violations raise instead of answering.
    """
    if sys1.fiber_degree != sys2.fiber_degree:
        raise ValueError(
            f"fiber degrees differ: {sys1.fiber_degree} vs {sys2.fiber_degree}"
        )
    for name, sysm in (("sys1", sys1), ("sys2", sys2)):
        if not fiber_transitive(sysm):
            raise ValueError(
                f"{name} is not an ergodic fiber extension; the speedup criterion does not apply"
            )
    gp1 = gp_invariant(sys1)
    gp2 = gp_invariant(sys2)
    witness = contains_up_to_conjugacy(gp1.klass, gp2.klass)
    return SpeedupVerdict(
        answer=witness is not None,
        witness=witness,
        gp1=gp1,
        gp2=gp2,
        symmetric=gp1.klass == gp2.klass,
    )


def verify_witness(v: SpeedupVerdict) -> WitnessCheck:
    """Re-check a yes verdict: class membership of both groups and element-wise containment.

    Truthy on success; on failure the result is falsy and names the reason.
    """
    if not v.answer or v.witness is None:
        return WitnessCheck(False, "verdict carries no witness")
    G1, G2 = v.witness
    if G1 not in v.gp1.klass:
        return WitnessCheck(False, "claimed supergroup is not a member of the first class")
    if G2 not in v.gp2.klass:
        return WitnessCheck(False, "claimed subgroup is not a member of the second class")
    for g in G2.sorted_elements():
        if g not in G1:
            return WitnessCheck(
                False,
                f"element {list(g.images)} of the claimed subgroup is missing from the supergroup",
            )
    return WitnessCheck(True)


def verdict_to_json(v: SpeedupVerdict, sys1: LabeledSystem, sys2: LabeledSystem) -> dict:
    witness = None
    if v.witness is not None:
        witness = {"G1": group_to_json(v.witness[0]), "G2": group_to_json(v.witness[1])}
    return {
        "relation": "yes" if v.answer else "no",
        "witness": witness,
        "symmetric": v.symmetric,
        "gp1": gp_report(sys1),
        "gp2": gp_report(sys2),
    }
