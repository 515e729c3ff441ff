"""Causal separability criterion for multipartite density matrices.

For a configuration j and a bipartition S of the parties the criterion
compares two probability-like quantities:

  P_ignorance   -- diagonal weight at j times the summed diagonal weights
                   of j's partner family: the chance that ignorance about
                   which member of a completely orthogonal family occurred
                   could mask the correlations.

  P_transition  -- sum of |<j| rho^T_S |l>|^2 over the transition partner
                   family, read from the partial transpose over S: the
                   strength of virtual round trips j -> l -> j across the
                   cut.

Their difference W = P_ignorance - P_transition is invariant under
S -> complement(S).  W < -tol for any distinct configuration and any
bipartition certifies entanglement; W >= -tol everywhere is *consistent*
with separability (one-sided, like the partial-transpose test).

The coupling mode selects which partner family plays which role: the free
ensemble draws ignorance from all (D-1)^N completely orthogonal partners
and transitions along the D-1 uniform cyclic shifts; the coupled ensemble
swaps the two families.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .config_calculus import (
    Configuration,
    CouplingMode,
    orthogonal_partners,
    partition_distinct,
)
from .density import (
    DensityMatrix,
    PartySubset,
    canonical_subsets,
    config_to_index,
    partial_transpose,
)

DEFAULT_W_TOL = 1e-10


class ScoreVerdict(Enum):
    M_SEPARABLE = "m_separable"
    M_ENTANGLED = "m_entangled"


class OverallVerdict(Enum):
    SEPARABLE_BY_CRITERION = "separable_by_criterion"
    ENTANGLED = "entangled"


@dataclass(frozen=True)
class ConfigScore:
    """Criterion evaluation at one (configuration, bipartition) pair.

    When the verdict is separable, P_ignorance = P_transition + |W|:
    ignorance covers every virtual transition.  When entangled,
    P_transition = P_ignorance + |W|: transitions outrun any ignorance
    explanation by the margin |W|.
    """

    config: Configuration
    subset: PartySubset
    P_ignorance: float
    P_transition: float
    W: float
    verdict: ScoreVerdict

    def to_dict(self) -> dict:
        return {
            "config": list(self.config),
            "subset": list(self.subset.members),
            "P_ignorance": self.P_ignorance,
            "P_transition": self.P_transition,
            "W": self.W,
            "verdict": self.verdict.value,
        }


@dataclass(frozen=True)
class CriterionReport:
    mode: CouplingMode
    scores: tuple[ConfigScore, ...]
    overall: OverallVerdict

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "overall": self.overall.value,
            "scores": [s.to_dict() for s in self.scores],
        }


def _swapped(mode: CouplingMode) -> CouplingMode:
    return (
        CouplingMode.N_COUPLED
        if mode is CouplingMode.N_FREE
        else CouplingMode.N_FREE
    )


def _check_config(rho: DensityMatrix, j: Configuration) -> None:
    if len(j) != rho.N:
        raise ValueError(f"configuration {j!r} has length {len(j)}, expected N={rho.N}")


def ignorance_probability(
    rho: DensityMatrix, j: Configuration, mode: CouplingMode
) -> float:
    _check_config(rho, j)
    jj = config_to_index(j, rho.D)
    diag = rho.matrix[jj, jj].real
    partner_weight = sum(
        rho.matrix[config_to_index(l, rho.D), config_to_index(l, rho.D)].real
        for l in orthogonal_partners(j, rho.D, mode)
    )
    return float(diag * partner_weight)


def transition_probability(
    rho: DensityMatrix,
    j: Configuration,
    subset: PartySubset,
    mode: CouplingMode,
) -> float:
    """Sum of |<j| rho^T_S |l>|^2 over the transition partners of j.

    Each term pairs the (j,l) entry of the partial transpose with its
    conjugate (l,j) entry, so the result is real and non-negative.
    """
    _check_config(rho, j)
    pt = partial_transpose(rho, subset).matrix
    return _transition_from_pt(pt, rho.D, j, mode)


def _transition_from_pt(pt, D: int, j: Configuration, mode: CouplingMode) -> float:
    jj = config_to_index(j, D)
    total = 0.0
    for l in orthogonal_partners(j, D, _swapped(mode)):
        total += abs(pt[jj, config_to_index(l, D)]) ** 2
    return float(total)


def causal_W(
    rho: DensityMatrix,
    j: Configuration,
    subset: PartySubset,
    mode: CouplingMode,
    tol: float = DEFAULT_W_TOL,
) -> ConfigScore:
    _check_config(rho, j)
    pt = partial_transpose(rho, subset).matrix
    return _score(rho, pt, j, subset, mode, tol)


def _score(rho, pt, j, subset, mode, tol) -> ConfigScore:
    p_ign = ignorance_probability(rho, j, mode)
    p_trans = _transition_from_pt(pt, rho.D, j, mode)
    w = p_ign - p_trans
    verdict = ScoreVerdict.M_ENTANGLED if w < -tol else ScoreVerdict.M_SEPARABLE
    return ConfigScore(
        config=tuple(j),
        subset=subset,
        P_ignorance=p_ign,
        P_transition=p_trans,
        W=w,
        verdict=verdict,
    )


def classify(
    rho: DensityMatrix, mode: CouplingMode, tol: float = DEFAULT_W_TOL
) -> CriterionReport:
    """Evaluate W at every distinct configuration and every canonical
    bipartition; any entangled score makes the overall verdict ENTANGLED.

    The canonical bipartitions are the proper subsets containing party 0,
    one per complement-equivalent pair (W is complement-symmetric).
    """
    if not rho.normalized:
        raise ValueError("classify expects a normalized density matrix")
    if rho.N < 2:
        raise ValueError(f"classification needs at least 2 parties, got N={rho.N}")
    distinct = partition_distinct(rho.D, rho.N).distinct
    subsets = canonical_subsets(rho.N)
    pts = {s: partial_transpose(rho, s).matrix for s in subsets}
    scores = tuple(
        _score(rho, pts[s], j, s, mode, tol) for j in distinct for s in subsets
    )
    overall = (
        OverallVerdict.ENTANGLED
        if any(s.verdict is ScoreVerdict.M_ENTANGLED for s in scores)
        else OverallVerdict.SEPARABLE_BY_CRITERION
    )
    return CriterionReport(mode=mode, scores=scores, overall=overall)
