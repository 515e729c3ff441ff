"""Positive-partial-transpose (Peres-Horodecki) oracle.

Negativity of the partially transposed matrix certifies entanglement for
any split; positivity certifies separability only where PPT is sufficient
(2x2, i.e. D=2 N=2, and the 2x3 case which cannot arise here with equal
local dimensions).  The verdict names keep that one-sidedness explicit:
PPT_SEPARABLE_CONSISTENT is a consistency statement, not a proof, except
where ``conclusive`` is set.

References: A. Peres, Phys. Rev. Lett. 77, 1413 (1996); M., P. and
R. Horodecki, Phys. Lett. A 223, 1 (1996).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .density import (
    DensityMatrix,
    PartySubset,
    canonical_subsets,
    hermitian_eigenvalues,
    partial_transpose,
)

DEFAULT_PPT_TOL = 1e-10


class PptOutcome(Enum):
    PPT_SEPARABLE_CONSISTENT = "ppt_separable_consistent"
    NPT_ENTANGLED = "npt_entangled"


@dataclass(frozen=True)
class PptVerdict:
    subset: PartySubset
    min_eigenvalue: float
    verdict: PptOutcome
    conclusive: bool

    def to_dict(self) -> dict:
        return {
            "subset": list(self.subset.members),
            "min_eigenvalue": self.min_eigenvalue,
            "verdict": self.verdict.value,
            "conclusive": self.conclusive,
        }


def ppt_check(
    rho: DensityMatrix, subset: PartySubset, tol: float = DEFAULT_PPT_TOL
) -> PptVerdict:
    """Eigenvalue test of the partial transpose over one party subset."""
    if not rho.normalized:
        raise ValueError("ppt_check expects a normalized density matrix")
    spectrum = hermitian_eigenvalues(partial_transpose(rho, subset))
    min_eig = float(spectrum[0])
    verdict = (
        PptOutcome.NPT_ENTANGLED
        if min_eig < -tol
        else PptOutcome.PPT_SEPARABLE_CONSISTENT
    )
    return PptVerdict(
        subset=subset,
        min_eigenvalue=min_eig,
        verdict=verdict,
        conclusive=(rho.D == 2 and rho.N == 2),
    )


def ppt_report(rho: DensityMatrix, tol: float = DEFAULT_PPT_TOL) -> list[PptVerdict]:
    """ppt_check over every canonical subset (proper subsets containing party 0).

    The partial-transpose spectrum over S equals the one over the complement
    of S, so these representatives cover all splits.
    """
    return [ppt_check(rho, subset, tol) for subset in canonical_subsets(rho.N)]


def any_npt(verdicts: list[PptVerdict]) -> bool:
    return any(v.verdict is PptOutcome.NPT_ENTANGLED for v in verdicts)


def ph_determinants_2x2(rho: DensityMatrix) -> tuple[float, float]:
    """The two 2x2 principal-minor determinants of the partially transposed
    two-qubit matrix (transpose over the second party):

        W1 on the outer block {(0,0),(1,1)}, W2 on the inner block
        {(0,1),(1,0)}.

    Both are real for Hermitian input; negativity of either is the
    determinant form of the two-qubit test.
    """
    if rho.D != 2 or rho.N != 2:
        raise ValueError(
            f"determinant form is specific to D=2, N=2; got D={rho.D}, N={rho.N}"
        )
    t = partial_transpose(rho, PartySubset((1,), 2)).matrix
    w1 = (t[0, 0] * t[3, 3] - t[0, 3] * t[3, 0]).real
    w2 = (t[1, 1] * t[2, 2] - t[1, 2] * t[2, 1]).real
    return float(w1), float(w2)
