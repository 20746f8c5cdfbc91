"""Finite-section basis analysis.

A square invertible section F together with its inverse G* stands in for a
basis: columns of F are the basis vectors, rows of G* the coefficient
functionals. Natural projections Q = F P G* (P a 0/1 diagonal) carry all
constants: the basis constant is the maximum over prefix index sets, the
unconditional constant the maximum over all index subsets.
"""

from dataclasses import dataclass

import numpy as np

from .kernel import (
    as_matrix,
    condition_number,
    invert,
    permutation_matrix,
    spectral_norm,
)

PAIR_TOL = 1e-9

# Subset-search batch size for vectorized SVD evaluation.
_BATCH = 2048


@dataclass(frozen=True)
class BasisPair:
    """A section F and its two-sided inverse Gstar."""

    f: np.ndarray
    gstar: np.ndarray

    def __post_init__(self):
        f = as_matrix(self.f)
        g = as_matrix(self.gstar)
        if f.shape != g.shape or f.shape[0] != f.shape[1]:
            raise ValueError(f"pair must be square of equal shape, got {f.shape} and {g.shape}")
        n = f.shape[0]
        eye = np.eye(n)
        if np.max(np.abs(f @ g - eye)) >= PAIR_TOL or np.max(np.abs(g @ f - eye)) >= PAIR_TOL:
            raise ValueError("F*Gstar and Gstar*F must equal the identity within 1e-9")

    @property
    def size(self):
        return self.f.shape[0]


@dataclass(frozen=True)
class ConstantEstimate:
    """A basis/unconditional constant with its maximizing witness set."""

    value: float
    mode: str  # "Exact" | "LowerBoundWitness"
    witness: tuple  # 1-based indices
    evaluations: int

    def to_json(self):
        return {
            "value": self.value,
            "mode": self.mode,
            "witness": list(self.witness),
            "evaluations": self.evaluations,
        }


@dataclass(frozen=True)
class SearchBudget:
    """Configuration for the unconditional-constant subset search."""

    exact_cutoff: int = 16
    samples: int = 20000
    seed: int = 0


@dataclass(frozen=True)
class RieszReport:
    section_sizes: tuple
    condition_numbers: tuple
    verdict: str  # "RieszConsistent" | "NotRiesz" | "Inconclusive"

    def to_json(self):
        return {
            "sectionSizes": list(self.section_sizes),
            "conditionNumbers": [
                "inf" if np.isinf(c) else c for c in self.condition_numbers
            ],
            "verdict": self.verdict,
        }


def biorthogonal_inverse(f):
    """Pair a nonsingular section with its inverse (the biorthogonal system)."""
    a = as_matrix(f)
    return BasisPair(f=a, gstar=invert(a))


def natural_projection(pair, indices):
    """Q = F P G* for the 1-based index subset *indices*."""
    n = pair.size
    mask = np.zeros(n)
    for i in indices:
        if not 1 <= i <= n:
            raise ValueError(f"index {i} out of range 1..{n}")
        mask[i - 1] = 1.0
    return (pair.f * mask) @ pair.gstar


def _masked_norms(f, gstar, masks):
    """Spectral norms of F diag(mask) G* for a (batch, n) stack of 0/1 masks."""
    qs = (f[None, :, :] * masks[:, None, :]) @ gstar
    return np.linalg.svd(qs, compute_uv=False)[:, 0]


def _norms_chunked(f, gstar, masks):
    out = np.empty(masks.shape[0])
    for start in range(0, masks.shape[0], _BATCH):
        chunk = masks[start:start + _BATCH]
        out[start:start + chunk.shape[0]] = _masked_norms(f, gstar, chunk)
    return out


def _mask_to_witness(mask):
    return tuple(int(i + 1) for i in np.flatnonzero(mask))


def basis_constant(pair):
    """Exact maximum of ||F P_n G*|| over prefixes n = 1..N."""
    n = pair.size
    masks = np.tril(np.ones((n, n)))
    norms = _norms_chunked(pair.f, pair.gstar, masks)
    best = int(np.argmax(norms))
    return ConstantEstimate(
        value=float(norms[best]),
        mode="Exact",
        witness=tuple(range(1, best + 2)),
        evaluations=n,
    )


def _all_subset_masks(n):
    codes = np.arange(2 ** n, dtype=np.uint32)
    return ((codes[:, None] >> np.arange(n, dtype=np.uint32)) & 1).astype(float)


def unconditional_constant(pair, budget=SearchBudget()):
    """Maximum of ||F P_D G*|| over index subsets D.

    Exhaustive (mode Exact) for N <= budget.exact_cutoff; otherwise a seeded
    lower-bound search over prefixes, random subsets and greedy single-index
    flips (mode LowerBoundWitness).
    """
    n = pair.size
    f, gstar = pair.f, pair.gstar
    if n <= budget.exact_cutoff:
        masks = _all_subset_masks(n)
        norms = _norms_chunked(f, gstar, masks)
        best = int(np.argmax(norms))
        return ConstantEstimate(
            value=float(norms[best]),
            mode="Exact",
            witness=_mask_to_witness(masks[best]),
            evaluations=masks.shape[0],
        )

    rng = np.random.default_rng(budget.seed)
    prefixes = np.tril(np.ones((n, n)))
    sampled = rng.integers(0, 2, size=(budget.samples, n)).astype(float)
    masks = np.vstack([prefixes, sampled])
    norms = _norms_chunked(f, gstar, masks)
    evaluations = masks.shape[0]
    best = int(np.argmax(norms))
    best_mask = masks[best].copy()
    best_value = float(norms[best])

    while True:
        flips = np.repeat(best_mask[None, :], n, axis=0)
        idx = np.arange(n)
        flips[idx, idx] = 1.0 - flips[idx, idx]
        flip_norms = _masked_norms(f, gstar, flips)
        evaluations += n
        cand = int(np.argmax(flip_norms))
        if flip_norms[cand] <= best_value:
            break
        best_value = float(flip_norms[cand])
        best_mask = flips[cand]

    return ConstantEstimate(
        value=best_value,
        mode="LowerBoundWitness",
        witness=_mask_to_witness(best_mask),
        evaluations=evaluations,
    )


def dual_basis_constant(pair):
    """Exact maximum over prefixes of ||G P_n F^T|| with G = Gstar^T."""
    g = pair.gstar.T
    fstar = pair.f.T
    n = pair.size
    masks = np.tril(np.ones((n, n)))
    norms = _norms_chunked(g, fstar, masks)
    return float(np.max(norms))


def quasinormality_bounds(f):
    """(min, max) Euclidean column norms of F."""
    a = as_matrix(f)
    norms = np.linalg.norm(a, axis=0)
    return float(np.min(norms)), float(np.max(norms))


def riesz_diagnostic(f, section_sizes, bound_threshold=1e2, divergence_threshold=1e3):
    """Condition numbers of leading principal sections with a three-way verdict.

    NotRiesz: the largest section exceeds divergence_threshold and the last
    three condition numbers are strictly increasing. RieszConsistent: all
    sections stay within bound_threshold and the last three are not strictly
    increasing. Anything else is Inconclusive.
    """
    a = as_matrix(f)
    sizes = list(section_sizes)
    if not sizes or any(s <= 0 or s > a.shape[0] for s in sizes):
        raise ValueError(f"section sizes must lie in 1..{a.shape[0]}")
    if sizes != sorted(sizes) or len(set(sizes)) != len(sizes):
        raise ValueError("section sizes must be strictly increasing")
    conds = [condition_number(a[:s, :s]) for s in sizes]

    tail = conds[-3:]
    increasing = len(tail) >= 2 and all(x < y for x, y in zip(tail, tail[1:]))
    if (np.isinf(conds[-1]) or conds[-1] > divergence_threshold) and increasing:
        verdict = "NotRiesz"
    elif all(c <= bound_threshold for c in conds) and not increasing:
        verdict = "RieszConsistent"
    else:
        verdict = "Inconclusive"
    return RieszReport(
        section_sizes=tuple(sizes), condition_numbers=tuple(conds), verdict=verdict
    )


def summing_counterexample(n):
    """The upper-bidiagonal section whose inverse has non-l2 rows.

    F has 1 in the top-left corner, 1 on the superdiagonal and -1 on the rest
    of the diagonal; Gstar is the matching upper-triangular inverse. Both are
    integer matrices and exact inverses of each other.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    f = np.zeros((n, n))
    f[0, 0] = 1.0
    for i in range(1, n):
        f[i, i] = -1.0
        f[i - 1, i] = 1.0
    gstar = np.zeros((n, n))
    gstar[0, :] = 1.0
    for i in range(1, n):
        gstar[i, i:] = -1.0
    return BasisPair(f=f, gstar=gstar)


def transform_left(x, pair):
    """(X F, Gstar X^{-1}) for invertible X."""
    xm = as_matrix(x)
    xinv = invert(xm)
    return BasisPair(f=xm @ pair.f, gstar=pair.gstar @ xinv)


def transform_right_diagonal(pair, d):
    """(F D, D^{-1} Gstar) for a nonzero diagonal; projections are unchanged."""
    dv = np.asarray(list(d), dtype=float)
    if dv.ndim != 1 or dv.shape[0] != pair.size:
        raise ValueError(f"diagonal must have length {pair.size}")
    if np.any(dv == 0.0):
        raise ValueError("diagonal entries must be nonzero")
    return BasisPair(f=pair.f * dv, gstar=pair.gstar / dv[:, None])


def transform_right_permutation(pair, perm):
    """(F U_perm, U_perm^T Gstar); the exact unconditional constant is invariant."""
    u = permutation_matrix(perm)
    if u.shape[0] != pair.size:
        raise ValueError(f"permutation must act on 1..{pair.size}")
    return BasisPair(f=pair.f @ u, gstar=u.T @ pair.gstar)
