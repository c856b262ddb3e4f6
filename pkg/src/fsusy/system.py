"""Order-k supersymmetric doublet: supercharges, Hamiltonian and partners.

The supercharges

    Q- = X- (1 - Pi_1),    Q+ = X+ (1 - Pi_0)

are nilpotent of order k, and the Hamiltonian is assembled as

    H = (k-1) X+ X- - sum_{s=3..k} sum_{t=2..s-1} (t-1) f_t(N-s+t) Pi_s
                    - sum_{s=1..k-1} sum_{t=s..k-1} (t-k) f_t(N-s+t) Pi_s

with Pi_k read as Pi_0.  H is diagonal in the graded basis; its diagonal in
sector s is the partner energy ladder H_s(n), which this module also
evaluates in closed form so that the two routes can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import StructureFunction, StructureSpec
from .report import ReportEntry
from .wkalg import (
    AlgebraRep,
    OperatorMatrix,
    sector_selector,
    window_description,
    window_projector,
    window_residual,
)


@dataclass(frozen=True)
class FsusyDoublet:
    """A Hamiltonian with its order-k supercharges and partner table.

    ``partners[s - 1, n]`` holds H_s(n) for partner index s = 1 .. k; the
    index s = k belongs to sector 0.
    """

    rep: AlgebraRep
    Qm: OperatorMatrix
    Qp: OperatorMatrix
    H: OperatorMatrix
    partners: np.ndarray

    @property
    def k(self) -> int:
        return self.rep.basis.k

    @property
    def d(self) -> int:
        return self.rep.basis.d

    def partner(self, s: int, n: int) -> float:
        if not 1 <= s <= self.k:
            raise ValueError(f"partner index {s} outside 1..{self.k}")
        return float(self.partners[s - 1, n])

    def partner_diagonal(self, s: int) -> np.ndarray:
        """H_s(N) as a full-space diagonal: value H_s(n) at every |n, .>."""
        return np.diag(np.tile(self.partners[s - 1], self.k).astype(complex))

    def hamiltonian_diagonal_expected(self) -> np.ndarray:
        """Partner-table prediction for diag(H): H_s(n) at |n, sector(s)>."""
        out = np.zeros(self.k * self.d)
        for sec in range(self.k):
            s = self.k if sec == 0 else sec
            out[sec * self.d : (sec + 1) * self.d] = self.partners[s - 1]
        return out


def build_supercharges(rep: AlgebraRep) -> tuple[OperatorMatrix, OperatorMatrix]:
    basis = rep.basis
    # exact 0/1 selectors equal right-multiplication by (1 - Pi_s) and keep
    # the order-k nilpotency exact in floating point
    not_one = sector_selector(basis, *(s for s in range(basis.k) if s != 1))
    not_zero = sector_selector(basis, *(s for s in range(1, basis.k)))
    return (
        OperatorMatrix("Qm", rep.Xm.mat @ not_one),
        OperatorMatrix("Qp", rep.Xp.mat @ not_zero),
    )


def build_hamiltonian_operator(rep: AlgebraRep) -> OperatorMatrix:
    """Assemble H term by term from its defining expression."""
    basis, spec = rep.basis, rep.spec
    k = basis.k
    H = (k - 1) * (rep.Xp.mat @ rep.Xm.mat)
    for s in range(3, k + 1):
        for t in range(2, s):
            H -= (t - 1) * shifted_weight_diagonal(spec, basis, t, t - s) @ rep.projector(s).mat
    for s in range(1, k):
        for t in range(s, k):
            H -= (t - k) * shifted_weight_diagonal(spec, basis, t, t - s) @ rep.projector(s).mat
    return OperatorMatrix("H", H)


def shifted_weight_diagonal(spec: StructureSpec, basis, t: int, shift: int) -> np.ndarray:
    """Diagonal of f_t(N + shift): entry f_t(n + shift) at every state."""
    vals = np.array([spec.f(t, n + shift) for n in range(basis.d)], dtype=complex)
    return np.diag(np.tile(vals, basis.k))


def partner_value(spec: StructureSpec, F: StructureFunction, s: int, n: int) -> float:
    """Closed-form partner energy H_s(n) for partner index 1 <= s <= k.

    H_s(n) = (k-1) F_s(n) - sum_{t=2..k-1} (t-1) f_t(n-s+t)
                          + (k-1) sum_{t=s..k-1} f_t(n-s+t)

    with F_s read at sector s mod k.
    """
    k = spec.k
    if not 1 <= s <= k:
        raise ValueError(f"partner index {s} outside 1..{k}")
    base = (k - 1) * F.value(s % k, n)
    mid = sum((t - 1) * spec.f(t, n - s + t) for t in range(2, k))
    tail = (k - 1) * sum(spec.f(t, n - s + t) for t in range(s, k))
    return base - mid + tail


def build_doublet(rep: AlgebraRep) -> FsusyDoublet:
    Qm, Qp = build_supercharges(rep)
    H = build_hamiltonian_operator(rep)
    d = rep.basis.d
    partners = np.array(
        [[partner_value(rep.spec, rep.F, s, n) for n in range(d)]
         for s in range(1, rep.basis.k + 1)]
    )
    return FsusyDoublet(rep, Qm, Qp, H, partners)


def verify_fsusy(
    doublet: FsusyDoublet,
    margin: int,
    tolerance: float = 1e-10,
    strict: float = 1e-12,
) -> list[ReportEntry]:
    """Check nilpotency, the order-k multilinear relation and [H, Q+-] = 0."""
    basis = doublet.rep.basis
    k = basis.k
    P = window_projector(basis, margin)
    win = window_description(basis, margin)
    Qm, Qp, H = doublet.Qm.mat, doublet.Qp.mat, doublet.H.mat

    mpow = np.linalg.matrix_power
    nil = max(np.linalg.norm(mpow(Qm, k)), np.linalg.norm(mpow(Qp, k)))
    lhs = sum(
        (mpow(Qm, k - 1 - j) @ Qp @ mpow(Qm, j) for j in range(k)),
        start=np.zeros_like(Qm),
    )
    rhs = mpow(Qm, k - 2) @ H
    multilinear = window_residual(lhs, rhs, P)
    commutation = max(
        window_residual(H @ Qm, Qm @ H, P),
        window_residual(H @ Qp, Qp @ H, P),
    )
    return [
        ReportEntry.exact(
            "fsusy.nilpotency", "Q-^k = 0 and Q+^k = 0", nil),
        ReportEntry.check(
            "fsusy.multilinear",
            "the k ordered products Q-^(k-1-j) Q+ Q-^j sum to Q-^(k-2) H",
            multilinear, tolerance, win),
        ReportEntry.check(
            "fsusy.hamiltonian_commutes", "[H, Q-] = 0 and [H, Q+] = 0",
            commutation, strict, win),
    ]


def partner_consistency_entry(doublet: FsusyDoublet, strict: float = 1e-12) -> ReportEntry:
    """Compare diag(H) from operator assembly against the partner formula.

    The two routes evaluate independent expressions; their agreement pins the
    sector convention of the closed form.
    """
    diag = np.real(np.diag(doublet.H.mat))
    expected = doublet.hamiltonian_diagonal_expected()
    rel = np.abs(diag - expected) / np.maximum(1.0, np.abs(expected))
    offdiag = doublet.H.mat - np.diag(np.diag(doublet.H.mat))
    dev = max(float(rel.max()), float(np.abs(offdiag).max()))
    return ReportEntry.check(
        "fsusy.partner_diagonal",
        "H is diagonal and its diagonal matches the closed-form partner energies",
        dev, strict, "full space, relative",
    )
