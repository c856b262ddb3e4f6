"""Suite orchestration and file emitters.

One RunConfig drives the whole pipeline: solve the structure function,
truncate to the effective dimension, build the graded representation, the
supercharge doublet and the replicas, verify every identity, and cross-check
the tensor-product realization.  Construction failures become report entries
rather than exceptions so a run always yields a verdict.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, FactorizationError, FsusyError, WindowTooSmallError
from .fock import (
    GradedBasis,
    StructureSpec,
    effective_dimension,
    solve_structure_function,
)
from .realization import (
    VARIANTS,
    build_kfermion_pair,
    build_tensor_realization,
    compare_realizations,
    verify_kfermions,
)
from .replicas import (
    ReplicaDoublet,
    build_replica,
    check_isospectrality,
    k2_reduction_entry,
    verify_replica,
    verify_sum_identity,
)
from .report import ReportEntry, VerificationReport
from .system import FsusyDoublet, build_doublet, partner_consistency_entry, verify_fsusy
from .wkalg import AlgebraRep, build_rep, verify_wk_relations

# asserted identities derived from exact cancellations get a tolerance this
# much tighter than the windowed ones
STRICT_FACTOR = 1e-2

DEFAULT_TOLERANCE = 1e-10


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs of one run: space, structure family, outputs."""

    k: int
    d: int
    spec: StructureSpec
    margin: int
    tolerance: float = DEFAULT_TOLERANCE
    variant: str = "sector"
    out_report: str | None = None
    out_spectrum: str | None = None
    out_operators: str | None = None

    def __post_init__(self):
        if self.k < 2:
            raise ConfigError(f"cyclic order must be at least 2, got {self.k}")
        if self.d < 4:
            raise ConfigError(f"truncation must be at least 4 levels, got {self.d}")
        if self.margin < 1:
            raise ConfigError(f"window margin must be at least 1, got {self.margin}")
        if self.d - self.margin < 2:
            raise ConfigError(
                f"margin {self.margin} leaves no window inside {self.d} levels"
            )
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.variant not in VARIANTS:
            raise ConfigError(
                f"unknown boson variant {self.variant!r}; choose from {VARIANTS}"
            )
        if self.spec.k != self.k:
            raise ConfigError(f"structure spec has order {self.spec.k}, expected {self.k}")

    @property
    def strict(self) -> float:
        return self.tolerance * STRICT_FACTOR

    def echo(self, d_effective: int | None) -> dict:
        """Config as stable JSON-ready scalars for the report header."""
        spec = self.spec
        return {
            "k": self.k,
            "d_requested": self.d,
            "d_effective": d_effective,
            "family": spec.family,
            "preset": spec.preset,
            "a": spec.a,
            "b": spec.b,
            "constants": None if spec.constants is None else list(spec.constants),
            "table_size": None if spec.table is None else len(spec.table),
            "margin": self.margin,
            "tolerance": self.tolerance,
            "variant": self.variant,
        }


@dataclass
class GradedSystem:
    """Built operators of one run: representation, doublet, replicas by s."""

    rep: AlgebraRep
    doublet: FsusyDoublet
    replicas: dict[int, ReplicaDoublet] = field(default_factory=dict)


def build_system(config: RunConfig) -> GradedSystem:
    """Construct everything buildable; unfactorizable replicas are skipped."""
    F = solve_structure_function(config.spec, config.d)
    d_eff = effective_dimension(F, config.d)
    basis = GradedBasis(config.k, d_eff)
    rep = build_rep(config.spec, basis, F.truncate(d_eff))
    doublet = build_doublet(rep)
    system = GradedSystem(rep, doublet)
    for s in range(2, config.k + 1):
        try:
            system.replicas[s] = build_replica(doublet, s, slack=config.margin)
        except FactorizationError:
            continue
    return system


def run_verification_suite(config: RunConfig) -> VerificationReport:
    """Run every check against one configuration and compile the report."""
    entries: list[ReportEntry] = []
    echo = config.echo(None)
    try:
        F = solve_structure_function(config.spec, config.d)
        d_eff = effective_dimension(F, config.d)
        basis = GradedBasis(config.k, d_eff)
        rep = build_rep(config.spec, basis, F.truncate(d_eff))
        doublet = build_doublet(rep)
    except FsusyError as exc:
        entries.append(ReportEntry.failure(
            "construction.representation",
            "the graded ladder representation materializes on the truncated space",
            exc))
        report = VerificationReport.compile(echo, entries)
        if config.out_report:
            report.write(config.out_report)
        return report
    echo = config.echo(d_eff)

    margin, tol, strict = config.margin, config.tolerance, config.strict
    try:
        entries += verify_wk_relations(rep, margin, tol)
        entries += verify_fsusy(doublet, margin, tol, strict)
        entries.append(partner_consistency_entry(doublet, strict))
        entries.append(check_isospectrality(doublet, margin, tol))

        replicas: dict[int, ReplicaDoublet] = {}
        for s in range(2, config.k + 1):
            try:
                rd = build_replica(doublet, s, slack=margin)
            except FactorizationError as exc:
                entries.append(ReportEntry.failure(
                    f"replica{s}.factorization",
                    "the partner ladder admits real square roots at every level",
                    exc))
                continue
            replicas[s] = rd
            entries += verify_replica(rd, doublet, margin, tol, strict)
        if len(replicas) == config.k - 1:
            entries.append(verify_sum_identity(doublet, replicas, margin, tol))
            if config.k == 2:
                entries.append(k2_reduction_entry(doublet, replicas[2], margin, strict))
        else:
            missing = sorted(set(range(2, config.k + 1)) - set(replicas))
            entries.append(ReportEntry.failure(
                "fsusy.charge_sum",
                "H equals q(2)- q(2)+ plus the sum of q(s)+ q(s)- over all replicas",
                f"replicas {missing} could not be factorized"))

        entries += verify_kfermions(build_kfermion_pair(config.k), strict)
        try:
            tensor = build_tensor_realization(config.k, d_eff, config.spec, config.variant)
            entries += compare_realizations(tensor, rep, margin, tol)
        except FsusyError as exc:
            entries.append(ReportEntry.failure(
                "tensor.construction",
                "the tensor-product realization materializes on the truncated space",
                exc, informative=True))
    except WindowTooSmallError as exc:
        entries.append(ReportEntry.failure(
            "construction.window",
            "a safe window exists below the truncation ceiling",
            exc))

    report = VerificationReport.compile(echo, entries)
    if config.out_report:
        report.write(config.out_report)
    return report


def emit_spectrum(
    doublet: FsusyDoublet,
    replicas: dict[int, ReplicaDoublet],
    path: str,
    fmt: str = "csv",
) -> None:
    """Write partner and replica energies as CSV rows s,n,energy,replica_s.

    Partner ladder rows carry an empty replica_s; replica rows repeat the two
    ladders a replica couples, read off the built h(s) diagonal (so the
    omitted ground level shows its true entry, zero).
    """
    if fmt != "csv":
        raise ConfigError(f"unknown spectrum format {fmt!r}; only csv is supported")
    basis = doublet.rep.basis
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["s", "n", "energy", "replica_s"])
        for s in range(1, doublet.k + 1):
            for n in range(doublet.d):
                writer.writerow([s, n, doublet.partner(s, n), ""])
        for s in sorted(replicas):
            h = replicas[s].h.mat
            for ladder in (s - 1, s):
                for n in range(doublet.d):
                    i = basis.index(n, ladder % basis.k)
                    writer.writerow([ladder, n, float(h[i, i].real), s])


def write_matrix_market(path: str, mat: np.ndarray) -> None:
    """Matrix Market coordinate complex general, entries in row-major order."""
    rows, cols = mat.shape
    nonzero = [
        (i, j, mat[i, j])
        for i in range(rows)
        for j in range(cols)
        if mat[i, j] != 0
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("%%MatrixMarket matrix coordinate complex general\n")
        fh.write(f"{rows} {cols} {len(nonzero)}\n")
        for i, j, v in nonzero:
            fh.write(f"{i + 1} {j + 1} {float(v.real)!r} {float(v.imag)!r}\n")


def dump_operators(system: GradedSystem, directory: str) -> list[str]:
    """One Matrix Market file per labeled operator; returns written paths."""
    os.makedirs(directory, exist_ok=True)
    ops = [system.rep.Xm, system.rep.Xp, system.rep.N, system.rep.K]
    ops += list(system.rep.projectors)
    ops += [system.doublet.Qm, system.doublet.Qp, system.doublet.H]
    for s in sorted(system.replicas):
        rd = system.replicas[s]
        ops += [rd.Xsm, rd.Xsp, rd.qm, rd.qp, rd.h]
    written = []
    for op in ops:
        path = os.path.join(directory, f"{op.label}.mtx")
        write_matrix_market(path, op.mat)
        written.append(path)
    return written
