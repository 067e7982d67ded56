"""
Command controllers: each turns parsed arguments into a RunReport and an exit code.
"""

from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..config.settings import settings
from ..core.models import BasisPair, MetaFactorization, SketchPair
from ..core.service import reconstruct, solve_projector_equation, verify_idempotent
from ..factorizations.models import UtvVariant
from ..factorizations.service import cpqr_mixing, svd_via_meta, two_sided_bases, utv
from ..io.loader import load_matrix, read_factors, write_factors
from ..io.models import SyntheticSpec
from ..io.synthetic import generate
from ..kernels.dense import numerical_rank, pinv, require_rank, svd
from ..periodic.service import cyclic_generators, periodic_meta_factorize, verify_periodicity
from ..pinv.service import penrose_residuals, pinv_as_meta
from ..randomized.cur import cur, cur_random_naive
from ..randomized.models import CurFactors, CurMode, SketchConfig
from ..randomized.nystrom import generalized_nystrom, nystrom_unstable
from ..randomized.sketching import draw_sketches, truncated_svd_residual
from ..randomized.wedderburn import verify_rank_reduction_conditions, wedderburn_reduce
from ..shared.utils.exceptions import DimensionMismatch, UnsupportedFormat, UsageError
from ..shared.utils.helpers import Stopwatch, fro_norm, relative_residual
from ..shared.utils.logger import get_logger
from .base_controller import EXIT_CHECK_FAILED, EXIT_OK, BaseController
from .schemas import CheckRecord, MethodRecord, RunReport
from .trials import aggregate, run_trials, write_trials_csv

logger = get_logger(__name__)

FACTORIZE_METHODS = ("svd-meta", "cpqr", "utv-row-svd", "utv-svd", "utv-qr", "utv-lu", "pinv-meta")
LOWRANK_METHODS = ("nystrom", "nystrom-direct", "cur", "cur-random", "wedderburn")
VERIFY_CHECKS = ("projector", "penrose", "periodicity", "rank-reduction", "reconstruction")

UTV_METHODS = {
    "utv-row-svd": UtvVariant.ROW_SVD,
    "utv-svd": UtvVariant.TWO_SIDED_SVD,
    "utv-qr": UtvVariant.TWO_SIDED_QR,
    "utv-lu": UtvVariant.TWO_SIDED_LU,
}

# structural thresholds reported by factorize
OFFDIAG_TOL = 1e-10
CPQR_TOL = 1e-10
ORTHO_CLAIM_TOL = 1e-10
PROJECTOR_TOL = 1e-10


def load_input(args) -> Tuple[np.ndarray, str, Optional[int]]:
    """Matrix, input descriptor and synthetic seed from --input/--synthetic."""
    if args.synthetic:
        spec = SyntheticSpec.parse(args.synthetic)
        return generate(spec), spec.describe(), spec.seed
    return load_matrix(args.input), str(args.input), None


def parse_index_list(text: Optional[str], flag: str) -> List[int]:
    if not text:
        raise UsageError(f"{flag} needs a comma-separated index list")
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise UsageError(f"{flag} must be comma-separated integers, got {text!r}") from None


def require_flag(value, flag: str, method: str):
    if value is None:
        raise UsageError(f"{flag} is required for {method}")
    return value


def meta_record(method: str, meta: MetaFactorization, **extra) -> MethodRecord:
    report = meta.report
    return MethodRecord(
        method=method,
        k=meta.k,
        residual_rel=report.residual_rel,
        elapsed_seconds=report.elapsed_seconds,
        idem_defect_p=report.idem_defect_p,
        idem_defect_r=report.idem_defect_r,
        detected_rank=report.detected_rank,
        **extra,
    )


def cur_record(method: str, factors: CurFactors, **extra) -> MethodRecord:
    return MethodRecord(
        method=method,
        k=factors.k,
        residual_rel=factors.report.residual_rel,
        elapsed_seconds=factors.report.elapsed_seconds,
        detected_rank=factors.report.detected_rank,
        mode=factors.mode.value,
        row_idx=list(factors.row_idx),
        col_idx=list(factors.col_idx),
        **extra,
    )


class FactorizeController(BaseController):
    """Exact constructions: SVD, CPQR, the UTV family and the pseudoinverse."""

    def run(self, args) -> Tuple[RunReport, int]:
        a, label, seed = load_input(args)
        method = args.method
        if method == "pinv-meta":
            meta = pinv_as_meta(a)
            penrose = penrose_residuals(a, meta.g)
            record = meta_record(method, meta, structural_checks_passed=penrose.passed)
            factors = dict(f=meta.f, g=meta.g, h=meta.h)
        elif method in UTV_METHODS:
            k = require_flag(args.rank, "--rank", method)
            result = utv(a, k, UTV_METHODS[method])
            defects = result.orthonormality_defects()
            claimed = dict(zip(("u", "v"), result.claims))
            report = result.report
            record = MethodRecord(
                method=method,
                k=result.k,
                residual_rel=report.residual_rel,
                elapsed_seconds=report.elapsed_seconds,
                idem_defect_p=report.idem_defect_p,
                idem_defect_r=report.idem_defect_r,
                detected_rank=report.detected_rank,
                orthonormality=defects,
                structural_checks_passed=all(defects[name] <= ORTHO_CLAIM_TOL for name, flag in claimed.items() if flag),
            )
            factors = dict(u=result.u, t=result.t, v=result.v)
        else:
            k = require_flag(args.rank, "--rank", method)
            if method == "svd-meta":
                meta = svd_via_meta(a, k)
                off_diagonal = fro_norm(meta.g - np.diag(np.diag(meta.g)))
                record = meta_record(
                    method, meta, structural_checks_passed=off_diagonal <= OFFDIAG_TOL * fro_norm(meta.g)
                )
            else:
                meta, deviation = cpqr_mixing(a, k)
                record = meta_record(method, meta, deviation=deviation, structural_checks_passed=deviation <= CPQR_TOL)
            factors = dict(f=meta.f, g=meta.g, h=meta.h)

        if args.out:
            write_factors(args.out, **factors)
        report = RunReport(
            command="factorize",
            argv=self.argv,
            input=label,
            shape=a.shape,
            seed=seed,
            methods=[record],
            factors_dir=str(args.out) if args.out else None,
        )
        return report, EXIT_OK


class LowrankController(BaseController):
    """Randomized and sampling constructions, with seeded repeated trials."""

    def run(self, args) -> Tuple[RunReport, int]:
        a, label, _ = load_input(args)
        master_seed = settings.SEED if args.seed is None else args.seed
        method = args.method
        m, n = a.shape

        if method in ("nystrom", "nystrom-direct", "cur-random"):
            k = require_flag(args.rank, "--rank", method)
            records = run_trials(self._trial(a, method, k, args), master_seed, args.trials)
        elif method == "cur":
            rows = parse_index_list(args.rows, "--rows")
            cols = parse_index_list(args.cols, "--cols")
            records = [cur_record(method, cur(a, rows, cols, mode=args.mode))]
            k = records[0].k
        else:
            steps, meta = wedderburn_reduce(a, max_steps=args.rank, pivot_tol=args.pivot_tol)
            k = len(steps)
            records = [meta_record(method, meta, steps=k, pivots=[step.pivot for step in steps])]

        if args.csv:
            write_trials_csv(records, args.csv)
        report = RunReport(
            command="lowrank",
            argv=self.argv,
            input=label,
            shape=(m, n),
            seed=master_seed,
            methods=records,
            aggregate=aggregate(records),
            baseline_residual=truncated_svd_residual(a, k),
        )
        return report, EXIT_OK

    @staticmethod
    def _trial(a: np.ndarray, method: str, k: int, args) -> Callable[[int, int], MethodRecord]:
        m, n = a.shape
        if method != "cur-random":
            # fail before any trial starts
            SketchConfig(k=k, oversample_rows=args.oversample).check(m, n)

        def trial(index: int, seed: int) -> MethodRecord:
            if method == "cur-random":
                return cur_record(method, cur_random_naive(a, k, seed, mode=args.mode), trial=index, seed=seed)
            cfg = SketchConfig(k=k, oversample_rows=args.oversample, seed=seed)
            oversample = cfg.row_width - k
            if method == "nystrom":
                meta = generalized_nystrom(a, cfg)
                return meta_record(method, meta, trial=index, seed=seed, oversample=oversample)
            watch = Stopwatch()
            with watch.running():
                approx = nystrom_unstable(a, cfg, draw_sketches(cfg, m, n))
            return MethodRecord(
                method=method,
                k=k,
                residual_rel=relative_residual(a, approx),
                elapsed_seconds=watch.elapsed,
                trial=index,
                seed=seed,
                oversample=oversample,
            )

        return trial


class VerifyController(BaseController):
    """Invariant suites; exit 1 when any selected check misses its threshold."""

    def run(self, args) -> Tuple[RunReport, int]:
        a, label, _ = load_input(args)
        seed = settings.SEED if args.seed is None else args.seed
        checks = [self.CHECKS[name](self, a, args, seed) for name in dict.fromkeys(args.check)]
        passed = all(check.passed for check in checks)
        for check in checks:
            if not check.passed:
                logger.warning(f"check {check.name} failed: {check.measured:.3e} > {check.threshold:.3e}")
        report = RunReport(
            command="verify",
            argv=self.argv,
            input=label,
            shape=a.shape,
            seed=seed,
            checks=checks,
            passed=passed,
        )
        return report, EXIT_OK if passed else EXIT_CHECK_FAILED

    @staticmethod
    def _rank(a: np.ndarray, args) -> int:
        if args.rank is not None:
            require_rank(a, args.rank)
            return args.rank
        rank = numerical_rank(a)
        if rank < 1:
            raise UsageError("input has numerical rank 0; nothing to verify")
        return rank

    def check_projector(self, a, args, seed) -> CheckRecord:
        k = self._rank(a, args)
        m, n = a.shape
        basis, _ = two_sided_bases(a, k)
        rng = np.random.default_rng(seed)
        sketch = SketchPair(b=rng.standard_normal((m, min(m, 2 * k))), d=rng.standard_normal((n, min(n, 2 * k))))
        square = verify_idempotent(solve_projector_equation(basis), basis)
        oblique = verify_idempotent(solve_projector_equation(basis, sketch), basis)
        measured = max(square.idem_defect_p, square.idem_defect_r, oblique.idem_defect_p, oblique.idem_defect_r)
        ranks = [square.rank_p, square.rank_r, oblique.rank_p, oblique.rank_r]
        return CheckRecord(
            name="projector",
            measured=measured,
            threshold=PROJECTOR_TOL,
            passed=measured <= PROJECTOR_TOL and all(rank == k for rank in ranks),
            details={"k": k, "ranks": ranks, "projector_defect": square.projector_defect},
        )

    def check_penrose(self, a, args, seed) -> CheckRecord:
        residuals = penrose_residuals(a, pinv(a))
        return CheckRecord(
            name="penrose",
            measured=residuals.worst,
            threshold=residuals.tolerance,
            passed=residuals.passed,
            details=residuals.model_dump(exclude={"tolerance", "passed"}),
        )

    def check_periodicity(self, a, args, seed) -> CheckRecord:
        k = self._rank(a, args)
        factors = svd(a)
        basis = BasisPair(f=factors.u[:, :k], h=factors.v[:, :k])
        gen = cyclic_generators(k, args.period, args.generator)
        _, pair = periodic_meta_factorize(a, basis, gen)
        report = verify_periodicity(a, basis, pair, gen, args.pmax)
        return CheckRecord(
            name="periodicity",
            measured=max(report.periodic_residuals),
            threshold=report.tolerance,
            passed=report.passed,
            details={
                "k": k,
                "n_period": args.period,
                "generator": args.generator,
                "periodic_residuals": report.periodic_residuals,
                "intermediate_residuals": {str(q): value for q, value in report.intermediate_residuals.items()},
            },
        )

    def check_rank_reduction(self, a, args, seed) -> CheckRecord:
        steps, meta = wedderburn_reduce(a, max_steps=args.rank)
        report = verify_rank_reduction_conditions(a, meta.f, meta.g, meta.h)
        return CheckRecord(
            name="rank-reduction",
            measured=max(report.column_residual, report.mixing_residual, report.row_residual),
            threshold=report.tolerance,
            passed=report.holds,
            details=report.model_dump(exclude={"tolerance"}),
        )

    def check_reconstruction(self, a, args, seed) -> CheckRecord:
        if not args.factors:
            raise UsageError("--check reconstruction needs --factors DIR")
        factors = read_factors(args.factors)
        names = set(factors)
        if {"f", "g", "h"} <= names:
            approx = reconstruct(factors["f"], factors["g"], factors["h"])
        elif {"u", "t", "v"} <= names:
            approx = reconstruct(factors["u"], factors["t"], factors["v"])
        else:
            raise UnsupportedFormat(f"{args.factors} holds {sorted(names)}; expected f, g, h or u, t, v")
        if approx.shape != a.shape:
            raise DimensionMismatch(f"factors reconstruct a {approx.shape} matrix, input is {a.shape}")
        residual = relative_residual(a, approx)
        return CheckRecord(
            name="reconstruction",
            measured=residual,
            threshold=settings.VERIFY_RTOL,
            passed=residual <= settings.VERIFY_RTOL,
            details={"factors": sorted(names)},
        )

    CHECKS: Dict[str, Callable] = {
        "projector": check_projector,
        "penrose": check_penrose,
        "periodicity": check_periodicity,
        "rank-reduction": check_rank_reduction,
        "reconstruction": check_reconstruction,
    }


CONTROLLERS = {
    "factorize": FactorizeController,
    "lowrank": LowrankController,
    "verify": VerifyController,
}
