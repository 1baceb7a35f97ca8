import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from sympy import isprime

from cellschur.cli.report import Report
from cellschur.config import Config
from cellschur.core.algebra import RingSpec
from cellschur.core.combinatorics import Composition
from cellschur.core.enums import MonoidKind, Side, Verdict, WitnessKind
from cellschur.core.monoid import MonoidSpec, SubsetOrdering
from cellschur.services.cell_engine import CellEngine, CellStructure, verify_cell_axioms
from cellschur.services.gram_store import GramStore
from cellschur.services.monoid_cells import default_ordering, monoid_cell_structure
from cellschur.services.schur import SchurAlgebra, schur_algebra_and_cells, schur_summary
from cellschur.services.theory import (
    count_irreducible_data,
    lambda_Lp_set,
    lambda_p_set,
    predicted_lambda0,
    theorem_verdict,
    witness_all,
)

logger = logging.getLogger(__name__)

COMMANDS = ("verify", "lambda0", "witness", "gram", "count")
# commands that enumerate the monoid (witness does so through the Schur algebra)
ENUMERATING_COMMANDS = ("verify", "lambda0", "gram", "witness")


@dataclass
class RunConfig:
    """One CLI invocation: the parsed flags on top of the environment ``Config``."""

    command: str
    config: Config = field(default_factory=Config)
    monoid: Optional[MonoidKind] = None
    schur: bool = False
    r: Optional[int] = None
    n: Optional[int] = None
    side: Optional[Side] = None
    characteristic: int = 0
    ordering: str = "default"
    nu: Tuple[int, ...] = ()
    witness_kind: Optional[WitnessKind] = None
    output_format: str = "json"
    output: str = ""

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command: {self.command}")
        if self.r is None or self.r < 1:
            raise ValueError("--r must be a positive integer")
        if self.command in ENUMERATING_COMMANDS:
            self.config.require_rank(self.r)
        if self.characteristic < 0 or (self.characteristic and not isprime(self.characteristic)):
            raise ValueError(f"characteristic must be 0 or a prime, got {self.characteristic}")

        if self.command in ("verify", "lambda0", "gram"):
            if self.monoid is None:
                raise ValueError(f"{self.command} needs --monoid KIND or --schur KIND")
            if self.n is None:
                self.n = self.r
            if self.n < self.r:
                raise ValueError(f"n = {self.n} must be at least r = {self.r}")
            if self.schur and self.side is None:
                self.side = Side.LEFT
            if not self.schur and self.side is not None:
                raise ValueError("--side only applies to generalized Schur algebras")
        if self.command == "witness" and self.witness_kind is None:
            raise ValueError("witness needs --kind")
        if self.command in ("count",) and not self.characteristic:
            raise ValueError("count needs a prime --p")
        if self.ordering == "nu":
            if sum(self.nu) != self.r or any(part < 0 for part in self.nu):
                raise ValueError(f"--nu {list(self.nu)} is not a composition of {self.r}")
        elif self.nu:
            raise ValueError("--nu requires --ordering nu")
        if self.command == "gram" and self.output_format != "json":
            raise ValueError("Gram matrices are written as JSON only")

    @property
    def ring(self) -> RingSpec:
        return RingSpec.field_of_characteristic(self.characteristic)

    @property
    def p(self) -> Optional[int]:
        return self.characteristic or None

    def echo(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {"command": self.command, "r": self.r}
        if self.monoid is not None:
            doc["algebra"] = "schur" if self.schur else "monoid"
            doc["monoid"] = self.monoid.value
        if self.schur:
            doc["n"] = self.n
            doc["side"] = self.side.value
        if self.witness_kind is not None:
            doc["kind"] = self.witness_kind.value
            if self.side is not None:
                doc["side"] = self.side.value
        doc["characteristic"] = self.characteristic
        doc["ordering"] = self.ordering
        if self.nu:
            doc["nu"] = list(self.nu)
        return doc


class CommandHandlers:
    def __init__(self, config: Config):
        self.config = config
        self.engine = CellEngine(GramStore(config.mongodb_uri, config.mongodb_database), config.workers)

    def dispatch(self, run: RunConfig) -> Tuple[int, Report]:
        handler: Callable[[RunConfig], Tuple[int, Report]] = getattr(self, f"{run.command}_command")
        started = time.perf_counter()
        code, report = handler(run)
        report.timing_ms = int((time.perf_counter() - started) * 1000)
        return code, report

    def _ordering(self, run: RunConfig) -> SubsetOrdering:
        if run.ordering == "nu":
            return SubsetOrdering(run.r, Composition(run.nu))
        return default_ordering(run.r)

    def _structure(self, run: RunConfig) -> Tuple[CellStructure, Optional[SchurAlgebra]]:
        spec = MonoidSpec(run.monoid, run.r)
        integers = RingSpec.integers()
        if run.schur:
            if run.ordering == "nu":
                logger.warning("Schur summands always use their own ν-ordering; --nu is ignored")
            return schur_algebra_and_cells(spec, integers, run.n, run.side, self.config, self.config.workers)
        return monoid_cell_structure(spec, integers, self._ordering(run), self.config), None

    @staticmethod
    def _layers(cs: CellStructure) -> List[Dict[str, Any]]:
        return [
            {"lambda": lam, "L_size": len(cs.left_index[lam]), "R_size": len(cs.right_index[lam])}
            for lam in cs.poset
        ]

    def verify_command(self, run: RunConfig) -> Tuple[int, Report]:
        """Build the structure and run the exhaustive axiom check."""
        cs, algebra = self._structure(run)
        axioms = verify_cell_axioms(cs, self.config)
        report = Report("verify", run.echo(), cs.dimension, self._layers(cs), {"axioms": axioms.verdict})
        report.sections["products_checked"] = axioms.products_checked
        if axioms.counterexample is not None:
            report.sections["counterexample"] = axioms.counterexample
            logger.error(f"{cs.name}: cell axioms fail ({axioms.counterexample['reason']})")
        if algebra is not None:
            report.sections["summary"] = schur_summary(cs, algebra)
        logger.info(f"verify {cs.name}: {axioms.verdict.value}")
        return (0 if axioms.passed else 1), report

    def lambda0_command(self, run: RunConfig) -> Tuple[int, Report]:
        """Λ₀ and the dimension table over a field, compared with the prediction when one applies."""
        cs, _ = self._structure(run)
        ring = run.ring
        gram_reports = self.engine.gram_reports(cs, [ring])
        dimensions = self.engine.cell_module_dimensions(cs, ring)
        computed = [report.lam for report in gram_reports if report.member_of_lambda0(ring)]

        layers = self._layers(cs)
        for layer, gram in zip(layers, gram_reports):
            layer["gram_rank"] = gram.rank_by_field[ring.label]
            layer["in_lambda0"] = gram.member_of_lambda0(ring)
            layer["radical_dim"] = dimensions[gram.lam]["radical"]
            layer["simple_dim"] = dimensions[gram.lam]["simple"]

        prediction = predicted_lambda0(run.monoid, run.side, run.characteristic, run.r)
        verdict = theorem_verdict(prediction, computed)
        if verdict is Verdict.NOT_APPLICABLE:
            logger.warning(f"no prediction covers {cs.name}; reporting Λ₀ only")
        elif verdict is Verdict.FAIL:
            logger.error(f"{cs.name} over {ring.label}: computed Λ₀ differs from the prediction")

        report = Report(
            "lambda0", run.echo(), cs.dimension, layers,
            {"axioms": Verdict.NOT_APPLICABLE, "theorem": verdict},
        )
        report.sections["field"] = ring.label
        report.sections["lambda0"] = computed
        report.sections["quasi_hereditary_sufficient"] = len(computed) == len(cs.poset)
        report.sections["prediction"] = prediction.to_json()
        return (1 if verdict is Verdict.FAIL else 0), report

    def witness_command(self, run: RunConfig) -> Tuple[int, Report]:
        """Every admissible λ's witness bracket next to its closed form."""
        results = witness_all(run.witness_kind, run.r, run.p, run.side, self.config)
        agree = all(result.agree for result in results)
        verdict = Verdict.PASS if agree else Verdict.FAIL
        report = Report("witness", run.echo(), verdicts={"axioms": Verdict.NOT_APPLICABLE, "witnesses": verdict})
        report.sections["witnesses"] = [result.to_json() for result in results]
        report.rows = [
            {
                "lambda": result.lam,
                "side": result.side.value,
                "expected": result.expected,
                "computed": result.computed,
                "agree": result.agree,
            }
            for result in results
        ]
        logger.info(f"{run.witness_kind.value} witnesses at r={run.r}: {len(results)} checked, {verdict.value}")
        return (0 if agree else 1), report

    def gram_command(self, run: RunConfig) -> Tuple[int, Report]:
        cs, _ = self._structure(run)
        ring = run.ring
        gram_reports = self.engine.gram_reports(cs, [ring])
        report = Report("gram", run.echo(), cs.dimension, self._layers(cs), {"axioms": Verdict.NOT_APPLICABLE})
        report.sections["grams"] = [gram.to_json() for gram in gram_reports]
        return 0, report

    def count_command(self, run: RunConfig) -> Tuple[int, Report]:
        """Irreducible data counted both ways against |Λ_p| and |Λ_{L,p}|."""
        p = run.characteristic
        rows = []
        for side, admissible in ((Side.RIGHT, lambda_p_set(run.r, p)), (Side.LEFT, lambda_Lp_set(run.r, p))):
            count = count_irreducible_data(run.r, p, side)
            rows.append({"side": side.value, "data": count, "lambda0_size": len(admissible), "match": count == len(admissible)})
            if count != len(admissible):
                logger.error(f"{side.value} count {count} differs from |Λ₀| = {len(admissible)} at r={run.r}, p={p}")
        verdict = Verdict.PASS if all(row["match"] for row in rows) else Verdict.FAIL
        report = Report("count", run.echo(), verdicts={"axioms": Verdict.NOT_APPLICABLE, "counts": verdict}, rows=rows)
        report.sections["counts"] = rows
        return (0 if verdict is Verdict.PASS else 1), report
