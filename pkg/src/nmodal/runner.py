"""Engine dispatch, corpus runs and JSON-lines result records."""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .config import DEFAULT, Budgets
from .formula import Formula, parse, to_text
from .levels import check_consequence_n
from .matrices import matrix_for
from .restrictions import RNSystem, as_system, check_consequence_rn, rn_system
from .valuations import COUNTERMODEL, Valuation, Verdict, check_consequence_local, table_violations

NMATRIX, RN = "nmatrix", "rn"
# restriction presets standing for each Nmatrix
RN_PRESET = {"M": (), "MK": ("K",), "MKT": ("K", "T"), "MKT4": ("K", "T", "4")}


@dataclass(frozen=True)
class RunConfig:
    system: str = "M"
    semantics: str = NMATRIX
    axioms: Tuple[str, ...] = ()
    rule_n: bool = False
    budgets: Budgets = DEFAULT
    output: Optional[str] = None

    def __post_init__(self):
        if self.semantics not in (NMATRIX, RN):
            raise ValueError(f"semantics must be {NMATRIX!r} or {RN!r}")
        if self.semantics == NMATRIX and self.axioms:
            raise ValueError("axioms only apply to the rn semantics")
        self.engine()  # validates system and axioms

    @property
    def signature(self) -> str:
        return self.engine().signature

    def engine(self):
        """The MatrixSpec or RNSystem this configuration evaluates in."""
        if self.semantics == NMATRIX:
            return matrix_for(self.system)
        axioms = self.axioms
        if not axioms:
            if self.system not in RN_PRESET:
                raise ValueError(f"no restriction preset for {self.system!r}; pass axioms")
            axioms = RN_PRESET[self.system]
        base = matrix_for("M2") if self.system == "M2" else None
        return rn_system(list(axioms), base)

    @property
    def label(self) -> str:
        name = self.system if self.semantics == NMATRIX else self.engine().name
        return name + "+N" if self.rule_n else name


def evaluate(cfg: RunConfig, goal: Formula, premises: Sequence[Formula] = ()) -> Verdict:
    engine = cfg.engine()
    bits = cfg.budgets.max_free_bits
    if cfg.rule_n:
        return check_consequence_n(engine, premises, goal, budgets=cfg.budgets)
    if isinstance(engine, RNSystem):
        return check_consequence_rn(engine, premises, goal, bits)
    return check_consequence_local(engine, premises, goal, bits)


@dataclass
class ResultRecord:
    formula: str
    system: str
    verdict: Optional[str] = None
    witness: Optional[list] = None
    timings: Dict[str, float] = field(default_factory=dict)
    meta: Dict[str, object] = field(default_factory=dict)
    error: Optional[str] = None

    def to_json(self) -> str:
        return json.dumps({k: v for k, v in asdict(self).items() if v is not None})

    @classmethod
    def from_json(cls, line: str) -> "ResultRecord":
        return cls(**json.loads(line))


def evaluate_record(cfg: RunConfig, text: str) -> ResultRecord:
    rec = ResultRecord(text, cfg.label)
    start = time.perf_counter()
    try:
        goal = parse(text, cfg.signature)
        verdict = evaluate(cfg, goal)
    except Exception as exc:  # recorded in-line; the run continues
        rec.error = f"{type(exc).__name__}: {exc}"
        return rec
    rec.timings["engine"] = round(time.perf_counter() - start, 6)
    rec.verdict = verdict.status
    if verdict.status == COUNTERMODEL:
        rec.witness = verdict.witness.to_json()
    if "fragment" in verdict.info:
        rec.meta["fragment_size"] = len(verdict.info["fragment"]["formulas"])
        rec.meta["levels"] = verdict.info["levels"]
    return rec


def _corpus_lines(source: Iterable[str]) -> List[str]:
    return [s.strip() for s in source if s.strip() and not s.lstrip().startswith("%")]


def run_corpus(cfg: RunConfig, source: Iterable[str], jobs: int = 1) -> Iterator[ResultRecord]:
    """One record per non-blank line of ``source``, in input order.

    Lines starting with ``%`` are comments.
    """
    lines = _corpus_lines(source)
    if jobs <= 1:
        for text in lines:
            yield evaluate_record(cfg, text)
        return
    with ProcessPoolExecutor(jobs) as pool:
        yield from pool.map(evaluate_record, [cfg] * len(lines), lines, chunksize=16)


def write_records(records: Iterable[ResultRecord], out) -> int:
    n = 0
    for rec in records:
        out.write(rec.to_json() + "\n")
        out.flush()
        n += 1
    return n


# ------------------------------------------------------------------ replay

def replay_record(rec: ResultRecord, cfg: RunConfig) -> List[str]:
    """Problems found when re-evaluating a countermodel record's witness; empty means confirmed."""
    if rec.verdict != COUNTERMODEL:
        return []
    if not rec.witness:
        return ["countermodel without witness"]
    sig = cfg.signature
    closure = tuple(parse(item["formula"], sig) for item in rec.witness)
    v = Valuation(closure, tuple(tuple(item["snapshot"]) for item in rec.witness))
    engine = as_system(cfg.engine())
    problems = table_violations(engine.base, v)
    for r in engine.restrictions:
        for inst in r.violations(v):
            problems.append(f"restriction {r.name} fails on {', '.join(map(to_text, inst))}")
    goal = parse(rec.formula, sig)
    if goal not in v:
        problems.append("witness does not cover the formula")
    elif engine.base.designated(v[goal]):
        problems.append("witness designates the formula")
    return problems


# ----------------------------------------------------------------- compare

@dataclass(frozen=True)
class Disagreement:
    formula: str
    nmatrix: str
    rn: str


@dataclass
class CompareReport:
    system: str
    checked: int = 0
    disagreements: List[Disagreement] = field(default_factory=list)
    errors: List[Tuple[str, str]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "checked": self.checked,
            "disagreements": [asdict(d) for d in self.disagreements],
            "errors": [{"formula": f, "error": e} for f, e in self.errors],
        }


def compare_engines(cfg: RunConfig, corpus: Iterable) -> CompareReport:
    """Nmatrix verdicts of ``cfg.system`` against its restriction preset over M."""
    nm = replace(cfg, semantics=NMATRIX, axioms=(), rule_n=False)
    rn = replace(cfg, semantics=RN, axioms=RN_PRESET.get(cfg.system, cfg.axioms), rule_n=False)
    report = CompareReport(cfg.system)
    for item in corpus:
        text = item if isinstance(item, str) else to_text(item)
        try:
            f = item if isinstance(item, Formula) else parse(item, nm.signature)
            a = evaluate(nm, f).status
            b = evaluate(rn, f).status
        except Exception as exc:  # recorded per formula
            report.errors.append((text, f"{type(exc).__name__}: {exc}"))
            continue
        report.checked += 1
        if a != b:
            report.disagreements.append(Disagreement(text, a, b))
    return report
