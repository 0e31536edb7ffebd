"""Domain types shared across the pipeline stages."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict


# The binary outcome space: 1 = appeal granted, 0 = appeal dismissed.
GRANTED = 1
DISMISSED = 0

ABLATION_FLAGS = (
    "no_rhetorical",
    "no_context",
    "no_decision_points",
    "no_ruling",
)


def stable_json(obj) -> str:
    """Serialize with stable key ordering so artifacts and prompt payloads diff cleanly."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


@dataclass
class CaseRecord:
    """One appellate case: the proceeding document plus optional gold annotations."""

    case_id: str
    text: str
    gold_label: int | None = None
    reference_explanation: str | None = None

    def __post_init__(self):
        if not self.case_id:
            raise ValueError("case_id must be nonempty")
        if not self.text:
            raise ValueError(f"case {self.case_id!r}: text must be nonempty")
        if self.gold_label is not None and self.gold_label not in (0, 1):
            raise ValueError(f"case {self.case_id!r}: gold_label must be 0 or 1")


@dataclass
class CaseContext:
    """The six case-context fields. Empty string means "not mentioned", never a missing key."""

    appellants: str = ""
    respondents: str = ""
    issue: str = ""
    appellant_stance: str = ""
    respondent_stance: str = ""
    present_court: str = ""

    FIELDS = ("appellants", "respondents", "issue",
              "appellant_stance", "respondent_stance", "present_court")

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.FIELDS}


@dataclass
class DecisionPoint:
    """A discrete legal determination extracted from the case document."""

    issue: str
    decision_maker: str
    outcome: str
    time: str | None = None
    reasoning: str | None = None
    present_court_decision: bool = False

    def __post_init__(self):
        if not self.issue or not self.decision_maker or not self.outcome:
            raise ValueError("decision point requires nonempty issue, decision_maker, outcome")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Chunk:
    """A prompt-sized segment of the case document."""

    index: int
    text: str
    source: str  # "bullet_group" or "token_window"
    token_count: int


@dataclass
class CourtRuling:
    """The generated narrative of the present court's final ruling."""

    text: str

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("ruling text must be nonempty")


@dataclass
class Prediction:
    """Binary appeal outcome: 1 granted, 0 dismissed."""

    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError(f"prediction must be 0 or 1, got {self.value!r}")


@dataclass
class Explanation:
    """Five-section structured explanation, in fixed section order."""

    facts: str
    issues: str
    law_and_precedents: str
    reasoning: str
    conclusion: str

    SECTIONS = ("facts", "issues", "law_and_precedents", "reasoning", "conclusion")

    def __post_init__(self):
        for name in self.SECTIONS:
            if not getattr(self, name).strip():
                raise ValueError(f"explanation section {name!r} must be nonempty")

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.SECTIONS}

    def body_text(self) -> str:
        """Section contents joined without headers; used for lexical scoring."""
        return "\n\n".join(getattr(self, k) for k in self.SECTIONS)


@dataclass
class RunArtifacts:
    """Everything one case run produced, stage by stage."""

    context: CaseContext | None = None
    decision_points: list[DecisionPoint] | None = None
    ruling: CourtRuling | None = None
    prediction: Prediction | None = None
    explanation: Explanation | None = None
    warnings: list[str] = field(default_factory=list)


@dataclass
class RunManifest:
    """Provenance for one (run, seed) execution."""

    run_id: str
    seed: int
    provider_id: str
    model_id: str
    config_digest: str
    ablation_flags: set[str] = field(default_factory=set)
    prompt_digests: dict[str, str] = field(default_factory=dict)
    started_at: str = ""
    finished_at: str = ""

    def __post_init__(self):
        bad = self.ablation_flags - set(ABLATION_FLAGS)
        if bad:
            raise ValueError(f"unknown ablation flags: {sorted(bad)}; "
                             f"valid: {list(ABLATION_FLAGS)}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ablation_flags"] = sorted(self.ablation_flags)
        return d


@dataclass
class SyntheticCase:
    """A generated case whose ground truth is known by construction."""

    record: CaseRecord
    planted_context: CaseContext
    planted_points: list[DecisionPoint]
    planted_label: int
    sentence_roles: list[str] = field(default_factory=list)
