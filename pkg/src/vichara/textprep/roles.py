"""Rhetorical role labeling over segmented sentences.

The classifier itself is pluggable: a file backend replays precomputed
labels, a heuristic backend applies the shipped keyword/position rule
table, and a remote backend calls an HTTP service. Downstream stages
only consume the seven-role schema.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import requests

from .segment import Sentence

ROLES = (
    "Facts",
    "RulingByLowerCourt",
    "Argument",
    "Statute",
    "Precedent",
    "RatioOfTheDecision",
    "RulingByPresentCourt",
)


class RoleError(ValueError):
    pass


def validate_role(name: str) -> str:
    if name not in ROLES:
        raise RoleError(f"unknown rhetorical role {name!r}; valid roles: {list(ROLES)}")
    return name


@dataclass
class LabeledSentence:
    sentence: Sentence
    role: str
    backend_id: str


class FileRoleBackend:
    """Replays precomputed labels from a JSONL of {case_id, sentence_index, role}.

    Fails rather than guesses: a sentence without a stored label is an error.
    """

    backend_id = "file"

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._labels: dict[tuple[str, int], str] = {}
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise RoleError(f"{self.path}:{lineno}: malformed JSON: {exc}") from exc
                role = validate_role(obj["role"])
                self._labels[(obj["case_id"], int(obj["sentence_index"]))] = role

    def label(self, case_id: str, sentences: list[Sentence]) -> list[str]:
        out = []
        for s in sentences:
            key = (case_id, s.index)
            if key not in self._labels:
                raise RoleError(
                    f"no precomputed role for case {case_id!r} sentence {s.index}")
            out.append(self._labels[key])
        return out


class HeuristicRoleBackend:
    """Applies the shipped keyword/position rule table; fully offline."""

    backend_id = "heuristic"

    def __init__(self, rules_path: str | Path | None = None):
        if rules_path is None:
            raw = resources.files(__package__).joinpath("data/role_rules.json").read_text("utf-8")
        else:
            raw = Path(rules_path).read_text("utf-8")
        spec = json.loads(raw)
        self.default_role = validate_role(spec["default_role"])
        self.role_priority = [validate_role(r) for r in spec["role_priority"]]
        self.rules = []
        for rule in spec["rules"]:
            self.rules.append({
                "re": re.compile(rule["pattern"], re.IGNORECASE),
                "role": validate_role(rule["role"]),
                "priority": int(rule["priority"]),
                "zone": tuple(rule.get("zone", (0.0, 1.0))),
            })

    def label(self, case_id: str, sentences: list[Sentence]) -> list[str]:
        count = len(sentences)
        out = []
        for s in sentences:
            pos = (s.index + 1) / count if count else 1.0
            matches = [
                r for r in self.rules
                if r["zone"][0] <= pos <= r["zone"][1] and r["re"].search(s.text)
            ]
            if not matches:
                out.append(self.default_role)
                continue
            best_priority = max(r["priority"] for r in matches)
            tied = [r["role"] for r in matches if r["priority"] == best_priority]
            out.append(min(tied, key=self.role_priority.index))
        return out


class RemoteRoleBackend:
    """POSTs {"sentences": [...]} and expects {"roles": [...]} back."""

    backend_id = "remote"

    def __init__(self, url: str, timeout: float = 30.0, max_in_flight: int = 4):
        self.url = url
        self.timeout = timeout
        self._gate = threading.Semaphore(max_in_flight)

    def label(self, case_id: str, sentences: list[Sentence]) -> list[str]:
        payload = {"sentences": [s.text for s in sentences]}
        with self._gate:
            try:
                resp = requests.post(self.url, json=payload, timeout=self.timeout)
                resp.raise_for_status()
                body = resp.json()
            except (requests.RequestException, ValueError) as exc:
                raise RoleError(f"remote role backend failed for case {case_id!r}: {exc}") from exc
        roles = body.get("roles") if isinstance(body, dict) else None
        if not isinstance(roles, list) or len(roles) != len(sentences):
            raise RoleError(
                f"remote role backend returned {len(roles) if isinstance(roles, list) else 'no'} "
                f"roles for {len(sentences)} sentences (case {case_id!r})")
        return [validate_role(r) for r in roles]


def make_backend(spec: str):
    """Build a backend from a "kind" or "kind:arg" selector string."""
    kind, _, arg = spec.partition(":")
    if kind == "file":
        if not arg:
            raise RoleError("file role backend needs a path, e.g. file:roles.jsonl")
        return FileRoleBackend(arg)
    if kind == "heuristic":
        return HeuristicRoleBackend(arg or None)
    if kind == "remote":
        if not arg:
            raise RoleError("remote role backend needs a URL, e.g. remote:http://host/roles")
        return RemoteRoleBackend(arg)
    raise RoleError(f"unknown role backend {kind!r}; valid: file, heuristic, remote")


def classify_roles(case_id: str, sentences: list[Sentence], backend) -> list[LabeledSentence]:
    roles = backend.label(case_id, sentences)
    if len(roles) != len(sentences):
        raise RoleError(f"backend returned {len(roles)} labels for {len(sentences)} sentences")
    return [
        LabeledSentence(sentence=s, role=validate_role(r), backend_id=backend.backend_id)
        for s, r in zip(sentences, roles)
    ]


def facts_of(labeled: list[LabeledSentence]) -> list[Sentence]:
    """Order-preserving filter to the Facts sentences."""
    return [ls.sentence for ls in labeled if ls.role == "Facts"]


class NoFinalStatementError(LookupError):
    pass


def final_statement(labeled: list[LabeledSentence]) -> Sentence:
    """The last sentence labeled RulingByPresentCourt."""
    hits = [ls.sentence for ls in labeled if ls.role == "RulingByPresentCourt"]
    if not hits:
        raise NoFinalStatementError("no sentence labeled RulingByPresentCourt")
    return hits[-1]
