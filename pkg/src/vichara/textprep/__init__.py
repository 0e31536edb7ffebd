from .segment import Sentence, segment
from .roles import (
    ROLES,
    LabeledSentence,
    RoleError,
    NoFinalStatementError,
    FileRoleBackend,
    HeuristicRoleBackend,
    RemoteRoleBackend,
    make_backend,
    classify_roles,
    facts_of,
    final_statement,
)

__all__ = [
    "Sentence", "segment",
    "ROLES", "LabeledSentence", "RoleError", "NoFinalStatementError",
    "FileRoleBackend", "HeuristicRoleBackend", "RemoteRoleBackend",
    "make_backend", "classify_roles", "facts_of", "final_statement",
]
