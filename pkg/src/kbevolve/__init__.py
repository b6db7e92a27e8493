"""ABox evolution for SHI knowledge bases via Neg-renaming and minimal models."""

from .evolution import (
    DeleteRequest, EvolutionResult, Evolver, InconsistentTBoxError, InvalidRequestError,
    brute_force_delete, brute_force_insert, brute_force_repair, del_of_model, delete,
    entails, insert, repair,
)
from .model import (
    GCI, KnowledgeBase, RBox, Role, TBox, ConceptAssertion, RoleAssertion,
)
from .parser import ParseError, parse_assertion, parse_concept, parse_kb, serialize_kb

__all__ = [
    "DeleteRequest", "EvolutionResult", "Evolver", "InconsistentTBoxError", "InvalidRequestError",
    "brute_force_delete", "brute_force_insert", "brute_force_repair", "del_of_model", "delete",
    "entails", "insert", "repair", "GCI", "KnowledgeBase", "RBox", "Role", "TBox",
    "ConceptAssertion", "RoleAssertion", "ParseError", "parse_assertion", "parse_concept",
    "parse_kb", "serialize_kb",
]
