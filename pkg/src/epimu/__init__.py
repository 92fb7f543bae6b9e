"""Epistemic mu-calculus model checking for set agreement over simplicial models."""

__version__ = "0.1.0"

from .formulas import agree, dec, ifun, know, ofun, phi, valid_f
from .logic import (And, Atom, DKnow, NegAtom, Nu, Or, SimplicialModel, Var, common_knowledge,
                    evaluate, satisfies, valid)
from .models import (input_complex, k_concurrency_model, protocol_model_iis, task_model_sak,
                     three_facet_model)
from .parser import parse
from .solvability import knowledge_gain_check, search_morphism, verify_morphism
from .subdivision import OSP, enumerate_osp, flip, incident_by_osp, iterated_subdivision

__all__ = [
    "agree", "dec", "ifun", "know", "ofun", "phi", "valid_f",
    "And", "Atom", "DKnow", "NegAtom", "Nu", "Or", "SimplicialModel", "Var", "common_knowledge",
    "evaluate", "satisfies", "valid",
    "input_complex", "k_concurrency_model", "protocol_model_iis", "task_model_sak", "three_facet_model",
    "parse", "knowledge_gain_check", "search_morphism", "verify_morphism",
    "OSP", "enumerate_osp", "flip", "incident_by_osp", "iterated_subdivision",
]
