"""Example models, small-model enumeration, fuzzing and fleet validity checks."""

from .builtins import BUILTINS, builtin_document, builtin_model
from .enumeration import enumerate_topologies
from .generators import el_formulas, formula_pool, random_formula, random_model
from .validity import (SCHEMES, Counterexample, FleetSpec, SchemeInstance, Verdict, check_scheme,
                       check_validity, minimize_counterexample)
