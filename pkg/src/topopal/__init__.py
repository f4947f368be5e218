"""Public announcements on topological subset models.

Formulas are evaluated at scenarios ``(x, U)``; an announcement moves the
range to the interior of the announced formula's extension.
"""

from .bisim import (BisimRelation, is_partial_bisimulation, largest_partial_bisimulation,
                    check_invariance)
from .documents import ModelDocument, load_model, save_model
from .model import (Evaluator, Mode, Scenario, SubsetModel, UndefinedUpdate, evaluate, extension,
                    satisfying_scenarios, scenarios)
from .reduction import ReductionTrace, RewriteStep, reduce, reduce_step
from .syntax import (And, Announce, Effort, Formula, Int, Know, Not, Prop, TOP, BOT, complexity,
                     parse, render)
from .topology import Topology, WorldSet, generate_topology, interior, verify_topology

__version__ = "0.1.0"
