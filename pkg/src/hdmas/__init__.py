"""Verification library for homogeneous dynamic multi-agent systems.

Transitions are guarded by quantifier-free linear integer arithmetic over
action counters; specifications are strategic-ability formulas over numbers
of controllable and uncontrollable agents.  Model checking reduces to
deciding truth of Presburger formulas.
"""

__version__ = "0.1.0"
