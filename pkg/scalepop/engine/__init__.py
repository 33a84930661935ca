from .models import SimConfig, AgentState, PendingSettlement
from .rules import tf_decision, tf_decisions, discretize, settle, spawn_uniform
from .population import Population, kill_and_respawn
from .settlements import SettlementRing
from .simulation import Simulation, SimulationResult, AuditCounters, default_merchant, step, simulate

__all__ = [
    'SimConfig',
    'AgentState',
    'PendingSettlement',
    'tf_decision',
    'tf_decisions',
    'discretize',
    'settle',
    'spawn_uniform',
    'Population',
    'kill_and_respawn',
    'SettlementRing',
    'Simulation',
    'SimulationResult',
    'AuditCounters',
    'default_merchant',
    'step',
    'simulate',
]
