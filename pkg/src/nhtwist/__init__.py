"""Classical mechanics on twist-deformed acceleration-enlarged Newton-Hooke space-times."""

__version__ = "0.1.0"

from .constant_force import ConstantForceParams, InitialData
from .deformations import (
    DeformationSpec,
    Family,
    Variant,
    all_configurations,
    eval_f,
    eval_f_antiderivative,
    eval_f_dot,
    galilean_limit_of,
)
from .errors import ConfigurationError, EvaluationError, IntegrationError, NHTwistError
from .integrator import IntegrationConfig, Method, Trajectory, estimate_order, integrate
from .oscillator import OscillatorParams
from .phase_space import CanonicalState, NoncommutativeCoords, to_noncommutative
from .simulation import Model, simulate
