from ._biofilm import (
    Config,
    ConfigError,
    DomainError,
    NumericalAbort,
    SolverError,
    initial_state,
    run,
    simulate,
    steady,
)

__all__ = [
    "Config",
    "ConfigError",
    "DomainError",
    "NumericalAbort",
    "SolverError",
    "initial_state",
    "run",
    "simulate",
    "steady",
]
