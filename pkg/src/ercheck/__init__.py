"""Energetic-reasoning feasibility checks for cumulative scheduling."""
from .checkers import CHECKERS, check_baptiste, check_cubic, check_sweep, get_checker
from .instances import GenParams, ParseError, gen_random, gen_rcpsp, load, parse_psplib, save
from .model import (
    Activity,
    CheckResult,
    ContractError,
    CuspInstance,
    RcpspInstance,
    Witness,
    brute_force_check,
    min_intersection,
    slack,
)
from .solver import minimize_makespan, solve_decision
from .timetable import tt_check, tt_filter

__version__ = "0.1.0"

__all__ = [
    "Activity",
    "CuspInstance",
    "RcpspInstance",
    "CheckResult",
    "Witness",
    "ContractError",
    "ParseError",
    "min_intersection",
    "slack",
    "brute_force_check",
    "check_cubic",
    "check_baptiste",
    "check_sweep",
    "CHECKERS",
    "get_checker",
    "tt_check",
    "tt_filter",
    "solve_decision",
    "minimize_makespan",
    "GenParams",
    "gen_random",
    "gen_rcpsp",
    "load",
    "save",
    "parse_psplib",
]
