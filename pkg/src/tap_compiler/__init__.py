"""
TAP compiler module
Vehicle-group discretization, quadratic fits, QUBO/Ising compilation, decoding and two-step solving
"""

from .discretization import (
    DiscretizationPlan,
    build_plan,
    group_route_sets,
    incidence_matrix,
    reachable_extra_flow,
    variable_offsets,
)
from .fitting import QuadraticFit, apply_fit, beckmann_integrand, fit_quadratic, fit_shared, fit_table, fit_target
from .compiler import (
    MIN_LAMBDA,
    CompiledTap,
    DecodedSolution,
    approx_objective,
    choose_lambda,
    compile_tap,
    decode,
    flows_from_choice,
)
from .two_step import (
    SOLVERS,
    StepOutcome,
    TwoStepResult,
    compile_refit,
    feasibility_evaluator,
    make_solver,
    refit_intervals,
    refit_links,
    shared_fits,
    solve_compiled,
    solve_one_step,
    two_step_solve,
)
from .report import format_report, parse_report, write_report

__all__ = [
    'DiscretizationPlan', 'build_plan', 'group_route_sets', 'incidence_matrix',
    'reachable_extra_flow', 'variable_offsets',
    'QuadraticFit', 'apply_fit', 'beckmann_integrand', 'fit_quadratic', 'fit_shared', 'fit_table',
    'fit_target',
    'MIN_LAMBDA', 'CompiledTap', 'DecodedSolution', 'approx_objective', 'choose_lambda',
    'compile_tap', 'decode', 'flows_from_choice',
    'SOLVERS', 'StepOutcome', 'TwoStepResult', 'compile_refit', 'feasibility_evaluator', 'make_solver',
    'refit_intervals', 'refit_links', 'shared_fits', 'solve_compiled', 'solve_one_step', 'two_step_solve',
    'format_report', 'parse_report', 'write_report',
]
