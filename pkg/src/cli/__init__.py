"""
CLI module
Subcommands maxcut, tap, calibrate, fit, oracle and gen
"""

from .calibrate_command import cmd_calibrate
from .main import EXIT_INPUT, EXIT_IO, EXIT_OK, EXIT_SOLVE, build_parser, main, run
from .maxcut_command import cmd_maxcut
from .tap_command import cmd_tap
from .tools import cmd_fit, cmd_gen, cmd_oracle

__all__ = [
    'EXIT_INPUT', 'EXIT_IO', 'EXIT_OK', 'EXIT_SOLVE', 'build_parser', 'main', 'run',
    'cmd_calibrate', 'cmd_maxcut', 'cmd_tap', 'cmd_fit', 'cmd_gen', 'cmd_oracle',
]
