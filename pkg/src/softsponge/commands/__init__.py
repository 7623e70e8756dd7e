"""softsponge commands, shared by the CLI and the MCP server."""

# Import modules to trigger command registration via register_command() calls
from . import analysis, bench, experiments, generate  # noqa: F401
from .registry import COMMAND_REGISTRY, CommandSpec, get_categories, register_command

__all__ = [
    "COMMAND_REGISTRY",
    "CommandSpec",
    "get_categories",
    "register_command",
]
