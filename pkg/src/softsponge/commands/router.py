"""Command router: meta-tools for discovering and executing commands over MCP.

The server exposes four tools instead of one per command:
  - list_command_categories
  - get_category_commands
  - execute_command
  - search_commands
"""

from __future__ import annotations

import json
from typing import TYPE_CHECKING, Any

from ..bitio import STDOUT
from ..constants import MAX_RESPONSE_CHARS
from ..exceptions import CommandExecutionError, SoftSpongeError
from ..logging_config import create_logger
from .registry import COMMAND_REGISTRY, get_categories

if TYPE_CHECKING:
    from fastmcp import FastMCP

logger = create_logger(__name__)


# room for the "truncated" summary added to a trimmed response
_TRUNCATION_NOTE_CHARS = 128


def _fit_response(result: dict[str, Any], bulk_field: str | None) -> dict[str, Any]:
    """Drop trailing items of the command's bulk list until the JSON form fits.

    The original dict is left alone; a trimmed copy records ``kept`` and ``total`` under
    ``truncated`` so the caller can rerun with ``out`` or ``report_path`` for everything.
    """
    items = result.get(bulk_field) if bulk_field else None
    if not isinstance(items, list) or not items:
        return result
    size = len(json.dumps(result, default=str))
    if size <= MAX_RESPONSE_CHARS:
        return result

    excess = size - MAX_RESPONSE_CHARS + _TRUNCATION_NOTE_CHARS
    kept = len(items)
    while kept and excess > 0:
        kept -= 1
        # item plus its ", " separator
        excess -= len(json.dumps(items[kept], default=str)) + 2

    logger.info(f"response trimmed: {bulk_field} {len(items)} -> {kept} items")
    trimmed = dict(result)
    trimmed[bulk_field] = items[:kept]
    trimmed["truncated"] = {"field": bulk_field, "kept": kept, "total": len(items)}
    return trimmed


def execute_command(command: str, arguments: dict[str, Any] | None = None) -> dict[str, Any]:
    """Run a registered command and return its result or an error dict.

    Streaming commands refuse ``out="-"``: stdout carries the MCP transport.
    """
    if command not in COMMAND_REGISTRY:
        return {
            "error": (
                f"Unknown command: {command!r}."
                " Use search_commands or list_command_categories to find commands."
            ),
        }
    spec = COMMAND_REGISTRY[command]
    args = dict(arguments or {})
    if spec.streams and args.get("out") == STDOUT:
        return {"error": f"{command} cannot write bits to stdout in server mode; pass a file."}

    try:
        result = spec.handler(**args)
    except SoftSpongeError as e:
        logger.warning(f"{command} failed: {e.message}")
        return e.to_dict()
    except TypeError as e:
        return {"error": f"Invalid arguments for {command}: {e}"}
    except Exception as e:
        error = CommandExecutionError(f"{command} failed: {e}", command=command)
        logger.exception(error.message)
        return error.to_dict()
    return _fit_response(result, spec.bulk_field)


def search_commands(query: str) -> dict[str, Any]:
    """Find commands whose name or description contains ``query``."""
    query_lower = query.lower()
    results = [
        {"name": c.name, "description": c.description, "category": c.category}
        for c in COMMAND_REGISTRY.values()
        if query_lower in c.name.lower() or query_lower in c.description.lower()
    ]
    return {"query": query, "result_count": len(results), "commands": results}


def register_router_tools(mcp: FastMCP) -> None:
    """Register the 4 router meta-tools with the FastMCP server."""

    @mcp.tool()
    def list_command_categories() -> dict[str, Any]:
        """List all command categories with their commands.

        Use get_category_commands to see parameters of the commands in a category.
        """
        return {
            "categories": {
                name: {"command_count": len(commands), "commands": [c.name for c in commands]}
                for name, commands in sorted(get_categories().items())
            }
        }

    @mcp.tool()
    def get_category_commands(category: str) -> dict[str, Any]:
        """Get names, descriptions and parameter schemas of a category's commands.

        Args:
            category: Category name from list_command_categories.
        """
        categories = get_categories()
        if category not in categories:
            return {
                "error": (
                    f"Unknown category: {category!r}."
                    " Use list_command_categories to see available categories."
                ),
            }
        return {
            "category": category,
            "commands": [
                {"name": c.name, "description": c.description, "parameters": c.parameters}
                for c in categories[category]
            ],
        }

    @mcp.tool(name="execute_command")
    def execute_command_tool(
        command: str, arguments: dict[str, Any] | None = None
    ) -> dict[str, Any]:
        """Execute a command by name with the given arguments.

        Args:
            command: Command name, e.g. 'run', 'analyze', 'pcc'.
            arguments: Command arguments as a JSON object (optional).
        """
        return execute_command(command, arguments)

    @mcp.tool(name="search_commands")
    def search_commands_tool(query: str) -> dict[str, Any]:
        """Search commands by name or description.

        Args:
            query: Search term (e.g., 'entropy', 'correlation', 'nonce').
        """
        return search_commands(query)
