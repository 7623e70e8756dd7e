"""Command registry: one declaration per command, shared by the CLI and the MCP router."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from collections.abc import Callable


@dataclass
class CommandSpec:
    """Declarative specification of one command."""

    name: str
    description: str
    parameters: dict[str, Any]
    handler: Callable[..., dict[str, Any]]
    category: str = "general"
    streams: bool = False  # may write raw bits to stdout
    text_field: str | None = None  # list printed one item per line instead of JSON
    bulk_field: str | None = None  # list trimmed when a server response runs long


COMMAND_REGISTRY: dict[str, CommandSpec] = {}


def register_command(
    name: str,
    description: str,
    parameters: dict[str, Any],
    handler: Callable[..., dict[str, Any]],
    *,
    category: str = "general",
    streams: bool = False,
    text_field: str | None = None,
    bulk_field: str | None = None,
) -> None:
    """Register a command in the global registry."""
    COMMAND_REGISTRY[name] = CommandSpec(
        name=name,
        description=description,
        parameters=parameters,
        handler=handler,
        category=category,
        streams=streams,
        text_field=text_field,
        bulk_field=bulk_field,
    )


def get_categories() -> dict[str, list[CommandSpec]]:
    """Return commands grouped by category."""
    categories: dict[str, list[CommandSpec]] = {}
    for command in COMMAND_REGISTRY.values():
        categories.setdefault(command.category, []).append(command)
    return categories
