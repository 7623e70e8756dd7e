"""softsponge MCP server: exposes the command registry over stdio."""

from __future__ import annotations

from typing import TYPE_CHECKING

from .logging_config import new_run_id, setup_logging

if TYPE_CHECKING:
    from fastmcp import FastMCP


def create_server() -> FastMCP:
    """Create and configure the softsponge MCP server.

    Raises:
        ImportError: If the ``mcp`` extra is not installed.
    """
    from fastmcp import FastMCP

    from .commands.router import register_router_tools

    mcp = FastMCP("softsponge")
    register_router_tools(mcp)
    return mcp


def main() -> None:
    """Serve one session over stdio."""
    setup_logging()
    new_run_id()
    create_server().run()


if __name__ == "__main__":
    main()
