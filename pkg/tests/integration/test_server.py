"""Integration tests for the MCP server and the router tools it serves."""

from __future__ import annotations

import pytest

pytest.importorskip("fastmcp")

from softsponge.commands.router import execute_command  # noqa: E402
from softsponge.server import create_server  # noqa: E402


class TestServerCreation:
    def test_create_server(self) -> None:
        server = create_server()
        assert server is not None
        assert server.name == "softsponge"


class TestEndToEnd:
    """Nonces exported through the router match a second export with the same config."""

    def test_export_is_reproducible(self) -> None:
        first = execute_command("export-nonce", {"count": 2, "device_seed": 4})
        second = execute_command("export-nonce", {"count": 2, "device_seed": 4})
        assert first["nonces"] == second["nonces"]
