"""Generation commands: stream bits and export boot-strap nonces."""

from __future__ import annotations

from typing import Any

import numpy as np

from ..config import RunConfig
from .common import finish, resolve_config, verdict_summary, with_config_parameters
from .registry import register_command

DEFAULT_NONCE_COUNT = 300  # 102,300 bits


def _run_handler(config: RunConfig | None = None, **overrides: Any) -> dict[str, Any]:
    """Generate whole cycles and write the packed bits to ``out``.

    Args:
        config: Base configuration; keyword overrides are applied on top.
    """
    from ..pipeline import run_trng

    cfg = resolve_config(config, overrides)
    report = run_trng(cfg)
    return finish(cfg, report.to_dict())


def _export_nonce_handler(
    count: int = DEFAULT_NONCE_COUNT, config: RunConfig | None = None, **overrides: Any
) -> dict[str, Any]:
    """Repeat the boot-strap phase and test the concatenated nonces.

    Args:
        count: Number of boot-strap phases.
        config: Base configuration; keyword overrides are applied on top.
    """
    from ..bitio import emit_bits
    from ..exceptions import ValidationError
    from ..pipeline import bootstrap_nonces
    from ..stats import BitSequence, nonce_quality
    from ..validation import validate_count

    checked = validate_count(count, "count")
    if not checked.valid:
        raise ValidationError(checked.error or "invalid count", field="count")

    cfg = resolve_config(config, overrides)
    nonces = bootstrap_nonces(cfg, int(checked.value))
    bits = np.concatenate([n.bits for n in nonces])
    result: dict[str, Any] = {
        "count": len(nonces),
        "bits": int(bits.size),
        "quality": verdict_summary(nonce_quality(BitSequence.from_bits(bits))),
        "config": cfg.to_dict(),
    }
    if cfg.out:
        result["bytes_written"] = emit_bits(bits, cfg.out)
    else:
        result["nonces"] = [n.to_hex() for n in nonces]
    return finish(cfg, result)


register_command(
    name="run",
    description=(
        "Run boot-strap, timing and sponge cycles until the bit budget is met."
        " Bits are packed MSB-first with no header."
    ),
    parameters=with_config_parameters(
        {
            "out": {"type": "string", "description": "Output file for the packed bits."},
            "trace_path": {"type": "string", "description": "Binary DVD_cs trace file."},
        }
    ),
    handler=_run_handler,
    category="generate",
    streams=True,
)

register_command(
    name="export-nonce",
    description=(
        "Collect nonces from repeated boot-straps and report monobit and poker p-values"
        " over their concatenation."
    ),
    parameters=with_config_parameters(
        {
            "count": {"type": "integer", "description": "Boot-strap phases (default 300)."},
            "out": {"type": "string", "description": "Write the nonce bits packed to this file."},
        }
    ),
    handler=_export_nonce_handler,
    category="generate",
    streams=True,
    text_field="nonces",
    bulk_field="nonces",
)
