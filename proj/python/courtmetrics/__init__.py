"""Deterministic tennis-match analytics on detection streams.

Thin wrapper over the C++ core: every function takes and returns strings
(JSON Lines streams, TOML configs, JSON/CSV artifacts), so outputs are
byte-identical to the ``courtmetrics`` CLI.
"""

from ._core import (
    __version__,
    analyze,
    default_config,
    itf_court,
    make_rally_script,
    roundtrip,
    synth_rally,
    validate,
)

__all__ = [
    "__version__",
    "analyze",
    "default_config",
    "itf_court",
    "make_rally_script",
    "roundtrip",
    "synth_rally",
    "validate",
]
