"""V2X channel simulator and genetic-algorithm calibration.

The heavy lifting lives in the compiled ``_core`` module; this package
re-exports it and adds a few file helpers.
"""

from pathlib import Path

from ._core import (  # noqa: F401
    ChannelParams,
    ConfigError,
    DataRate,
    DomainError,
    FadingParams,
    FastFading,
    ParseError,
    RadioParams,
    SlowFading,
    calibrate,
    deterministic_gain_db,
    free_space_rx_power,
    heatmap,
    is_received,
    mean_rx_power,
    nakagami_samples,
    objective,
    pdr,
    preset,
    resolve_config,
    rmse,
    simulate,
    synth,
)

__version__ = "0.1.0"


def write_files(files, directory):
    """Write a ``{name: contents}`` mapping (as returned by synth/simulate)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (directory / name).write_text(text)
    return directory
