"""Digital alpha-curvelet frames, cartoon images and the approximation experiments."""

from ._curvlab import (
    ConfigError,
    Frame,
    FrameParams,
    bessel_j,
    default_config,
    disc_spectrum,
    error_curve,
    experiments,
    render,
    run_experiment,
)

__all__ = [
    "ConfigError",
    "Frame",
    "FrameParams",
    "bessel_j",
    "default_config",
    "disc_spectrum",
    "error_curve",
    "experiments",
    "render",
    "run_experiment",
]
