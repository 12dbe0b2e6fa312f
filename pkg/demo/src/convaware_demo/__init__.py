"""convaware-demo: toy CNN consumer for exported weight files."""

from .demo import (
    CONV_SHAPES,
    CSV_COLUMNS,
    CSV_NAME,
    PLOT_NAME,
    ConfigError,
    DemoConfig,
    DigitsNet,
    digits_split,
    generate_weight_files,
    plant_kernels,
    run_comparison,
    train_single,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DemoConfig",
    "DigitsNet",
    "CONV_SHAPES",
    "CSV_COLUMNS",
    "CSV_NAME",
    "PLOT_NAME",
    "digits_split",
    "generate_weight_files",
    "plant_kernels",
    "run_comparison",
    "train_single",
]
