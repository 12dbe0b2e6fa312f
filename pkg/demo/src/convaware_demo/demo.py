"""Toy convolutional consumer for exported weight files.

Trains a small digits classifier whose conv kernels are loaded verbatim
from NPY files written by the convaware CLI, then compares convergence
across initialization schemes as the median over seeded runs. The demo
contains no initializer logic of its own: every kernel starts exactly
as some file's float32 bytes say, so the comparison doubles as an
integration proof of the export boundary.
"""

from __future__ import annotations

import csv
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import torch
from sklearn.datasets import load_digits
from torch import nn


class ConfigError(Exception):
    """A demo configuration that cannot be trained as given."""


# layer name -> (filters, input channels, rows, cols); files must match exactly
CONV_SHAPES = {
    "conv1": (8, 1, 3, 3),
    "conv2": (16, 8, 3, 3),
}

_SPLIT_SEED = 12345
_TEST_FRACTION = 0.25

CSV_NAME = "comparison.csv"
PLOT_NAME = "convergence.png"
CSV_COLUMNS = ("epoch", "scheme", "median_loss", "median_accuracy")


@dataclass(frozen=True)
class DemoConfig:
    """One comparison run: which weight files to train, and for how long.

    weight_files maps a scheme label to one (conv1 path, conv2 path)
    pair per seed; the pair order must follow `seeds`. Every run of the
    same seed index shares its torch stream across schemes, so the
    kernel files are the only difference the comparison measures.
    """

    weight_files: dict[str, tuple[tuple[Path, Path], ...]]
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    epochs: int = 10
    batch_size: int = 64
    dataset: str = "digits"

    def __post_init__(self) -> None:
        if self.dataset != "digits":
            raise ConfigError(f"unknown dataset {self.dataset!r}; only 'digits' is bundled")
        if not isinstance(self.epochs, int) or self.epochs < 1:
            raise ConfigError(f"epochs must be a positive integer, got {self.epochs!r}")
        if not isinstance(self.batch_size, int) or self.batch_size < 1:
            raise ConfigError(f"batch_size must be a positive integer, got {self.batch_size!r}")
        if not self.seeds:
            raise ConfigError("need at least one seed")
        if not self.weight_files:
            raise ConfigError("need at least one scheme in weight_files")
        for scheme, per_seed in self.weight_files.items():
            if len(per_seed) != len(self.seeds):
                raise ConfigError(
                    f"scheme {scheme!r} has {len(per_seed)} file pairs for {len(self.seeds)} seeds"
                )
            for pair in per_seed:
                if len(pair) != len(CONV_SHAPES):
                    raise ConfigError(
                        f"scheme {scheme!r} needs one file per conv layer, got {len(pair)}"
                    )


class DigitsNet(nn.Module):
    """Two 3x3 conv blocks with 2x2 pooling, then a linear readout."""

    def __init__(self) -> None:
        super().__init__()
        self.conv1 = nn.Conv2d(1, 8, 3, padding=1)
        self.conv2 = nn.Conv2d(8, 16, 3, padding=1)
        self.pool = nn.MaxPool2d(2)
        self.head = nn.Linear(16 * 2 * 2, 10)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        x = self.pool(torch.relu(self.conv1(x)))
        x = self.pool(torch.relu(self.conv2(x)))
        return self.head(x.flatten(1))


def plant_kernels(conv: nn.Conv2d, path: Path | str) -> None:
    """Copy a float32 kernel file into a conv layer, bit for bit.

    The copy is the whole boundary contract: the layer trains from
    exactly the file's payload, so shape and dtype must already agree.
    """
    arr = np.load(Path(path))
    want = tuple(conv.weight.shape)
    if tuple(arr.shape) != want:
        raise ConfigError(f"{path}: kernel file shape {tuple(arr.shape)} does not fit layer {want}")
    if arr.dtype != np.float32:
        raise ConfigError(f"{path}: layer trains in float32, got {arr.dtype} payload")
    with torch.no_grad():
        conv.weight.copy_(torch.from_numpy(arr))
        conv.bias.zero_()


def digits_split() -> tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]:
    """The bundled 8x8 digits, one fixed permutation, quarter held out."""
    data = load_digits()
    x = (data.images / 16.0).astype(np.float32)[:, None, :, :]
    y = data.target.astype(np.int64)
    order = np.random.default_rng(_SPLIT_SEED).permutation(len(y))
    n_test = int(len(y) * _TEST_FRACTION)
    test, train = order[:n_test], order[n_test:]
    return (
        torch.from_numpy(x[train]),
        torch.from_numpy(y[train]),
        torch.from_numpy(x[test]),
        torch.from_numpy(y[test]),
    )


def train_single(
    conv1_path: Path | str,
    conv2_path: Path | str,
    *,
    seed: int,
    epochs: int,
    batch_size: int,
) -> tuple[list[float], list[float]]:
    """One seeded run; returns (per-epoch mean train loss, test accuracy).

    All torch streams derive from the seed alone, never from the scheme,
    so two schemes at the same seed share head init and batch order.
    """
    torch.set_num_threads(1)
    torch.manual_seed(100_000 + seed)
    net = DigitsNet()
    plant_kernels(net.conv1, conv1_path)
    plant_kernels(net.conv2, conv2_path)
    x_train, y_train, x_test, y_test = digits_split()
    opt = torch.optim.SGD(net.parameters(), lr=0.1, momentum=0.9)
    loss_fn = nn.CrossEntropyLoss()
    g = torch.Generator().manual_seed(200_000 + seed)
    losses: list[float] = []
    accs: list[float] = []
    for _ in range(epochs):
        net.train()
        order = torch.randperm(len(y_train), generator=g)
        total = 0.0
        for start in range(0, len(order), batch_size):
            idx = order[start : start + batch_size]
            opt.zero_grad()
            loss = loss_fn(net(x_train[idx]), y_train[idx])
            loss.backward()
            opt.step()
            total += float(loss.detach()) * len(idx)
        losses.append(total / len(y_train))
        net.eval()
        with torch.no_grad():
            accs.append(float((net(x_test).argmax(1) == y_test).float().mean()))
    return losses, accs


def run_comparison(config: DemoConfig, out_dir: Path | str) -> list[dict]:
    """Train every (scheme, seed) run and report per-epoch medians.

    Writes comparison.csv (epoch, scheme, median_loss, median_accuracy;
    one row per scheme per epoch) and convergence.png into out_dir, and
    returns the CSV rows as dicts.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    medians: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for scheme, per_seed in config.weight_files.items():
        loss = np.empty((len(config.seeds), config.epochs))
        acc = np.empty_like(loss)
        for i, ((p1, p2), seed) in enumerate(zip(per_seed, config.seeds)):
            run_loss, run_acc = train_single(
                p1, p2, seed=seed, epochs=config.epochs, batch_size=config.batch_size
            )
            loss[i] = run_loss
            acc[i] = run_acc
        medians[scheme] = (np.median(loss, axis=0), np.median(acc, axis=0))

    rows = [
        {
            "epoch": epoch + 1,
            "scheme": scheme,
            "median_loss": float(medians[scheme][0][epoch]),
            "median_accuracy": float(medians[scheme][1][epoch]),
        }
        for scheme in config.weight_files
        for epoch in range(config.epochs)
    ]
    with open(out_dir / CSV_NAME, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    _plot(medians, out_dir / PLOT_NAME)
    return rows


def _plot(medians: dict[str, tuple[np.ndarray, np.ndarray]], path: Path) -> None:
    fig, (ax_loss, ax_acc) = plt.subplots(1, 2, figsize=(9, 3.5))
    for scheme, (loss, acc) in medians.items():
        epochs = np.arange(1, len(loss) + 1)
        ax_loss.plot(epochs, loss, marker="o", label=scheme)
        ax_acc.plot(epochs, acc, marker="o", label=scheme)
    ax_loss.set_xlabel("epoch")
    ax_loss.set_ylabel("median train loss")
    ax_acc.set_xlabel("epoch")
    ax_acc.set_ylabel("median test accuracy")
    ax_acc.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def generate_weight_files(
    out_dir: Path | str,
    schemes: tuple[str, ...],
    seeds: tuple[int, ...],
) -> dict[str, tuple[tuple[Path, Path], ...]]:
    """Produce every (scheme, seed, layer) kernel file through the CLI.

    The demo's only way of obtaining weights: a subprocess per file,
    float32 export, quiet mode. Returns paths shaped for DemoConfig.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files: dict[str, tuple[tuple[Path, Path], ...]] = {}
    for scheme in schemes:
        per_seed = []
        for seed in seeds:
            pair = []
            for layer, shape in CONV_SHAPES.items():
                path = out_dir / f"{scheme}-{seed}-{layer}.npy"
                cmd = [
                    sys.executable,
                    "-m",
                    "convaware",
                    "generate",
                    "--scheme",
                    scheme,
                    "--shape",
                    ",".join(str(v) for v in shape),
                    "--seed",
                    str(seed),
                    "--dtype",
                    "f32",
                    "--out",
                    str(path),
                    "--quiet",
                ]
                proc = subprocess.run(cmd, capture_output=True, text=True)
                if proc.returncode != 0:
                    raise RuntimeError(
                        f"weight generation failed ({' '.join(cmd)}):\n{proc.stderr}"
                    )
                pair.append(path)
            per_seed.append((pair[0], pair[1]))
        files[scheme] = tuple(per_seed)
    return files
