"""Default tolerances and run configuration.

Resolution order for the command line tool: explicit flags beat config-file
values, config-file values beat these defaults.  The config file is a flat
``KEY = value`` text file; its path comes from ``--config`` or from the
``METAPLECTIC_CONFIG`` environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

# Matrix-level tolerances.
TOL_SYMP = 1e-10     # symplecticity / matrix identity residuals
TOL_SING = 1e-12     # singularity gate for det(S - I), det(M - J/2)
TOL_EIG = 1e-9       # eigenvalue cutoff when counting inertia

# Grid-level tolerances.
FFT_TOL = 1e-8       # unitarity of the hbar-scaled Fourier transform
INTERP_TOL = 1e-6    # norm preservation through cubic interpolation
CROSS_TOL = 1e-5     # factored vs. quadrature operator agreement
BOCHNER_TOL = 1e-3   # phase-space (Bochner) quadrature agreement
TAIL_TOL = 1e-12     # admissibility: relative tail size at the grid edge

# Grid defaults.
DEFAULT_N = 512
DEFAULT_X = 12.0
DEFAULT_HBAR = 1.0

# Phase-space truncation defaults.
R_FACTOR = 3.0           # truncation radius = R_FACTOR * support radius
CUTOFF_FRACTION = 0.2    # raised-cosine roll-off over the last 20 percent

ENV_CONFIG = "METAPLECTIC_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    """Bundle of grid, tolerance, and truncation settings for one run."""

    n: int = 1
    N: int = DEFAULT_N
    X: float = DEFAULT_X
    hbar: float = DEFAULT_HBAR
    seed: int = 0
    tol_symp: float = TOL_SYMP
    tol_sing: float = TOL_SING
    tol_eig: float = TOL_EIG
    fft_tol: float = FFT_TOL
    interp_tol: float = INTERP_TOL
    cross_tol: float = CROSS_TOL
    bochner_tol: float = BOCHNER_TOL
    tail_tol: float = TAIL_TOL
    r_factor: float = R_FACTOR
    cutoff_fraction: float = CUTOFF_FRACTION

    def with_overrides(self, **kwargs) -> "RunConfig":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)


_INT_KEYS = {"n", "N", "seed"}


def parse_config_text(text: str) -> dict:
    """Parse a flat ``KEY = value`` config file into a dict.

    Blank lines and ``#`` comments are ignored.  Unknown keys raise
    ``ValueError`` so typos do not silently pass.
    """
    valid = set(RunConfig.__dataclass_fields__)
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected KEY = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in valid:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        out[key] = int(value) if key in _INT_KEYS else float(value)
    return out


def load_config(path: str | None = None) -> RunConfig:
    """Build a RunConfig from defaults, the config file (if any), and env."""
    cfg = RunConfig()
    path = path or os.environ.get(ENV_CONFIG)
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = cfg.with_overrides(**parse_config_text(fh.read()))
    return cfg
