"""Resource caps and pipeline configuration shared by all modules."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Caps:
    """Hard limits that turn would-be blowups into explicit errors."""

    enum_cap: int = 10**7          # points enumerated exhaustively (p^n)
    search_cap: int = 10**5        # linear-combination scan size (p^c)
    codeword_cap: int = 10**6      # Reed-Muller codewords enumerated
    unknowns_cap: int = 5000       # certificate unknowns per cofactor
    reduced_scan_cap: int = 10**6  # reduced-space scan size (p^{c'})
    retry_budget: int = 16


DEFAULT_CAPS = Caps()


@dataclass(frozen=True)
class DecomposeConfig:
    """Knobs for the approximate-to-exact decomposition pipeline."""

    t: int = 2                    # target error exponent for the approximate stage
    retries: int = 16             # fresh-sample retries inside the approximate stage
    seed: int = 0
    pipeline_retries: int = 4     # full pipeline reruns when measurability fails
    regularity_s: int | None = None  # None: start at s + 1, escalate per rerun
    error_samples: int = 4096     # sampled error measurement above the enum cap
    caps: Caps = DEFAULT_CAPS


@dataclass(frozen=True)
class RegularizeConfig:
    """Budget and sub-configuration for factor regularization."""

    max_iterations: int = 64
    decompose: DecomposeConfig = field(default_factory=DecomposeConfig)
    caps: Caps = DEFAULT_CAPS
