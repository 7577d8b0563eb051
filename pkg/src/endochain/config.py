"""Engine-wide configuration.

Every routine that samples, caps a search, or decides when a cross-check is
affordable reads its knobs from an EngineConfig.  Results are deterministic
functions of (inputs, config.seed).
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class EngineConfig:
    """Knobs for determinism and desk-scale resource caps.

    seed: root seed for every randomized search (Fitting elements, iso
        sampling, generators of random complexes).
    group_order_cap: closure aborts beyond this many elements.
    iso_exhaust_cap: exhaustive invertibility search over a Hom space is
        attempted when p**dim(Hom) is at most this.
    iso_sample_budget: random invertibility samples before declaring
        Indeterminate when exhaustion is infeasible.
    fitting_attempts: random Fitting elements tried before falling back to
        the radical/idempotent route.
    end_ring_unknown_cap: refuse intertwiner solves with more unknowns
        (source_dim * target_dim) than this.
    cross_check_dim_cap: tensor-square routes (strip of C* (x) C, factoring
        criterion) are cross-asserted only when the relevant total dimension
        is at most this.
    jobs: worker threads for per-subgroup maps (1 = sequential).
    """

    seed: int = 0
    group_order_cap: int = 96
    iso_exhaust_cap: int = 1_000_000
    iso_sample_budget: int = 512
    fitting_attempts: int = 30
    end_ring_unknown_cap: int = 40_000
    cross_check_dim_cap: int = 40
    jobs: int = 1

    def with_seed(self, seed: int) -> "EngineConfig":
        return replace(self, seed=seed)


DEFAULT_CONFIG = EngineConfig()
