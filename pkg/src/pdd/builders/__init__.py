from .blowup import blowup_construction, box_blowup
from .complex_triple import ComplexTriple, ResidualTooLarge, solve_complex_triple, verify_alg_id
from .phase import PhaseFunction, build_phase_function
from .split_primes import SearchExhausted, SplitPrimeData, find_split_prime, is_split_prime, split_prime_density
from .transfer import TransferParams, build_1d_special_set, build_2d_nonconvex_set
from .triforce import TriforceSystem, build_triforce, sample_mandache_set, triforce_beta_counts

__all__ = [
    "ComplexTriple", "PhaseFunction", "ResidualTooLarge", "SearchExhausted", "SplitPrimeData",
    "TransferParams", "TriforceSystem", "blowup_construction", "box_blowup", "build_1d_special_set",
    "build_2d_nonconvex_set", "build_phase_function", "build_triforce", "find_split_prime",
    "is_split_prime", "sample_mandache_set", "solve_complex_triple", "split_prime_density",
    "triforce_beta_counts", "verify_alg_id",
]
