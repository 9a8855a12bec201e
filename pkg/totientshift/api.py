from .arithmetic import (Factorization, SpfTable, build_spf, euler_phi,
                         factorize, gcd, is_prime, prime_sieve, radical)
from .admissibility import (AdmissibilityReport, LinearPolynomial, Method,
                            PolynomialFamily, build_family, check_admissible,
                            check_admissible_coprimality,
                            check_admissible_residue, scan_simultaneous_primes)
from .config import Config, get_config, load_config
from .kappa import (KappaRow, PairCandidate, PUBLISHED_KAPPA, compare_published,
                    kappa, kappa_naive, kappa_table, monotonicity_breaks,
                    pair_candidate, trivial_bound)
from .witness import (PairStrategy, Witness, build_witness, find_r,
                      select_pair, stream_witnesses, verify_witness)
