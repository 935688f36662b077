#pragma once

#include "combilab/sampler.hpp"

#include <array>
#include <cstdint>

namespace combilab {

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

/// A prime drawn uniformly-by-rejection from (2^61, 2^62) using the given seed.
std::uint64_t random_prime_62(std::uint64_t seed);

/// Two distinct primes in (2^61, 2^62) derived from one seed.
std::array<std::uint64_t, 2> prime_pair(std::uint64_t seed);

/// Seed of the library-wide default prime pair.
inline constexpr std::uint64_t kDefaultPrimeSeed = 0x5eed'c0de'0001ULL;

/// Rank of a 0/1 matrix over Z/pZ by Gaussian elimination. p must be an odd prime < 2^63.
int rank_mod_p(const CombMatrix& m, std::uint64_t p);

/// Exact rank deficiency test over the rationals. A zero column, a repeated row or
/// a repeated column decides singularity at once; otherwise the matrix is declared
/// rank deficient iff its rank is deficient modulo both primes of prime_pair(seed).
/// Full rank modulo one prime already proves full rational rank.
/// For rectangular input, "singular" means rank < min(m, n).
bool is_singular_exact(const CombMatrix& m, std::uint64_t prime_seed = kDefaultPrimeSeed);

}  // namespace combilab
