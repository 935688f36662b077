#include "combilab/seed.hpp"

#include "combilab/types.hpp"

#include <cstdio>

namespace combilab {

std::uint64_t derive_seed(const SeedSpec& spec, std::uint64_t row) noexcept {
  std::uint64_t h = mix64(spec.master_seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ mix64(spec.experiment + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ mix64(spec.trial + 0x8cb92ba72f3d8dd7ULL));
  h = mix64(h ^ mix64(row + 0xd1b54a32d192ed03ULL));
  return h;
}

std::uint64_t label_hash(const char* text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char* p = text; *p != '\0'; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

// Lemire's multiply-shift with rejection of the biased low region.
std::uint64_t Rng::below(std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::string format_real(double v, int significant) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

std::string format_real(const ExtReal& v, int significant) {
  return v.is_infinite() ? std::string("inf") : format_real(v.value(), significant);
}

}  // namespace combilab
