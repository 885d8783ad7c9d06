#pragma once

#include <cstdint>
#include <string_view>

namespace attreval {

/// FNV-1a over the bytes of `text`; stable across platforms.
uint64_t fnv1a64(std::string_view text);

/// Deterministic splitmix64 stream. Used instead of <random> engines and
/// distributions so outputs are identical across standard libraries.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    /// Independent stream for one record: mixes the run seed with a salted
    /// record id, so per-record draws survive reordering of the input.
    static Rng derive(uint64_t seed, std::string_view salted_id);

    uint64_t next_u64();

    /// Uniform in [0, 1), 53 significant bits.
    double next_double();

    /// Uniform index in [0, n). n must be positive.
    size_t pick_index(size_t n);

  private:
    uint64_t state_;
};

}  // namespace attreval
