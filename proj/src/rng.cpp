#include "attreval/rng.hpp"

#include <stdexcept>

namespace attreval {

uint64_t fnv1a64(std::string_view text) {
    uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char byte : text) {
        hash ^= byte;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

Rng Rng::derive(uint64_t seed, std::string_view salted_id) {
    Rng rng(seed ^ fnv1a64(salted_id));
    rng.next_u64();  // decorrelate nearby seeds before first use
    return rng;
}

uint64_t Rng::next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

size_t Rng::pick_index(size_t n) {
    if (n == 0) throw std::invalid_argument("pick_index: n must be positive");
    // Rejection sampling kills modulo bias; the loop nearly always exits first try.
    uint64_t bound = n;
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t draw;
    do {
        draw = next_u64();
    } while (draw >= limit);
    return static_cast<size_t>(draw % bound);
}

}  // namespace attreval
