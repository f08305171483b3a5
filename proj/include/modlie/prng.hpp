#pragma once

#include <cstdint>

#include "modlie/scalars.hpp"

namespace modlie {

// splitmix64: documented 64-bit mixing generator.  Substreams are derived by
// mixing the stream index into the seed, so partitioning work across workers
// never changes the values drawn for a given logical index.
class Prng {
public:
    explicit Prng(uint64_t seed) : state_(seed) {}

    static uint64_t mix(uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    static Prng substream(uint64_t seed, uint64_t index) {
        return Prng(mix(seed ^ mix(index + 0x51ed2701)));
    }

    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) by rejection.
    uint64_t below(uint64_t bound);

    FieldElement field_element(const Fq& F) { return F.from_rank(below(F.q())); }
    FieldElement nonzero_field_element(const Fq& F);

private:
    uint64_t state_;
};

}  // namespace modlie
