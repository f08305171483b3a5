#include "modlie/prng.hpp"

namespace modlie {

uint64_t Prng::below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Prng::below: zero bound");
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
        uint64_t v = next();
        if (v < limit) return v % bound;
    }
}

FieldElement Prng::nonzero_field_element(const Fq& F) {
    for (;;) {
        FieldElement e = field_element(F);
        if (!F.is_zero(e)) return e;
    }
}

}  // namespace modlie
