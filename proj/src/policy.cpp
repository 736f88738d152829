#include <cmath>
#include <cstdio>
#include <string>

#include "zdl/errors.hpp"
#include "zdl/evalcore.hpp"
#include "zdl/hash.hpp"

namespace zdl::eval {

PrecisionPolicy PrecisionPolicy::from(const EvalSettings& s) {
    return PrecisionPolicy{s.output_bits, s.guard_base, s.guard_per_log_t};
}

int PrecisionPolicy::working_bits(double t) const {
    const double extra = std::ceil(guard_bits_per_log_t * std::log(2.0 + std::fabs(t)));
    return output_bits + guard_bits_base + static_cast<int>(extra);
}

std::uint64_t PrecisionPolicy::fingerprint() const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "output_bits=%d;guard_base=%d;guard_per_log_t=%a", output_bits, guard_bits_base,
                  guard_bits_per_log_t);
    return fnv1a64(buf);
}

PrecisionPolicy PrecisionPolicy::with_output_bits(int bits) const {
    if (bits < 16) throw Error(ErrorKind::InvalidArgument, "output bits below 16");
    PrecisionPolicy p = *this;
    p.output_bits = bits;
    return p;
}

}  // namespace zdl::eval
