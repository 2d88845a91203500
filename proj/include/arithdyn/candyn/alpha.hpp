#pragma once

#include "arithdyn/dynsys.hpp"

namespace arithdyn {

/// Arithmetic-degree estimators at the last orbit index N:
///  root        h+(f^N P)^{1/N}
///  normalized  (h+(f^N P) / h+(P))^{1/N}, which removes the h+(P)^{1/N} bias
///  ratio       h+(f^N P) / h+(f^{N-1} P)
struct AlphaEstimate {
    RationalInterval root;
    RationalInterval normalized_root;
    RationalInterval ratio;
    long n = 0;
};

inline AlphaEstimate alpha_estimate(const OrbitRecord& orbit, std::size_t class_index = 0, mpfr_prec_t prec = 128) {
    if (orbit.entries.size() < 3) throw InvalidInput("alpha estimates need an orbit of length at least 3");
    if (class_index >= orbit.classes.size()) throw InvalidInput("divisor class index out of range");
    const auto& last = orbit.entries.back().h_plus[class_index];
    const auto& prev = orbit.entries[orbit.entries.size() - 2].h_plus[class_index];
    const auto& first = orbit.entries.front().h_plus[class_index];
    unsigned long n = orbit.entries.size() - 1;
    AlphaEstimate a;
    a.n = static_cast<long>(n);
    a.root = root_enclosure(last.rounded_out(static_cast<unsigned>(prec)), n, prec);
    a.normalized_root = root_enclosure((last / first).rounded_out(static_cast<unsigned>(prec)), n, prec);
    a.ratio = (last / prev).rounded_out(static_cast<unsigned>(prec));
    return a;
}

} // namespace arithdyn
