#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "arithdyn/candyn/tate.hpp"

namespace arithdyn {

enum class PeriodicityKind { Periodic, Preperiodic, BoundedOrbitCandidate, NotPeriodic };

inline const char* to_string(PeriodicityKind k) {
    switch (k) {
    case PeriodicityKind::Periodic: return "periodic";
    case PeriodicityKind::Preperiodic: return "preperiodic";
    case PeriodicityKind::BoundedOrbitCandidate: return "bounded_orbit_candidate";
    default: return "not_periodic";
    }
}

/// Periodic and Preperiodic rest on an exact repetition f^j P = f^k P.
/// NotPeriodic: no repetition within max_period steps and some iterate has a
/// house above the bound. BoundedOrbitCandidate: every examined iterate stays
/// within the bound and none repeats; for an automorphism this contradicts
/// Northcott only once max_period exceeds the number of bounded points.
struct PeriodicityResult {
    PeriodicityKind kind = PeriodicityKind::NotPeriodic;
    long period = 0;      // Periodic / Preperiodic
    long preperiod = 0;   // Preperiodic
    long escape_index = 0;  // NotPeriodic: first n with a house above the bound
    Integer max_house;      // largest house seen among examined iterates
};

inline PeriodicityResult periodicity_test(const System& system, const MultiProjPoint& p, const Integer& house_bound,
                                          long max_period) {
    if (max_period < 1) throw InvalidInput("max_period must be positive");
    detail::require_shape(system, p);
    auto house = [](const MultiProjPoint& q) {
        Integer m = 0;
        for (const auto& h : factor_heights(q).houses) m = std::max(m, h);
        return m;
    };
    PeriodicityResult r;
    r.max_house = house(p);
    std::map<MultiProjPoint, long> seen{{p, 0}};
    MultiProjPoint q = p;
    std::optional<long> escape;
    if (r.max_house > house_bound) escape = 0;
    for (long n = 1; n <= max_period; ++n) {
        q = apply(system, q);
        auto [it, fresh] = seen.emplace(q, n);
        if (!fresh) {
            r.period = n - it->second;
            r.preperiod = it->second;
            r.kind = it->second == 0 ? PeriodicityKind::Periodic : PeriodicityKind::Preperiodic;
            return r;
        }
        Integer h = house(q);
        r.max_house = std::max(r.max_house, h);
        if (h > house_bound && !escape) escape = n;
        // Once outside the bound the orbit grows too fast to come back within
        // a short window, but we keep iterating for the exact repetition test
        // only while coordinates stay moderate.
        if (escape && q.max_bits() > 1u << 16) break;
    }
    if (is_invertible(system) && !escape) {
        System inv = inverse_system(system);
        MultiProjPoint b = p;
        for (long n = 1; n <= max_period; ++n) {
            b = apply(inv, b);
            Integer h = house(b);
            r.max_house = std::max(r.max_house, h);
            if (h > house_bound) {
                escape = -n;
                break;
            }
        }
    }
    if (escape) {
        r.kind = PeriodicityKind::NotPeriodic;
        r.escape_index = *escape;
    } else {
        r.kind = PeriodicityKind::BoundedOrbitCandidate;
    }
    return r;
}

struct SweepEntry {
    MultiProjPoint point;
    PeriodicityResult result;
    std::optional<CanonicalHeightResult> canonical;  // periodic points only
    std::string error;                                // e.g. a degenerate fiber
};

struct SweepOptions {
    Integer house_bound = 3;
    long max_period = 6;
    unsigned workers = 1;
    long tate_steps = 8;
    std::optional<EigenvectorPair> pair;  // canonical heights of periodic points
    OrbitOptions orbit;
};

/// All rational points of the system's ambient space with house <= bound
/// (on the surface for Wehler systems), classified by periodicity_test. The
/// enumeration is sharded across workers and merged in point order, so the
/// output does not depend on the worker count.
inline std::vector<SweepEntry> sweep_periodic(const System& system, const SweepOptions& opt) {
    if (opt.workers == 0) throw InvalidInput("at least one worker is needed");
    const WehlerSystem* w = system.as<WehlerSystem>();
    MultiProjSpace space = ambient(system);
    std::vector<std::vector<SweepEntry>> parts(opt.workers);
    auto run = [&](std::size_t shard) {
        enumerate_bounded_points(
            space, opt.house_bound,
            [&](const MultiProjPoint& p) {
                if (w && !w->on_surface(p)) return;
                if (system.as<MonomialSystem>()) {
                    for (const auto& t : p.factors())
                        if (sgn(t[0]) == 0 || sgn(t[1]) == 0) return;
                }
                SweepEntry e{p, {}, std::nullopt, ""};
                try {
                    e.result = periodicity_test(system, p, opt.house_bound, opt.max_period);
                    if (e.result.kind == PeriodicityKind::Periodic && opt.pair)
                        e.canonical = canonical_pair(system, p, *opt.pair, opt.tate_steps, opt.orbit);
                } catch (const Error& err) {
                    e.error = err.what();
                }
                parts[shard].push_back(std::move(e));
            },
            shard, opt.workers);
    };
    if (opt.workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(opt.workers);
        for (std::size_t s = 0; s < opt.workers; ++s)
            pool.emplace_back([&, s] {
                try {
                    run(s);
                } catch (...) {
                    errs[s] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }
    std::vector<SweepEntry> all;
    for (auto& part : parts)
        for (auto& e : part) all.push_back(std::move(e));
    std::sort(all.begin(), all.end(), [](const SweepEntry& a, const SweepEntry& b) { return a.point < b.point; });
    return all;
}

} // namespace arithdyn
