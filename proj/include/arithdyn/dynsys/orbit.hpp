#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "arithdyn/dynsys/systems.hpp"

namespace arithdyn {

/// How orbit points are stored.
///  Exact: normalized integer tuples, capped in bit size.
///  Compact: exponent vectors (monomial, power, product) or local data (Wehler).
///  Auto: compact for monomial/power/product; exact integers for Wehler
///        until they exceed switch_bits, then local data.
enum class Representation { Auto, Exact, Compact };

inline const char* to_string(Representation r) {
    switch (r) {
    case Representation::Exact: return "exact";
    case Representation::Compact: return "compact";
    default: return "auto";
    }
}

struct OrbitOptions {
    std::size_t cap_bits = 1000000;
    Representation representation = Representation::Auto;
    mpfr_prec_t log_prec = 64;
    unsigned local_bits = 256;
    std::size_t switch_bits = 4096;
};

using OrbitPoint = std::variant<MultiProjPoint, FactoredPoint, LocalPoint>;

struct OrbitEntry {
    long n = 0;
    OrbitPoint point;
    std::vector<RationalInterval> log_houses;  // log H_i per factor
    std::vector<RationalInterval> heights;     // one per divisor class
    std::vector<RationalInterval> h_plus;      // max(height, 1)
};

/// Consecutive entries are related by f (forward) or f^{-1} (backward);
/// n runs 0, 1, 2, ... or 0, -1, -2, ....
struct OrbitRecord {
    std::vector<std::vector<RationalInterval>> classes;  // weights per class
    std::vector<OrbitEntry> entries;

    const OrbitEntry& back() const { return entries.back(); }
    std::size_t size() const { return entries.size(); }
};

/// Raised when an orbit stops early; carries everything computed so far.
class OrbitTruncated : public Error {
public:
    OrbitTruncated(ErrorKind kind, const std::string& what, OrbitRecord partial)
        : Error(kind, what), partial_(std::move(partial)) {}
    const OrbitRecord& partial() const { return partial_; }

private:
    OrbitRecord partial_;
};

/// Exact integer houses when the entry holds a small enough exact point.
inline std::optional<std::vector<Integer>> exact_houses(const OrbitEntry& e, std::size_t max_bits = 256) {
    if (auto p = std::get_if<MultiProjPoint>(&e.point)) {
        if (p->max_bits() > max_bits) return std::nullopt;
        return factor_heights(*p).houses;
    }
    if (auto f = std::get_if<FactoredPoint>(&e.point)) {
        if (f->bits_bound() > max_bits) return std::nullopt;
        return factor_heights(f->to_point(max_bits)).houses;
    }
    return std::nullopt;
}

namespace detail {

inline void fill_heights(OrbitEntry& e, const std::vector<std::vector<RationalInterval>>& classes) {
    for (const auto& w : classes) {
        RationalInterval h = divisor_height(e.log_houses, w);
        e.heights.push_back(h);
        e.h_plus.push_back(h_plus(h));
    }
}

} // namespace detail

/// The orbit P, f(P), ..., f^N(P) (or f^{-1} iterates for N < 0) with
/// heights of the given divisor classes.
inline OrbitRecord iterate_orbit(const System& system, const MultiProjPoint& p, long N,
                                 const std::vector<std::vector<RationalInterval>>& classes,
                                 const OrbitOptions& opt = {}) {
    if (!p.fits(ambient(system))) throw InvalidInput("point does not live in the system's ambient space");
    std::size_t nf = ambient(system).factors();
    for (const auto& w : classes)
        if (w.size() != nf) throw InvalidInput("divisor class length does not match the number of factors");
    if (auto w = system.as<WehlerSystem>(); w && !w->on_surface(p)) throw DomainError("point is not on the Wehler surface");
    const System f = N >= 0 ? system : inverse_system(system);
    long step = N >= 0 ? 1 : -1;
    std::size_t count = static_cast<std::size_t>(N >= 0 ? N : -N);

    const WehlerSystem* wehler = f.as<WehlerSystem>();
    bool factored = supports_factored(f) && opt.representation != Representation::Exact;
    std::optional<WehlerLocalModel> model;
    auto local_model = [&]() -> const WehlerLocalModel& {
        if (!model) model.emplace(wehler->local_model(opt.local_bits));
        return *model;
    };

    OrbitRecord rec;
    rec.classes = classes;
    OrbitPoint cur;
    if (factored) cur = FactoredPoint::from_point(p);
    else if (wehler && opt.representation == Representation::Compact) cur = local_model().from_point(p);
    else cur = p;

    auto record = [&](long n) {
        OrbitEntry e;
        e.n = n;
        e.point = cur;
        if (auto q = std::get_if<MultiProjPoint>(&cur)) e.log_houses = factor_heights(*q).logs(opt.log_prec);
        else if (auto fq = std::get_if<FactoredPoint>(&cur)) e.log_houses = fq->log_houses(opt.log_prec);
        else e.log_houses = local_model().log_houses(std::get<LocalPoint>(cur));
        detail::fill_heights(e, classes);
        rec.entries.push_back(std::move(e));
    };

    record(0);
    for (std::size_t k = 1; k <= count; ++k) {
        long n = static_cast<long>(k) * step;
        try {
            if (auto q = std::get_if<MultiProjPoint>(&cur)) {
                MultiProjPoint next = apply(f, *q);
                if (next.max_bits() > opt.cap_bits && (!wehler || opt.representation == Representation::Exact))
                    throw ResourceLimit("coordinate size " + std::to_string(next.max_bits()) + " bits exceeds the cap at n = " +
                                        std::to_string(n));
                if (wehler && opt.representation == Representation::Auto && next.max_bits() > opt.switch_bits)
                    cur = local_model().from_point(next);
                else
                    cur = std::move(next);
            } else if (auto fq = std::get_if<FactoredPoint>(&cur)) {
                FactoredPoint next = apply(f, *fq);
                if (next.storage_bits() > opt.cap_bits)
                    throw ResourceLimit("factored representation exceeds the cap at n = " + std::to_string(n));
                cur = std::move(next);
            } else {
                LocalPoint lp = std::get<LocalPoint>(cur);
                for (int s : wehler->word) lp = local_model().involution(static_cast<std::size_t>(s - 1), lp);
                cur = std::move(lp);
            }
        } catch (const OrbitTruncated&) {
            throw;
        } catch (const Error& e) {
            throw OrbitTruncated(e.kind(), e.detail(), std::move(rec));
        }
        record(n);
    }
    return rec;
}

/// Orbit of the projection to the first k factors (the base of a product).
inline OrbitRecord project_orbit(const OrbitRecord& r, std::size_t k,
                                 const std::vector<std::vector<RationalInterval>>& base_classes) {
    OrbitRecord out;
    out.classes = base_classes;
    for (const auto& e : r.entries) {
        OrbitEntry p;
        p.n = e.n;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < k; ++i) idx.push_back(i);
        if (auto q = std::get_if<MultiProjPoint>(&e.point)) p.point = q->project(idx);
        else if (auto f = std::get_if<FactoredPoint>(&e.point))
            p.point = FactoredPoint(f->base(), std::vector<FactoredPoint::Tuple>(f->factors().begin(), f->factors().begin() + static_cast<std::ptrdiff_t>(k)));
        else throw InvalidInput("local Wehler points cannot be projected");
        p.log_houses.assign(e.log_houses.begin(), e.log_houses.begin() + static_cast<std::ptrdiff_t>(k));
        detail::fill_heights(p, base_classes);
        out.entries.push_back(std::move(p));
    }
    return out;
}

} // namespace arithdyn
