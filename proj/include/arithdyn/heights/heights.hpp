#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "arithdyn/exactreal.hpp"

namespace arithdyn {

/// P^{n_1} x ... x P^{n_k}.
struct MultiProjSpace {
    std::vector<unsigned> factor_dims;

    explicit MultiProjSpace(std::vector<unsigned> dims) : factor_dims(std::move(dims)) {
        if (factor_dims.empty()) throw InvalidInput("multiprojective space needs at least one factor");
        for (auto d : factor_dims)
            if (d == 0) throw InvalidInput("projective factor dimension must be positive");
    }
    std::size_t factors() const { return factor_dims.size(); }
};

/// A rational point of a multiprojective space with each factor a primitive
/// integer tuple whose first nonzero coordinate is positive.
class MultiProjPoint {
public:
    using Tuple = std::vector<Integer>;

    MultiProjPoint() = default;
    explicit MultiProjPoint(std::vector<Tuple> factors) : f_(std::move(factors)) {
        if (f_.empty()) throw InvalidInput("point needs at least one factor");
        for (auto& t : f_) normalize(t);
    }

    static void normalize(Tuple& t) {
        if (t.size() < 2) throw InvalidInput("projective tuple needs at least two coordinates");
        Integer g = 0;
        for (const auto& x : t) g = gcd(g, x);
        if (g == 0) throw InvalidInput("projective tuple with all coordinates zero");
        for (auto& x : t) x /= g;
        auto first = std::find_if(t.begin(), t.end(), [](const Integer& x) { return sgn(x) != 0; });
        if (sgn(*first) < 0)
            for (auto& x : t) x = -x;
    }

    const std::vector<Tuple>& factors() const { return f_; }
    const Tuple& factor(std::size_t i) const { return f_.at(i); }
    std::size_t size() const { return f_.size(); }

    bool fits(const MultiProjSpace& s) const {
        if (s.factors() != f_.size()) return false;
        for (std::size_t i = 0; i < f_.size(); ++i)
            if (f_[i].size() != s.factor_dims[i] + 1) return false;
        return true;
    }

    /// Largest coordinate bit length.
    std::size_t max_bits() const {
        std::size_t b = 0;
        for (const auto& t : f_)
            for (const auto& x : t) b = std::max(b, bit_size(x));
        return b;
    }

    /// Sub-product on the given factors.
    MultiProjPoint project(const std::vector<std::size_t>& idx) const {
        std::vector<Tuple> out;
        for (auto i : idx) out.push_back(f_.at(i));
        return MultiProjPoint(std::move(out));
    }

    friend bool operator==(const MultiProjPoint& a, const MultiProjPoint& b) { return a.f_ == b.f_; }
    friend bool operator<(const MultiProjPoint& a, const MultiProjPoint& b) { return a.f_ < b.f_; }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < f_.size(); ++i) {
            s += i ? ",[" : "[";
            for (std::size_t j = 0; j < f_[i].size(); ++j) s += (j ? ":" : "") + f_[i][j].get_str();
            s += "]";
        }
        return s + ")";
    }

private:
    std::vector<Tuple> f_;
};

/// Houses H_i = max |coordinate| per factor and their logarithms.
struct ExactHeight {
    std::vector<Integer> houses;

    std::vector<RationalInterval> logs(mpfr_prec_t prec) const {
        std::vector<RationalInterval> out;
        for (const auto& h : houses) out.push_back(log_enclosure(h, prec));
        return out;
    }
};

inline ExactHeight factor_heights(const MultiProjPoint& p) {
    ExactHeight h;
    for (const auto& t : p.factors()) {
        Integer m = 0;
        for (const auto& x : t) {
            Integer a = abs(x);
            if (a > m) m = a;
        }
        if (m == 0) throw InvalidInput("zero projective tuple");
        h.houses.push_back(m);
    }
    return h;
}

/// sum_i a_i log H_i for weights given as enclosures.
inline RationalInterval divisor_height(const std::vector<RationalInterval>& log_houses,
                                       const std::vector<RationalInterval>& weights) {
    if (log_houses.size() != weights.size()) throw InvalidInput("weight count does not match the factor count");
    RationalInterval s(Rational(0));
    for (std::size_t i = 0; i < weights.size(); ++i) s = s + weights[i] * log_houses[i];
    return s;
}

inline RationalInterval divisor_height(const MultiProjPoint& p, const std::vector<Rational>& weights,
                                       mpfr_prec_t prec) {
    std::vector<RationalInterval> w;
    for (const auto& a : weights) w.emplace_back(a);
    return divisor_height(factor_heights(p).logs(prec), w);
}

/// max(value, 1) with interval semantics.
inline RationalInterval h_plus(const RationalInterval& v) {
    return {std::max(v.lo(), Rational(1)), std::max(v.hi(), Rational(1))};
}

namespace detail {

/// Normalized tuples of P^n with every |coordinate| <= b, in lexicographic
/// order, restricted to first coordinate values in the given shard.
inline void enumerate_tuples(unsigned n, const Integer& b, const std::function<void(const MultiProjPoint::Tuple&)>& emit,
                             std::size_t shard, std::size_t shards) {
    MultiProjPoint::Tuple t(n + 1);
    std::function<void(std::size_t, bool, const Integer&)> rec = [&](std::size_t pos, bool leading_seen, const Integer& g) {
        if (pos == t.size()) {
            if (leading_seen && g == 1) emit(t);
            return;
        }
        // Before the first nonzero coordinate only 0 or positive values occur.
        Integer lo = leading_seen ? Integer(-b) : Integer(0);
        for (Integer v = lo; v <= b; ++v) {
            if (pos == 0) {
                Integer idx = v - lo;
                if (mpz_fdiv_ui(idx.get_mpz_t(), shards) != shard) continue;
            }
            t[pos] = v;
            rec(pos + 1, leading_seen || v != 0, gcd(g, v));
        }
    };
    rec(0, false, Integer(0));
}

} // namespace detail

/// Streams every normalized point of the space with all |coordinates| <= b.
/// Shard s of k visits the points whose first coordinate index is s mod k.
inline void enumerate_bounded_points(const MultiProjSpace& space, const Integer& b,
                                     const std::function<void(const MultiProjPoint&)>& emit, std::size_t shard = 0,
                                     std::size_t shards = 1) {
    if (sgn(b) < 0) throw InvalidInput("house bound must be nonnegative");
    if (shards == 0 || shard >= shards) throw InvalidInput("bad shard specification");
    std::vector<std::vector<MultiProjPoint::Tuple>> per_factor;
    for (std::size_t i = 0; i < space.factors(); ++i) {
        std::vector<MultiProjPoint::Tuple> ts;
        detail::enumerate_tuples(space.factor_dims[i], b, [&](const MultiProjPoint::Tuple& t) { ts.push_back(t); },
                                 i == 0 ? shard : 0, i == 0 ? shards : 1);
        per_factor.push_back(std::move(ts));
    }
    std::vector<MultiProjPoint::Tuple> cur(space.factors());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == space.factors()) {
            emit(MultiProjPoint(cur));
            return;
        }
        for (const auto& t : per_factor[i]) {
            cur[i] = t;
            rec(i + 1);
        }
    };
    rec(0);
}

inline std::vector<MultiProjPoint> bounded_points(const MultiProjSpace& space, const Integer& b) {
    std::vector<MultiProjPoint> out;
    enumerate_bounded_points(space, b, [&](const MultiProjPoint& p) { out.push_back(p); });
    return out;
}

} // namespace arithdyn
