#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <vector>

#include "arithdyn/heights/heights.hpp"

namespace arithdyn {

/// Pairwise coprime integers > 1 such that every input is a product of
/// their powers (factor refinement).
inline std::vector<Integer> coprime_base(const std::vector<Integer>& inputs) {
    std::vector<Integer> base;
    std::vector<Integer> work;
    for (const auto& x : inputs) {
        Integer a = abs(x);
        if (a > 1) work.push_back(a);
    }
    while (!work.empty()) {
        Integer x = work.back();
        work.pop_back();
        if (x == 1) continue;
        bool split = false;
        for (std::size_t i = 0; i < base.size(); ++i) {
            Integer g = gcd(x, base[i]);
            if (g == 1) continue;
            Integer b = base[i];
            base.erase(base.begin() + static_cast<std::ptrdiff_t>(i));
            if (g == b && g == x) {
                base.push_back(g);
            } else {
                work.push_back(g);
                work.push_back(b / g);
                work.push_back(x / g);
            }
            split = true;
            break;
        }
        if (!split) base.push_back(x);
    }
    std::sort(base.begin(), base.end());
    return base;
}

/// Exponent vector of |x| over a coprime base; x must factor completely.
inline std::vector<Integer> exponents_over(const Integer& x, const std::vector<Integer>& base) {
    if (sgn(x) == 0) throw InvalidInput("zero has no exponent vector");
    Integer r = abs(x);
    std::vector<Integer> e(base.size(), Integer(0));
    for (std::size_t k = 0; k < base.size(); ++k) {
        unsigned long c = mpz_remove(r.get_mpz_t(), r.get_mpz_t(), base[k].get_mpz_t());
        e[k] = c;
    }
    if (r != 1) throw InvariantViolation("integer does not factor over the coprime base");
    return e;
}

/// Base elements with cached log enclosures.
class FactorBase {
public:
    explicit FactorBase(std::vector<Integer> elems) : elems_(std::move(elems)) {}
    const std::vector<Integer>& elements() const { return elems_; }
    std::size_t size() const { return elems_.size(); }

    const std::vector<RationalInterval>& logs(mpfr_prec_t prec) const {
        if (prec != cached_prec_) {
            logs_.clear();
            for (const auto& b : elems_) logs_.push_back(log_enclosure(b, prec));
            cached_prec_ = prec;
        }
        return logs_;
    }

private:
    std::vector<Integer> elems_;
    mutable std::vector<RationalInterval> logs_;
    mutable mpfr_prec_t cached_prec_ = 0;
};

using FactorBasePtr = std::shared_ptr<const FactorBase>;

/// A signed integer stored as sign times a product of base powers.
struct FactoredInt {
    int sign = 0;  // 0 encodes the integer zero
    std::vector<Integer> exps;

    bool is_zero() const { return sign == 0; }
};

/// A multiprojective point whose coordinates are exact but stored as
/// exponent vectors over a shared coprime base. Each factor has gcd 1 and
/// its first nonzero coordinate positive, exactly as MultiProjPoint.
class FactoredPoint {
public:
    using Tuple = std::vector<FactoredInt>;

    FactoredPoint(FactorBasePtr base, std::vector<Tuple> factors) : base_(std::move(base)), f_(std::move(factors)) {
        for (auto& t : f_) normalize(t);
    }

    /// Factors the coordinates of an exact point over their own coprime base.
    static FactoredPoint from_point(const MultiProjPoint& p) {
        std::vector<Integer> all;
        for (const auto& t : p.factors())
            for (const auto& x : t) all.push_back(x);
        return from_point(p, std::make_shared<const FactorBase>(coprime_base(all)));
    }

    static FactoredPoint from_point(const MultiProjPoint& p, FactorBasePtr base) {
        std::vector<Tuple> fs;
        for (const auto& t : p.factors()) {
            Tuple ft;
            for (const auto& x : t) {
                FactoredInt fi;
                fi.sign = sgn(x);
                fi.exps = sgn(x) == 0 ? std::vector<Integer>(base->size(), Integer(0))
                                      : exponents_over(x, base->elements());
                ft.push_back(std::move(fi));
            }
            fs.push_back(std::move(ft));
        }
        return FactoredPoint(std::move(base), std::move(fs));
    }

    const FactorBasePtr& base() const { return base_; }
    const std::vector<Tuple>& factors() const { return f_; }
    std::size_t size() const { return f_.size(); }

    /// Largest exponent magnitude, which bounds the precision needed for logs.
    Integer max_exponent() const {
        Integer m = 0;
        for (const auto& t : f_)
            for (const auto& x : t)
                for (const auto& e : x.exps)
                    if (e > m) m = e;
        return m;
    }

    /// Upper bound on the bit length of any coordinate.
    Integer bits_bound() const {
        Integer best = 0;
        for (const auto& t : f_)
            for (const auto& x : t) {
                Integer s = 0;
                for (std::size_t k = 0; k < x.exps.size(); ++k)
                    s += x.exps[k] * static_cast<unsigned long>(bit_size(base_->elements()[k]));
                if (s > best) best = s;
            }
        return best;
    }

    /// Stored size in bits: the exponent vectors, not the coordinates.
    std::size_t storage_bits() const {
        std::size_t s = 0;
        for (const auto& t : f_)
            for (const auto& x : t)
                for (const auto& e : x.exps) s += bit_size(e) + 1;
        for (const auto& b : base_->elements()) s += bit_size(b);
        return s;
    }

    /// Enclosures of log H_i per factor.
    std::vector<RationalInterval> log_houses(mpfr_prec_t prec) const {
        mpfr_prec_t p = prec + static_cast<mpfr_prec_t>(bit_size(max_exponent())) + 8;
        const auto& lb = base_->logs(p);
        std::vector<RationalInterval> out;
        for (const auto& t : f_) {
            std::optional<RationalInterval> m;
            for (const auto& x : t) {
                if (x.is_zero()) continue;
                RationalInterval s(Rational(0));
                for (std::size_t k = 0; k < x.exps.size(); ++k)
                    if (sgn(x.exps[k]) != 0) s = s + lb[k] * Rational(x.exps[k]);
                m = m ? max(*m, s) : s;
            }
            out.push_back(*m);
        }
        return out;
    }

    /// Exact conversion; refuses when a coordinate would exceed max_bits.
    MultiProjPoint to_point(std::size_t max_bits) const {
        if (bits_bound() > max_bits) throw ResourceLimit("factored point too large to expand");
        std::vector<MultiProjPoint::Tuple> out;
        for (const auto& t : f_) {
            MultiProjPoint::Tuple o;
            for (const auto& x : t) o.push_back(expand(x));
            out.push_back(std::move(o));
        }
        return MultiProjPoint(std::move(out));
    }

    Integer expand(const FactoredInt& x) const {
        if (x.is_zero()) return 0;
        Integer r = 1;
        for (std::size_t k = 0; k < x.exps.size(); ++k)
            if (sgn(x.exps[k]) != 0) r *= ipow(base_->elements()[k], x.exps[k].get_ui());
        return x.sign < 0 ? Integer(-r) : r;
    }

    friend bool operator==(const FactoredPoint& a, const FactoredPoint& b) {
        if (a.base_->elements() != b.base_->elements() || a.f_.size() != b.f_.size()) return false;
        for (std::size_t i = 0; i < a.f_.size(); ++i) {
            if (a.f_[i].size() != b.f_[i].size()) return false;
            for (std::size_t j = 0; j < a.f_[i].size(); ++j)
                if (a.f_[i][j].sign != b.f_[i][j].sign || a.f_[i][j].exps != b.f_[i][j].exps) return false;
        }
        return true;
    }

private:
    void normalize(Tuple& t) const {
        if (t.size() < 2) throw InvalidInput("projective tuple needs at least two coordinates");
        std::vector<std::optional<Integer>> mins(base_->size());
        bool any = false;
        for (const auto& x : t) {
            if (x.is_zero()) continue;
            if (x.exps.size() != base_->size()) throw InvalidInput("exponent vector does not match the base");
            any = true;
            for (std::size_t k = 0; k < base_->size(); ++k)
                if (!mins[k] || x.exps[k] < *mins[k]) mins[k] = x.exps[k];
        }
        if (!any) throw InvalidInput("projective tuple with all coordinates zero");
        int lead = 0;
        for (auto& x : t) {
            if (x.is_zero()) {
                x.exps.assign(base_->size(), Integer(0));
                continue;
            }
            for (std::size_t k = 0; k < base_->size(); ++k) x.exps[k] -= *mins[k];
            if (lead == 0) lead = x.sign;
        }
        if (lead < 0)
            for (auto& x : t) x.sign = -x.sign;
    }

    FactorBasePtr base_;
    std::vector<Tuple> f_;
};

} // namespace arithdyn
