#pragma once

#include <string>
#include <vector>

#include "arithdyn/exactreal.hpp"

namespace arithdyn {

/// A*(P(E)) over a curve for a rank-n bundle E of degree c1:
/// Z[D, F] / (F^2, D^n + c1 D^{n-1} F), so F D^{n-1} = 1 and D^n = -c1.
struct ChowRing {
    unsigned n;
    Integer c1;

    ChowRing(unsigned rank, Integer deg) : n(rank), c1(std::move(deg)) {
        if (n < 2) throw InvalidInput("projective bundles need rank at least 2");
    }
    friend bool operator==(const ChowRing& a, const ChowRing& b) { return a.n == b.n && a.c1 == b.c1; }
};

/// p(D) + q(D) F with deg p, deg q < n. Coefficients are exact elements of
/// Q or of Q(d) when an irrational eigenvalue d enters.
class ChowElement {
public:
    explicit ChowElement(ChowRing r) : r_(std::move(r)), p_(r_.n, FieldElement(0)), q_(r_.n, FieldElement(0)) {}

    ChowElement(ChowRing r, std::vector<FieldElement> p, std::vector<FieldElement> q) : ChowElement(std::move(r)) {
        if (p.size() > r_.n || q.size() > r_.n) throw InvalidInput("Chow polynomial degree must be below the rank");
        for (std::size_t i = 0; i < p.size(); ++i) p_[i] = p[i];
        for (std::size_t i = 0; i < q.size(); ++i) q_[i] = q[i];
    }

    static ChowElement constant(const ChowRing& r, const FieldElement& a) {
        ChowElement e(r);
        e.p_[0] = a;
        return e;
    }
    static ChowElement D(const ChowRing& r) {
        ChowElement e(r);
        e.p_[1] = 1;
        return e;
    }
    static ChowElement F(const ChowRing& r) {
        ChowElement e(r);
        e.q_[0] = 1;
        return e;
    }

    const ChowRing& ring() const { return r_; }
    const std::vector<FieldElement>& p() const { return p_; }
    const std::vector<FieldElement>& q() const { return q_; }

    bool is_zero() const {
        for (std::size_t i = 0; i < r_.n; ++i)
            if (!p_[i].is_zero() || !q_[i].is_zero()) return false;
        return true;
    }

    /// Codimension of each nonzero term: i for D^i, i + 1 for D^i F.
    bool is_homogeneous(unsigned codim) const {
        for (unsigned i = 0; i < r_.n; ++i) {
            if (!p_[i].is_zero() && i != codim) return false;
            if (!q_[i].is_zero() && i + 1 != codim) return false;
        }
        return true;
    }

    friend ChowElement operator+(const ChowElement& a, const ChowElement& b) {
        a.check(b);
        ChowElement s(a.r_);
        for (unsigned i = 0; i < a.r_.n; ++i) {
            s.p_[i] = a.p_[i] + b.p_[i];
            s.q_[i] = a.q_[i] + b.q_[i];
        }
        return s;
    }
    ChowElement operator-() const {
        ChowElement s(r_);
        for (unsigned i = 0; i < r_.n; ++i) {
            s.p_[i] = -p_[i];
            s.q_[i] = -q_[i];
        }
        return s;
    }
    friend ChowElement operator-(const ChowElement& a, const ChowElement& b) { return a + (-b); }
    friend ChowElement operator*(const FieldElement& s, const ChowElement& a) {
        ChowElement out(a.r_);
        for (unsigned i = 0; i < a.r_.n; ++i) {
            out.p_[i] = s * a.p_[i];
            out.q_[i] = s * a.q_[i];
        }
        return out;
    }

    /// Product reduced by F^2 = 0 and D^n = -c1 D^{n-1} F (so D^{n+1} = 0).
    friend ChowElement operator*(const ChowElement& a, const ChowElement& b) {
        a.check(b);
        unsigned n = a.r_.n;
        ChowElement out(a.r_);
        FieldElement c1{Rational(a.r_.c1)};
        for (unsigned i = 0; i < n; ++i) {
            if (a.p_[i].is_zero() && a.q_[i].is_zero()) continue;
            for (unsigned j = 0; j < n; ++j) {
                unsigned k = i + j;
                if (!a.p_[i].is_zero() && !b.p_[j].is_zero()) {
                    FieldElement c = a.p_[i] * b.p_[j];
                    if (k < n) out.p_[k] += c;
                    else if (k == n) out.q_[n - 1] -= c1 * c;
                }
                if (k < n) {
                    FieldElement c(0);
                    if (!a.p_[i].is_zero() && !b.q_[j].is_zero()) c += a.p_[i] * b.q_[j];
                    if (!a.q_[i].is_zero() && !b.p_[j].is_zero()) c += a.q_[i] * b.p_[j];
                    if (!c.is_zero()) out.q_[k] += c;
                }
            }
        }
        return out;
    }

    friend bool operator==(const ChowElement& a, const ChowElement& b) {
        if (!(a.r_ == b.r_)) return false;
        return (a - b).is_zero();
    }

    std::string str() const {
        std::string s;
        auto term = [&](const FieldElement& c, const std::string& mono) {
            if (c.is_zero()) return;
            if (!s.empty()) s += " + ";
            s += "(" + to_string(c) + ")" + (mono.empty() ? "" : "*" + mono);
        };
        for (unsigned i = 0; i < r_.n; ++i) term(p_[i], i == 0 ? "" : (i == 1 ? "D" : "D^" + std::to_string(i)));
        for (unsigned i = 0; i < r_.n; ++i)
            term(q_[i], i == 0 ? "F" : (i == 1 ? "D*F" : "D^" + std::to_string(i) + "*F"));
        return s.empty() ? "0" : s;
    }

private:
    void check(const ChowElement& o) const {
        if (!(r_ == o.r_)) throw InvalidInput("Chow elements from different rings");
    }

    ChowRing r_;
    std::vector<FieldElement> p_, q_;
};

inline ChowElement chow_mul(const ChowElement& a, const ChowElement& b) { return a * b; }

inline ChowElement chow_pow(const ChowElement& a, unsigned k) {
    ChowElement r = ChowElement::constant(a.ring(), 1);
    for (unsigned i = 0; i < k; ++i) r = r * a;
    return r;
}

/// Degree of a top-codimension class: the coefficient of D^{n-1} F.
inline FieldElement intersection_number(const ChowElement& a) {
    if (!a.is_homogeneous(a.ring().n)) throw InvalidInput("intersection numbers need a top-degree class");
    return a.q()[a.ring().n - 1];
}

} // namespace arithdyn
