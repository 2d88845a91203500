#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "arithdyn/dynsys/wehler.hpp"

namespace arithdyn {

/// x_i -> prod_j x_j^{A_ij} on the torus of (P^1)^n, with x_j = u_j / v_j.
struct MonomialSystem {
    IntMatrix exponents;

    explicit MonomialSystem(IntMatrix a) : exponents(std::move(a)) {
        if (!exponents.square() || exponents.rows() == 0) throw InvalidInput("exponent matrix must be square");
        if (sgn(det(exponents)) == 0) throw InvalidInput("exponent matrix must be nonsingular");
    }
    std::size_t n() const { return exponents.rows(); }
    bool invertible() const {
        Integer d = det(exponents);
        return d == 1 || d == -1;
    }
};

/// [x_0 : ... : x_n] -> [x_0^d : ... : x_n^d] on P^n.
struct PowerSystem {
    unsigned degree;
    unsigned dim;

    PowerSystem(unsigned d, unsigned n) : degree(d), dim(n) {
        if (d < 2) throw InvalidInput("power map degree must be at least 2");
        if (n < 1) throw InvalidInput("projective dimension must be at least 1");
    }
};

/// Composite of Vieta involutions on a (2,2,2) surface in (P^1)^3. The word
/// lists involution indices 1..3 in the order they are applied.
struct WehlerSystem {
    WehlerForm form;
    std::vector<int> word;
    std::array<IntMatrix, 3> involution_matrices;
    IntMatrix gram;

    static std::array<IntMatrix, 3> standard_matrices() {
        return {IntMatrix{{-1, 0, 0}, {2, 1, 0}, {2, 0, 1}}, IntMatrix{{1, 2, 0}, {0, -1, 0}, {0, 2, 1}},
                IntMatrix{{1, 0, 2}, {0, 1, 2}, {0, 0, -1}}};
    }
    static IntMatrix standard_gram() { return IntMatrix{{0, 2, 2}, {2, 0, 2}, {2, 2, 0}}; }

    WehlerSystem(WehlerForm f, std::vector<int> w, std::array<IntMatrix, 3> ms = standard_matrices(),
                 IntMatrix g = standard_gram())
        : form(std::move(f)), word(std::move(w)), involution_matrices(std::move(ms)), gram(std::move(g)) {
        if (word.empty()) throw InvalidInput("Wehler word must be nonempty");
        for (int s : word)
            if (s < 1 || s > 3) throw InvalidInput("Wehler word letters must be 1, 2 or 3");
        if (gram.rows() != 3 || !gram.square()) throw InvalidInput("Wehler Gram matrix must be 3x3");
        for (const auto& m : involution_matrices) {
            if (m.rows() != 3 || !m.square()) throw InvalidInput("involution matrices must be 3x3");
            if (!(m * m == IntMatrix::identity(3))) throw InvalidInput("involution matrix does not square to the identity");
            if (!(m.transpose() * gram * m == gram)) throw InvalidInput("involution matrix is not an isometry of the Gram form");
        }
    }

    /// Pullback of the composite: M_{w_1} M_{w_2} ... M_{w_k}.
    IntMatrix word_matrix() const {
        IntMatrix m = IntMatrix::identity(3);
        for (int s : word) m = m * involution_matrices[static_cast<std::size_t>(s - 1)];
        return m;
    }

    WehlerSystem inverse() const {
        WehlerSystem inv = *this;
        std::reverse(inv.word.begin(), inv.word.end());
        return inv;
    }

    bool on_surface(const MultiProjPoint& p) const { return sgn(form.evaluate(p)) == 0; }

    /// Primes of the local model, computed once and shared by copies.
    const WehlerLocalModel::PrimeExponents& model_primes() const {
        std::call_once(cache_->once, [&] { cache_->primes = WehlerLocalModel::model_primes(form); });
        return cache_->primes;
    }

    WehlerLocalModel local_model(unsigned bits) const { return WehlerLocalModel(form, model_primes(), bits); }

private:
    struct Cache {
        std::once_flag once;
        WehlerLocalModel::PrimeExponents primes;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

class System;

/// f = g x h on Y x Z; projection to Y is the invariant fibration.
struct ProductSystem {
    std::shared_ptr<const System> left, right;
};

class System {
public:
    using Variant = std::variant<MonomialSystem, PowerSystem, WehlerSystem, ProductSystem>;

    System(MonomialSystem s) : v_(std::move(s)) {}
    System(PowerSystem s) : v_(std::move(s)) {}
    System(WehlerSystem s) : v_(std::move(s)) {}
    System(ProductSystem s) : v_(std::move(s)) {
        auto& p = std::get<ProductSystem>(v_);
        if (!p.left || !p.right) throw InvalidInput("product system needs two factors");
    }

    static System product(System left, System right) {
        return System(ProductSystem{std::make_shared<const System>(std::move(left)),
                                    std::make_shared<const System>(std::move(right))});
    }

    const Variant& variant() const { return v_; }
    template <class T>
    const T* as() const {
        return std::get_if<T>(&v_);
    }

    std::string kind() const {
        return std::visit(
            [](const auto& s) -> std::string {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, MonomialSystem>) return "monomial";
                else if constexpr (std::is_same_v<S, PowerSystem>) return "power";
                else if constexpr (std::is_same_v<S, WehlerSystem>) return "wehler";
                else return "product";
            },
            v_);
    }

private:
    Variant v_;
};

inline MultiProjSpace ambient(const System& s) {
    return std::visit(
        [](const auto& x) -> MultiProjSpace {
            using S = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<S, MonomialSystem>) return MultiProjSpace(std::vector<unsigned>(x.n(), 1));
            else if constexpr (std::is_same_v<S, PowerSystem>) return MultiProjSpace({x.dim});
            else if constexpr (std::is_same_v<S, WehlerSystem>) return MultiProjSpace({1, 1, 1});
            else {
                auto a = ambient(*x.left).factor_dims, b = ambient(*x.right).factor_dims;
                a.insert(a.end(), b.begin(), b.end());
                return MultiProjSpace(std::move(a));
            }
        },
        s.variant());
}

/// True when f is an automorphism with an implemented inverse.
inline bool is_invertible(const System& s) {
    return std::visit(
        [](const auto& x) -> bool {
            using S = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<S, MonomialSystem>) return x.invertible();
            else if constexpr (std::is_same_v<S, PowerSystem>) return false;
            else if constexpr (std::is_same_v<S, WehlerSystem>) return true;
            else return is_invertible(*x.left) && is_invertible(*x.right);
        },
        s.variant());
}

inline System inverse_system(const System& s) {
    return std::visit(
        [](const auto& x) -> System {
            using S = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<S, MonomialSystem>) {
                if (!x.invertible()) throw PreconditionError("monomial map with |det A| != 1 has no monomial inverse");
                return MonomialSystem(to_integer(*inverse(to_rational(x.exponents))));
            } else if constexpr (std::is_same_v<S, PowerSystem>) {
                throw PreconditionError("power maps are not invertible");
            } else if constexpr (std::is_same_v<S, WehlerSystem>) {
                return x.inverse();
            } else {
                return System::product(inverse_system(*x.left), inverse_system(*x.right));
            }
        },
        s.variant());
}

/// Action on N^1 in the factor basis.
inline PullbackMap pullback_matrix(const System& s) {
    return std::visit(
        [](const auto& x) -> PullbackMap {
            using S = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<S, MonomialSystem>) {
                return PullbackMap(x.exponents, abs(det(x.exponents)), false);
            } else if constexpr (std::is_same_v<S, PowerSystem>) {
                return PullbackMap(IntMatrix{{Integer(x.degree)}}, ipow(Integer(x.degree), x.dim), false);
            } else if constexpr (std::is_same_v<S, WehlerSystem>) {
                return PullbackMap(x.word_matrix(), 1, true);
            } else {
                return block_product(pullback_matrix(*x.left), pullback_matrix(*x.right));
            }
        },
        s.variant());
}

/// Number of ambient factors on the left of a product.
inline std::size_t factor_count(const System& s) { return ambient(s).factors(); }

namespace detail {

inline void require_shape(const System& s, const MultiProjPoint& p) {
    if (!p.fits(ambient(s))) throw InvalidInput("point does not live in the system's ambient space");
}

inline MultiProjPoint apply_monomial(const IntMatrix& a, const MultiProjPoint& p) {
    std::vector<Rational> x;
    for (const auto& t : p.factors()) {
        if (sgn(t[0]) == 0 || sgn(t[1]) == 0) throw DomainError("monomial maps act on torus points only");
        x.push_back(make_rational(t[0], t[1]));
    }
    std::vector<MultiProjPoint::Tuple> out;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Rational r = 1;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Integer& e = a(i, j);
            if (sgn(e) == 0) continue;
            Rational pw = rpow(x[j], Integer(abs(e)).get_ui());
            r *= sgn(e) > 0 ? pw : Rational(1 / pw);
        }
        out.push_back({r.get_num(), r.get_den()});
    }
    return MultiProjPoint(std::move(out));
}

inline MultiProjPoint split_join(const MultiProjPoint& p, std::size_t k, const std::function<MultiProjPoint(const MultiProjPoint&)>& fl,
                                 const std::function<MultiProjPoint(const MultiProjPoint&)>& fr) {
    std::vector<std::size_t> li, ri;
    for (std::size_t i = 0; i < p.size(); ++i) (i < k ? li : ri).push_back(i);
    auto a = fl(p.project(li)).factors(), b = fr(p.project(ri)).factors();
    a.insert(a.end(), b.begin(), b.end());
    return MultiProjPoint(std::move(a));
}

} // namespace detail

inline bool on_surface_check(const WehlerSystem& w, const MultiProjPoint& p) { return w.on_surface(p); }

/// Exact image f(P), normalized.
inline MultiProjPoint apply(const System& s, const MultiProjPoint& p) {
    detail::require_shape(s, p);
    return std::visit(
        [&](const auto& x) -> MultiProjPoint {
            using S = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<S, MonomialSystem>) {
                return detail::apply_monomial(x.exponents, p);
            } else if constexpr (std::is_same_v<S, PowerSystem>) {
                MultiProjPoint::Tuple t;
                for (const auto& c : p.factor(0)) t.push_back(ipow(c, x.degree));
                return MultiProjPoint({t});
            } else if constexpr (std::is_same_v<S, WehlerSystem>) {
                if (!x.on_surface(p)) throw DomainError("point is not on the Wehler surface");
                MultiProjPoint q = p;
                for (int i : x.word) q = x.form.involution(static_cast<std::size_t>(i - 1), q);
                return q;
            } else {
                return detail::split_join(
                    p, factor_count(*x.left), [&](const MultiProjPoint& a) { return apply(*x.left, a); },
                    [&](const MultiProjPoint& b) { return apply(*x.right, b); });
            }
        },
        s.variant());
}

inline bool supports_factored(const System& s) {
    return std::visit(
        [](const auto& x) -> bool {
            using S = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<S, WehlerSystem>) return false;
            else if constexpr (std::is_same_v<S, ProductSystem>) return supports_factored(*x.left) && supports_factored(*x.right);
            else return true;
        },
        s.variant());
}

/// Image of a factored point; the factor base is preserved, so exponents
/// transform linearly.
inline FactoredPoint apply(const System& s, const FactoredPoint& p) {
    using Tuple = FactoredPoint::Tuple;
    std::function<std::vector<Tuple>(const System&, const std::vector<Tuple>&)> go =
        [&](const System& sys, const std::vector<Tuple>& fs) -> std::vector<Tuple> {
        return std::visit(
            [&](const auto& x) -> std::vector<Tuple> {
                using S = std::decay_t<decltype(x)>;
                std::size_t nb = p.base()->size();
                if constexpr (std::is_same_v<S, MonomialSystem>) {
                    if (fs.size() != x.n()) throw InvalidInput("point does not match the monomial map");
                    std::vector<std::vector<Integer>> e;
                    std::vector<int> sg;
                    for (const auto& t : fs) {
                        if (t.size() != 2) throw InvalidInput("monomial maps act on (P^1)^n");
                        if (t[0].is_zero() || t[1].is_zero()) throw DomainError("monomial maps act on torus points only");
                        std::vector<Integer> d(nb);
                        for (std::size_t k = 0; k < nb; ++k) d[k] = t[0].exps[k] - t[1].exps[k];
                        e.push_back(std::move(d));
                        sg.push_back(t[0].sign * t[1].sign);
                    }
                    std::vector<Tuple> out;
                    for (std::size_t i = 0; i < x.n(); ++i) {
                        std::vector<Integer> d(nb, Integer(0));
                        int sign = 1;
                        for (std::size_t j = 0; j < x.n(); ++j) {
                            const Integer& a = x.exponents(i, j);
                            if (sgn(a) == 0) continue;
                            for (std::size_t k = 0; k < nb; ++k) d[k] += a * e[j][k];
                            if (sg[j] < 0 && mpz_odd_p(a.get_mpz_t())) sign = -sign;
                        }
                        FactoredInt num{sign, std::vector<Integer>(nb, Integer(0))}, den{1, std::vector<Integer>(nb, Integer(0))};
                        for (std::size_t k = 0; k < nb; ++k) (sgn(d[k]) > 0 ? num.exps[k] : den.exps[k]) = abs(d[k]);
                        out.push_back({num, den});
                    }
                    return out;
                } else if constexpr (std::is_same_v<S, PowerSystem>) {
                    if (fs.size() != 1 || fs[0].size() != x.dim + 1) throw InvalidInput("point does not match the power map");
                    Tuple t = fs[0];
                    for (auto& c : t) {
                        for (auto& e : c.exps) e *= x.degree;
                        if (c.sign < 0 && x.degree % 2 == 0) c.sign = 1;
                    }
                    return {t};
                } else if constexpr (std::is_same_v<S, WehlerSystem>) {
                    throw InvalidInput("Wehler systems have no factored representation");
                } else {
                    std::size_t k = factor_count(*x.left);
                    if (fs.size() < k) throw InvalidInput("point does not match the product system");
                    auto a = go(*x.left, std::vector<Tuple>(fs.begin(), fs.begin() + static_cast<std::ptrdiff_t>(k)));
                    auto b = go(*x.right, std::vector<Tuple>(fs.begin() + static_cast<std::ptrdiff_t>(k), fs.end()));
                    a.insert(a.end(), b.begin(), b.end());
                    return a;
                }
            },
            sys.variant());
    };
    return FactoredPoint(p.base(), go(s, p.factors()));
}

} // namespace arithdyn
