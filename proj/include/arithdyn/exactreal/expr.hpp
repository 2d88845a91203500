#pragma once

#include <memory>
#include <variant>

#include "arithdyn/exactreal/algebraic.hpp"
#include "arithdyn/exactreal/mpfr_bounds.hpp"

namespace arithdyn {

/// Immutable expression over real algebraic leaves. Evaluating at a
/// refinement level yields an interval that contains the exact value.
class RealExpr {
public:
    enum class Op { Leaf, Add, Sub, Mul, Pow, Root };

    static RealExpr leaf(RealAlgebraicNumber x) { return RealExpr(std::make_shared<Node>(Node{Op::Leaf, std::move(x), {}, {}, 0})); }
    static RealExpr leaf(const Rational& q) { return leaf(RealAlgebraicNumber::from_rational(q)); }

    friend RealExpr operator+(const RealExpr& a, const RealExpr& b) { return binary(Op::Add, a, b); }
    friend RealExpr operator-(const RealExpr& a, const RealExpr& b) { return binary(Op::Sub, a, b); }
    friend RealExpr operator*(const RealExpr& a, const RealExpr& b) { return binary(Op::Mul, a, b); }
    friend RealExpr pow(const RealExpr& a, unsigned e) { return unary(Op::Pow, a, e); }
    /// Positive k-th root; the argument must be positive.
    friend RealExpr root(const RealExpr& a, unsigned k) {
        if (k == 0) throw InvalidInput("root of order 0");
        return unary(Op::Root, a, k);
    }

    /// Enclosure with leaves refined to width 2^-level.
    RationalInterval enclose(unsigned level) const {
        Rational eps = pow2(-static_cast<long>(level));
        mpfr_prec_t prec = static_cast<mpfr_prec_t>(64 + 2 * level);
        return eval(*node_, eps, prec);
    }

private:
    struct Node {
        Op op;
        std::optional<RealAlgebraicNumber> value;
        std::shared_ptr<const Node> lhs, rhs;
        unsigned arg;
    };
    explicit RealExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static RealExpr binary(Op op, const RealExpr& a, const RealExpr& b) {
        return RealExpr(std::make_shared<Node>(Node{op, std::nullopt, a.node_, b.node_, 0}));
    }
    static RealExpr unary(Op op, const RealExpr& a, unsigned arg) {
        return RealExpr(std::make_shared<Node>(Node{op, std::nullopt, a.node_, nullptr, arg}));
    }

    static RationalInterval eval(const Node& n, const Rational& eps, mpfr_prec_t prec) {
        switch (n.op) {
        case Op::Leaf: return refine(*n.value, eps);
        case Op::Add: return eval(*n.lhs, eps, prec) + eval(*n.rhs, eps, prec);
        case Op::Sub: return eval(*n.lhs, eps, prec) - eval(*n.rhs, eps, prec);
        case Op::Mul: return eval(*n.lhs, eps, prec) * eval(*n.rhs, eps, prec);
        case Op::Pow: return pow(eval(*n.lhs, eps, prec), n.arg);
        case Op::Root: {
            RationalInterval a = eval(*n.lhs, eps, prec);
            if (a.negative()) throw DomainError("root of a negative value");
            RationalInterval clipped(std::max(a.lo(), Rational(0)), a.hi());
            return root_enclosure(clipped, n.arg, prec);
        }
        }
        throw InvariantViolation("unknown expression node");
    }

    std::shared_ptr<const Node> node_;
};

} // namespace arithdyn
