#pragma once

#include <cctype>
#include <string>

#include "arithdyn/projbundle/chow.hpp"

namespace arithdyn::io {

/// Expressions over D, F and rational constants with + - * ^ and
/// parentheses, e.g. "(D + 2*F)^3" or "1/3*D^2*F".
class ChowExpressionParser {
public:
    ChowExpressionParser(const ChowRing& r, std::string text) : r_(r), s_(std::move(text)) {}

    ChowElement parse() {
        ChowElement e = sum();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw InvalidInput("Chow expression '" + s_ + "' at " + std::to_string(i_) + ": " + why);
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }

    ChowElement sum() {
        ChowElement e = eat('-') ? -product() : product();
        for (;;) {
            if (eat('+')) e = e + product();
            else if (eat('-')) e = e - product();
            else return e;
        }
    }
    ChowElement product() {
        ChowElement e = power();
        while (eat('*')) e = e * power();
        return e;
    }
    ChowElement power() {
        ChowElement b = atom();
        if (!eat('^')) return b;
        skip();
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("exponent expected");
        unsigned long k = std::stoul(s_.substr(start, i_ - start));
        if (k > 64) fail("exponent too large");
        return chow_pow(b, static_cast<unsigned>(k));
    }
    ChowElement atom() {
        skip();
        if (i_ >= s_.size()) fail("operand expected");
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            ChowElement e = sum();
            if (!eat(')')) fail("')' expected");
            return e;
        }
        if (c == 'D') {
            ++i_;
            return ChowElement::D(r_);
        }
        if (c == 'F') {
            ++i_;
            return ChowElement::F(r_);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '/')) ++i_;
            return ChowElement::constant(r_, FieldElement(parse_rational(s_.substr(start, i_ - start))));
        }
        fail("operand expected");
    }

    ChowRing r_;
    std::string s_;
    std::size_t i_ = 0;
};

inline ChowElement parse_chow_expression(const ChowRing& r, const std::string& text) {
    return ChowExpressionParser(r, text).parse();
}

} // namespace arithdyn::io
