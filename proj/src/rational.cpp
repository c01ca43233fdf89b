#include "exactfa/rational.hpp"

#include <cctype>

#include "exactfa/errors.hpp"

namespace exactfa {

Rational rat_parse(const std::string& text) {
    if (text.empty()) throw StructuralError("empty rational literal");
    for (char c : text) {
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' && c != '-' && c != '+')
            throw StructuralError("bad rational literal: " + text);
    }
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw StructuralError("bad rational literal: " + text);
    if (q.get_den() == 0) throw StructuralError("zero denominator: " + text);
    q.canonicalize();
    return q;
}

Rational rat_from_decimal(const std::string& text) {
    std::string t = text;
    bool neg = false;
    std::size_t pos = 0;
    if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
        neg = (t[pos] == '-');
        ++pos;
    }
    std::string digits;
    int frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    for (; pos < t.size(); ++pos) {
        char c = t[pos];
        if (c == '.') {
            if (seen_dot) throw StructuralError("bad decimal literal: " + text);
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else {
            throw StructuralError("bad decimal literal: " + text);
        }
    }
    if (!seen_digit) throw StructuralError("bad decimal literal: " + text);
    mpz_class num(digits.empty() ? "0" : digits, 10);
    mpz_class den = 1;
    for (int i = 0; i < frac_digits; ++i) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

std::string rat_str(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rat_pow10_inv(int digits) {
    mpz_class den = 1;
    for (int i = 0; i < digits; ++i) den *= 10;
    return Rational(mpz_class(1), den);
}

} // namespace exactfa
