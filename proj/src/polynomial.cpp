#include "exactfa/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace exactfa {

Polynomial Polynomial::constant(int arity, const Rational& c) {
    Polynomial f(arity);
    f.add_term(Monomial::one(arity), c);
    return f;
}

Polynomial Polynomial::variable(int arity, int index) {
    Polynomial f(arity);
    f.add_term(Monomial::var(arity, index), 1);
    return f;
}

Polynomial Polynomial::term(const Monomial& m, const Rational& c) {
    Polynomial f(m.arity());
    f.add_term(m, c);
    return f;
}

int Polynomial::total_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (m.arity() != arity_) throw StructuralError("add_term: arity mismatch");
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial r(arity_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    if (arity_ != o.arity_) throw StructuralError("polynomial +: arity mismatch");
    Polynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    if (arity_ != o.arity_) throw StructuralError("polynomial -: arity mismatch");
    Polynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (arity_ != o.arity_) throw StructuralError("polynomial *: arity mismatch");
    Polynomial r(arity_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
    Polynomial r(arity_);
    if (c == 0) return r;
    for (const auto& [m, coef] : terms_) r.terms_.emplace(m, coef * c);
    return r;
}

std::pair<Monomial, Rational> Polynomial::leading_term(const MonomialOrder& ord) const {
    if (terms_.empty()) throw DomainError("leading_term of the zero polynomial");
    auto best = terms_.begin();
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
        if (monomial_less(best->first, it->first, ord)) best = it;
    return {best->first, best->second};
}

Polynomial Polynomial::monic(const MonomialOrder& ord) const {
    auto [m, c] = leading_term(ord);
    return *this * Rational(1 / c);
}

Polynomial Polynomial::primitive(const MonomialOrder& ord) const {
    if (terms_.empty()) return *this;
    mpz_class den_lcm = 1, num_gcd = 0;
    for (const auto& [m, c] : terms_) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    }
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    if (leading_term(ord).second < 0) scale = -scale;
    return *this * scale;
}

Rational Polynomial::eval(const std::vector<Rational>& coords) const {
    if (static_cast<int>(coords.size()) != arity_) throw StructuralError("eval: arity mismatch");
    Rational acc = 0;
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < arity_; ++i)
            for (std::uint32_t e = 0; e < m.exps[i]; ++e) t *= coords[i];
        acc += t;
    }
    return acc;
}

double Polynomial::eval_double(const std::vector<double>& coords) const {
    if (static_cast<int>(coords.size()) != arity_) throw StructuralError("eval: arity mismatch");
    double acc = 0;
    for (const auto& [m, c] : terms_) {
        double t = rat_double(c);
        for (int i = 0; i < arity_; ++i)
            if (m.exps[i] != 0) t *= std::pow(coords[i], static_cast<int>(m.exps[i]));
        acc += t;
    }
    return acc;
}

Polynomial Polynomial::derivative(int var) const {
    Polynomial r(arity_);
    for (const auto& [m, c] : terms_) {
        if (m.exps[var] == 0) continue;
        Monomial d = m;
        d.exps[var] -= 1;
        r.add_term(d, c * Rational(static_cast<long>(m.exps[var])));
    }
    return r;
}

Polynomial Polynomial::substitute(const std::vector<bool>& mask, const std::vector<Rational>& coords) const {
    Polynomial r(arity_);
    for (const auto& [m, c] : terms_) {
        Rational coef = c;
        Monomial keep = m;
        for (int i = 0; i < arity_; ++i) {
            if (!mask[i] || m.exps[i] == 0) continue;
            for (std::uint32_t e = 0; e < m.exps[i]; ++e) coef *= coords[i];
            keep.exps[i] = 0;
        }
        r.add_term(keep, coef);
    }
    return r;
}

std::pair<Monomial, Rational> leading_term(const Polynomial& f, const MonomialOrder& ord) {
    return f.leading_term(ord);
}

Monomial leading_monomial(const Polynomial& f, const MonomialOrder& ord) {
    return f.leading_term(ord).first;
}

Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& G, const MonomialOrder& ord) {
    for (const auto& g : G) {
        if (g.arity() != f.arity()) throw StructuralError("normal_form: arity mismatch");
        if (g.is_zero()) throw DomainError("normal_form: zero divisor polynomial");
    }
    struct Reducer {
        Monomial lm;
        Rational lc;
        const Polynomial* poly;
    };
    std::vector<Reducer> reducers;
    reducers.reserve(G.size());
    for (const auto& g : G) {
        auto [m, c] = g.leading_term(ord);
        reducers.push_back({m, c, &g});
    }

    std::map<Monomial, Rational, OrderLess> work{OrderLess{ord}};
    for (const auto& [m, c] : f.terms()) work.emplace(m, c);

    Polynomial rem(f.arity());
    while (!work.empty()) {
        auto top = std::prev(work.end());
        Monomial mono = top->first;
        Rational coef = top->second;
        const Reducer* hit = nullptr;
        for (const auto& r : reducers) {
            if (r.lm.divides(mono)) {
                hit = &r;
                break;
            }
        }
        if (hit == nullptr) {
            rem.add_term(mono, coef);
            work.erase(top);
            continue;
        }
        Monomial q = mono / hit->lm;
        Rational scale = coef / hit->lc;
        for (const auto& [mg, cg] : hit->poly->terms()) {
            Monomial target = mg * q;
            Rational delta = cg * scale;
            auto it = work.find(target);
            if (it == work.end()) {
                work.emplace(target, -delta);
                it = work.find(target);
            } else {
                it->second -= delta;
            }
            if (it->second == 0) work.erase(it);
        }
    }
    return rem;
}

namespace {

std::string monomial_str(const Monomial& m, const std::vector<std::string>& names) {
    std::string out;
    for (int i = 0; i < m.arity(); ++i) {
        if (m.exps[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += names[i];
        if (m.exps[i] > 1) out += "^" + std::to_string(m.exps[i]);
    }
    return out;
}

struct Parser {
    const std::string& text;
    const std::vector<std::string>& names;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    std::string read_word() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        return text.substr(start, pos - start);
    }

    Rational read_number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        std::string num = text.substr(start, pos - start);
        if (num.empty()) throw StructuralError("poly_parse: expected number at '" + text.substr(pos) + "'");
        if (eat('/')) {
            std::size_t dstart = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            std::string den = text.substr(dstart, pos - dstart);
            if (den.empty()) throw StructuralError("poly_parse: expected denominator");
            return rat_parse(num + "/" + den);
        }
        return rat_parse(num);
    }

    int var_index(const std::string& name) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        throw StructuralError("poly_parse: unknown variable '" + name + "'");
    }

    // factor := number | var ('^' int)?
    void read_factor(Monomial& mono, Rational& coef) {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            coef *= read_number();
            return;
        }
        std::string word = read_word();
        if (word.empty()) throw StructuralError("poly_parse: expected factor near '" + text.substr(pos) + "'");
        int idx = var_index(word);
        std::uint32_t power = 1;
        if (eat('^')) {
            skip_ws();
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (start == pos) throw StructuralError("poly_parse: expected exponent");
            power = static_cast<std::uint32_t>(std::stoul(text.substr(start, pos - start)));
        }
        mono.exps[idx] += power;
    }

    Polynomial parse() {
        int arity = static_cast<int>(names.size());
        Polynomial out(arity);
        bool first = true;
        while (true) {
            skip_ws();
            if (pos >= text.size()) break;
            Rational sign = 1;
            if (eat('+')) {
                sign = 1;
            } else if (eat('-')) {
                sign = -1;
            } else if (!first) {
                throw StructuralError("poly_parse: expected '+' or '-' near '" + text.substr(pos) + "'");
            }
            first = false;
            Monomial mono = Monomial::one(arity);
            Rational coef = sign;
            read_factor(mono, coef);
            while (eat('*')) read_factor(mono, coef);
            out.add_term(mono, coef);
        }
        return out;
    }
};

} // namespace

std::string poly_str(const Polynomial& f, const std::vector<std::string>& var_names) {
    if (static_cast<int>(var_names.size()) != f.arity())
        throw StructuralError("poly_str: arity mismatch");
    if (f.is_zero()) return "0";
    std::string out;
    // Descending structural order.
    for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        Rational mag = rat_abs(c);
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        std::string ms = monomial_str(m, var_names);
        if (ms.empty()) {
            out += rat_str(mag);
        } else if (mag == 1) {
            out += ms;
        } else {
            out += rat_str(mag) + "*" + ms;
        }
    }
    return out;
}

Polynomial poly_parse(const std::string& text, const std::vector<std::string>& var_names) {
    std::string trimmed = text;
    Parser p{trimmed, var_names};
    p.skip_ws();
    if (p.pos >= trimmed.size()) throw StructuralError("poly_parse: empty input");
    if (trimmed.find_first_not_of(" \t\r\n0") == std::string::npos) return Polynomial::zero(static_cast<int>(var_names.size()));
    return p.parse();
}

} // namespace exactfa
