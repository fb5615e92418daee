#include "lumpbn/rational.hpp"

#include <cctype>

#include "lumpbn/errors.hpp"

namespace lumpbn {

namespace {

bool is_integer_token(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    const std::string num = text.substr(0, slash);
    const std::string den =
        slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den)) {
        throw InputError("", "not a rational: \"" + text + "\"");
    }
    mpz_class p(num), q(den);
    if (q == 0) throw InputError("", "zero denominator in \"" + text + "\"");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

}  // namespace lumpbn
