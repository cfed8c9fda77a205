#include "morphblocks/numeric.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "morphblocks/errors.hpp"

namespace morphblocks {

BigInt pow_ui(const BigInt& base, unsigned long exp) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
    return out;
}

std::string rat_str(const BigRat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace {

// compare |num|/den with 10^k (k may be negative), both positive
int cmp_pow10(const BigInt& num, const BigInt& den, long k) {
    if (k >= 0) return cmp(num, den * pow_ui(BigInt(10), static_cast<unsigned long>(k)));
    return cmp(num * pow_ui(BigInt(10), static_cast<unsigned long>(-k)), den);
}

} // namespace

std::string rat_decimal(const BigRat& r, int sig) {
    if (sig < 1) sig = 1;
    if (r == 0) return "0";
    BigInt num = r.get_num();
    BigInt den = r.get_den();
    bool neg = num < 0;
    if (neg) num = -num;

    // smallest e with value < 10^e, so the leading digit sits at 10^(e-1)
    long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 10)) + 1;
    while (cmp_pow10(num, den, e) >= 0) ++e;
    while (cmp_pow10(num, den, e - 1) < 0) --e;

    // round(value * 10^(sig-e)), half away from zero
    long shift = sig - e;
    BigInt sn = num, sd = den;
    if (shift >= 0)
        sn *= pow_ui(BigInt(10), static_cast<unsigned long>(shift));
    else
        sd *= pow_ui(BigInt(10), static_cast<unsigned long>(-shift));
    BigInt q, rem;
    mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), sn.get_mpz_t(), sd.get_mpz_t());
    if (rem * 2 >= sd) ++q;

    std::string digits = q.get_str();
    if (static_cast<long>(digits.size()) > sig) {
        // rounding carried over the top (9.99... -> 10.0...): q == 10^sig
        digits.assign(1, '1');
        digits.append(static_cast<std::size_t>(sig) - 1, '0');
        ++e;
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

    long lead = e - 1; // power of ten of the leading digit
    std::string out;
    if (lead >= -4 && lead < sig) {
        if (lead >= 0) {
            std::size_t ip = static_cast<std::size_t>(lead) + 1;
            if (digits.size() <= ip) {
                out = digits + std::string(ip - digits.size(), '0');
            } else {
                out = digits.substr(0, ip) + "." + digits.substr(ip);
            }
        } else {
            out = "0." + std::string(static_cast<std::size_t>(-lead - 1), '0') + digits;
        }
    } else {
        out = digits.substr(0, 1);
        if (digits.size() > 1) out += "." + digits.substr(1);
        out += "e";
        out += (lead >= 0 ? "+" : "-");
        out += std::to_string(lead >= 0 ? lead : -lead);
    }
    return neg ? "-" + out : out;
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

BigRat parse_rat(const std::string& text) {
    auto bad = [&]() -> BigRat { fail(errc::invalid_params, "cannot parse rational: " + text); };

    std::string s = text;
    if (s.empty()) return bad();

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string ns = s.substr(0, slash), ds = s.substr(slash + 1);
        bool nneg = !ns.empty() && (ns[0] == '-' || ns[0] == '+');
        std::string nd = nneg ? ns.substr(1) : ns;
        if (!all_digits(nd) || !all_digits(ds)) return bad();
        BigInt num(nd, 10), den(ds, 10);
        if (den == 0) return bad();
        if (nneg && ns[0] == '-') num = -num;
        return make_rat(num, den);
    }

    bool neg = false;
    std::size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') {
        neg = s[pos] == '-';
        ++pos;
    }
    std::string ipart, fpart;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ipart += s[pos++];
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) fpart += s[pos++];
    }
    if (ipart.empty() && fpart.empty()) return bad();
    long exp10 = 0;
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
        ++pos;
        bool eneg = false;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            eneg = s[pos] == '-';
            ++pos;
        }
        std::string es;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) es += s[pos++];
        if (es.empty() || es.size() > 6) return bad();
        exp10 = std::strtol(es.c_str(), nullptr, 10);
        if (eneg) exp10 = -exp10;
    }
    if (pos != s.size()) return bad();

    BigInt num(ipart + fpart, 10); // nonempty: at least one part present
    BigInt den = pow_ui(BigInt(10), fpart.size());
    if (exp10 > 0)
        num *= pow_ui(BigInt(10), static_cast<unsigned long>(exp10));
    else if (exp10 < 0)
        den *= pow_ui(BigInt(10), static_cast<unsigned long>(-exp10));
    if (neg) num = -num;
    return make_rat(num, den);
}

double rat_double(const BigRat& r) { return mpq_get_d(r.get_mpq_t()); }

double log2_big(const BigInt& v) {
    if (v <= 0) fail(errc::invalid_params, "log2 of nonpositive value");
    long exp = 0;
    double d = mpz_get_d_2exp(&exp, v.get_mpz_t());
    return static_cast<double>(exp) + std::log2(d);
}

} // namespace morphblocks
