#include "towerlab/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace towerlab {

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

BigInt ipow(long long base, int exp) {
    BigInt r = 1;
    BigInt b = base;
    for (int i = 0; i < exp; ++i) r *= b;
    return r;
}

std::vector<int> divisors_of(int r) {
    std::vector<int> out;
    for (int e = 1; e <= r; ++e)
        if (r % e == 0) out.push_back(e);
    return out;
}

}  // namespace

BigInt sharp_genus(const GenusParams& P, const BigInt& g_prev, int n) {
    if (n < 2) throw Error("sharp_genus is defined for levels n >= 2");
    if (P.d < 1) throw Error("degree must be positive");
    BigInt head = (P.gamma2 - 1) - P.d * (P.g1 - 1);
    return 1 + P.d * (g_prev - 1) + ipow(P.d, n - 2) * head;
}

BigInt geometric_genus(const GenusParams& P, const std::vector<BigInt>& deltas, int n) {
    if (n < 1) throw Error("level must be positive");
    if (P.d < 1) throw Error("degree must be positive");
    if (n == 1) return P.g1;
    if (static_cast<int>(deltas.size()) < n - 1)
        throw MissingDeltas("need normalization corrections Delta_2..Delta_" +
                            std::to_string(n) + ", got " +
                            std::to_string(deltas.size()) + " values");
    BigInt head = (P.gamma2 - 1) - P.d * (P.g1 - 1);
    BigInt g = 1 + BigInt(n - 1) * ipow(P.d, n - 2) * head + ipow(P.d, n - 1) * (P.g1 - 1);
    for (int i = 2; i <= n; ++i) g -= ipow(P.d, n - i) * deltas[i - 2];
    return g;
}

BigInt geometric_genus_recursive(const GenusParams& P, const std::vector<BigInt>& deltas, int n) {
    if (n < 1) throw Error("level must be positive");
    if (n == 1) return P.g1;
    if (static_cast<int>(deltas.size()) < n - 1)
        throw MissingDeltas("need normalization corrections Delta_2..Delta_" +
                            std::to_string(n) + ", got " +
                            std::to_string(deltas.size()) + " values");
    BigInt g = P.g1;
    for (int k = 2; k <= n; ++k) g = sharp_genus(P, g, k) - deltas[k - 2];
    return g;
}

std::map<int, Rational> nb_convert(const std::map<int, Rational>& in,
                                   ConvertDirection dir, int rmax) {
    if (rmax < 1) throw Error("rmax must be positive");
    std::map<int, Rational> out;
    if (dir == ConvertDirection::degrees_to_counts) {
        // N_r = sum_{e | r} e * B_e
        for (int r = 1; r <= rmax; ++r) {
            Rational n = 0;
            for (int e : divisors_of(r)) {
                auto it = in.find(e);
                if (it == in.end())
                    throw MissingDivisorValue("B_" + std::to_string(e) +
                                              " needed for N_" + std::to_string(r));
                n += Rational(e) * it->second;
            }
            out[r] = n;
        }
    } else {
        // invert level by level: r * B_r = N_r - sum_{e | r, e < r} e * B_e
        for (int r = 1; r <= rmax; ++r) {
            auto it = in.find(r);
            if (it == in.end())
                throw MissingDivisorValue("N_" + std::to_string(r) +
                                          " needed for B_" + std::to_string(r));
            Rational acc = it->second;
            for (int e : divisors_of(r)) {
                if (e == r) continue;
                acc -= Rational(e) * out.at(e);
            }
            out[r] = acc / r;
        }
    }
    return out;
}

AsymptoticInvariants lambda_beta_from_core(long long core_size, int r0,
                                           const Rational& ell, int rmax) {
    if (core_size < 0) throw Error("core size cannot be negative");
    if (r0 < 1) throw Error("core level r0 must be positive");
    if (rmax < 1) throw Error("rmax must be positive");
    AsymptoticInvariants inv;
    inv.core_size = core_size;
    inv.r0 = r0;
    inv.ell = ell;
    Rational lam = Rational(core_size) * ell;
    for (int r = 1; r <= rmax; ++r) {
        inv.lambda[r] = (r % r0 == 0) ? lam : Rational(0);
        inv.beta[r] = (r == r0) ? lam / r0 : Rational(0);
    }
    return inv;
}

bool lambda_beta_consistent(const std::map<int, Rational>& lambda,
                            const std::map<int, Rational>& beta) {
    for (const auto& [r, lam] : lambda) {
        Rational acc = 0;
        for (int e : divisors_of(r)) {
            auto it = beta.find(e);
            if (it != beta.end()) acc += Rational(e) * it->second;
        }
        if (acc != lam) return false;
    }
    return true;
}

double deficiency(const std::map<int, Rational>& beta, std::uint64_t q) {
    if (q < 2) throw Error("field size must be at least 2");
    Float50 acc = 1;
    for (const auto& [r, b] : beta) {
        if (b == 0) continue;
        if (b < 0) throw Error("beta_" + std::to_string(r) + " is negative");
        if (r < 1) throw Error("beta indexed by non-positive level");
        Float50 qr = 1;
        for (int i = 0; i < r; ++i) qr *= Float50(q);
        Float50 bf = Float50(boost::multiprecision::numerator(b)) /
                     Float50(boost::multiprecision::denominator(b));
        acc -= Float50(r) * bf / boost::multiprecision::sqrt(qr - 1);
    }
    double out = acc.convert_to<double>();
    if (out < -1e-12)
        throw NegativeDeficiency("deficiency " + std::to_string(out) +
                                 " breaks the Drinfeld-Vladut type bound");
    return out;
}

std::string rational_to_string(const Rational& x) {
    std::ostringstream os;
    if (boost::multiprecision::denominator(x) == 1) {
        os << boost::multiprecision::numerator(x);
    } else {
        os << boost::multiprecision::numerator(x) << "/"
           << boost::multiprecision::denominator(x);
    }
    return os.str();
}

Rational parse_rational(const std::string& text) {
    auto bad = [&]() { return Error("cannot parse rational from '" + text + "'"); };
    std::string s = text;
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            if (s.empty()) throw bad();
            return Rational(BigInt(s));
        }
        std::string num_part = s.substr(0, slash), den_part = s.substr(slash + 1);
        if (num_part.empty() || den_part.empty()) throw bad();
        BigInt num(num_part);
        BigInt den(den_part);
        if (den == 0) throw bad();
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw bad();
    }
}

std::string zeta_single_parameter(const Rational& beta_r0) {
    if (beta_r0 == 0) return "1";
    if (beta_r0 < 0) throw Error("beta must be non-negative");
    return "(1-T)^(-" + rational_to_string(beta_r0) + ")";
}

std::string zeta_from_beta(const std::map<int, Rational>& beta) {
    int positive = 0;
    Rational value = 0;
    for (const auto& [r, b] : beta) {
        if (b < 0) throw Error("beta_" + std::to_string(r) + " is negative");
        if (b > 0) {
            ++positive;
            value = b;
        }
    }
    if (positive > 1)
        throw MultiplePositiveParameters(
            "zeta display defined only for single-level growth, found " +
            std::to_string(positive) + " positive entries");
    return zeta_single_parameter(value);
}

BigInt cycle_count_upper_bound(int d, int n) {
    if (d < 1 || n < 1) throw Error("degree and length must be positive");
    return 2 * ipow(d, n);
}

long long diophantine_power(const std::vector<std::complex<double>>& values,
                            long long bound) {
    if (bound < 1) throw Error("search bound must be positive");
    std::vector<std::complex<double>> unit;
    unit.reserve(values.size());
    for (const auto& v : values) {
        double a = std::abs(v);
        if (a == 0.0) throw Error("zero value has no positive power");
        unit.push_back(v / a);
    }
    std::vector<std::complex<double>> w = unit;
    for (long long n = 1; n <= bound; ++n) {
        bool all = true;
        for (const auto& z : w) {
            if (z.real() <= 1e-9) {
                all = false;
                break;
            }
        }
        if (all) return n;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] *= unit[i];
    }
    throw SearchBoundExceeded("no exponent up to " + std::to_string(bound) +
                              " makes every value land in the right half-plane");
}

SingOrEtale sing_or_etale_flag(int d1, int d2) {
    if (d1 < 1 || d2 < 1) throw Error("degrees must be positive");
    if (d1 == 1 && d2 == 1) return SingOrEtale::not_good;
    return SingOrEtale::must_be_singular;
}

}  // namespace towerlab
