#include "towerlab/fields.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace towerlab {

namespace {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// ---- polynomial arithmetic over F_p on raw coefficient vectors -------------
// Used only for modulus selection; ascending coefficients, not normalized.

using PVec = std::vector<std::uint32_t>;

int pv_deg(const PVec& a) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (a[static_cast<size_t>(i)]) return i;
    return -1;
}

PVec pv_mulmod(const PVec& a, const PVec& b, const PVec& f, std::uint64_t p) {
    int m = pv_deg(f);
    std::vector<std::uint64_t> prod(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + std::uint64_t(a[i]) * b[j]) % p;
    }
    // reduce by monic f
    for (int k = static_cast<int>(prod.size()) - 1; k >= m; --k) {
        std::uint64_t t = prod[static_cast<size_t>(k)];
        if (!t) continue;
        prod[static_cast<size_t>(k)] = 0;
        for (int i = 0; i < m; ++i) {
            auto& slot = prod[static_cast<size_t>(k - m + i)];
            slot = (slot + (p - f[static_cast<size_t>(i)]) * t) % p;
        }
    }
    PVec out(static_cast<size_t>(m), 0);
    for (int i = 0; i < m; ++i) out[static_cast<size_t>(i)] = static_cast<std::uint32_t>(prod[static_cast<size_t>(i)]);
    return out;
}

PVec pv_powmod(PVec base, std::uint64_t e, const PVec& f, std::uint64_t p) {
    PVec result(static_cast<size_t>(pv_deg(f)), 0);
    result[0] = 1;
    while (e) {
        if (e & 1) result = pv_mulmod(result, base, f, p);
        base = pv_mulmod(base, base, f, p);
        e >>= 1;
    }
    return result;
}

PVec pv_gcd(PVec a, PVec b, std::uint64_t p) {
    auto inv_mod_p = [p](std::uint64_t x) {
        std::uint64_t r = 1, e = p - 2, bb = x % p;
        while (e) {
            if (e & 1) r = r * bb % p;
            bb = bb * bb % p;
            e >>= 1;
        }
        return r;
    };
    while (pv_deg(b) >= 0) {
        // a mod b
        int db = pv_deg(b);
        std::uint64_t lead_inv = inv_mod_p(b[static_cast<size_t>(db)]);
        while (pv_deg(a) >= db) {
            int da = pv_deg(a);
            std::uint64_t q = a[static_cast<size_t>(da)] % p * lead_inv % p;
            for (int i = 0; i <= db; ++i) {
                auto& slot = a[static_cast<size_t>(da - db + i)];
                slot = static_cast<std::uint32_t>((slot + (p - b[static_cast<size_t>(i)]) * q) % p);
            }
        }
        std::swap(a, b);
    }
    return a;
}

// Rabin irreducibility test for a monic degree-m polynomial over F_p.
// Both conditions are required; the Fermat-style condition alone accepts
// composites such as t^6+t+1 over F_3.
bool pv_irreducible(const PVec& f, std::uint64_t p) {
    int m = pv_deg(f);
    if (m < 1) return false;
    if (m == 1) return true;
    PVec x(static_cast<size_t>(m), 0);
    x[1] = 1;
    // x^(p^m) via m successive p-th powers
    PVec xm = x;
    for (int i = 0; i < m; ++i) xm = pv_powmod(xm, p, f, p);
    if (xm != x) return false;
    // for each prime l | m: gcd(x^(p^(m/l)) - x, f) must be constant
    int rest = m;
    std::vector<int> primes;
    for (int l = 2; l <= rest; ++l) {
        if (rest % l == 0) {
            primes.push_back(l);
            while (rest % l == 0) rest /= l;
        }
    }
    for (int l : primes) {
        int k = m / l;
        PVec xk = x;
        for (int i = 0; i < k; ++i) xk = pv_powmod(xk, p, f, p);
        // xk - x
        PVec diff = xk;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = static_cast<std::uint32_t>((diff[1] + p - 1) % p);
        PVec g = pv_gcd(diff, f, p);
        if (pv_deg(g) > 0) return false;
    }
    return true;
}

}  // namespace

FiniteField::FiniteField(std::uint64_t p, std::uint32_t m,
                         std::optional<std::vector<std::uint32_t>> modulus)
    : p_(p), m_(m) {
    if (!is_prime(p)) throw NonPrime("p = " + std::to_string(p) + " is not prime");
    if (m == 0) throw Error("extension degree must be >= 1");
    size_ = 1;
    for (std::uint32_t i = 0; i < m; ++i) {
        if (size_ > (std::uint64_t(1) << 40) / p)
            throw FieldTooLarge("field size p^m exceeds the supported range");
        size_ *= p;
    }
    if (modulus) {
        mod_ = *modulus;
        if (mod_.size() != m + 1)
            throw Error("modulus must have degree m (ascending coefficients, length m+1)");
        for (auto& c : mod_) c %= static_cast<std::uint32_t>(p);
        if (mod_[m] != 1) throw Error("modulus must be monic of degree m");
        if (!pv_irreducible(mod_, p_))
            throw ReducibleModulus("modulus is reducible over F_" + std::to_string(p));
    } else if (m == 1) {
        mod_ = {0, 1};  // t
    } else {
        // the search result only depends on (p, m); cache it across instances
        static std::mutex cache_mutex;
        static std::map<std::pair<std::uint64_t, std::uint32_t>, PVec> cache;
        {
            std::lock_guard<std::mutex> lock(cache_mutex);
            auto it = cache.find({p_, m_});
            if (it != cache.end()) {
                mod_ = it->second;
                return;
            }
        }
        // smallest monic irreducible by base-p radix value of (c_0..c_{m-1})
        for (std::uint64_t v = 0; v < size_; ++v) {
            PVec cand(m + 1, 0);
            std::uint64_t t = v;
            for (std::uint32_t i = 0; i < m; ++i) {
                cand[i] = static_cast<std::uint32_t>(t % p);
                t /= p;
            }
            cand[m] = 1;
            if (pv_irreducible(cand, p_)) {
                mod_ = cand;
                break;
            }
        }
        if (mod_.empty()) throw Error("no irreducible modulus found");  // unreachable
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache.emplace(std::make_pair(p_, m_), mod_);
    }
}

void FiniteField::check(const FieldElement& a) const {
    if (a.c.size() != m_) throw FieldMismatch("element has wrong coefficient length for this field");
}

FieldElement FiniteField::one() const {
    FieldElement e = zero();
    e.c[0] = 1;
    return e;
}

FieldElement FiniteField::element(std::uint64_t index) const {
    FieldElement e = zero();
    for (std::uint32_t i = 0; i < m_ && index; ++i) {
        e.c[i] = static_cast<std::uint32_t>(index % p_);
        index /= p_;
    }
    return e;
}

std::uint64_t FiniteField::index_of(const FieldElement& a) const {
    check(a);
    std::uint64_t v = 0;
    for (std::uint32_t i = m_; i-- > 0;) v = v * p_ + a.c[i];
    return v;
}

FieldElement FiniteField::add(const FieldElement& a, const FieldElement& b) const {
    check(a);
    check(b);
    FieldElement r = a;
    for (std::uint32_t i = 0; i < m_; ++i) r.c[i] = static_cast<std::uint32_t>((r.c[i] + b.c[i]) % p_);
    return r;
}

FieldElement FiniteField::sub(const FieldElement& a, const FieldElement& b) const {
    check(a);
    check(b);
    FieldElement r = a;
    for (std::uint32_t i = 0; i < m_; ++i)
        r.c[i] = static_cast<std::uint32_t>((r.c[i] + p_ - b.c[i]) % p_);
    return r;
}

FieldElement FiniteField::neg(const FieldElement& a) const { return sub(zero(), a); }

FieldElement FiniteField::mul(const FieldElement& a, const FieldElement& b) const {
    check(a);
    check(b);
    if (m_ == 1) {
        FieldElement r = zero();
        r.c[0] = static_cast<std::uint32_t>(std::uint64_t(a.c[0]) * b.c[0] % p_);
        return r;
    }
    std::vector<std::uint64_t> prod(2 * m_ - 1, 0);
    for (std::uint32_t i = 0; i < m_; ++i) {
        if (!a.c[i]) continue;
        for (std::uint32_t j = 0; j < m_; ++j)
            prod[i + j] = (prod[i + j] + std::uint64_t(a.c[i]) * b.c[j]) % p_;
    }
    for (std::uint32_t k = 2 * m_ - 2; k >= m_; --k) {
        std::uint64_t t = prod[k];
        if (t) {
            prod[k] = 0;
            for (std::uint32_t i = 0; i < m_; ++i)
                prod[k - m_ + i] = (prod[k - m_ + i] + (p_ - mod_[i]) * t) % p_;
        }
        if (k == m_) break;
    }
    FieldElement r = zero();
    for (std::uint32_t i = 0; i < m_; ++i) r.c[i] = static_cast<std::uint32_t>(prod[i]);
    return r;
}

FieldElement FiniteField::pow(const FieldElement& a, std::uint64_t e) const {
    check(a);
    FieldElement base = a, r = one();
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

FieldElement FiniteField::inv(const FieldElement& a) const {
    check(a);
    if (a.is_zero()) throw DivisionByZero("inverse of zero");
    return pow(a, size_ - 2);
}

FieldElement FiniteField::div(const FieldElement& a, const FieldElement& b) const {
    return mul(a, inv(b));
}

std::uint32_t FiniteField::subfield_exponent(std::uint64_t q) const {
    std::uint64_t qq = q;
    std::uint32_t s = 0;
    while (qq > 1 && qq % p_ == 0) {
        qq /= p_;
        ++s;
    }
    if (qq != 1 || s == 0 || m_ % s != 0)
        throw InvalidSubfield("q = " + std::to_string(q) + " is not the size of a subfield of F_" +
                              std::to_string(p_) + "^" + std::to_string(m_));
    return s;
}

FieldElement FiniteField::frobenius(const FieldElement& x, std::uint64_t q, std::uint32_t k) const {
    std::uint32_t s = subfield_exponent(q);
    FieldElement y = x;
    for (std::uint64_t i = 0; i < std::uint64_t(s) * k; ++i) y = pow(y, p_);
    return y;
}

std::uint32_t FiniteField::element_degree(const FieldElement& x, std::uint64_t q) const {
    subfield_exponent(q);
    FieldElement y = frobenius(x, q, 1);
    std::uint32_t r = 1;
    while (!(y == x)) {
        y = frobenius(y, q, 1);
        ++r;
        if (r > m_) throw Error("element degree runaway");  // unreachable
    }
    return r;
}

std::string FiniteField::to_string(const FieldElement& a) const {
    if (m_ == 1) return std::to_string(a.c[0]);
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::uint32_t i = m_; i-- > 0;) {
        std::uint32_t c = a.c[i];
        if (!c) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0) {
            os << c;
        } else {
            if (c != 1) os << c << "*";
            os << "t";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

// --- Poly --------------------------------------------------------------------

int poly_deg(const Poly& f) { return static_cast<int>(f.c.size()) - 1; }

Poly poly_trim(const FiniteField&, Poly f) {
    while (!f.c.empty() && f.c.back().is_zero()) f.c.pop_back();
    return f;
}

Poly poly_from_ints(const FiniteField& F, const std::vector<std::int64_t>& coeffs) {
    Poly f;
    std::int64_t p = static_cast<std::int64_t>(F.p());
    for (auto v : coeffs) {
        std::int64_t r = ((v % p) + p) % p;
        f.c.push_back(F.from_int(static_cast<std::uint64_t>(r)));
    }
    return poly_trim(F, std::move(f));
}

Poly poly_add(const FiniteField& F, const Poly& a, const Poly& b) {
    Poly r;
    size_t n = std::max(a.c.size(), b.c.size());
    r.c.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        FieldElement x = i < a.c.size() ? a.c[i] : F.zero();
        FieldElement y = i < b.c.size() ? b.c[i] : F.zero();
        r.c.push_back(F.add(x, y));
    }
    return poly_trim(F, std::move(r));
}

Poly poly_sub(const FiniteField& F, const Poly& a, const Poly& b) {
    return poly_add(F, a, poly_scale(F, F.neg(F.one()), b));
}

Poly poly_mul(const FiniteField& F, const Poly& a, const Poly& b) {
    if (a.c.empty() || b.c.empty()) return Poly{};
    Poly r;
    r.c.assign(a.c.size() + b.c.size() - 1, F.zero());
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].is_zero()) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
    }
    return poly_trim(F, std::move(r));
}

Poly poly_scale(const FiniteField& F, const FieldElement& s, const Poly& a) {
    Poly r;
    r.c.reserve(a.c.size());
    for (const auto& x : a.c) r.c.push_back(F.mul(s, x));
    return poly_trim(F, std::move(r));
}

std::pair<Poly, Poly> poly_divrem(const FiniteField& F, const Poly& a, const Poly& b) {
    if (b.c.empty()) throw DivisionByZero("polynomial division by zero");
    Poly rem = a, quot;
    int db = poly_deg(b);
    if (poly_deg(a) >= db) quot.c.assign(static_cast<size_t>(poly_deg(a) - db + 1), F.zero());
    FieldElement lead_inv = F.inv(b.c.back());
    while (poly_deg(rem) >= db) {
        int shift = poly_deg(rem) - db;
        FieldElement qc = F.mul(rem.c.back(), lead_inv);
        quot.c[static_cast<size_t>(shift)] = qc;
        for (int i = 0; i <= db; ++i) {
            auto& slot = rem.c[static_cast<size_t>(shift + i)];
            slot = F.sub(slot, F.mul(qc, b.c[static_cast<size_t>(i)]));
        }
        rem = poly_trim(F, std::move(rem));
    }
    return {poly_trim(F, std::move(quot)), rem};
}

Poly poly_gcd(const FiniteField& F, Poly a, Poly b) {
    a = poly_trim(F, std::move(a));
    b = poly_trim(F, std::move(b));
    while (!b.c.empty()) {
        Poly r = poly_divrem(F, a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.c.empty()) a = poly_scale(F, F.inv(a.c.back()), a);
    return a;
}

Poly poly_derivative(const FiniteField& F, const Poly& a) {
    Poly r;
    for (size_t i = 1; i < a.c.size(); ++i)
        r.c.push_back(F.mul(F.from_int(i % F.p()), a.c[i]));
    return poly_trim(F, std::move(r));
}

FieldElement poly_eval(const FiniteField& F, const Poly& a, const FieldElement& x) {
    FieldElement acc = F.zero();
    for (size_t i = a.c.size(); i-- > 0;) acc = F.add(F.mul(acc, x), a.c[i]);
    return acc;
}

std::string poly_to_string(const FiniteField& F, const Poly& a) {
    if (a.c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = a.c.size(); i-- > 0;) {
        if (a.c[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        std::string cs = F.to_string(a.c[i]);
        if (i == 0) {
            os << cs;
        } else {
            if (cs != "1") os << "(" << cs << ")*";
            os << "x";
            if (i > 1) os << "^" << i;
        }
    }
    if (first) return "0";
    return os.str();
}

std::vector<std::pair<FieldElement, int>> poly_roots(const FiniteField& F, const Poly& f) {
    if (f.c.empty()) throw ZeroPolynomial("roots of the zero polynomial");
    std::vector<std::pair<FieldElement, int>> out;
    for (std::uint64_t i = 0; i < F.size(); ++i) {
        FieldElement x = F.element(i);
        if (!poly_eval(F, f, x).is_zero()) continue;
        // multiplicity by repeated synthetic division by (X - x)
        Poly g = f;
        int mult = 0;
        while (true) {
            // synthetic division; remainder is eval, known zero on first pass
            std::vector<FieldElement> q(g.c.size() > 0 ? g.c.size() - 1 : 0, F.zero());
            FieldElement carry = F.zero();
            for (size_t k = g.c.size(); k-- > 0;) {
                FieldElement cur = F.add(g.c[k], F.mul(carry, x));
                if (k == 0) {
                    if (!cur.is_zero()) goto done;
                } else {
                    q[k - 1] = cur;
                }
                carry = cur;
            }
            g.c = std::move(q);
            g = poly_trim(F, std::move(g));
            ++mult;
            if (g.c.empty()) break;
        }
    done:
        out.emplace_back(x, mult);
    }
    return out;
}

// --- projective line ----------------------------------------------------------

std::string point_to_string(const FiniteField& F, const ProjPoint& P) {
    if (P.is_infinite()) return "inf";
    return F.to_string(P.x0);
}

std::vector<ProjPoint> enumerate_projective_line(const FiniteField& ambient, std::uint64_t q,
                                                 std::uint32_t r) {
    // F_{q^r} must itself be a subfield of the ambient, not just F_q: fixed
    // points of x -> x^(q^r) otherwise silently form a smaller field
    std::uint32_t s = 0;
    {
        std::uint64_t qq = q;
        while (qq > 1 && qq % ambient.p() == 0) {
            qq /= ambient.p();
            ++s;
        }
        bool ok = qq == 1 && s > 0 && r > 0 && ambient.m() % (std::uint64_t(s) * r) == 0;
        if (!ok)
            throw InvalidSubfield("F_{q^r} with q = " + std::to_string(q) + ", r = " +
                                  std::to_string(r) + " is not a subfield of the ambient field");
    }
    std::vector<ProjPoint> pts;
    for (std::uint64_t i = 0; i < ambient.size(); ++i) {
        FieldElement x = ambient.element(i);
        if (ambient.frobenius(x, q, r) == x) pts.push_back(ProjPoint::finite(ambient, x));
    }
    pts.push_back(ProjPoint::infinity(ambient));
    return pts;
}

}  // namespace towerlab
