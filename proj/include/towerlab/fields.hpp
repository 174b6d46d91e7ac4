#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "towerlab/errors.hpp"

namespace towerlab {

// An element of F_{p^m} in the power basis of the modulus: coeffs[i] is the
// coefficient of t^i, length always m, entries reduced mod p.
struct FieldElement {
    std::vector<std::uint32_t> c;
    bool operator==(const FieldElement&) const = default;
    bool is_zero() const {
        for (auto x : c)
            if (x) return false;
        return true;
    }
};

class FiniteField {
  public:
    // modulus: ascending coefficients of a monic degree-m polynomial over F_p,
    // length m+1. When absent, the smallest monic irreducible is selected
    // (smallest base-p radix value of the coefficient tuple).
    FiniteField(std::uint64_t p, std::uint32_t m,
                std::optional<std::vector<std::uint32_t>> modulus = std::nullopt);

    std::uint64_t p() const { return p_; }
    std::uint32_t m() const { return m_; }
    std::uint64_t size() const { return size_; }
    const std::vector<std::uint32_t>& modulus() const { return mod_; }

    bool operator==(const FiniteField& o) const {
        return p_ == o.p_ && m_ == o.m_ && mod_ == o.mod_;
    }

    FieldElement zero() const { return FieldElement{std::vector<std::uint32_t>(m_, 0)}; }
    FieldElement one() const;
    // element with base-p digit expansion equal to index (canonical enumeration order)
    FieldElement element(std::uint64_t index) const;
    std::uint64_t index_of(const FieldElement& a) const;
    FieldElement from_int(std::uint64_t v) const { return element(v % size_); }

    FieldElement add(const FieldElement& a, const FieldElement& b) const;
    FieldElement sub(const FieldElement& a, const FieldElement& b) const;
    FieldElement neg(const FieldElement& a) const;
    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    FieldElement inv(const FieldElement& a) const;
    FieldElement div(const FieldElement& a, const FieldElement& b) const;
    FieldElement pow(const FieldElement& a, std::uint64_t e) const;

    // x^(q^k) where q = p^s must be the size of a subfield (s | m)
    FieldElement frobenius(const FieldElement& x, std::uint64_t q, std::uint32_t k = 1) const;
    // degree of x over F_q: least r >= 1 with x^(q^r) = x
    std::uint32_t element_degree(const FieldElement& x, std::uint64_t q) const;

    std::string to_string(const FieldElement& a) const;

  private:
    std::uint64_t p_;
    std::uint32_t m_;
    std::uint64_t size_;
    std::vector<std::uint32_t> mod_;

    void check(const FieldElement& a) const;
    // s such that q = p^s and s | m, else InvalidSubfield
    std::uint32_t subfield_exponent(std::uint64_t q) const;
};

// --- dense univariate polynomials over a FiniteField ------------------------
// Ascending coefficients, normalized (no trailing zero coefficients); the zero
// polynomial is the empty vector. Degree of zero is -1.

struct Poly {
    std::vector<FieldElement> c;
    bool operator==(const Poly&) const = default;
};

int poly_deg(const Poly& f);
Poly poly_trim(const FiniteField& F, Poly f);
Poly poly_from_ints(const FiniteField& F, const std::vector<std::int64_t>& coeffs);
Poly poly_add(const FiniteField& F, const Poly& a, const Poly& b);
Poly poly_sub(const FiniteField& F, const Poly& a, const Poly& b);
Poly poly_mul(const FiniteField& F, const Poly& a, const Poly& b);
Poly poly_scale(const FiniteField& F, const FieldElement& s, const Poly& a);
// division with remainder; DivisionByZero on zero divisor
std::pair<Poly, Poly> poly_divrem(const FiniteField& F, const Poly& a, const Poly& b);
Poly poly_gcd(const FiniteField& F, Poly a, Poly b);  // monic unless zero
Poly poly_derivative(const FiniteField& F, const Poly& a);
FieldElement poly_eval(const FiniteField& F, const Poly& a, const FieldElement& x);
std::string poly_to_string(const FiniteField& F, const Poly& a);

// all roots in F with multiplicities, sorted by element index; ZeroPolynomial
// for the zero polynomial
std::vector<std::pair<FieldElement, int>> poly_roots(const FiniteField& F, const Poly& f);

// --- points of the projective line ------------------------------------------
// Normal form: finite points are (x : 1), the point at infinity is (1 : 0).

struct ProjPoint {
    FieldElement x0, x1;
    bool operator==(const ProjPoint&) const = default;
    bool is_infinite() const { return x1.is_zero(); }
    static ProjPoint finite(const FiniteField& F, FieldElement v) {
        return ProjPoint{std::move(v), F.one()};
    }
    static ProjPoint infinity(const FiniteField& F) { return ProjPoint{F.one(), F.zero()}; }
};

std::string point_to_string(const FiniteField& F, const ProjPoint& P);

// P^1(F_{q^r}) inside the ambient field, canonical order: finite points by
// ascending element index, the point at infinity last. Requires F_{q^r} to be
// a subfield of the ambient.
std::vector<ProjPoint> enumerate_projective_line(const FiniteField& ambient, std::uint64_t q,
                                                 std::uint32_t r);

}  // namespace towerlab
