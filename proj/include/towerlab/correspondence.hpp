#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "towerlab/fields.hpp"

namespace towerlab {

// --- rational self-maps of P^1 ----------------------------------------------
// Stored reduced: gcd(num, den) = 1, den monic. Degree = max(deg num, deg den).

struct RationalMap {
    Poly num, den;
};

// reduces and normalizes; ConstantMap if the reduced map has degree < 1
RationalMap make_rational_map(const FiniteField& F, Poly num, Poly den);
int map_degree(const RationalMap& h);
ProjPoint map_value(const FiniteField& F, const RationalMap& h, const ProjPoint& P);
// binary form (ascending in X0-exponent, length deg+1) cutting out h^{-1}(v)
std::vector<FieldElement> map_fiber_form(const FiniteField& F, const RationalMap& h,
                                         const ProjPoint& v);
// multiplicity of P inside its own fiber h^{-1}(h(P))
int ramification_index(const FiniteField& F, const RationalMap& h, const ProjPoint& P);
// all points of P^1(F) with ramification index >= 2, canonical order
std::vector<std::pair<ProjPoint, int>> ramification_points(const FiniteField& F,
                                                           const RationalMap& h);

// --- binary forms -------------------------------------------------------------
// A binary form of degree d is a vector of length d+1; entry j is the
// coefficient of Y0^j Y1^(d-j). Roots live in P^1.

std::vector<std::pair<ProjPoint, int>> binary_form_roots(const FiniteField& F,
                                                         const std::vector<FieldElement>& form);
int binary_form_root_multiplicity(const FiniteField& F, const std::vector<FieldElement>& form,
                                  const ProjPoint& P);

// --- subfield embeddings -------------------------------------------------------
// Maps F_{p^m} into F_{p^M} (m | M) by sending the generator to the least-index
// root of the base modulus in the ambient field.

class Embedding {
  public:
    Embedding(const FiniteField& base, const FiniteField& ambient);
    const FiniteField& base() const { return base_; }
    const FiniteField& ambient() const { return ambient_; }
    FieldElement operator()(const FieldElement& base_elem) const;

  private:
    FiniteField base_, ambient_;
    std::vector<FieldElement> gen_powers_;  // rho^0 .. rho^(m-1) in the ambient
};

RationalMap embed_map(const Embedding& e, const RationalMap& h);

// --- correspondences on P^1 x P^1 ---------------------------------------------
// Bihomogeneous form F(X0,X1; Y0,Y1) of bidegree (d1,d2); coeff(i,j) multiplies
// X0^i X1^(d1-i) Y0^j Y1^(d2-j). Invariant: no factor in X alone or Y alone.

struct EdgeFlags {
    bool etale_pi1;  // Q is a simple root of F(P; .)
    bool etale_pi2;  // P is a simple root of F(.; Q)
    bool operator==(const EdgeFlags&) const = default;
};

class Correspondence {
  public:
    // F(X;Y) = num_f(X) den_g(Y) - den_f(X) num_g(Y), homogenized to bidegree
    // (deg f, deg g)
    static Correspondence from_separated(const FiniteField& F, const RationalMap& f,
                                         const RationalMap& g);
    // validates the no-one-sided-factor invariant; DegenerateCorrespondence otherwise
    static Correspondence from_bihomogeneous(const FiniteField& F, int d1, int d2,
                                             std::vector<std::vector<FieldElement>> coeffs);

    const FiniteField& field() const { return F_; }
    int d1() const { return d1_; }
    int d2() const { return d2_; }
    const FieldElement& coeff(int i, int j) const {
        return c_[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }

    std::vector<FieldElement> fiber_in_y(const ProjPoint& P) const;  // form in Y, degree d2
    std::vector<FieldElement> fiber_in_x(const ProjPoint& Q) const;  // form in X, degree d1
    FieldElement eval(const ProjPoint& P, const ProjPoint& Q) const;

    long long arithmetic_genus() const { return static_cast<long long>(d1_ - 1) * (d2_ - 1); }
    long long self_intersection() const { return 2LL * d1_ * d2_; }

    Correspondence embedded(const Embedding& e) const;

  private:
    Correspondence(FiniteField F, int d1, int d2, std::vector<std::vector<FieldElement>> c)
        : F_(std::move(F)), d1_(d1), d2_(d2), c_(std::move(c)) {}
    FiniteField F_;
    int d1_, d2_;
    std::vector<std::vector<FieldElement>> c_;
};

// geometric neighbors inside P^1(field of corr), with multiplicities
std::vector<std::pair<ProjPoint, int>> out_neighbors(const Correspondence& corr,
                                                     const ProjPoint& P);
std::vector<std::pair<ProjPoint, int>> in_neighbors(const Correspondence& corr,
                                                    const ProjPoint& Q);
// NotOnCorrespondence if F(P;Q) != 0
EdgeFlags edge_flags(const Correspondence& corr, const ProjPoint& P, const ProjPoint& Q);

// Squarefreeness certificate for the correspondence form, sampled over
// min(2 d1 d2 + 1, all) fibers. True means reducedness is certified (more than
// d1 sampled fibers squarefree); false means the sample was inconclusive.
bool reduced_certificate(const Correspondence& corr);

// --- chart-local evaluation ----------------------------------------------------
// Dehomogenized value and partial derivatives of the correspondence form, with
// an independent chart choice per side: the standard chart has coordinate
// X0/X1 (finite points), the inverted chart has coordinate X1/X0 (so the point
// at infinity sits at 0).

struct ChartEvals {
    FieldElement value, ds, dt;
};

ChartEvals chart_partials(const Correspondence& corr, bool src_inverted, bool dst_inverted,
                          const FieldElement& s, const FieldElement& t);

// chart flag and local coordinate for a point (finite -> standard chart)
std::pair<bool, FieldElement> local_coord(const FiniteField& F, const ProjPoint& P);

}  // namespace towerlab
