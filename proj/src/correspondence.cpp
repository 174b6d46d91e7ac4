#include "towerlab/correspondence.hpp"

#include <algorithm>
#include <optional>

namespace towerlab {

namespace {

// multiplicity of x as a root of f, by repeated synthetic division
int root_multiplicity_at(const FiniteField& F, Poly f, const FieldElement& x) {
    int mult = 0;
    while (!f.c.empty()) {
        std::vector<FieldElement> q(f.c.size() - 1, F.zero());
        FieldElement carry = F.zero();
        bool hit = true;
        for (size_t k = f.c.size(); k-- > 0;) {
            FieldElement cur = F.add(f.c[k], F.mul(carry, x));
            if (k == 0) {
                if (!cur.is_zero()) hit = false;
            } else {
                q[k - 1] = cur;
            }
            carry = cur;
        }
        if (!hit) break;
        f.c = std::move(q);
        f = poly_trim(F, std::move(f));
        ++mult;
    }
    return mult;
}

Poly dehom(const FiniteField& F, const std::vector<FieldElement>& form) {
    Poly b;
    b.c = form;
    return poly_trim(F, std::move(b));
}

}  // namespace

// --- rational maps -------------------------------------------------------------

RationalMap make_rational_map(const FiniteField& F, Poly num, Poly den) {
    num = poly_trim(F, std::move(num));
    den = poly_trim(F, std::move(den));
    if (den.c.empty()) throw DivisionByZero("rational map with zero denominator");
    Poly g = poly_gcd(F, num, den);
    if (poly_deg(g) > 0) {
        num = poly_divrem(F, num, g).first;
        den = poly_divrem(F, den, g).first;
    }
    FieldElement lead_inv = F.inv(den.c.back());
    num = poly_scale(F, lead_inv, num);
    den = poly_scale(F, lead_inv, den);
    RationalMap h{std::move(num), std::move(den)};
    if (map_degree(h) < 1) throw ConstantMap("map has degree < 1 after reduction");
    return h;
}

int map_degree(const RationalMap& h) { return std::max(poly_deg(h.num), poly_deg(h.den)); }

ProjPoint map_value(const FiniteField& F, const RationalMap& h, const ProjPoint& P) {
    int D = map_degree(h);
    FieldElement n, d;
    if (P.is_infinite()) {
        n = poly_deg(h.num) == D ? h.num.c.back() : F.zero();
        d = poly_deg(h.den) == D ? h.den.c.back() : F.zero();
    } else {
        n = poly_eval(F, h.num, P.x0);
        d = poly_eval(F, h.den, P.x0);
    }
    if (d.is_zero()) return ProjPoint::infinity(F);
    return ProjPoint::finite(F, F.div(n, d));
}

std::vector<FieldElement> map_fiber_form(const FiniteField& F, const RationalMap& h,
                                         const ProjPoint& v) {
    // v1 * num_hom(X) - v0 * den_hom(X), a binary form of degree D
    int D = map_degree(h);
    std::vector<FieldElement> form(static_cast<size_t>(D) + 1, F.zero());
    for (int i = 0; i <= D; ++i) {
        FieldElement n = i <= poly_deg(h.num) ? h.num.c[static_cast<size_t>(i)] : F.zero();
        FieldElement d = i <= poly_deg(h.den) ? h.den.c[static_cast<size_t>(i)] : F.zero();
        form[static_cast<size_t>(i)] = F.sub(F.mul(v.x1, n), F.mul(v.x0, d));
    }
    return form;
}

int ramification_index(const FiniteField& F, const RationalMap& h, const ProjPoint& P) {
    auto form = map_fiber_form(F, h, map_value(F, h, P));
    return binary_form_root_multiplicity(F, form, P);
}

std::vector<std::pair<ProjPoint, int>> ramification_points(const FiniteField& F,
                                                           const RationalMap& h) {
    std::vector<std::pair<ProjPoint, int>> out;
    for (const auto& P : enumerate_projective_line(F, F.p(), F.m())) {
        int e = ramification_index(F, h, P);
        if (e >= 2) out.emplace_back(P, e);
    }
    return out;
}

// --- binary forms ----------------------------------------------------------------

std::vector<std::pair<ProjPoint, int>> binary_form_roots(const FiniteField& F,
                                                         const std::vector<FieldElement>& form) {
    int d = static_cast<int>(form.size()) - 1;
    Poly b = dehom(F, form);
    if (b.c.empty()) throw DegenerateCorrespondence("binary form vanishes identically");
    std::vector<std::pair<ProjPoint, int>> out;
    for (auto& [x, m] : poly_roots(F, b)) out.emplace_back(ProjPoint::finite(F, x), m);
    int inf_mult = d - poly_deg(b);
    if (inf_mult > 0) out.emplace_back(ProjPoint::infinity(F), inf_mult);
    return out;
}

int binary_form_root_multiplicity(const FiniteField& F, const std::vector<FieldElement>& form,
                                  const ProjPoint& P) {
    int d = static_cast<int>(form.size()) - 1;
    Poly b = dehom(F, form);
    if (b.c.empty()) throw DegenerateCorrespondence("binary form vanishes identically");
    if (P.is_infinite()) return d - poly_deg(b);
    return root_multiplicity_at(F, b, P.x0);
}

// --- embeddings -------------------------------------------------------------------

Embedding::Embedding(const FiniteField& base, const FiniteField& ambient)
    : base_(base), ambient_(ambient) {
    if (base.p() != ambient.p() || ambient.m() % base.m() != 0)
        throw InvalidSubfield("no embedding: base field is not a subfield of the ambient field");
    if (base == ambient) {
        for (std::uint32_t i = 0; i < base.m(); ++i) {
            FieldElement e = ambient.zero();
            e.c[i] = 1;
            gen_powers_.push_back(e);
        }
        return;
    }
    Poly mod;
    for (auto c : base.modulus()) mod.c.push_back(ambient.from_int(c));
    mod = poly_trim(ambient, std::move(mod));
    auto roots = poly_roots(ambient, mod);
    if (roots.empty()) throw InvalidSubfield("base modulus has no root in the ambient field");
    FieldElement rho = roots.front().first;  // least-index root: deterministic choice
    FieldElement acc = ambient.one();
    for (std::uint32_t i = 0; i < base.m(); ++i) {
        gen_powers_.push_back(acc);
        acc = ambient.mul(acc, rho);
    }
}

FieldElement Embedding::operator()(const FieldElement& base_elem) const {
    if (base_elem.c.size() != base_.m())
        throw FieldMismatch("element does not belong to the embedding's base field");
    FieldElement out = ambient_.zero();
    for (std::uint32_t i = 0; i < base_.m(); ++i) {
        if (!base_elem.c[i]) continue;
        out = ambient_.add(out, ambient_.mul(ambient_.from_int(base_elem.c[i]), gen_powers_[i]));
    }
    return out;
}

RationalMap embed_map(const Embedding& e, const RationalMap& h) {
    RationalMap out;
    for (const auto& c : h.num.c) out.num.c.push_back(e(c));
    for (const auto& c : h.den.c) out.den.c.push_back(e(c));
    return out;  // already reduced and monic; embedding preserves both
}

// --- correspondences ---------------------------------------------------------------

Correspondence Correspondence::from_separated(const FiniteField& F, const RationalMap& f,
                                              const RationalMap& g) {
    int d1 = map_degree(f), d2 = map_degree(g);
    auto hom = [&F](const Poly& p, int deg) {
        std::vector<FieldElement> v(static_cast<size_t>(deg) + 1, F.zero());
        for (int i = 0; i <= poly_deg(p); ++i) v[static_cast<size_t>(i)] = p.c[static_cast<size_t>(i)];
        return v;
    };
    auto fn = hom(f.num, d1), fd = hom(f.den, d1);
    auto gn = hom(g.num, d2), gd = hom(g.den, d2);
    std::vector<std::vector<FieldElement>> c(static_cast<size_t>(d1) + 1,
                                             std::vector<FieldElement>(static_cast<size_t>(d2) + 1,
                                                                       F.zero()));
    bool nonzero = false;
    for (int i = 0; i <= d1; ++i)
        for (int j = 0; j <= d2; ++j) {
            FieldElement v = F.sub(F.mul(fn[static_cast<size_t>(i)], gd[static_cast<size_t>(j)]),
                                   F.mul(fd[static_cast<size_t>(i)], gn[static_cast<size_t>(j)]));
            nonzero |= !v.is_zero();
            c[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
        }
    if (!nonzero) throw DegenerateCorrespondence("separated form vanishes identically");
    // reduced maps with max-degree homogenization share no root on either side,
    // so no one-sided content can appear here
    return Correspondence(F, d1, d2, std::move(c));
}

Correspondence Correspondence::from_bihomogeneous(const FiniteField& F, int d1, int d2,
                                                  std::vector<std::vector<FieldElement>> coeffs) {
    if (d1 < 1 || d2 < 1) throw DegenerateCorrespondence("bidegree entries must be >= 1");
    if (coeffs.size() != static_cast<size_t>(d1) + 1)
        throw DegenerateCorrespondence("coefficient matrix must have d1+1 rows");
    for (auto& row : coeffs)
        if (row.size() != static_cast<size_t>(d2) + 1)
            throw DegenerateCorrespondence("coefficient matrix must have d2+1 columns");

    // one-sided content in X: common factor of all column forms (gcd of the
    // dehomogenizations plus a shared power of X1 seen as missing degree)
    auto content_trivial = [&F](const std::vector<Poly>& forms, int formdeg) {
        Poly g;
        int min_missing = formdeg + 1;
        bool any = false;
        for (const auto& b : forms) {
            if (b.c.empty()) continue;
            any = true;
            g = poly_gcd(F, g, b);
            min_missing = std::min(min_missing, formdeg - poly_deg(b));
        }
        if (!any) return false;  // identically zero
        return poly_deg(g) <= 0 && min_missing == 0;
    };

    std::vector<Poly> cols, rows;
    for (int j = 0; j <= d2; ++j) {
        Poly b;
        for (int i = 0; i <= d1; ++i) b.c.push_back(coeffs[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        cols.push_back(poly_trim(F, std::move(b)));
    }
    for (int i = 0; i <= d1; ++i) {
        Poly b;
        b.c = coeffs[static_cast<size_t>(i)];
        rows.push_back(poly_trim(F, std::move(b)));
    }
    if (!content_trivial(cols, d1))
        throw DegenerateCorrespondence("form has a factor depending on X alone (or is zero)");
    if (!content_trivial(rows, d2))
        throw DegenerateCorrespondence("form has a factor depending on Y alone (or is zero)");
    return Correspondence(F, d1, d2, std::move(coeffs));
}

std::vector<FieldElement> Correspondence::fiber_in_y(const ProjPoint& P) const {
    std::vector<FieldElement> form(static_cast<size_t>(d2_) + 1, F_.zero());
    if (P.is_infinite()) {
        for (int j = 0; j <= d2_; ++j) form[static_cast<size_t>(j)] = coeff(d1_, j);
        return form;
    }
    // powers of the affine coordinate; X1 = 1
    FieldElement xp = F_.one();
    for (int i = 0; i <= d1_; ++i) {
        for (int j = 0; j <= d2_; ++j)
            form[static_cast<size_t>(j)] = F_.add(form[static_cast<size_t>(j)], F_.mul(coeff(i, j), xp));
        xp = F_.mul(xp, P.x0);
    }
    return form;
}

std::vector<FieldElement> Correspondence::fiber_in_x(const ProjPoint& Q) const {
    std::vector<FieldElement> form(static_cast<size_t>(d1_) + 1, F_.zero());
    if (Q.is_infinite()) {
        for (int i = 0; i <= d1_; ++i) form[static_cast<size_t>(i)] = coeff(i, d2_);
        return form;
    }
    FieldElement yp = F_.one();
    for (int j = 0; j <= d2_; ++j) {
        for (int i = 0; i <= d1_; ++i)
            form[static_cast<size_t>(i)] = F_.add(form[static_cast<size_t>(i)], F_.mul(coeff(i, j), yp));
        yp = F_.mul(yp, Q.x0);
    }
    return form;
}

FieldElement Correspondence::eval(const ProjPoint& P, const ProjPoint& Q) const {
    auto form = fiber_in_y(P);
    if (Q.is_infinite()) return form.back();
    Poly b;
    b.c = form;
    return poly_eval(F_, poly_trim(F_, std::move(b)), Q.x0);
}

Correspondence Correspondence::embedded(const Embedding& e) const {
    std::vector<std::vector<FieldElement>> c;
    c.reserve(c_.size());
    for (const auto& row : c_) {
        std::vector<FieldElement> r;
        r.reserve(row.size());
        for (const auto& v : row) r.push_back(e(v));
        c.push_back(std::move(r));
    }
    return Correspondence(e.ambient(), d1_, d2_, std::move(c));
}

std::vector<std::pair<ProjPoint, int>> out_neighbors(const Correspondence& corr,
                                                     const ProjPoint& P) {
    return binary_form_roots(corr.field(), corr.fiber_in_y(P));
}

std::vector<std::pair<ProjPoint, int>> in_neighbors(const Correspondence& corr,
                                                    const ProjPoint& Q) {
    return binary_form_roots(corr.field(), corr.fiber_in_x(Q));
}

EdgeFlags edge_flags(const Correspondence& corr, const ProjPoint& P, const ProjPoint& Q) {
    const FiniteField& F = corr.field();
    int m1 = binary_form_root_multiplicity(F, corr.fiber_in_y(P), Q);
    if (m1 == 0)
        throw NotOnCorrespondence("(" + point_to_string(F, P) + ", " + point_to_string(F, Q) +
                                  ") does not lie on the correspondence");
    int m2 = binary_form_root_multiplicity(F, corr.fiber_in_x(Q), P);
    return EdgeFlags{m1 == 1, m2 == 1};
}

bool reduced_certificate(const Correspondence& corr) {
    const FiniteField& base = corr.field();
    // a reduced form has at most 2*d1*d2 non-squarefree fibers (discriminant
    // roots plus leading-coefficient drops), while a repeated Y-dependent
    // factor leaves at most d1 squarefree ones; sampling 2*d1*d2 + d1 + 1
    // fibers therefore separates the two cases. Small base lines cannot supply
    // that many sample points, so lift to the smallest extension that can.
    const std::uint64_t need = 2ull * static_cast<std::uint64_t>(corr.d1()) *
                                   static_cast<std::uint64_t>(corr.d2()) +
                               static_cast<std::uint64_t>(corr.d1()) + 1;
    std::uint32_t ext = 1;
    std::uint64_t line = base.size() + 1;
    while (line < need && ext < 40) {
        ++ext;
        line = 1;
        for (std::uint32_t i = 0; i < ext; ++i) line *= base.size();
        ++line;
    }

    std::optional<FiniteField> lifted_field;
    std::optional<Correspondence> lifted;
    const Correspondence* use = &corr;
    if (ext > 1) {
        lifted_field.emplace(base.p(), base.m() * ext);
        lifted.emplace(corr.embedded(Embedding(base, *lifted_field)));
        use = &*lifted;
    }

    const FiniteField& F = use->field();
    auto pts = enumerate_projective_line(F, F.p(), F.m());
    size_t want = std::min<size_t>(pts.size(), static_cast<size_t>(need));
    int squarefree = 0;
    for (size_t k = 0; k < want; ++k) {
        auto form = use->fiber_in_y(pts[k]);
        Poly b = dehom(F, form);
        if (b.c.empty()) continue;
        int inf_mult = use->d2() - poly_deg(b);
        if (inf_mult >= 2) continue;
        Poly g = poly_gcd(F, b, poly_derivative(F, b));
        if (poly_deg(g) > 0) continue;
        ++squarefree;
    }
    return squarefree > corr.d1();
}

ChartEvals chart_partials(const Correspondence& corr, bool src_inverted, bool dst_inverted,
                          const FieldElement& s, const FieldElement& t) {
    const FiniteField& F = corr.field();
    int d1 = corr.d1(), d2 = corr.d2();
    std::vector<FieldElement> spow(static_cast<size_t>(d1) + 1), tpow(static_cast<size_t>(d2) + 1);
    spow[0] = F.one();
    for (int i = 1; i <= d1; ++i) spow[static_cast<size_t>(i)] = F.mul(spow[static_cast<size_t>(i - 1)], s);
    tpow[0] = F.one();
    for (int j = 1; j <= d2; ++j) tpow[static_cast<size_t>(j)] = F.mul(tpow[static_cast<size_t>(j - 1)], t);

    ChartEvals out{F.zero(), F.zero(), F.zero()};
    for (int i = 0; i <= d1; ++i) {
        int ie = src_inverted ? d1 - i : i;  // exponent of the local source coordinate
        for (int j = 0; j <= d2; ++j) {
            int je = dst_inverted ? d2 - j : j;
            const FieldElement& c = corr.coeff(i, j);
            if (c.is_zero()) continue;
            FieldElement base = F.mul(c, tpow[static_cast<size_t>(je)]);
            out.value = F.add(out.value, F.mul(base, spow[static_cast<size_t>(ie)]));
            if (ie > 0) {
                FieldElement term = F.mul(base, spow[static_cast<size_t>(ie - 1)]);
                term = F.mul(term, F.from_int(static_cast<std::uint64_t>(ie) % F.p()));
                out.ds = F.add(out.ds, term);
            }
            if (je > 0) {
                FieldElement term = F.mul(F.mul(c, spow[static_cast<size_t>(ie)]),
                                          tpow[static_cast<size_t>(je - 1)]);
                term = F.mul(term, F.from_int(static_cast<std::uint64_t>(je) % F.p()));
                out.dt = F.add(out.dt, term);
            }
        }
    }
    return out;
}

std::pair<bool, FieldElement> local_coord(const FiniteField& F, const ProjPoint& P) {
    if (P.is_infinite()) return {true, F.zero()};
    return {false, P.x0};
}

}  // namespace towerlab
