#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "towerlab/errors.hpp"
#include "towerlab/graph.hpp"

namespace towerlab {

using Rational = boost::multiprecision::cpp_rational;

// Parameters fixed by the correspondence and the base curve.
struct GenusParams {
    long long d = 2;     // common degree of both projections
    BigInt gamma2 = 0;   // arithmetic genus of the correspondence curve itself
    BigInt g1 = 0;       // genus of the base curve (0 for the projective line)
};

// Arithmetic genus of the n-th normalized fiber product, given the geometric
// genus of level n-1:
//   gamma_n - 1 = d*(g_{n-1} - 1) + d^(n-2) * ((gamma2 - 1) - d*(g1 - 1))
// Requires n >= 2.
BigInt sharp_genus(const GenusParams& P, const BigInt& g_prev, int n);

// Geometric genus at level n via the closed form.  deltas[k] is the
// normalization correction Delta_{k+2}, so deltas must hold at least n-1
// entries when n >= 2; otherwise MissingDeltas is thrown.  n = 1 returns g1.
BigInt geometric_genus(const GenusParams& P, const std::vector<BigInt>& deltas, int n);

// Same quantity computed by unrolling g_k = sharp_genus(k) - Delta_k from g1.
// The two routes must agree identically; tests enforce it.
BigInt geometric_genus_recursive(const GenusParams& P, const std::vector<BigInt>& deltas, int n);

// Conversion between point counts per level (N_r) and point counts by exact
// degree (B_r), related by N_r = sum_{e | r} e * B_e.
enum class ConvertDirection {
    counts_to_degrees,  // N -> B (Moebius inversion)
    degrees_to_counts,  // B -> N
};

// Every divisor of every requested level must be present in `in`, otherwise
// MissingDivisorValue is thrown.  Returns values for r = 1..rmax.
std::map<int, Rational> nb_convert(const std::map<int, Rational>& in,
                                   ConvertDirection dir, int rmax);

// Asymptotic description of a tower whose regular core first appears at
// level r0 and carries `core_size` vertices with growth constant ell.
struct AsymptoticInvariants {
    long long core_size = 0;
    int r0 = 0;                     // 0 means no core was found
    std::optional<Rational> ell;
    std::map<int, Rational> lambda; // r -> lambda_r for r = 1..rmax
    std::map<int, Rational> beta;   // r -> beta_r  for r = 1..rmax
};

// lambda_s = core_size * ell when r0 | s, else 0; beta is supported on r0
// alone with beta_{r0} = core_size * ell / r0.  Throws Error on r0 < 1,
// rmax < 1 or core_size < 0.
AsymptoticInvariants lambda_beta_from_core(long long core_size, int r0,
                                           const Rational& ell, int rmax);

// Checks lambda_r == sum_{e | r} e * beta_e for all r present in lambda.
bool lambda_beta_consistent(const std::map<int, Rational>& lambda,
                            const std::map<int, Rational>& beta);

// Deficiency of the tower against the generalized Drinfeld-Vladut bound:
//   delta = 1 - sum_r r * beta_r / sqrt(q^r - 1)
// computed in 50-digit floats and returned as double.  A result below zero
// (beyond rounding slack) throws NegativeDeficiency; negative beta entries
// throw Error.
double deficiency(const std::map<int, Rational>& beta, std::uint64_t q);

// Display form of the leading zeta-like factor when beta is supported on a
// single level:  "1" when beta is zero, else "(1-T)^(-b)" with b in lowest
// terms.
std::string zeta_single_parameter(const Rational& beta_r0);

// Reads the support of beta: zero support gives "1", one positive entry is
// rendered via zeta_single_parameter, more than one positive entry throws
// MultiplePositiveParameters.
std::string zeta_from_beta(const std::map<int, Rational>& beta);

// Upper bound 2 * d^n for the number of closed walks of length n in a graph
// with all out-degrees and in-degrees at most d.
BigInt cycle_count_upper_bound(int d, int n);

// Least N in [1, bound] with Re(v^N) > 0 for every v (each value is
// normalized to unit modulus first).  Throws Error on a zero value and
// SearchBoundExceeded when no N works.
long long diophantine_power(const std::vector<std::complex<double>>& values,
                            long long bound = 1000000);

// Structural verdict for a degree-(d1,d2) self-correspondence of the
// projective line: any iterated cover of P^1 by P^1 of degree >= 2 must
// ramify, so singular vertices are unavoidable; only degree (1,1) escapes.
enum class SingOrEtale {
    must_be_singular,
    not_good,
};
SingOrEtale sing_or_etale_flag(int d1, int d2);

std::string rational_to_string(const Rational& x);
Rational parse_rational(const std::string& text);

}  // namespace towerlab
