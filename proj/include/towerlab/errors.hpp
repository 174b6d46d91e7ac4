#pragma once

#include <stdexcept>
#include <string>

namespace towerlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// field construction
struct NonPrime : Error { using Error::Error; };
struct ReducibleModulus : Error { using Error::Error; };
struct FieldTooLarge : Error { using Error::Error; };

// element / polynomial arithmetic
struct DivisionByZero : Error { using Error::Error; };
struct InvalidSubfield : Error { using Error::Error; };
struct ZeroPolynomial : Error { using Error::Error; };
struct FieldMismatch : Error { using Error::Error; };

// correspondences
struct ConstantMap : Error { using Error::Error; };
struct DegenerateCorrespondence : Error { using Error::Error; };
struct NotOnCorrespondence : Error { using Error::Error; };

// paths, cycles, oracles
struct InvalidPath : Error { using Error::Error; };
struct PathTooLong : Error { using Error::Error; };
// kept for interface compatibility; the per-coordinate chart construction never fails
struct ChartFailure : Error { using Error::Error; };

// cores and completeness
struct MultipleRegularCores : Error { using Error::Error; };
// kept for interface compatibility; completeness is decidable in any ambient containing S
struct AmbientTooSmall : Error { using Error::Error; };

// invariants
struct MissingDeltas : Error { using Error::Error; };
struct MissingDivisorValue : Error { using Error::Error; };
struct NegativeDeficiency : Error { using Error::Error; };
struct MultiplePositiveParameters : Error { using Error::Error; };
struct SearchBoundExceeded : Error { using Error::Error; };

// tower description files
struct SyntaxError : Error {
    int line;
    int col;
    SyntaxError(int line_, int col_, const std::string& expected)
        : Error("syntax error at " + std::to_string(line_) + ":" + std::to_string(col_) +
                ": expected " + expected),
          line(line_), col(col_) {}
};
struct SemanticError : Error { using Error::Error; };

// CLI-level gate: parameters outside the theorems' hypotheses (e.g. degree 1 maps)
struct HypothesisViolation : Error { using Error::Error; };

// probe sweeps
struct BudgetExceeded : Error { using Error::Error; };

}  // namespace towerlab
