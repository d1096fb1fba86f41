#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rankone/jets.hpp"
#include "rankone/space.hpp"

namespace rankone {

struct ParseError : std::runtime_error {
    size_t offset;
    ParseError(const std::string& msg, size_t off)
        : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

/// Evaluation hit a singular point (pole, log/sqrt/power of zero).
struct EvalError : std::runtime_error {
    size_t offset;  // byte offset of the offending node in the source
    EvalError(const std::string& msg, size_t off)
        : std::runtime_error(msg + " (node at offset " + std::to_string(off) + ")"), offset(off) {}
};

struct EvennessError : std::domain_error {
    using std::domain_error::domain_error;
};

enum class NodeKind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Sqrt };

struct ExprNode {
    NodeKind kind;
    Complex constant{};  // Constant only
    std::shared_ptr<const ExprNode> lhs, rhs;  // rhs unused for unary kinds
    size_t offset = 0;
};

/// A multiplier expression in the spectral variable z.
///
/// Grammar:  expr := term (('+'|'-') term)* ; term := factor (('*'|'/') factor)* ;
/// factor := base ('^' base)? ; base := number | 'i' | 'z' | ident '(' args ')' |
/// '(' expr ')' | '-' base.  Functions: exp, log, sqrt, plus the convenience
/// families heat(tau) = exp(-tau z^2) and impow(tau, c) = (z^2 + c)^(i tau),
/// which are rewritten into the core node set at parse time.  Bare identifiers
/// resolve against the named real parameters.  Powers use the principal branch.
class MultiplierExpr {
  public:
    MultiplierExpr() = default;

    const ExprNode& root() const { return *root_; }
    bool empty() const { return root_ == nullptr; }

    Complex eval(Complex z) const;
    Jet eval(const Jet& z) const;

    std::string pretty() const;

  private:
    std::shared_ptr<const ExprNode> root_;
    friend MultiplierExpr parse_multiplier(const std::string&, const std::map<std::string, double>&);
    friend MultiplierExpr heat_multiplier(double);
    friend MultiplierExpr impow_multiplier(double, double);
};

MultiplierExpr parse_multiplier(const std::string& src,
                                const std::map<std::string, double>& params = {});

/// heat(tau) = exp(-tau z^2)
MultiplierExpr heat_multiplier(double tau);
/// impow(tau, c) = (z^2 + c)^(i tau)
MultiplierExpr impow_multiplier(double tau, double c);

/// Value and derivatives d^j m at zeta, j <= order, by jet arithmetic.
ComplexJet eval_jet(const MultiplierExpr& m, Complex zeta, int order);

/// Numeric evenness check m(z) = m(-z) on a deterministic sample set;
/// returns the worst relative asymmetry.
double evenness_defect(const MultiplierExpr& m, double strip_half_width);

struct GridSpec {
    double re_min = 1e-3;
    double re_max = 1e3;
    int points_per_decade = 256;
    int im_levels = 33;
};

enum class QuantityFlag { Stable, Divergent, NotApplicable };

const char* to_string(QuantityFlag f);

struct MhResult {
    double value = 0.0;
    QuantityFlag flag = QuantityFlag::Divergent;
    double drift = 0.0;          // relative change under grid doubling
    std::string diagnostic;      // set when divergent or when a region is unchecked
};

/// sup over the closed strip T_q of max_{j<=N} |d^j m(zeta)| * dist(zeta)^j with
/// dist = min(|zeta - i rho_q|, |zeta + i rho_q|).  Stability means < 10% change
/// under doubling of both grid densities; an unbounded-growth probe around the
/// grid maximum of |m| downgrades the result to divergent.
MhResult mh_constant(const MultiplierExpr& m, const SpaceParams& sp, const Exponent& q,
                     int order, const GridSpec& grid = {});

/// Same supremum on {zeta in T_p : |Re zeta| > 1} with weight |zeta|^j.
/// The region |Re zeta| <= 1 is never probed; the diagnostic notes that.
MhResult mh_outer_constant(const MultiplierExpr& m, const SpaceParams& sp, const Exponent& p,
                           int order, const GridSpec& grid = {});

/// Branch/discontinuity probe: samples |m| jumps across strip transects at two
/// resolutions; returns true when jumps fail to shrink with the mesh.
bool branch_discontinuity_suspected(const MultiplierExpr& m, double strip_half_width);

} // namespace rankone
