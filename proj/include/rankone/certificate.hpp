#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rankone/kernels.hpp"
#include "rankone/multiplier.hpp"
#include "rankone/opnorms.hpp"
#include "rankone/space.hpp"

namespace rankone {

enum class Variant { Main, MainI };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct GateResult {
    bool pass = false;
    std::string detail;
};

struct Quantity {
    double value = 0.0;
    QuantityFlag flag = QuantityFlag::NotApplicable;
    double drift = 0.0;     // worst refinement drift behind the flag
    std::string note;       // "proxy", truncation notes, divergence diagnostics
    std::vector<double> ladder;  // values across the refinement ladder
};

struct CertificateReport {
    SpaceParams sp;
    double p = 1.5;
    double q = 2.0;
    Variant variant = Variant::Main;
    std::string multiplier;
    uint64_t seed = 0;
    double epsilon = 1e-4;
    std::vector<std::pair<std::string, GateResult>> gates;
    std::vector<std::pair<std::string, Quantity>> quantities;
    std::string verdict = "not-applicable";

    bool gates_passed() const;
};

struct CertificateOptions {
    SynthesisOptions synth{};
    GridSpec mh_grid{};
    int order = 8;             // derivative order for the Mikhlin-type conditions
    uint64_t seed = 0;
    double inner_t = 12.0;     // truncation of the flat factor in S-integrals
    double nbar_tol = 1e-5;
    int mc_test_functions = 200;
    int eta_ledger_top = 20;
};

/// Fixed schema: every quantity name a certificate may emit.
const std::vector<std::string>& certificate_quantity_names();

/// Evaluates all bounding quantities behind the multiplier theorem for the
/// given scenario.  Hypothesis failures are reported through the gates, never
/// as exceptions; each numeric quantity carries a stability flag obtained from
/// its own refinement ladder (two successive refinements must each move the
/// value by less than 10%).
CertificateReport theorem_certificate(const SpaceParams& sp, const Exponent& p,
                                      const Exponent& q, const MultiplierExpr& m,
                                      Variant variant, const CertificateOptions& opts = {});

} // namespace rankone
