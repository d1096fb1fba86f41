#include <doctest.h>

#include <cmath>
#include <random>

#include "rankone/multiplier.hpp"

using namespace rankone;

namespace {

std::string shape(const ExprNode& n) {
    switch (n.kind) {
        case NodeKind::Constant: {
            char buf[64];
            if (n.constant.imag() == 0.0) snprintf(buf, sizeof buf, "%g", n.constant.real());
            else snprintf(buf, sizeof buf, "(%g,%g)", n.constant.real(), n.constant.imag());
            return buf;
        }
        case NodeKind::Variable: return "z";
        case NodeKind::Add: return "add(" + shape(*n.lhs) + "," + shape(*n.rhs) + ")";
        case NodeKind::Sub: return "sub(" + shape(*n.lhs) + "," + shape(*n.rhs) + ")";
        case NodeKind::Mul: return "mul(" + shape(*n.lhs) + "," + shape(*n.rhs) + ")";
        case NodeKind::Div: return "div(" + shape(*n.lhs) + "," + shape(*n.rhs) + ")";
        case NodeKind::Pow: return "pow(" + shape(*n.lhs) + "," + shape(*n.rhs) + ")";
        case NodeKind::Neg: return "neg(" + shape(*n.lhs) + ")";
        case NodeKind::Exp: return "exp(" + shape(*n.lhs) + ")";
        case NodeKind::Log: return "log(" + shape(*n.lhs) + ")";
        case NodeKind::Sqrt: return "sqrt(" + shape(*n.lhs) + ")";
    }
    return "?";
}

} // namespace

TEST_CASE("parser structure") {
    CHECK(shape(parse_multiplier("exp(-z^2)").root()) == "exp(neg(pow(z,2)))");
    CHECK(shape(parse_multiplier("(z^2+4)^(0.5)").root()) == "pow(add(pow(z,2),4),0.5)");

    CHECK_THROWS_AS(parse_multiplier("z^^2"), ParseError);
    try {
        parse_multiplier("z^^2");
    } catch (const ParseError& e) {
        CHECK(e.offset == 2);
    }
    CHECK_THROWS_AS(parse_multiplier(""), ParseError);
    CHECK_THROWS_AS(parse_multiplier("bogus_name"), ParseError);
    CHECK_THROWS_AS(parse_multiplier("exp(z,z)"), ParseError);

    // parameters resolve to constants; unknown names are errors
    auto m = parse_multiplier("exp(-tau*z^2)", {{"tau", 2.0}});
    CHECK(std::abs(m.eval(Complex(1.0)) - std::exp(Complex(-2.0))) < 1e-15);
    CHECK_THROWS_AS(parse_multiplier("exp(-tau*z^2)"), ParseError);
}

TEST_CASE("pretty print round trip") {
    for (const char* src :
         {"exp(-z^2)", "(z^2+4)^(0.5)", "heat(2)", "impow(1.5,3)", "1/(z^2+0.25)",
          "z*z - 4/(1+z^2)", "sqrt(z^2+9)*exp(-z^2/4)", "log(z^2+2)-3.5e-2*z^2"}) {
        auto once = parse_multiplier(src).pretty();
        auto twice = parse_multiplier(once).pretty();
        CHECK(once == twice);
    }
}

TEST_CASE("jet evaluation") {
    auto m = parse_multiplier("z^2");
    auto jet = eval_jet(m, Complex(3.0), 3);
    CHECK(jet.derivative(0) == Complex(9.0));
    CHECK(jet.derivative(1) == Complex(6.0));
    CHECK(jet.derivative(2) == Complex(2.0));
    CHECK(jet.derivative(3) == Complex(0.0));

    auto g = parse_multiplier("exp(-z^2)");
    auto jg = eval_jet(g, Complex(0.0), 4);
    CHECK(std::abs(jg.derivative(0) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(jg.derivative(1)) < 1e-15);
    CHECK(std::abs(jg.derivative(2) - Complex(-2.0)) < 1e-14);
    CHECK(std::abs(jg.derivative(3)) < 1e-14);
    CHECK(std::abs(jg.derivative(4) - Complex(12.0)) < 1e-13);

    auto pole = parse_multiplier("1/z");
    CHECK_THROWS_AS(eval_jet(pole, Complex(0.0), 2), EvalError);
}

TEST_CASE("jets match finite differences") {
    std::mt19937_64 gen(5);
    auto uniform = [&](double a, double b) {
        return a + (b - a) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
    };
    const char* exprs[] = {"exp(-z^2)", "(z^2+4)^(0.5)", "1/(z^2+1)", "log(z^2+2)",
                           "sqrt(z^2+9)"};
    // Richardson-extrapolated central differences along the real axis
    auto central = [](const MultiplierExpr& m, Complex z, int j, double h) {
        if (j == 1) return (m.eval(z + h) - m.eval(z - h)) / (2.0 * h);
        if (j == 2) return (m.eval(z + h) - 2.0 * m.eval(z) + m.eval(z - h)) / (h * h);
        return (m.eval(z + 2.0 * h) - 2.0 * m.eval(z + h) + 2.0 * m.eval(z - h) -
                m.eval(z - 2.0 * h)) /
               (2.0 * h * h * h);
    };
    for (const char* src : exprs) {
        auto m = parse_multiplier(src);
        for (int trial = 0; trial < 20; ++trial) {
            const Complex z(uniform(0.2, 3.0), uniform(-0.3, 0.3));
            auto jet = eval_jet(m, z, 3);
            for (int j = 1; j <= 3; ++j) {
                const double h = j == 3 ? 4e-3 : 1e-3;
                const Complex fd =
                    (4.0 * central(m, z, j, h / 2.0) - central(m, z, j, h)) / 3.0;
                const double denom = std::max(std::abs(jet.derivative(j)), 1.0);
                CHECK(std::abs(fd - jet.derivative(j)) / denom < 1e-6);
            }
        }
    }
}

TEST_CASE("mh constant basics") {
    const auto h3 = SpaceParams::preset("H3");
    GridSpec quick{1e-3, 1e3, 32, 9};

    auto one = parse_multiplier("1");
    auto r1 = mh_constant(one, h3, Exponent(2.0), 8, quick);
    CHECK(r1.flag == QuantityFlag::Stable);
    CHECK(r1.value == doctest::Approx(1.0));

    auto odd = parse_multiplier("z");
    CHECK_THROWS_AS(mh_constant(odd, h3, Exponent(2.0), 8, quick), EvennessError);

    auto heat = heat_multiplier(1.0);
    auto r2 = mh_constant(heat, h3, Exponent(2.0), 8, quick);
    CHECK(r2.flag == QuantityFlag::Stable);
    CHECK(r2.value >= 1.0);  // the j = 0 supremum alone reaches 1 near zero
    CHECK(std::isfinite(r2.value));
}

TEST_CASE("mh flags interior poles divergent") {
    const auto h3 = SpaceParams::preset("H3");
    GridSpec quick{1e-3, 1e3, 32, 9};

    // pole at the strip center (q = 2 collapses the strip onto the line)
    auto pole0 = parse_multiplier("1/z^2");
    auto r = mh_constant(pole0, h3, Exponent(2.0), 4, quick);
    CHECK(r.flag == QuantityFlag::Divergent);

    // pole at half height inside T_q, q < 2
    const Exponent q(1.5);
    const double rq = rho_p(q, h3).half_width;
    char buf[128];
    snprintf(buf, sizeof buf, "1/(z^2+%.17g)", (0.5 * rq) * (0.5 * rq));
    auto inner_pole = parse_multiplier(buf);
    auto r2 = mh_constant(inner_pole, h3, q, 4, quick);
    CHECK(r2.flag == QuantityFlag::Divergent);

    // the same function is harmless where the pole falls outside the contour
    auto r3 = mh_constant(inner_pole, h3, Exponent(2.0), 4, quick);
    CHECK(r3.flag == QuantityFlag::Stable);
}

TEST_CASE("mh outer constant ignores the inner region") {
    const auto h3 = SpaceParams::preset("H3");
    GridSpec quick{1e-3, 1e3, 32, 9};
    const Exponent p(1.5);
    const double rp = rho_p(p, h3).half_width;  // 1/3

    // pole at i rp/2 has |Re| = 0 <= 1: the outer constant must stay finite
    char buf[128];
    snprintf(buf, sizeof buf, "1/(z^2+%.17g)", (0.5 * rp) * (0.5 * rp));
    auto m = parse_multiplier(buf);
    auto r = mh_outer_constant(m, h3, p, 4, quick);
    CHECK(r.flag == QuantityFlag::Stable);
    CHECK(r.diagnostic.find("unchecked") != std::string::npos);

    auto heat = heat_multiplier(1.0);
    auto r2 = mh_outer_constant(heat, h3, Exponent(1.5), 8, quick);
    CHECK(r2.flag == QuantityFlag::Stable);
}

TEST_CASE("mh evenness rewriting invariance") {
    const auto h3 = SpaceParams::preset("H3");
    GridSpec quick{1e-3, 1e3, 24, 7};
    auto a = parse_multiplier("exp(-z^2)+1/(4+z^2)");
    auto b = parse_multiplier("exp(-(-z)^2)+1/(4+(-z)^2)");
    auto ra = mh_constant(a, h3, Exponent(2.0), 6, quick);
    auto rb = mh_constant(b, h3, Exponent(2.0), 6, quick);
    CHECK(ra.value == doctest::Approx(rb.value).epsilon(1e-12));
}

TEST_CASE("imaginary power family grows mildly in tau") {
    // first-order constant: higher orders scale like tau^j by direct calculus
    const auto h3 = SpaceParams::preset("H3");
    GridSpec quick{1e-3, 1e3, 24, 7};
    const Exponent q(2.0);
    const double rq = rho_p(q, h3).half_width;
    double prev = 0.0;
    for (double tau : {1.0, 2.0, 4.0, 8.0}) {
        auto m = impow_multiplier(tau, rq * rq + 1.0);
        auto r = mh_constant(m, h3, q, 1, quick);
        CHECK(r.flag == QuantityFlag::Stable);
        if (prev > 0.0) CHECK(r.value <= 2.5 * prev);
        prev = r.value;
    }
}
