#include "rankone/multiplier.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

namespace rankone {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_node(NodeKind kind, NodePtr lhs, NodePtr rhs, size_t offset) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->offset = offset;
    return n;
}

NodePtr make_const(Complex v, size_t offset) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Constant;
    n->constant = v;
    n->offset = offset;
    return n;
}

struct Lexer {
    const std::string& src;
    size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    // Unicode minus (e2 88 92) is accepted as '-'.
    bool at_minus() {
        skip_ws();
        if (pos < src.size() && src[pos] == '-') return true;
        return pos + 2 < src.size() && static_cast<unsigned char>(src[pos]) == 0xe2 &&
               static_cast<unsigned char>(src[pos + 1]) == 0x88 &&
               static_cast<unsigned char>(src[pos + 2]) == 0x92;
    }
    void eat_minus() { pos += (src[pos] == '-') ? 1 : 3; }
    bool accept(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        skip_ws();
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "' (" + what + ")", pos);
    }
};

struct Parser {
    Lexer lex;
    const std::map<std::string, double>& params;

    NodePtr parse_expr() {
        NodePtr left = parse_term();
        for (;;) {
            lex.skip_ws();
            size_t off = lex.pos;
            if (lex.accept('+')) {
                left = make_node(NodeKind::Add, left, parse_term(), off);
            } else if (lex.at_minus()) {
                lex.eat_minus();
                left = make_node(NodeKind::Sub, left, parse_term(), off);
            } else {
                return left;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr left = parse_factor();
        for (;;) {
            lex.skip_ws();
            size_t off = lex.pos;
            if (lex.accept('*')) {
                left = make_node(NodeKind::Mul, left, parse_factor(), off);
            } else if (lex.accept('/')) {
                left = make_node(NodeKind::Div, left, parse_factor(), off);
            } else {
                return left;
            }
        }
    }

    NodePtr parse_factor() {
        lex.skip_ws();
        size_t off = lex.pos;
        // unary minus binds looser than '^': -z^2 means -(z^2)
        if (lex.at_minus()) {
            lex.eat_minus();
            return make_node(NodeKind::Neg, parse_factor(), nullptr, off);
        }
        NodePtr base = parse_base();
        lex.skip_ws();
        off = lex.pos;
        if (lex.accept('^')) return make_node(NodeKind::Pow, base, parse_exponent(), off);
        return base;
    }

    NodePtr parse_exponent() {
        lex.skip_ws();
        size_t off = lex.pos;
        if (lex.at_minus()) {
            lex.eat_minus();
            return make_node(NodeKind::Neg, parse_exponent(), nullptr, off);
        }
        return parse_base();
    }

    NodePtr parse_base() {
        lex.skip_ws();
        size_t off = lex.pos;
        if (lex.eof()) throw ParseError("unexpected end of input", off);
        char c = lex.peek();
        if (c == '(') {
            lex.expect('(', "group");
            NodePtr inner = parse_expr();
            lex.expect(')', "group");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ParseError("syntax error", off);
    }

    NodePtr parse_number() {
        size_t off = lex.pos;
        size_t i = off;
        const std::string& s = lex.src;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i < s.size() && s[i] == '.') {
            ++i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
        if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
            size_t j = i + 1;
            if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
            if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                i = j;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            }
        }
        if (i == off || (i == off + 1 && s[off] == '.'))
            throw ParseError("malformed number", off);
        double v = std::stod(s.substr(off, i - off));
        lex.pos = i;
        return make_const(Complex(v), off);
    }

    NodePtr parse_ident() {
        size_t off = lex.pos;
        size_t i = off;
        const std::string& s = lex.src;
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        std::string name = s.substr(off, i - off);
        lex.pos = i;
        lex.skip_ws();

        if (lex.pos < s.size() && s[lex.pos] == '(') {
            std::vector<NodePtr> args;
            lex.expect('(', "call");
            args.push_back(parse_expr());
            while (lex.accept(',')) args.push_back(parse_expr());
            lex.expect(')', "call");
            return build_call(name, args, off);
        }
        if (name == "z") return make_node(NodeKind::Variable, nullptr, nullptr, off);
        if (name == "i") return make_const(Complex(0.0, 1.0), off);
        auto it = params.find(name);
        if (it != params.end()) return make_const(Complex(it->second), off);
        throw ParseError("unknown identifier '" + name + "'", off);
    }

    NodePtr build_call(const std::string& name, std::vector<NodePtr>& args, size_t off) {
        auto arity = [&](size_t n) {
            if (args.size() != n)
                throw ParseError("'" + name + "' takes " + std::to_string(n) + " argument(s)", off);
        };
        if (name == "exp") { arity(1); return make_node(NodeKind::Exp, args[0], nullptr, off); }
        if (name == "log") { arity(1); return make_node(NodeKind::Log, args[0], nullptr, off); }
        if (name == "sqrt") { arity(1); return make_node(NodeKind::Sqrt, args[0], nullptr, off); }
        if (name == "heat") {
            // heat(tau) = exp(-tau z^2)
            arity(1);
            NodePtr z2 = make_node(NodeKind::Pow,
                                   make_node(NodeKind::Variable, nullptr, nullptr, off),
                                   make_const(Complex(2.0), off), off);
            NodePtr prod = make_node(NodeKind::Mul, args[0], z2, off);
            return make_node(NodeKind::Exp, make_node(NodeKind::Neg, prod, nullptr, off),
                             nullptr, off);
        }
        if (name == "impow") {
            // impow(tau, c) = (z^2 + c)^(i tau)
            arity(2);
            NodePtr z2 = make_node(NodeKind::Pow,
                                   make_node(NodeKind::Variable, nullptr, nullptr, off),
                                   make_const(Complex(2.0), off), off);
            NodePtr base = make_node(NodeKind::Add, z2, args[1], off);
            NodePtr expo = make_node(NodeKind::Mul, make_const(Complex(0.0, 1.0), off), args[0], off);
            return make_node(NodeKind::Pow, base, expo, off);
        }
        throw ParseError("unknown identifier '" + name + "'", off);
    }
};

// --- evaluation shims shared by the complex and jet paths -------------------

inline Complex node_value(Complex z) { return z; }
inline Complex node_value(const Jet& z) { return z.value(); }

inline Complex op_exp(Complex z) { return std::exp(z); }
inline Jet op_exp(const Jet& z) { return exp(z); }

inline Complex op_log(Complex z) {
    if (z == Complex(0.0)) throw JetSingularity("log of zero value");
    return std::log(z);
}
inline Jet op_log(const Jet& z) { return log(z); }

inline Complex op_sqrt(Complex z) {
    if (z == Complex(0.0)) throw JetSingularity("sqrt of zero value");
    return std::sqrt(z);
}
inline Jet op_sqrt(const Jet& z) { return sqrt(z); }

inline Complex op_div(Complex a, Complex b) {
    if (b == Complex(0.0)) throw JetSingularity("division by zero value");
    return a / b;
}
inline Jet op_div(const Jet& a, const Jet& b) { return a / b; }

inline Complex op_pow(Complex a, Complex w) {
    if (w.imag() == 0.0 && w.real() == std::floor(w.real()) && std::abs(w.real()) <= 64.0) {
        int k = static_cast<int>(w.real());
        if (k == 0) return Complex(1.0);
        Complex r(1.0);
        for (int i = 0; i < std::abs(k); ++i) r *= a;
        if (k < 0) {
            if (r == Complex(0.0)) throw JetSingularity("inverse power of zero");
            return Complex(1.0) / r;
        }
        return r;
    }
    if (a == Complex(0.0)) throw JetSingularity("fractional power of zero");
    return std::exp(w * std::log(a));
}
inline Jet op_pow(const Jet& a, Complex w) { return pow(a, w); }
inline Complex op_pow_var(Complex a, Complex w) {
    if (a == Complex(0.0)) throw JetSingularity("power of zero base");
    return std::exp(w * std::log(a));
}
inline Jet op_pow_var(const Jet& a, const Jet& w) { return pow(a, w); }

template <class T>
T eval_node(const ExprNode& n, const T& z) {
    try {
        switch (n.kind) {
            case NodeKind::Constant: return z * Complex(0.0) + n.constant;
            case NodeKind::Variable: return z;
            case NodeKind::Add: return eval_node(*n.lhs, z) + eval_node(*n.rhs, z);
            case NodeKind::Sub: return eval_node(*n.lhs, z) - eval_node(*n.rhs, z);
            case NodeKind::Mul: return eval_node(*n.lhs, z) * eval_node(*n.rhs, z);
            case NodeKind::Div: return op_div(eval_node(*n.lhs, z), eval_node(*n.rhs, z));
            case NodeKind::Pow: {
                T base = eval_node(*n.lhs, z);
                if (n.rhs->kind == NodeKind::Constant) return op_pow(base, n.rhs->constant);
                return op_pow_var(base, eval_node(*n.rhs, z));
            }
            case NodeKind::Neg: return -eval_node(*n.lhs, z);
            case NodeKind::Exp: return op_exp(eval_node(*n.lhs, z));
            case NodeKind::Log: return op_log(eval_node(*n.lhs, z));
            case NodeKind::Sqrt: return op_sqrt(eval_node(*n.lhs, z));
        }
        throw std::logic_error("eval_node: bad kind");
    } catch (const JetSingularity& e) {
        throw EvalError(e.what(), n.offset);
    }
}

// precedence: 1 add/sub, 2 mul/div, 3 neg, 4 pow, leaves bind tightest
void print_node(const ExprNode& n, std::ostream& os, int parent_prec);

void print_complex_const(Complex v, std::ostream& os, int parent_prec) {
    if (v.imag() == 0.0) {
        if (v.real() < 0.0 && parent_prec > 1) {
            os << '(' << v.real() << ')';
        } else {
            os << v.real();
        }
        return;
    }
    if (v.real() == 0.0 && v.imag() == 1.0) {
        os << 'i';
        return;
    }
    os << '(' << v.real() << "+" << v.imag() << "*i)";
}

void print_node(const ExprNode& n, std::ostream& os, int parent_prec) {
    auto wrap = [&](int prec, auto&& body) {
        if (prec < parent_prec) {
            os << '(';
            body();
            os << ')';
        } else {
            body();
        }
    };
    switch (n.kind) {
        case NodeKind::Constant: print_complex_const(n.constant, os, parent_prec); break;
        case NodeKind::Variable: os << 'z'; break;
        case NodeKind::Add:
            wrap(1, [&] { print_node(*n.lhs, os, 1); os << '+'; print_node(*n.rhs, os, 2); });
            break;
        case NodeKind::Sub:
            wrap(1, [&] { print_node(*n.lhs, os, 1); os << '-'; print_node(*n.rhs, os, 2); });
            break;
        case NodeKind::Mul:
            wrap(2, [&] { print_node(*n.lhs, os, 2); os << '*'; print_node(*n.rhs, os, 3); });
            break;
        case NodeKind::Div:
            wrap(2, [&] { print_node(*n.lhs, os, 2); os << '/'; print_node(*n.rhs, os, 3); });
            break;
        case NodeKind::Neg:
            wrap(3, [&] { os << '-'; print_node(*n.lhs, os, 3); });
            break;
        case NodeKind::Pow:
            wrap(4, [&] { print_node(*n.lhs, os, 5); os << '^'; print_node(*n.rhs, os, 5); });
            break;
        case NodeKind::Exp:
            os << "exp(";
            print_node(*n.lhs, os, 0);
            os << ')';
            break;
        case NodeKind::Log:
            os << "log(";
            print_node(*n.lhs, os, 0);
            os << ')';
            break;
        case NodeKind::Sqrt:
            os << "sqrt(";
            print_node(*n.lhs, os, 0);
            os << ')';
            break;
    }
}

} // namespace

Complex MultiplierExpr::eval(Complex z) const { return eval_node(*root_, z); }
Jet MultiplierExpr::eval(const Jet& z) const { return eval_node(*root_, z); }

std::string MultiplierExpr::pretty() const {
    std::ostringstream os;
    os.precision(17);
    print_node(*root_, os, 0);
    return os.str();
}

MultiplierExpr parse_multiplier(const std::string& src,
                                const std::map<std::string, double>& params) {
    if (src.empty()) throw ParseError("empty multiplier expression", 0);
    Parser parser{Lexer{src}, params};
    NodePtr root = parser.parse_expr();
    parser.lex.skip_ws();
    if (parser.lex.pos != src.size())
        throw ParseError("syntax error", parser.lex.pos);
    MultiplierExpr m;
    m.root_ = std::move(root);
    return m;
}

MultiplierExpr heat_multiplier(double tau) {
    std::ostringstream os;
    os.precision(17);
    os << "heat(" << tau << ")";
    return parse_multiplier(os.str());
}

MultiplierExpr impow_multiplier(double tau, double c) {
    std::ostringstream os;
    os.precision(17);
    os << "impow(" << tau << "," << c << ")";
    return parse_multiplier(os.str());
}

ComplexJet eval_jet(const MultiplierExpr& m, Complex zeta, int order) {
    Jet z = Jet::variable(zeta, order);
    return ComplexJet::from_jet(zeta, m.eval(z));
}

double evenness_defect(const MultiplierExpr& m, double strip_half_width) {
    double worst = 0.0;
    const int im_rows = strip_half_width > 0.0 ? 3 : 1;
    for (int r = 0; r < im_rows; ++r) {
        const double im = im_rows > 1 ? strip_half_width * r / (im_rows - 1) : 0.0;
        for (int k = 0; k <= 24; ++k) {
            const double re = std::pow(10.0, -3.0 + 6.0 * k / 24.0);
            const Complex z(re, im);
            Complex a, b;
            try {
                a = m.eval(z);
                b = m.eval(-z);
            } catch (const EvalError&) {
                continue;  // singular sample; evenness judged from the rest
            }
            const double defect = std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
            worst = std::max(worst, defect);
        }
    }
    return worst;
}

namespace {

std::vector<double> geometric_abscissae(double lo, double hi, int per_decade) {
    std::vector<double> xs;
    const double decades = std::log10(hi / lo);
    const int n = std::max(2, static_cast<int>(std::round(decades * per_decade)));
    xs.reserve(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) xs.push_back(lo * std::pow(10.0, decades * k / n));
    return xs;
}

struct SupScan {
    double sup = 0.0;
    Complex argmax{};
    double sup_abs_m = 0.0;   // unweighted sup of |m|
    Complex argmax_abs{};
    bool interior_singularity = false;
    Complex singular_at{};
};

// Scans Re zeta > 0 only; evenness (enforced upstream) covers the other half.
// weight_kind: 0 -> distance to the strip corners, 1 -> |zeta| (outer variant).
SupScan scan_grid(const MultiplierExpr& m, double half_width, int order, int weight_kind,
                  const std::vector<double>& res, const std::vector<double>& ims) {
    SupScan s;
    for (double re : res) {
        for (double im : ims) {
            const Complex zeta(re, im);
            ComplexJet jet;
            try {
                jet = eval_jet(m, zeta, order);
            } catch (const EvalError&) {
                if (std::abs(im) < half_width - 1e-13) {
                    s.interior_singularity = true;
                    s.singular_at = zeta;
                }
                continue;  // boundary singularities are measure-zero limit points
            }
            double w = weight_kind == 0
                           ? std::min(std::abs(zeta - Complex(0.0, half_width)),
                                      std::abs(zeta + Complex(0.0, half_width)))
                           : std::abs(zeta);
            double wj = 1.0;
            for (int j = 0; j <= order; ++j) {
                const double q = std::abs(jet.derivative(j)) * wj;
                if (q > s.sup) {
                    s.sup = q;
                    s.argmax = zeta;
                }
                wj *= w;
            }
            const double a = std::abs(jet.value());
            if (a > s.sup_abs_m) {
                s.sup_abs_m = a;
                s.argmax_abs = zeta;
            }
        }
    }
    return s;
}

// Hill-climbs |m| from the grid argmax.  A bounded holomorphic multiplier
// settles near the grid supremum; a pole in (or on) the strip makes the walk
// run away, which we report as divergence.
bool unbounded_growth_probe(const MultiplierExpr& m, Complex start, double start_value,
                            double half_width, double step0, double re_cap,
                            double min_abs_re, Complex* where) {
    Complex best = start;
    double best_val = start_value;
    double step = step0;
    const double threshold = 10.0 * start_value + 1e3;
    static const double dirs[8][2] = {{1, 0}, {-1, 0}, {0, 1},  {0, -1},
                                      {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    for (int it = 0; it < 400 && step > 1e-15; ++it) {
        bool improved = false;
        for (auto& d : dirs) {
            Complex cand = best + Complex(d[0] * step, d[1] * step);
            double im = std::clamp(cand.imag(), -half_width, half_width);
            double re = std::clamp(cand.real(), -re_cap, re_cap);
            if (min_abs_re > 0.0 && std::abs(re) < min_abs_re) continue;
            cand = Complex(re, im);
            double v;
            try {
                v = std::abs(m.eval(cand));
            } catch (const EvalError&) {
                *where = cand;  // walked straight into a singular point
                return true;
            }
            if (v > best_val * (1.0 + 1e-12)) {
                best_val = v;
                best = cand;
                improved = true;
                break;
            }
        }
        if (best_val > threshold) {
            *where = best;
            return true;
        }
        step *= improved ? 1.7 : 0.5;
    }
    return false;
}

MhResult mh_scan(const MultiplierExpr& m, double half_width, int order,
                 const GridSpec& grid, int weight_kind, double min_abs_re,
                 std::string region_note) {
    const double defect = evenness_defect(m, half_width);
    if (defect > 1e-8)
        throw EvennessError("multiplier is not even (defect " + std::to_string(defect) + ")");

    auto run = [&](int per_decade, int levels) {
        auto res = geometric_abscissae(grid.re_min, grid.re_max, per_decade);
        if (min_abs_re > 0.0)
            std::erase_if(res, [&](double r) { return r <= min_abs_re; });
        std::vector<double> ims;
        if (half_width <= 0.0) {
            ims.push_back(0.0);
        } else {
            const int L = std::max(3, levels);
            for (int k = 0; k < L; ++k)
                ims.push_back(-half_width + 2.0 * half_width * k / (L - 1));
        }
        return scan_grid(m, half_width, order, weight_kind, res, ims);
    };

    SupScan coarse = run(grid.points_per_decade, grid.im_levels);
    SupScan fine = run(2 * grid.points_per_decade, 2 * grid.im_levels - 1);

    MhResult out;
    out.value = fine.sup;
    out.drift = std::abs(fine.sup - coarse.sup) / std::max(fine.sup, 1e-300);
    out.diagnostic = std::move(region_note);

    if (coarse.interior_singularity || fine.interior_singularity) {
        const Complex at = fine.interior_singularity ? fine.singular_at : coarse.singular_at;
        out.flag = QuantityFlag::Divergent;
        out.diagnostic = "singular point inside the strip near (" + std::to_string(at.real()) +
                         ", " + std::to_string(at.imag()) + ")";
        return out;
    }

    const double spacing =
        std::max(std::abs(fine.argmax_abs.real()) * (std::pow(10.0, 1.0 / grid.points_per_decade) - 1.0),
                 half_width > 0 ? half_width / grid.im_levels : 1e-4);
    Complex pole_at;
    if (unbounded_growth_probe(m, fine.argmax_abs, fine.sup_abs_m, half_width, spacing,
                               grid.re_max, min_abs_re, &pole_at)) {
        out.flag = QuantityFlag::Divergent;
        out.diagnostic = "unbounded growth near (" + std::to_string(pole_at.real()) + ", " +
                         std::to_string(pole_at.imag()) + ")";
        return out;
    }

    out.flag = out.drift < 0.10 ? QuantityFlag::Stable : QuantityFlag::Divergent;
    if (out.flag == QuantityFlag::Divergent)
        out.diagnostic = "supremum not stable under grid doubling";
    return out;
}

} // namespace

const char* to_string(QuantityFlag f) {
    switch (f) {
        case QuantityFlag::Stable: return "stable";
        case QuantityFlag::Divergent: return "divergent";
        case QuantityFlag::NotApplicable: return "not-applicable";
    }
    return "?";
}

MhResult mh_constant(const MultiplierExpr& m, const SpaceParams& sp, const Exponent& q,
                     int order, const GridSpec& grid) {
    const double rq = rho_p(q, sp).half_width;
    return mh_scan(m, rq, order, grid, 0, 0.0, "");
}

MhResult mh_outer_constant(const MultiplierExpr& m, const SpaceParams& sp, const Exponent& p,
                           int order, const GridSpec& grid) {
    const double rp = rho_p(p, sp).half_width;
    return mh_scan(m, rp, order, grid, 1, 1.0, "inner region |Re zeta| <= 1 unchecked");
}

bool branch_discontinuity_suspected(const MultiplierExpr& m, double strip_half_width) {
    if (strip_half_width <= 0.0) return false;
    auto max_jump = [&](int levels) {
        double worst = 0.0;
        for (int c = 0; c < 16; ++c) {
            const double re = std::pow(10.0, -2.0 + 4.0 * c / 15.0);
            Complex prev{};
            bool have_prev = false;
            for (int k = 0; k < levels; ++k) {
                const double im = -strip_half_width + 2.0 * strip_half_width * k / (levels - 1);
                Complex v;
                try {
                    v = m.eval(Complex(re, im));
                } catch (const EvalError&) {
                    have_prev = false;
                    continue;
                }
                if (have_prev) worst = std::max(worst, std::abs(v - prev));
                prev = v;
                have_prev = true;
            }
        }
        return worst;
    };
    const double j1 = max_jump(65);
    const double j2 = max_jump(129);
    if (j1 < 1e-12) return false;
    // jumps of an analytic function halve with the mesh; a branch cut does not
    return j2 > 0.75 * j1 && j2 > 1e-6;
}

} // namespace rankone
