#include "anyon/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace anyon {

namespace {

constexpr double kPi = std::numbers::pi;

std::string block_str(const FusionRules& rules, const std::array<int, 4>& l) {
    std::ostringstream os;
    os << "[" << rules.label(l[0]) << "," << rules.label(l[1]) << "," << rules.label(l[2]) << ";"
       << rules.label(l[3]) << "]";
    return os.str();
}

// Quantum factorial [n]! at level k; zero for n >= k+2 (the vanishing of
// [k+2] truncates the theory).
class QFactorials {
  public:
    explicit QFactorials(int k) : k_(k), table_(static_cast<std::size_t>(2 * k + 4), 0.0) {
        table_[0] = 1.0;
        double acc = 1.0;
        for (int n = 1; n < static_cast<int>(table_.size()); ++n) {
            acc *= q_integer(k_, n);
            table_[static_cast<std::size_t>(n)] = acc;  // exactly 0 from n = k+2 on
        }
    }

    double operator()(int n) const {
        if (n < 0) throw std::logic_error("negative quantum factorial argument");
        return table_.at(static_cast<std::size_t>(n));
    }

  private:
    int k_;
    std::vector<double> table_;
};

// Level-k triangle admissibility in twice-j units.
bool su2k_admissible(int k, int ta, int tb, int tc) {
    if ((ta + tb + tc) % 2 != 0) return false;
    if (tc < std::abs(ta - tb) || tc > ta + tb) return false;
    return ta + tb + tc <= 2 * k;
}

struct BuiltinF {
    int a, b, c, d, e, f;
    Complex value;
};

// Populates every admissible block; `specials` override the default +1
// (only valid when all non-special blocks are one-dimensional, as is the
// case for Ising and Fibonacci).
FSymbolTable fill_table(const FusionRules& rules, const std::vector<BuiltinF>& specials) {
    FSymbolTable table(rules);
    const int nc = rules.charge_count();
    for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b)
            for (int c = 0; c < nc; ++c)
                for (int d = 0; d < nc; ++d) {
                    const auto rows = table.left_trees(a, b, c, d);
                    if (rows.empty()) continue;
                    const auto cols = table.right_trees(a, b, c, d);
                    for (const auto& r : rows)
                        for (const auto& cidx : cols) {
                            Complex v{1.0, 0.0};
                            bool special = false;
                            for (const auto& s : specials)
                                if (s.a == a && s.b == b && s.c == c && s.d == d &&
                                    s.e == r.charge && s.f == cidx.charge) {
                                    v = s.value;
                                    special = true;
                                    break;
                                }
                            if (!special && (rows.size() != 1 || cols.size() != 1))
                                throw std::logic_error(
                                    "default F fill hit a multi-dimensional block " +
                                    block_str(rules, {a, b, c, d}));
                            table.set(a, b, c, d, r.charge, r.first, r.second, cidx.charge,
                                      cidx.first, cidx.second, v);
                        }
                }
    return table;
}

AnyonModel assemble(std::string name, FusionRules rules, FSymbolTable table,
                    std::optional<std::vector<Complex>> twists,
                    std::map<std::string, std::string> provenance) {
    AnyonModel m{std::move(name),
                 rules,
                 quantum_dimensions(rules),
                 std::move(table),
                 std::move(twists),
                 std::nullopt,
                 std::move(provenance)};
    if (m.twists) m.s_matrix = s_matrix_from_twists(m);
    m.validate();
    return m;
}

}  // namespace

double q_integer(int k, int n) {
    return std::sin(n * kPi / (k + 2)) / std::sin(kPi / (k + 2));
}

double q_sixj(int k, int tj1, int tj2, int tj12, int tj3, int tj, int tj23) {
    if (!su2k_admissible(k, tj1, tj2, tj12) || !su2k_admissible(k, tj12, tj3, tj) ||
        !su2k_admissible(k, tj2, tj3, tj23) || !su2k_admissible(k, tj1, tj23, tj))
        return 0.0;

    const QFactorials qf(k);
    auto triangle = [&](int ta, int tb, int tc) {
        return std::sqrt(qf((-ta + tb + tc) / 2) * qf((ta - tb + tc) / 2) *
                         qf((ta + tb - tc) / 2) / qf((ta + tb + tc) / 2 + 1));
    };

    const int t1 = (tj1 + tj2 + tj12) / 2;
    const int t2 = (tj12 + tj3 + tj) / 2;
    const int t3 = (tj2 + tj3 + tj23) / 2;
    const int t4 = (tj1 + tj23 + tj) / 2;
    const int q1 = (tj1 + tj2 + tj3 + tj) / 2;
    const int q2 = (tj1 + tj12 + tj3 + tj23) / 2;
    const int q3 = (tj2 + tj12 + tj + tj23) / 2;

    const int zmin = std::max({t1, t2, t3, t4});
    const int zmax = std::min({q1, q2, q3});

    double sum = 0.0;
    for (int z = zmin; z <= zmax; ++z) {
        const double numer = qf(z + 1);  // vanishes for z+1 >= k+2, truncating the sum
        if (numer == 0.0) continue;
        const double denom = qf(z - t1) * qf(z - t2) * qf(z - t3) * qf(z - t4) * qf(q1 - z) *
                             qf(q2 - z) * qf(q3 - z);
        sum += ((z % 2 == 0) ? 1.0 : -1.0) * numer / denom;
    }
    return triangle(tj1, tj2, tj12) * triangle(tj12, tj3, tj) * triangle(tj2, tj3, tj23) *
           triangle(tj1, tj23, tj) * sum;
}

ValidationSummary AnyonModel::validate() {
    ValidationSummary s = check();
    if (!s.failures.empty()) throw validation_error(s.failures.front());
    validated_ = true;
    return s;
}

ValidationSummary AnyonModel::check() const {
    ValidationSummary s;
    const double tol = f.tolerance();
    const int nc = rules.charge_count();

    s.dimension_residual = dims.consistency_residual(rules);
    if (s.dimension_residual > tol)
        s.failures.push_back("quantum dimensions inconsistent with fusion rules (residual " +
                             std::to_string(s.dimension_residual) + ")");

    if (twists) {
        if (static_cast<int>(twists->size()) != nc) {
            s.failures.push_back("twist vector size does not match charge count");
        } else {
            for (int a = 0; a < nc; ++a)
                if (std::abs(std::abs((*twists)[static_cast<std::size_t>(a)]) - 1.0) > tol) {
                    s.failures.push_back("twist of charge '" + rules.label(a) +
                                         "' is not a phase");
                    break;
                }
            if (std::abs((*twists)[static_cast<std::size_t>(rules.vacuum())] - Complex{1.0, 0.0}) >
                tol)
                s.failures.push_back("vacuum twist must be 1");
        }
    }

    const UnitarityReport ur = verify_unitarity(f);
    s.unitarity_deviation = ur.max_deviation;
    if (!ur.ok())
        s.failures.push_back("F block " + block_str(rules, ur.violations.front().labels) +
                             " fails unitarity (deviation " +
                             std::to_string(ur.violations.front().deviation) + ")");

    const PentagonReport pr = verify_pentagon(f, 10000);
    s.pentagon_residual = pr.max_residual;
    s.pentagon_instances = pr.instances_checked;
    if (!pr.ok()) {
        const auto& v = pr.violations.front();
        s.failures.push_back("pentagon identity fails at " +
                             block_str(rules, {v.labels[0], v.labels[1], v.labels[2],
                                               v.labels[3]}) +
                             "->" + rules.label(v.labels[4]) + " (residual " +
                             std::to_string(v.residual) + ")");
    }

    if (s_matrix) {
        const Eigen::MatrixXcd& S = *s_matrix;
        if (S.rows() != nc || S.cols() != nc) {
            s.failures.push_back("S-matrix dimensions do not match charge count");
        } else {
            const double sym = (S - S.transpose()).cwiseAbs().maxCoeff();
            if (sym > tol) s.failures.push_back("S-matrix is not symmetric");
            const int vac = rules.vacuum();
            double row_dev = 0.0;
            for (int b = 0; b < nc; ++b)
                row_dev = std::max(row_dev, std::abs(S(vac, b) - dims[b] * S(vac, vac)));
            if (row_dev > tol)
                s.failures.push_back(
                    "S-matrix vacuum row is not proportional to the quantum dimensions");
            const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nc, nc);
            s.s_unitarity_deviation = (S * S.adjoint() - id).cwiseAbs().maxCoeff();
        }
    }
    return s;
}

double AnyonModel::total_dimension() const {
    double sum = 0.0;
    for (double d : dims.d) sum += d * d;
    return std::sqrt(sum);
}

Eigen::MatrixXcd AnyonModel::effective_s_matrix() const {
    if (s_matrix) return *s_matrix;
    if (twists) return s_matrix_from_twists(*this);
    throw unsupported_operation("model '" + name +
                                "' carries no monodromy data (S-matrix or twists required)");
}

Eigen::MatrixXcd s_matrix_from_twists(const AnyonModel& model) {
    if (!model.twists) throw validation_error("model '" + model.name + "' has no twist data");
    const FusionRules& rules = model.rules;
    const int nc = rules.charge_count();
    const auto& theta = *model.twists;
    const double D = model.total_dimension();
    Eigen::MatrixXcd S(nc, nc);
    for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b) {
            Complex sum{0.0, 0.0};
            const int abar = rules.dual(a);
            for (int c = 0; c < nc; ++c) {
                const int mult = rules.n(abar, b, c);
                if (mult == 0) continue;
                sum += static_cast<double>(mult) * theta[static_cast<std::size_t>(c)] /
                       (theta[static_cast<std::size_t>(a)] * theta[static_cast<std::size_t>(b)]) *
                       model.dims[c];
            }
            S(a, b) = sum / D;
        }
    return S;
}

Complex monodromy_scalar(const AnyonModel& model, int z, int c) {
    const Eigen::MatrixXcd S = model.effective_s_matrix();
    const int vac = model.rules.vacuum();
    const Complex denom = S(vac, z) * S(vac, c);
    if (std::abs(denom) == 0.0)
        throw validation_error("vanishing S-matrix vacuum entry; model is malformed");
    return S(z, c) * S(vac, vac) / denom;
}

AnyonModel make_ising() {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    FusionRules rules = FusionRules::validated(
        {"I", "sigma", "psi"}, "I",
        {{"I", "I"}, {"sigma", "sigma"}, {"psi", "psi"}},
        {{{"I", "I", "I"}, 1},
         {{"I", "sigma", "sigma"}, 1},
         {{"I", "psi", "psi"}, 1},
         {{"sigma", "sigma", "I"}, 1},
         {{"sigma", "sigma", "psi"}, 1},
         {{"sigma", "psi", "sigma"}, 1},
         {{"psi", "psi", "I"}, 1}});
    const int I = 0, sg = 1, ps = 2;
    const std::vector<BuiltinF> specials = {
        {sg, sg, sg, sg, I, I, {inv_sqrt2, 0.0}},  {sg, sg, sg, sg, I, ps, {inv_sqrt2, 0.0}},
        {sg, sg, sg, sg, ps, I, {inv_sqrt2, 0.0}}, {sg, sg, sg, sg, ps, ps, {-inv_sqrt2, 0.0}},
        {sg, ps, sg, ps, sg, sg, {-1.0, 0.0}},     {ps, sg, ps, sg, sg, sg, {-1.0, 0.0}},
    };
    std::vector<Complex> twists = {
        {1.0, 0.0}, std::polar(1.0, kPi / 8.0), {-1.0, 0.0}};
    return assemble("ising", rules, fill_table(rules, specials), std::move(twists),
                    {{"f-symbols", "real-gauge pentagon solution, kappa = +1"},
                     {"twists", "standard reference values, external input"},
                     {"s-matrix", "derived from twists via the ribbon formula"}});
}

AnyonModel make_fibonacci() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    FusionRules rules = FusionRules::validated(
        {"I", "eps"}, "I", {{"I", "I"}, {"eps", "eps"}},
        {{{"I", "I", "I"}, 1},
         {{"I", "eps", "eps"}, 1},
         {{"eps", "eps", "I"}, 1},
         {{"eps", "eps", "eps"}, 1}});
    const int I = 0, ep = 1;
    const std::vector<BuiltinF> specials = {
        {ep, ep, ep, ep, I, I, {1.0 / phi, 0.0}},
        {ep, ep, ep, ep, I, ep, {1.0 / std::sqrt(phi), 0.0}},
        {ep, ep, ep, ep, ep, I, {1.0 / std::sqrt(phi), 0.0}},
        {ep, ep, ep, ep, ep, ep, {-1.0 / phi, 0.0}},
    };
    std::vector<Complex> twists = {{1.0, 0.0}, std::polar(1.0, 4.0 * kPi / 5.0)};
    return assemble("fibonacci", rules, fill_table(rules, specials), std::move(twists),
                    {{"f-symbols", "real-gauge pentagon solution"},
                     {"twists", "standard reference values, external input"},
                     {"s-matrix", "derived from twists via the ribbon formula"}});
}

AnyonModel make_su2k(int k) {
    if (k < 1) throw std::invalid_argument("su2k level must be >= 1");

    std::vector<std::string> labels;
    for (int n = 0; n <= k; ++n) {
        if (n % 2 == 0)
            labels.push_back(std::to_string(n / 2));
        else
            labels.push_back(std::to_string(n) + "/2");
    }
    std::vector<std::pair<std::string, std::string>> duals;
    for (const auto& l : labels) duals.emplace_back(l, l);
    std::map<std::array<std::string, 3>, unsigned> entries;
    for (int a = 0; a <= k; ++a)
        for (int b = 0; b <= k; ++b)
            for (int c = 0; c <= k; ++c)
                if (su2k_admissible(k, a, b, c))
                    entries[{labels[static_cast<std::size_t>(a)],
                             labels[static_cast<std::size_t>(b)],
                             labels[static_cast<std::size_t>(c)]}] = 1;
    FusionRules rules = FusionRules::validated(labels, "0", duals, entries);

    FSymbolTable table(rules);
    for (int a = 0; a <= k; ++a)
        for (int b = 0; b <= k; ++b)
            for (int c = 0; c <= k; ++c)
                for (int d = 0; d <= k; ++d) {
                    const auto rows = table.left_trees(a, b, c, d);
                    if (rows.empty()) continue;
                    const auto cols = table.right_trees(a, b, c, d);
                    const int sign = (((a + b + c + d) / 2) % 2 == 0) ? 1 : -1;
                    for (const auto& r : rows)
                        for (const auto& col : cols) {
                            const double v =
                                sign *
                                std::sqrt(q_integer(k, r.charge + 1) *
                                          q_integer(k, col.charge + 1)) *
                                q_sixj(k, a, b, r.charge, c, d, col.charge);
                            table.set(a, b, c, d, r.charge, 1, 1, col.charge, 1, 1,
                                      {v, 0.0});
                        }
                }

    std::vector<Complex> twists;
    for (int n = 0; n <= k; ++n)
        twists.push_back(std::polar(1.0, kPi * n * (n + 2) / (2.0 * (k + 2))));

    return assemble("su2k-" + std::to_string(k), rules, std::move(table), std::move(twists),
                    {{"f-symbols",
                      "q-deformed 6j recoupling at q = exp(i pi/(k+2)), real gauge; other sign "
                      "conventions exist"},
                     {"twists", "theta_j = exp(2 pi i j(j+1)/(k+2)), external input"},
                     {"s-matrix", "derived from twists via the ribbon formula"}});
}

}  // namespace anyon
