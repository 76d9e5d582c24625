#include "anyon/fsymbols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anyon {

namespace {

int find_tree(const std::vector<FTreeIndex>& list, int charge, int first, int second) {
    for (std::size_t i = 0; i < list.size(); ++i) {
        const FTreeIndex& t = list[i];
        if (t.charge == charge && t.first == first && t.second == second)
            return static_cast<int>(i);
        if (t.charge > charge) break;  // lists are charge-ascending
    }
    return -1;
}

std::string tree_str(const FusionRules& rules, const FTreeIndex& t) {
    std::ostringstream os;
    os << "(" << rules.label(t.charge) << "," << t.first << "," << t.second << ")";
    return os.str();
}

}  // namespace

int FBlock::row_index(int charge, int first, int second) const {
    return find_tree(rows, charge, first, second);
}

int FBlock::col_index(int charge, int first, int second) const {
    return find_tree(cols, charge, first, second);
}

FSymbolTable::FSymbolTable(FusionRules rules, double tolerance)
    : rules_(std::move(rules)), tolerance_(tolerance) {
    if (tolerance_ <= 0.0) throw std::invalid_argument("tolerance must be positive");
}

std::vector<FTreeIndex> FSymbolTable::left_trees(int a, int b, int c, int d) const {
    std::vector<FTreeIndex> out;
    for (int e : rules_.product(a, b)) {
        const int n1 = rules_.n(a, b, e);
        const int n2 = rules_.n(e, c, d);
        if (n2 == 0) continue;
        for (int alpha = 1; alpha <= n1; ++alpha)
            for (int beta = 1; beta <= n2; ++beta) out.push_back({e, alpha, beta});
    }
    return out;
}

std::vector<FTreeIndex> FSymbolTable::right_trees(int a, int b, int c, int d) const {
    std::vector<FTreeIndex> out;
    for (int f : rules_.product(b, c)) {
        const int n1 = rules_.n(b, c, f);
        const int n2 = rules_.n(a, f, d);
        if (n2 == 0) continue;
        for (int mu = 1; mu <= n1; ++mu)
            for (int nu = 1; nu <= n2; ++nu) out.push_back({f, mu, nu});
    }
    return out;
}

FBlock FSymbolTable::make_block(int a, int b, int c, int d) const {
    FBlock blk;
    blk.labels = {a, b, c, d};
    blk.rows = left_trees(a, b, c, d);
    blk.cols = right_trees(a, b, c, d);
    blk.m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(blk.rows.size()),
                                   static_cast<Eigen::Index>(blk.cols.size()));
    return blk;
}

void FSymbolTable::set(int a, int b, int c, int d, int e, int alpha, int beta, int f, int mu,
                       int nu, Complex value) {
    const std::array<int, 4> key{a, b, c, d};
    auto it = blocks_.find(key);
    if (it == blocks_.end()) {
        FBlock blk = make_block(a, b, c, d);
        if (blk.empty())
            throw validation_error("F entry for (" + rules_.label(a) + "," + rules_.label(b) +
                                   "," + rules_.label(c) + ";" + rules_.label(d) +
                                   ") has no admissible fusion tree");
        it = blocks_.emplace(key, std::move(blk)).first;
    }
    FBlock& blk = it->second;
    const int r = blk.row_index(e, alpha, beta);
    const int cidx = blk.col_index(f, mu, nu);
    if (r < 0 || cidx < 0)
        throw validation_error("F entry vertices violate the fusion rules: [" + rules_.label(a) +
                               "," + rules_.label(b) + "," + rules_.label(c) + ";" +
                               rules_.label(d) + "] row " +
                               tree_str(rules_, {e, alpha, beta}) + " col " +
                               tree_str(rules_, {f, mu, nu}));
    blk.m(r, cidx) = value;
}

Complex FSymbolTable::get(int a, int b, int c, int d, int e, int alpha, int beta, int f, int mu,
                          int nu) const {
    const FBlock* blk = find_block(a, b, c, d);
    if (blk == nullptr) return {0.0, 0.0};
    const int r = blk->row_index(e, alpha, beta);
    const int cidx = blk->col_index(f, mu, nu);
    if (r < 0 || cidx < 0) return {0.0, 0.0};
    return blk->m(r, cidx);
}

const FBlock* FSymbolTable::find_block(int a, int b, int c, int d) const {
    auto it = blocks_.find(std::array<int, 4>{a, b, c, d});
    return it == blocks_.end() ? nullptr : &it->second;
}

FBlock f_move(const FSymbolTable& table, int a, int b, int c, int d) {
    if (const FBlock* blk = table.find_block(a, b, c, d)) return *blk;
    FBlock blk;
    blk.labels = {a, b, c, d};
    blk.rows = table.left_trees(a, b, c, d);
    blk.cols = table.right_trees(a, b, c, d);
    blk.m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(blk.rows.size()),
                                   static_cast<Eigen::Index>(blk.cols.size()));
    return blk;
}

FBlock f_general(const FSymbolTable& table, const QuantumDimensions& dims, int a, int b, int c,
                 int d) {
    const FusionRules& rules = table.rules();
    FBlock out;
    out.labels = {a, b, c, d};
    for (int e = 0; e < rules.charge_count(); ++e) {
        const int n1 = rules.n(c, e, a);
        const int n2 = rules.n(e, b, d);
        if (n1 == 0 || n2 == 0) continue;
        for (int alpha = 1; alpha <= n1; ++alpha)
            for (int beta = 1; beta <= n2; ++beta) out.rows.push_back({e, alpha, beta});
    }
    for (int f = 0; f < rules.charge_count(); ++f) {
        const int n1 = rules.n(a, b, f);
        const int n2 = rules.n(c, d, f);
        if (n1 == 0 || n2 == 0) continue;
        for (int mu = 1; mu <= n1; ++mu)
            for (int nu = 1; nu <= n2; ++nu) out.cols.push_back({f, mu, nu});
    }
    out.m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(out.rows.size()),
                                   static_cast<Eigen::Index>(out.cols.size()));
    for (std::size_t r = 0; r < out.rows.size(); ++r) {
        const FTreeIndex& R = out.rows[r];
        for (std::size_t k = 0; k < out.cols.size(); ++k) {
            const FTreeIndex& C = out.cols[k];
            const double pref =
                std::sqrt(dims[R.charge] * dims[C.charge] / (dims[a] * dims[d]));
            const Complex base =
                table.get(c, R.charge, b, C.charge, a, R.first, C.first, d, R.second, C.second);
            out.m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
                pref * std::conj(base);
        }
    }
    return out;
}

TunnelingFMatrix tunneling_f(const FSymbolTable& table, const QuantumDimensions& dims, int a,
                             int e, int b, int c) {
    const FusionRules& rules = table.rules();
    TunnelingFMatrix out;
    out.e = e;
    out.c = c;
    out.alpha_range = rules.n(a, e, a);
    out.beta_range = rules.n(e, b, b);
    out.nu_range = rules.n(a, b, c);
    out.mu_range = out.nu_range;
    if (out.alpha_range == 0 || out.beta_range == 0 || out.nu_range == 0) {
        out.m.resize(0, 0);
        return out;
    }
    const FBlock g = f_general(table, dims, a, b, a, b);
    const double pref = std::sqrt(dims[a] * dims[b] / (dims[e] * dims[c]));
    out.m.resize(out.alpha_range * out.nu_range, out.beta_range * out.mu_range);
    for (int alpha = 1; alpha <= out.alpha_range; ++alpha)
        for (int nu = 1; nu <= out.nu_range; ++nu)
            for (int beta = 1; beta <= out.beta_range; ++beta)
                for (int mu = 1; mu <= out.mu_range; ++mu) {
                    const int gr = g.row_index(e, alpha, beta);
                    const int gc = g.col_index(c, nu, mu);
                    const Complex base = (gr < 0 || gc < 0) ? Complex{0.0, 0.0} : g.m(gr, gc);
                    out.m((alpha - 1) * out.nu_range + (nu - 1),
                          (beta - 1) * out.mu_range + (mu - 1)) = pref * std::conj(base);
                }
    return out;
}

TunnelingFMatrix tunneling_f_direct(const FSymbolTable& table, int a, int e, int b, int c) {
    const FusionRules& rules = table.rules();
    TunnelingFMatrix out;
    out.e = e;
    out.c = c;
    out.alpha_range = rules.n(a, e, a);
    out.beta_range = rules.n(e, b, b);
    out.nu_range = rules.n(a, b, c);
    out.mu_range = out.nu_range;
    if (out.alpha_range == 0 || out.beta_range == 0 || out.nu_range == 0) {
        out.m.resize(0, 0);
        return out;
    }
    out.m.resize(out.alpha_range * out.nu_range, out.beta_range * out.mu_range);
    for (int alpha = 1; alpha <= out.alpha_range; ++alpha)
        for (int nu = 1; nu <= out.nu_range; ++nu)
            for (int beta = 1; beta <= out.beta_range; ++beta)
                for (int mu = 1; mu <= out.mu_range; ++mu)
                    out.m((alpha - 1) * out.nu_range + (nu - 1),
                          (beta - 1) * out.mu_range + (mu - 1)) =
                        table.get(a, e, b, c, a, alpha, nu, b, beta, mu);
    return out;
}

UnitarityReport verify_unitarity(const FSymbolTable& table) {
    const FusionRules& rules = table.rules();
    const int nc = rules.charge_count();
    const double tol = table.tolerance();
    UnitarityReport report;

    for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b)
            for (int c = 0; c < nc; ++c)
                for (int d = 0; d < nc; ++d) {
                    const auto rows = table.left_trees(a, b, c, d);
                    if (rows.empty()) continue;
                    const auto cols = table.right_trees(a, b, c, d);
                    if (rows.size() != cols.size())
                        throw std::logic_error("non-square F block despite associative rules");
                    ++report.blocks_checked;
                    const FBlock* blk = table.find_block(a, b, c, d);
                    double dev;
                    if (blk == nullptr) {
                        dev = 1.0;  // zero matrix, maximally non-unitary
                    } else {
                        const Eigen::Index n = blk->m.rows();
                        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
                        dev = std::max((blk->m * blk->m.adjoint() - id).cwiseAbs().maxCoeff(),
                                       (blk->m.adjoint() * blk->m - id).cwiseAbs().maxCoeff());
                    }
                    report.max_deviation = std::max(report.max_deviation, dev);
                    if (dev > tol) report.violations.push_back({{a, b, c, d}, dev});
                }
    return report;
}

PentagonReport verify_pentagon(const FSymbolTable& table, std::size_t max_violations) {
    const FusionRules& rules = table.rules();
    const int nc = rules.charge_count();
    const double tol = table.tolerance();
    PentagonReport report;

    auto val = [](const FBlock* blk, int e, int i1, int i2, int f, int j1, int j2) -> Complex {
        if (blk == nullptr) return {0.0, 0.0};
        const int r = blk->row_index(e, i1, i2);
        const int c = blk->col_index(f, j1, j2);
        if (r < 0 || c < 0) return {0.0, 0.0};
        return blk->m(r, c);
    };

    std::vector<std::vector<std::array<int, 5>>> rows_by_total(static_cast<std::size_t>(nc));
    std::vector<std::vector<std::array<int, 5>>> cols_by_total(static_cast<std::size_t>(nc));

    for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b) {
            const auto prod_ab = rules.product(a, b);
            for (int c = 0; c < nc; ++c)
                for (int d = 0; d < nc; ++d) {
                    for (auto& v : rows_by_total) v.clear();
                    for (auto& v : cols_by_total) v.clear();
                    bool any = false;
                    for (int f : prod_ab) {
                        const int n_ab_f = rules.n(a, b, f);
                        for (int g : rules.product(f, c)) {
                            const int n_fc_g = rules.n(f, c, g);
                            for (int total : rules.product(g, d)) {
                                const int n_gd_t = rules.n(g, d, total);
                                for (int alpha = 1; alpha <= n_ab_f; ++alpha)
                                    for (int beta = 1; beta <= n_fc_g; ++beta)
                                        for (int gamma = 1; gamma <= n_gd_t; ++gamma) {
                                            rows_by_total[static_cast<std::size_t>(total)]
                                                .push_back({f, alpha, g, beta, gamma});
                                            any = true;
                                        }
                            }
                        }
                    }
                    if (!any) continue;
                    for (int l : rules.product(c, d)) {
                        const int n_cd_l = rules.n(c, d, l);
                        for (int k : rules.product(b, l)) {
                            const int n_bl_k = rules.n(b, l, k);
                            for (int total : rules.product(a, k)) {
                                const int n_ak_t = rules.n(a, k, total);
                                for (int nu = 1; nu <= n_cd_l; ++nu)
                                    for (int mu = 1; mu <= n_bl_k; ++mu)
                                        for (int lambda = 1; lambda <= n_ak_t; ++lambda)
                                            cols_by_total[static_cast<std::size_t>(total)]
                                                .push_back({l, nu, k, mu, lambda});
                            }
                        }
                    }

                    for (int total = 0; total < nc; ++total) {
                        const auto& rows = rows_by_total[static_cast<std::size_t>(total)];
                        const auto& cols = cols_by_total[static_cast<std::size_t>(total)];
                        if (rows.empty() && cols.empty()) continue;
                        ++report.instances_checked;
                        double worst = 0.0;
                        for (const auto& row : rows) {
                            const int f = row[0], alpha = row[1], g = row[2], beta = row[3],
                                      gamma = row[4];
                            const FBlock* b1 = table.find_block(f, c, d, total);
                            const FBlock* b3 = table.find_block(a, b, c, g);
                            for (const auto& col : cols) {
                                const int l = col[0], nu = col[1], k = col[2], mu = col[3],
                                          lambda = col[4];
                                const FBlock* b2 = table.find_block(a, b, l, total);
                                Complex lhs{0.0, 0.0};
                                const int n_delta = rules.n(f, l, total);
                                for (int delta = 1; delta <= n_delta; ++delta)
                                    lhs += val(b1, g, beta, gamma, l, nu, delta) *
                                           val(b2, f, alpha, delta, k, mu, lambda);
                                Complex rhs{0.0, 0.0};
                                const FBlock* b5 = table.find_block(b, c, d, k);
                                for (int h = 0; h < nc; ++h) {
                                    const int n_psi = rules.n(b, c, h);
                                    if (n_psi == 0) continue;
                                    const int n_sigma = rules.n(a, h, g);
                                    const int n_rho = rules.n(h, d, k);
                                    if (n_sigma == 0 || n_rho == 0) continue;
                                    const FBlock* b4 = table.find_block(a, h, d, total);
                                    for (int psi = 1; psi <= n_psi; ++psi)
                                        for (int sigma = 1; sigma <= n_sigma; ++sigma)
                                            for (int rho = 1; rho <= n_rho; ++rho)
                                                rhs += val(b3, f, alpha, beta, h, psi, sigma) *
                                                       val(b4, g, sigma, gamma, k, rho, lambda) *
                                                       val(b5, h, psi, rho, l, nu, mu);
                                }
                                worst = std::max(worst, std::abs(lhs - rhs));
                            }
                        }
                        report.max_residual = std::max(report.max_residual, worst);
                        if (worst > tol) {
                            report.violations.push_back({{a, b, c, d, total}, worst});
                            if (report.violations.size() >= max_violations) return report;
                        }
                    }
                }
        }
    return report;
}

}  // namespace anyon
