#include "anyon/fusion.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace anyon {

namespace {

bool valid_label(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s) {
        if (ch == '#' || ch == ',' || std::isspace(static_cast<unsigned char>(ch))) return false;
    }
    return true;
}

}  // namespace

FusionRules FusionRules::validated(std::vector<std::string> charges, std::string_view vacuum,
                                   const std::vector<std::pair<std::string, std::string>>& dual_pairs,
                                   const std::map<std::array<std::string, 3>, unsigned>& entries) {
    FusionRules r;
    if (charges.empty()) throw validation_error("charge list is empty");
    for (const auto& c : charges) {
        if (!valid_label(c))
            throw validation_error("invalid charge label '" + c +
                                   "' (must be nonempty, no whitespace/','/'#')");
    }
    r.charges_ = std::move(charges);
    const int nc = r.charge_count();
    for (int i = 0; i < nc; ++i)
        for (int j = i + 1; j < nc; ++j)
            if (r.charges_[static_cast<std::size_t>(i)] == r.charges_[static_cast<std::size_t>(j)])
                throw validation_error("duplicate charge label '" +
                                       r.charges_[static_cast<std::size_t>(i)] + "'");

    r.vacuum_ = r.index_of(vacuum);

    r.dual_.assign(static_cast<std::size_t>(nc), -1);
    for (const auto& [a, b] : dual_pairs) {
        const int ia = r.index_of(a);
        const int ib = r.index_of(b);
        auto& slot = r.dual_[static_cast<std::size_t>(ia)];
        if (slot != -1 && slot != ib)
            throw validation_error("conflicting dual assignments for charge '" + a + "'");
        slot = ib;
    }
    for (int a = 0; a < nc; ++a)
        if (r.dual_[static_cast<std::size_t>(a)] == -1)
            throw validation_error("missing dual assignment for charge '" + r.label(a) + "'");

    r.n_.assign(static_cast<std::size_t>(nc) * nc * nc, 0);
    auto at = [&](int a, int b, int c) -> std::uint8_t& {
        return r.n_[(static_cast<std::size_t>(a) * static_cast<std::size_t>(nc) +
                     static_cast<std::size_t>(b)) *
                        static_cast<std::size_t>(nc) +
                    static_cast<std::size_t>(c)];
    };
    for (const auto& [key, mult] : entries) {
        if (mult > kMaxFusionMultiplicity)
            throw validation_error("fusion multiplicity " + std::to_string(mult) + " for (" +
                                   key[0] + "," + key[1] + "," + key[2] + ") exceeds cap " +
                                   std::to_string(kMaxFusionMultiplicity));
        const int a = r.index_of(key[0]);
        const int b = r.index_of(key[1]);
        const int c = r.index_of(key[2]);
        auto& fwd = at(a, b, c);
        auto& rev = at(b, a, c);
        if ((fwd != 0 && fwd != mult) || (rev != 0 && rev != mult))
            throw validation_error("conflicting fusion multiplicities for (" + key[0] + "," +
                                   key[1] + "," + key[2] + ")");
        fwd = static_cast<std::uint8_t>(mult);
        rev = static_cast<std::uint8_t>(mult);
    }

    r.validate();
    return r;
}

void FusionRules::validate() const {
    const int nc = charge_count();
    const int vac = vacuum_;

    for (int a = 0; a < nc; ++a)
        for (int c = 0; c < nc; ++c) {
            const int expect = (a == c) ? 1 : 0;
            if (n_unchecked(a, vac, c) != expect || n_unchecked(vac, a, c) != expect)
                throw validation_error("vacuum fusion is not trivial: N(" + label(a) + "," +
                                       label(vac) + ";" + label(c) + ") != " +
                                       std::to_string(expect));
        }

    for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b) {
            const int expect = (b == dual(a)) ? 1 : 0;
            if (n_unchecked(a, b, vac) != expect)
                throw validation_error("dual-pairing invariant violated: N(" + label(a) + "," +
                                       label(b) + ";" + label(vac) + ") != " +
                                       std::to_string(expect));
        }

    // Commutativity is guaranteed by symmetric construction, but a user
    // could still feed mismatched orientations; re-check cheaply.
    for (int a = 0; a < nc; ++a)
        for (int b = a + 1; b < nc; ++b)
            for (int c = 0; c < nc; ++c)
                if (n_unchecked(a, b, c) != n_unchecked(b, a, c))
                    throw validation_error("fusion multiplicities not commutative at (" + label(a) +
                                           "," + label(b) + ";" + label(c) + ")");

    for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b)
            for (int c = 0; c < nc; ++c)
                for (int d = 0; d < nc; ++d) {
                    long lhs = 0, rhs = 0;
                    for (int e = 0; e < nc; ++e) {
                        lhs += static_cast<long>(n_unchecked(a, b, e)) * n_unchecked(e, c, d);
                        rhs += static_cast<long>(n_unchecked(a, e, d)) * n_unchecked(b, c, e);
                    }
                    if (lhs != rhs) {
                        std::ostringstream os;
                        os << "fusion associativity violated at (" << label(a) << "," << label(b)
                           << "," << label(c) << ";" << label(d) << "): " << lhs << " != " << rhs;
                        throw validation_error(os.str());
                    }
                }
}

int FusionRules::index_of(std::string_view label) const {
    for (int i = 0; i < charge_count(); ++i)
        if (charges_[static_cast<std::size_t>(i)] == label) return i;
    throw std::invalid_argument("unknown charge label '" + std::string(label) + "'");
}

std::vector<int> FusionRules::product(int a, int b) const {
    check_charge(a);
    check_charge(b);
    std::vector<int> out;
    for (int c = 0; c < charge_count(); ++c)
        if (n_unchecked(a, b, c) > 0) out.push_back(c);
    return out;
}

double QuantumDimensions::consistency_residual(const FusionRules& rules) const {
    const int nc = rules.charge_count();
    if (static_cast<int>(d.size()) != nc)
        throw std::invalid_argument("dimension vector size does not match charge count");
    double worst = 0.0;
    for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b) {
            double sum = 0.0;
            for (int c = 0; c < nc; ++c) sum += rules.n(a, b, c) * d[static_cast<std::size_t>(c)];
            worst = std::max(worst, std::abs(d[static_cast<std::size_t>(a)] *
                                                 d[static_cast<std::size_t>(b)] -
                                             sum));
        }
    return worst;
}

std::map<int, int> fuse(const FusionRules& rules, int a, int b) {
    std::map<int, int> out;
    for (int c : rules.product(a, b)) out[c] = rules.n(a, b, c);
    return out;
}

std::map<std::string, int> fuse(const FusionRules& rules, std::string_view a, std::string_view b) {
    std::map<std::string, int> out;
    for (const auto& [c, mult] : fuse(rules, rules.index_of(a), rules.index_of(b)))
        out[rules.label(c)] = mult;
    return out;
}

QuantumDimensions quantum_dimensions(const FusionRules& rules, double tol) {
    const int nc = rules.charge_count();
    QuantumDimensions dims;
    dims.d.resize(static_cast<std::size_t>(nc));
    for (int a = 0; a < nc; ++a) {
        Eigen::MatrixXd na(nc, nc);
        for (int b = 0; b < nc; ++b)
            for (int c = 0; c < nc; ++c) na(b, c) = rules.n(a, b, c);
        const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(na, false).eigenvalues();
        double radius = 0.0;
        for (Eigen::Index i = 0; i < ev.size(); ++i) radius = std::max(radius, std::abs(ev(i)));
        dims.d[static_cast<std::size_t>(a)] = radius;
    }
    const double residual = dims.consistency_residual(rules);
    if (residual > tol)
        throw validation_error(
            "quantum dimensions inconsistent with fusion rules (residual " +
            std::to_string(residual) + ")");
    for (int a = 0; a < nc; ++a)
        if (dims.d[static_cast<std::size_t>(a)] < 1.0 - tol)
            throw validation_error("quantum dimension of '" + rules.label(a) + "' below 1");
    return dims;
}

std::vector<TunnelingCharge> tunneling_charges(const FusionRules& rules, int a, int b) {
    std::vector<TunnelingCharge> out;
    for (int e = 0; e < rules.charge_count(); ++e) {
        const int na = rules.n(a, e, a);
        const int nb = rules.n(b, e, b);
        if (na > 0 && nb > 0) out.push_back({e, na, nb});
    }
    return out;
}

std::pair<long, long> check_tunneling_count(const FusionRules& rules, int a, int b) {
    long left = 0, right = 0;
    for (int e = 0; e < rules.charge_count(); ++e)
        left += static_cast<long>(rules.n(a, e, a)) * rules.n(b, e, b);
    for (int c = 0; c < rules.charge_count(); ++c) {
        const long m = rules.n(a, b, c);
        right += m * m;
    }
    return {left, right};
}

}  // namespace anyon
