#include "anyon/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anyon {

namespace {

void check_pair(const FusionRules& rules, int a, int b) {
    if (a < 0 || a >= rules.charge_count() || b < 0 || b >= rules.charge_count())
        throw std::invalid_argument("charge index out of range");
}

std::string idx_str(const FusionRules& rules, const std::array<int, 3>& t) {
    std::ostringstream os;
    os << "(" << rules.label(t[0]) << "," << t[1] << "," << t[2] << ")";
    return os.str();
}

std::vector<std::pair<double, int>> cluster_levels(std::vector<double> values, double tol) {
    std::sort(values.begin(), values.end());
    std::vector<std::pair<double, int>> out;
    for (double v : values) {
        if (!out.empty() && std::abs(v - out.back().first) <= tol)
            ++out.back().second;
        else
            out.emplace_back(v, 1);
    }
    return out;
}

}  // namespace

TunnelingSpec TunnelingSpec::make(const AnyonModel& model, int a, int b,
                                  const std::map<std::array<int, 3>, Complex>& amplitudes) {
    const FusionRules& rules = model.rules;
    check_pair(rules, a, b);
    const auto allowed = tunneling_charges(rules, a, b);
    const int vac = rules.vacuum();

    TunnelingSpec spec;
    spec.charge_a = a;
    spec.charge_b = b;
    for (const auto& [key, value] : amplitudes) {
        const auto it = std::find_if(allowed.begin(), allowed.end(),
                                     [&](const TunnelingCharge& t) { return t.charge == key[0]; });
        if (it == allowed.end() || key[1] < 1 || key[1] > it->alpha_range || key[2] < 1 ||
            key[2] > it->beta_range)
            throw std::invalid_argument("amplitude keyed to invalid tunneling index " +
                                        idx_str(rules, key) + " for pair (" + rules.label(a) +
                                        "," + rules.label(b) + ")");
        if (key[0] == vac) {
            if (std::abs(value) != 0.0)
                throw std::invalid_argument(
                    "vacuum tunneling amplitude must be zero (it is not a tunneling process)");
            continue;  // never stored
        }
        if (std::abs(value) != 0.0) spec.amplitudes[key] = value;
    }
    return spec;
}

TunnelingSpec TunnelingSpec::symmetric(const AnyonModel& model, int a, int b,
                                       const std::map<int, Complex>& per_charge) {
    const auto allowed = tunneling_charges(model.rules, a, b);
    std::map<std::array<int, 3>, Complex> amplitudes;
    for (const auto& [e, gamma] : per_charge) {
        const auto it = std::find_if(allowed.begin(), allowed.end(),
                                     [&](const TunnelingCharge& t) { return t.charge == e; });
        if (it == allowed.end())
            throw std::invalid_argument("charge '" + model.rules.label(e) +
                                        "' is not a tunneling charge for this pair");
        for (int alpha = 1; alpha <= it->alpha_range; ++alpha)
            for (int beta = 1; beta <= it->beta_range; ++beta)
                amplitudes[{e, alpha, beta}] = gamma;
    }
    return make(model, a, b, amplitudes);
}

Complex TunnelingSpec::amplitude(int e, int alpha, int beta) const {
    const auto it = amplitudes.find({e, alpha, beta});
    return it == amplitudes.end() ? Complex{0.0, 0.0} : it->second;
}

MonodromySpec MonodromySpec::make(const AnyonModel& model, int a, int b,
                                  const std::map<int, Complex>& loop_amplitudes) {
    const FusionRules& rules = model.rules;
    check_pair(rules, a, b);
    MonodromySpec spec;
    spec.charge_a = a;
    spec.charge_b = b;
    spec.loop_amplitudes = loop_amplitudes;
    for (const auto& [z, gamma] : loop_amplitudes) {
        (void)gamma;
        if (z < 0 || z >= rules.charge_count())
            throw std::invalid_argument("loop charge index out of range");
        for (int c : rules.product(a, b)) spec.monodromy[{z, c}] = monodromy_scalar(model, z, c);
    }
    return spec;
}

MonodromySpec MonodromySpec::with_monodromy(
    const FusionRules& rules, int a, int b, const std::map<int, Complex>& loop_amplitudes,
    const std::map<std::pair<int, int>, Complex>& monodromy, double tol) {
    check_pair(rules, a, b);
    const int vac = rules.vacuum();
    for (const auto& [key, m] : monodromy) {
        if (std::abs(m) > 1.0 + tol)
            throw validation_error("monodromy scalar |M| > 1 at (" + rules.label(key.first) +
                                   "," + rules.label(key.second) + ")");
        if ((key.first == vac || key.second == vac) && std::abs(m - Complex{1.0, 0.0}) > tol)
            throw validation_error("vacuum monodromy scalar must be 1");
    }
    MonodromySpec spec;
    spec.charge_a = a;
    spec.charge_b = b;
    spec.loop_amplitudes = loop_amplitudes;
    spec.monodromy = monodromy;
    return spec;
}

int TMatrix::tunneling_pos(int e, int alpha, int beta) const {
    for (std::size_t i = 0; i < tunneling_index.size(); ++i)
        if (tunneling_index[i] == std::array<int, 3>{e, alpha, beta}) return static_cast<int>(i);
    return -1;
}

int TMatrix::channel_pos(int c, int mu, int nu) const {
    for (std::size_t i = 0; i < channel_index.size(); ++i)
        if (channel_index[i] == std::array<int, 3>{c, mu, nu}) return static_cast<int>(i);
    return -1;
}

int TMatrix::channel_dim(int c) const {
    int n = 0;
    for (const auto& idx : channel_index)
        if (idx[0] == c && idx[2] == 1) ++n;
    return n;
}

TMatrix build_t_matrix(const AnyonModel& model, int a, int b) {
    const FusionRules& rules = model.rules;
    check_pair(rules, a, b);
    if (!model.is_validated()) {
        const UnitarityReport ur = verify_unitarity(model.f);
        if (!ur.ok())
            throw validation_error("refusing to build T matrix: F table fails unitarity "
                                   "(max deviation " +
                                   std::to_string(ur.max_deviation) + ")");
    }

    TMatrix t;
    t.charge_a = a;
    t.charge_b = b;
    for (const TunnelingCharge& e : tunneling_charges(rules, a, b))
        for (int alpha = 1; alpha <= e.alpha_range; ++alpha)
            for (int beta = 1; beta <= e.beta_range; ++beta)
                t.tunneling_index.push_back({e.charge, alpha, beta});
    for (int c : rules.product(a, b)) {
        t.channels.push_back(c);
        const int n = rules.n(a, b, c);
        for (int mu = 1; mu <= n; ++mu)
            for (int nu = 1; nu <= n; ++nu) t.channel_index.push_back({c, mu, nu});
    }
    if (t.tunneling_index.size() != t.channel_index.size())
        throw std::logic_error("tunneling/channel index sets differ in size");

    const Eigen::Index n = static_cast<Eigen::Index>(t.tunneling_index.size());
    t.forward.resize(n, n);
    t.inverse.resize(n, n);

    int row0 = 0;
    for (const TunnelingCharge& e : tunneling_charges(rules, a, b)) {
        int col0 = 0;
        for (int c : t.channels) {
            const TunnelingFMatrix tf = tunneling_f(model.f, model.dims, a, e.charge, b, c);
            const int nch = rules.n(a, b, c);
            const double inv_pref =
                model.dims[c] * model.dims[e.charge] / (model.dims[a] * model.dims[b]);
            for (int alpha = 1; alpha <= e.alpha_range; ++alpha)
                for (int beta = 1; beta <= e.beta_range; ++beta) {
                    const int r = row0 + (alpha - 1) * e.beta_range + (beta - 1);
                    for (int mu = 1; mu <= nch; ++mu)
                        for (int nu = 1; nu <= nch; ++nu) {
                            const int cc = col0 + (mu - 1) * nch + (nu - 1);
                            const Complex v = tf.m((alpha - 1) * tf.nu_range + (nu - 1),
                                                   (beta - 1) * tf.mu_range + (mu - 1));
                            t.forward(r, cc) = v;
                            t.inverse(cc, r) = inv_pref * std::conj(v);
                        }
                }
            col0 += nch * nch;
        }
        row0 += e.alpha_range * e.beta_range;
    }
    return t;
}

SplittingResult splitting_spectrum(const TMatrix& t, const TunnelingSpec& spec,
                                   double degeneracy_tol) {
    if (spec.charge_a != t.charge_a || spec.charge_b != t.charge_b)
        throw std::invalid_argument("tunneling spec pair does not match T matrix pair");

    SplittingResult result;
    result.charge_a = t.charge_a;
    result.charge_b = t.charge_b;
    result.degeneracy_threshold = degeneracy_tol;

    // Dense amplitude vector in T row order.
    Eigen::VectorXcd gamma = Eigen::VectorXcd::Zero(t.forward.rows());
    for (std::size_t r = 0; r < t.tunneling_index.size(); ++r) {
        const auto& idx = t.tunneling_index[r];
        gamma(static_cast<Eigen::Index>(r)) = spec.amplitude(idx[0], idx[1], idx[2]);
    }
    const Eigen::VectorXcd w = t.forward.transpose() * gamma;  // (Gamma T) over channel index

    std::vector<double> all_levels;
    int col0 = 0;
    for (int c : t.channels) {
        const int n = t.channel_dim(c);
        ChannelSplitting ch;
        ch.channel = c;
        ch.matrix.resize(n, n);
        for (int mu = 1; mu <= n; ++mu)
            for (int nu = 1; nu <= n; ++nu) {
                const Complex w1 = w(col0 + (mu - 1) * n + (nu - 1));
                const Complex w2 = w(col0 + (nu - 1) * n + (mu - 1));
                ch.matrix(mu - 1, nu - 1) = w1 + std::conj(w2);
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(ch.matrix,
                                                               Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("eigenvalue decomposition failed");
        ch.eigenvalues.assign(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + solver.eigenvalues().size());
        all_levels.insert(all_levels.end(), ch.eigenvalues.begin(), ch.eigenvalues.end());
        result.channels.push_back(std::move(ch));
        col0 += n * n;
    }
    result.gap_structure = cluster_levels(std::move(all_levels), degeneracy_tol);
    return result;
}

SplittingResult splitting_spectrum(const AnyonModel& model, const TunnelingSpec& spec,
                                   double degeneracy_tol) {
    return splitting_spectrum(build_t_matrix(model, spec.charge_a, spec.charge_b), spec,
                              degeneracy_tol);
}

namespace {

// Channel energies E_c of the monodromy perturbation.
std::map<int, double> monodromy_energies(const AnyonModel& model, const MonodromySpec& mono) {
    const FusionRules& rules = model.rules;
    check_pair(rules, mono.charge_a, mono.charge_b);
    std::map<int, double> energies;
    for (int c : rules.product(mono.charge_a, mono.charge_b)) {
        double e = 0.0;
        for (const auto& [z, gamma] : mono.loop_amplitudes) {
            if (std::abs(gamma) == 0.0) continue;
            const auto it = mono.monodromy.find({z, c});
            if (it == mono.monodromy.end())
                throw unsupported_operation("no monodromy scalar for (" + rules.label(z) + "," +
                                            rules.label(c) + ")");
            e += 2.0 * (gamma * it->second).real();
        }
        energies[c] = e;
    }
    return energies;
}

}  // namespace

SplittingResult monodromy_spectrum(const AnyonModel& model, const MonodromySpec& mono,
                                   double degeneracy_tol) {
    const FusionRules& rules = model.rules;
    const auto energies = monodromy_energies(model, mono);

    SplittingResult result;
    result.charge_a = mono.charge_a;
    result.charge_b = mono.charge_b;
    result.degeneracy_threshold = degeneracy_tol;
    std::vector<double> all_levels;
    for (const auto& [c, e] : energies) {
        const int n = rules.n(mono.charge_a, mono.charge_b, c);
        ChannelSplitting ch;
        ch.channel = c;
        ch.matrix = e * Eigen::MatrixXcd::Identity(n, n);
        ch.eigenvalues.assign(static_cast<std::size_t>(n), e);
        all_levels.insert(all_levels.end(), ch.eigenvalues.begin(), ch.eigenvalues.end());
        result.channels.push_back(std::move(ch));
    }
    result.gap_structure = cluster_levels(std::move(all_levels), degeneracy_tol);
    return result;
}

SplittingResult total_spectrum(const AnyonModel& model, const TunnelingSpec& spec,
                               const MonodromySpec* mono, double degeneracy_tol) {
    SplittingResult result = splitting_spectrum(model, spec, degeneracy_tol);
    if (mono == nullptr) return result;
    if (mono->charge_a != spec.charge_a || mono->charge_b != spec.charge_b)
        throw std::invalid_argument("monodromy spec pair does not match tunneling spec pair");
    const auto energies = monodromy_energies(model, *mono);
    std::vector<double> all_levels;
    for (auto& ch : result.channels) {
        const double e = energies.at(ch.channel);
        const Eigen::Index n = ch.matrix.rows();
        ch.matrix += e * Eigen::MatrixXcd::Identity(n, n);
        for (double& ev : ch.eigenvalues) ev += e;
        all_levels.insert(all_levels.end(), ch.eigenvalues.begin(), ch.eigenvalues.end());
    }
    result.gap_structure = cluster_levels(std::move(all_levels), degeneracy_tol);
    return result;
}

SplittingResult reconstructed_spectrum(const AnyonModel& model, const EffectiveAmplitudes& eff,
                                       double degeneracy_tol) {
    SplittingResult result = splitting_spectrum(model, eff.amplitudes, degeneracy_tol);
    const double shift = eff.energy_offset();
    if (shift == 0.0) return result;
    std::vector<double> all_levels;
    for (auto& ch : result.channels) {
        const Eigen::Index n = ch.matrix.rows();
        ch.matrix += shift * Eigen::MatrixXcd::Identity(n, n);
        for (double& ev : ch.eigenvalues) ev += shift;
        all_levels.insert(all_levels.end(), ch.eigenvalues.begin(), ch.eigenvalues.end());
    }
    result.gap_structure = cluster_levels(std::move(all_levels), degeneracy_tol);
    return result;
}

GeneralInteraction monodromy_interaction(const AnyonModel& model, const MonodromySpec& mono) {
    const auto energies = monodromy_energies(model, mono);
    std::map<int, Eigen::MatrixXcd> blocks;
    for (const auto& [c, e] : energies) {
        const int n = model.rules.n(mono.charge_a, mono.charge_b, c);
        blocks[c] = e * Eigen::MatrixXcd::Identity(n, n);
    }
    return GeneralInteraction::make(model, mono.charge_a, mono.charge_b, std::move(blocks));
}

GeneralInteraction GeneralInteraction::make(const AnyonModel& model, int a, int b,
                                            std::map<int, Eigen::MatrixXcd> blocks,
                                            double hermiticity_tol) {
    const FusionRules& rules = model.rules;
    check_pair(rules, a, b);
    for (const auto& [c, block] : blocks) {
        const int n = (c >= 0 && c < rules.charge_count()) ? rules.n(a, b, c) : 0;
        if (n == 0)
            throw std::invalid_argument("interaction block keyed to a non-channel charge");
        if (block.rows() != n || block.cols() != n)
            throw std::invalid_argument("interaction block for channel '" + rules.label(c) +
                                        "' is " + std::to_string(block.rows()) + "x" +
                                        std::to_string(block.cols()) + ", expected " +
                                        std::to_string(n) + "x" + std::to_string(n));
        for (int mu = 1; mu <= n; ++mu)
            for (int nu = 1; nu <= n; ++nu)
                if (std::abs(block(mu - 1, nu - 1) - std::conj(block(nu - 1, mu - 1))) >
                    hermiticity_tol)
                    throw validation_error("interaction is not Hermitian at (" + rules.label(c) +
                                           "," + std::to_string(mu) + "," + std::to_string(nu) +
                                           ")");
    }
    GeneralInteraction v;
    v.charge_a = a;
    v.charge_b = b;
    v.blocks = std::move(blocks);
    return v;
}

namespace {

// Splits the raw amplitude vector (in T row order) into a TunnelingSpec
// with the vacuum component reported separately.
EffectiveAmplitudes split_vacuum(const AnyonModel& model, const TMatrix& t,
                                 const Eigen::VectorXcd& raw) {
    const int vac = model.rules.vacuum();
    std::map<std::array<int, 3>, Complex> amplitudes;
    Complex vacuum_amp{0.0, 0.0};
    for (std::size_t r = 0; r < t.tunneling_index.size(); ++r) {
        const auto& idx = t.tunneling_index[r];
        const Complex v = raw(static_cast<Eigen::Index>(r));
        if (idx[0] == vac)
            vacuum_amp = v;
        else if (std::abs(v) != 0.0)
            amplitudes[idx] = v;
    }
    EffectiveAmplitudes out;
    out.amplitudes = TunnelingSpec::make(model, t.charge_a, t.charge_b, amplitudes);
    out.vacuum_amplitude = vacuum_amp;
    return out;
}

}  // namespace

EffectiveAmplitudes effective_amplitudes(const AnyonModel& model,
                                         const GeneralInteraction& interaction) {
    const TMatrix t = build_t_matrix(model, interaction.charge_a, interaction.charge_b);

    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(t.channel_index.size()));
    for (const auto& [c, block] : interaction.blocks) {
        const int n = t.channel_dim(c);
        if (block.rows() != n || block.cols() != n)
            throw std::invalid_argument("interaction block dimension mismatch for channel '" +
                                        model.rules.label(c) + "'");
        for (int mu = 1; mu <= n; ++mu)
            for (int nu = 1; nu <= n; ++nu)
                v(t.channel_pos(c, mu, nu)) = block(mu - 1, nu - 1);
    }
    const Eigen::VectorXcd raw = 0.5 * (t.inverse.transpose() * v);
    return split_vacuum(model, t, raw);
}

EffectiveAmplitudes monodromy_to_effective(const AnyonModel& model, const MonodromySpec& mono) {
    const FusionRules& rules = model.rules;
    const TMatrix t = build_t_matrix(model, mono.charge_a, mono.charge_b);

    Eigen::VectorXcd raw = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(t.tunneling_index.size()));
    for (const auto& [z, gamma] : mono.loop_amplitudes) {
        if (std::abs(gamma) == 0.0) continue;
        for (int c : t.channels) {
            const auto it = mono.monodromy.find({z, c});
            if (it == mono.monodromy.end())
                throw unsupported_operation("no monodromy scalar for (" + rules.label(z) + "," +
                                            rules.label(c) + ")");
            const Complex weight = gamma * it->second;
            const int n = t.channel_dim(c);
            for (int mu = 1; mu <= n; ++mu) {
                const int cc = t.channel_pos(c, mu, mu);
                for (Eigen::Index r = 0; r < raw.size(); ++r) raw(r) += weight * t.inverse(cc, r);
            }
        }
    }
    return split_vacuum(model, t, raw);
}

Complex decayed_amplitude(Complex g, double distance, double decay_length) {
    if (decay_length <= 0.0) throw std::invalid_argument("decay length must be positive");
    if (distance < 0.0) throw std::invalid_argument("distance must be non-negative");
    return g * std::exp(-distance / decay_length);
}

}  // namespace anyon
