// perturbation.hpp — tunneling-induced splitting of topological degeneracy.
//
// The central object is the T matrix mapping tunneling amplitudes to
// per-channel energy contributions,
//
//   T[(e,alpha,beta),(c,mu,nu)] = F[a,e,b|c][(a,alpha,nu),(b,beta,mu)],
//
// with the closed-form inverse
//
//   Tinv[(c,mu,nu),(e,alpha,beta)] = (d_c d_e / d_a d_b) * conj(T[(e,alpha,beta),(c,mu,nu)]).
//
// Per-channel Hermitian matrices, their spectra, the monodromy (double
// loop) interaction, and the reduction of arbitrary two-anyon
// interactions to effective tunneling amplitudes all live here. Energy
// units are abstract throughout.

#pragma once

#include "anyon/models.hpp"

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <utility>
#include <vector>

namespace anyon {

// Tunneling amplitudes Gamma_{e,alpha,beta} for a fixed anyon pair. The
// vacuum amplitude is identically zero and never stored; every key is
// checked against the pair's tunneling charges at construction.
struct TunnelingSpec {
    int charge_a = -1;
    int charge_b = -1;
    std::map<std::array<int, 3>, Complex> amplitudes;  // (e, alpha, beta) -> Gamma

    static TunnelingSpec make(const AnyonModel& model, int a, int b,
                              const std::map<std::array<int, 3>, Complex>& amplitudes);

    // Vertex-independent amplitudes: Gamma_{e,alpha,beta} = Gamma_e for
    // every admissible (alpha, beta). No claim is made about the
    // intra-channel spectra such symmetric specs produce.
    static TunnelingSpec symmetric(const AnyonModel& model, int a, int b,
                                   const std::map<int, Complex>& per_charge);

    Complex amplitude(int e, int alpha, int beta) const;
};

// Loop amplitudes gamma_z together with the monodromy scalars M_zc they
// couple through. Monodromy scalars are model data (from the S-matrix or
// twists), never derived from F-symbols.
struct MonodromySpec {
    int charge_a = -1;
    int charge_b = -1;
    std::map<int, Complex> loop_amplitudes;             // z -> gamma_z
    std::map<std::pair<int, int>, Complex> monodromy;   // (z, c) -> M_zc

    // M pulled from the model's S-matrix (given or derived from twists);
    // throws unsupported_operation when the model has neither.
    static MonodromySpec make(const AnyonModel& model, int a, int b,
                              const std::map<int, Complex>& loop_amplitudes);

    // Explicit monodromy data (validated: M_{I,c} = M_{z,I} = 1,
    // |M| <= 1 within tol).
    static MonodromySpec with_monodromy(const FusionRules& rules, int a, int b,
                                        const std::map<int, Complex>& loop_amplitudes,
                                        const std::map<std::pair<int, int>, Complex>& monodromy,
                                        double tol = 1e-9);
};

// A general Hermitian two-anyon interaction, one N_ab^c x N_ab^c block
// per fusion channel (absent channels are zero).
struct GeneralInteraction {
    int charge_a = -1;
    int charge_b = -1;
    std::map<int, Eigen::MatrixXcd> blocks;  // c -> V_c, V_c(mu-1, nu-1) = V_{c,mu,nu}

    // Validates channel keys, block dimensions against N_ab^c, and
    // Hermiticity (offending (c,mu,nu) named).
    static GeneralInteraction make(const AnyonModel& model, int a, int b,
                                   std::map<int, Eigen::MatrixXcd> blocks,
                                   double hermiticity_tol = 1e-12);
};

// The T matrix for one anyon pair, with both composite index maps.
// Rows/columns are enumerated charge-ascending, then first vertex label,
// then second.
struct TMatrix {
    int charge_a = -1;
    int charge_b = -1;
    std::vector<std::array<int, 3>> tunneling_index;  // (e, alpha, beta)
    std::vector<std::array<int, 3>> channel_index;    // (c, mu, nu)
    std::vector<int> channels;                        // distinct c, ascending
    Eigen::MatrixXcd forward;                         // tunneling x channel
    Eigen::MatrixXcd inverse;                         // channel x tunneling

    int tunneling_pos(int e, int alpha, int beta) const;
    int channel_pos(int c, int mu, int nu) const;
    int channel_dim(int c) const;  // N_ab^c
};

// Forward entries through tunneling_f; the inverse is the closed form
// above, never a numerical inversion. Refuses (validation_error) when the
// model's F table has not passed verification.
TMatrix build_t_matrix(const AnyonModel& model, int a, int b);

struct ChannelSplitting {
    int channel = -1;
    Eigen::MatrixXcd matrix;          // Hermitian, N_ab^c x N_ab^c
    std::vector<double> eigenvalues;  // ascending
};

struct SplittingResult {
    int charge_a = -1;
    int charge_b = -1;
    std::vector<ChannelSplitting> channels;             // model charge order
    std::vector<std::pair<double, int>> gap_structure;  // distinct level -> multiplicity
    double degeneracy_threshold = 1e-9;
};

// Per-channel Hermitian matrices
//   V_c[mu,nu] = sum_{e,alpha,beta} ( Gamma T[(e,alpha,beta),(c,mu,nu)]
//                                   + conj(Gamma) conj(T[(e,alpha,beta),(c,nu,mu)]) )
// and their spectra.
SplittingResult splitting_spectrum(const TMatrix& t, const TunnelingSpec& spec,
                                   double degeneracy_tol = 1e-9);
SplittingResult splitting_spectrum(const AnyonModel& model, const TunnelingSpec& spec,
                                   double degeneracy_tol = 1e-9);

// Monodromy (double loop) splitting: diagonal in (c, mu) with
//   E_c = sum_z ( gamma_z M_zc + conj(gamma_z) conj(M_zc) ),
// leaving each channel's internal space degenerate.
SplittingResult monodromy_spectrum(const AnyonModel& model, const MonodromySpec& mono,
                                   double degeneracy_tol = 1e-9);

// Tunneling and (optional) monodromy perturbations acting together:
// per-channel matrix V_c + E_c * Id.
SplittingResult total_spectrum(const AnyonModel& model, const TunnelingSpec& spec,
                               const MonodromySpec* mono, double degeneracy_tol = 1e-9);

// The GeneralInteraction realization of the monodromy perturbation:
// V_{c,mu,nu} = delta_{mu,nu} E_c.
GeneralInteraction monodromy_interaction(const AnyonModel& model, const MonodromySpec& mono);

// Effective tunneling amplitudes with the physically meaningless vacuum
// component split out: it contributes the uniform energy shift
// 2 Re(vacuum_amplitude) to every channel.
struct EffectiveAmplitudes {
    TunnelingSpec amplitudes;
    Complex vacuum_amplitude{0.0, 0.0};

    double energy_offset() const { return 2.0 * vacuum_amplitude.real(); }
};

// Gamma_eff = (1/2) sum_{c,mu,nu} V_{c,mu,nu} Tinv[(c,mu,nu),(e,alpha,beta)].
// For real-gauge F tables this recovers Re(Gamma) of a spec that produced
// V; the spectrum of splitting_spectrum(result) + energy_offset always
// reproduces the spectrum of V.
EffectiveAmplitudes effective_amplitudes(const AnyonModel& model,
                                         const GeneralInteraction& interaction);

// Gamma = sum_{z,c,mu} gamma_z M_zc Tinv[(c,mu,mu),(e,alpha,beta)], the
// direct reduction of the monodromy perturbation to tunneling form.
EffectiveAmplitudes monodromy_to_effective(const AnyonModel& model, const MonodromySpec& mono);

// Spectrum of the interaction an EffectiveAmplitudes stands for: the
// splitting of its tunneling part with the uniform vacuum offset restored
// on every channel.
SplittingResult reconstructed_spectrum(const AnyonModel& model, const EffectiveAmplitudes& eff,
                                       double degeneracy_tol = 1e-9);

// Phenomenological distance dependence g * exp(-L/xi); requires L >= 0
// and xi > 0.
Complex decayed_amplitude(Complex g, double distance, double decay_length);

}  // namespace anyon
