// fusion.hpp — topological charges, fusion algebra, quantum dimensions,
// and tunneling-charge enumeration.
//
// Charges are kept as an ordered list of string labels; everything inside
// the library works with dense integer indices into that list. All types
// are immutable after validation and safe to share across threads.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace anyon {

// Thrown when a model violates one of its algebraic invariants. The
// message names the first failing invariant.
class validation_error : public std::runtime_error {
  public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an operation needs data the model does not carry (e.g.
// monodromy computations on a model without S-matrix or twists).
class unsupported_operation : public std::runtime_error {
  public:
    explicit unsupported_operation(const std::string& what) : std::runtime_error(what) {}
};

// Fusion multiplicities are physically tiny; anything above this cap is
// treated as corrupt input and rejected at construction/parse time.
inline constexpr unsigned kMaxFusionMultiplicity = 255;

// The fusion algebra a x b = sum_c N_ab^c c over an ordered charge list.
//
// Validated invariants:
//   - charge labels nonempty, unique, free of whitespace / ',' / '#'
//   - N_ab^c = N_ba^c
//   - N_aI^c = delta_ac (vacuum fuses trivially)
//   - N_ab^I = 1 exactly when b = dual(a), else 0
//   - sum_e N_ab^e N_ec^d = sum_f N_af^d N_bc^f (associativity)
class FusionRules {
  public:
    // `entries` lists nonzero multiplicities as (a,b,c) label triples -> N.
    // Symmetric completion is applied: giving one orientation of (a,b) is
    // enough; giving both with conflicting N is an error.
    static FusionRules validated(std::vector<std::string> charges,
                                 std::string_view vacuum,
                                 const std::vector<std::pair<std::string, std::string>>& dual_pairs,
                                 const std::map<std::array<std::string, 3>, unsigned>& entries);

    int charge_count() const { return static_cast<int>(charges_.size()); }
    const std::vector<std::string>& charges() const { return charges_; }
    const std::string& label(int c) const { return charges_.at(static_cast<std::size_t>(c)); }
    int vacuum() const { return vacuum_; }
    int dual(int a) const { return dual_.at(static_cast<std::size_t>(a)); }

    // Index of a label; throws std::invalid_argument for unknown labels.
    int index_of(std::string_view label) const;

    // N_ab^c
    int n(int a, int b, int c) const {
        check_charge(a);
        check_charge(b);
        check_charge(c);
        return n_unchecked(a, b, c);
    }

    // Charges c with N_ab^c > 0, ascending by index.
    std::vector<int> product(int a, int b) const;

    bool operator==(const FusionRules&) const = default;

  private:
    FusionRules() = default;

    int n_unchecked(int a, int b, int c) const {
        const auto nc = static_cast<std::size_t>(charge_count());
        return n_[(static_cast<std::size_t>(a) * nc + static_cast<std::size_t>(b)) * nc +
                  static_cast<std::size_t>(c)];
    }
    void check_charge(int c) const {
        if (c < 0 || c >= charge_count())
            throw std::invalid_argument("charge index out of range");
    }
    void validate() const;

    std::vector<std::string> charges_;
    int vacuum_ = 0;
    std::vector<int> dual_;
    std::vector<std::uint8_t> n_;  // dense (a,b,c), row-major
};

// Quantum dimensions d_a, one per charge in model order.
struct QuantumDimensions {
    std::vector<double> d;

    double operator[](int charge) const { return d.at(static_cast<std::size_t>(charge)); }
    // Largest |d_a d_b - sum_c N_ab^c d_c| over all pairs.
    double consistency_residual(const FusionRules& rules) const;
};

// Multiplicities of the fusion product a x b, keyed by charge index.
std::map<int, int> fuse(const FusionRules& rules, int a, int b);
std::map<std::string, int> fuse(const FusionRules& rules, std::string_view a, std::string_view b);

// Perron-Frobenius quantum dimensions: d_a is the spectral radius of the
// fusion matrix (N_a)_bc = N_ab^c. Throws validation_error if the result
// fails the bilinear consistency identity (malformed rules).
QuantumDimensions quantum_dimensions(const FusionRules& rules, double tol = 1e-10);

// A tunneling charge e for the pair (a,b), with its vertex multiplicity
// ranges: alpha in 1..N_ae^a, beta in 1..N_be^b.
struct TunnelingCharge {
    int charge;
    int alpha_range;  // N_ae^a
    int beta_range;   // N_be^b
};

// All charges e (vacuum included) with N_ae^a * N_be^b != 0, ascending.
std::vector<TunnelingCharge> tunneling_charges(const FusionRules& rules, int a, int b);

// Both sides of sum_e N_ae^a N_be^b = sum_c (N_ab^c)^2; equal for every
// valid model.
std::pair<long, long> check_tunneling_count(const FusionRules& rules, int a, int b);

}  // namespace anyon
