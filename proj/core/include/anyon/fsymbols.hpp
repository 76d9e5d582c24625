// fsymbols.hpp — F-symbol storage, the associativity (F-move) and exchange
// transforms, and the pentagon/unitarity verification suite.
//
// Index conventions, used everywhere below (vertex labels are 1-based):
//
//   Fundamental block F[a,b,c|d], the change of basis between the two
//   fusion orders of (a,b,c) -> d:
//     row (e,alpha,beta): e in a*b with N_ec^d > 0,
//                         alpha in 1..N_ab^e   ((a,b) -> e vertex)
//                         beta  in 1..N_ec^d   ((e,c) -> d vertex)
//     col (f,mu,nu):      f in b*c with N_af^d > 0,
//                         mu in 1..N_bc^f      ((b,c) -> f vertex)
//                         nu in 1..N_af^d      ((a,f) -> d vertex)
//   Rows/cols are enumerated charge-ascending, then first label, then
//   second label. Blocks are square for associative fusion rules.
//
//   Entries whose vertices violate the fusion rules are not stored and
//   evaluate to exactly zero; storing such an entry is an error.
//
// The pentagon coherence condition verified here equates the two
// re-association paths of four charges a,b,c,d fusing to E. With row
// tree (f,alpha,g,beta,gamma) — (a,b)->f, (f,c)->g, (g,d)->E — and column
// tree (l,nu,k,mu,lambda) — (c,d)->l, (b,l)->k, (a,k)->E — it reads
//
//   sum_delta F[f,c,d|E][(g,beta,gamma),(l,nu,delta)]
//             * F[a,b,l|E][(f,alpha,delta),(k,mu,lambda)]
//   = sum_{h,psi,sigma,rho}
//             F[a,b,c|g][(f,alpha,beta),(h,psi,sigma)]
//             * F[a,h,d|E][(g,sigma,gamma),(k,rho,lambda)]
//             * F[b,c,d|k][(h,psi,rho),(l,nu,mu)].

#pragma once

#include "anyon/fusion.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <vector>

namespace anyon {

using Complex = std::complex<double>;

// Composite basis index: intermediate charge plus its two vertex labels.
struct FTreeIndex {
    int charge;
    int first;   // 1-based
    int second;  // 1-based

    bool operator==(const FTreeIndex&) const = default;
};

// One dense F block with its basis enumeration.
struct FBlock {
    std::array<int, 4> labels{};  // (a,b,c,d)
    std::vector<FTreeIndex> rows;
    std::vector<FTreeIndex> cols;
    Eigen::MatrixXcd m;  // rows.size() x cols.size()

    bool empty() const { return rows.empty() || cols.empty(); }
    // Flat index of a composite label, -1 when not admissible.
    int row_index(int charge, int first, int second) const;
    int col_index(int charge, int first, int second) const;
};

// Sparse table of F-symbols over a fixed set of fusion rules. Immutable
// once populated; verification functions are const and thread-safe.
class FSymbolTable {
  public:
    explicit FSymbolTable(FusionRules rules, double tolerance = 1e-9);

    const FusionRules& rules() const { return rules_; }
    double tolerance() const { return tolerance_; }
    void set_tolerance(double tol) { tolerance_ = tol; }

    // Stores one entry; throws validation_error if any vertex violates
    // the fusion rules.
    void set(int a, int b, int c, int d, int e, int alpha, int beta, int f, int mu, int nu,
             Complex value);

    // Entry lookup; exactly zero for absent or fusion-violating labels.
    Complex get(int a, int b, int c, int d, int e, int alpha, int beta, int f, int mu,
                int nu) const;

    // Stored block, or nullptr if no entry of it was ever set.
    const FBlock* find_block(int a, int b, int c, int d) const;

    // Admissible row/column enumerations derived from the fusion rules.
    std::vector<FTreeIndex> left_trees(int a, int b, int c, int d) const;
    std::vector<FTreeIndex> right_trees(int a, int b, int c, int d) const;

    // Deterministic (label-ordered) view of stored blocks.
    const std::map<std::array<int, 4>, FBlock>& blocks() const { return blocks_; }

  private:
    FBlock make_block(int a, int b, int c, int d) const;

    FusionRules rules_;
    double tolerance_;
    std::map<std::array<int, 4>, FBlock> blocks_;
};

// F-move matrix for (a,b,c) -> d. A distinguished empty block (no rows &
// no columns) is returned when no fusion tree exists; never throws for
// valid charge indices.
FBlock f_move(const FSymbolTable& table, int a, int b, int c, int d);

// The exchange transform: the unitary map between the "charge e passed
// between an a-line and a b-line above (c,d)" basis and the fused basis.
//   row (e,alpha,beta): alpha in 1..N_ce^a, beta in 1..N_eb^d
//   col (f,mu,nu):      mu in 1..N_ab^f (splitting), nu in 1..N_cd^f
// Entry: sqrt(d_e d_f / (d_a d_d)) * conj(F[c,e,b|f][(a,alpha,mu),(d,beta,nu)]).
FBlock f_general(const FSymbolTable& table, const QuantumDimensions& dims, int a, int b, int c,
                 int d);

// The tunneling F matrix for charge e exchanged between anyons a and b in
// fusion channel c: entries F[a,e,b|c] with both intermediates pinned to
// (a, b).
//   rows (alpha,nu): alpha in 1..N_ae^a, nu in 1..N_ab^c
//   cols (beta,mu):  beta in 1..N_eb^b,  mu in 1..N_ab^c
// Row-major composite order (alpha outer, nu inner; beta outer, mu inner).
struct TunnelingFMatrix {
    int e = -1;
    int c = -1;
    int alpha_range = 0;
    int nu_range = 0;
    int beta_range = 0;
    int mu_range = 0;
    Eigen::MatrixXcd m;

    bool empty() const { return m.size() == 0; }
};

// Computed through the exchange transform,
//   F[a,e,b|c][(a,alpha,nu),(b,beta,mu)]
//     = sqrt(d_a d_b / (d_e d_c)) * conj(f_general(a,b,a,b)[(e,alpha,beta),(c,nu,mu)]).
TunnelingFMatrix tunneling_f(const FSymbolTable& table, const QuantumDimensions& dims, int a,
                             int e, int b, int c);

// Same matrix read directly off the fundamental table; serves as the
// independent route to cross-check tunneling_f.
TunnelingFMatrix tunneling_f_direct(const FSymbolTable& table, int a, int e, int b, int c);

struct UnitarityViolation {
    std::array<int, 4> labels;  // (a,b,c,d)
    double deviation;
};

struct UnitarityReport {
    double max_deviation = 0.0;
    std::vector<UnitarityViolation> violations;
    std::size_t blocks_checked = 0;

    bool ok() const { return violations.empty(); }
};

struct PentagonViolation {
    std::array<int, 5> labels;  // (a,b,c,d,E)
    double residual;
};

struct PentagonReport {
    double max_residual = 0.0;
    std::vector<PentagonViolation> violations;
    std::size_t instances_checked = 0;

    bool ok() const { return violations.empty(); }
};

// Checks ||F F^dag - 1||_max and ||F^dag F - 1||_max for every admissible
// block (absent blocks count as zero matrices).
UnitarityReport verify_unitarity(const FSymbolTable& table);

// Evaluates every pentagon instance (a,b,c,d,E); an instance is a
// violation when any matrix element of LHS-RHS exceeds the tolerance.
// `max_violations` allows early exit once that many are collected.
PentagonReport verify_pentagon(const FSymbolTable& table,
                               std::size_t max_violations = std::numeric_limits<std::size_t>::max());

}  // namespace anyon
