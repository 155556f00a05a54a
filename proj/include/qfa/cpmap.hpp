#pragma once

#include <Eigen/Dense>
#include <random>
#include <variant>
#include <vector>

#include "qfa/errors.hpp"

namespace qfa {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Scaled permutation Kraus operator: e_i -> scale * e_{dest[i]}.
struct PermOp {
  double scale = 1.0;
  std::vector<int> dest;
};

using KrausOp = std::variant<CMat, PermOp>;

CMat kraus_dense(const KrausOp& op, int rows, int cols);

/// Completely positive map given by its Kraus operators (all dim_out x
/// dim_in): rho -> sum V rho V*.
struct CpMap {
  int dim_in = 0, dim_out = 0;
  std::vector<KrausOp> ops;

  static CpMap from_kraus(std::vector<CMat> kraus);
  static CpMap identity(int dim);

  CMat apply(const CMat& rho) const;
  bool all_perm() const;
  /// Action on a diagonal density matrix, valid when all_perm().
  void apply_diag(std::vector<double>& diag) const;
  bool square() const { return dim_in == dim_out; }
};

/// f after g: (f o g)(rho) = f(g(rho)).
CpMap compose(const CpMap& f, const CpMap& g);

/// Hermitian within tol and min eigenvalue >= -tol.
bool is_positive(const CMat& m, double tol = 1e-10);

/// Positive with trace in [0, 1]: density matrices scaled by the surviving
/// probability mass.
bool is_scaled_density(const CMat& rho, double tol = 1e-10);

struct ChannelFlags {
  bool trace_preserving = false;
  bool sub_tracial = false;
  bool unital = false;
  bool sub_unital = false;
  bool bistochastic = false;
  bool sub_bistochastic = false;
};

ChannelFlags channel_predicates(const CpMap& c, double tol = 1e-10);

/// How far the channel is from bistochastic: max entry deviation of
/// sum V*V and sum VV* from the identity.
double bistochastic_defect(const CpMap& c);

/// Column-stacking matrix representation: sum conj(V) (x) V, so that
/// superoperator(c) * vec(M) == vec(c.apply(M)).
CMat superoperator(const CpMap& c);

CMat kron(const CMat& a, const CMat& b);

struct OmegaResult {
  CMat projector;        // idempotent superoperator, the omega-limit
  int peripheral_dim = 0;
  bool reduced_confidence = false;
};

/// Spectral projector onto the peripheral spectrum (|lambda| >= 1 - tol) of
/// the superoperator, computed from an ordered Schur form; falls back to
/// iterated squaring with Cesaro smoothing (reduced confidence) when the
/// spectral route fails its own idempotency check.
OmegaResult omega_limit_superop(const CMat& t, double tol_peripheral = 1e-9,
                                double tol_idem = 1e-6);

/// Validates sub-bistochasticity first.
OmegaResult omega_limit(const CpMap& c, double tol_peripheral = 1e-9,
                        double tol_idem = 1e-6);

struct BistEjReport {
  double max_permutation_dev = 0;  // Frobenius
  double max_absorption_dev = 0;
  int permutations_tested = 0;
};

/// For idempotent superoperators e_1..e_k: the omega-limit of their
/// composition is permutation-invariant and absorbs every e_i on both sides.
BistEjReport verify_bist_ej(const std::vector<CMat>& idempotents,
                            std::mt19937_64& rng, int samples = 8,
                            double tol_idem = 1e-6);

// Seeded channel generators (Haar unitaries via QR, orthogonal measurements,
// convex permutation mixtures, and coordinate-projector cuts for the
// sub-bistochastic family).
CMat random_unitary(int dim, std::mt19937_64& rng);
CpMap random_measurement_channel(int dim, std::mt19937_64& rng);
CpMap random_permutation_mixture(int dim, std::mt19937_64& rng, int terms);
CpMap random_bistochastic_channel(int dim, std::mt19937_64& rng);
CpMap random_sub_bistochastic_channel(int dim, std::mt19937_64& rng);

}  // namespace qfa
