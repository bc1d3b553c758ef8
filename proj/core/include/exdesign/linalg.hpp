#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace exdesign {

/// Singular-value diagnostics attached to every rank decision, so borderline
/// numerical ranks stay auditable.
struct RankReport {
  int rank = 0;
  Eigen::VectorXd singular_values;  // nonincreasing
  double tol_used = 0.0;
};

/// Default rank threshold: max(rows, cols) * machine-epsilon * sigma_max,
/// optionally scaled by the EXDESIGN_TOL_SCALE environment variable.
double default_rank_tol(Eigen::Index rows, Eigen::Index cols, double sigma_max);

/// Per-vector residual threshold used by subspace membership tests when the
/// caller does not pass an explicit tolerance. Basis vectors are unit norm,
/// so this is an absolute floor on the unit scale.
inline constexpr double kContainmentTol = 1e-9;

RankReport numerical_rank(const Eigen::MatrixXd& M,
                          std::optional<double> tol = std::nullopt);
RankReport numerical_rank(const Eigen::MatrixXcd& M,
                          std::optional<double> tol = std::nullopt);

/// Stacks a sequence of equally sized vectors as matrix columns.
Eigen::MatrixXd stack_columns(const std::vector<Eigen::VectorXd>& vectors);

/// Block-Hankel matrix of depth k: column j stacks v(j), v(j+1), ..., v(j+k-1).
/// The result is (k*m) x (T-k+1) for a length-T signal in R^m. Requires k <= T.
Eigen::MatrixXd hankel(const std::vector<Eigen::VectorXd>& signal, int depth);

/// Moore-Penrose pseudo-inverse with singular values below tol treated as zero.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& M,
                               std::optional<double> tol = std::nullopt);

/// Largest eigenvalue modulus of a square matrix.
double spectral_radius(const Eigen::MatrixXd& M);

/// True iff spectral_radius(M) < 1 - margin.
bool is_schur(const Eigen::MatrixXd& M, double margin = 0.0);

/// Orthonormal basis of { v : v^T M = 0 }. Empty when M has full row rank.
std::vector<Eigen::VectorXd> left_kernel_basis(
    const Eigen::MatrixXd& M, std::optional<double> tol = std::nullopt);

/// A subspace of R^n held as an orthonormal basis together with the rank
/// tolerance used at construction.
class Subspace {
 public:
  /// Wraps an existing orthonormal basis. Throws if the columns are not
  /// orthonormal to within 10 * machine-epsilon per entry.
  Subspace(Eigen::MatrixXd orthonormal_basis, double tol);

  /// Numerical column space of M.
  static Subspace image(const Eigen::MatrixXd& M,
                        std::optional<double> tol = std::nullopt);

  static Subspace zero(int ambient_dim);

  int dim() const { return static_cast<int>(basis_.cols()); }
  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  double tol() const { return tol_; }
  const Eigen::MatrixXd& basis() const { return basis_; }

  /// Norm of v minus its orthogonal projection onto this subspace.
  double residual(const Eigen::VectorXd& v) const;

  bool contains(const Eigen::VectorXd& v,
                std::optional<double> tol = std::nullopt) const;
  bool contains(const Subspace& other,
                std::optional<double> tol = std::nullopt) const;
  bool equals(const Subspace& other,
              std::optional<double> tol = std::nullopt) const;

 private:
  Eigen::MatrixXd basis_;  // ambient x r, orthonormal columns
  double tol_ = 0.0;
};

/// The product S x R^k embedded in R^(n+k): basis [[V, 0], [0, I_k]].
Subspace product_with_full_space(const Subspace& s, int extra_dims);

}  // namespace exdesign
