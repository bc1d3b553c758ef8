#include "exdesign/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace exdesign {

namespace {

double tol_scale() {
  static const double scale = [] {
    if (const char* env = std::getenv("EXDESIGN_TOL_SCALE")) {
      const double s = std::atof(env);
      if (s > 0.0) return s;
    }
    return 1.0;
  }();
  return scale;
}

template <typename Matrix>
RankReport rank_from_svd(const Matrix& M, std::optional<double> tol) {
  Eigen::JacobiSVD<Matrix> svd(M);
  const Eigen::VectorXd sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  RankReport report;
  report.singular_values = sv;
  report.tol_used = tol ? *tol : default_rank_tol(M.rows(), M.cols(), sigma_max);
  report.rank = static_cast<int>((sv.array() > report.tol_used).count());
  return report;
}

// Two passes of modified Gram-Schmidt. SVD bases are orthonormal only to a
// few machine epsilon per entry; this tightens them below the Subspace
// constructor bound without moving the span.
Eigen::MatrixXd reorthonormalize(Eigen::MatrixXd basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i)
        basis.col(j) -= basis.col(i).dot(basis.col(j)) * basis.col(i);
      const double norm = basis.col(j).norm();
      if (norm > 0.0) basis.col(j) /= norm;
    }
  return basis;
}

}  // namespace

double default_rank_tol(Eigen::Index rows, Eigen::Index cols, double sigma_max) {
  const double dim = static_cast<double>(std::max(rows, cols));
  return tol_scale() * dim * std::numeric_limits<double>::epsilon() * sigma_max;
}

RankReport numerical_rank(const Eigen::MatrixXd& M, std::optional<double> tol) {
  if (M.size() == 0) throw std::invalid_argument("numerical_rank: empty matrix");
  return rank_from_svd(M, tol);
}

RankReport numerical_rank(const Eigen::MatrixXcd& M, std::optional<double> tol) {
  if (M.size() == 0) throw std::invalid_argument("numerical_rank: empty matrix");
  return rank_from_svd(M, tol);
}

Eigen::MatrixXd stack_columns(const std::vector<Eigen::VectorXd>& vectors) {
  if (vectors.empty()) return Eigen::MatrixXd(0, 0);
  const Eigen::Index rows = vectors.front().size();
  Eigen::MatrixXd M(rows, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != rows)
      throw std::invalid_argument("stack_columns: inconsistent vector sizes");
    M.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return M;
}

Eigen::MatrixXd hankel(const std::vector<Eigen::VectorXd>& signal, int depth) {
  if (signal.empty()) throw std::invalid_argument("hankel: empty signal");
  const int T = static_cast<int>(signal.size());
  const int m = static_cast<int>(signal.front().size());
  if (depth < 1 || depth > T)
    throw std::invalid_argument("hankel: depth " + std::to_string(depth) +
                                " outside [1, " + std::to_string(T) + "]");
  const int cols = T - depth + 1;
  Eigen::MatrixXd H(static_cast<Eigen::Index>(depth) * m, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < depth; ++i) {
      if (signal[j + i].size() != m)
        throw std::invalid_argument("hankel: inconsistent signal dimensions");
      H.block(static_cast<Eigen::Index>(i) * m, j, m, 1) = signal[j + i];
    }
  return H;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& M, std::optional<double> tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = tol ? *tol : default_rank_tol(M.rows(), M.cols(), sigma_max);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double spectral_radius(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols())
    throw std::invalid_argument("spectral_radius: matrix must be square");
  if (M.rows() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> eig(M, /*computeEigenvectors=*/false);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_schur(const Eigen::MatrixXd& M, double margin) {
  return spectral_radius(M) < 1.0 - margin;
}

std::vector<Eigen::VectorXd> left_kernel_basis(const Eigen::MatrixXd& M,
                                               std::optional<double> tol) {
  if (M.size() == 0) throw std::invalid_argument("left_kernel_basis: empty matrix");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU);
  const Eigen::VectorXd sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = tol ? *tol : default_rank_tol(M.rows(), M.cols(), sigma_max);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;
  std::vector<Eigen::VectorXd> basis;
  for (Eigen::Index i = rank; i < M.rows(); ++i)
    basis.push_back(svd.matrixU().col(i));
  return basis;
}

Subspace::Subspace(Eigen::MatrixXd orthonormal_basis, double tol)
    : basis_(std::move(orthonormal_basis)), tol_(tol) {
  if (tol_ < 0.0) throw std::invalid_argument("Subspace: negative tolerance");
  if (basis_.cols() > basis_.rows())
    throw std::invalid_argument("Subspace: more basis vectors than ambient dimension");
  const Eigen::MatrixXd gram = basis_.transpose() * basis_;
  const Eigen::MatrixXd eye =
      Eigen::MatrixXd::Identity(basis_.cols(), basis_.cols());
  const double bound = 10.0 * std::numeric_limits<double>::epsilon();
  if (basis_.cols() > 0 && (gram - eye).cwiseAbs().maxCoeff() > bound)
    throw std::invalid_argument("Subspace: basis columns are not orthonormal");
}

Subspace Subspace::image(const Eigen::MatrixXd& M, std::optional<double> tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU);
  const Eigen::VectorXd sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = tol ? *tol : default_rank_tol(M.rows(), M.cols(), sigma_max);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;
  return Subspace(reorthonormalize(svd.matrixU().leftCols(rank)), threshold);
}

Subspace Subspace::zero(int ambient_dim) {
  return Subspace(Eigen::MatrixXd(ambient_dim, 0), 0.0);
}

double Subspace::residual(const Eigen::VectorXd& v) const {
  if (v.size() != basis_.rows())
    throw std::invalid_argument("Subspace::residual: ambient dimension mismatch");
  if (basis_.cols() == 0) return v.norm();
  return (v - basis_ * (basis_.transpose() * v)).norm();
}

bool Subspace::contains(const Eigen::VectorXd& v, std::optional<double> tol) const {
  const double threshold = tol ? *tol : std::max(tol_, kContainmentTol);
  return residual(v) <= threshold;
}

bool Subspace::contains(const Subspace& other, std::optional<double> tol) const {
  if (other.ambient_dim() != ambient_dim())
    throw std::invalid_argument("Subspace::contains: ambient dimension mismatch");
  const double threshold =
      tol ? *tol : std::max({tol_, other.tol_, kContainmentTol});
  for (Eigen::Index j = 0; j < other.basis_.cols(); ++j)
    if (residual(other.basis_.col(j)) > threshold) return false;
  return true;
}

bool Subspace::equals(const Subspace& other, std::optional<double> tol) const {
  return dim() == other.dim() && contains(other, tol) && other.contains(*this, tol);
}

Subspace product_with_full_space(const Subspace& s, int extra_dims) {
  if (extra_dims < 0)
    throw std::invalid_argument("product_with_full_space: negative dimension");
  const int n = s.ambient_dim();
  const int r = s.dim();
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n + extra_dims, r + extra_dims);
  basis.topLeftCorner(n, r) = s.basis();
  basis.bottomRightCorner(extra_dims, extra_dims) =
      Eigen::MatrixXd::Identity(extra_dims, extra_dims);
  return Subspace(basis, s.tol());
}

}  // namespace exdesign
