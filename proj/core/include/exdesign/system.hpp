#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "exdesign/linalg.hpp"

namespace exdesign {

/// Discrete-time LTI plant x(t+1) = A x(t) + B u(t).
struct LtiSystem {
  Eigen::MatrixXd A;  // n x n
  Eigen::MatrixXd B;  // n x m

  LtiSystem(Eigen::MatrixXd A_in, Eigen::MatrixXd B_in);

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
};

enum class SystemClass { Controllable, StabilizableNotControllable, NotStabilizable };

std::string to_string(SystemClass cls);

/// Runs the recursion x(t+1) = A x(t) + B u(t) and returns all T+1 states.
std::vector<Eigen::VectorXd> simulate(const LtiSystem& sys,
                                      const Eigen::VectorXd& x0,
                                      const std::vector<Eigen::VectorXd>& inputs);

/// Image of the n-block matrix [G, AG, ..., A^{n-1} G].
Subspace reachable_subspace(const Eigen::MatrixXd& A, const Eigen::MatrixXd& G);

/// Eigenvalue rank tests: the pair passes at eigenvalue lambda iff
/// rank [A - lambda I, B] = n. Controllability checks every eigenvalue;
/// stabilizability checks eigenvalues with |lambda| >= 1 - 1e-9 (moduli inside
/// that band count as on the unit circle). rel_rank_tol, when given, replaces
/// the default rank threshold by rel_rank_tol * sigma_max of each test matrix;
/// pairs assembled from measured data carry errors far above machine epsilon
/// and need that floor.
bool is_controllable_pair(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          std::optional<double> rel_rank_tol = std::nullopt);
bool is_stabilizable_pair(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          std::optional<double> rel_rank_tol = std::nullopt);

SystemClass classify(const LtiSystem& sys);

/// Deterministic generator of a system in the requested class. Throws when no
/// such system exists at the requested dimensions (e.g. a stabilizable but
/// uncontrollable system needs n >= 2).
LtiSystem random_system(SystemClass cls, int n, int m, std::uint64_t seed);

/// An initial state x0 whose extended reachable subspace R(A, [B x0]) is a
/// proper subspace of R^n, when one exists; nullopt for controllable systems.
std::optional<Eigen::VectorXd> adversarial_initial_state(const LtiSystem& sys,
                                                         std::uint64_t seed);

}  // namespace exdesign
