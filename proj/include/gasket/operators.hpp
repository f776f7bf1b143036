#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gasket/graph.hpp"

namespace gasket {

// Dense symmetric operator with a lazily cached eigendecomposition.
// time_scale_exponent records the 5^m walk-time renormalization.
class SymmetricOperator {
  public:
    SymmetricOperator() = default;
    SymmetricOperator(Eigen::MatrixXd m, int time_scale_exponent);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Eigen::MatrixXd& matrix() const { return mat_; }
    int time_scale_exponent() const { return exponent_; }

    // Ascending eigenvalues / orthonormal eigenvectors (computed on demand).
    const Eigen::VectorXd& eigenvalues() const;
    const Eigen::MatrixXd& eigenvectors() const;

  private:
    void decompose() const;

    Eigen::MatrixXd mat_;
    int exponent_ = 0;
    mutable bool decomposed_ = false;
    mutable Eigen::VectorXd evals_;
    mutable Eigen::MatrixXd evecs_;
};

// L = perturbation * 5^m (D - A). The perturbation factor is a fault-injection
// hook for the selftest negative control; production value is 1.
SymmetricOperator laplacian(const LevelGraph& g, double renorm_perturbation = 1.0);

// Principal submatrix on `keep` (indices into the operator's basis).
SymmetricOperator dirichlet_restrict(const SymmetricOperator& op, const std::vector<int>& keep);

// Spectral power: same eigenvectors, eigenvalues theta -> theta^exponent.
SymmetricOperator fractional_power(const SymmetricOperator& op, double exponent);

// Ascending eigenvalues; k < 0 returns all.
std::vector<double> spectrum(const SymmetricOperator& op, int k = -1);

// Tr exp(-tH) = sum_n exp(-lambda_n t).
double heat_trace(const SymmetricOperator& op, double t);

// Heat kernel with respect to mu: K(t) = W^{-1/2} exp(-tH) W^{-1/2},
// so that sum_x w_x K(t,x,x) = Tr exp(-tH).
Eigen::MatrixXd heat_kernel_mu(const SymmetricOperator& op, const std::vector<double>& weights,
                               double t);

// Single diagonal entry of heat_kernel_mu (cheap: no full matrix assembly).
double heat_kernel_mu_diag(const SymmetricOperator& op, const std::vector<double>& weights,
                           double t, int vertex);

int dense_dim_guardrail();

}  // namespace gasket
