#include "gasket/operators.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "gasket/errors.hpp"

namespace gasket {

int dense_dim_guardrail() {
    if (const char* v = std::getenv("GASKETLAB_MAX_DIM")) return std::atoi(v);
    return 4000;
}

SymmetricOperator::SymmetricOperator(Eigen::MatrixXd m, int time_scale_exponent)
    : mat_(std::move(m)), exponent_(time_scale_exponent) {
    if (mat_.rows() != mat_.cols()) throw DomainError("SymmetricOperator: non-square matrix");
    double asym = (mat_ - mat_.transpose()).cwiseAbs().maxCoeff();
    if (mat_.rows() > 0 && asym > 1e-12 * (1.0 + mat_.cwiseAbs().maxCoeff()))
        throw NumericError("SymmetricOperator: symmetry violation " + std::to_string(asym));
}

void SymmetricOperator::decompose() const {
    if (decomposed_) return;
    if (dim() > dense_dim_guardrail())
        throw ResourceError("eigendecomposition guardrail: dim=" + std::to_string(dim()) +
                            " > " + std::to_string(dense_dim_guardrail()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat_);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigensolver failed: dim=" + std::to_string(dim()) +
                           " frobenius=" + std::to_string(mat_.norm()));
    evals_ = solver.eigenvalues();
    evecs_ = solver.eigenvectors();
    decomposed_ = true;
}

const Eigen::VectorXd& SymmetricOperator::eigenvalues() const {
    decompose();
    return evals_;
}

const Eigen::MatrixXd& SymmetricOperator::eigenvectors() const {
    decompose();
    return evecs_;
}

SymmetricOperator laplacian(const LevelGraph& g, double renorm_perturbation) {
    const int n = static_cast<int>(g.vertices.size());
    if (n > dense_dim_guardrail())
        throw ResourceError("laplacian: dense guardrail exceeded, n=" + std::to_string(n));
    // Walk-dimension renormalization 5^(resolution depth); resolution depth is
    // m - M, the number of subdivisions below the unit-cell scale.
    const double scale = renorm_perturbation * std::pow(5.0, g.depth - g.blowup);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges) {
        L(e[0], e[1]) -= scale;
        L(e[1], e[0]) -= scale;
        L(e[0], e[0]) += scale;
        L(e[1], e[1]) += scale;
    }
    return SymmetricOperator(std::move(L), g.depth - g.blowup);
}

SymmetricOperator dirichlet_restrict(const SymmetricOperator& op, const std::vector<int>& keep) {
    if (keep.empty())
        throw DomainError("dirichlet_restrict: empty keep set (spectrum would be empty)");
    const int k = static_cast<int>(keep.size());
    for (int i : keep)
        if (i < 0 || i >= op.dim()) throw DomainError("dirichlet_restrict: index out of range");
    Eigen::MatrixXd sub(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            sub(i, j) = op.matrix()(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
    return SymmetricOperator(std::move(sub), op.time_scale_exponent());
}

SymmetricOperator fractional_power(const SymmetricOperator& op, double exponent) {
    if (!(exponent > 0.0 && exponent < 1.0))
        throw DomainError("fractional_power: exponent must lie in (0,1)");
    const Eigen::VectorXd& ev = op.eigenvalues();
    if (op.dim() > 0 && ev(0) < -1e-10)
        throw NumericError("fractional_power: negative eigenvalue " + std::to_string(ev(0)));
    Eigen::VectorXd powered(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        powered(i) = ev(i) <= 0.0 ? 0.0 : std::pow(ev(i), exponent);
    const Eigen::MatrixXd& V = op.eigenvectors();
    Eigen::MatrixXd out = V * powered.asDiagonal() * V.transpose();
    out = 0.5 * (out + out.transpose().eval());  // kill rounding asymmetry
    return SymmetricOperator(std::move(out), op.time_scale_exponent());
}

std::vector<double> spectrum(const SymmetricOperator& op, int k) {
    const Eigen::VectorXd& ev = op.eigenvalues();
    int n = static_cast<int>(ev.size());
    int take = (k < 0 || k > n) ? n : k;
    return std::vector<double>(ev.data(), ev.data() + take);
}

double heat_trace(const SymmetricOperator& op, double t) {
    if (!(t > 0.0)) throw DomainError("heat_trace: t must be positive");
    const Eigen::VectorXd& ev = op.eigenvalues();
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) s += std::exp(-ev(i) * t);
    return s;
}

Eigen::MatrixXd heat_kernel_mu(const SymmetricOperator& op, const std::vector<double>& weights,
                               double t) {
    if (!(t > 0.0)) throw DomainError("heat_kernel_mu: t must be positive");
    if (static_cast<int>(weights.size()) != op.dim())
        throw DomainError("heat_kernel_mu: weight/operator dimension mismatch");
    const Eigen::VectorXd& ev = op.eigenvalues();
    const Eigen::MatrixXd& V = op.eigenvectors();
    Eigen::VectorXd decay = (-t * ev.array()).exp();
    Eigen::MatrixXd K = V * decay.asDiagonal() * V.transpose();
    for (int i = 0; i < op.dim(); ++i) {
        double wi = std::sqrt(weights[static_cast<std::size_t>(i)]);
        K.row(i) /= wi;
        K.col(i) /= wi;
    }
    return K;
}

double heat_kernel_mu_diag(const SymmetricOperator& op, const std::vector<double>& weights,
                           double t, int vertex) {
    if (!(t > 0.0)) throw DomainError("heat_kernel_mu_diag: t must be positive");
    if (vertex < 0 || vertex >= op.dim()) throw DomainError("heat_kernel_mu_diag: bad vertex");
    const Eigen::VectorXd& ev = op.eigenvalues();
    const Eigen::MatrixXd& V = op.eigenvectors();
    double s = 0.0;
    for (Eigen::Index n = 0; n < ev.size(); ++n)
        s += std::exp(-t * ev(n)) * V(vertex, n) * V(vertex, n);
    return s / weights[static_cast<std::size_t>(vertex)];
}

}  // namespace gasket
