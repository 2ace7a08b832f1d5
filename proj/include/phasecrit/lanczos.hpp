#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace phasecrit {

// Matrix-free symmetric operator.  apply() must be deterministic: the
// sweep layer relies on identical inputs producing bitwise-identical
// eigenvectors regardless of when or on which thread a solve runs.
class SymmetricOperator {
  public:
    virtual ~SymmetricOperator() = default;
    virtual std::size_t dim() const = 0;
    virtual void apply(const double* x, double* y) const = 0;

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        Eigen::VectorXd y(static_cast<Eigen::Index>(dim()));
        apply(x.data(), y.data());
        return y;
    }
};

struct LanczosOptions {
    int max_iterations = 5000;   // total matvec budget across restarts
    double residual_tol = 1e-10; // relative to the spectral scale
    int max_subspace = 64;       // thick-restart basis cap
    int keep_on_restart = 10;    // Ritz vectors carried over a restart
};

struct LanczosResult {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns, orthonormal
    double max_residual = 0.0;
    double spectral_scale = 1.0;
    int iterations = 0;
    bool converged = false;
};

// Lowest k eigenpairs by thick-restart Lanczos with full
// reorthogonalization.  Degenerate levels are resolved by deflation:
// each pair is converged in the orthogonal complement of the previous
// ones, so multiplicity is reported faithfully.
LanczosResult lowest_eigenpairs(const SymmetricOperator& op, int k,
                                const LanczosOptions& opts = {});

}  // namespace phasecrit
