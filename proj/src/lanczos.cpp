#include "phasecrit/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace phasecrit {

namespace {

// Deterministic start vectors; no global RNG state so concurrent solves
// cannot observe each other.
double splitmix64_unit(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    x = x ^ (x >> 31);
    return 2.0 * (static_cast<double>(x >> 11) * (1.0 / 9007199254740992.0)) - 1.0;
}

Eigen::VectorXd seeded_vector(Eigen::Index n, std::uint64_t seed) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = splitmix64_unit(seed * 0x100000001b3ULL + static_cast<std::uint64_t>(i));
    }
    return v;
}

// Two-pass classical Gram-Schmidt against the columns of each block.
void orthogonalize(Eigen::VectorXd& w,
                   const std::vector<const Eigen::MatrixXd*>& blocks,
                   const std::vector<int>& counts,
                   Eigen::VectorXd* coeffs_out = nullptr, int coeff_block = -1) {
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const int cols = counts[b];
            if (cols == 0) continue;
            const auto v = blocks[b]->leftCols(cols);
            Eigen::VectorXd proj = v.transpose() * w;
            w.noalias() -= v * proj;
            if (coeffs_out && static_cast<int>(b) == coeff_block) {
                *coeffs_out += proj;
            }
        }
    }
}

struct SingleResult {
    double value = 0.0;
    Eigen::VectorXd vector;
    double residual = 0.0;
    double scale = 1.0;
    int iterations = 0;
    bool converged = false;
};

// Converge the lowest eigenpair of op restricted to the orthogonal
// complement of `locked` (first n_locked columns).
SingleResult lowest_in_complement(const SymmetricOperator& op,
                                  const Eigen::MatrixXd& locked, int n_locked,
                                  const LanczosOptions& opts,
                                  std::uint64_t seed_base) {
    const Eigen::Index n = static_cast<Eigen::Index>(op.dim());
    const int m = std::max(4, std::min<int>(opts.max_subspace, static_cast<int>(n) - n_locked));
    const int keep = std::clamp(opts.keep_on_restart, 1, m - 2);

    Eigen::MatrixXd basis(n, m);
    Eigen::MatrixXd projected = Eigen::MatrixXd::Zero(m, m);
    int j = 0;

    SingleResult result;
    std::uint64_t seed = seed_base;

    auto fresh_vector = [&](int current_cols) {
        Eigen::VectorXd v = seeded_vector(n, seed++);
        std::vector<const Eigen::MatrixXd*> blocks{&locked, &basis};
        std::vector<int> counts{n_locked, current_cols};
        orthogonalize(v, blocks, counts);
        const double nrm = v.norm();
        if (nrm < 1e-12) {
            throw std::runtime_error("lanczos: unable to seed a vector in the complement");
        }
        return Eigen::VectorXd(v / nrm);
    };

    basis.col(0) = fresh_vector(0);
    j = 1;

    Eigen::VectorXd ritz_vector;
    double ritz_value = 0.0;

    while (result.iterations < opts.max_iterations) {
        // Extend the basis until the subspace cap.
        while (j < m && result.iterations < opts.max_iterations) {
            Eigen::VectorXd w = op.apply(basis.col(j - 1));
            ++result.iterations;

            Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(j);
            std::vector<const Eigen::MatrixXd*> blocks{&locked, &basis};
            std::vector<int> counts{n_locked, j};
            orthogonalize(w, blocks, counts, &coeffs, 1);

            projected.col(j - 1).head(j) = coeffs;
            projected.row(j - 1).head(j) = coeffs.transpose();

            const double beta = w.norm();
            if (beta < 1e-13) {
                // Invariant subspace: pad with a fresh direction.
                basis.col(j) = fresh_vector(j);
                projected(j, j - 1) = 0.0;
                projected(j - 1, j) = 0.0;
            } else {
                basis.col(j) = w / beta;
                projected(j, j - 1) = beta;
                projected(j - 1, j) = beta;
            }
            ++j;
        }

        const int dim_used = j - 1;  // columns with complete projections
        if (dim_used < 1) break;

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
            projected.topLeftCorner(dim_used, dim_used));
        const Eigen::VectorXd theta = es.eigenvalues();
        const Eigen::MatrixXd s = es.eigenvectors();

        result.scale = std::max({1.0, std::abs(theta[0]), std::abs(theta[dim_used - 1])});
        const double beta_last = projected(dim_used, dim_used - 1);
        const double resid_est = std::abs(beta_last * s(dim_used - 1, 0));

        ritz_value = theta[0];
        ritz_vector = basis.leftCols(dim_used) * s.col(0);

        if (resid_est <= opts.residual_tol * result.scale ||
            result.iterations >= opts.max_iterations || dim_used >= static_cast<int>(n) - n_locked) {
            result.value = ritz_value;
            result.vector = ritz_vector;
            result.converged = resid_est <= opts.residual_tol * result.scale;
            break;
        }

        // Thick restart: keep the lowest Ritz vectors plus the residual
        // direction; the projected matrix restarts as diag(theta) with
        // the beta couplings in the border row/column.
        const int l = std::min(keep, dim_used - 1);
        Eigen::MatrixXd kept = basis.leftCols(dim_used) * s.leftCols(l);
        Eigen::VectorXd residual_dir = basis.col(dim_used);

        basis.leftCols(l) = kept;
        basis.col(l) = residual_dir;
        projected.setZero();
        for (int i = 0; i < l; ++i) {
            projected(i, i) = theta[i];
            const double coupling = beta_last * s(dim_used - 1, i);
            projected(l, i) = coupling;
            projected(i, l) = coupling;
        }
        j = l + 1;
    }

    if (ritz_vector.size() == 0) {
        throw std::runtime_error("lanczos: no Ritz pair produced");
    }
    if (result.vector.size() == 0) {
        result.value = ritz_value;
        result.vector = ritz_vector;
    }

    result.vector.normalize();
    Eigen::VectorXd hv = op.apply(result.vector);
    result.residual = (hv - result.value * result.vector).norm();
    return result;
}

}  // namespace

LanczosResult lowest_eigenpairs(const SymmetricOperator& op, int k,
                                const LanczosOptions& opts) {
    const Eigen::Index n = static_cast<Eigen::Index>(op.dim());
    if (k < 1 || k > static_cast<int>(n)) {
        throw std::invalid_argument("lowest_eigenpairs: bad pair count");
    }

    LanczosResult out;
    out.values.resize(k);
    out.vectors.resize(n, k);
    out.converged = true;

    Eigen::MatrixXd locked(n, k);
    for (int q = 0; q < k; ++q) {
        SingleResult r = lowest_in_complement(op, locked, q, opts,
                                              0x5eedULL + 7919ULL * static_cast<std::uint64_t>(q));
        if (!r.converged) {
            out.converged = false;
        }
        out.values[q] = r.value;
        locked.col(q) = r.vector;
        out.vectors.col(q) = r.vector;
        out.max_residual = std::max(out.max_residual, r.residual);
        out.spectral_scale = std::max(out.spectral_scale, r.scale);
        out.iterations += r.iterations;
    }

    // Deflated solves can return the cluster slightly out of order.
    std::vector<int> order(k);
    for (int i = 0; i < k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return out.values[a] < out.values[b]; });
    Eigen::VectorXd sorted_vals(k);
    Eigen::MatrixXd sorted_vecs(n, k);
    for (int i = 0; i < k; ++i) {
        sorted_vals[i] = out.values[order[i]];
        sorted_vecs.col(i) = out.vectors.col(order[i]);
    }
    out.values = sorted_vals;
    out.vectors = sorted_vecs;
    return out;
}

}  // namespace phasecrit
