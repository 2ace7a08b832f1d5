#pragma once

#include <functional>

namespace phasecrit {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
    bool converged = false;
};

// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
// Panels are bisected until the local error estimate fits into the
// proportional share of abs_tol; integrands with interior kinks
// (dispersion zeros at the critical coupling) just cost more panels.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double abs_tol = 1e-10,
                                    int max_panels = 1 << 14);

}  // namespace phasecrit
