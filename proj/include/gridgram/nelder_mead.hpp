#pragma once

#include <cstddef>
#include <functional>

#include "gridgram/linalg.hpp"

namespace gridgram {

struct NelderMeadOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double tol_f = 1e-10;  ///< max |f_best - f_k| over the simplex
    double tol_x = 1e-10;  ///< max |x_best - x_k|_inf over the simplex
    /// 0 selects 400 * dimension.
    std::size_t max_iterations = 0;
    double relative_step = 0.05;  ///< initial simplex offset per coordinate
    double zero_step = 0.00025;   ///< offset used for zero coordinates
};

struct NelderMeadResult {
    Vector x;
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool hit_iteration_cap = false;
};

/// Maximizes `f` with the downhill simplex method (reflection, expansion,
/// outside/inside contraction, shrink). `f` must not throw. If every vertex of
/// the initial simplex has exactly the same value the search stops at x0
/// without iterating.
NelderMeadResult nelder_mead_maximize(const std::function<double(const Vector&)>& f,
                                      const Vector& x0, const NelderMeadOptions& options = {});

}  // namespace gridgram
