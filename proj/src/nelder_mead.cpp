#include "gridgram/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gridgram/errors.hpp"

namespace gridgram {

NelderMeadResult nelder_mead_maximize(const std::function<double(const Vector&)>& f,
                                      const Vector& x0, const NelderMeadOptions& options) {
    const Eigen::Index dim = x0.size();
    if (dim < 1 || !x0.allFinite()) {
        throw ArgumentError("nelder_mead_maximize: start point must be finite and non-empty");
    }
    const std::size_t max_iterations =
        options.max_iterations > 0 ? options.max_iterations : 400 * static_cast<std::size_t>(dim);

    NelderMeadResult out;
    // Internally minimize g = -f so the bookkeeping follows the usual
    // ascending ordering.
    auto g = [&](const Vector& x) {
        ++out.evaluations;
        return -f(x);
    };

    std::vector<Vector> vertex(static_cast<std::size_t>(dim) + 1, x0);
    std::vector<double> value(vertex.size());
    value[0] = g(x0);
    for (Eigen::Index k = 0; k < dim; ++k) {
        Vector& v = vertex[static_cast<std::size_t>(k) + 1];
        v(k) = x0(k) != 0.0 ? (1.0 + options.relative_step) * x0(k) : options.zero_step;
        value[static_cast<std::size_t>(k) + 1] = g(v);
    }

    std::vector<std::size_t> order(vertex.size());
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
        std::vector<Vector> v2;
        std::vector<double> f2;
        v2.reserve(order.size());
        f2.reserve(order.size());
        for (std::size_t k : order) {
            v2.push_back(std::move(vertex[k]));
            f2.push_back(value[k]);
        }
        vertex = std::move(v2);
        value = std::move(f2);
    };
    sort_simplex();

    const bool flat = std::all_of(value.begin(), value.end(),
                                  [&](double v) { return v == value.front(); });
    if (flat) {
        out.x = x0;
        out.value = -value.front();
        return out;
    }

    const std::size_t last = vertex.size() - 1;
    while (true) {
        double f_spread = 0.0;
        double x_spread = 0.0;
        for (std::size_t k = 1; k <= last; ++k) {
            f_spread = std::max(f_spread, std::abs(value[k] - value[0]));
            x_spread = std::max(x_spread, (vertex[k] - vertex[0]).cwiseAbs().maxCoeff());
        }
        if (f_spread <= options.tol_f && x_spread <= options.tol_x) {
            break;
        }
        if (out.iterations >= max_iterations) {
            out.hit_iteration_cap = true;
            break;
        }
        ++out.iterations;

        Vector centroid = Vector::Zero(dim);
        for (std::size_t k = 0; k < last; ++k) {
            centroid += vertex[k];
        }
        centroid /= static_cast<double>(last);

        const Vector reflected = centroid + options.reflection * (centroid - vertex[last]);
        const double f_reflected = g(reflected);
        bool do_shrink = false;
        if (f_reflected < value[0]) {
            const Vector expanded =
                centroid + options.reflection * options.expansion * (centroid - vertex[last]);
            const double f_expanded = g(expanded);
            if (f_expanded < f_reflected) {
                vertex[last] = expanded;
                value[last] = f_expanded;
            } else {
                vertex[last] = reflected;
                value[last] = f_reflected;
            }
        } else if (f_reflected < value[last - 1]) {
            vertex[last] = reflected;
            value[last] = f_reflected;
        } else if (f_reflected < value[last]) {
            const Vector outside = centroid + options.contraction * (reflected - centroid);
            const double f_outside = g(outside);
            if (f_outside <= f_reflected) {
                vertex[last] = outside;
                value[last] = f_outside;
            } else {
                do_shrink = true;
            }
        } else {
            const Vector inside = centroid + options.contraction * (vertex[last] - centroid);
            const double f_inside = g(inside);
            if (f_inside < value[last]) {
                vertex[last] = inside;
                value[last] = f_inside;
            } else {
                do_shrink = true;
            }
        }
        if (do_shrink) {
            for (std::size_t k = 1; k <= last; ++k) {
                vertex[k] = vertex[0] + options.shrink * (vertex[k] - vertex[0]);
                value[k] = g(vertex[k]);
            }
        }
        sort_simplex();
    }

    out.x = vertex[0];
    out.value = -value[0];
    return out;
}

}  // namespace gridgram
