#include "nowcast/optimizer.hpp"

#include "nowcast/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace nowcast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Counted {
    const Objective& f;
    const Vector& start;
    int evaluations = 0;
    // Finite evaluations at points other than the start.
    int finite = 0;

    double operator()(const Vector& x) {
        ++evaluations;
        const double v = f(x);
        if (!std::isfinite(v)) return kInf;
        if (x != start) ++finite;
        return v;
    }
};

bool small_improvement(double before, double after, double tol) {
    return (before - after) <= tol * std::max(1.0, std::abs(after));
}

struct SimplexRun {
    Vector best;
    double value;
    int iterations;
    bool converged;
};

SimplexRun run_simplex(Counted& f, const Vector& x0, double f0, const Vector& steps, int budget, double tol,
                       std::vector<TracePoint>& trace) {
    const auto n = x0.size();
    const double dn = static_cast<double>(n);
    // Adaptive coefficients (Gao and Han) behave better than the classic
    // ones once the dimension grows past a handful.
    const double alpha = 1.0;
    const double gamma = 1.0 + 2.0 / dn;
    const double rho = 0.75 - 1.0 / (2.0 * dn);
    const double sigma = 1.0 - 1.0 / dn;

    std::vector<Vector> pts(static_cast<std::size_t>(n + 1), x0);
    std::vector<double> vals(static_cast<std::size_t>(n + 1), f0);
    for (Eigen::Index i = 0; i < n; ++i) {
        pts[static_cast<std::size_t>(i + 1)](i) += steps(i);
        vals[static_cast<std::size_t>(i + 1)] = f(pts[static_cast<std::size_t>(i + 1)]);
    }

    std::vector<std::size_t> order(pts.size());
    int it = 0;
    bool converged = false;
    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[order.size() - 2];
        if (std::isfinite(vals[worst]) && small_improvement(vals[worst], vals[best], tol)) {
            converged = true;
            break;
        }
        if (it >= budget) break;
        ++it;

        Vector centroid = Vector::Zero(n);
        for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += pts[order[i]];
        centroid /= dn;

        const Vector xr = centroid + alpha * (centroid - pts[worst]);
        const double fr = f(xr);
        if (fr < vals[best]) {
            const Vector xe = centroid + gamma * (xr - centroid);
            const double fe = f(xe);
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
        } else if (fr < vals[second]) {
            pts[worst] = xr;
            vals[worst] = fr;
        } else {
            const bool outside = fr < vals[worst];
            const Vector xc = outside ? Vector(centroid + rho * (xr - centroid))
                                      : Vector(centroid + rho * (pts[worst] - centroid));
            const double fc = f(xc);
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = xc;
                vals[worst] = fc;
            } else {
                for (std::size_t i = 1; i < order.size(); ++i) {
                    auto& p = pts[order[i]];
                    p = pts[best] + sigma * (p - pts[best]);
                    vals[order[i]] = f(p);
                }
            }
        }
        const auto b = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
        trace.push_back(TracePoint{pts[b], vals[b]});
    }
    const auto b = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    return SimplexRun{pts[b], vals[b], it, converged};
}

}  // namespace

OptimizerResult nelder_mead(const Objective& objective, const Vector& x0, const OptimizerOptions& options) {
    Counted f{objective, x0};
    OptimizerResult result;
    const double f0 = f(x0);
    if (!std::isfinite(f0)) throw InitializationError("objective is not finite at the starting point");

    std::mt19937_64 rng(options.seed);
    std::bernoulli_distribution coin(0.5);

    Vector x = x0;
    double fx = f0;
    Vector steps = Vector::Constant(x0.size(), options.initial_step);
    int used = 0;
    bool converged = false;
    for (int restart = 0; restart <= options.max_restarts; ++restart) {
        const double before = fx;
        const SimplexRun run = run_simplex(f, x, fx, steps, options.max_iterations - used, options.tolerance,
                                           result.trace);
        used += run.iterations;
        if (run.value <= fx) {
            x = run.best;
            fx = run.value;
        }
        converged = run.converged;
        if (!converged || used >= options.max_iterations) break;
        if (restart > 0 && small_improvement(before, fx, options.tolerance)) break;
        const double scale = options.initial_step * std::pow(0.5, restart + 1);
        for (Eigen::Index i = 0; i < steps.size(); ++i) steps(i) = coin(rng) ? scale : -scale;
    }
    if (f.finite == 0 && f.evaluations > 1) {
        throw OptimizerError("no trial point besides the start produced a finite objective");
    }
    result.x = x;
    result.value = fx;
    result.iterations = used;
    result.evaluations = f.evaluations;
    result.converged = converged;
    return result;
}

Vector numerical_gradient(const Objective& f, const Vector& x, double relative_step) {
    Vector g(x.size());
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = relative_step * std::max(1.0, std::abs(x(i)));
        probe(i) = x(i) + h;
        const double up = f(probe);
        probe(i) = x(i) - h;
        const double down = f(probe);
        probe(i) = x(i);
        g(i) = (up - down) / (2.0 * h);
    }
    return g;
}

Matrix numerical_hessian(const Objective& f, const Vector& x, double relative_step) {
    const auto n = x.size();
    Vector h(n);
    for (Eigen::Index i = 0; i < n; ++i) h(i) = relative_step * std::max(1.0, std::abs(x(i)));
    const double f0 = f(x);
    Matrix hess(n, n);
    Vector p = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        p(i) = x(i) + h(i);
        const double up = f(p);
        p(i) = x(i) - h(i);
        const double down = f(p);
        p(i) = x(i);
        hess(i, i) = (up - 2.0 * f0 + down) / (h(i) * h(i));
        for (Eigen::Index j = 0; j < i; ++j) {
            p(i) = x(i) + h(i);
            p(j) = x(j) + h(j);
            const double pp = f(p);
            p(j) = x(j) - h(j);
            const double pm = f(p);
            p(i) = x(i) - h(i);
            const double mm = f(p);
            p(j) = x(j) + h(j);
            const double mp = f(p);
            p(i) = x(i);
            p(j) = x(j);
            hess(i, j) = hess(j, i) = (pp - pm - mp + mm) / (4.0 * h(i) * h(j));
        }
    }
    return hess;
}

OptimizerResult quasi_newton(const Objective& objective, const Vector& x0, const OptimizerOptions& options) {
    Counted f{objective, x0};
    const Objective counted = [&](const Vector& v) { return f(v); };
    OptimizerResult result;
    Vector x = x0;
    double fx = f(x);
    if (!std::isfinite(fx)) throw InitializationError("objective is not finite at the starting point");

    const auto n = x.size();
    Matrix inv_h = Matrix::Identity(n, n);
    Vector g = numerical_gradient(counted, x);
    if (!g.allFinite()) throw OptimizerError("finite-difference gradient is not finite at the starting point");

    bool converged = false;
    int it = 0;
    while (it < options.max_iterations) {
        ++it;
        Vector dir = -inv_h * g;
        if (dir.dot(g) >= 0.0) {
            inv_h.setIdentity();
            dir = -g;
        }
        double step = 1.0;
        double f_new = kInf;
        Vector x_new = x;
        const double slope = dir.dot(g);
        for (int k = 0; k < 50; ++k) {
            x_new = x + step * dir;
            f_new = f(x_new);
            if (f_new <= fx + 1e-4 * step * slope) break;
            step *= 0.5;
        }
        if (!(f_new < fx)) {
            // No descent along the quasi-Newton direction: treat as stationary.
            converged = g.norm() <= 1e-3 * std::max(1.0, std::abs(fx)) || inv_h.isIdentity();
            break;
        }
        const double before = fx;
        const Vector g_new = numerical_gradient(counted, x_new);
        const Vector s = x_new - x;
        const Vector y = g_new - g;
        x = x_new;
        fx = f_new;
        g = g_new;
        result.trace.push_back(TracePoint{x, fx});
        const double sy = s.dot(y);
        if (sy > 1e-12) {
            const double r = 1.0 / sy;
            const Matrix ident = Matrix::Identity(n, n);
            inv_h = (ident - r * s * y.transpose()) * inv_h * (ident - r * y * s.transpose()) + r * s * s.transpose();
        }
        if (small_improvement(before, fx, options.tolerance)) {
            converged = true;
            break;
        }
    }
    result.x = x;
    result.value = fx;
    result.iterations = it;
    result.evaluations = f.evaluations;
    result.converged = converged;
    return result;
}

}  // namespace nowcast
