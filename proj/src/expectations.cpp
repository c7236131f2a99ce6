#include "bussgang/expectations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace bussgang {

namespace {

// QUADPACK qk15 nodes/weights. Odd indices are the embedded Gauss-7 points.
constexpr double kNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0,
};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double resk = kKronrodWeights[7] * fc;
    double resg = kGaussWeights[3] * fc;
    double resabs = std::abs(resk);
    double fv[15];
    fv[7] = fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv[i] = f1;
        fv[14 - i] = f2;
        resk += kKronrodWeights[i] * (f1 + f2);
        if (i % 2 == 1) {
            resg += kGaussWeights[i / 2] * (f1 + f2);
        }
        resabs += kKronrodWeights[i] * (std::abs(f1) + std::abs(f2));
    }
    const double mean = resk * 0.5;
    double resasc = kKronrodWeights[7] * std::abs(fc - mean);
    for (int i = 0; i < 7; ++i) {
        resasc += kKronrodWeights[i] *
                  (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
    }
    resabs *= half;
    resasc *= half;

    Panel p;
    p.a = a;
    p.b = b;
    p.value = resk * half;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(err, 50.0 * eps * resabs);
    }
    p.error = err;
    return p;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo,
                                    double hi, std::span<const double> breakpoints,
                                    const QuadratureSettings& settings) {
    std::vector<double> edges{lo};
    for (double bp : breakpoints) {
        if (bp > lo && bp < hi) {
            edges.push_back(bp);
        }
    }
    edges.push_back(hi);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::priority_queue<Panel> queue;
    double total = 0.0;
    double total_abs = 0.0;
    double total_err = 0.0;
    int panels = 0;
    auto push = [&](const Panel& p) {
        total += p.value;
        total_abs += std::abs(p.value);
        total_err += p.error;
        queue.push(p);
        ++panels;
    };
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        push(evaluate_panel(f, edges[i], edges[i + 1]));
    }

    auto tolerance = [&] {
        return std::max(settings.relative_tolerance *
                            std::max(std::abs(total), 1e-3 * total_abs),
                        std::numeric_limits<double>::min());
    };

    while (total_err > tolerance()) {
        if (panels >= settings.max_panels) {
            throw QuadratureError("quadrature: panel budget exhausted before convergence",
                                  total, total_err);
        }
        const Panel worst = queue.top();
        queue.pop();
        total -= worst.value;
        total_abs -= std::abs(worst.value);
        total_err -= worst.error;
        --panels;
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval at rounding resolution; keep its estimate and move on.
            push(worst);
            break;
        }
        push(evaluate_panel(f, worst.a, mid));
        push(evaluate_panel(f, mid, worst.b));
    }

    QuadratureResult result;
    result.value = total;
    result.error_estimate = total_err;
    result.panels = panels;
    return result;
}

}  // namespace

QuadratureResult gaussian_expect(const std::function<double(double)>& phi, double variance,
                                 std::span<const double> breakpoints,
                                 const QuadratureSettings& settings) {
    if (!(variance > 0.0)) {
        throw std::invalid_argument("gaussian_expect: variance must be positive");
    }
    if (settings.support_multiple < 6.0) {
        throw std::invalid_argument("gaussian_expect: support_multiple must be >= 6");
    }
    const double sigma = std::sqrt(variance);
    const double radius = settings.support_multiple * sigma;
    auto f = [&phi, variance](double y) { return phi(y) * gaussian_pdf(y, variance); };
    // Seed interior edges so the first error estimates see the Gaussian bump.
    std::vector<double> edges(breakpoints.begin(), breakpoints.end());
    for (double e : {-3.0 * sigma, -sigma, 0.0, sigma, 3.0 * sigma}) {
        edges.push_back(e);
    }
    return integrate_adaptive(f, -radius, radius, edges, settings);
}

QuadratureResult mixture_expect(const std::function<double(double)>& phi,
                                const MixtureSpec& mix,
                                std::span<const double> breakpoints,
                                const QuadratureSettings& settings) {
    QuadratureSettings per_component = settings;
    per_component.relative_tolerance =
        settings.relative_tolerance / static_cast<double>(mix.size());
    QuadratureResult total;
    for (std::size_t l = 0; l < mix.size(); ++l) {
        const QuadratureResult r =
            gaussian_expect(phi, mix.variance(l), breakpoints, per_component);
        total.value += mix.weight(l) * r.value;
        total.error_estimate += mix.weight(l) * r.error_estimate;
        total.panels += r.panels;
    }
    return total;
}

}  // namespace bussgang
