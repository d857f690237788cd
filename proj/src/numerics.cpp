#include "randsubst/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace randsubst {

double geom_sum(double x, int i) {
    if (i <= 0) return 0.0;
    if (x == 0.0) return 1.0;
    if (std::abs(x - 1.0) < 1e-8) {
        KahanAccumulator acc;
        double term = 1.0;
        for (int j = 0; j < i; ++j) {
            acc.add(term);
            term *= x;
        }
        return acc.value();
    }
    double log_xi = static_cast<double>(i) * std::log(x);
    if (log_xi > 709.0) return std::numeric_limits<double>::infinity();
    double xi = std::exp(log_xi);
    return x > 1.0 ? (xi - 1.0) / (x - 1.0) : (1.0 - xi) / (1.0 - x);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("bisect: endpoints do not bracket a root");
    for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, double xtol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

SimplexResult nelder_mead_2d(const std::function<double(double, double)>& f,
                             double x0, double y0, double step, double size_tol,
                             long max_evals) {
    struct Vertex {
        double x, y, fv;
    };
    SimplexResult result;
    auto eval = [&](double x, double y) {
        ++result.evaluations;
        return f(x, y);
    };

    std::array<Vertex, 3> s{{{x0, y0, eval(x0, y0)},
                             {x0 + step, y0, eval(x0 + step, y0)},
                             {x0, y0 + step, eval(x0, y0 + step)}}};

    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    while (result.evaluations < max_evals) {
        std::sort(s.begin(), s.end(),
                  [](const Vertex& a, const Vertex& b) { return a.fv < b.fv; });
        double size = std::max(std::hypot(s[1].x - s[0].x, s[1].y - s[0].y),
                               std::hypot(s[2].x - s[0].x, s[2].y - s[0].y));
        if (size < size_tol) {
            result.converged = true;
            break;
        }
        double cx = 0.5 * (s[0].x + s[1].x);
        double cy = 0.5 * (s[0].y + s[1].y);

        double rx = cx + alpha * (cx - s[2].x);
        double ry = cy + alpha * (cy - s[2].y);
        double fr = eval(rx, ry);
        if (fr < s[0].fv) {
            double ex = cx + gamma * (rx - cx);
            double ey = cy + gamma * (ry - cy);
            double fe = eval(ex, ey);
            s[2] = fe < fr ? Vertex{ex, ey, fe} : Vertex{rx, ry, fr};
        } else if (fr < s[1].fv) {
            s[2] = {rx, ry, fr};
        } else {
            double kx = cx + rho * (s[2].x - cx);
            double ky = cy + rho * (s[2].y - cy);
            double fk = eval(kx, ky);
            if (fk < s[2].fv) {
                s[2] = {kx, ky, fk};
            } else {
                for (int j = 1; j < 3; ++j) {
                    s[j].x = s[0].x + sigma * (s[j].x - s[0].x);
                    s[j].y = s[0].y + sigma * (s[j].y - s[0].y);
                    s[j].fv = eval(s[j].x, s[j].y);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(),
              [](const Vertex& a, const Vertex& b) { return a.fv < b.fv; });
    result.x = s[0].x;
    result.y = s[0].y;
    result.value = s[0].fv;
    return result;
}

}  // namespace randsubst
