#include "suplab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

#include "suplab/errors.hpp"

namespace suplab {

const GaussRule& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    if (n < 1) throw DomainError("gauss_legendre: order must be positive");

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0, p1 = x;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

namespace {

double gauss_panel(const std::function<double(double)>& f, double a, double b, const GaussRule& rule) {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return s * half;
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                              int max_panels) {
    const GaussRule& rule = gauss_legendre(10);
    struct Panel {
        double a, b, value, error;
        std::size_t id;
    };
    auto make = [&](double lo, double hi, std::size_t id) {
        const double whole = gauss_panel(f, lo, hi, rule);
        const double mid = 0.5 * (lo + hi);
        const double halves = gauss_panel(f, lo, mid, rule) + gauss_panel(f, mid, hi, rule);
        return Panel{lo, hi, halves, std::abs(halves - whole), id};
    };
    auto worse = [](const Panel& p, const Panel& q) { return p.error < q.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse);
    std::size_t next_id = 0;
    heap.push(make(a, b, next_id++));
    double total_error = heap.top().error;
    int panels = 1;
    while (total_error > tol && panels < max_panels) {
        Panel p = heap.top();
        heap.pop();
        total_error -= p.error;
        const double mid = 0.5 * (p.a + p.b);
        Panel l = make(p.a, mid, next_id++), r = make(mid, p.b, next_id++);
        total_error += l.error + r.error;
        heap.push(l);
        heap.push(r);
        ++panels;
    }
    std::vector<Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
    std::vector<double> values;
    values.reserve(all.size());
    double err = 0.0;
    for (const auto& p : all) {
        values.push_back(p.value);
        err += p.error;
    }
    const double v = pairwise_sum(values);
    if (err > tol) throw AccuracyError("integrate_adaptive: panel budget exhausted", v, err);
    return {v, err};
}

QuadResult integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol) {
    const double half = 0.5 * (b - a);
    const double tmax = 4.5;
    auto node_sum = [&](double t) {
        const double u = 0.5 * kPi * std::sinh(t);
        const double ch = std::cosh(u);
        const double w = 0.5 * kPi * std::cosh(t) / (ch * ch);
        // distance to the nearer endpoint without cancellation
        const double x = u < 0 ? a + 2.0 * half / (1.0 + std::exp(-2.0 * u))
                               : b - 2.0 * half / (1.0 + std::exp(2.0 * u));
        if (!(x > a && x < b)) return 0.0;
        return w * f(x);
    };
    double h = 1.0;
    double sum = node_sum(0.0);
    for (int k = 1; k * h <= tmax; ++k) sum += node_sum(k * h) + node_sum(-k * h);
    double estimate = half * h * sum;
    double error = std::numeric_limits<double>::infinity();
    for (int level = 1; level <= 12; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (int k = 1; k * h <= tmax; k += 2) add += node_sum(k * h) + node_sum(-k * h);
        sum += add;
        const double next = half * h * sum;
        error = std::abs(next - estimate);
        estimate = next;
        if (level >= 3 && error <= tol) return {estimate, error};
    }
    throw AccuracyError("integrate_tanh_sinh: no convergence", estimate, error);
}

QuadResult integrate_exp_sinh(const std::function<double(double)>& f, double a, double tol) {
    const double tmax = 4.0;
    auto node_sum = [&](double t) {
        const double e = std::exp(0.5 * kPi * std::sinh(t));
        const double w = 0.5 * kPi * std::cosh(t) * e;
        const double v = f(a + e);
        return v == 0.0 ? 0.0 : w * v;
    };
    double h = 1.0;
    double sum = node_sum(0.0);
    for (int k = 1; k * h <= tmax; ++k) sum += node_sum(k * h) + node_sum(-k * h);
    double estimate = h * sum;
    double error = std::numeric_limits<double>::infinity();
    for (int level = 1; level <= 12; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (int k = 1; k * h <= tmax; k += 2) add += node_sum(k * h) + node_sum(-k * h);
        sum += add;
        const double next = h * sum;
        error = std::abs(next - estimate);
        estimate = next;
        if (level >= 3 && error <= tol) return {estimate, error};
    }
    throw AccuracyError("integrate_exp_sinh: no convergence", estimate, error);
}

// ---------------------------------------------------------------------------
// Fundamental-domain quadrature.
//
// Coordinates: u = 1/y, so dx dy / y^2 = dx du. F_I splits into the rectangle
// |x| <= 1/2, u in [u_lo, 1] and the curved strip |x| <= 1/2, u in [1, 1/sqrt(1-x^2)],
// the latter parametrised by t in [0, 1].

namespace {

constexpr int kCellOrder = 8;

struct Cell {
    bool curved;
    double x0, x1, v0, v1;
    std::size_t id;
    double error;
    std::size_t offset;  // into the value store
};

class FdIntegrator {
public:
    FdIntegrator(const std::function<void(Complex, std::span<double>)>& f, int dim, const FdDomain& domain)
        : f_(f), dim_(dim), domain_(domain), rule_(gauss_legendre(kCellOrder)), scratch_(dim) {}

    // Tensor rule on one cell, accumulated into out[0..dim).
    void rule(bool curved, double x0, double x1, double v0, double v1, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        const double hx = 0.5 * (x1 - x0), mx = 0.5 * (x0 + x1);
        const double hv = 0.5 * (v1 - v0), mv = 0.5 * (v0 + v1);
        for (int i = 0; i < kCellOrder; ++i) {
            const double x = mx + hx * rule_.nodes[i];
            double jac = 1.0, umax = 1.0;
            if (curved) {
                umax = 1.0 / std::sqrt(1.0 - x * x);
                jac = umax - 1.0;
            }
            for (int j = 0; j < kCellOrder; ++j) {
                const double v = mv + hv * rule_.nodes[j];
                const double u = curved ? 1.0 + v * (umax - 1.0) : v;
                if (u <= 0.0) continue;
                const double w = rule_.weights[i] * rule_.weights[j] * hx * hv * jac;
                const Complex z{x, 1.0 / u};
                for (const auto& g : domain_.translates) {
                    f_(g == GroupElement::identity() ? z : g.act(z), scratch_);
                    for (int c = 0; c < dim_; ++c) out[c] += w * scratch_[c];
                }
            }
        }
    }

    // Evaluates a cell at two levels; stores the refined value and returns the error.
    Cell make(bool curved, double x0, double x1, double v0, double v1) {
        std::vector<double> coarse(dim_), fine(dim_, 0.0), part(dim_);
        rule(curved, x0, x1, v0, v1, coarse);
        const double xm = 0.5 * (x0 + x1), vm = 0.5 * (v0 + v1);
        const double xs[3] = {x0, xm, x1}, vs[3] = {v0, vm, v1};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                rule(curved, xs[a], xs[a + 1], vs[b], vs[b + 1], part);
                for (int c = 0; c < dim_; ++c) fine[c] += part[c];
            }
        double err = 0.0;
        for (int c = 0; c < dim_; ++c) err = std::max(err, std::abs(fine[c] - coarse[c]));
        Cell cell{curved, x0, x1, v0, v1, next_id_++, err, store_.size()};
        store_.insert(store_.end(), fine.begin(), fine.end());
        return cell;
    }

    const double* values(const Cell& c) const { return store_.data() + c.offset; }

private:
    const std::function<void(Complex, std::span<double>)>& f_;
    int dim_;
    const FdDomain& domain_;
    const GaussRule& rule_;
    std::vector<double> scratch_;
    std::vector<double> store_;
    std::size_t next_id_ = 0;
};

double cusp_tail(const CuspDecay& d, double height) {
    const double q = d.power - 2.0;
    if (q <= 0.0) return d.amplitude * std::pow(height, q) * std::exp(-d.rate * height) / d.rate;
    const double slack = d.rate - q / height;
    if (slack <= 0.0) return std::numeric_limits<double>::infinity();
    return d.amplitude * std::pow(height, q) * std::exp(-d.rate * height) / slack;
}

}  // namespace

VectorQuadResult integrate_fd_vector(const std::function<void(Complex, std::span<double>)>& f, int dim,
                                     const FdDomain& domain, double tol, int max_cells) {
    if (!(tol > 0)) throw DomainError("integrate_fd: tolerance must be positive");
    if (dim < 1) throw DomainError("integrate_fd: dimension must be positive");
    if (domain.translates.empty()) throw DomainError("integrate_fd: empty translate list");

    double u_lo = 0.0, tail = 0.0;
    if (domain.cusp_decay) {
        const CuspDecay& d = *domain.cusp_decay;
        if (!(d.rate > 0)) throw DomainError("integrate_fd: decay rate must be positive");
        const double per_translate_budget = 0.25 * tol / static_cast<double>(domain.translates.size());
        double height = 2.0;
        while (cusp_tail(d, height) > per_translate_budget && height < 1e6) height *= 1.25;
        tail = cusp_tail(d, height) * static_cast<double>(domain.translates.size());
        u_lo = 1.0 / height;
    }
    const double budget = tol - tail;
    if (!(budget > 0)) throw AccuracyError("integrate_fd: cusp tail exceeds tolerance", 0.0, tail);

    FdIntegrator integ(f, dim, domain);
    auto worse = [](const Cell& a, const Cell& b) { return a.error < b.error; };
    std::priority_queue<Cell, std::vector<Cell>, decltype(worse)> heap(worse);
    double total_error = 0.0;
    auto push = [&](const Cell& c) {
        total_error += c.error;
        heap.push(c);
    };
    for (int i = 0; i < 4; ++i) {
        const double x0 = -0.5 + 0.25 * i, x1 = x0 + 0.25;
        for (int j = 0; j < 4; ++j) {
            const double v0 = u_lo + (1.0 - u_lo) * 0.25 * j, v1 = u_lo + (1.0 - u_lo) * 0.25 * (j + 1);
            push(integ.make(false, x0, x1, v0, v1));
        }
        push(integ.make(true, x0, x1, 0.0, 0.5));
        push(integ.make(true, x0, x1, 0.5, 1.0));
    }
    int cells = static_cast<int>(heap.size());
    while (total_error > budget && cells < max_cells) {
        const Cell c = heap.top();
        heap.pop();
        total_error -= c.error;
        const double xm = 0.5 * (c.x0 + c.x1), vm = 0.5 * (c.v0 + c.v1);
        push(integ.make(c.curved, c.x0, xm, c.v0, vm));
        push(integ.make(c.curved, c.x0, xm, vm, c.v1));
        push(integ.make(c.curved, xm, c.x1, c.v0, vm));
        push(integ.make(c.curved, xm, c.x1, vm, c.v1));
        cells += 3;
    }

    std::vector<Cell> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Cell& a, const Cell& b) { return a.id < b.id; });
    VectorQuadResult out;
    out.value.resize(dim);
    std::vector<double> column(all.size());
    double err = 0.0;
    for (const Cell& c : all) err += c.error;
    for (int comp = 0; comp < dim; ++comp) {
        for (std::size_t i = 0; i < all.size(); ++i) column[i] = integ.values(all[i])[comp];
        out.value[comp] = pairwise_sum(column);
    }
    out.error = err + tail;
    if (err > budget)
        throw AccuracyError("integrate_fd: cell budget exhausted", out.value[0], out.error);
    return out;
}

QuadResult integrate_fd(const std::function<double(Complex)>& f, const FdDomain& domain, double tol) {
    const auto r = integrate_fd_vector([&](Complex z, std::span<double> out) { out[0] = f(z); }, 1, domain, tol);
    return {r.value[0], r.error};
}

ComplexQuadResult integrate_fd_complex(const std::function<Complex(Complex)>& f, const FdDomain& domain,
                                       double tol) {
    const auto r = integrate_fd_vector(
        [&](Complex z, std::span<double> out) {
            const Complex v = f(z);
            out[0] = v.real();
            out[1] = v.imag();
        },
        2, domain, tol);
    return {{r.value[0], r.value[1]}, r.error};
}

}  // namespace suplab
