#include "suplab/forms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "suplab/errors.hpp"
#include "suplab/quadrature.hpp"
#include "suplab/report.hpp"

namespace suplab {

namespace {

using Wide = __int128;
using Series = std::vector<Wide>;

Series multiply(const Series& a, const Series& b, std::size_t n) {
    Series out(n, 0);
    for (std::size_t i = 0; i < n && i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; i + j < n && j < b.size(); ++j) {
            Wide p;
            if (__builtin_mul_overflow(a[i], b[j], &p) || __builtin_add_overflow(out[i + j], p, &out[i + j]))
                throw ResourceError("q-series coefficient overflows 128 bits");
        }
    }
    return out;
}

Series pow_series(Series base, unsigned e, std::size_t n) {
    Series out(n, 0);
    out[0] = 1;
    while (e > 0) {
        if (e & 1u) out = multiply(out, base, n);
        e >>= 1;
        if (e > 0) base = multiply(base, base, n);
    }
    return out;
}

// prod (1 - q^n) = sum over j in Z of (-1)^j q^{j (3j - 1) / 2}
Series euler_product(std::size_t n) {
    Series p(n, 0);
    for (Int j = 0; j * (3 * j - 1) / 2 < static_cast<Int>(n); ++j) {
        const Wide sign = (j % 2 == 0) ? 1 : -1;
        p[static_cast<std::size_t>(j * (3 * j - 1) / 2)] = sign;
        const Int e = j * (3 * j + 1) / 2;
        if (e < static_cast<Int>(n)) p[static_cast<std::size_t>(e)] = sign;
    }
    return p;
}

std::vector<double> real_product(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; i + j < n; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

std::vector<double> eisenstein(int weight, std::size_t n) {
    const double c = weight == 4 ? 240.0 : -504.0;
    const int p = weight - 1;
    std::vector<double> e(n, 0.0);
    e[0] = 1.0;
    for (std::size_t d = 1; d < n; ++d)
        for (std::size_t m = d; m < n; m += d) e[m] += c * std::pow(static_cast<double>(d), p);
    return e;
}

double fit_growth(const CuspForm& f) {
    double g = 0.0;
    const double half = 0.5 * f.weight();
    for (std::size_t i = 0; i < f.coefficients.size(); ++i) {
        const double x = static_cast<double>(f.first + static_cast<Int>(i)) + f.kappa;
        g = std::max(g, std::abs(f.coefficients[i]) / std::pow(x, half));
    }
    return 2.0 * g;
}

CuspForm make_form(MultiplierSystem sys, std::vector<Complex> coeffs) {
    const double kappa = cusp_parameter(sys, GroupElement::identity(), 1).kappa;
    CuspForm f{std::move(sys), kappa, 1, kappa > 0.0 ? 0 : 1, std::move(coeffs), 1.0, std::nullopt};
    f.growth_constant = fit_growth(f);
    return f;
}

MultiplierSystem same_kind_on(const MultiplierSystem& sys, const Subgroup& group) {
    switch (sys.kind()) {
        case MultiplierSystem::Kind::TrivialEvenWeight: return MultiplierSystem::trivial(sys.weight(), group);
        case MultiplierSystem::Kind::EtaPower: return MultiplierSystem::eta_power(sys.eta_exponent(), group);
        case MultiplierSystem::Kind::Theta: return MultiplierSystem::theta(group);
        case MultiplierSystem::Kind::Custom: break;
    }
    throw DomainError("restrict_to: custom systems cannot be restricted");
}

const MultiplierSystem& reduction_system(const CuspForm& f) { return f.ambient ? *f.ambient : f.system; }

}  // namespace

Complex CuspForm::coefficient(Int m) const {
    const Int i = m - first;
    if (i < 0 || i >= static_cast<Int>(coefficients.size())) return 0.0;
    return coefficients[static_cast<std::size_t>(i)];
}

CuspForm eta_power_form(int r, std::size_t count) {
    if (r < 1) throw DomainError("eta_power_form: r must be >= 1");
    if (count < 1) throw DomainError("eta_power_form: count must be >= 1");
    auto sys = MultiplierSystem::eta_power(2 * r);
    // q^{r/12} prod (1 - q^n)^{2r}; the integer part of r/12 shifts the index
    const Int shift = r / 12;
    const double kappa = cusp_parameter(sys, GroupElement::identity(), 1).kappa;
    const Int first = kappa > 0.0 ? 0 : 1;
    const Int offset = shift - first;  // coefficient index m holds series index m - shift
    const std::size_t n = count + 1;
    const Series p = pow_series(euler_product(n), static_cast<unsigned>(2 * r), n);
    std::vector<Complex> coeffs(count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        const Int s = static_cast<Int>(i) - offset;
        if (s >= 0 && s < static_cast<Int>(n)) coeffs[i] = static_cast<double>(p[static_cast<std::size_t>(s)]);
    }
    return make_form(std::move(sys), std::move(coeffs));
}

CuspForm monomial_form(int a, int b, int c, std::size_t count) {
    if (a < 1 || b < 0 || c < 0) throw DomainError("monomial_form: need a >= 1 and b, c >= 0");
    const std::size_t n = count + 1;
    const CuspForm delta = eta_power_form(12, n);
    std::vector<double> d(n, 0.0);  // Delta as a power series in q
    for (std::size_t m = 1; m < n; ++m) d[m] = delta.coefficient(static_cast<Int>(m)).real();
    std::vector<double> s(n, 0.0);
    s[0] = 1.0;
    for (int i = 0; i < a; ++i) s = real_product(s, d);
    if (b > 0) {
        const auto e4 = eisenstein(4, n);
        for (int i = 0; i < b; ++i) s = real_product(s, e4);
    }
    if (c > 0) {
        const auto e6 = eisenstein(6, n);
        for (int i = 0; i < c; ++i) s = real_product(s, e6);
    }
    std::vector<Complex> coeffs(count);
    for (std::size_t i = 0; i < count; ++i) coeffs[i] = s[i + 1];
    return make_form(MultiplierSystem::trivial(12.0 * a + 4.0 * b + 6.0 * c), std::move(coeffs));
}

CuspForm scaled(const CuspForm& f, Complex s) {
    CuspForm g = f;
    for (auto& c : g.coefficients) c *= s;
    g.growth_constant = f.growth_constant * std::abs(s);
    return g;
}

CuspForm combine(const std::vector<CuspForm>& forms, const std::vector<Complex>& weights) {
    if (forms.empty() || forms.size() != weights.size()) throw DomainError("combine: size mismatch");
    CuspForm out = scaled(forms[0], weights[0]);
    for (std::size_t i = 1; i < forms.size(); ++i) {
        const CuspForm& f = forms[i];
        if (f.weight() != out.weight() || f.kappa != out.kappa || f.width != out.width || f.first != out.first ||
            f.coefficients.size() != out.coefficients.size() || f.group().descriptor() != out.group().descriptor())
            throw DomainError("combine: incompatible expansions");
        for (std::size_t j = 0; j < f.coefficients.size(); ++j) out.coefficients[j] += weights[i] * f.coefficients[j];
    }
    out.growth_constant = fit_growth(out);
    return out;
}

CuspForm restrict_to(const CuspForm& f, const Subgroup& subgroup) {
    auto sys = same_kind_on(f.system, subgroup);
    const Int n = cusp_width(subgroup, GroupElement::identity());
    if (n % f.width != 0) throw DomainError("restrict_to: width at infinity does not refine");
    const Int ratio = n / f.width;
    const double kappa = cusp_parameter(sys, GroupElement::identity(), n).kappa;
    // exponent (m + kappa) / width = (m' + kappa') / n with m' + kappa' = ratio (m + kappa)
    const double shift0 = static_cast<double>(ratio) * f.kappa - kappa;
    const Int shift = static_cast<Int>(std::llround(shift0));
    if (std::abs(shift0 - static_cast<double>(shift)) > 1e-9) throw ConsistencyError("restrict_to: cusp parameters disagree");
    const Int first = kappa > 0.0 ? 0 : 1;
    const Int last = ratio * (f.first + static_cast<Int>(f.coefficients.size()) - 1) + shift;
    std::vector<Complex> coeffs(static_cast<std::size_t>(last - first + 1), 0.0);
    for (std::size_t i = 0; i < f.coefficients.size(); ++i) {
        const Int m = ratio * (f.first + static_cast<Int>(i)) + shift;
        coeffs[static_cast<std::size_t>(m - first)] = f.coefficients[i];
    }
    CuspForm g{std::move(sys), kappa, n, first, std::move(coeffs), 1.0, reduction_system(f)};
    g.growth_constant = f.growth_constant * std::pow(static_cast<double>(ratio), -0.5 * f.weight());
    return g;
}

FormValue eval_form_with_tail(const CuspForm& f, Complex z) {
    if (!(z.imag() > 0.0)) throw DomainError("eval_form: im z must be positive");
    const double n = static_cast<double>(f.width);
    const Complex i2pi(0.0, kTwoPi);
    const Complex step = std::exp(i2pi * z / n);
    Complex e = std::exp(i2pi * (static_cast<double>(f.first) + f.kappa) * z / n);
    Complex s = 0.0;
    for (const Complex& c : f.coefficients) {
        s += c * e;
        e *= step;
    }
    // omitted terms: growth (m + kappa)^{k/2} e^{-beta (m + kappa)}, bounded by a geometric series
    const double a = 0.5 * f.weight();
    const double beta = kTwoPi * z.imag() / n;
    const double x0 = static_cast<double>(f.first + static_cast<Int>(f.coefficients.size())) + f.kappa;
    const double log_rho = a * std::log1p(1.0 / x0) - beta;
    double tail = 0.0;
    if (f.growth_constant > 0.0) {
        if (log_rho >= 0.0) throw AccuracyError("eval_form: truncation tail not summable at this height", std::abs(s), INFINITY);
        tail = f.growth_constant * std::exp(a * std::log(x0) - beta * x0) / -std::expm1(log_rho);
    }
    if (tail > 1e-8 * std::abs(s) && tail > 0.0)
        throw AccuracyError("eval_form: truncation tail too large", std::abs(s), tail);
    return {s, tail};
}

Complex eval_form(const CuspForm& f, Complex z) { return eval_form_with_tail(f, z).value; }

Complex eval_reduced(const CuspForm& f, Complex z) {
    const MultiplierSystem& sys = reduction_system(f);
    const Reduction r = reduce_to_fd(z);
    if (r.gamma == GroupElement::identity() || !sys.group().contains(r.gamma)) return eval_form(f, z);
    return eval_form(f, r.reduced) / automorphy_factor(sys, r.gamma, z);
}

Complex slash(const CuspForm& f, const GroupElement& tau, Complex z) {
    return eval_reduced(f, tau.act(z)) / principal_pow(tau.j(z), f.weight());
}

PeterssonValue petersson_inner(const std::function<Complex(Complex)>& f, const std::function<Complex(Complex)>& g,
                               const Subgroup& group, double k, double tol) {
    FdDomain domain;
    domain.translates = group.right_cosets();
    const double mu = static_cast<double>(group.index());
    const auto q = integrate_fd_complex(
        [&](Complex z) { return f(z) * std::conj(g(z)) * std::pow(z.imag(), k); }, domain, tol * mu);
    return {q.value / mu, q.error / mu};
}

Complex petersson_inner(const CuspForm& f, const CuspForm& g, double tol) {
    if (f.weight() != g.weight()) throw DomainError("petersson_inner: weights differ");
    const auto ef = [&](Complex z) { return eval_reduced(f, z); };
    const auto eg = [&](Complex z) { return eval_reduced(g, z); };
    return petersson_inner(ef, eg, f.group(), f.weight(), tol).value;
}

double petersson_norm(const CuspForm& f, double tol) {
    const double v = petersson_inner(f, f, tol).real();
    if (!(v > 0.0)) throw ConsistencyError("petersson_norm: non-positive norm");
    return v;
}

int cusp_form_dimension(int k) {
    if (k < 0 || k % 2 != 0) return 0;
    int d = 0;
    for (int a = 1; 12 * a <= k; ++a)
        if (k - 12 * a != 2) ++d;
    return d;
}

OrthonormalBasis orthonormal_basis(int k, std::size_t count, double tol) {
    if (k < 12 || k % 2 != 0) throw DomainError("orthonormal_basis: k must be even and >= 12");
    std::vector<CuspForm> raw;
    for (int a = 1; 12 * a <= k; ++a) {
        const int w = k - 12 * a;
        if (w == 2) continue;
        const int c = (w % 4 == 2) ? 1 : 0;
        raw.push_back(monomial_form(a, (w - 6 * c) / 4, c, count));
    }
    const int dim = static_cast<int>(raw.size());
    // rough unit scale: sup of y^{k/2} |f| along x = 0 and x = 1/2
    for (auto& f : raw) {
        double peak = 0.0;
        for (double y = 0.9; y <= 2.0 * k + 4.0; y *= 1.02)
            for (double x : {0.0, 0.5}) {
                const Complex z(x, y);
                peak = std::max(peak, std::abs(eval_form(f, z)) * std::pow(y, 0.5 * k));
            }
        f = scaled(f, 1.0 / peak);
    }
    const int entries = dim * (dim + 1) / 2;
    FdDomain domain;
    const auto q = integrate_fd_vector(
        [&](Complex z, std::span<double> out) {
            std::vector<Complex> v(static_cast<std::size_t>(dim));
            for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] = eval_form(raw[static_cast<std::size_t>(i)], z);
            const double yk = std::pow(z.imag(), k);
            int t = 0;
            for (int i = 0; i < dim; ++i)
                for (int j = i; j < dim; ++j)
                    out[static_cast<std::size_t>(t++)] = (v[static_cast<std::size_t>(i)] * std::conj(v[static_cast<std::size_t>(j)])).real() * yk;
        },
        entries, domain, tol);
    Eigen::MatrixXd gram(dim, dim);
    int t = 0;
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) gram(i, j) = gram(j, i) = q.value[static_cast<std::size_t>(t++)];
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
    const double condition = lo > 0.0 ? hi / lo : INFINITY;
    if (!(condition < 1e12))
        throw ConsistencyError("orthonormal_basis: Gram matrix ill-conditioned, condition number " + std::to_string(condition));
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    // gram = P^T L D L^T P, so B = P^T L^{-T} D^{-1/2} satisfies B^T gram B = I
    Eigen::MatrixXd lt = ldlt.matrixU();
    Eigen::MatrixXd b = lt.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(dim, dim));
    const Eigen::VectorXd dvec = ldlt.vectorD();
    for (int j = 0; j < dim; ++j) b.col(j) /= std::sqrt(dvec(j));
    b = ldlt.transpositionsP().transpose() * b;
    OrthonormalBasis out;
    out.condition = condition;
    for (int j = 0; j < dim; ++j) {
        std::vector<Complex> w(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) w[static_cast<std::size_t>(i)] = b(i, j);
        out.forms.push_back(combine(raw, w));
    }
    out.gram.assign(static_cast<std::size_t>(dim), std::vector<double>(static_cast<std::size_t>(dim)));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out.gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = gram(i, j);
    return out;
}

std::string to_json(const CuspForm& f) {
    std::string coeffs = "[";
    for (std::size_t i = 0; i < f.coefficients.size(); ++i)
        coeffs += (i ? ",[" : "[") + format_double(f.coefficients[i].real()) + "," +
                  format_double(f.coefficients[i].imag()) + "]";
    JsonObject j;
    j.string("group", f.group().descriptor())
        .string("system", f.system.descriptor())
        .number("weight", f.weight())
        .number("kappa", f.kappa)
        .integer("n", f.width)
        .integer("first", f.first);
    if (f.ambient) j.string("ambient", f.ambient->descriptor());
    return j.raw("coefficients", coeffs + "]").str();
}

CuspForm form_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        const Subgroup group = Subgroup::parse(j.at("group").get<std::string>());
        auto sys = MultiplierSystem::parse(j.at("system").get<std::string>(), group);
        if (sys.weight() != j.at("weight").get<double>()) throw DomainError("form_from_json: weight mismatch");
        std::vector<Complex> coeffs;
        for (const auto& v : j.at("coefficients")) coeffs.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
        CuspForm f{std::move(sys), j.at("kappa").get<double>(), j.at("n").get<Int>(),
                   j.value("first", j.at("kappa").get<double>() > 0.0 ? Int{0} : Int{1}), std::move(coeffs), 1.0,
                   std::nullopt};
        if (j.contains("ambient")) f.ambient = MultiplierSystem::parse(j.at("ambient").get<std::string>());
        f.growth_constant = fit_growth(f);
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("form_from_json: ") + e.what());
    }
}

}  // namespace suplab
