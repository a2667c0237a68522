#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "suplab/multiplier.hpp"

namespace suplab {

/// A cusp form given by its expansion at infinity: f(z) = sum over m >= first of
/// coefficients[m - first] e^{2 pi i (m + kappa) z / width}, with m + kappa > 0.
struct CuspForm {
    MultiplierSystem system;
    double kappa = 0.0;
    Int width = 1;
    Int first = 1;  // 0 if kappa > 0, else 1
    std::vector<Complex> coefficients;
    double growth_constant = 1.0;  // |coefficient(m)| <= growth_constant (m + kappa)^{k/2} on the stored range
    /// Full-group system the form is modular for, when known; used to reduce z into F_I.
    std::optional<MultiplierSystem> ambient;

    double weight() const { return system.weight(); }
    const Subgroup& group() const { return system.group(); }
    std::size_t coeff_count() const { return coefficients.size(); }
    /// Coefficient of index m (0 outside the stored range).
    Complex coefficient(Int m) const;
};

inline constexpr std::size_t kDefaultCoeffCount = 200;

/// eta(z)^{2r}, weight r, multiplier eta:r=2r on the full group.
CuspForm eta_power_form(int r, std::size_t count = kDefaultCoeffCount);

/// Delta^a E4^b E6^c of weight 12a + 4b + 6c on the full group with the trivial system; a >= 1.
CuspForm monomial_form(int a, int b, int c, std::size_t count = kDefaultCoeffCount);

/// s f.
CuspForm scaled(const CuspForm& f, Complex s);

/// Linear combination sum w_i f_i of forms sharing system and expansion data.
CuspForm combine(const std::vector<CuspForm>& forms, const std::vector<Complex>& weights);

/// The same function viewed on a finite-index subgroup of its group, re-expanded in the
/// width of infinity for the subgroup.
CuspForm restrict_to(const CuspForm& f, const Subgroup& subgroup);

struct FormValue {
    Complex value;
    double tail_bound = 0.0;
};

/// Truncated expansion with the omitted terms bounded through growth_constant.
/// Throws AccuracyError when the bound exceeds 1e-8 |partial sum| (or is not summable).
FormValue eval_form_with_tail(const CuspForm& f, Complex z);
Complex eval_form(const CuspForm& f, Complex z);

/// f(z) anywhere in the upper half plane: z is moved into F_I by gamma and, when gamma lies
/// in the group, f(z) = f(gamma z) / nu(gamma, z). Falls back to the expansion otherwise.
Complex eval_reduced(const CuspForm& f, Complex z);

/// (f |_k tau)(z) = j(tau, z)^{-k} f(tau z).
Complex slash(const CuspForm& f, const GroupElement& tau, Complex z);

/// (1 / mu) integral over the union of g_i F_I of f(z) conj(g(z)) y^k dx dy / y^2, where g_i
/// runs over the right cosets of the group.
struct PeterssonValue {
    Complex value;
    double error = 0.0;
};
PeterssonValue petersson_inner(const std::function<Complex(Complex)>& f, const std::function<Complex(Complex)>& g,
                               const Subgroup& group, double k, double tol);

Complex petersson_inner(const CuspForm& f, const CuspForm& g, double tol = 1e-14);
/// <f, f>, strictly positive.
double petersson_norm(const CuspForm& f, double tol = 1e-14);

/// Orthonormal basis of S_k(SL2(Z)) from Delta^a E4^b E6^c monomials (one per a), orthonormalized
/// with a pivoted LDL^T factorization of the quadrature Gram matrix.
struct OrthonormalBasis {
    std::vector<CuspForm> forms;
    std::vector<std::vector<double>> gram;
    double condition = 1.0;
};
OrthonormalBasis orthonormal_basis(int k, std::size_t count = kDefaultCoeffCount, double tol = 1e-13);

/// dim S_k(SL2(Z)) for even k >= 0.
int cusp_form_dimension(int k);

/// {group, system, weight, kappa, n, coefficients[[re, im], ...]}
std::string to_json(const CuspForm& f);
CuspForm form_from_json(std::string_view text);

}  // namespace suplab
