#pragma once

#include "suplab/forms.hpp"
#include "suplab/multiplier.hpp"

namespace suplab {

struct KernelValue {
    Complex value;
    double truncation_radius = 0.0;
    double tail_bound = 0.0;
    double rounding = 0.0;  // bound on accumulated rounding, from the sum of term magnitudes
    std::size_t rows = 0;  // bottom rows (c, d) summed
};

enum class Tolerance { Absolute, Relative };

/// h(z, w) = sum over gamma in the group of ((w + gamma z) / (2i))^{-k} / nu(gamma, z).
/// Rows (c, d) with |cz + d| <= R are summed, each over all of its translates U^t gamma in the
/// group in closed form (Lipschitz summation); R grows until the certified bound on the omitted
/// rows plus the truncated translate series is <= tol (absolute, or relative to |value|).
/// Requires k > 2 and im z, im w > 0. Throws ResourceError when the ball budget is exhausted and,
/// in relative mode, AccuracyError when cancellation between rows exceeds tol |value|.
KernelValue kernel(const MultiplierSystem& sys, Complex z, Complex w, double tol,
                   Tolerance mode = Tolerance::Absolute, std::size_t budget = 5'000'000);

struct ReproduceCheck {
    Complex lhs;  // <f, h(., conj(-w))> by quadrature over the coset translates of F_I
    Complex rhs;  // 8 pi / (mu (k - 1)) f(w)
    double quadrature_error = 0.0;
};

/// The reproducing identity for f in S(Gamma, k, nu); tol is the quadrature tolerance relative to |rhs|.
ReproduceCheck reproduce_check(const CuspForm& f, Complex w, double tol = 1e-6);

struct DiagonalValue {
    double value = 0.0;
    double tail_bound = 0.0;
    double radius = 0.0;
    double imag_residue = 0.0;
    double rounding = 0.0;
};

/// Sum over an orthonormal basis of |(f_j |_k tau)(z)|^2, as
/// mu (k - 1) / (8 pi) h^tau(z, -conj z) on the conjugate group and system. tol is relative.
/// Throws ConsistencyError when the imaginary residue exceeds the tail or the value is negative.
DiagonalValue basis_sum_diag(const MultiplierSystem& sys, const GroupElement& tau, Complex z, double tol = 1e-12);

/// Sum over gamma in SL2(Z) of (y y')^{k/2} / (((x - x') / 2)^2 + ((y + y') / 2)^2)^{k/2} with
/// x' + i y' = gamma z, the absolute majorant of y^k h(z, -conj z). Requires k > 2; tol is relative.
KernelValue majorant_sum(Complex z, double k, double tol = 1e-10, std::size_t budget = 5'000'000);

}  // namespace suplab
