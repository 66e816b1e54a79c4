#pragma once

#include "dfem/geometry.hpp"

namespace dfem {

/// Radial weight |x|^alpha, optionally regularized inside the ball of
/// radius epsilon, where it is replaced by (3/4 |x|^2 + 1/4 eps^2)^(alpha/2).
/// epsilon == 0 selects the exact degenerate weight. The regularized weight
/// is Lipschitz but not C^1: the gradient jumps by a factor 3/4 across
/// |x| = epsilon.
struct WeightSpec {
    double alpha = 1.0;        // exponent, must lie in (0,2)
    double epsilon = 0.0;      // regularization radius, >= 0
    int dimension = 2;
    double domain_bound = 2.0; // m = sup_{x in Omega} |x| + 1

    void validate() const;
    bool regularized() const noexcept { return epsilon > 0.0; }
    WeightSpec with_epsilon(double eps) const;
};

/// Weight value as a function of the radius r = |x|.
/// Ties at r == epsilon resolve to the inner branch (both branches agree).
double weight_value_radial(const WeightSpec& spec, double r) noexcept;

double weight_value(const WeightSpec& spec, Vec2 x) noexcept;

/// Branch-wise gradient. Diagnostic only: the weak form never differentiates
/// the weight. Throws std::domain_error at the origin when epsilon == 0 and
/// alpha <= 1 (no gradient exists there); returns zero for alpha > 1.
Vec2 weight_gradient(const WeightSpec& spec, Vec2 x);

struct HardyConstants {
    double gradient_form; // 2/(N-2+alpha), multiplies the |x|^(alpha-2) mass
    double l2_form;       // 2 m^(1-alpha/2)/(N-2+alpha), multiplies the plain L2 mass
};

HardyConstants hardy_constant(const WeightSpec& spec);

}  // namespace dfem
