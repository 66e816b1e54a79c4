#include "dfem/weights.hpp"

#include <stdexcept>

namespace dfem {

void WeightSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("alpha must lie in (0,2)");
    if (!(epsilon >= 0.0))
        throw std::invalid_argument("epsilon must be nonnegative");
    if (dimension < 2)
        throw std::invalid_argument("dimension must be at least 2");
    if (!(domain_bound > 1.0))
        throw std::invalid_argument("domain_bound m must exceed 1");
    if (epsilon > 0.0 && epsilon >= domain_bound - 1.0)
        throw std::invalid_argument("epsilon must be smaller than the domain radius");
}

WeightSpec WeightSpec::with_epsilon(double eps) const {
    WeightSpec s = *this;
    s.epsilon = eps;
    s.validate();
    return s;
}

double weight_value_radial(const WeightSpec& spec, double r) noexcept {
    r = std::abs(r);
    if (spec.epsilon > 0.0 && r <= spec.epsilon) {
        const double s = 0.75 * r * r + 0.25 * spec.epsilon * spec.epsilon;
        return std::pow(s, 0.5 * spec.alpha);
    }
    return std::pow(r, spec.alpha);
}

double weight_value(const WeightSpec& spec, Vec2 x) noexcept {
    return weight_value_radial(spec, norm(x));
}

Vec2 weight_gradient(const WeightSpec& spec, Vec2 x) {
    const double r2 = norm2(x);
    if (spec.epsilon > 0.0 && r2 <= spec.epsilon * spec.epsilon) {
        const double s = 0.75 * r2 + 0.25 * spec.epsilon * spec.epsilon;
        const double f = spec.alpha * std::pow(s, 0.5 * spec.alpha - 1.0) * 0.75;
        return {f * x.x, f * x.y};
    }
    if (r2 == 0.0) {
        if (spec.alpha > 1.0) return {0.0, 0.0};
        throw std::domain_error(
            "weight_gradient: |x|^alpha has no gradient at the origin for alpha <= 1");
    }
    const double f = spec.alpha * std::pow(std::sqrt(r2), spec.alpha - 2.0);
    return {f * x.x, f * x.y};
}

HardyConstants hardy_constant(const WeightSpec& spec) {
    spec.validate();
    const double denom = spec.dimension - 2.0 + spec.alpha;
    HardyConstants c;
    c.gradient_form = 2.0 / denom;
    c.l2_form = 2.0 * std::pow(spec.domain_bound, 1.0 - 0.5 * spec.alpha) / denom;
    return c;
}

}  // namespace dfem
