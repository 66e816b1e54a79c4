#pragma once

#include <vector>

#include "dfem/field.hpp"
#include "dfem/quadrature.hpp"
#include "dfem/weights.hpp"

namespace dfem {

/// Per-radius record of the sphere functionals.
struct SphereSample {
    double r = 0.0;
    double H = 0.0;     // ∫_{B_r} w v^2
    double D = 0.0;     // ∫_{B_r} w |grad v|^2 (r^2 - |y|^2)
    double Phi = 0.0;   // D/H, zero when H vanishes
    double R_eps = 0.0; // regularization remainder (zero for epsilon = 0)
};

/// H below this absolute floor counts as zero in the frequency ratio.
inline constexpr double kMassFloor = 1e-30;

struct FunctionalOptions {
    int quad_order = 4;
    int cut_depth = 5;
};

double sphere_mass(const Field& field, const WeightSpec& weight, double r,
                   const FunctionalOptions& opts = {});

double dirichlet_kernel(const Field& field, const WeightSpec& weight, double r,
                        const FunctionalOptions& opts = {});

/// ∫_{B_r} w |grad v|^2 (the r-derivative of D is 2 r times this).
double gradient_energy(const Field& field, const WeightSpec& weight, double r,
                       const FunctionalOptions& opts = {});

double frequency(const Field& field, const WeightSpec& weight, double r,
                 const FunctionalOptions& opts = {});

/// Remainder (alpha/2) eps^2 ∫_{B_eps} (3/4 |y|^2 + eps^2/4)^{alpha/2-1} v^2.
/// Requires epsilon > 0 and the ball B_eps resolved by two node rings.
double remainder(const Field& field, const WeightSpec& weight,
                 const FunctionalOptions& opts = {});

/// LHS/RHS ratios of the four Hardy inequalities; the first pair uses the
/// exact degenerate weight, the second pair the spec's regularization.
/// Requires the field to vanish at every boundary node. Zero field gives
/// zero ratios.
struct HardyReport {
    double ratio_gradient_form = 0.0;     // (N-2+a) ||x^{(a-2)/2} u|| <= 2 ||grad u||_w
    double ratio_l2_form = 0.0;           // ||u|| <= 2 m^{1-a/2}/(N-2+a) ||grad u||_w
    double ratio_reg_gradient_form = 0.0; // (N+a-2) ||w^{1/2-1/a} u|| <= 2 ||u||_{H1_w}
    double ratio_reg_l2_form = 0.0;       // ||u||_w <= 2m/(N+a-2) ||grad u||_w
};

HardyReport hardy_report(const Field& field, const WeightSpec& weight,
                         const FunctionalOptions& opts = {});

std::vector<SphereSample> profile(const Field& field, const WeightSpec& weight,
                                  const std::vector<double>& r_grid,
                                  const FunctionalOptions& opts = {});

}  // namespace dfem
