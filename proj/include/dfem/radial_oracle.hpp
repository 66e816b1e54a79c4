#pragma once

#include <functional>
#include <vector>

#include "dfem/field.hpp"

namespace dfem {

/// Separable solution r^beta * cos(l*theta) of div(|x|^alpha grad u) = 0.
/// beta is the nonnegative root of beta*(beta + N + alpha - 2) = l*(l + N - 2).
struct ModeSolution {
    int dimension = 2;
    double alpha = 1.0;
    int angular_frequency = 0;
    double beta = 0.0;

    static ModeSolution make(int N, double alpha, int l);
};

double indicial_exponent(int N, double alpha, int l);

/// Pointwise mode value (2-D angular factor cos(l*theta)).
double mode_value(const ModeSolution& mode, Vec2 p);

/// Nodal interpolant of the mode on a 2-D mesh.
Field exact_mode_field(const Mesh& mesh, const ModeSolution& mode);

/// Closed forms of the sphere functionals on the homogeneous mode, with the
/// angular normalization A = ∫ Y_l^2 over the unit sphere (2-D: 2*pi for
/// l = 0, pi otherwise; for N >= 3 the zonal factor is normalized to 1, so
/// H and D are only defined up to that factor while Phi is exact).
struct ModeFunctionals {
    double H = 0.0;
    double D = 0.0;
    double Phi = 0.0;
};

ModeFunctionals mode_functionals(const ModeSolution& mode, double r);

/// Conservative three-point solve of the radial reduction
///   (r^{N-1+alpha} u')' - l(l+N-2) r^{N-3+alpha} u = -r^{N-1} f_l(r)
/// on a grid r_j = R0 (j/J)^grading. Regularity at r = 0: zero flux for
/// l = 0 and u(0) = 0 for l >= 1; u(R0) = boundary_value.
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> u;
};

RadialProfile radial_solve_mode(int N, double alpha, int l,
                                const std::function<double(double)>& rhs,
                                double boundary_value, int J, double grading = 4.0,
                                double R0 = 1.0);

}  // namespace dfem
