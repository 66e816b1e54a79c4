#include "dfem/radial_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace dfem {

double indicial_exponent(int N, double alpha, int l) {
    if (N < 2) throw std::invalid_argument("indicial_exponent: N must be at least 2");
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("alpha must lie in (0,2)");
    if (l < 0) throw std::invalid_argument("indicial_exponent: l must be nonnegative");
    const double p = N + alpha - 2.0;
    const double q = static_cast<double>(l) * (l + N - 2.0);
    return 0.5 * (-p + std::sqrt(p * p + 4.0 * q));
}

ModeSolution ModeSolution::make(int N, double alpha, int l) {
    ModeSolution m;
    m.dimension = N;
    m.alpha = alpha;
    m.angular_frequency = l;
    m.beta = indicial_exponent(N, alpha, l);
    return m;
}

double mode_value(const ModeSolution& mode, Vec2 p) {
    const double r = norm(p);
    if (mode.angular_frequency == 0) return 1.0; // beta = 0, constant mode
    if (r == 0.0) return 0.0;
    const double theta = std::atan2(p.y, p.x);
    return std::pow(r, mode.beta) * std::cos(mode.angular_frequency * theta);
}

Field exact_mode_field(const Mesh& mesh, const ModeSolution& mode) {
    if (mode.dimension != 2)
        throw std::invalid_argument("exact_mode_field: mesh interpolation is 2-D only");
    return make_field(mesh, [&mode](Vec2 p) { return mode_value(mode, p); });
}

ModeFunctionals mode_functionals(const ModeSolution& mode, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("mode_functionals: r must be positive");
    const int N = mode.dimension;
    const int l = mode.angular_frequency;
    const double A = (N == 2) ? (l == 0 ? kTwoPi : kPi) : 1.0;
    const double p = N + mode.alpha + 2.0 * mode.beta;
    const double lambda = mode.beta * mode.beta + static_cast<double>(l) * (l + N - 2.0);
    ModeFunctionals f;
    f.H = A * std::pow(r, p) / p;
    f.D = 2.0 * A * lambda * std::pow(r, p) / ((p - 2.0) * p);
    f.Phi = (f.H > 0.0) ? f.D / f.H : 0.0;
    return f;
}

RadialProfile radial_solve_mode(int N, double alpha, int l,
                                const std::function<double(double)>& rhs,
                                double boundary_value, int J, double grading, double R0) {
    if (J < 16) throw std::invalid_argument("radial_solve_mode: J must be at least 16");
    if (!(grading >= 1.0))
        throw std::invalid_argument("radial_solve_mode: grading must be >= 1");
    if (!(R0 > 0.0)) throw std::invalid_argument("radial_solve_mode: R0 must be positive");
    if (N < 2 || l < 0 || !(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("radial_solve_mode: invalid parameters");

    RadialProfile out;
    out.r.resize(J + 1);
    for (int j = 0; j <= J; ++j)
        out.r[j] = R0 * std::pow(static_cast<double>(j) / J, grading);
    out.u.assign(J + 1, 0.0);

    const double angular = static_cast<double>(l) * (l + N - 2.0);
    const double flux_exp = N - 1.0 + alpha; // coefficient r^{N-1+alpha}
    const double mass_exp = N - 3.0 + alpha; // zeroth-order coefficient exponent

    // Cell-integrated power of r over [a,b]; the exponent stays > -1 here.
    auto power_integral = [](double a, double b, double e) {
        return (std::pow(b, e + 1.0) - std::pow(a, e + 1.0)) / (e + 1.0);
    };
    // Two-point Gauss for the source integral ∫ r^{N-1} f dr on [a,b].
    auto source_integral = [&](double a, double b) {
        if (!rhs) return 0.0;
        const double m = 0.5 * (a + b), h = 0.5 * (b - a);
        const double g = h / std::sqrt(3.0);
        const double r1 = m - g, r2 = m + g;
        return h * (std::pow(r1, N - 1.0) * rhs(r1) + std::pow(r2, N - 1.0) * rhs(r2));
    };

    // Unknowns u_jlo..u_{J-1}; u_J fixed, u_0 fixed to 0 for l >= 1.
    const int jlo = (l == 0) ? 0 : 1;
    const int n = J - jlo;
    if (n <= 0) throw std::runtime_error("radial_solve_mode: grid too small");

    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhsv(n, 0.0);
    auto flux_coeff = [&](int j) { // between nodes j and j+1
        const double mid = 0.5 * (out.r[j] + out.r[j + 1]);
        return std::pow(mid, flux_exp) / (out.r[j + 1] - out.r[j]);
    };

    for (int j = jlo; j < J; ++j) {
        const int row = j - jlo;
        const double cell_lo = (j == 0) ? 0.0 : 0.5 * (out.r[j - 1] + out.r[j]);
        const double cell_hi = 0.5 * (out.r[j] + out.r[j + 1]);
        const double kp = flux_coeff(j);
        diag[row] += kp;
        if (j + 1 < J)
            upper[row] = -kp;
        else
            rhsv[row] += kp * boundary_value;
        if (j > 0) {
            const double km = flux_coeff(j - 1);
            diag[row] += km;
            if (j - 1 >= jlo)
                lower[row] = -km;
            // j-1 < jlo means the pinned node u_0 = 0: nothing to move.
        }
        if (angular > 0.0)
            diag[row] += angular * power_integral(cell_lo, cell_hi, mass_exp);
        rhsv[row] += source_integral(cell_lo, cell_hi);
    }

    // Thomas algorithm.
    for (int i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0)
            throw std::runtime_error("radial_solve_mode: singular tridiagonal system");
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhsv[i] -= m * rhsv[i - 1];
    }
    if (diag[n - 1] == 0.0)
        throw std::runtime_error("radial_solve_mode: singular tridiagonal system");
    std::vector<double> sol(n);
    sol[n - 1] = rhsv[n - 1] / diag[n - 1];
    for (int i = n - 2; i >= 0; --i) sol[i] = (rhsv[i] - upper[i] * sol[i + 1]) / diag[i];

    for (int j = jlo; j < J; ++j) out.u[j] = sol[j - jlo];
    out.u[J] = boundary_value;
    if (l >= 1) out.u[0] = 0.0;
    return out;
}

}  // namespace dfem
