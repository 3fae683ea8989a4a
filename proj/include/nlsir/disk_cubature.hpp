#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace nlsir {

/// Nodes and weights of a one-dimensional rule on [0, 1].
struct LineRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [0, 1]; weights sum to one.
/// Nodes are returned in increasing order.
LineRule gauss_legendre_unit(int n);

/// n-point Gauss rule for the weight function x on [0, 1] (Golub-Welsch on
/// the Jacobi(0, 1) recurrence). Weights sum to 1/2.
LineRule gauss_radial_unit(int n);

struct CubaturePoint {
    double dx;
    double dy;
    double r;
    double theta;
    double weight;
};

enum class RuleKind {
    ElhayKautsky,
    GaussLegendreProduct,
    FourPointSymmetric,
};

/// Radial construction used by the polar rule with equally spaced angles.
enum class RadialWeighting {
    /// Gauss nodes for the measure r dr: exact for radial polynomials.
    Gaussian,
    /// Gauss-Legendre nodes in r with weights normalized to the disk area.
    /// Drops the r Jacobian, so it is only exact for constants.
    Legendre,
};

std::string_view to_string(RuleKind kind);

/// Positive-weight rule approximating the integral over the disk of radius
/// delta centred at the origin. Points are stored radial index major.
class CubatureRule {
public:
    CubatureRule(RuleKind kind, double delta, int n_radial, int n_angular, std::vector<CubaturePoint> points);

    RuleKind kind() const noexcept { return kind_; }
    double delta() const noexcept { return delta_; }
    int n_radial() const noexcept { return n_radial_; }
    int n_angular() const noexcept { return n_angular_; }
    std::span<const CubaturePoint> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    double total_weight() const noexcept;
    double max_weight() const noexcept;

private:
    RuleKind kind_;
    double delta_;
    int n_radial_;
    int n_angular_;
    std::vector<CubaturePoint> points_;
};

/// Transformed Gauss-Legendre product rule: r = delta xi_i, theta = 2 pi eta_j,
/// weight w_i w_j 2 pi delta^2 xi_i. n_eta defaults to 2 n_xi.
CubatureRule product_disk_rule(int n_xi, double delta, int n_eta = 0);

/// Polar rule with n_r radial nodes and 2 n_r equally spaced angles.
CubatureRule elhay_kautsky_rule(int n_r, double delta, RadialWeighting radial = RadialWeighting::Gaussian);

/// Degree-3 rule with four equal weights on the circle of radius delta/sqrt(2).
CubatureRule four_point_disk_rule(double delta);

/// Sum of weight * f(point) in stored point order.
template <class F>
double integrate(const CubatureRule& rule, F&& f) {
    double sum = 0.0;
    for (const CubaturePoint& p : rule.points()) {
        sum += p.weight * f(p);
    }
    return sum;
}

/// Header `dx,dy,r,theta,weight`, one point per line, 17 significant digits.
void write_rule_csv(std::ostream& out, const CubatureRule& rule);

} // namespace nlsir
