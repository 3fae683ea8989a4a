#include "nlsir/disk_cubature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace nlsir {

namespace {

constexpr double kPi = std::numbers::pi;

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
    double p0 = 1.0;
    double p1 = x;
    if (n == 0) {
        return {p0, 0.0};
    }
    for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

void require_positive_delta(double delta, const char* who) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument(std::string(who) + ": delta must be positive");
    }
}

CubaturePoint polar_point(double r, double theta, double weight) {
    return {r * std::cos(theta), r * std::sin(theta), r, theta, weight};
}

} // namespace

std::string_view to_string(RuleKind kind) {
    switch (kind) {
    case RuleKind::ElhayKautsky:
        return "elhay-kautsky";
    case RuleKind::GaussLegendreProduct:
        return "gauss-legendre";
    case RuleKind::FourPointSymmetric:
        return "four-point";
    }
    return "unknown";
}

LineRule gauss_legendre_unit(int n) {
    if (n < 1) {
        throw std::invalid_argument("gauss_legendre_unit: n must be at least 1");
    }
    constexpr double tolerance = 1e-15;
    constexpr int max_iterations = 100;

    LineRule rule;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess for the i-th largest root
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < max_iterations; ++it) {
            const auto [p, dp] = legendre_with_derivative(n, z);
            const double step = p / dp;
            z -= step;
            if (std::abs(step) <= tolerance) {
                break;
            }
        }
        const auto [p, dp] = legendre_with_derivative(n, z);
        (void)p;
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        // map [-1, 1] -> [0, 1]
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = 0.5 * (1.0 - z);
        rule.nodes[hi] = 0.5 * (1.0 + z);
        rule.weights[lo] = 0.5 * w;
        rule.weights[hi] = 0.5 * w;
    }
    if (n % 2 == 1) {
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.5;
    }
    return rule;
}

LineRule gauss_radial_unit(int n) {
    if (n < 1) {
        throw std::invalid_argument("gauss_radial_unit: n must be at least 1");
    }
    // Jacobi matrix of the monic polynomials orthogonal for (1 + x) on [-1, 1].
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max(n - 1, 1));
    for (int k = 0; k < n; ++k) {
        diag(k) = 1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
    }
    for (int k = 1; k < n; ++k) {
        sub(k - 1) = std::sqrt(static_cast<double>(k) * (k + 1.0)) / (2.0 * k + 1.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("gauss_radial_unit: eigen solve failed");
    }
    constexpr double mu0 = 2.0; // integral of (1 + x) over [-1, 1]

    LineRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double v0 = solver.eigenvectors()(0, k);
        // x = 2u - 1 on [0, 1]; (1 + x) dx = 4u du
        rule.nodes[static_cast<std::size_t>(k)] = 0.5 * (solver.eigenvalues()(k) + 1.0);
        rule.weights[static_cast<std::size_t>(k)] = 0.25 * mu0 * v0 * v0;
    }
    return rule;
}

CubatureRule::CubatureRule(RuleKind kind, double delta, int n_radial, int n_angular,
                           std::vector<CubaturePoint> points)
    : kind_(kind), delta_(delta), n_radial_(n_radial), n_angular_(n_angular), points_(std::move(points)) {
    require_positive_delta(delta, "CubatureRule");
    for (const CubaturePoint& p : points_) {
        if (!(p.weight > 0.0)) {
            throw std::invalid_argument("CubatureRule: weights must be positive");
        }
        if (p.r < 0.0 || p.r > delta) {
            throw std::invalid_argument("CubatureRule: point outside the disk");
        }
    }
}

double CubatureRule::total_weight() const noexcept {
    double sum = 0.0;
    for (const CubaturePoint& p : points_) {
        sum += p.weight;
    }
    return sum;
}

double CubatureRule::max_weight() const noexcept {
    double w = 0.0;
    for (const CubaturePoint& p : points_) {
        w = std::max(w, p.weight);
    }
    return w;
}

CubatureRule product_disk_rule(int n_xi, double delta, int n_eta) {
    if (n_xi < 1) {
        throw std::invalid_argument("product_disk_rule: n_xi must be at least 1");
    }
    require_positive_delta(delta, "product_disk_rule");
    if (n_eta <= 0) {
        n_eta = 2 * n_xi;
    }
    const LineRule radial = gauss_legendre_unit(n_xi);
    const LineRule angular = n_eta == n_xi ? radial : gauss_legendre_unit(n_eta);

    std::vector<CubaturePoint> points;
    points.reserve(static_cast<std::size_t>(n_xi) * static_cast<std::size_t>(n_eta));
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double xi = radial.nodes[i];
        for (std::size_t j = 0; j < angular.nodes.size(); ++j) {
            const double weight = radial.weights[i] * angular.weights[j] * 2.0 * kPi * delta * delta * xi;
            points.push_back(polar_point(delta * xi, 2.0 * kPi * angular.nodes[j], weight));
        }
    }
    return CubatureRule(RuleKind::GaussLegendreProduct, delta, n_xi, n_eta, std::move(points));
}

CubatureRule elhay_kautsky_rule(int n_r, double delta, RadialWeighting radial) {
    if (n_r < 1) {
        throw std::invalid_argument("elhay_kautsky_rule: n_r must be at least 1");
    }
    require_positive_delta(delta, "elhay_kautsky_rule");
    const int n_theta = 2 * n_r;

    // Radial weights for the measure r dr on [0, delta], summing to delta^2 / 2.
    std::vector<double> r_nodes;
    std::vector<double> r_weights;
    if (radial == RadialWeighting::Gaussian) {
        const LineRule unit = gauss_radial_unit(n_r);
        for (std::size_t i = 0; i < unit.nodes.size(); ++i) {
            r_nodes.push_back(delta * unit.nodes[i]);
            r_weights.push_back(delta * delta * unit.weights[i]);
        }
    } else {
        const LineRule unit = gauss_legendre_unit(n_r);
        for (std::size_t i = 0; i < unit.nodes.size(); ++i) {
            r_nodes.push_back(delta * unit.nodes[i]);
            r_weights.push_back(0.5 * delta * delta * unit.weights[i]);
        }
    }

    std::vector<CubaturePoint> points;
    points.reserve(static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_theta));
    const double angular_weight = 2.0 * kPi / n_theta;
    for (std::size_t i = 0; i < r_nodes.size(); ++i) {
        for (int j = 0; j < n_theta; ++j) {
            points.push_back(polar_point(r_nodes[i], angular_weight * j, r_weights[i] * angular_weight));
        }
    }
    return CubatureRule(RuleKind::ElhayKautsky, delta, n_r, n_theta, std::move(points));
}

CubatureRule four_point_disk_rule(double delta) {
    require_positive_delta(delta, "four_point_disk_rule");
    const double r = delta / std::numbers::sqrt2;
    const double w = 0.25 * kPi * delta * delta;
    std::vector<CubaturePoint> points;
    for (int j = 0; j < 4; ++j) {
        points.push_back(polar_point(r, 0.5 * kPi * j, w));
    }
    return CubatureRule(RuleKind::FourPointSymmetric, delta, 1, 4, std::move(points));
}

void write_rule_csv(std::ostream& out, const CubatureRule& rule) {
    out << "dx,dy,r,theta,weight\n";
    char buf[160];
    for (const CubaturePoint& p : rule.points()) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.dx, p.dy, p.r, p.theta, p.weight);
        out << buf;
    }
}

} // namespace nlsir
