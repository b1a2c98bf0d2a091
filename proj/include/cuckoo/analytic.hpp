#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

// Closed-form and fixed-point quantities for k-ary cuckoo hashing:
// the load threshold c_k*, the core-emergence point lambda_2, core sizes,
// and the large-deviation machinery (T_z, I(z), f, h) behind the
// subcritical analysis. All solvers are plain bisection on monotone
// objectives: tolerance 1e-12 on the argument, at most 200 iterations.

namespace cuckoo {

struct ThresholdSolution {
    int k = 0;
    double xi_star = 0.0;  // 0 flags the k == 2 limit case (xi -> 0+)
    double c_star = 0.0;   // items per table slot at the threshold
    double residual = 0.0; // defect of xi_star in its fixed-point equation
};

struct RateFunctionEval {
    double z = 0.0;
    double xi = 0.0;
    double t_z = 0.0;  // 0 at the z == 2 boundary (limit value)
    double value = 0.0;
};

struct CoreFractions {
    double vertex_fraction = 0.0;
    double edge_fraction = 0.0;
};

namespace detail {

constexpr double kArgTolerance = 1e-12;
constexpr int kMaxBisect = 200;

/// (e^x - 1) / x, continuous through x = 0.
inline double expm1_over_x(double x) {
    return x == 0.0 ? 1.0 : std::expm1(x) / x;
}

/// (e^x - x - 1) / x^2, continuous through x = 0. The direct difference
/// cancels catastrophically for small |x|, so a series is used there.
inline double expm1mx_over_x2(double x) {
    if (std::abs(x) > 0.5) return (std::expm1(x) - x) / (x * x);
    double term = 0.5;  // x^0 coefficient of sum_{j>=2} x^(j-2)/j!
    double sum = 0.5;
    for (int j = 3; j < 40; ++j) {
        term *= x / j;
        sum += term;
        if (std::abs(term) < 0x1.0p-60 * std::abs(sum)) break;
    }
    return sum;
}

/// ln(e^x - x - 1), stable down to tiny x where it behaves like 2 ln x - ln 2.
inline double log_expm1mx(double x) {
    return 2.0 * std::log(x) + std::log(expm1mx_over_x2(x));
}

/// Bisection for f(x) = target with f strictly increasing on [lo, hi].
template <typename F>
double bisect_increasing(F&& f, double lo, double hi, double target) {
    for (int i = 0; i < kMaxBisect && hi - lo > kArgTolerance; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline double pow2_minus_k_minus_1(int k) {
    return std::ldexp(1.0, k) - k - 1.0;  // 2^k - k - 1, exact for k < 53
}

} // namespace detail

/// Mean of a Poisson(xi) variable conditioned on being >= 2:
/// mu(xi) = xi (e^xi - 1) / (e^xi - xi - 1). Strictly increasing, -> 2 as xi -> 0+.
inline double truncated_poisson_mean(double xi) {
    if (xi <= 0.0) throw std::domain_error("truncated_poisson_mean: xi must be > 0");
    return detail::expm1_over_x(xi) / detail::expm1mx_over_x2(xi);
}

/// Unique positive solution of k = xi (e^xi - 1) / (e^xi - 1 - xi), k >= 3.
/// The right-hand side is strictly increasing from 2, so bisection converges.
inline double solve_xi_star(int k) {
    if (k < 3)
        throw std::domain_error(
            "solve_xi_star: requires k >= 3; the fixed-point equation has no root at "
            "k = 2 (threshold_c_star returns the closed-form limit 1/2 there)");
    return detail::bisect_increasing(
        [](double xi) { return truncated_poisson_mean(xi); }, 1e-12,
        static_cast<double>(k) + 2.0, static_cast<double>(k));
}

/// Load threshold c_k* = xi* / (k (1 - e^-xi*)^(k-1)) for k >= 3;
/// exactly 1/2 for k = 2 (the xi -> 0+ limit of the same formula).
inline ThresholdSolution threshold_c_star(int k) {
    if (k < 2) throw std::domain_error("threshold_c_star: requires k >= 2");
    if (k == 2) return ThresholdSolution{2, 0.0, 0.5, 0.0};
    const double xi = solve_xi_star(k);
    const double c = xi / (k * std::pow(-std::expm1(-xi), k - 1));
    const double residual = std::abs(k - truncated_poisson_mean(xi));
    return ThresholdSolution{k, xi, c, residual};
}

/// Location of the unique interior minimum of x / (1 - e^-x)^(k-1) over x > 0.
/// The derivative changes sign exactly once, so bisection on its sign works.
inline double lambda2_argmin(int k) {
    if (k < 3) throw std::domain_error("lambda2: requires k >= 3");
    // sign of d/dx [x (1-e^-x)^-(k-1)] equals sign of (1-e^-x) - x(k-1)e^-x
    return detail::bisect_increasing(
        [k](double x) { return -std::expm1(-x) - x * (k - 1) * std::exp(-x); }, 1e-9,
        50.0, 0.0);
}

/// min over x > 0 of x / (1 - e^-x)^(k-1): the mean-degree point where a
/// nonempty 2-core first appears.
inline double lambda2(int k) {
    const double argmin = lambda2_argmin(k);
    return argmin / std::pow(-std::expm1(-argmin), k - 1);
}

/// Largest root in (0, 1] of x = (1 - e^-xck)^(k-1), found by iterating the
/// map from x0 = 1; the iteration is monotone decreasing and bounded, so it
/// converges to the largest fixed point. Returns 0 in the empty-core regime
/// (ck <= lambda2), where the only fixed point is x = 0.
inline double largest_fixed_point_xbar(double c, int k) {
    if (c <= 0.0) throw std::domain_error("largest_fixed_point_xbar: c must be > 0");
    if (k < 3) throw std::domain_error("largest_fixed_point_xbar: requires k >= 3");
    const double ck = c * k;
    double x = 1.0;
    for (long iter = 0; iter < 2'000'000; ++iter) {
        const double next = std::pow(-std::expm1(-x * ck), k - 1);
        const double step = std::abs(next - x);
        x = next;
        if (step < 1e-14) break;
    }
    return x > 1e-9 ? x : 0.0;
}

/// Limiting core sizes at load c: with xi = xbar*ck, the core holds
/// (1 - e^-xi - xi e^-xi) n vertices and xi (1 - e^-xi) n / k edges.
/// Both are 0 when the core is empty.
inline CoreFractions core_fractions(double c, int k) {
    const double xbar = largest_fixed_point_xbar(c, k);
    if (xbar == 0.0) return CoreFractions{0.0, 0.0};
    const double xi = xbar * c * k;
    const double one_minus_exp = -std::expm1(-xi);
    return CoreFractions{one_minus_exp - xi * std::exp(-xi), xi * one_minus_exp / k};
}

/// Unique positive solution of z = T (e^T - 1) / (e^T - T - 1) for z > 2.
inline double solve_Tz(double z) {
    if (z <= 2.0)
        throw std::domain_error(
            "solve_Tz: requires z > 2 (the z = 2 boundary is a limit handled by rate_I)");
    return detail::bisect_increasing(
        [](double t) { return truncated_poisson_mean(t); }, 1e-300, z + 2.0, z);
}

/// Large-deviation rate function for the sample mean of 2-truncated Poisson(xi)
/// variables: I(z) = z (ln T_z - ln xi) - ln(e^T_z - T_z - 1) + ln(e^xi - xi - 1)
/// for z > 2, with the boundary value I(2) = ln 2 - 2 ln xi + ln(e^xi - xi - 1).
/// Nonnegative, convex, and zero exactly at z = mu(xi).
inline RateFunctionEval rate_eval(double z, double xi) {
    if (xi <= 0.0) throw std::domain_error("rate_I: xi must be > 0");
    if (z < 2.0) throw std::domain_error("rate_I: requires z >= 2");
    const double log_tail_xi = detail::log_expm1mx(xi);
    if (z == 2.0)
        return RateFunctionEval{z, xi, 0.0,
                                std::log(2.0) - 2.0 * std::log(xi) + log_tail_xi};
    const double t = solve_Tz(z);
    const double value =
        z * (std::log(t) - std::log(xi)) - detail::log_expm1mx(t) + log_tail_xi;
    return RateFunctionEval{z, xi, t, value};
}

inline double rate_I(double z, double xi) { return rate_eval(z, xi).value; }

/// Natural-log entropy H(x) = -x ln x - (1-x) ln(1-x), with H(0) = H(1) = 0.
inline double entropy_H(double x) {
    if (x < 0.0 || x > 1.0) throw std::domain_error("entropy_H: x must lie in [0, 1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

/// First-moment exponent for a size-beta, degree-share-q subset of the core:
/// f(beta, q) = 2 H(beta) + (1-beta) ln(2^k - k - 1) - k H(q)
///              - (1-beta) I(k (1-q) / (1-beta)).
/// beta = 1 (which forces q = 1) is the limit value 0.
inline double f_beta_q(double beta, double q, int k, double xi) {
    if (k < 3) throw std::domain_error("f_beta_q: requires k >= 3");
    if (beta <= 0.0 || beta > 1.0) throw std::domain_error("f_beta_q: beta must lie in (0, 1]");
    if (q < beta) throw std::domain_error("f_beta_q: requires q >= beta");
    if (beta == 1.0) return 0.0;
    const double z = k * (1.0 - q) / (1.0 - beta);
    if (z < 2.0 - 1e-12)
        throw std::domain_error("f_beta_q: I-argument k(1-q)/(1-beta) below 2; "
                                "requires q <= 1 - 2(1-beta)/k");
    return 2.0 * entropy_H(beta) + (1.0 - beta) * std::log(detail::pow2_minus_k_minus_1(k)) -
           k * entropy_H(q) - (1.0 - beta) * rate_I(std::max(z, 2.0), xi);
}

/// f(beta, q0) rewritten at a critical point of q -> f(beta, q), where the
/// relation T_0 = xi (1-q0)/q0 eliminates the rate function:
/// f(beta, q0) = 2H(beta) + (1-beta) ln((2^k-k-1)/(e^xi-xi-1)) + k ln q0
///   + (1-beta) (2 ln xi + ln(1-q0) - ln q0 + ln(1-beta) - ln(k q0 - xi(1-beta))).
inline double f_critical_point(double beta, double q0, int k, double xi) {
    if (k < 3) throw std::domain_error("f_critical_point: requires k >= 3");
    if (xi <= 0.0) throw std::domain_error("f_critical_point: xi must be > 0");
    if (beta <= 0.0 || beta > 1.0)
        throw std::domain_error("f_critical_point: beta must lie in (0, 1]");
    if (beta == 1.0) return 0.0;
    if (q0 <= 0.0 || q0 >= 1.0)
        throw std::domain_error("f_critical_point: q0 must lie in (0, 1)");
    const double pivot = k * q0 - xi * (1.0 - beta);
    if (pivot <= 0.0)
        throw std::domain_error("f_critical_point: log of nonpositive k q0 - xi (1-beta)");
    return 2.0 * entropy_H(beta) +
           (1.0 - beta) *
               (std::log(detail::pow2_minus_k_minus_1(k)) - detail::log_expm1mx(xi)) +
           k * std::log(q0) +
           (1.0 - beta) * (2.0 * std::log(xi) + std::log1p(-q0) - std::log(q0) +
                           std::log1p(-beta) - std::log(pivot));
}

/// h(beta): f at its critical point with q0 pinned to its upper end
/// 1 - 2(1-beta)/k. Convex on [0.7, 1] with h(1) = 0; its values at
/// beta = 0.7 certify that oversized dense subsets are exponentially rare.
/// Evaluate at xi = xi*(k) unless a nearby xi is supplied explicitly.
inline double h_beta(double beta, int k, double xi) {
    if (k < 3) throw std::domain_error("h_beta: requires k >= 3");
    if (xi <= 0.0) throw std::domain_error("h_beta: xi must be > 0");
    if (beta < 0.7 || beta > 1.0)
        throw std::domain_error("h_beta: beta must lie in [0.7, 1]");
    if (beta == 1.0) return 0.0;
    const double shifted = k - 2.0 + 2.0 * beta;
    const double pivot = shifted - xi * (1.0 - beta);
    if (pivot <= 0.0)
        throw std::domain_error("h_beta: log of nonpositive argument; xi too large");
    const double one_minus_beta = 1.0 - beta;
    return 2.0 * entropy_H(beta) +
           one_minus_beta *
               (std::log(detail::pow2_minus_k_minus_1(k)) - detail::log_expm1mx(xi)) +
           k * std::log(shifted / k) +
           one_minus_beta * (2.0 * std::log(xi) +
                             std::log(2.0 * one_minus_beta * one_minus_beta) -
                             std::log(shifted) - std::log(pivot));
}

inline double h_beta(double beta, int k) { return h_beta(beta, k, solve_xi_star(k)); }

} // namespace cuckoo
