#pragma once

#include "nonlocal/specfun.hpp"

#include <functional>
#include <span>
#include <string>

namespace nonlocal {

/// Which normalization constant multiplies the power-law kernel.
enum class Normalization {
    Classical, ///< c_ns_classical: consistent with the closed-form fractional solutions
    AsPrinted, ///< c_ns: the constant exactly as printed in the source formula
};

std::string to_string(Normalization norm);
Normalization normalization_from_string(const std::string& name);

/// Fractional kernel c / (2 |y - x|^{n+2s}), truncated to the closed ball |y - x| <= lambda.
///
/// Immutable after construction; `c()` always matches the normalization chosen for (n, s).
class KernelSpec {
public:
    KernelSpec(int n, FractionalOrder s, double lambda, Normalization norm = Normalization::Classical);

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] FractionalOrder s() const noexcept { return s_; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] double c() const noexcept { return c_; }
    [[nodiscard]] Normalization normalization() const noexcept { return norm_; }

    /// Exponent n + 2s of the power law.
    [[nodiscard]] double exponent() const noexcept { return n_ + 2.0 * s_.value(); }

    /// Same kernel with a different interaction radius.
    [[nodiscard]] KernelSpec with_lambda(double lambda) const;

private:
    int n_;
    FractionalOrder s_;
    double lambda_;
    Normalization norm_;
    double c_;
};

/// Full (untruncated) kernel. Throws SingularityError when x == y.
double gamma_full(const KernelSpec& spec, double x, double y);
double gamma_full(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// Truncated kernel: gamma_full inside the closed ball of radius lambda, zero outside.
double gamma_truncated(const KernelSpec& spec, double x, double y);
double gamma_truncated(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// A kernel under test, evaluated on n-dimensional points.
using KernelFunction = std::function<double(std::span<const double>, std::span<const double>)>;

struct KernelCheckReport {
    bool nonnegative_on_ball = true;
    bool positive_on_half_ball = true;
    bool vanishes_outside_ball = true;
    bool power_bounds = true;

    double worst_nonnegativity = 0.0; ///< min gamma over B_lambda samples
    double worst_half_ball = 0.0;     ///< min gamma over B_{lambda/2} samples
    double worst_outside = 0.0;       ///< max |gamma| outside B_lambda
    double worst_lower_margin = 0.0;  ///< min of gamma / (gamma1 r^{-n-2s}) - 1 (>= -tol passes)
    double worst_upper_margin = 0.0;  ///< min of 1 - gamma / (gamma2 r^{-n-2s}) (>= -tol passes)
    int samples = 0;

    [[nodiscard]] bool passed() const noexcept
    {
        return nonnegative_on_ball && positive_on_half_ball && vanishes_outside_ball && power_bounds;
    }
};

/// Sample random point pairs and check the admissibility conditions of a truncated
/// kernel: nonnegativity on B_lambda, positivity on B_{lambda/2}, zero support outside
/// B_lambda and the two-sided power bound with gamma1 = gamma2 = c/2.
///
/// `kernel` defaults to gamma_truncated(spec, ., .). Sampling is deterministic in `seed`.
KernelCheckReport check_kernel_conditions(const KernelSpec& spec, int sample_count,
                                          const KernelFunction& kernel = {},
                                          unsigned long long seed = 20140115ULL);

} // namespace nonlocal
