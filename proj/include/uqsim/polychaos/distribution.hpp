#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace uqsim::polychaos {

enum class Family { Gaussian, Uniform, Gamma, Beta, Custom };

[[nodiscard]] std::string_view to_string(Family family) noexcept;

/// Independent marginal distribution of one random parameter.
///
/// Named families carry closed-form density, CDF and quantile. Custom
/// distributions wrap a user density on an interval (bounds may be infinite);
/// their normalization, moments and CDF table are computed once at
/// construction and shared between copies.
///
/// Gamma(shape) uses unit scale; Beta(a, b) lives on [0, 1].
class Distribution {
public:
    using DensityFn = std::function<double(double)>;

    [[nodiscard]] static Distribution gaussian(double mean, double stddev);
    [[nodiscard]] static Distribution uniform(double lo, double hi);
    [[nodiscard]] static Distribution gamma(double shape);
    [[nodiscard]] static Distribution beta(double a, double b);
    /// Throws InputError when the density does not integrate to 1 within
    /// 1e-8 over [lo, hi].
    [[nodiscard]] static Distribution custom(DensityFn density, double lo, double hi,
                                             std::string label = "custom");

    [[nodiscard]] Family family() const noexcept { return family_; }
    [[nodiscard]] bool is_named() const noexcept { return family_ != Family::Custom; }
    /// Family parameters: (mean, stddev), (lo, hi), (shape), (a, b); empty for custom.
    [[nodiscard]] const std::vector<double>& params() const noexcept { return params_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }

    [[nodiscard]] double lower() const noexcept { return lo_; }
    [[nodiscard]] double upper() const noexcept { return hi_; }
    [[nodiscard]] double mean() const noexcept { return mean_; }
    [[nodiscard]] double stddev() const noexcept { return stddev_; }

    [[nodiscard]] double density(double x) const;
    [[nodiscard]] double cdf(double x) const;
    /// Inverse CDF for u in (0, 1).
    [[nodiscard]] double quantile(double u) const;

    /// Named: same family and parameters. Custom: same shared density object.
    [[nodiscard]] bool operator==(const Distribution& other) const noexcept;

    /// "gaussian(0,1)"-style description, parseable by the netlist grammar
    /// for named families.
    [[nodiscard]] std::string describe() const;

private:
    struct CustomData;

    Distribution() = default;

    Family family_ = Family::Gaussian;
    std::vector<double> params_;
    std::string label_;
    double lo_ = 0.0;
    double hi_ = 0.0;
    double mean_ = 0.0;
    double stddev_ = 1.0;
    std::shared_ptr<const CustomData> custom_;
};

}  // namespace uqsim::polychaos
