#include "uqsim/polychaos/gpc_expansion.hpp"

#include "uqsim/common/error.hpp"

#include <string>

namespace uqsim::polychaos {

GpcExpansion::GpcExpansion(MultiIndexSet index_set, std::vector<OrthoBasis> bases,
                           Matrix coefficients)
    : index_set_(std::move(index_set)),
      bases_(std::move(bases)),
      coefficients_(std::move(coefficients)) {
    if (bases_.size() != index_set_.dimension()) {
        throw InputError("gPC expansion: " + std::to_string(bases_.size()) + " bases for " +
                         std::to_string(index_set_.dimension()) + " dimensions");
    }
    if (static_cast<std::size_t>(coefficients_.rows()) != index_set_.size()) {
        throw InputError("gPC expansion: " + std::to_string(coefficients_.rows()) +
                         " coefficient rows for K=" + std::to_string(index_set_.size()));
    }
    for (const auto& b : bases_) {
        if (b.order() < index_set_.order()) {
            throw InputError("gPC expansion: basis order below the index-set order");
        }
    }
}

Vector GpcExpansion::eval(const Vector& point) const {
    const Vector h = eval_multivariate_basis(index_set_, bases_, point);
    return coefficients_.transpose() * h;
}

bool GpcExpansion::extrapolates(const Vector& point) const {
    for (std::size_t j = 0; j < bases_.size(); ++j) {
        const auto& dist = bases_[j].distribution();
        if (!dist) continue;
        const double x = point[static_cast<Eigen::Index>(j)];
        if (x < dist->lower() || x > dist->upper()) return true;
    }
    return false;
}

Vector GpcExpansion::mean() const { return coefficients_.row(0).transpose(); }

Vector GpcExpansion::variance() const {
    const Eigen::Index k = coefficients_.rows();
    if (k <= 1) return Vector::Zero(coefficients_.cols());
    return coefficients_.bottomRows(k - 1).colwise().squaredNorm().transpose();
}

Vector GpcExpansion::stddev() const { return variance().cwiseSqrt(); }

GpcExpansion GpcExpansion::component(std::size_t i) const {
    if (i >= outputs()) throw InputError("gPC expansion: component index out of range");
    return GpcExpansion(index_set_, bases_, coefficients_.col(static_cast<Eigen::Index>(i)));
}

GpcValue gpc_eval(const GpcExpansion& expansion, const Vector& point) {
    return {expansion.eval(point), expansion.extrapolates(point)};
}

std::pair<Vector, Vector> gpc_mean_variance(const GpcExpansion& expansion) {
    return {expansion.mean(), expansion.variance()};
}

}  // namespace uqsim::polychaos
