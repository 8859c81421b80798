#include "uqsim/polychaos/gpc_json.hpp"

#include "uqsim/common/error.hpp"
#include "uqsim/common/io.hpp"

#include <cmath>
#include <string>

namespace uqsim::polychaos {

namespace {

using nlohmann::json;

json bound_to_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json distribution_to_json(const Distribution& dist) {
    json out;
    out["kind"] = std::string(to_string(dist.family()));
    out["params"] = dist.params();
    out["lower"] = bound_to_json(dist.lower());
    out["upper"] = bound_to_json(dist.upper());
    if (!dist.is_named()) out["label"] = dist.label();
    return out;
}

std::optional<Distribution> distribution_from_json(const json& doc) {
    if (doc.is_null()) return std::nullopt;
    const auto kind = doc.at("kind").get<std::string>();
    const auto params = doc.at("params").get<std::vector<double>>();
    auto need = [&](std::size_t n) {
        if (params.size() != n) {
            throw InputError("distribution '" + kind + "' expects " + std::to_string(n) +
                             " parameters");
        }
    };
    if (kind == "gaussian") {
        need(2);
        return Distribution::gaussian(params[0], params[1]);
    }
    if (kind == "uniform") {
        need(2);
        return Distribution::uniform(params[0], params[1]);
    }
    if (kind == "gamma") {
        need(1);
        return Distribution::gamma(params[0]);
    }
    if (kind == "beta") {
        need(2);
        return Distribution::beta(params[0], params[1]);
    }
    if (kind == "custom") return std::nullopt;
    throw InputError("unknown distribution kind '" + kind + "'");
}

}  // namespace

json to_json(const OrthoBasis& basis) {
    json out;
    out["family"] = basis.family();
    out["distribution"] = basis.distribution() ? distribution_to_json(*basis.distribution())
                                               : json(nullptr);
    out["gamma"] = std::vector<double>(basis.jacobi_gamma().begin(), basis.jacobi_gamma().end());
    out["kappa"] = std::vector<double>(basis.kappa().begin(), basis.kappa().end());
    return out;
}

OrthoBasis basis_from_json(const json& doc) {
    auto gamma = doc.at("gamma").get<std::vector<double>>();
    auto kappa = doc.at("kappa").get<std::vector<double>>();
    auto family = doc.at("family").get<std::string>();
    std::optional<Distribution> dist;
    if (auto it = doc.find("distribution"); it != doc.end()) dist = distribution_from_json(*it);
    return OrthoBasis(std::move(gamma), std::move(kappa), std::move(family), std::move(dist));
}

json to_json(const GpcExpansion& expansion) {
    json out;
    out["dimension"] = expansion.dimension();
    out["order"] = expansion.order();
    json families = json::array();
    for (const auto& b : expansion.bases()) families.push_back(to_json(b));
    out["families"] = std::move(families);

    const auto& idx = expansion.index_set();
    json indices = json::array();
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto a = idx[k];
        indices.push_back(std::vector<int>(a.begin(), a.end()));
    }
    out["indices"] = std::move(indices);

    const Matrix& c = expansion.coefficients();
    json coeffs = json::array();
    for (Eigen::Index k = 0; k < c.rows(); ++k) {
        std::vector<double> row(static_cast<std::size_t>(c.cols()));
        for (Eigen::Index i = 0; i < c.cols(); ++i) row[static_cast<std::size_t>(i)] = c(k, i);
        coeffs.push_back(std::move(row));
    }
    out["coefficients"] = std::move(coeffs);
    return out;
}

GpcExpansion expansion_from_json(const json& doc) {
    try {
        const auto d = doc.at("dimension").get<std::size_t>();
        const auto p = doc.at("order").get<int>();
        std::vector<OrthoBasis> bases;
        for (const auto& f : doc.at("families")) bases.push_back(basis_from_json(f));
        auto idx = MultiIndexSet::total_degree(d, p);

        const auto& indices = doc.at("indices");
        const auto& coeffs = doc.at("coefficients");
        if (indices.size() != idx.size() || coeffs.size() != idx.size()) {
            throw InputError("expansion JSON: expected " + std::to_string(idx.size()) +
                             " indices and coefficient rows");
        }
        const std::size_t n = idx.size() == 0 ? 0 : coeffs.at(0).size();
        Matrix c(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(n));
        for (std::size_t r = 0; r < indices.size(); ++r) {
            const auto alpha = indices[r].get<std::vector<int>>();
            const auto k = idx.find(alpha);
            if (!k) throw InputError("expansion JSON: index outside the total-degree set");
            const auto row = coeffs[r].get<std::vector<double>>();
            if (row.size() != n) throw InputError("expansion JSON: ragged coefficient table");
            for (std::size_t i = 0; i < n; ++i) {
                c(static_cast<Eigen::Index>(*k), static_cast<Eigen::Index>(i)) = row[i];
            }
        }
        return GpcExpansion(std::move(idx), std::move(bases), std::move(c));
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed expansion JSON: ") + e.what());
    }
}

GpcExpansion read_expansion(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return expansion_from_json(doc);
}

}  // namespace uqsim::polychaos
