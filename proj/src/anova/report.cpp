#include "uqsim/anova/report.hpp"

#include "uqsim/common/io.hpp"

namespace uqsim::anova {

namespace {

std::string name_of(const std::vector<std::string>& names, std::size_t k) {
    return k < names.size() && !names[k].empty() ? names[k] : "xi" + std::to_string(k + 1);
}

}  // namespace

nlohmann::json anova_report(const AnovaDecomposition& dec,
                            const std::vector<std::string>& parameter_names) {
    nlohmann::json doc;
    doc["g0"] = dec.g0;
    doc["m"] = dec.m;
    doc["sigma"] = dec.sigma;
    doc["order"] = dec.p;
    doc["beta"] = dec.beta;
    const auto counts = dec.level_counts();
    doc["level_counts"] = counts;
    doc["term_count"] = dec.term_count();
    doc["N_samples"] = sample_count(counts, dec.p);
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : dec.terms) {
        nlohmann::json names = nlohmann::json::array();
        for (std::size_t k : t.s) names.push_back(name_of(parameter_names, k));
        terms.push_back({{"s", t.s}, {"names", names}, {"variance", t.variance}, {"theta", t.theta}});
    }
    doc["terms"] = std::move(terms);
    nlohmann::json params = nlohmann::json::array();
    for (std::size_t k = 0; k < dec.expansion.dimension(); ++k) params.push_back(name_of(parameter_names, k));
    doc["parameters"] = std::move(params);
    if (dec.expansion.variance() > 0.0) {
        const Sensitivities s = sensitivities(dec.expansion);
        doc["S"] = std::vector<double>(s.S.data(), s.S.data() + s.S.size());
        doc["T"] = std::vector<double>(s.T.data(), s.T.data() + s.T.size());
    } else {
        doc["S"] = nullptr;
        doc["T"] = nullptr;
    }
    return doc;
}

std::string sensitivity_csv(const Sensitivities& sens, const std::vector<std::string>& parameter_names) {
    std::string out = "parameter,S,T\n";
    for (Eigen::Index k = 0; k < sens.S.size(); ++k) {
        out += name_of(parameter_names, static_cast<std::size_t>(k)) + "," + format_double(sens.S[k]) +
               "," + format_double(sens.T[k]) + "\n";
    }
    return out;
}

}  // namespace uqsim::anova
