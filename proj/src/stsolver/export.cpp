#include "uqsim/stsolver/export.hpp"

#include "uqsim/common/error.hpp"
#include "uqsim/common/io.hpp"
#include "uqsim/polychaos/gpc_json.hpp"

namespace uqsim::stsolver {

std::string dc_stats_csv(const GpcExpansion& expansion, const std::vector<std::string>& names) {
    if (names.size() != expansion.outputs()) {
        throw InputError("stats export: expected " + std::to_string(expansion.outputs()) + " names");
    }
    const Vector mean = expansion.mean();
    const Vector sd = expansion.stddev();
    std::string out = "unknown,mean,std\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        out += names[i] + "," + format_double(mean[r]) + "," + format_double(sd[r]) + "\n";
    }
    return out;
}

std::string transient_csv(const StSolution& solution, const std::vector<std::string>& names,
                          const std::vector<std::size_t>& selected) {
    std::vector<std::size_t> cols = selected;
    if (cols.empty()) {
        for (std::size_t i = 0; i < names.size(); ++i) cols.push_back(i);
    }
    for (std::size_t c : cols) {
        if (c >= names.size()) throw InputError("transient export: output index out of range");
    }
    std::string out = "t";
    for (std::size_t c : cols) out += "," + names[c] + "_mean," + names[c] + "_std";
    out += "\n";
    for (std::size_t i = 0; i < solution.times.size(); ++i) {
        const auto& e = solution.expansions[i];
        if (e.outputs() != names.size()) {
            throw InputError("transient export: name count differs from the solution width");
        }
        const Vector mean = e.mean();
        const Vector sd = e.stddev();
        out += format_double(solution.times[i]);
        for (std::size_t c : cols) {
            const auto r = static_cast<Eigen::Index>(c);
            out += "," + format_double(mean[r]) + "," + format_double(sd[r]);
        }
        out += "\n";
    }
    return out;
}

nlohmann::json transient_json(const StSolution& solution) {
    nlohmann::json doc = nlohmann::json::array();
    for (std::size_t i = 0; i < solution.times.size(); ++i) {
        doc.push_back({{"t", solution.times[i]}, {"expansion", polychaos::to_json(solution.expansions[i])}});
    }
    return doc;
}

}  // namespace uqsim::stsolver
