#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ngdbf/trapset.hpp"

namespace ngdbf {

/// Failed-y archive: a JSON array of {y, master_seed, trial_index} records.
inline void archive_save(const std::string& path, const std::vector<FailedCase>& cases) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cases)
        arr.push_back({{"y", c.y}, {"master_seed", c.master_seed}, {"trial_index", c.trial_index}});
    std::ofstream out(path);
    if (!out) throw std::runtime_error("archive_save: cannot open " + path);
    out << arr.dump(2) << "\n";
}

inline std::vector<FailedCase> archive_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("archive_load: cannot open " + path);
    nlohmann::json arr = nlohmann::json::parse(in);
    std::vector<FailedCase> cases;
    for (const auto& item : arr) {
        FailedCase c;
        c.y = item.at("y").get<std::vector<double>>();
        c.master_seed = item.at("master_seed").get<std::uint64_t>();
        c.trial_index = item.at("trial_index").get<std::uint64_t>();
        if (c.y.size() != static_cast<std::size_t>(kTs88Symbols))
            throw std::runtime_error("archive_load: record with y length != 8");
        cases.push_back(std::move(c));
    }
    return cases;
}

} // namespace ngdbf
