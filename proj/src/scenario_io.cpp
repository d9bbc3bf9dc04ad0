#include "rmab/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rmab/error.hpp"

namespace rmab {

using nlohmann::json;

namespace {

std::vector<std::vector<double>> read_matrix(const json& j, const char* what) {
    if (!j.is_array()) throw Error(ErrorKind::ParseError, std::string(what) + " must be an array of rows");
    return j.get<std::vector<std::vector<double>>>();
}

ArmChain read_chain(const json& j) {
    if (!j.is_object() || !j.contains("transitions") || !j.contains("rewards"))
        throw Error(ErrorKind::ParseError, "local chain needs 'transitions' and 'rewards'");
    return {StochasticMatrix(read_matrix(j.at("transitions"), "transitions")),
            j.at("rewards").get<std::vector<double>>()};
}

} // namespace

std::string save_scenario(const ScenarioModel& model) {
    json j;
    j["name"] = model.name;
    j["global"] = model.global.rows();
    json arms = json::array();
    for (const auto& per_state : model.arms) {
        json chains = json::array();
        for (const auto& c : per_state)
            chains.push_back({{"transitions", c.transitions.rows()}, {"rewards", c.rewards}});
        arms.push_back(std::move(chains));
    }
    j["arms"] = std::move(arms);
    j["switch_mode"] = to_string(model.switch_mode);
    return j.dump(2) + "\n";
}

ScenarioModel load_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
    try {
        if (!j.is_object() || !j.contains("global") || !j.contains("arms"))
            throw Error(ErrorKind::ParseError, "scenario needs 'global' and 'arms'");
        const std::string name = j.value("name", std::string("unnamed"));
        StochasticMatrix global(read_matrix(j.at("global"), "global"));

        std::vector<std::vector<ArmChain>> arms;
        for (const auto& arm : j.at("arms")) {
            std::vector<ArmChain> chains;
            if (arm.is_array()) {
                for (const auto& c : arm) chains.push_back(read_chain(c));
            } else if (arm.is_object()) {
                // Also accept {"0": {...}, "1": {...}} keyed by global state index.
                for (std::size_t s = 0; s < global.size(); ++s) {
                    const auto key = std::to_string(s);
                    if (!arm.contains(key))
                        throw Error(ErrorKind::ParseError, "arm is missing global state " + key);
                    chains.push_back(read_chain(arm.at(key)));
                }
            } else {
                throw Error(ErrorKind::ParseError, "each arm must be an array or object of chains");
            }
            arms.push_back(std::move(chains));
        }
        const auto mode = parse_switch_mode(j.value("switch_mode", std::string("stationary-redraw")));
        return make_scenario(name, std::move(global), std::move(arms), mode);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

ScenarioModel load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidConfig, "cannot read scenario file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_scenario(buffer.str());
}

void save_scenario_file(const ScenarioModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidConfig, "cannot write " + path.string());
    out << save_scenario(model);
}

} // namespace rmab
