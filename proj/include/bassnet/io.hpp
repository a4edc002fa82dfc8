#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bassnet/errors.hpp"
#include "bassnet/network.hpp"

namespace bassnet {

// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Network JSON: {"M": int, "p": [floats], "edges": [[k, j, rate], ...],
//                "label": string}
// ---------------------------------------------------------------------------

inline nlohmann::json network_to_json(const Network& net) {
    nlohmann::json j;
    j["M"] = net.M();
    j["p"] = net.p_vector();
    auto edges = nlohmann::json::array();
    for (const Edge& e : net.edges())
        edges.push_back({e.from, e.to, e.rate});
    j["edges"] = std::move(edges);
    j["label"] = net.label();
    return j;
}

inline Network network_from_json(const nlohmann::json& j) {
    require(j.is_object(), Errc::bad_format, "network JSON must be an object");
    require(j.contains("M") && j["M"].is_number_integer(), Errc::bad_format,
            "network JSON needs an integer \"M\"");
    require(j.contains("p") && j["p"].is_array(), Errc::bad_format,
            "network JSON needs an array \"p\"");
    require(j.contains("edges") && j["edges"].is_array(), Errc::bad_format,
            "network JSON needs an array \"edges\"");
    const int M = j["M"].get<int>();
    std::vector<double> p;
    for (const auto& v : j["p"]) {
        require(v.is_number(), Errc::bad_format, "\"p\" entries must be numbers");
        p.push_back(v.get<double>());
    }
    std::vector<Edge> edges;
    for (const auto& e : j["edges"]) {
        require(e.is_array() && e.size() == 3, Errc::bad_format,
                "\"edges\" entries must be [from, to, rate] triples");
        require(e[0].is_number_integer() && e[1].is_number_integer() &&
                    e[2].is_number(),
                Errc::bad_format, "edge triple must be (int, int, number)");
        edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    std::string label;
    if (j.contains("label")) {
        require(j["label"].is_string(), Errc::bad_format,
                "\"label\" must be a string");
        label = j["label"].get<std::string>();
    }
    return build_network(M, std::move(p), std::move(edges), std::move(label));
}

inline Network network_from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    require(!j.is_discarded(), Errc::bad_format, "invalid JSON");
    return network_from_json(j);
}

inline Network load_network(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), Errc::io_error, "cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return network_from_json_string(buf.str());
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    require(f.good(), Errc::io_error, "cannot write " + path);
    f << text;
    require(f.good(), Errc::io_error, "short write to " + path);
}

inline void save_network(const Network& net, const std::string& path) {
    write_text_file(path, network_to_json(net).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string curve_csv(const std::vector<double>& times,
                             const std::vector<double>& values) {
    require(times.size() == values.size(), Errc::invalid_size,
            "times/values length mismatch");
    std::string out = "t,value\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        out += format_double(times[i]) + "," + format_double(values[i]) + "\n";
    return out;
}

inline std::string estimate_csv(const std::vector<double>& times,
                                const std::vector<double>& mean,
                                const std::vector<double>& stderr_) {
    require(times.size() == mean.size() && times.size() == stderr_.size(),
            Errc::invalid_size, "times/mean/stderr length mismatch");
    std::string out = "t,mean,stderr\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        out += format_double(times[i]) + "," + format_double(mean[i]) + "," +
               format_double(stderr_[i]) + "\n";
    return out;
}

} // namespace bassnet
