/**
 * @file instance_io.hpp
 * @brief Reading and writing "maximin-instance/1" documents.
 *
 * The document is a JSON object:
 *
 *     {
 *       "format":  "maximin-instance/1",
 *       "n":       2,
 *       "m":       3,
 *       "p":       2,              // a number >= 2, or the string "inf"
 *       "weights": [1, 1, 1],      // m positive reals
 *       "points":  [[1, 2], [2, 3], [1, 5]]   // m rows of n reals
 *     }
 *
 * Unknown keys are ignored. Numbers are written with round-trip precision.
 */

#ifndef MAXIMIN_INSTANCE_IO_HPP
#define MAXIMIN_INSTANCE_IO_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "maximin/core.hpp"

namespace maximin {

inline constexpr const char* kInstanceFormat = "maximin-instance/1";

inline nlohmann::json instance_to_json(const ProblemInstance& inst) {
    nlohmann::json doc;
    doc["format"] = kInstanceFormat;
    doc["n"] = inst.n();
    doc["m"] = inst.m();
    if (inst.p().is_infinite())
        doc["p"] = "inf";
    else
        doc["p"] = inst.p().value();
    doc["weights"] = inst.weights();
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < inst.m(); ++i) {
        const auto pt = inst.point(i);
        rows.push_back(Vector(pt.begin(), pt.end()));
    }
    doc["points"] = std::move(rows);
    return doc;
}

inline ProblemInstance instance_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("instance document must be a JSON object");
    if (!doc.contains("format") || doc.at("format") != kInstanceFormat)
        throw std::invalid_argument(std::string("instance document must declare format ") + kInstanceFormat);
    try {
        const auto n = doc.at("n").get<std::size_t>();
        const auto m = doc.at("m").get<std::size_t>();
        const auto& pj = doc.at("p");
        const NormExponent p = pj.is_string() ? parse_exponent(pj.get<std::string>()) : NormExponent(pj.get<double>());
        auto points = doc.at("points").get<std::vector<Vector>>();
        auto weights = doc.contains("weights") ? doc.at("weights").get<Vector>() : Vector(points.size(), 1.0);
        if (points.size() != m) throw std::invalid_argument("instance document: m does not match number of points");
        return ProblemInstance(n, p, std::move(points), std::move(weights));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed instance document: ") + e.what());
    }
}

inline std::string write_instance(const ProblemInstance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

inline ProblemInstance read_instance(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("instance document is not valid JSON: ") + e.what());
    }
    return instance_from_json(doc);
}

inline ProblemInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open instance file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return read_instance(buf.str());
}

inline void save_instance(const ProblemInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file '" + path + "'");
    out << write_instance(inst);
}

}  // namespace maximin

#endif  // MAXIMIN_INSTANCE_IO_HPP
