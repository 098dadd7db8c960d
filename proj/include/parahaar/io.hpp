// Symbol files and verification reports: structured text (JSON) with a
// versioned schema, plus CSV rows with 12 significant digits.
#pragma once

#include "parahaar/symbols.hpp"
#include "parahaar/theorems.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace parahaar {

inline constexpr int kSchemaVersion = 1;

// --- symbol files ---------------------------------------------------------

inline nlohmann::ordered_json symbol_file_json(const CoefSequence& seq) {
    nlohmann::ordered_json doc;
    doc["schema"] = kSchemaVersion;
    doc["L"] = seq.depth();
    auto entries = nlohmann::ordered_json::array();
    for (std::int64_t i = 0; i < seq.size(); ++i) {
        const double v = seq.at_index(i);
        if (v == 0.0) continue;
        nlohmann::ordered_json e;
        int level = 0;
        while ((std::int64_t{2} << level) - 1 <= i) ++level;
        e["level"] = level;
        e["pos"] = i - ((std::int64_t{1} << level) - 1);
        e["value"] = v;
        entries.push_back(std::move(e));
    }
    doc["entries"] = std::move(entries);
    return doc;
}

inline std::string serialize_symbols(const CoefSequence& seq) {
    return symbol_file_json(seq).dump(2) + "\n";
}

inline CoefSequence parse_symbols(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("symbol file: not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("L") || !doc.contains("entries"))
        throw std::runtime_error("symbol file: expected fields L and entries");
    if (doc.contains("schema") && doc["schema"].get<int>() != kSchemaVersion)
        throw std::runtime_error("symbol file: unsupported schema version");
    if (!doc["L"].is_number_integer())
        throw std::runtime_error("symbol file: L must be an integer");
    const int depth = doc["L"].get<int>();
    if (depth < 1 || depth > 24) throw std::runtime_error("symbol file: L out of range [1,24]");

    CoefSequence out(depth);
    std::vector<bool> seen(static_cast<std::size_t>(out.size()), false);
    for (const auto& e : doc["entries"]) {
        if (!e.is_object() || !e.contains("level") || !e.contains("pos") || !e.contains("value"))
            throw std::runtime_error("symbol file: each entry needs level, pos, value");
        const DyadicInterval I{e["level"].get<int>(), e["pos"].get<std::int64_t>()};
        if (!I.valid() || I.level >= depth)
            throw std::runtime_error("symbol file: entry " + to_string(I) + " not in D_" + std::to_string(depth));
        const std::int64_t idx = ((std::int64_t{1} << I.level) - 1) + I.pos;
        if (seen[static_cast<std::size_t>(idx)])
            throw std::runtime_error("symbol file: duplicate entry " + to_string(I));
        seen[static_cast<std::size_t>(idx)] = true;
        if (!e["value"].is_number()) throw std::runtime_error("symbol file: value must be numeric");
        out.set(I, e["value"].get<double>());
    }
    return out;
}

inline CoefSequence read_symbol_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open symbol file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_symbols(ss.str());
}

// --- reports ---------------------------------------------------------------

inline nlohmann::ordered_json report_json(const VerificationReport& rep) {
    nlohmann::ordered_json doc;
    doc["schema"] = kSchemaVersion;
    doc["case"] = rep.case_id;
    doc["L"] = rep.L;
    doc["trial"] = rep.trial;
    doc["ensemble"] = rep.ensemble;
    doc["seed"] = rep.seed;
    doc["lhs"] = rep.lhs;
    doc["rhs"] = rep.rhs;
    if (rep.ratio)
        doc["ratio"] = *rep.ratio;
    else
        doc["ratio"] = nullptr;
    doc["exactness"] = to_string(rep.exactness);
    doc["orientation"] = rep.orientation;
    doc["pass"] = rep.pass;
    auto terms = nlohmann::ordered_json::object();
    for (const auto& [k, v] : rep.terms) terms[k] = v;
    doc["terms"] = std::move(terms);
    return doc;
}

inline std::string format_sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string csv_header() { return "case,L,trial,lhs,rhs,ratio\n"; }

inline std::string csv_row(const VerificationReport& rep) {
    std::string out = rep.case_id;
    out += ',';
    out += std::to_string(rep.L);
    out += ',';
    out += std::to_string(rep.trial);
    out += ',';
    out += format_sig12(rep.lhs);
    out += ',';
    out += format_sig12(rep.rhs);
    out += ',';
    if (rep.ratio) out += format_sig12(*rep.ratio);
    out += '\n';
    return out;
}

}  // namespace parahaar
