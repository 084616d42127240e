// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "crcap_cli/config.hpp"

#include "crcap/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace crcap::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || end != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
        throw ConfigError(key + ": expected a real number, got '" + text + "'");
    }
    return v;
}

template <class Int>
Int to_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double as_real = 0.0;
    Int v = 0;
    auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec == std::errc() && end == t.data() + t.size() && !t.empty()) return v;
    // Accept exact integers written in exponent form, e.g. 1e6.
    auto [end2, ec2] = std::from_chars(t.data(), t.data() + t.size(), as_real);
    if (ec2 == std::errc() && end2 == t.data() + t.size() && as_real >= 0.0 && as_real == std::floor(as_real) &&
        as_real < 9.0e15) {
        return static_cast<Int>(as_real);
    }
    throw ConfigError(key + ": expected a nonnegative integer, got '" + text + "'");
}

bool to_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

using Handler = void (*)(RunConfig&, const std::string& key, const std::string& value);

const std::map<std::string, std::map<std::string, Handler>>& schema() {
    static const std::map<std::string, std::map<std::string, Handler>> s{
        {"scenario",
         {
             {"sl_csi", [](RunConfig&, const std::string&, const std::string&) {}},
             {"cl_csi", [](RunConfig&, const std::string&, const std::string&) {}},
             {"p_avg_db", [](RunConfig& c, const std::string& k, const std::string& v) { c.p_avg_db = to_double(k, v); }},
             {"i_peak_db", [](RunConfig& c, const std::string& k, const std::string& v) { c.i_peak_db = to_double(k, v); }},
             {"epsilon", [](RunConfig& c, const std::string& k, const std::string& v) { c.epsilon = to_double(k, v); }},
         }},
        {"sweep",
         {
             {"axis",
              [](RunConfig& c, const std::string&, const std::string& v) {
                  try {
                      c.sweep.axis = parse_sweep_axis(trim(v));
                  } catch (const DomainError& e) {
                      throw ConfigError(std::string("sweep.axis: ") + e.what());
                  }
              }},
             {"start", [](RunConfig& c, const std::string& k, const std::string& v) { c.sweep.start = to_double(k, v); }},
             {"stop", [](RunConfig& c, const std::string& k, const std::string& v) { c.sweep.stop = to_double(k, v); }},
             {"points", [](RunConfig& c, const std::string& k, const std::string& v) { c.sweep.points = to_int<int>(k, v); }},
             {"spacing",
              [](RunConfig& c, const std::string& k, const std::string& v) {
                  const std::string t = trim(v);
                  if (t != "linear" && t != "log") throw ConfigError(k + ": expected linear or log, got '" + v + "'");
                  c.sweep.log_spacing = t == "log";
              }},
         }},
        {"numerics",
         {
             {"quad_rel_tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.numerics.quad_rel_tol = to_double(k, v); }},
             {"quad_abs_tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.numerics.quad_abs_tol = to_double(k, v); }},
             {"quad_max_panels", [](RunConfig& c, const std::string& k, const std::string& v) { c.numerics.quad_max_panels = to_int<int>(k, v); }},
             {"tail_mass", [](RunConfig& c, const std::string& k, const std::string& v) { c.numerics.tail_mass = to_double(k, v); }},
             {"bisection_abs_tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.numerics.bisection_abs_tol = to_double(k, v); }},
             {"inversion_rel_tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.numerics.inversion_rel_tol = to_double(k, v); }},
             {"lambda_rel_tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.numerics.lambda_rel_tol = to_double(k, v); }},
             {"lambda_max_iter", [](RunConfig& c, const std::string& k, const std::string& v) { c.numerics.lambda_max_iter = to_int<int>(k, v); }},
             {"table_rel_tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.numerics.table_rel_tol = to_double(k, v); }},
             {"table_max_nodes", [](RunConfig& c, const std::string& k, const std::string& v) { c.numerics.table_max_nodes = to_int<std::size_t>(k, v); }},
             {"rescale_no_csi_power", [](RunConfig& c, const std::string& k, const std::string& v) { c.numerics.rescale_no_csi_power = to_bool(k, v); }},
         }},
        {"monte_carlo",
         {
             {"n_samples", [](RunConfig& c, const std::string& k, const std::string& v) { c.mc_samples = to_int<std::uint64_t>(k, v); }},
             {"seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.mc_seed = to_int<std::uint64_t>(k, v); }},
         }},
        {"output",
         {
             {"name", [](RunConfig& c, const std::string&, const std::string& v) { c.output_name = trim(v); }},
             {"plot", [](RunConfig& c, const std::string& k, const std::string& v) { c.plot = to_bool(k, v); }},
         }},
        {"asymptote",
         {
             {"with_capacity", [](RunConfig& c, const std::string& k, const std::string& v) { c.with_capacity = to_bool(k, v); }},
         }},
    };
    return s;
}

std::vector<CsiKnowledge> parse_csi_list(const std::string& key, const std::string& text) {
    std::vector<CsiKnowledge> out;
    for (const std::string& item : split(text, ',')) {
        try {
            out.push_back(parse_csi(item));
        } catch (const ConfigError& e) {
            throw ConfigError(key + ": " + e.what());
        }
    }
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

} // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

CsiKnowledge parse_csi(const std::string& text) {
    const std::string t = trim(text);
    if (t == "none") return CsiKnowledge::none();
    if (t == "perfect") return CsiKnowledge::perfect();
    const std::string prefix = "estimated:";
    if (t.rfind(prefix, 0) == 0) {
        const double alpha = to_double("alpha", t.substr(prefix.size()));
        try {
            return CsiKnowledge::estimated(alpha);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }
    throw ConfigError("expected none, perfect or estimated:<alpha>, got '" + text + "'");
}

std::string format_csi(const CsiKnowledge& csi) {
    switch (csi.level()) {
    case CsiLevel::none: return "none";
    case CsiLevel::perfect: return "perfect";
    case CsiLevel::estimated: {
        char buf[64];
        std::snprintf(buf, sizeof buf, "estimated:%g", csi.alpha());
        return buf;
    }
    }
    return "?";
}

std::vector<double> SweepSpec::grid() const {
    std::vector<double> g;
    if (points <= 0) return g;
    if (points == 1) return {start};
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        if (log_spacing) {
            g.push_back(std::exp(std::log(start) + t * (std::log(stop) - std::log(start))));
        } else {
            g.push_back(start + t * (stop - start));
        }
    }
    g.front() = start;
    g.back() = stop;
    return g;
}

double SweepSpec::to_model(double value) const {
    return (axis == SweepAxis::p_avg || axis == SweepAxis::i_peak) ? db_to_linear(value) : value;
}

std::string SweepSpec::column() const {
    switch (axis) {
    case SweepAxis::p_avg: return "p_avg_db";
    case SweepAxis::i_peak: return "i_peak_db";
    default: return to_string(axis);
    }
}

ScenarioConfig RunConfig::scenario(const Series& s) const {
    ScenarioConfig c;
    c.sl_csi = s.sl_csi;
    c.cl_csi = s.cl_csi;
    c.p_avg = db_to_linear(p_avg_db);
    c.i_peak = db_to_linear(i_peak_db);
    c.epsilon = epsilon;
    c.numerics = numerics;
    return c;
}

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    RunConfig cfg;
    std::vector<CsiKnowledge> sl{CsiKnowledge::perfect()};
    std::vector<CsiKnowledge> cl{CsiKnowledge::perfect()};
    const auto& sch = schema();
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
        const auto sec = sch.find(section);
        if (sec == sch.end()) throw ConfigError("config: unknown section [" + section + "]");
        if (section == "sweep") cfg.has_sweep = true;
        for (const auto& [key, node] : body) {
            const std::string full = section + "." + key;
            const auto h = sec->second.find(key);
            if (h == sec->second.end()) throw ConfigError("config: unknown key " + full);
            const std::string value = node.get_value<std::string>();
            if (full == "scenario.sl_csi") {
                sl = parse_csi_list(full, value);
            } else if (full == "scenario.cl_csi") {
                cl = parse_csi_list(full, value);
            } else {
                h->second(cfg, full, value);
            }
        }
    }
    for (const auto& s : sl) {
        for (const auto& c : cl) cfg.series.push_back({s, c});
    }

    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ConfigError("scenario.epsilon must lie in (0, 1)");
    if (cfg.has_sweep) {
        if (cfg.sweep.points < 1) throw ConfigError("sweep.points: the sweep grid is empty");
        if (cfg.sweep.points > 1 && !(cfg.sweep.stop > cfg.sweep.start)) {
            throw ConfigError("sweep: stop must exceed start");
        }
        if (cfg.sweep.log_spacing && !(cfg.sweep.start > 0.0)) throw ConfigError("sweep: log spacing needs start > 0");
    }
    try {
        cfg.numerics.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (cfg.mc_samples < 1000) throw ConfigError("monte_carlo.n_samples must be at least 1000");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace crcap::cli
