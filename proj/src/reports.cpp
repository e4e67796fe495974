#include "parsearch/reports.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace parsearch {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}

void write_point(std::ostream& out, const GridSpec& grid, std::size_t n,
                 std::vector<double>& scratch) {
    grid.node_point(n, scratch);
    for (int a = 0; a < grid.dimension(); ++a) {
        if (a) out << ',';
        out << format_double(scratch[a]);
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

}  // namespace

void write_field_csv(const std::string& path, const ScalarField& u, const ScalarField& g,
                     const ContactMask& mask) {
    auto out = open_out(path);
    const GridSpec& grid = u.grid;
    std::vector<double> x(grid.dimension());
    for (int a = 0; a < grid.dimension(); ++a) out << "x" << (a + 1) << ",";
    out << "u,g,contact\n";
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        write_point(out, grid, n, x);
        out << ',' << format_double(u[n]) << ',' << format_double(g[n]) << ','
            << (mask[n] ? 1 : 0) << '\n';
    }
}

void write_policy_csv(const std::string& path, const PolicyField& policy) {
    auto out = open_out(path);
    const GridSpec& grid = policy.grid;
    std::vector<double> x(grid.dimension());
    for (int a = 0; a < grid.dimension(); ++a) out << "x" << (a + 1) << ",";
    out << "action\n";
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        write_point(out, grid, n, x);
        out << ',' << action_name(policy[n]) << '\n';
    }
}

void write_boundary_nodes_csv(const std::string& path, const GridSpec& grid,
                              const std::vector<std::size_t>& nodes,
                              const ContactMask& mask) {
    auto out = open_out(path);
    std::vector<double> x(grid.dimension());
    for (int a = 0; a < grid.dimension(); ++a) out << "x" << (a + 1) << ",";
    out << "side\n";
    for (std::size_t n : nodes) {
        write_point(out, grid, n, x);
        out << ',' << (mask[n] ? "contact" : "continuation") << '\n';
    }
}

json grid_to_json(const GridSpec& grid) {
    json j;
    j["dimension"] = grid.dimension();
    j["spacing"] = grid.spacing();
    for (int a = 0; a < grid.dimension(); ++a) {
        j["lower"].push_back(grid.lower(a));
        j["upper"].push_back(grid.upper(a));
        j["counts"].push_back(grid.count(a));
    }
    return j;
}

GridSpec grid_from_json(const json& j) {
    std::vector<double> lower = j.at("lower").get<std::vector<double>>();
    std::vector<double> upper = j.at("upper").get<std::vector<double>>();
    return GridSpec(lower, upper, j.at("spacing").get<double>());
}

json diagnostics_to_json(const SolveDiagnostics& diag) {
    json j;
    j["sweeps"] = diag.sweeps;
    j["policy_iterations"] = diag.policy_iterations;
    j["omega"] = diag.omega_used;
    j["final_change"] = diag.final_change;
    j["final_residual"] = diag.final_residual;
    j["converged"] = diag.converged;
    return j;
}

json sim_estimate_to_json(const SimEstimate& est) {
    json j;
    j["mean"] = est.mean;
    j["stderr"] = est.stderr_;
    j["mean_stop_time"] = est.mean_stop_time;
    j["paths"] = est.paths;
    j["seed"] = est.seed;
    j["dt"] = est.dt;
    j["forced_stop_fraction"] = est.forced_stop_fraction;
    j["bias_warning"] = est.bias_warning;
    return j;
}

json report_envelope(json payload, json extra_meta) {
    json envelope;
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::tm tm_utc{};
    gmtime_r(&tt, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    json meta = {{"tool", "parsearch"}, {"version", "0.1.0"}, {"timestamp", stamp}};
    for (auto it = extra_meta.begin(); it != extra_meta.end(); ++it) {
        meta[it.key()] = it.value();
    }
    envelope["meta"] = std::move(meta);
    envelope["data"] = std::move(payload);
    return envelope;
}

void write_report(const std::string& path, const json& envelope) {
    auto out = open_out(path);
    out << envelope.dump(2) << '\n';
    if (!out) throw IoError("failed writing report: " + path);
}

json read_report(const std::string& path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

ScalarField read_field_csv(const std::string& path, const GridSpec& grid, ScalarField* g_out,
                           ContactMask* mask_out) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty field csv: " + path);
    const int d = grid.dimension();
    ScalarField u(grid);
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (static_cast<int>(cells.size()) != d + 3) {
            throw IoError("field csv row has wrong arity: " + path);
        }
        if (n >= grid.node_count()) throw IoError("field csv longer than grid: " + path);
        u[n] = std::stod(cells[d]);
        if (g_out) (*g_out)[n] = std::stod(cells[d + 1]);
        if (mask_out) mask_out->set(n, cells[d + 2] == "1");
        ++n;
    }
    if (n != grid.node_count()) throw IoError("field csv shorter than grid: " + path);
    return u;
}

PolicyField read_policy_csv(const std::string& path, const GridSpec& grid) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty policy csv: " + path);
    const int d = grid.dimension();
    PolicyField policy(grid);
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (static_cast<int>(cells.size()) != d + 1) {
            throw IoError("policy csv row has wrong arity: " + path);
        }
        if (n >= grid.node_count()) throw IoError("policy csv longer than grid: " + path);
        const std::string& name = cells[d];
        if (name == "stop") {
            policy.actions[n] = PolicyField::kStop;
        } else if (name == "parallel") {
            policy.actions[n] = PolicyField::kParallel;
        } else if (name.rfind("search_", 0) == 0) {
            policy.actions[n] = PolicyField::search(std::stoi(name.substr(7)) - 1);
        } else {
            throw IoError("unknown action '" + name + "' in " + path);
        }
        ++n;
    }
    if (n != grid.node_count()) throw IoError("policy csv shorter than grid: " + path);
    return policy;
}

namespace {

bool type_matches(const json& doc, const std::string& type) {
    if (type == "object") return doc.is_object();
    if (type == "array") return doc.is_array();
    if (type == "string") return doc.is_string();
    if (type == "number") return doc.is_number();
    if (type == "integer") return doc.is_number_integer() || doc.is_number_unsigned();
    if (type == "boolean") return doc.is_boolean();
    if (type == "null") return doc.is_null();
    return false;
}

void validate_node(const json& doc, const json& schema, const std::string& path,
                   std::vector<std::string>& problems) {
    if (schema.contains("type")) {
        const auto& t = schema["type"];
        bool ok = false;
        if (t.is_string()) {
            ok = type_matches(doc, t.get<std::string>());
        } else {
            for (const auto& opt : t) ok = ok || type_matches(doc, opt.get<std::string>());
        }
        if (!ok) {
            problems.push_back(path + ": expected type " + t.dump());
            return;
        }
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& v : schema["enum"]) ok = ok || v == doc;
        if (!ok) problems.push_back(path + ": value not in enum " + schema["enum"].dump());
    }
    if (schema.contains("minimum") && doc.is_number()) {
        if (doc.get<double>() < schema["minimum"].get<double>()) {
            problems.push_back(path + ": below minimum " + schema["minimum"].dump());
        }
    }
    if (doc.is_object()) {
        if (schema.contains("required")) {
            for (const auto& key : schema["required"]) {
                if (!doc.contains(key.get<std::string>())) {
                    problems.push_back(path + ": missing required key '" +
                                       key.get<std::string>() + "'");
                }
            }
        }
        if (schema.contains("properties")) {
            for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it) {
                if (doc.contains(it.key())) {
                    validate_node(doc[it.key()], it.value(), path + "/" + it.key(), problems);
                }
            }
        }
    }
    if (doc.is_array() && schema.contains("items")) {
        for (std::size_t i = 0; i < doc.size(); ++i) {
            validate_node(doc[i], schema["items"], path + "/" + std::to_string(i), problems);
        }
    }
}

}  // namespace

std::vector<std::string> schema_validate(const json& doc, const json& schema) {
    std::vector<std::string> problems;
    validate_node(doc, schema, "", problems);
    return problems;
}

}  // namespace parsearch
