#include "dfem/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dfem {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void append_real_array(std::string& out, const std::vector<double>& v) {
    out += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_real(v[i]);
    }
    out += ']';
}

std::string hash_string(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string quote(const std::string& s) {
    return nlohmann::json(s).dump();
}

}  // namespace

std::string mesh_to_json(const Mesh& mesh) {
    std::string out = "{\n\"nodes\":";
    std::vector<double> flat;
    flat.reserve(mesh.nodes.size() * 2);
    for (const auto& p : mesh.nodes) {
        flat.push_back(p.x);
        flat.push_back(p.y);
    }
    append_real_array(out, flat);
    out += ",\n\"triangles\":[";
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        if (i) out += ',';
        const auto& t = mesh.triangles[i];
        out += std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]);
    }
    out += "],\n\"boundary\":{\"edges\":[";
    for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(mesh.boundary_edges[i].a) + "," +
               std::to_string(mesh.boundary_edges[i].b);
    }
    out += "],\"markers\":[";
    for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i) {
        if (i) out += ',';
        out += quote(mesh.boundary_edges[i].marker);
    }
    out += "]},\n\"meta\":{\"R0\":" + format_real(mesh.radius) +
           ",\"h\":" + format_real(mesh.target_h) +
           ",\"grading\":" + format_real(mesh.grading) + "}\n}\n";
    return out;
}

Mesh mesh_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Mesh m;
    const auto& nodes = j.at("nodes");
    if (nodes.size() % 2 != 0) throw std::invalid_argument("mesh json: odd coordinate count");
    for (std::size_t i = 0; i < nodes.size(); i += 2)
        m.nodes.push_back({nodes[i].get<double>(), nodes[i + 1].get<double>()});
    const auto& tris = j.at("triangles");
    if (tris.size() % 3 != 0) throw std::invalid_argument("mesh json: bad triangle list");
    for (std::size_t i = 0; i < tris.size(); i += 3)
        m.triangles.push_back(
            {tris[i].get<int>(), tris[i + 1].get<int>(), tris[i + 2].get<int>()});
    const auto& b = j.at("boundary");
    const auto& edges = b.at("edges");
    const auto& markers = b.at("markers");
    if (edges.size() != 2 * markers.size())
        throw std::invalid_argument("mesh json: boundary size mismatch");
    for (std::size_t i = 0; i < markers.size(); ++i)
        m.boundary_edges.push_back({edges[2 * i].get<int>(), edges[2 * i + 1].get<int>(),
                                    markers[i].get<std::string>()});
    const auto& meta = j.at("meta");
    m.radius = meta.at("R0").get<double>();
    m.target_h = meta.at("h").get<double>();
    m.grading = meta.at("grading").get<double>();
    m.validate();
    return m;
}

std::string field_to_json(const Field& field, const WeightSpec& weight) {
    std::string out = "{\n\"mesh_hash\":\"" + hash_string(field.hash) + "\",\n\"values\":";
    append_real_array(out, field.values);
    out += ",\n\"weight\":{\"alpha\":" + format_real(weight.alpha) +
           ",\"epsilon\":" + format_real(weight.epsilon) + "},\n\"provenance\":{\"problem\":" +
           quote(field.provenance.problem) +
           ",\"solver_tol\":" + format_real(field.provenance.solver_tol) +
           ",\"iterations\":" + std::to_string(field.provenance.iterations) + "}\n}\n";
    return out;
}

Field field_from_json(const std::string& text, const Mesh& mesh, WeightSpec* weight) {
    const auto j = nlohmann::json::parse(text);
    Field f;
    f.mesh = &mesh;
    f.hash = std::stoull(j.at("mesh_hash").get<std::string>(), nullptr, 16);
    if (f.hash != mesh_hash(mesh))
        throw std::invalid_argument("field json: mesh hash mismatch");
    for (const auto& v : j.at("values")) f.values.push_back(v.get<double>());
    const auto& prov = j.at("provenance");
    f.provenance.problem = prov.at("problem").get<std::string>();
    f.provenance.solver_tol = prov.at("solver_tol").get<double>();
    f.provenance.iterations = prov.at("iterations").get<int>();
    if (weight) {
        weight->alpha = j.at("weight").at("alpha").get<double>();
        weight->epsilon = j.at("weight").at("epsilon").get<double>();
    }
    f.validate();
    return f;
}

std::string report_to_json(const CheckReport& report) {
    std::string out = "{\n\"name\":" + quote(report.name) +
                      ",\n\"passed\":" + (report.passed ? "true" : "false") +
                      ",\n\"worst_margin\":" + format_real(report.worst_margin) +
                      ",\n\"fitted_constants\":{";
    bool first = true;
    for (const auto& [k, v] : report.fitted_constants) {
        if (!first) out += ',';
        first = false;
        out += quote(k) + ":" + format_real(v);
    }
    out += "},\n\"rows\":[";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        if (i) out += ',';
        out += "{\"case\":" + quote(report.rows[i].label) +
               ",\"margin\":" + format_real(report.rows[i].margin) +
               ",\"pass\":" + (report.rows[i].pass ? "true" : "false") + "}";
    }
    out += "]\n}\n";
    return out;
}

std::string report_to_csv(const CheckReport& report) {
    std::string out = "case,margin,pass\n";
    for (const auto& row : report.rows) {
        std::string label = row.label;
        for (auto& c : label)
            if (c == ',') c = ';';
        out += label + "," + format_real(row.margin) + "," + (row.pass ? "1" : "0") + "\n";
    }
    return out;
}

std::string plan_to_json(const ChainPlan& plan) {
    std::string out = "{\n\"r0\":" + format_real(plan.r0) + ",\n\"centers\":[";
    for (std::size_t i = 0; i < plan.centers.size(); ++i) {
        if (i) out += ',';
        out += "[" + format_real(plan.centers[i].x) + "," + format_real(plan.centers[i].y) +
               "]";
    }
    out += "],\n\"case_tag\":";
    out += (plan.case_tag == ChainPlan::CaseTag::OriginInsideOmega)
               ? "\"origin-inside-omega\""
               : "\"origin-outside-omega\"";
    out += ",\n\"per_step_mu\":";
    append_real_array(out, plan.per_step_mu);
    out += ",\n\"composite_mu\":" + format_real(plan.composite_mu);
    if (plan.annulus_step) {
        const auto& s = *plan.annulus_step;
        out += ",\n\"annulus_step\":{\"r_inner\":" + format_real(s.r_inner) +
               ",\"r_outer\":" + format_real(s.r_outer) + ",\"maximizer\":[" +
               format_real(s.maximizer.x) + "," + format_real(s.maximizer.y) +
               "],\"cover_count\":" + std::to_string(s.cover_count) + "}";
    }
    out += "\n}\n";
    return out;
}

std::string profile_to_csv(const std::vector<SphereSample>& samples) {
    std::string out = "r,H,D,Phi,R_eps\n";
    for (const auto& s : samples) {
        out += format_real(s.r) + "," + format_real(s.H) + "," + format_real(s.D) + "," +
               format_real(s.Phi) + "," + format_real(s.R_eps) + "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace dfem
