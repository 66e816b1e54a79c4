#pragma once

#include <string>

#include "dfem/checks.hpp"
#include "dfem/field.hpp"
#include "dfem/functionals.hpp"
#include "dfem/propagation.hpp"

namespace dfem {

/// All reals in the on-disk formats carry 17 significant digits, enough to
/// round-trip IEEE doubles exactly.
std::string format_real(double v);

std::string mesh_to_json(const Mesh& mesh);
Mesh mesh_from_json(const std::string& text);

std::string field_to_json(const Field& field, const WeightSpec& weight);
/// Re-attaches the field to `mesh`; throws if the stored hash disagrees.
Field field_from_json(const std::string& text, const Mesh& mesh, WeightSpec* weight = nullptr);

std::string report_to_json(const CheckReport& report);
std::string report_to_csv(const CheckReport& report); // case,margin,pass

std::string plan_to_json(const ChainPlan& plan);

std::string profile_to_csv(const std::vector<SphereSample>& samples);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace dfem
