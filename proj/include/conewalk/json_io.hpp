#pragma once

#include <json.hpp>

#include "conewalk/geometric.hpp"
#include "conewalk/spectral.hpp"
#include "conewalk/type_system.hpp"

namespace conewalk {

using Json = nlohmann::ordered_json;

inline Json to_json(const TypeSystem& ts) {
  Json j;
  j["type_count"] = ts.type_count;
  j["degree"] = ts.degree;
  Json triplets = Json::array();
  for (const Triplet& t : ts.successors) triplets.push_back({t.row, t.col, t.count});
  j["triplets"] = std::move(triplets);
  j["labels"] = ts.labels;
  return j;
}

inline TypeSystem type_system_from_json(const Json& j) {
  TypeSystem ts;
  ts.type_count = j.at("type_count").get<std::int64_t>();
  ts.degree = j.at("degree").get<std::int64_t>();
  for (const auto& item : j.at("triplets"))
    ts.successors.push_back({item.at(0).get<std::int32_t>(), item.at(1).get<std::int32_t>(),
                             item.at(2).get<std::int64_t>()});
  if (j.contains("labels")) ts.labels = j.at("labels").get<std::vector<std::string>>();
  return ts;
}

inline Json to_json(const EstimateReport& r) {
  Json j;
  j["bound"] = r.bound;
  j["lambda"] = r.lambda;
  j["growth"] = r.growth;
  j["matrix_size"] = r.matrix_size;
  j["power_iterations"] = r.power_iterations;
  j["tolerance_used"] = r.tolerance_used;
  j["elapsed_seconds"] = r.elapsed_seconds;
  j["lambda_converged"] = r.lambda_converged;
  return j;
}

inline Json to_json(const GeometricVerification& v) {
  Json j;
  j["phi_min"] = v.phi_min;
  j["bound"] = v.bound;
  j["bound_defect"] = v.bound_defect;
  j["symmetry_defect"] = v.symmetry_defect;
  j["convexity_defect"] = v.convexity_defect;
  j["bound_tol"] = v.bound_tol;
  j["symmetry_tol"] = v.symmetry_tol;
  j["convexity_tol"] = v.convexity_tol;
  j["bound_ok"] = v.bound_ok;
  j["symmetry_ok"] = v.symmetry_ok;
  j["convexity_ok"] = v.convexity_ok;
  j["passed"] = v.passed();
  return j;
}

} // namespace conewalk
