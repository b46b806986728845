#include "snrkit/report.hpp"

#include <algorithm>

namespace snrkit {

namespace {

template <typename T>
Json or_null(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json ratio_value(const auto& opt) { return opt ? Json(opt->ratio) : Json(nullptr); }

Json ssc_pair(const SkillRatio& r) {
  return Json{{"forecast", to_json(r.forecast)}, {"recalibrated", to_json(r.recalibrated)}};
}

}  // namespace

Json to_json(const SelfSkill& s) {
  return Json{{"numerator", s.numerator}, {"denominator", s.denominator}, {"value", s.value}};
}

Json to_json(const RecalibrationMap& map) {
  Json j{{"family", std::string(family_name(map.family))}, {"a", map.a}, {"b", map.b}};
  if (map.clamp_epsilon) j["epsilon"] = *map.clamp_epsilon;
  return j;
}

Json to_json(const FitReport& fit) {
  Json j = to_json(fit.map);
  j["objective_initial"] = fit.objective_initial;
  j["objective_final"] = fit.objective_final;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  return j;
}

Json to_json(const SpreadErrorTerms& t) {
  return Json{{"mean_ensemble_variance", t.mean_ensemble_variance},
              {"mean_recalibrated_error", t.mean_recalibrated_error},
              {"mean_squared_mean_shift", t.mean_squared_mean_shift}};
}

Json to_json(const DiagnosticsReport& r) {
  Json j;
  j["rpc_classical"] = or_null(r.rpc_classical);
  j["rss_crps"] = ratio_value(r.crps);
  j["rss_ls"] = ratio_value(r.ls);
  j["rss_quadratic"] = ratio_value(r.quadratic);

  Json ssc;
  ssc["crps"] = r.crps ? ssc_pair(*r.crps) : Json(nullptr);
  ssc["ls"] = r.ls ? ssc_pair(*r.ls) : Json(nullptr);
  ssc["quadratic"] = r.quadratic ? ssc_pair(*r.quadratic) : Json(nullptr);
  j["ssc"] = std::move(ssc);

  Json maps;
  maps["mean_shift_crps"] = r.crps ? to_json(r.crps->fit) : Json(nullptr);
  maps["logit_ls"] = r.ls ? to_json(r.ls->fit) : Json(nullptr);
  maps["least_squares"] = r.quadratic ? to_json(r.quadratic->map) : Json(nullptr);
  j["recalibration"] = std::move(maps);

  j["spread_error"] = r.spread_error ? to_json(*r.spread_error) : Json(nullptr);
  j["complete"] = r.complete();
  Json failures = Json::array();
  for (const auto& f : r.failures)
    failures.push_back(Json{
        {"quantity", f.quantity}, {"code", std::string(code_name(f.code))}, {"message", f.message}});
  j["failures"] = std::move(failures);
  return j;
}

Json to_json(const BootstrapDistribution& d, std::span<const double> probs) {
  Json j;
  j["point_estimate"] = d.point_estimate;
  j["replicates_requested"] = d.requested;
  j["replicates_succeeded"] = d.replicates.size();
  j["replicates_failed"] = d.failures.size();
  Json failures = Json::array();
  for (const auto& f : d.failures)
    failures.push_back(Json{{"replicate", f.replicate},
                            {"code", std::string(code_name(f.code))},
                            {"message", f.message}});
  j["failures"] = std::move(failures);
  const auto q = quantiles(d, probs);
  Json qs = Json::array();
  for (std::size_t i = 0; i < probs.size(); ++i)
    qs.push_back(Json{{"prob", probs[i]}, {"value", q[i]}});
  j["quantiles"] = std::move(qs);
  return j;
}

Json error_json(ErrorCode code, const std::string& message) {
  return Json{{"error", Json{{"code", std::string(code_name(code))}, {"message", message}}}};
}

Json error_json(const std::vector<DiagnosticFailure>& failures, const std::string& message) {
  Json codes = Json::array();
  Json quantities = Json::array();
  for (const auto& f : failures) {
    const std::string name(code_name(f.code));
    if (std::find(codes.begin(), codes.end(), name) == codes.end()) codes.push_back(name);
    quantities.push_back(f.quantity);
  }
  Json e{{"code", failures.empty() ? Json(nullptr) : codes.front()},
         {"codes", std::move(codes)},
         {"quantities", std::move(quantities)},
         {"message", message}};
  return Json{{"error", std::move(e)}};
}

}  // namespace snrkit
