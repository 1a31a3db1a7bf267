#include "pellel/report_json.hpp"

namespace pellel {

void to_json(nlohmann::json& j, const SolveReport& r) {
  j = {{"iterations", r.iterations},
       {"relative_residual", r.relative_residual},
       {"solution_norm2", r.solution_norm2},
       {"rhs_norm2", r.rhs_norm2},
       {"ratio", r.ratio},
       {"bound", r.bound},
       {"converged", r.converged},
       {"range_defect", r.range_defect},
       {"status", r.status},
       {"residual_history", r.residual_history}};
}

void to_json(nlohmann::json& j, const PipelineReport& r) {
  j = {{"real_input", r.real_input},
       {"c", r.c},
       {"c_levi", r.c_levi},
       {"slack", r.slack},
       {"h", r.h},
       {"norms",
        {{"f2", r.norm_f2},
         {"f2_real", r.norm_f2_real},
         {"v2", r.norm_v2},
         {"w2", r.norm_w2},
         {"u2", r.norm_u2}}},
       {"bounds", {{"poincare", r.bound_poincare}, {"dbar", r.bound_dbar}, {"main", r.bound_main}}},
       {"ratios", {{"poincare", r.ratio_poincare}, {"dbar", r.ratio_dbar}, {"main", r.ratio_main}}},
       {"residuals",
        {{"dv", r.residual_dv},
         {"dbar", r.residual_dbar},
         {"conjugate", r.residual_conj},
         {"part20", r.residual_20},
         {"part02", r.residual_02},
         {"final", r.residual}}},
       {"imag_u", r.imag_u},
       {"within_bound", r.within_bound},
       {"poincare_stages", r.poincare_stages},
       {"dbar_stages", r.dbar_stages}};
}

void to_json(nlohmann::json& j, const CorollaryResult& r) {
  j = {{"c_omega", r.c_omega},
       {"unweighted_norm_u2", r.unweighted_norm_u2},
       {"unweighted_norm_f2", r.unweighted_norm_f2},
       {"ratio", r.ratio},
       {"within_bound", r.within_bound},
       {"pipeline", r.pipeline}};
}

void to_json(nlohmann::json& j, const IdentityCheck& r) {
  j = {{"max_deviation", r.max_deviation},
       {"scale", r.scale},
       {"relative", r.relative()},
       {"points", r.points}};
}

void to_json(nlohmann::json& j, const BochnerTerms& r) {
  j = {{"tstar2", r.tstar2},     {"dalpha2", r.dalpha2}, {"hessian", r.hessian},
       {"gradient", r.gradient}, {"boundary", r.boundary}, {"norm_alpha2", r.norm_alpha2},
       {"lhs", r.lhs},           {"rhs", r.rhs},           {"deviation", r.deviation}};
}

void to_json(nlohmann::json& j, const BasicEstimate& r) {
  j = {{"lhs", r.lhs},
       {"c", r.c},
       {"norm_alpha2", r.norm_alpha2},
       {"margin", r.margin},
       {"relative_margin", r.relative_margin}};
}

}  // namespace pellel
